#ifndef ECGID_SYNTH_HPP
#define ECGID_SYNTH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ecgid/wfdb.hpp"

namespace ecgid::synth {

struct GaussianBump {
    double center_ms = 0.0;  // offset from the R position
    double width_ms = 10.0;
    double amplitude_mv = 1.0;
};

struct SubjectSpec {
    std::string label;
    std::array<GaussianBump, 3> bumps;  // bump 0 is the R spike at offset 0
    double heart_rate_bpm = 70.0;
    double noise_std_mv = 0.0;
    double jitter_std_samples = 0.0;
};

void validate(const SubjectSpec& spec);

/// Deterministic bank of k mutually distinct beat templates. Noise std is
/// set to noise_frac of each subject's peak amplitude.
std::vector<SubjectSpec> default_subject_bank(int k, std::uint64_t seed,
                                              double noise_frac = 0.05,
                                              double jitter_std_samples = 2.0);

struct SyntheticRecord {
    wfdb::SignalRecord record;  // single channel, gain 1 baseline 0, mV values
    wfdb::AnnotationSet annotations;
};

/// Template repeated at the heart rate with per-beat jitter plus white noise;
/// annotations mark the jittered template centers. Deterministic in
/// (spec list, duration, fs, seed).
std::vector<SyntheticRecord> generate(const std::vector<SubjectSpec>& specs,
                                      double duration_s, double fs, std::uint64_t seed);

/// `sample,mv,r_peak` text with a `# fs=` comment header, loadable by
/// wfdb::load_csv.
std::string to_csv(const SyntheticRecord& rec);

}  // namespace ecgid::synth

#endif
