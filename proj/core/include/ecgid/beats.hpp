#ifndef ECGID_BEATS_HPP
#define ECGID_BEATS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecgid/wfdb.hpp"

namespace ecgid::beats {

struct WindowSpec {
    double pre_r_ms = 50.0;
    double post_r_ms = 100.0;
    int hermite_half_width = 100;  // M; hermite window holds 2M+1 samples
};

struct Heartbeat {
    std::string subject_label;
    int beat_ordinal = 0;  // position within the subject's record, time order
    long r_index = 0;
    double fs = 0.0;
    bool truncated = false;   // window ran past a record edge (zero-filled)
    bool degenerate = false;  // constant hermite window, not normalizable
    std::vector<double> qs_window;       // millivolts
    std::vector<double> hermite_window;  // zero-mean, unit L2 norm; empty if degenerate
};

/// Cut the QS analysis window: round(pre_ms*fs) samples before R and
/// round(post_ms*fs) samples from R onward, indices
/// [r - n_pre, r + n_post - 1]. Out-of-record positions are zero-filled and
/// *truncated is set.
std::vector<double> segment_qs(std::span<const double> channel_mv, long r_index,
                               const WindowSpec& spec, double fs, bool* truncated);

/// Raw 2M+1 window at indices r-M .. r+M, zero-filled at the edges.
std::vector<double> extract_hermite_window(std::span<const double> channel_mv,
                                           long r_index, int M, bool* truncated);

/// (x - mean) / ||x - mean||_2. nullopt for constant windows.
std::optional<std::vector<double>> normalize_beat(std::span<const double> raw);

/// Cut every annotated beat of one record channel. Degenerate beats are kept
/// and flagged so beat counts stay equal to annotation counts.
std::vector<Heartbeat> cut_beats(const wfdb::SignalRecord& record,
                                 const wfdb::AnnotationSet& beat_anns, int channel,
                                 const WindowSpec& spec, const std::string& label);

}  // namespace ecgid::beats

#endif
