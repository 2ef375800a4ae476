#ifndef ECGID_CONFIG_HPP
#define ECGID_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "ecgid/svm.hpp"

namespace ecgid::config {

/// Every tunable of the pipeline as a flat key/value document. Defaults are
/// the reference operating point (50/100 ms windows, M=100, delta=10, L=60,
/// rbf sigma=0.5, C=1000, 2/3 chronological split).
struct PipelineConfig {
    // beats
    double pre_ms = 50.0;
    double post_ms = 100.0;
    int M = 100;
    // hermite
    int L = 60;
    double delta = 10.0;
    // kernel
    std::string kernel = "rbf";  // rbf | polynomial
    double sigma = 0.5;
    double poly_a = 1.0;
    double poly_b = 0.0;
    double poly_degree = 2.0;
    double C = 1000.0;
    // solver
    double kkt_tolerance = 1e-3;
    long max_iterations = 1000000;
    int max_passes_without_change = 10;
    int cache_rows = 1024;
    // protocol
    double split_fraction = 2.0 / 3.0;
    std::string multiclass = "ovo";  // ovo | ovr
    bool honest_cv = false;
    bool exclude_truncated = true;
    bool exclude_degenerate = true;
    // ingest
    int channel = 0;
    double csv_fs = 360.0;
    // synth
    int synth_subjects = 18;
    double synth_duration_s = 120.0;
    double synth_fs = 360.0;
    double synth_noise_frac = 0.05;
    double synth_jitter_samples = 2.0;
    // run
    std::uint64_t seed = 7;
    int threads = 0;
    bool report_timing = false;  // wall times in report.json break determinism
};

/// Parse `key = value` lines ('#' comments). Unknown keys are rejected.
PipelineConfig load_file(const std::filesystem::path& path);
PipelineConfig parse(const std::string& text);

/// Apply one `key=value` override (CLI flags reuse the same key space).
void set_key(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Check every value against its module's preconditions; throws ConfigError.
void validate(const PipelineConfig& cfg);

svm::KernelSpec kernel_spec(const PipelineConfig& cfg);
svm::TrainConfig train_config(const PipelineConfig& cfg);

}  // namespace ecgid::config

#endif
