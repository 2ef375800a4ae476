#ifndef ECGID_EVAL_HPP
#define ECGID_EVAL_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecgid/features.hpp"
#include "ecgid/svm.hpp"

namespace ecgid::eval {

/// A named set of feature columns. Base groups: amplitude {Pp,Pn},
/// surface {ArP,ArN,Ar}, interval {No,Ima,Imi}, slope {S1,S2},
/// hpe {c0..c(L-1)}. Unions join with '+'; `all` is the four morphological
/// groups. Names canonicalize to a fixed group order.
struct FeatureGroup {
    std::string name;
    std::vector<std::string> columns;
};

FeatureGroup resolve_group(const std::string& spec, int hpe_count = 60);

struct SplitResult {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

/// Temporal holdout: per subject, the first ceil(n * train_fraction) beats
/// (by ordinal) train, the rest test. No shuffling. Subjects need >= 3 beats.
SplitResult chronological_split(const features::FeatureTable& table,
                                double train_fraction = 2.0 / 3.0);

struct EvalOptions {
    double train_fraction = 2.0 / 3.0;
    svm::TrainConfig train;
    svm::MulticlassScheme scheme = svm::MulticlassScheme::one_vs_one;
    int threads = 0;
    bool honest_cv = false;  // pick grid winner on an inner split of train
};

struct ExperimentResult {
    std::string feature_group;
    svm::KernelSpec kernel;
    double C = 0.0;
    double global_rate = 0.0;  // % of test beats assigned to the right subject
    std::vector<std::string> labels;
    std::vector<std::vector<long>> confusion;  // [true][predicted]
    long train_count = 0;
    long test_count = 0;
    double wall_ms = 0.0;
    double subject_vote_rate = 0.0;  // secondary: majority vote per subject
    int unconverged_pairs = 0;
};

ExperimentResult run_experiment(const features::FeatureTable& table,
                                const FeatureGroup& group, const svm::KernelSpec& kernel,
                                const EvalOptions& options);

struct Grid {
    std::vector<double> rbf_sigma;    // rbf cells: sigma x C
    std::vector<double> poly_degree;  // polynomial cells: degree x C, a=1 b=0
    std::vector<double> C;
};

/// sigma {0.25 0.5 0.75 1.0} x C {10 100 1000}, plus polynomial d {1 2}.
Grid default_grid();

struct GridResult {
    std::vector<ExperimentResult> rows;
    std::size_t best_index = 0;  // max rate; ties to smaller C then smaller sigma
};

GridResult grid_search(const features::FeatureTable& table, const FeatureGroup& group,
                       const Grid& grid, const EvalOptions& options);

/// The 13 standard feature-group combinations with published reference rates.
struct ReferenceRow {
    std::string group;
    double reference_rate = 0.0;
};
const std::vector<ReferenceRow>& reference_rows();

struct ReferenceTable {
    std::vector<ExperimentResult> experiments;  // one per reference row, same order
    std::vector<double> deltas;                 // measured - reference
};

/// Run every reference row at fixed kernel parameters and report side-by-side
/// deltas.
ReferenceTable reference_table(const features::FeatureTable& table,
                               const svm::KernelSpec& kernel, const EvalOptions& options);

struct EvalReport {
    std::uint64_t seed = 0;
    bool has_seed = false;
    features::ExclusionCounts excluded;
    std::vector<ExperimentResult> experiments;
    std::optional<std::size_t> best_index;
    std::vector<double> reference_rates;  // aligned with experiments when set
    bool include_timing = false;          // wall_ms serialization is opt-in
};

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
void save_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport load_report(const std::filesystem::path& path);

std::string render_csv(const EvalReport& report);
std::string render_markdown(const EvalReport& report);

}  // namespace ecgid::eval

#endif
