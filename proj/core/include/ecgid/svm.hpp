#ifndef ECGID_SVM_HPP
#define ECGID_SVM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ecgid::svm {

enum class KernelVariant { rbf, polynomial };

struct KernelSpec {
    KernelVariant variant = KernelVariant::rbf;
    double sigma = 0.5;  // rbf width
    double a = 1.0;      // polynomial scale
    double b = 0.0;      // polynomial offset
    double degree = 2.0; // polynomial exponent, fractional allowed if base >= 0
};

///   rbf:        exp(-||x - x'||^2 / (2 sigma^2))
///   polynomial: (a <x, x'> + b)^d
/// A fractional degree with a negative base has no real value and throws.
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

struct TrainConfig {
    double C = 1000.0;
    double kkt_tolerance = 1e-3;
    int max_passes_without_change = 10;
    long max_iterations = 1000000;
    std::size_t kernel_cache_rows = 1024;  // LRU budget, in cached rows
};

struct BinarySvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_weights;  // alpha_i * y_i per support vector
    double bias = 0.0;
    KernelSpec kernel;
    bool converged = true;
    long iterations = 0;
};

/// Soft-margin dual
///   max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
///   s.t. 0 <= alpha <= C,  sum(alpha_i y_i) = 0
/// solved by SMO with maximal-KKT-violating pair selection. Bias is the
/// average over unbounded support vectors. Labels must be -1/+1 with both
/// classes present. An iteration-capped run comes back flagged unconverged.
BinarySvmModel train_binary(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y, const KernelSpec& kernel,
                            const TrainConfig& config);

/// sum_i dual_weights[i] * K(sv_i, x) + bias
double decision_value(const BinarySvmModel& model, std::span<const double> x);

/// Dual objective of a multiplier vector for a given problem (used by tests
/// and the solver's own bookkeeping).
double dual_objective(const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const KernelSpec& kernel,
                      const std::vector<double>& alpha);

/// Raw multipliers of a training run, for optimality checks.
struct SmoSolution {
    std::vector<double> alpha;
    double bias = 0.0;
    bool converged = true;
    long iterations = 0;
};
SmoSolution smo_solve(const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const KernelSpec& kernel,
                      const TrainConfig& config);

/// Per-feature z-score parameters, population (n) divisor. Zero-variance
/// features are masked out instead of dividing by zero.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<std::uint8_t> keep;  // mask, 1 = retained

    std::vector<double> apply(std::span<const double> x) const;
    std::size_t retained_count() const;
};

Standardization fit_standardization(const std::vector<std::vector<double>>& X);

enum class MulticlassScheme { one_vs_one, one_vs_rest };

struct PairwiseModel {
    int first = 0;    // label index, +1 side
    int second = -1;  // label index, -1 side; -1 means "rest" (one-vs-rest)
    BinarySvmModel model;
};

struct MulticlassModel {
    std::vector<std::string> labels;  // sorted, index space for pairwise
    Standardization standardization;
    std::vector<PairwiseModel> pairwise;
    MulticlassScheme scheme = MulticlassScheme::one_vs_one;
    KernelSpec kernel;
    double C = 1000.0;
    std::string feature_group;
    std::vector<std::string> columns;
    int unconverged_count = 0;
};

/// Fit standardization on X, then train one binary model per unordered label
/// pair (or per label, one-vs-rest). threads = 0 picks the hardware count.
MulticlassModel train_multiclass(const std::vector<std::vector<double>>& X,
                                 const std::vector<std::string>& row_labels,
                                 const KernelSpec& kernel, const TrainConfig& config,
                                 MulticlassScheme scheme = MulticlassScheme::one_vs_one,
                                 int threads = 0);

/// Majority vote over pairwise decisions; ties go to the largest sum of
/// |decision| among classifiers voting for a tied label, then label order.
std::string predict(const MulticlassModel& model, std::span<const double> x);

// Versioned JSON serialization; floats round-trip bit-exact through the
// shortest-representation printer.
std::string model_to_json(const MulticlassModel& model);
MulticlassModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const MulticlassModel& model);
MulticlassModel load_model(const std::filesystem::path& path);

}  // namespace ecgid::svm

#endif
