#include "ecgid/svm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <list>
#include <memory>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "ecgid/common.hpp"

namespace ecgid::svm {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

bool is_integral(double d) { return d == std::floor(d); }

/// LRU cache of kernel rows keyed by training index. Rows are shared_ptrs so
/// a row survives eviction while a caller still holds it.
class KernelRowCache {
public:
    KernelRowCache(const std::vector<std::vector<double>>& X, const KernelSpec& kernel,
                   std::size_t budget_rows)
        : X_(X), kernel_(kernel), budget_(std::max<std::size_t>(budget_rows, 2)) {}

    std::shared_ptr<const std::vector<double>> row(int i) {
        if (auto it = map_.find(i); it != map_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second;
        }
        auto r = std::make_shared<std::vector<double>>(X_.size());
        for (size_t j = 0; j < X_.size(); ++j)
            (*r)[j] = kernel_eval(kernel_, X_[static_cast<size_t>(i)], X_[j]);
        lru_.emplace_front(i, r);
        map_[i] = lru_.begin();
        if (map_.size() > budget_) {
            map_.erase(lru_.back().first);
            lru_.pop_back();
        }
        return r;
    }

private:
    const std::vector<std::vector<double>>& X_;
    KernelSpec kernel_;
    std::size_t budget_;
    std::list<std::pair<int, std::shared_ptr<const std::vector<double>>>> lru_;
    std::unordered_map<int, decltype(lru_)::iterator> map_;
};

void run_tasks(int threads, std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("kernel arguments differ in dimension: " +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    switch (spec.variant) {
        case KernelVariant::rbf:
            return std::exp(-squared_distance(x, y) / (2.0 * spec.sigma * spec.sigma));
        case KernelVariant::polynomial: {
            const double base = spec.a * dot(x, y) + spec.b;
            if (base < 0 && !is_integral(spec.degree))
                throw std::domain_error(
                    "polynomial kernel with fractional degree needs a non-negative base; "
                    "got base " + std::to_string(base));
            return std::pow(base, spec.degree);
        }
    }
    throw std::logic_error("unknown kernel variant");
}

SmoSolution smo_solve(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                      const KernelSpec& kernel, const TrainConfig& config) {
    const int n = static_cast<int>(X.size());
    if (n < 2 || y.size() != X.size())
        throw DataError("binary training needs at least 2 rows with labels");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw DataError("labels must be -1 or +1");
    }
    if (!has_pos || !has_neg) throw DataError("binary training needs both classes present");
    if (config.C <= 0) throw ConfigError("C must be positive");
    if (config.kkt_tolerance <= 0) throw ConfigError("kkt tolerance must be positive");

    const double C = config.C;
    const double tol = config.kkt_tolerance;
    const double snap = 1e-12 * std::max(C, 1.0);

    KernelRowCache cache(X, kernel, config.kernel_cache_rows);
    std::vector<double> diag(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) diag[static_cast<size_t>(i)] = kernel_eval(kernel, X[static_cast<size_t>(i)], X[static_cast<size_t>(i)]);

    // G_t = (Q alpha)_t - 1; alpha = 0 makes G = -1. The working quantity is
    // v_t = -y_t G_t; KKT feasibility is max_{I_up} v <= min_{I_low} v.
    std::vector<double> alpha(static_cast<size_t>(n), 0.0);
    std::vector<double> grad(static_cast<size_t>(n), -1.0);

    auto in_up = [&](int t) {
        return y[static_cast<size_t>(t)] == 1 ? alpha[static_cast<size_t>(t)] < C
                                              : alpha[static_cast<size_t>(t)] > 0;
    };
    auto in_low = [&](int t) {
        return y[static_cast<size_t>(t)] == -1 ? alpha[static_cast<size_t>(t)] < C
                                               : alpha[static_cast<size_t>(t)] > 0;
    };
    auto violation_v = [&](int t) { return -y[static_cast<size_t>(t)] * grad[static_cast<size_t>(t)]; };

    SmoSolution sol;
    sol.converged = false;
    long iter = 0;
    int stalls = 0;
    double m_up = 0, m_low = 0;

    for (; iter < config.max_iterations; ++iter) {
        int i = -1, j = -1;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t) {
            const double v = violation_v(t);
            if (in_up(t) && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low(t) && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (m_up - m_low <= tol) {
            sol.converged = true;
            break;
        }

        const auto Ki = cache.row(i);
        const auto Kj = cache.row(j);
        const double yi = y[static_cast<size_t>(i)], yj = y[static_cast<size_t>(j)];
        const double Ei = yi * grad[static_cast<size_t>(i)];
        const double Ej = yj * grad[static_cast<size_t>(j)];

        double eta = diag[static_cast<size_t>(i)] + diag[static_cast<size_t>(j)] -
                     2.0 * (*Ki)[static_cast<size_t>(j)];
        if (eta < 1e-12) eta = 1e-12;

        double lo, hi;
        const double ai = alpha[static_cast<size_t>(i)], aj = alpha[static_cast<size_t>(j)];
        if (yi != yj) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(C, C + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - C);
            hi = std::min(C, ai + aj);
        }

        double aj_new = std::clamp(aj + yj * (Ei - Ej) / eta, lo, hi);
        double delta_j = aj_new - aj;
        if (std::abs(delta_j) < snap) {
            if (++stalls >= config.max_passes_without_change) break;
            continue;
        }
        stalls = 0;
        double ai_new = ai - yi * yj * delta_j;
        if (ai_new < snap) ai_new = 0;
        if (ai_new > C - snap) ai_new = C;
        if (aj_new < snap) aj_new = 0;
        if (aj_new > C - snap) aj_new = C;
        const double di = ai_new - ai, dj = aj_new - aj;
        alpha[static_cast<size_t>(i)] = ai_new;
        alpha[static_cast<size_t>(j)] = aj_new;
        for (int t = 0; t < n; ++t)
            grad[static_cast<size_t>(t)] +=
                y[static_cast<size_t>(t)] * (di * yi * (*Ki)[static_cast<size_t>(t)] +
                                             dj * yj * (*Kj)[static_cast<size_t>(t)]);
    }
    sol.iterations = iter;

    // Bias: average of -y G over unbounded support vectors, else the midpoint
    // of the feasible interval [m_low, m_up].
    double b_sum = 0;
    int b_count = 0;
    for (int t = 0; t < n; ++t) {
        const double a = alpha[static_cast<size_t>(t)];
        if (a > 0 && a < C) {
            b_sum += violation_v(t);
            ++b_count;
        }
    }
    sol.bias = b_count > 0 ? b_sum / b_count : 0.5 * (m_up + m_low);
    sol.alpha = std::move(alpha);
    return sol;
}

BinarySvmModel train_binary(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y, const KernelSpec& kernel,
                            const TrainConfig& config) {
    auto sol = smo_solve(X, y, kernel, config);
    BinarySvmModel model;
    model.kernel = kernel;
    model.bias = sol.bias;
    model.converged = sol.converged;
    model.iterations = sol.iterations;
    for (size_t t = 0; t < X.size(); ++t) {
        if (sol.alpha[t] <= 0) continue;  // prune non-support rows
        model.support_vectors.push_back(X[t]);
        model.dual_weights.push_back(sol.alpha[t] * y[t]);
    }
    return model;
}

double decision_value(const BinarySvmModel& model, std::span<const double> x) {
    double f = model.bias;
    for (size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.dual_weights[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
    return f;
}

double dual_objective(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                      const KernelSpec& kernel, const std::vector<double>& alpha) {
    const size_t n = X.size();
    double obj = 0;
    for (size_t i = 0; i < n; ++i) obj += alpha[i];
    for (size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0) continue;
        for (size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0) continue;
            obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * kernel_eval(kernel, X[i], X[j]);
        }
    }
    return obj;
}

std::vector<double> Standardization::apply(std::span<const double> x) const {
    if (x.size() != mean.size())
        throw std::invalid_argument("standardization expects " + std::to_string(mean.size()) +
                                    " features, got " + std::to_string(x.size()));
    std::vector<double> out;
    out.reserve(retained_count());
    for (size_t i = 0; i < x.size(); ++i)
        if (keep[i]) out.push_back((x[i] - mean[i]) / stddev[i]);
    return out;
}

std::size_t Standardization::retained_count() const {
    std::size_t c = 0;
    for (auto k : keep) c += k;
    return c;
}

Standardization fit_standardization(const std::vector<std::vector<double>>& X) {
    if (X.empty()) throw DataError("cannot standardize an empty training set");
    const size_t dim = X[0].size();
    Standardization s;
    s.mean.assign(dim, 0.0);
    s.stddev.assign(dim, 0.0);
    s.keep.assign(dim, 1);

    const double n = static_cast<double>(X.size());
    for (const auto& row : X) {
        if (row.size() != dim) throw DataError("ragged feature matrix");
        for (size_t i = 0; i < dim; ++i) s.mean[i] += row[i];
    }
    for (size_t i = 0; i < dim; ++i) s.mean[i] /= n;
    for (const auto& row : X)
        for (size_t i = 0; i < dim; ++i) {
            const double d = row[i] - s.mean[i];
            s.stddev[i] += d * d;
        }
    for (size_t i = 0; i < dim; ++i) {
        s.stddev[i] = std::sqrt(s.stddev[i] / n);  // population divisor
        if (s.stddev[i] <= 1e-12 * std::max(1.0, std::abs(s.mean[i]))) {
            s.keep[i] = 0;
            s.stddev[i] = 1.0;  // placeholder, never used for masked features
        }
    }
    return s;
}

MulticlassModel train_multiclass(const std::vector<std::vector<double>>& X,
                                 const std::vector<std::string>& row_labels,
                                 const KernelSpec& kernel, const TrainConfig& config,
                                 MulticlassScheme scheme, int threads) {
    if (X.size() != row_labels.size()) throw DataError("row/label count mismatch");
    if (X.empty()) throw DataError("empty training set");

    MulticlassModel model;
    model.scheme = scheme;
    model.kernel = kernel;
    model.C = config.C;
    model.labels = row_labels;
    std::sort(model.labels.begin(), model.labels.end());
    model.labels.erase(std::unique(model.labels.begin(), model.labels.end()),
                       model.labels.end());
    if (model.labels.size() < 2) throw DataError("multiclass training needs >= 2 labels");

    model.standardization = fit_standardization(X);
    std::vector<std::vector<double>> Z(X.size());
    for (size_t r = 0; r < X.size(); ++r) Z[r] = model.standardization.apply(X[r]);

    std::unordered_map<std::string, int> label_index;
    for (size_t i = 0; i < model.labels.size(); ++i)
        label_index[model.labels[i]] = static_cast<int>(i);
    std::vector<std::vector<size_t>> rows_of(model.labels.size());
    for (size_t r = 0; r < row_labels.size(); ++r)
        rows_of[static_cast<size_t>(label_index[row_labels[r]])].push_back(r);
    for (size_t l = 0; l < model.labels.size(); ++l)
        if (rows_of[l].empty())
            throw DataError("label '" + model.labels[l] + "' has no training rows");

    const int k = static_cast<int>(model.labels.size());
    if (scheme == MulticlassScheme::one_vs_one) {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                model.pairwise.push_back({a, b, {}});
    } else {
        for (int a = 0; a < k; ++a) model.pairwise.push_back({a, -1, {}});
    }

    run_tasks(threads, model.pairwise.size(), [&](std::size_t p) {
        auto& task = model.pairwise[p];
        std::vector<std::vector<double>> Xp;
        std::vector<int> yp;
        if (task.second >= 0) {
            for (size_t r : rows_of[static_cast<size_t>(task.first)]) {
                Xp.push_back(Z[r]);
                yp.push_back(1);
            }
            for (size_t r : rows_of[static_cast<size_t>(task.second)]) {
                Xp.push_back(Z[r]);
                yp.push_back(-1);
            }
        } else {
            for (size_t r = 0; r < Z.size(); ++r) {
                Xp.push_back(Z[r]);
                yp.push_back(label_index[row_labels[r]] == task.first ? 1 : -1);
            }
        }
        task.model = train_binary(Xp, yp, kernel, config);
    });

    for (const auto& pw : model.pairwise)
        if (!pw.model.converged) ++model.unconverged_count;
    return model;
}

std::string predict(const MulticlassModel& model, std::span<const double> x) {
    const auto z = model.standardization.apply(x);
    const int k = static_cast<int>(model.labels.size());

    if (model.scheme == MulticlassScheme::one_vs_rest) {
        int best = 0;
        double best_decision = -std::numeric_limits<double>::infinity();
        for (const auto& pw : model.pairwise) {
            const double d = decision_value(pw.model, z);
            if (d > best_decision) {
                best_decision = d;
                best = pw.first;
            }
        }
        return model.labels[static_cast<size_t>(best)];
    }

    std::vector<int> votes(static_cast<size_t>(k), 0);
    std::vector<double> margin(static_cast<size_t>(k), 0.0);  // sum |d| of won votes
    for (const auto& pw : model.pairwise) {
        const double d = decision_value(pw.model, z);
        const int winner = d >= 0 ? pw.first : pw.second;
        ++votes[static_cast<size_t>(winner)];
        margin[static_cast<size_t>(winner)] += std::abs(d);
    }
    int best = 0;
    for (int l = 1; l < k; ++l) {
        if (votes[static_cast<size_t>(l)] > votes[static_cast<size_t>(best)] ||
            (votes[static_cast<size_t>(l)] == votes[static_cast<size_t>(best)] &&
             margin[static_cast<size_t>(l)] > margin[static_cast<size_t>(best)]))
            best = l;
    }
    return model.labels[static_cast<size_t>(best)];
}

}  // namespace ecgid::svm
