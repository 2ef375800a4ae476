#include "ecgid/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace ecgid::hermite {

double hermite_polynomial(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite order must be non-negative");
    if (n == 0) return 1.0;
    double prev = 1.0;       // H_0
    double cur = 2.0 * x;    // H_1
    for (int k = 2; k <= n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * (k - 1) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_functions(int L, double delta, double t) {
    if (L < 1) throw std::invalid_argument("order count must be positive");
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    std::vector<double> phi(static_cast<size_t>(L));
    const double u = t / delta;
    phi[0] = std::pow(M_PI, -0.25) / std::sqrt(delta) * std::exp(-t * t / (2 * delta * delta));
    if (L > 1) phi[1] = std::sqrt(2.0) * u * phi[0];
    for (int n = 2; n < L; ++n)
        phi[static_cast<size_t>(n)] = std::sqrt(2.0 / n) * u * phi[static_cast<size_t>(n - 1)] -
                                      std::sqrt((n - 1.0) / n) * phi[static_cast<size_t>(n - 2)];
    return phi;
}

HermiteBasis::HermiteBasis(int L, double delta, int M) : L_(L), delta_(delta), M_(M) {
    if (L < 1) throw std::invalid_argument("order count must be positive");
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    if (M < 1) throw std::invalid_argument("half-width M must be positive");

    phi_.resize(2 * M + 1, L);
    for (int t = -M; t <= M; ++t) {
        const auto col = hermite_functions(L, delta, static_cast<double>(t));
        for (int n = 0; n < L; ++n) phi_(t + M, n) = col[static_cast<size_t>(n)];
    }
    qr_.compute(phi_);
    // Distinct orders are linearly independent; guard regardless.
    if (qr_.rank() < L) throw std::runtime_error("rank-deficient Hermite basis");
}

Eigen::VectorXd HermiteBasis::solve(const Eigen::VectorXd& a) const { return qr_.solve(a); }

HermiteBasis build_basis(int L, double delta, int M) { return HermiteBasis(L, delta, M); }

HermiteCoeffs fit_coefficients(std::span<const double> beat, const HermiteBasis& basis) {
    if (static_cast<int>(beat.size()) != basis.grid_size())
        throw std::invalid_argument("beat length " + std::to_string(beat.size()) +
                                    " does not match basis grid " +
                                    std::to_string(basis.grid_size()));
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(beat.data(),
                                                          static_cast<long>(beat.size()));
    HermiteCoeffs out;
    const double a_norm = a.norm();
    if (a_norm == 0.0) {
        out.c = Eigen::VectorXd::Zero(basis.order_count());
        out.residual_nrmse = 0.0;
        return out;
    }
    out.c = basis.solve(a);
    out.residual_nrmse = (a - basis.phi() * out.c).norm() / a_norm;
    return out;
}

std::vector<double> reconstruct(const Eigen::VectorXd& coeffs, const HermiteBasis& basis) {
    if (coeffs.size() != basis.order_count())
        throw std::invalid_argument("coefficient count does not match basis order");
    Eigen::VectorXd w = basis.phi() * coeffs;
    return std::vector<double>(w.data(), w.data() + w.size());
}

}  // namespace ecgid::hermite
