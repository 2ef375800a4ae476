#ifndef ECGID_HERMITE_HPP
#define ECGID_HERMITE_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace ecgid::hermite {

/// Physicists' Hermite polynomial H_n(x) by the raw three-term recurrence
/// H_0 = 1, H_1 = 2x, H_n = 2x H_{n-1} - 2(n-1) H_{n-2}. Values blow up
/// fast; intended for low-order cross-checks.
double hermite_polynomial(int n, double x);

/// phi_0..phi_{L-1} at one point t, via the normalized recurrence
///   phi_0 = pi^(-1/4) delta^(-1/2) exp(-t^2 / 2 delta^2)
///   phi_1 = sqrt(2) (t/delta) phi_0
///   phi_n = sqrt(2/n) (t/delta) phi_{n-1} - sqrt((n-1)/n) phi_{n-2}
/// which stays finite where the 1/sqrt(2^n n!) normalization would not.
std::vector<double> hermite_functions(int L, double delta, double t);

/// Hermite function basis sampled on the integer grid t = -M..M.
class HermiteBasis {
public:
    HermiteBasis(int L, double delta, int M);

    int order_count() const { return L_; }
    double delta() const { return delta_; }
    int half_width() const { return M_; }
    int grid_size() const { return 2 * M_ + 1; }
    const Eigen::MatrixXd& phi() const { return phi_; }

    /// Least-squares solve min ||a - phi c||_2 through the cached QR
    /// factorization.
    Eigen::VectorXd solve(const Eigen::VectorXd& a) const;

private:
    int L_;
    double delta_;
    int M_;
    Eigen::MatrixXd phi_;  // (2M+1) x L, column n = phi_n on the grid
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

HermiteBasis build_basis(int L, double delta, int M);

struct HermiteCoeffs {
    Eigen::VectorXd c;
    double residual_nrmse = 0.0;  // ||a - phi c|| / ||a||, 0 for a zero beat
};

/// Fit expansion coefficients of a beat of length 2M+1.
HermiteCoeffs fit_coefficients(std::span<const double> beat, const HermiteBasis& basis);

/// phi * c.
std::vector<double> reconstruct(const Eigen::VectorXd& coeffs, const HermiteBasis& basis);

}  // namespace ecgid::hermite

#endif
