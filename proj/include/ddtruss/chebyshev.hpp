#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <functional>
#include <iosfwd>

#include "ddtruss/errors.hpp"
#include "ddtruss/material_data.hpp"
#include "ddtruss/surrogate.hpp"

namespace ddtruss {

/// Truncated Chebyshev series on a finite interval [a, b], following the
/// half-c0 convention
///
///     f(x) ~ sum_{k=0}^{N-1} c_k T_k(t) - c_0 / 2,   t = (2x - a - b)/(b - a).
///
/// Construction also prepares the derivative and antiderivative coefficient
/// vectors (standard recurrences, chain-ruled for the affine domain map), so
/// stiffness and stored-energy evaluations cost the same Clenshaw recurrence
/// as stress. The antiderivative is anchored to vanish at zero strain, or at
/// the domain endpoint nearest zero when the domain excludes it.
///
/// Queries outside [a - slack, b + slack] with slack = 1e-9 (b - a) throw
/// DomainError: Chebyshev series diverge rapidly outside their interval, and
/// a silent wrong stress is worse than a failed solve.
class ChebyshevSurrogate {
public:
    ChebyshevSurrogate(double lo, double hi, Eigen::VectorXd coeffs);

    /// Clenshaw evaluation of the series at x in the domain.
    double eval(double x) const {
        require_inside(x);
        return clenshaw(to_unit(x), coef_);
    }

    int coefficient_count() const { return static_cast<int>(coef_.size()); }
    const Eigen::VectorXd& coefficients() const { return coef_; }

    /// Series of the derivative d(eval)/dx on the same domain.
    ChebyshevSurrogate derivative() const;
    /// Series of the antiderivative, anchored at energy_anchor().
    ChebyshevSurrogate antiderivative() const;

    // constitutive_surrogate interface
    double stress(double eps) const { return eval(eps); }
    double stiffness(double eps) const {
        require_inside(eps);
        return clenshaw(to_unit(eps), dcoef_);
    }
    double energy_density(double eps) const {
        require_inside(eps);
        return clenshaw(to_unit(eps), wcoef_);
    }
    bool contains(double x) const {
        return std::isfinite(x) && domain().contains(x, slack());
    }
    Interval domain() const { return {lo_, hi_}; }
    double energy_anchor() const { return domain().clamp(0.0); }

private:
    double to_unit(double x) const { return (2.0 * x - lo_ - hi_) / (hi_ - lo_); }
    double slack() const { return 1e-9 * (hi_ - lo_); }
    void require_inside(double x) const;

    static double clenshaw(double t, const Eigen::VectorXd& c) {
        double d = 0.0, dd = 0.0;
        for (Eigen::Index j = c.size() - 1; j >= 1; --j) {
            const double sv = d;
            d = 2.0 * t * d - dd + c(j);
            dd = sv;
        }
        return t * d - dd + 0.5 * c(0);
    }

    double lo_, hi_;
    Eigen::VectorXd coef_;
    Eigen::VectorXd dcoef_;  // derivative series
    Eigen::VectorXd wcoef_;  // anchored antiderivative series
};

/// The N zeros of T_N: x_k = cos(pi (k - 1/2) / N), k = 1..N, strictly
/// decreasing in (-1, 1).
Eigen::VectorXd chebyshev_nodes(int n);

/// Fits a surrogate by node quadrature: c_j = (2/N) sum_k f(x_k) T_j(x_k)
/// with f pulled back to [-1, 1] through the affine domain map. Trailing
/// coefficients below trunc_tol * max|c| are dropped (never below one
/// coefficient). Throws if f returns a non-finite value at any node.
ChebyshevSurrogate fit_from_function(const std::function<double(double)>& f, double lo,
                                     double hi, int n, double trunc_tol = 1e-12);

/// Fits the one-time smooth constitutive curve from scattered data: the
/// piecewise-linear interpolant of the sorted points is resampled at the
/// Chebyshev nodes of the data strain range and fed to fit_from_function.
/// n == 0 selects the default min(64, 4 * dataset.size()).
ChebyshevSurrogate fit_from_data(const MaterialDataset& dataset, int n = 0,
                                 double trunc_tol = 1e-12);

/// Piecewise-linear interpolant of the dataset (no extrapolation; x must lie
/// within the data strain range up to rounding slack).
double interpolate_linear(const MaterialDataset& dataset, double x);

/// Coefficient dump: `# domain: [a, b]` comment then `k,coefficient` rows,
/// 17 significant digits, for inspection and cross-language comparison.
void write_coefficients_csv(const ChebyshevSurrogate& surrogate, std::ostream& out);
void write_coefficients_csv(const ChebyshevSurrogate& surrogate,
                            const std::filesystem::path& path);

}  // namespace ddtruss
