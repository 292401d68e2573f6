#pragma once

#include <Eigen/Core>

#include "ddtruss/material_data.hpp"
#include "ddtruss/surrogate.hpp"

namespace ddtruss {

/// Nadaraya-Watson regression of the dataset with a Gaussian kernel:
///
///     s(eps) = sum_j exp(-alpha (eps - eps_j)^2) sigma_j
///            / sum_j exp(-alpha (eps - eps_j)^2)
///
/// Weights are computed with the largest exponent subtracted before
/// exponentiation, so the denominator never underflows to zero and far-field
/// queries degrade to nearest-data behaviour. The result is clamped to the
/// observed stress range, which it can only leave by rounding anyway
/// (convex-combination property).
///
/// Defined for every finite strain; contains() only rejects non-finite input.
class KernelSurrogate {
public:
    KernelSurrogate(MaterialDataset dataset, double alpha);

    double alpha() const { return alpha_; }
    const MaterialDataset& data() const { return data_; }

    // constitutive_surrogate interface
    double stress(double eps) const;
    /// Analytic quotient-rule derivative of the estimator.
    double stiffness(double eps) const;
    /// Integral of stress from zero strain, by adaptive Simpson quadrature.
    double energy_density(double eps) const;
    bool contains(double eps) const { return std::isfinite(eps); }
    Interval domain() const { return {}; }
    double energy_anchor() const { return 0.0; }

private:
    MaterialDataset data_;
    double alpha_;
    double stress_min_, stress_max_;
};

/// Log-spaced bandwidth grid spanning [1, 1e6] / range^2 where range is the
/// dataset strain range.
Eigen::VectorXd default_alpha_grid(const MaterialDataset& dataset, int size = 25);

/// Selects the grid bandwidth minimizing the leave-one-out squared prediction
/// error sum_j (sigma_j - s_{-j}(eps_j))^2, ties broken toward the smaller
/// alpha (the smoother estimator). Requires at least 3 points and a nonempty
/// grid of positive finite values. Deterministic: grid order does not matter.
double cross_validate_alpha(const MaterialDataset& dataset, const Eigen::VectorXd& grid);

}  // namespace ddtruss
