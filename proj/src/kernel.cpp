#include "ddtruss/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddtruss {

namespace {

struct Weights {
    Eigen::ArrayXd w;   // exp(exponent - max exponent); zero for the skipped index
    double sum = 0.0;   // >= 1 unless all exponents overflowed
    bool usable = false;
};

Weights gaussian_weights(const Eigen::VectorXd& strains, double alpha, double x, Eigen::Index skip) {
    Weights out;
    Eigen::ArrayXd e = -alpha * (strains.array() - x).square();
    if (skip >= 0) e(skip) = -std::numeric_limits<double>::infinity();
    const double m = e.maxCoeff();
    if (!std::isfinite(m)) return out;  // every exponent overflowed
    out.w = (e - m).exp();
    out.sum = out.w.sum();
    out.usable = out.sum > 0.0 && std::isfinite(out.sum);
    return out;
}

Eigen::Index nearest_index(const Eigen::VectorXd& strains, double x, Eigen::Index skip) {
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < strains.size(); ++i) {
        if (i == skip) continue;
        const double d = std::abs(strains(i) - x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

/// Nadaraya-Watson value with an optional left-out index, clamped to the
/// stress range of the included points.
double nw_eval(const Eigen::VectorXd& strains, const Eigen::VectorXd& stresses, double alpha,
               double x, Eigen::Index skip) {
    const Weights wt = gaussian_weights(strains, alpha, x, skip);
    if (!wt.usable) return stresses(nearest_index(strains, x, skip));
    double smin = std::numeric_limits<double>::infinity();
    double smax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < stresses.size(); ++i) {
        if (i == skip) continue;
        smin = std::min(smin, stresses(i));
        smax = std::max(smax, stresses(i));
    }
    const double num = (wt.w * stresses.array()).sum();
    return std::clamp(num / wt.sum, smin, smax);
}

}  // namespace

KernelSurrogate::KernelSurrogate(MaterialDataset dataset, double alpha)
    : data_(std::move(dataset)), alpha_(alpha) {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
        throw std::invalid_argument("kernel: alpha must be positive and finite");
    stress_min_ = data_.stresses().minCoeff();
    stress_max_ = data_.stresses().maxCoeff();
}

double KernelSurrogate::stress(double eps) const {
    if (!std::isfinite(eps)) throw std::invalid_argument("kernel: strain must be finite");
    const Weights wt = gaussian_weights(data_.strains(), alpha_, eps, -1);
    if (!wt.usable) return data_.stresses()(nearest_index(data_.strains(), eps, -1));
    const double num = (wt.w * data_.stresses().array()).sum();
    return std::clamp(num / wt.sum, stress_min_, stress_max_);
}

double KernelSurrogate::stiffness(double eps) const {
    if (!std::isfinite(eps)) throw std::invalid_argument("kernel: strain must be finite");
    const Weights wt = gaussian_weights(data_.strains(), alpha_, eps, -1);
    if (!wt.usable) return 0.0;  // past the range every weight resolves to
    const double num = (wt.w * data_.stresses().array()).sum();
    const double s = std::clamp(num / wt.sum, stress_min_, stress_max_);
    // s' = sum_i w_i' (sigma_i - s) / sum_i w_i with w_i' = -2 alpha (eps - eps_i) w_i
    const Eigen::ArrayXd g = -2.0 * alpha_ * (eps - data_.strains().array());
    return (wt.w * g * (data_.stresses().array() - s)).sum() / wt.sum;
}

namespace {

double adaptive_simpson(const KernelSurrogate& s, double a, double fa, double b, double fb,
                        double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = s.stress(lm);
    const double frm = s.stress(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(s, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(s, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double KernelSurrogate::energy_density(double eps) const {
    if (!std::isfinite(eps)) throw std::invalid_argument("kernel: strain must be finite");
    if (eps == 0.0) return 0.0;
    const double a = 0.0, b = eps;
    const double fa = stress(a);
    const double fb = stress(b);
    const double fm = stress(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(std::abs(stress_min_), std::abs(stress_max_));
    const double tol = std::max(1e-13 * scale * std::abs(b - a), 1e-300);
    return adaptive_simpson(*this, a, fa, b, fb, fm, whole, tol, 36);
}

Eigen::VectorXd default_alpha_grid(const MaterialDataset& dataset, int size) {
    if (size < 1) throw std::invalid_argument("default_alpha_grid: size must be >= 1");
    const double range = dataset.strain_range();
    const double lo = 1.0 / (range * range);
    const double hi = 1e6 / (range * range);
    Eigen::VectorXd grid(size);
    if (size == 1) {
        grid(0) = lo;
        return grid;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < size; ++i)
        grid(i) = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                     static_cast<double>(size - 1));
    return grid;
}

double cross_validate_alpha(const MaterialDataset& dataset, const Eigen::VectorXd& grid) {
    if (dataset.size() < 3)
        throw std::invalid_argument(
            "cross_validate_alpha: need at least 3 points for leave-one-out");
    if (grid.size() == 0) throw std::invalid_argument("cross_validate_alpha: empty bandwidth grid");
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (!(grid(i) > 0.0) || !std::isfinite(grid(i)))
            throw std::invalid_argument("cross_validate_alpha: grid values must be positive finite");

    std::vector<double> sorted(grid.data(), grid.data() + grid.size());
    std::sort(sorted.begin(), sorted.end());

    const Eigen::VectorXd& e = dataset.strains();
    const Eigen::VectorXd& s = dataset.stresses();
    double best_alpha = sorted.front();
    double best_err = std::numeric_limits<double>::infinity();
    for (double alpha : sorted) {
        double err = 0.0;
        for (Eigen::Index j = 0; j < e.size(); ++j) {
            const double diff = s(j) - nw_eval(e, s, alpha, e(j), j);
            err += diff * diff;
        }
        if (err < best_err) {  // ties keep the earlier (smaller) alpha
            best_err = err;
            best_alpha = alpha;
        }
    }
    return best_alpha;
}

}  // namespace ddtruss
