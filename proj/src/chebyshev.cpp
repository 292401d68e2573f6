#include "ddtruss/chebyshev.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ddtruss {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Coefficient recurrence for the derivative series (half-c0 convention),
/// chain-ruled by 2/(b-a) for the affine domain map.
Eigen::VectorXd derivative_coeffs(const Eigen::VectorXd& c, double lo, double hi) {
    const Eigen::Index n = c.size();
    if (n == 1) return Eigen::VectorXd::Zero(1);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n - 1);
    d(n - 2) = 2.0 * static_cast<double>(n - 1) * c(n - 1);
    for (Eigen::Index j = n - 3; j >= 0; --j)
        d(j) = (j + 2 < n - 1 ? d(j + 2) : 0.0) + 2.0 * static_cast<double>(j + 1) * c(j + 1);
    return d * (2.0 / (hi - lo));
}

/// Coefficient recurrence for the antiderivative series; the constant term is
/// fixed afterwards by the anchoring step in the constructor.
Eigen::VectorXd antiderivative_coeffs(const Eigen::VectorXd& c, double lo, double hi) {
    const Eigen::Index n = c.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1);
    const double con = 0.25 * (hi - lo);
    for (Eigen::Index j = 1; j <= n; ++j) {
        const double prev = c(j - 1);
        const double next = j + 1 < n ? c(j + 1) : 0.0;
        w(j) = con * (prev - next) / static_cast<double>(j);
    }
    return w;
}

}  // namespace

ChebyshevSurrogate::ChebyshevSurrogate(double lo, double hi, Eigen::VectorXd coeffs)
    : lo_(lo), hi_(hi), coef_(std::move(coeffs)) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_) || !(lo_ < hi_))
        throw std::invalid_argument("chebyshev: domain must be finite with a < b");
    if (coef_.size() < 1) throw std::invalid_argument("chebyshev: need at least one coefficient");
    if (!coef_.allFinite()) throw std::invalid_argument("chebyshev: coefficients must be finite");

    dcoef_ = derivative_coeffs(coef_, lo_, hi_);
    wcoef_ = antiderivative_coeffs(coef_, lo_, hi_);
    // anchor: W(energy_anchor) = 0 (adding 2d to c0 shifts the value by d)
    const double at_anchor = clenshaw(to_unit(energy_anchor()), wcoef_);
    wcoef_(0) = -2.0 * at_anchor;
}

void ChebyshevSurrogate::require_inside(double x) const {
    if (contains(x)) return;
    throw DomainError("strain " + format17(x) + " outside surrogate domain [" + format17(lo_) +
                          ", " + format17(hi_) + "]",
                      x);
}

ChebyshevSurrogate ChebyshevSurrogate::derivative() const {
    return ChebyshevSurrogate(lo_, hi_, dcoef_);
}

ChebyshevSurrogate ChebyshevSurrogate::antiderivative() const {
    return ChebyshevSurrogate(lo_, hi_, wcoef_);
}

Eigen::VectorXd chebyshev_nodes(int n) {
    if (n < 1) throw std::invalid_argument("chebyshev_nodes: N must be >= 1");
    Eigen::VectorXd x(n);
    for (int k = 1; k <= n; ++k)
        x(k - 1) = std::cos(std::numbers::pi * (static_cast<double>(k) - 0.5) /
                            static_cast<double>(n));
    return x;
}

ChebyshevSurrogate fit_from_function(const std::function<double(double)>& f, double lo, double hi,
                                     int n, double trunc_tol) {
    if (!f) throw std::invalid_argument("fit_from_function: null function");
    if (n < 1) throw std::invalid_argument("fit_from_function: N must be >= 1");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw std::invalid_argument("fit_from_function: domain must be finite with a < b");
    if (!(trunc_tol >= 0.0))
        throw std::invalid_argument("fit_from_function: trunc_tol must be >= 0");

    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    Eigen::VectorXd theta(n), fx(n);
    for (int k = 0; k < n; ++k) {
        theta(k) = std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        const double x = mid + half * std::cos(theta(k));
        const double v = f(x);
        if (!std::isfinite(v))
            throw std::invalid_argument("fit_from_function: f returned a non-finite value at x = " +
                                        format17(x));
        fx(k) = v;
    }

    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += fx(k) * std::cos(static_cast<double>(j) * theta(k));
        c(j) = 2.0 * sum / static_cast<double>(n);
    }

    const double cmax = c.cwiseAbs().maxCoeff();
    Eigen::Index keep = n;
    if (cmax == 0.0) {
        keep = 1;
    } else {
        while (keep > 1 && std::abs(c(keep - 1)) < trunc_tol * cmax) --keep;
    }
    return ChebyshevSurrogate(lo, hi, c.head(keep));
}

double interpolate_linear(const MaterialDataset& dataset, double x) {
    const Eigen::VectorXd& e = dataset.strains();
    const Eigen::VectorXd& s = dataset.stresses();
    const Eigen::Index n = e.size();
    if (x <= e(0)) return s(0) + (s(1) - s(0)) / (e(1) - e(0)) * (x - e(0));
    if (x >= e(n - 1))
        return s(n - 2) + (s(n - 1) - s(n - 2)) / (e(n - 1) - e(n - 2)) * (x - e(n - 2));
    // first index with e(k) > x; segment is [k-1, k]
    Eigen::Index klo = 0, khi = n - 1;
    while (khi - klo > 1) {
        const Eigen::Index kmid = (klo + khi) / 2;
        (e(kmid) > x ? khi : klo) = kmid;
    }
    const double t = (x - e(klo)) / (e(khi) - e(klo));
    return s(klo) + t * (s(khi) - s(klo));
}

ChebyshevSurrogate fit_from_data(const MaterialDataset& dataset, int n, double trunc_tol) {
    if (n == 0) n = std::min(64, 4 * dataset.size());
    return fit_from_function([&dataset](double x) { return interpolate_linear(dataset, x); },
                             dataset.strain_min(), dataset.strain_max(), n, trunc_tol);
}

void write_coefficients_csv(const ChebyshevSurrogate& surrogate, std::ostream& out) {
    const Interval d = surrogate.domain();
    out << "# domain: [" << format17(d.lo) << ", " << format17(d.hi) << "]\n";
    out << "k,coefficient\n";
    for (int k = 0; k < surrogate.coefficient_count(); ++k)
        out << k << ',' << format17(surrogate.coefficients()(k)) << '\n';
}

void write_coefficients_csv(const ChebyshevSurrogate& surrogate,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetError("cannot write coefficient file '" + path.string() + "'");
    write_coefficients_csv(surrogate, out);
}

}  // namespace ddtruss
