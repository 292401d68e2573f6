#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>

namespace ddtruss {

/// Closed strain interval a surrogate is defined on. An unbounded interval
/// (kernel regression) uses +-infinity endpoints.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double length() const { return hi - lo; }

    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }

    double clamp(double x) const { return std::clamp(x, lo, hi); }
};

/// Contract every constitutive surrogate offers to the truss assembly and the
/// solver: stress and tangent stiffness at a strain, stored-energy density
/// (integral of stress from the anchor strain), and domain queries. All
/// methods are pure and reentrant; surrogates are immutable after
/// construction, so one instance may serve concurrent solves.
template <class S>
concept constitutive_surrogate = requires(const S& s, double eps) {
    { s.stress(eps) } -> std::convertible_to<double>;
    { s.stiffness(eps) } -> std::convertible_to<double>;
    { s.energy_density(eps) } -> std::convertible_to<double>;
    { s.contains(eps) } -> std::convertible_to<bool>;
    { s.domain() } -> std::convertible_to<Interval>;
    { s.energy_anchor() } -> std::convertible_to<double>;
};

}  // namespace ddtruss
