#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "ddtruss/errors.hpp"
#include "ddtruss/surrogate.hpp"

namespace ddtruss {

/// Plain description of a planar truss, as read from a config file or built
/// programmatically. Field names match the JSON schema.
struct NodeSpec {
    int id = 0;
    double x = 0.0, y = 0.0;
    bool fixed_x = false, fixed_y = false;
};

struct MemberSpec {
    int id = 0;
    int from = 0, to = 0;
    double area = 0.0;  // m^2
};

struct LoadSpec {
    int node = 0;
    double fx = 0.0, fy = 0.0;  // N
};

struct TrussConfig {
    std::vector<NodeSpec> nodes;
    std::vector<MemberSpec> members;
    std::vector<LoadSpec> loads;
};

/// Reads a TrussConfig from JSON: `nodes` (id, x, y, fixed_x, fixed_y),
/// `members` (id, from, to, area), `loads` (node, fx, fy). Unknown fields are
/// rejected.
TrussConfig load_truss_config(const std::filesystem::path& path);

struct TrussNode {
    int id = 0;
    Eigen::Vector2d position{0.0, 0.0};
    std::array<int, 2> dof{-1, -1};  // free-dof index per axis, -1 when fixed
};

/// Small-deformation truss member. The compatibility vector b is stored as
/// its up-to-four nonzero (free-dof, coefficient) entries, units 1/m; the
/// axial strain is b^T u and the member contributes volume * stress * b to
/// the internal force.
struct TrussMember {
    int id = 0;
    int node_a = 0, node_b = 0;  // indices into the node list
    double area = 0.0;           // m^2
    double length = 0.0;         // m
    double volume = 0.0;         // m^3, area * length

    int entry_count = 0;
    std::array<int, 4> dof{};
    std::array<double, 4> coef{};

    double strain(const Eigen::Ref<const Eigen::VectorXd>& u) const {
        double e = 0.0;
        for (int k = 0; k < entry_count; ++k) e += coef[k] * u(dof[k]);
        return e;
    }

    /// r += f * b
    void add_scaled(double f, Eigen::Ref<Eigen::VectorXd> r) const {
        for (int k = 0; k < entry_count; ++k) r(dof[k]) += f * coef[k];
    }

    /// K += w * b b^T (exactly symmetric: both triangles get the same product)
    void add_outer(double w, Eigen::Ref<Eigen::MatrixXd> K) const {
        for (int i = 0; i < entry_count; ++i)
            for (int j = 0; j < entry_count; ++j)
                K(dof[i], dof[j]) += w * coef[i] * coef[j];
    }
};

/// Assembled model: free-dof numbering, member compatibility vectors, and the
/// reference load pattern p. Immutable after build; residual and tangent
/// evaluations are pure, so independent (u, lambda) queries may run
/// concurrently.
class TrussModel {
public:
    TrussModel(std::vector<TrussNode> nodes, std::vector<TrussMember> members,
               int n_free, Eigen::VectorXd p_ref)
        : nodes_(std::move(nodes)),
          members_(std::move(members)),
          n_free_(n_free),
          p_ref_(std::move(p_ref)) {}

    const std::vector<TrussNode>& nodes() const { return nodes_; }
    const std::vector<TrussMember>& members() const { return members_; }
    int n_free() const { return n_free_; }
    int member_count() const { return static_cast<int>(members_.size()); }
    const Eigen::VectorXd& p_ref() const { return p_ref_; }

private:
    std::vector<TrussNode> nodes_;
    std::vector<TrussMember> members_;
    int n_free_;
    Eigen::VectorXd p_ref_;
};

/// Builds and validates a model: assigns free-dof indices (node order, x then
/// y), assembles b vectors and volumes, and rejects mechanisms via the rank
/// of the sqrt(v_i) b_i row matrix.
TrussModel build_truss(const TrussConfig& config);

/// The planar 10-bar cantilever benchmark: six nodes on a 2L x L grid, the
/// two left nodes fully fixed, chords + verticals + crossing diagonals, and a
/// downward reference load at each free bottom node.
TrussModel ten_bar_truss(double L, double area, double load);

/// Per-member axial strains b_i^T u (no domain checks).
Eigen::VectorXd member_strains(const TrussModel& model,
                               const Eigen::Ref<const Eigen::VectorXd>& u);

namespace detail {

[[noreturn]] void throw_coverage(int member_id, double strain, const Interval& domain);
void check_u_size(const Eigen::Index have, int want);

}  // namespace detail

/// Equilibrium residual r(u) = sum_i v_i s(b_i^T u) b_i - lambda p. Throws
/// CoverageError naming the member when a strain leaves the surrogate domain.
template <constitutive_surrogate S>
Eigen::VectorXd residual(const TrussModel& model, const S& surrogate,
                         const Eigen::Ref<const Eigen::VectorXd>& u, double lambda) {
    detail::check_u_size(u.size(), model.n_free());
    Eigen::VectorXd r = -lambda * model.p_ref();
    for (const TrussMember& m : model.members()) {
        const double eps = m.strain(u);
        if (!surrogate.contains(eps)) detail::throw_coverage(m.id, eps, surrogate.domain());
        m.add_scaled(m.volume * surrogate.stress(eps), r);
    }
    return r;
}

/// Tangent stiffness K(u) = sum_i v_i s'(b_i^T u) b_i b_i^T, the Jacobian of
/// the residual; symmetric by construction.
template <constitutive_surrogate S>
Eigen::MatrixXd tangent(const TrussModel& model, const S& surrogate,
                        const Eigen::Ref<const Eigen::VectorXd>& u) {
    detail::check_u_size(u.size(), model.n_free());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(model.n_free(), model.n_free());
    for (const TrussMember& m : model.members()) {
        const double eps = m.strain(u);
        if (!surrogate.contains(eps)) detail::throw_coverage(m.id, eps, surrogate.domain());
        m.add_outer(m.volume * surrogate.stiffness(eps), K);
    }
    return K;
}

}  // namespace ddtruss
