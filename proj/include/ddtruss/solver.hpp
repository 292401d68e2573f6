#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddtruss/errors.hpp"
#include "ddtruss/surrogate.hpp"
#include "ddtruss/truss.hpp"

namespace ddtruss {

struct SolveSettings {
    double tol_rel = 1e-9;   ///< residual tolerance relative to |lambda| ||p||
    double tol_abs = 1e-12;  ///< absolute residual floor, N
    int max_iter = 50;
    double damping = 0.5;  ///< backtracking shrink factor
    int max_backtracks = 30;

    void validate() const {
        if (!(tol_rel > 0.0) || !(tol_abs > 0.0))
            throw std::invalid_argument("solve settings: tolerances must be positive");
        if (max_iter < 1) throw std::invalid_argument("solve settings: max_iter must be >= 1");
        if (!(damping > 0.0 && damping < 1.0))
            throw std::invalid_argument("solve settings: damping must lie in (0, 1)");
        if (max_backtracks < 0)
            throw std::invalid_argument("solve settings: max_backtracks must be >= 0");
    }
};

struct SolveResult {
    Eigen::VectorXd u;         ///< displacements over free dofs, m
    Eigen::VectorXd strains;   ///< per-member b_i^T u
    Eigen::VectorXd stresses;  ///< per-member surrogate stress, Pa
    double residual_norm = 0.0;
    int iterations = 0;
    double energy = 0.0;  ///< total strain energy, J
    bool converged = false;
    std::string failure_note;  ///< empty when converged
};

struct PathStep {
    double load_multiplier = 0.0;
    SolveResult result;
};

/// Why a path stopped early.
enum class PathFailure { none, coverage, nonconvergence, solver_breakdown };

struct EquilibriumPath {
    std::vector<PathStep> steps;  ///< converged steps only, lambda increasing
    bool completed = true;
    double failed_load_multiplier = std::numeric_limits<double>::quiet_NaN();
    std::string failure;
    PathFailure failure_kind = PathFailure::none;
};

/// Total stored energy sum_i v_i W(eps_i) with W the surrogate's
/// antiderivative anchored at zero strain (or the endpoint nearest zero when
/// the domain excludes it; see S::energy_anchor).
template <constitutive_surrogate S>
double strain_energy(const TrussModel& model, const S& surrogate,
                     const Eigen::Ref<const Eigen::VectorXd>& u) {
    detail::check_u_size(u.size(), model.n_free());
    double total = 0.0;
    for (const TrussMember& m : model.members()) {
        const double eps = m.strain(u);
        if (!surrogate.contains(eps)) detail::throw_coverage(m.id, eps, surrogate.domain());
        total += m.volume * surrogate.energy_density(eps);
    }
    return total;
}

namespace detail {

/// Residual if every trial strain stays inside the surrogate domain and the
/// result is finite; nullopt otherwise (a failed line-search trial).
template <constitutive_surrogate S>
std::optional<Eigen::VectorXd> try_residual(const TrussModel& model, const S& surrogate,
                                            const Eigen::VectorXd& u, double lambda) {
    Eigen::VectorXd r = -lambda * model.p_ref();
    for (const TrussMember& m : model.members()) {
        const double eps = m.strain(u);
        if (!surrogate.contains(eps)) return std::nullopt;
        m.add_scaled(m.volume * surrogate.stress(eps), r);
    }
    if (!r.allFinite()) return std::nullopt;
    return r;
}

}  // namespace detail

/// Damped Newton iteration on r(u) = 0 at fixed lambda. Each step solves
/// K(u) d = -r by dense LU with partial pivoting and backtracks d by the
/// damping factor until the residual norm decreases; trial steps that leave
/// the surrogate domain count as failed and backtrack too. Stops when
/// ||r|| <= max(tol_abs, tol_rel |lambda| ||p||); returns converged = false
/// when iterations or backtracks run out. Deterministic: identical inputs
/// give bitwise-identical results.
template <constitutive_surrogate S>
SolveResult newton_solve(const TrussModel& model, const S& surrogate, double lambda,
                         const Eigen::Ref<const Eigen::VectorXd>& u0,
                         const SolveSettings& settings = {}) {
    settings.validate();
    if (!std::isfinite(lambda)) throw std::invalid_argument("newton_solve: lambda must be finite");

    Eigen::VectorXd u = u0;
    Eigen::VectorXd r = residual(model, surrogate, u, lambda);  // throws on bad u0
    double rnorm = r.norm();
    if (!std::isfinite(rnorm)) throw SolverError("newton_solve: non-finite residual at start", 0);

    const double target = std::max(settings.tol_abs,
                                   settings.tol_rel * std::abs(lambda) * model.p_ref().norm());

    int iterations = 0;
    std::string note;
    while (rnorm > target && iterations < settings.max_iter) {
        const Eigen::MatrixXd K = tangent(model, surrogate, u);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
        const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
        const double dmax = udiag.maxCoeff();
        if (!(dmax > 0.0) || !std::isfinite(dmax) || udiag.minCoeff() <= dmax * 1e-14)
            throw SolverError("newton_solve: singular tangent at iteration " +
                                  std::to_string(iterations + 1),
                              iterations + 1);
        const Eigen::VectorXd step = lu.solve(-r);
        if (!step.allFinite())
            throw SolverError("newton_solve: non-finite Newton step at iteration " +
                                  std::to_string(iterations + 1),
                              iterations + 1);

        bool accepted = false;
        bool left_domain = false;
        double t = 1.0;
        for (int bt = 0; bt <= settings.max_backtracks; ++bt) {
            const Eigen::VectorXd u_try = u + t * step;
            auto r_try = detail::try_residual(model, surrogate, u_try, lambda);
            if (!r_try) {
                left_domain = true;
            } else if (r_try->norm() < rnorm) {
                u = u_try;
                r = std::move(*r_try);
                rnorm = r.norm();
                accepted = true;
                break;
            }
            t *= settings.damping;
        }
        if (!accepted) {
            note = left_domain ? "backtracking exhausted: trial steps left the surrogate domain"
                               : "backtracking exhausted: no residual decrease";
            break;
        }
        ++iterations;
    }

    SolveResult result;
    result.u = std::move(u);
    result.strains = member_strains(model, result.u);
    result.stresses.resize(result.strains.size());
    for (Eigen::Index i = 0; i < result.strains.size(); ++i)
        result.stresses(i) = surrogate.stress(result.strains(i));
    result.residual_norm = rnorm;
    result.iterations = iterations;
    result.energy = strain_energy(model, surrogate, result.u);
    result.converged = rnorm <= target;
    if (!result.converged) {
        if (note.empty()) note = "no convergence within max_iter";
        result.failure_note = note;
    }
    return result;
}

/// Traces the equilibrium path over strictly increasing load multipliers,
/// warm-starting every solve from the previous converged displacement (first
/// step from zero). A failed step truncates the path and records the failing
/// lambda with its reason; the retained steps are all converged.
template <constitutive_surrogate S>
EquilibriumPath trace_path(const TrussModel& model, const S& surrogate,
                           const std::vector<double>& lambdas,
                           const SolveSettings& settings = {}) {
    settings.validate();
    if (lambdas.empty()) throw std::invalid_argument("trace_path: empty lambda list");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!std::isfinite(lambdas[i]))
            throw std::invalid_argument("trace_path: lambda values must be finite");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw std::invalid_argument("trace_path: lambda values must be strictly increasing");
    }

    EquilibriumPath path;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(model.n_free());
    for (double lambda : lambdas) {
        SolveResult res;
        try {
            res = newton_solve(model, surrogate, lambda, u, settings);
        } catch (const DomainError& e) {
            path.completed = false;
            path.failed_load_multiplier = lambda;
            path.failure = e.what();
            path.failure_kind = PathFailure::coverage;
            return path;
        } catch (const SolverError& e) {
            path.completed = false;
            path.failed_load_multiplier = lambda;
            path.failure = e.what();
            path.failure_kind = PathFailure::solver_breakdown;
            return path;
        }
        if (!res.converged) {
            path.completed = false;
            path.failed_load_multiplier = lambda;
            path.failure = res.failure_note;
            path.failure_kind =
                res.failure_note.find("surrogate domain") != std::string::npos
                    ? PathFailure::coverage
                    : PathFailure::nonconvergence;
            return path;
        }
        u = res.u;
        path.steps.push_back({lambda, std::move(res)});
    }
    return path;
}

}  // namespace ddtruss
