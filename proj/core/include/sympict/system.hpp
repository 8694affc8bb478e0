#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sympict/numeric.hpp"
#include "sympict/types.hpp"

namespace sympict {

struct LagrangianGrad {
    Vec dq;
    Vec dqdot;
};

/// L(q, qdot). Evaluators must be pure; an analytic gradient, when supplied,
/// has to match central finite differences to relative 1e-6.
struct LagrangianFn {
    int arity = 0;
    std::function<double(const Vec& q, const Vec& qdot)> value;
    std::function<LagrangianGrad(const Vec& q, const Vec& qdot)> gradient;  // optional
};

struct HamiltonianGrad {
    Vec dq;
    Vec dp;
};

/// H(q, p) with optional analytic gradient and Hessian (2n x 2n over [q, p]).
struct HamiltonianFn {
    int arity = 0;
    std::function<double(const PhasePoint&)> value;
    std::function<HamiltonianGrad(const PhasePoint&)> gradient;  // optional
    std::function<Mat(const PhasePoint&)> hessian;               // optional
};

/// Gradient of L, analytic when available, central differences otherwise.
LagrangianGrad lagrangian_grad(const LagrangianFn& L, const Vec& q, const Vec& qdot);

/// Gradient / Hessian of H, analytic when available, finite differences otherwise.
HamiltonianGrad hamiltonian_grad(const HamiltonianFn& H, const PhasePoint& x);
Mat hamiltonian_hessian(const HamiltonianFn& H, const PhasePoint& x);

/// Closed-form flow of the free Hamiltonian, supplied by catalog systems.
/// map flows phase coordinates for a duration dt; tangent applies the
/// Jacobian of that flow to a tangent vector anchored at x.
struct ClosedFormFreeFlow {
    std::function<PhasePoint(const PhasePoint&, double dt)> map;
    std::function<MTangentVector(const PhasePoint&, const MTangentVector&, double dt)> tangent;
};

/// A dynamical system split into a free part and an interaction part,
/// H = H0 + H1, with optional Lagrangian-side data for the velocity-space
/// operations.
struct SplitSystem {
    std::string id = "custom";
    int dim = 0;
    HamiltonianFn free_hamiltonian;         // H0
    HamiltonianFn interaction_hamiltonian;  // H1
    std::optional<LagrangianFn> free_lagrangian;   // L0
    std::optional<LagrangianFn> total_lagrangian;  // L
    std::optional<ClosedFormFreeFlow> closed_free_flow;
    bool separable_free = false;   // H0 = T(p) + V(q)
    bool separable_total = false;  // H0 + H1 = T(p) + V(q)
    std::map<std::string, double> params;

    double total_energy(const PhasePoint& x) const {
        return free_hamiltonian.value(x) + interaction_hamiltonian.value(x);
    }

    /// H0 + H1 as a single evaluator (sums gradients/Hessians when both
    /// parts supply them analytically).
    HamiltonianFn total_hamiltonian() const;
};

/// One monomial c * prod q_a^qexp[a] * prod p_a^pexp[a].
struct PolyTerm {
    double c = 0.0;
    std::vector<int> qexp;
    std::vector<int> pexp;
};

/// Loadable system description: either a catalog id with parameter
/// overrides, or an explicit pair of polynomial Hamiltonians.
struct SystemSpec {
    std::string id;
    std::map<std::string, double> params;
    int n = 0;                         // custom systems only
    std::vector<PolyTerm> h0_terms;    // custom systems only
    std::vector<PolyTerm> h1_terms;
};

struct CatalogEntry {
    std::string id;
    std::string summary;
    int dim = 0;
    std::map<std::string, double> default_params;
};

const std::vector<CatalogEntry>& catalog();

SplitSystem load_system(const SystemSpec& spec);

// ---------------------------------------------------------------------------
// Legendre-transform machinery
// ---------------------------------------------------------------------------

/// (q, qdot) -> (q, p) with p = dL/dqdot.
PhasePoint legendre_map(const LagrangianFn& L, const TangentPoint& x);

/// Determinant of the velocity Hessian d2L/dqdot2, always computed by finite
/// differences. Near-zero values signal a degenerate Lagrangian.
double regularity_check(const LagrangianFn& L, const TangentPoint& x);

struct NewtonOptions {
    double residual_tol = 1e-12;
    int max_iterations = 50;
    double singular_det_tol = 1e-10;
};

/// Solves dL/dqdot(q, qdot) = p for qdot by damped Newton iteration.
/// The default initial guess is qdot = p.
TangentPoint inverse_legendre(const LagrangianFn& L, const PhasePoint& x,
                              const Vec& guess = {}, const NewtonOptions& opts = {});

/// Energy function h(q, qdot) = qdot . dL/dqdot - L.
double hamiltonian_from_lagrangian(const LagrangianFn& L, const TangentPoint& x);

struct EulerLagrangeResidual {
    std::vector<double> times;      // interior sample times the stencil covers
    std::vector<Vec> residuals;     // d/dt(dL/dqdot) - dL/dq per component
    double max_abs = 0.0;
};

/// Finite-difference Euler-Lagrange residual along a uniformly sampled path.
/// A trajectory that solves the equations of motion yields residuals O(dt^2).
EulerLagrangeResidual euler_lagrange_residual(const LagrangianFn& L, const Trajectory& path);

} // namespace sympict
