#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sympict/free_solution.hpp"
#include "sympict/types.hpp"

namespace sympict {

/// A (possibly time-dependent) scalar function on the free-solution space,
/// expressed in the canonical chart of the point it is handed.
struct ObservableOnMF {
    std::string name;
    std::function<double(const FreeSolutionPoint&, double t)> value;
    /// Optional analytic chart gradient (dfdq, dfdp); finite differences otherwise.
    std::function<void(const FreeSolutionPoint&, double t, Vec& dfdq, Vec& dfdp)> gradient;
};

/// Step used for directional derivatives over free-solution coordinates.
double mf_fd_step(const FreeSolutionPoint& m);

/// Shifts a chart point by eps * u within its chart.
FreeSolutionPoint shift_point(const FreeSolutionPoint& m, const MTangentVector& u, double eps);

/// The canonical 2-form dp ^ dq on two chart tangents:
/// sum_a (u.dp_a v.dq_a - v.dp_a u.dq_a).
double omega_eval(const FreeSolutionPoint& m, const MTangentVector& u, const MTangentVector& v);

/// The time-indexed 1-form: theta_t(u) = p0(t) . dq0(t), with the tangent
/// pushed along the variational flow. Requires the free Lagrangian, whose
/// velocity gradient the momentum factor realizes.
double theta_eval(const FreeFlow& flow, const FreeSolutionPoint& m, const MTangentVector& u,
                  double t);

/// Evaluates omega in the chart at each listed reference time (point and both
/// tangents pushed along the flow) and returns the maximum pairwise deviation.
double omega_chart_independence(const FreeFlow& flow, const FreeSolutionPoint& m,
                                const MTangentVector& u, const MTangentVector& v,
                                const std::vector<double>& t_refs);

/// Exterior derivative of theta_t by central differences over the chart,
/// d theta(u, v) = u[theta(v)] - v[theta(u)] for constant-coefficient
/// extensions of u and v.
double omega_from_theta_fd(const FreeFlow& flow, const FreeSolutionPoint& m,
                           const MTangentVector& u, const MTangentVector& v, double t);

/// Free action along the free solution through m, from t1 to t2.
double action_free(const FreeFlow& flow, const FreeSolutionPoint& m, double t1, double t2,
                   double quad_tol = 1e-12);

struct ExactnessCheck {
    double lhs = 0.0;  // directional derivative of the action along u
    double rhs = 0.0;  // theta_{t2}(u) - theta_{t1}(u)
};

ExactnessCheck action_exactness_check(const FreeFlow& flow, const FreeSolutionPoint& m,
                                      const MTangentVector& u, double t1, double t2);

/// X_f = (df/dp, -df/dq) in the canonical chart, so that coordinate and
/// momentum observables generate the standard Hamiltonian flow.
MTangentVector hamiltonian_vector_field(const ObservableOnMF& f, const FreeSolutionPoint& m,
                                        double t);

/// {f, g} = sum_a (df/dq_a dg/dp_a - df/dp_a dg/dq_a); canonical pairs give +1.
double poisson_bracket(const ObservableOnMF& f, const ObservableOnMF& g,
                       const FreeSolutionPoint& m, double t);

// Ready-made observables used by the verification suites.

/// q_a (kind 'q') or p_a (kind 'p') read off through the time-t evaluation map.
ObservableOnMF coordinate_observable(const FreeFlow& flow, char kind, int axis);

/// A phase-space Hamiltonian pulled back through the time-t evaluation map.
ObservableOnMF pullback_observable(const FreeFlow& flow, const HamiltonianFn& h,
                                   std::string name);

} // namespace sympict
