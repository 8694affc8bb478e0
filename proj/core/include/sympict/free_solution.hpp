#pragma once

#include <memory>

#include "sympict/numeric.hpp"
#include "sympict/system.hpp"
#include "sympict/types.hpp"

namespace sympict {

enum class FlowMode { closed_form, numeric };

IntegratorConfig default_flow_integrator();

/// The free flow of a split system: evaluates a free solution (an element of
/// the free-solution space, held as chart data) and its derivatives at any
/// time, moving between the solution manifold and phase space.
///
/// Closed-form mode uses the catalog system's analytic flow; numeric mode
/// integrates the free Hamilton equations, jointly with their variational
/// system when tangents are pushed.
class FreeFlow {
public:
    FreeFlow(SplitSystem system, FlowMode mode,
             IntegratorConfig cfg = default_flow_integrator());

    /// Picks closed-form mode when the system provides it, numeric otherwise.
    static FreeFlow preferred(SplitSystem system,
                              IntegratorConfig cfg = default_flow_integrator());

    /// Phase coordinates (q0(t), p0(t)) of the free solution through m.
    PhasePoint forward(const FreeSolutionPoint& m, double t) const;

    /// The free solution whose value at time t is x, charted at t_ref.
    FreeSolutionPoint inverse(const PhasePoint& x, double t, double t_ref) const;

    /// Velocity-space evaluation (q0(t), qdot0(t)); needs the free Lagrangian.
    TangentPoint tau(const FreeSolutionPoint& m, double t) const;

    /// Solution of the variational equations along the free solution through
    /// m, from the chart time to t: the Jacobian of the time-t evaluation map
    /// applied to u. u must be anchored at m's chart.
    MTangentVector push_tangent(const FreeSolutionPoint& m, const MTangentVector& u,
                                double t) const;

    /// Same abstract solution re-expressed in the chart at new_t_ref.
    FreeSolutionPoint rechart(const FreeSolutionPoint& m, double new_t_ref) const;

    /// True iff a and b denote the same abstract free solution within tol.
    bool same_point(const FreeSolutionPoint& a, const FreeSolutionPoint& b, double tol) const;

    /// Jacobian of the time-t evaluation map at m, assembled column by column.
    Mat jacobian(const FreeSolutionPoint& m, double t) const;

    const SplitSystem& system() const { return *system_; }
    FlowMode mode() const { return mode_; }

private:
    std::shared_ptr<const SplitSystem> system_;
    FlowMode mode_;
    IntegratorConfig cfg_;

    PhasePoint flow_for(const PhasePoint& x, double duration) const;
};

/// Central-difference Jacobian of the time-t evaluation map; the independent
/// cross-check for push_tangent and the Liouville determinant.
Mat fd_flow_jacobian(const FreeFlow& flow, const FreeSolutionPoint& m, double t,
                     double eps = 1e-5);

} // namespace sympict
