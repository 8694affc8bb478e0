#include "sympict/free_solution.hpp"

#include <cmath>
#include <utility>

namespace sympict {

IntegratorConfig default_flow_integrator() {
    IntegratorConfig cfg;
    cfg.method = OdeMethod::rk4_fixed;
    cfg.dt = 1e-3;
    return cfg;
}

FreeFlow::FreeFlow(SplitSystem system, FlowMode mode, IntegratorConfig cfg)
    : system_(std::make_shared<const SplitSystem>(std::move(system))),
      mode_(mode),
      cfg_(cfg) {
    cfg_.validate();
    if (mode_ == FlowMode::closed_form && !system_->closed_free_flow)
        throw InvalidParameter("FreeFlow: system '" + system_->id +
                               "' has no closed-form free flow");
}

FreeFlow FreeFlow::preferred(SplitSystem system, IntegratorConfig cfg) {
    const FlowMode mode =
        system.closed_free_flow ? FlowMode::closed_form : FlowMode::numeric;
    return FreeFlow(std::move(system), mode, cfg);
}

PhasePoint FreeFlow::flow_for(const PhasePoint& x, double duration) const {
    if (duration == 0.0) return x;
    if (mode_ == FlowMode::closed_form) return system_->closed_free_flow->map(x, duration);

    const int n = system_->dim;
    OdeProblem problem;
    problem.dim = 2 * n;
    problem.t0 = 0.0;
    problem.y0 = flatten(x);
    const HamiltonianFn& h0 = system_->free_hamiltonian;
    problem.rhs = [&h0, n](double, const Vec& y, Vec& dy) {
        const HamiltonianGrad g = hamiltonian_grad(h0, unflatten_phase(y, n));
        for (int i = 0; i < n; ++i) {
            dy[i] = g.dp[i];
            dy[n + i] = -g.dq[i];
        }
    };
    return unflatten_phase(integrate_to(problem, duration, cfg_), n);
}

PhasePoint FreeFlow::forward(const FreeSolutionPoint& m, double t) const {
    check_phase_point(m.coords, "FreeFlow::forward");
    if (m.dim() != system_->dim) throw InvalidParameter("FreeFlow::forward: dimension mismatch");
    if (!std::isfinite(t)) throw InvalidParameter("FreeFlow::forward: t must be finite");
    return flow_for(m.coords, t - m.t_ref);
}

FreeSolutionPoint FreeFlow::inverse(const PhasePoint& x, double t, double t_ref) const {
    check_phase_point(x, "FreeFlow::inverse");
    return FreeSolutionPoint{flow_for(x, t_ref - t), t_ref};
}

TangentPoint FreeFlow::tau(const FreeSolutionPoint& m, double t) const {
    if (!system_->free_lagrangian)
        throw InvalidParameter("FreeFlow::tau: system has no free Lagrangian");
    return inverse_legendre(*system_->free_lagrangian, forward(m, t));
}

MTangentVector FreeFlow::push_tangent(const FreeSolutionPoint& m, const MTangentVector& u,
                                      double t) const {
    const int n = system_->dim;
    if (u.dim() != n || static_cast<int>(u.dp.size()) != n)
        throw InvalidParameter("FreeFlow::push_tangent: tangent dimension mismatch");
    const double duration = t - m.t_ref;
    if (duration == 0.0) return u;
    if (mode_ == FlowMode::closed_form)
        return system_->closed_free_flow->tangent(m.coords, u, duration);

    // Joint base + variational system so the tangent rides the exact same
    // discrete trajectory as the base point.
    OdeProblem problem;
    problem.dim = 4 * n;
    problem.t0 = 0.0;
    problem.y0 = flatten(m.coords);
    {
        const Vec du = flatten(u);
        problem.y0.insert(problem.y0.end(), du.begin(), du.end());
    }
    const HamiltonianFn& h0 = system_->free_hamiltonian;
    problem.rhs = [&h0, n](double, const Vec& y, Vec& dy) {
        const PhasePoint x = unflatten_phase(Vec(y.begin(), y.begin() + 2 * n), n);
        const HamiltonianGrad g = hamiltonian_grad(h0, x);
        const Mat hess = hamiltonian_hessian(h0, x);
        for (int i = 0; i < n; ++i) {
            dy[i] = g.dp[i];
            dy[n + i] = -g.dq[i];
        }
        // Variational part: (dq, dp)' = J * Hess(H0) * (dq, dp).
        for (int i = 0; i < n; ++i) {
            double top = 0.0, bottom = 0.0;
            for (int j = 0; j < 2 * n; ++j) {
                top += hess(static_cast<std::size_t>(n + i), j) * y[2 * n + j];
                bottom += hess(static_cast<std::size_t>(i), j) * y[2 * n + j];
            }
            dy[2 * n + i] = top;
            dy[2 * n + n + i] = -bottom;
        }
    };
    const Vec yend = integrate_to(problem, duration, cfg_);
    return unflatten_tangent(Vec(yend.begin() + 2 * n, yend.end()), n);
}

FreeSolutionPoint FreeFlow::rechart(const FreeSolutionPoint& m, double new_t_ref) const {
    if (new_t_ref == m.t_ref) return m;
    return FreeSolutionPoint{forward(m, new_t_ref), new_t_ref};
}

bool FreeFlow::same_point(const FreeSolutionPoint& a, const FreeSolutionPoint& b,
                          double tol) const {
    if (a.dim() != b.dim()) return false;
    const FreeSolutionPoint moved = rechart(a, b.t_ref);
    for (int i = 0; i < a.dim(); ++i) {
        if (std::abs(moved.coords.q[i] - b.coords.q[i]) > tol) return false;
        if (std::abs(moved.coords.p[i] - b.coords.p[i]) > tol) return false;
    }
    return true;
}

Mat FreeFlow::jacobian(const FreeSolutionPoint& m, double t) const {
    const int n = system_->dim;
    Mat jac(2 * n, 2 * n);
    for (int k = 0; k < 2 * n; ++k) {
        Vec e(2 * n, 0.0);
        e[k] = 1.0;
        const MTangentVector col = push_tangent(m, unflatten_tangent(e, n), t);
        for (int i = 0; i < n; ++i) {
            jac(static_cast<std::size_t>(i), k) = col.dq[i];
            jac(static_cast<std::size_t>(n + i), k) = col.dp[i];
        }
    }
    return jac;
}

Mat fd_flow_jacobian(const FreeFlow& flow, const FreeSolutionPoint& m, double t, double eps) {
    const int n = m.dim();
    Mat jac(2 * n, 2 * n);
    Vec base = flatten(m.coords);
    for (int k = 0; k < 2 * n; ++k) {
        Vec plus = base, minus = base;
        plus[k] += eps;
        minus[k] -= eps;
        const PhasePoint xp =
            flow.forward(FreeSolutionPoint{unflatten_phase(plus, n), m.t_ref}, t);
        const PhasePoint xm =
            flow.forward(FreeSolutionPoint{unflatten_phase(minus, n), m.t_ref}, t);
        for (int i = 0; i < n; ++i) {
            jac(static_cast<std::size_t>(i), k) = (xp.q[i] - xm.q[i]) / (2.0 * eps);
            jac(static_cast<std::size_t>(n + i), k) = (xp.p[i] - xm.p[i]) / (2.0 * eps);
        }
    }
    return jac;
}

} // namespace sympict
