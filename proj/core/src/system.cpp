#include "sympict/system.hpp"

#include <algorithm>
#include <cmath>

namespace sympict {

LagrangianGrad lagrangian_grad(const LagrangianFn& L, const Vec& q, const Vec& qdot) {
    if (L.gradient) return L.gradient(q, qdot);
    LagrangianGrad g;
    g.dq = gradient_fd([&](const Vec& qq) { return L.value(qq, qdot); }, q);
    g.dqdot = gradient_fd([&](const Vec& v) { return L.value(q, v); }, qdot);
    return g;
}

HamiltonianGrad hamiltonian_grad(const HamiltonianFn& H, const PhasePoint& x) {
    if (H.gradient) return H.gradient(x);
    HamiltonianGrad g;
    g.dq = gradient_fd([&](const Vec& q) { return H.value(PhasePoint{q, x.p}); }, x.q);
    g.dp = gradient_fd([&](const Vec& p) { return H.value(PhasePoint{x.q, p}); }, x.p);
    return g;
}

Mat hamiltonian_hessian(const HamiltonianFn& H, const PhasePoint& x) {
    if (H.hessian) return H.hessian(x);
    const int n = x.dim();
    return hessian_fd([&, n](const Vec& y) { return H.value(unflatten_phase(y, n)); }, flatten(x));
}

HamiltonianFn SplitSystem::total_hamiltonian() const {
    HamiltonianFn total;
    total.arity = dim;
    const HamiltonianFn h0 = free_hamiltonian;
    const HamiltonianFn h1 = interaction_hamiltonian;
    total.value = [h0, h1](const PhasePoint& x) { return h0.value(x) + h1.value(x); };
    if (h0.gradient && h1.gradient) {
        total.gradient = [h0, h1](const PhasePoint& x) {
            HamiltonianGrad a = h0.gradient(x);
            const HamiltonianGrad b = h1.gradient(x);
            for (std::size_t i = 0; i < a.dq.size(); ++i) a.dq[i] += b.dq[i];
            for (std::size_t i = 0; i < a.dp.size(); ++i) a.dp[i] += b.dp[i];
            return a;
        };
    }
    if (h0.hessian && h1.hessian) {
        total.hessian = [h0, h1](const PhasePoint& x) {
            Mat a = h0.hessian(x);
            const Mat b = h1.hessian(x);
            for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
            return a;
        };
    }
    return total;
}

PhasePoint legendre_map(const LagrangianFn& L, const TangentPoint& x) {
    check_tangent_point(x, "legendre_map");
    if (L.arity != x.dim()) throw InvalidParameter("legendre_map: arity mismatch");
    const LagrangianGrad g = lagrangian_grad(L, x.q, x.qdot);
    if (!all_finite(g.dqdot))
        throw NonFiniteDerivative("legendre_map: momentum is not finite");
    return PhasePoint{x.q, g.dqdot};
}

double regularity_check(const LagrangianFn& L, const TangentPoint& x) {
    check_tangent_point(x, "regularity_check");
    if (L.arity != x.dim()) throw InvalidParameter("regularity_check: arity mismatch");
    const Mat hess = hessian_fd([&](const Vec& v) { return L.value(x.q, v); }, x.qdot);
    return determinant(hess);
}

namespace {

double residual_norm(const Vec& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
}

double det_scale(const Mat& a) {
    double row_norm = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += std::abs(a(i, j));
        row_norm = std::max(row_norm, s);
    }
    return std::max(1.0, std::pow(row_norm, static_cast<double>(a.rows)));
}

} // namespace

TangentPoint inverse_legendre(const LagrangianFn& L, const PhasePoint& x,
                              const Vec& guess, const NewtonOptions& opts) {
    check_phase_point(x, "inverse_legendre");
    if (L.arity != x.dim()) throw InvalidParameter("inverse_legendre: arity mismatch");
    const std::size_t n = x.q.size();
    Vec qdot = guess.empty() ? x.p : guess;
    if (qdot.size() != n) throw InvalidParameter("inverse_legendre: guess length mismatch");

    auto momentum = [&](const Vec& v) { return lagrangian_grad(L, x.q, v).dqdot; };
    auto residual = [&](const Vec& v) {
        Vec r = momentum(v);
        for (std::size_t i = 0; i < n; ++i) r[i] -= x.p[i];
        return r;
    };

    Vec r = residual(qdot);
    if (!all_finite(r)) throw NonFiniteDerivative("inverse_legendre: momentum not finite at guess");
    double rn = residual_norm(r);
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (rn <= opts.residual_tol * std::max(1.0, residual_norm(x.p))) {
            return TangentPoint{x.q, qdot};
        }
        const Mat jac = hessian_fd([&](const Vec& v) { return L.value(x.q, v); }, qdot);
        const double det = determinant(jac);
        if (!std::isfinite(det) || std::abs(det) < opts.singular_det_tol * det_scale(jac))
            throw SingularJacobian("inverse_legendre: velocity Hessian is singular (|det| = " +
                                   std::to_string(std::abs(det)) + ")");
        Vec neg_r = r;
        for (double& v : neg_r) v = -v;
        const Vec step = solve_linear(jac, neg_r);

        // Backtracking line search on the residual norm.
        double lambda = 1.0;
        Vec candidate(n);
        for (int bt = 0; bt < 12; ++bt) {
            for (std::size_t i = 0; i < n; ++i) candidate[i] = qdot[i] + lambda * step[i];
            Vec rc = residual(candidate);
            if (all_finite(rc) && residual_norm(rc) < rn) {
                qdot = candidate;
                r = std::move(rc);
                rn = residual_norm(r);
                break;
            }
            lambda *= 0.5;
            if (bt == 11) {
                qdot = candidate;
                r = residual(qdot);
                rn = residual_norm(r);
            }
        }
    }
    if (rn <= opts.residual_tol * std::max(1.0, residual_norm(x.p)))
        return TangentPoint{x.q, qdot};
    throw NoConvergence("inverse_legendre: Newton did not converge (residual " +
                        std::to_string(rn) + ")");
}

double hamiltonian_from_lagrangian(const LagrangianFn& L, const TangentPoint& x) {
    check_tangent_point(x, "hamiltonian_from_lagrangian");
    if (L.arity != x.dim()) throw InvalidParameter("hamiltonian_from_lagrangian: arity mismatch");
    const LagrangianGrad g = lagrangian_grad(L, x.q, x.qdot);
    if (!all_finite(g.dqdot))
        throw NonFiniteDerivative("hamiltonian_from_lagrangian: momentum is not finite");
    double h = -L.value(x.q, x.qdot);
    for (std::size_t i = 0; i < x.q.size(); ++i) h += x.qdot[i] * g.dqdot[i];
    return h;
}

EulerLagrangeResidual euler_lagrange_residual(const LagrangianFn& L, const Trajectory& path) {
    const std::size_t count = path.size();
    if (count < 5)
        throw InsufficientSamples("euler_lagrange_residual: need at least 5 uniform samples");
    if (path.phase.size() != count)
        throw InvalidParameter("euler_lagrange_residual: trajectory arrays disagree in length");
    const double dt = path.times[1] - path.times[0];
    if (!(dt > 0.0)) throw InvalidParameter("euler_lagrange_residual: times must increase");
    for (std::size_t i = 1; i + 1 < count; ++i) {
        if (std::abs((path.times[i + 1] - path.times[i]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw InvalidParameter("euler_lagrange_residual: samples must be uniform in time");
    }
    const std::size_t n = path.phase.front().q.size();

    // qdot by central differences, then the momentum dL/dqdot at each usable
    // sample, then its time derivative by central differences again.
    auto qdot_at = [&](std::size_t i) {
        Vec v(n);
        for (std::size_t a = 0; a < n; ++a)
            v[a] = (path.phase[i + 1].q[a] - path.phase[i - 1].q[a]) / (2.0 * dt);
        return v;
    };

    std::vector<Vec> momenta(count);
    std::vector<Vec> velocities(count);
    for (std::size_t i = 1; i + 1 < count; ++i) {
        velocities[i] = qdot_at(i);
        momenta[i] = lagrangian_grad(L, path.phase[i].q, velocities[i]).dqdot;
    }

    EulerLagrangeResidual out;
    for (std::size_t i = 2; i + 2 < count; ++i) {
        const LagrangianGrad g = lagrangian_grad(L, path.phase[i].q, velocities[i]);
        Vec r(n);
        for (std::size_t a = 0; a < n; ++a) {
            const double dmu = (momenta[i + 1][a] - momenta[i - 1][a]) / (2.0 * dt);
            r[a] = dmu - g.dq[a];
            out.max_abs = std::max(out.max_abs, std::abs(r[a]));
        }
        out.times.push_back(path.times[i]);
        out.residuals.push_back(std::move(r));
    }
    return out;
}

} // namespace sympict
