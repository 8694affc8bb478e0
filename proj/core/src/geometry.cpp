#include "sympict/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sympict {

double mf_fd_step(const FreeSolutionPoint& m) {
    double scale = 0.0;
    for (double v : m.coords.q) scale = std::max(scale, std::abs(v));
    for (double v : m.coords.p) scale = std::max(scale, std::abs(v));
    return 1e-5 * std::max(1.0, scale);
}

FreeSolutionPoint shift_point(const FreeSolutionPoint& m, const MTangentVector& u, double eps) {
    FreeSolutionPoint out = m;
    for (int i = 0; i < m.dim(); ++i) {
        out.coords.q[i] += eps * u.dq[i];
        out.coords.p[i] += eps * u.dp[i];
    }
    return out;
}

double omega_eval(const FreeSolutionPoint& m, const MTangentVector& u, const MTangentVector& v) {
    const int n = m.dim();
    if (u.dim() != n || v.dim() != n)
        throw InvalidParameter("omega_eval: tangent dimension mismatch");
    double sum = 0.0;
    for (int a = 0; a < n; ++a) sum += u.dp[a] * v.dq[a] - v.dp[a] * u.dq[a];
    return sum;
}

double theta_eval(const FreeFlow& flow, const FreeSolutionPoint& m, const MTangentVector& u,
                  double t) {
    if (!flow.system().free_lagrangian)
        throw InvalidParameter("theta_eval: system has no free Lagrangian");
    const PhasePoint x = flow.forward(m, t);
    const MTangentVector ut = flow.push_tangent(m, u, t);
    double sum = 0.0;
    for (int a = 0; a < m.dim(); ++a) sum += x.p[a] * ut.dq[a];
    return sum;
}

double omega_chart_independence(const FreeFlow& flow, const FreeSolutionPoint& m,
                                const MTangentVector& u, const MTangentVector& v,
                                const std::vector<double>& t_refs) {
    if (t_refs.empty())
        throw InvalidParameter("omega_chart_independence: need at least one chart time");
    std::vector<double> values;
    values.reserve(t_refs.size());
    for (double tr : t_refs) {
        const FreeSolutionPoint mt = flow.rechart(m, tr);
        const MTangentVector ut = flow.push_tangent(m, u, tr);
        const MTangentVector vt = flow.push_tangent(m, v, tr);
        values.push_back(omega_eval(mt, ut, vt));
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            dev = std::max(dev, std::abs(values[i] - values[j]));
    return dev;
}

double omega_from_theta_fd(const FreeFlow& flow, const FreeSolutionPoint& m,
                           const MTangentVector& u, const MTangentVector& v, double t) {
    const double eps = mf_fd_step(m);
    const double u_theta_v = (theta_eval(flow, shift_point(m, u, eps), v, t) -
                              theta_eval(flow, shift_point(m, u, -eps), v, t)) /
                             (2.0 * eps);
    const double v_theta_u = (theta_eval(flow, shift_point(m, v, eps), u, t) -
                              theta_eval(flow, shift_point(m, v, -eps), u, t)) /
                             (2.0 * eps);
    return u_theta_v - v_theta_u;
}

double action_free(const FreeFlow& flow, const FreeSolutionPoint& m, double t1, double t2,
                   double quad_tol) {
    if (!flow.system().free_lagrangian)
        throw InvalidParameter("action_free: system has no free Lagrangian");
    if (t1 == t2) return 0.0;
    const LagrangianFn& l0 = *flow.system().free_lagrangian;
    auto integrand = [&](double t) {
        const TangentPoint x = flow.tau(m, t);
        return l0.value(x.q, x.qdot);
    };
    return quadrature(integrand, t1, t2, quad_tol);
}

ExactnessCheck action_exactness_check(const FreeFlow& flow, const FreeSolutionPoint& m,
                                      const MTangentVector& u, double t1, double t2) {
    const double eps = mf_fd_step(m);
    ExactnessCheck out;
    out.lhs = (action_free(flow, shift_point(m, u, eps), t1, t2) -
               action_free(flow, shift_point(m, u, -eps), t1, t2)) /
              (2.0 * eps);
    out.rhs = theta_eval(flow, m, u, t2) - theta_eval(flow, m, u, t1);
    return out;
}

namespace {

void observable_gradient(const ObservableOnMF& f, const FreeSolutionPoint& m, double t,
                         Vec& dfdq, Vec& dfdp) {
    if (f.gradient) {
        f.gradient(m, t, dfdq, dfdp);
        return;
    }
    const int n = m.dim();
    const Vec g = gradient_fd(
        [&](const Vec& c) {
            return f.value(FreeSolutionPoint{unflatten_phase(c, n), m.t_ref}, t);
        },
        flatten(m.coords));
    dfdq.assign(g.begin(), g.begin() + n);
    dfdp.assign(g.begin() + n, g.end());
}

} // namespace

MTangentVector hamiltonian_vector_field(const ObservableOnMF& f, const FreeSolutionPoint& m,
                                        double t) {
    Vec dfdq, dfdp;
    observable_gradient(f, m, t, dfdq, dfdp);
    if (!all_finite(dfdq) || !all_finite(dfdp))
        throw NonFiniteValue("hamiltonian_vector_field: gradient of '" + f.name +
                             "' is not finite");
    MTangentVector x;
    x.dq = dfdp;
    x.dp.resize(dfdq.size());
    for (std::size_t i = 0; i < dfdq.size(); ++i) x.dp[i] = -dfdq[i];
    return x;
}

double poisson_bracket(const ObservableOnMF& f, const ObservableOnMF& g,
                       const FreeSolutionPoint& m, double t) {
    Vec fq, fp, gq, gp;
    observable_gradient(f, m, t, fq, fp);
    observable_gradient(g, m, t, gq, gp);
    if (!all_finite(fq) || !all_finite(fp) || !all_finite(gq) || !all_finite(gp))
        throw NonFiniteValue("poisson_bracket: non-finite gradient");
    double sum = 0.0;
    for (std::size_t a = 0; a < fq.size(); ++a) sum += fq[a] * gp[a] - fp[a] * gq[a];
    return sum;
}

ObservableOnMF coordinate_observable(const FreeFlow& flow, char kind, int axis) {
    if (kind != 'q' && kind != 'p')
        throw InvalidParameter("coordinate_observable: kind must be 'q' or 'p'");
    if (axis < 0 || axis >= flow.system().dim)
        throw InvalidParameter("coordinate_observable: axis out of range");
    ObservableOnMF obs;
    obs.name = std::string(1, kind) + "_" + std::to_string(axis + 1);
    obs.value = [&flow, kind, axis](const FreeSolutionPoint& m, double t) {
        const PhasePoint x = flow.forward(m, t);
        return kind == 'q' ? x.q[axis] : x.p[axis];
    };
    return obs;
}

ObservableOnMF pullback_observable(const FreeFlow& flow, const HamiltonianFn& h,
                                   std::string name) {
    ObservableOnMF obs;
    obs.name = std::move(name);
    obs.value = [&flow, h](const FreeSolutionPoint& m, double t) {
        return h.value(flow.forward(m, t));
    };
    return obs;
}

} // namespace sympict
