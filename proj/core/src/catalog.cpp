#include "sympict/system.hpp"

#include <cmath>
#include <utility>

namespace sympict {

namespace {

std::map<std::string, double> resolve_params(const SystemSpec& spec,
                                             const std::map<std::string, double>& defaults) {
    std::map<std::string, double> out = defaults;
    for (const auto& [key, value] : spec.params) {
        auto it = out.find(key);
        if (it == out.end())
            throw InvalidParameter("load_system: system '" + spec.id +
                                   "' has no parameter named '" + key + "'");
        if (!std::isfinite(value))
            throw InvalidParameter("load_system: parameter '" + key + "' is not finite");
        it->second = value;
    }
    return out;
}

double require_positive(const std::map<std::string, double>& params, const std::string& key) {
    const double v = params.at(key);
    if (!(v > 0.0)) throw InvalidParameter("load_system: parameter '" + key + "' must be > 0");
    return v;
}

// Harmonic rotation with frequency w applied to one (q, p) pair.
void rotate_pair(double w, double dt, double& q, double& p) {
    const double c = std::cos(w * dt), s = std::sin(w * dt);
    const double qn = q * c + (p / w) * s;
    const double pn = -q * w * s + p * c;
    q = qn;
    p = pn;
}

SplitSystem build_harmonic_quartic(const SystemSpec& spec) {
    const auto params = resolve_params(spec, {{"omega", 1.0}, {"epsilon", 0.1}});
    const double w = require_positive(params, "omega");
    const double eps = params.at("epsilon");

    SplitSystem sys;
    sys.id = "harmonic+quartic";
    sys.dim = 1;
    sys.params = params;
    sys.separable_free = true;
    sys.separable_total = true;

    sys.free_hamiltonian.arity = 1;
    sys.free_hamiltonian.value = [w](const PhasePoint& x) {
        return 0.5 * (x.p[0] * x.p[0] + w * w * x.q[0] * x.q[0]);
    };
    sys.free_hamiltonian.gradient = [w](const PhasePoint& x) {
        return HamiltonianGrad{{w * w * x.q[0]}, {x.p[0]}};
    };
    sys.free_hamiltonian.hessian = [w](const PhasePoint&) {
        Mat h(2, 2);
        h(0, 0) = w * w;
        h(1, 1) = 1.0;
        return h;
    };

    sys.interaction_hamiltonian.arity = 1;
    sys.interaction_hamiltonian.value = [eps](const PhasePoint& x) {
        const double q2 = x.q[0] * x.q[0];
        return 0.25 * eps * q2 * q2;
    };
    sys.interaction_hamiltonian.gradient = [eps](const PhasePoint& x) {
        return HamiltonianGrad{{eps * x.q[0] * x.q[0] * x.q[0]}, {0.0}};
    };
    sys.interaction_hamiltonian.hessian = [eps](const PhasePoint& x) {
        Mat h(2, 2);
        h(0, 0) = 3.0 * eps * x.q[0] * x.q[0];
        return h;
    };

    LagrangianFn l0;
    l0.arity = 1;
    l0.value = [w](const Vec& q, const Vec& qd) {
        return 0.5 * qd[0] * qd[0] - 0.5 * w * w * q[0] * q[0];
    };
    l0.gradient = [w](const Vec& q, const Vec& qd) {
        return LagrangianGrad{{-w * w * q[0]}, {qd[0]}};
    };
    sys.free_lagrangian = l0;

    LagrangianFn lt;
    lt.arity = 1;
    lt.value = [w, eps](const Vec& q, const Vec& qd) {
        const double q2 = q[0] * q[0];
        return 0.5 * qd[0] * qd[0] - 0.5 * w * w * q2 - 0.25 * eps * q2 * q2;
    };
    lt.gradient = [w, eps](const Vec& q, const Vec& qd) {
        return LagrangianGrad{{-w * w * q[0] - eps * q[0] * q[0] * q[0]}, {qd[0]}};
    };
    sys.total_lagrangian = lt;

    ClosedFormFreeFlow flow;
    flow.map = [w](const PhasePoint& x, double dt) {
        PhasePoint out = x;
        rotate_pair(w, dt, out.q[0], out.p[0]);
        return out;
    };
    flow.tangent = [w](const PhasePoint&, const MTangentVector& u, double dt) {
        MTangentVector out = u;
        rotate_pair(w, dt, out.dq[0], out.dp[0]);
        return out;
    };
    sys.closed_free_flow = flow;
    return sys;
}

SplitSystem build_free_harmonic(const SystemSpec& spec) {
    const auto params = resolve_params(spec, {{"omega", 1.0}});
    const double w = require_positive(params, "omega");

    SplitSystem sys;
    sys.id = "free+harmonic";
    sys.dim = 1;
    sys.params = params;
    sys.separable_free = true;
    sys.separable_total = true;

    sys.free_hamiltonian.arity = 1;
    sys.free_hamiltonian.value = [](const PhasePoint& x) { return 0.5 * x.p[0] * x.p[0]; };
    sys.free_hamiltonian.gradient = [](const PhasePoint& x) {
        return HamiltonianGrad{{0.0}, {x.p[0]}};
    };
    sys.free_hamiltonian.hessian = [](const PhasePoint&) {
        Mat h(2, 2);
        h(1, 1) = 1.0;
        return h;
    };

    sys.interaction_hamiltonian.arity = 1;
    sys.interaction_hamiltonian.value = [w](const PhasePoint& x) {
        return 0.5 * w * w * x.q[0] * x.q[0];
    };
    sys.interaction_hamiltonian.gradient = [w](const PhasePoint& x) {
        return HamiltonianGrad{{w * w * x.q[0]}, {0.0}};
    };
    sys.interaction_hamiltonian.hessian = [w](const PhasePoint&) {
        Mat h(2, 2);
        h(0, 0) = w * w;
        return h;
    };

    LagrangianFn l0;
    l0.arity = 1;
    l0.value = [](const Vec&, const Vec& qd) { return 0.5 * qd[0] * qd[0]; };
    l0.gradient = [](const Vec&, const Vec& qd) { return LagrangianGrad{{0.0}, {qd[0]}}; };
    sys.free_lagrangian = l0;

    LagrangianFn lt;
    lt.arity = 1;
    lt.value = [w](const Vec& q, const Vec& qd) {
        return 0.5 * qd[0] * qd[0] - 0.5 * w * w * q[0] * q[0];
    };
    lt.gradient = [w](const Vec& q, const Vec& qd) {
        return LagrangianGrad{{-w * w * q[0]}, {qd[0]}};
    };
    sys.total_lagrangian = lt;

    ClosedFormFreeFlow flow;
    flow.map = [](const PhasePoint& x, double dt) {
        PhasePoint out = x;
        out.q[0] += x.p[0] * dt;
        return out;
    };
    flow.tangent = [](const PhasePoint&, const MTangentVector& u, double dt) {
        MTangentVector out = u;
        out.dq[0] += u.dp[0] * dt;
        return out;
    };
    sys.closed_free_flow = flow;
    return sys;
}

SplitSystem build_aniso2d_coupling(const SystemSpec& spec) {
    const auto params =
        resolve_params(spec, {{"omega1", 1.0}, {"omega2", 2.0}, {"epsilon", 0.05}});
    const double w1 = require_positive(params, "omega1");
    const double w2 = require_positive(params, "omega2");
    const double eps = params.at("epsilon");

    SplitSystem sys;
    sys.id = "aniso2d+coupling";
    sys.dim = 2;
    sys.params = params;
    sys.separable_free = true;
    sys.separable_total = true;

    sys.free_hamiltonian.arity = 2;
    sys.free_hamiltonian.value = [w1, w2](const PhasePoint& x) {
        return 0.5 * (x.p[0] * x.p[0] + x.p[1] * x.p[1] + w1 * w1 * x.q[0] * x.q[0] +
                      w2 * w2 * x.q[1] * x.q[1]);
    };
    sys.free_hamiltonian.gradient = [w1, w2](const PhasePoint& x) {
        return HamiltonianGrad{{w1 * w1 * x.q[0], w2 * w2 * x.q[1]}, {x.p[0], x.p[1]}};
    };
    sys.free_hamiltonian.hessian = [w1, w2](const PhasePoint&) {
        Mat h(4, 4);
        h(0, 0) = w1 * w1;
        h(1, 1) = w2 * w2;
        h(2, 2) = 1.0;
        h(3, 3) = 1.0;
        return h;
    };

    sys.interaction_hamiltonian.arity = 2;
    sys.interaction_hamiltonian.value = [eps](const PhasePoint& x) {
        return eps * x.q[0] * x.q[0] * x.q[1] * x.q[1];
    };
    sys.interaction_hamiltonian.gradient = [eps](const PhasePoint& x) {
        return HamiltonianGrad{
            {2.0 * eps * x.q[0] * x.q[1] * x.q[1], 2.0 * eps * x.q[0] * x.q[0] * x.q[1]},
            {0.0, 0.0}};
    };
    sys.interaction_hamiltonian.hessian = [eps](const PhasePoint& x) {
        Mat h(4, 4);
        h(0, 0) = 2.0 * eps * x.q[1] * x.q[1];
        h(1, 1) = 2.0 * eps * x.q[0] * x.q[0];
        h(0, 1) = 4.0 * eps * x.q[0] * x.q[1];
        h(1, 0) = h(0, 1);
        return h;
    };

    LagrangianFn l0;
    l0.arity = 2;
    l0.value = [w1, w2](const Vec& q, const Vec& qd) {
        return 0.5 * (qd[0] * qd[0] + qd[1] * qd[1] - w1 * w1 * q[0] * q[0] -
                      w2 * w2 * q[1] * q[1]);
    };
    l0.gradient = [w1, w2](const Vec& q, const Vec& qd) {
        return LagrangianGrad{{-w1 * w1 * q[0], -w2 * w2 * q[1]}, {qd[0], qd[1]}};
    };
    sys.free_lagrangian = l0;

    LagrangianFn lt;
    lt.arity = 2;
    lt.value = [w1, w2, eps](const Vec& q, const Vec& qd) {
        return 0.5 * (qd[0] * qd[0] + qd[1] * qd[1] - w1 * w1 * q[0] * q[0] -
                      w2 * w2 * q[1] * q[1]) -
               eps * q[0] * q[0] * q[1] * q[1];
    };
    lt.gradient = [w1, w2, eps](const Vec& q, const Vec& qd) {
        return LagrangianGrad{{-w1 * w1 * q[0] - 2.0 * eps * q[0] * q[1] * q[1],
                               -w2 * w2 * q[1] - 2.0 * eps * q[0] * q[0] * q[1]},
                              {qd[0], qd[1]}};
    };
    sys.total_lagrangian = lt;

    ClosedFormFreeFlow flow;
    flow.map = [w1, w2](const PhasePoint& x, double dt) {
        PhasePoint out = x;
        rotate_pair(w1, dt, out.q[0], out.p[0]);
        rotate_pair(w2, dt, out.q[1], out.p[1]);
        return out;
    };
    flow.tangent = [w1, w2](const PhasePoint&, const MTangentVector& u, double dt) {
        MTangentVector out = u;
        rotate_pair(w1, dt, out.dq[0], out.dp[0]);
        rotate_pair(w2, dt, out.dq[1], out.dp[1]);
        return out;
    };
    sys.closed_free_flow = flow;
    return sys;
}

// Error-path fixture: L0 = qdot * q is linear in qdot, so the velocity
// Hessian vanishes and the Legendre map cannot be inverted.
SplitSystem build_degenerate(const SystemSpec& spec) {
    const auto params = resolve_params(spec, {});
    SplitSystem sys;
    sys.id = "degenerate";
    sys.dim = 1;
    sys.params = params;
    sys.separable_free = true;
    sys.separable_total = true;

    sys.free_hamiltonian.arity = 1;
    sys.free_hamiltonian.value = [](const PhasePoint& x) { return 0.5 * x.p[0] * x.p[0]; };
    sys.free_hamiltonian.gradient = [](const PhasePoint& x) {
        return HamiltonianGrad{{0.0}, {x.p[0]}};
    };
    sys.free_hamiltonian.hessian = [](const PhasePoint&) {
        Mat h(2, 2);
        h(1, 1) = 1.0;
        return h;
    };
    sys.interaction_hamiltonian.arity = 1;
    sys.interaction_hamiltonian.value = [](const PhasePoint&) { return 0.0; };
    sys.interaction_hamiltonian.gradient = [](const PhasePoint&) {
        return HamiltonianGrad{{0.0}, {0.0}};
    };
    sys.interaction_hamiltonian.hessian = [](const PhasePoint&) { return Mat(2, 2); };

    LagrangianFn l0;
    l0.arity = 1;
    l0.value = [](const Vec& q, const Vec& qd) { return qd[0] * q[0]; };
    l0.gradient = [](const Vec& q, const Vec& qd) {
        return LagrangianGrad{{qd[0]}, {q[0]}};
    };
    sys.free_lagrangian = l0;
    sys.total_lagrangian = l0;

    ClosedFormFreeFlow flow;
    flow.map = [](const PhasePoint& x, double dt) {
        PhasePoint out = x;
        out.q[0] += x.p[0] * dt;
        return out;
    };
    flow.tangent = [](const PhasePoint&, const MTangentVector& u, double dt) {
        MTangentVector out = u;
        out.dq[0] += u.dp[0] * dt;
        return out;
    };
    sys.closed_free_flow = flow;
    return sys;
}

// ---------------------------------------------------------------------------
// Custom polynomial systems
// ---------------------------------------------------------------------------

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

std::vector<PolyTerm> normalize_terms(std::vector<PolyTerm> terms, int n, const char* which) {
    for (auto& t : terms) {
        if (!std::isfinite(t.c))
            throw InvalidParameter(std::string("load_system: non-finite coefficient in ") + which);
        if (static_cast<int>(t.qexp.size()) > n || static_cast<int>(t.pexp.size()) > n)
            throw InvalidParameter(std::string("load_system: exponent list longer than n in ") + which);
        t.qexp.resize(n, 0);
        t.pexp.resize(n, 0);
        for (int e : t.qexp)
            if (e < 0) throw InvalidParameter(std::string("load_system: negative exponent in ") + which);
        for (int e : t.pexp)
            if (e < 0) throw InvalidParameter(std::string("load_system: negative exponent in ") + which);
    }
    return terms;
}

bool terms_separable(const std::vector<PolyTerm>& terms) {
    for (const auto& t : terms) {
        bool has_q = false, has_p = false;
        for (int e : t.qexp) has_q |= (e > 0);
        for (int e : t.pexp) has_p |= (e > 0);
        if (has_q && has_p) return false;
    }
    return true;
}

HamiltonianFn make_poly_hamiltonian(std::vector<PolyTerm> terms, int n) {
    HamiltonianFn fn;
    fn.arity = n;
    auto shared = std::make_shared<std::vector<PolyTerm>>(std::move(terms));

    fn.value = [shared, n](const PhasePoint& x) {
        double sum = 0.0;
        for (const auto& t : *shared) {
            double v = t.c;
            for (int a = 0; a < n; ++a) v *= ipow(x.q[a], t.qexp[a]);
            for (int a = 0; a < n; ++a) v *= ipow(x.p[a], t.pexp[a]);
            sum += v;
        }
        return sum;
    };

    fn.gradient = [shared, n](const PhasePoint& x) {
        HamiltonianGrad g{Vec(n, 0.0), Vec(n, 0.0)};
        for (const auto& t : *shared) {
            for (int d = 0; d < n; ++d) {
                if (t.qexp[d] > 0) {
                    double v = t.c * t.qexp[d] * ipow(x.q[d], t.qexp[d] - 1);
                    for (int a = 0; a < n; ++a)
                        if (a != d) v *= ipow(x.q[a], t.qexp[a]);
                    for (int a = 0; a < n; ++a) v *= ipow(x.p[a], t.pexp[a]);
                    g.dq[d] += v;
                }
                if (t.pexp[d] > 0) {
                    double v = t.c * t.pexp[d] * ipow(x.p[d], t.pexp[d] - 1);
                    for (int a = 0; a < n; ++a) v *= ipow(x.q[a], t.qexp[a]);
                    for (int a = 0; a < n; ++a)
                        if (a != d) v *= ipow(x.p[a], t.pexp[a]);
                    g.dp[d] += v;
                }
            }
        }
        return g;
    };

    // Hessian over the flattened layout [q, p]; derivative of one monomial in
    // two slots, handling the diagonal (second derivative in one variable).
    fn.hessian = [shared, n](const PhasePoint& x) {
        Mat h(2 * n, 2 * n);
        auto exp_of = [n](const PolyTerm& t, int slot) {
            return slot < n ? t.qexp[slot] : t.pexp[slot - n];
        };
        auto coord_of = [n, &x](int slot) { return slot < n ? x.q[slot] : x.p[slot - n]; };
        for (const auto& t : *shared) {
            for (int i = 0; i < 2 * n; ++i) {
                for (int j = i; j < 2 * n; ++j) {
                    const int ei = exp_of(t, i), ej = exp_of(t, j);
                    double v;
                    if (i == j) {
                        if (ei < 2) continue;
                        v = t.c * ei * (ei - 1) * ipow(coord_of(i), ei - 2);
                    } else {
                        if (ei < 1 || ej < 1) continue;
                        v = t.c * ei * ej * ipow(coord_of(i), ei - 1) * ipow(coord_of(j), ej - 1);
                    }
                    for (int s = 0; s < 2 * n; ++s) {
                        if (s == i || s == j) continue;
                        v *= ipow(coord_of(s), exp_of(t, s));
                    }
                    h(i, j) += v;
                    if (i != j) h(j, i) = h(i, j);
                }
            }
        }
        return h;
    };
    return fn;
}

SplitSystem build_custom(const SystemSpec& spec) {
    if (spec.n < 1) throw InvalidParameter("load_system: custom system needs n >= 1");
    if (!spec.params.empty())
        throw InvalidParameter("load_system: custom systems take no named parameters");
    SplitSystem sys;
    sys.id = "custom";
    sys.dim = spec.n;
    const auto h0 = normalize_terms(spec.h0_terms, spec.n, "h0");
    const auto h1 = normalize_terms(spec.h1_terms, spec.n, "h1");
    sys.separable_free = terms_separable(h0);
    sys.separable_total = sys.separable_free && terms_separable(h1);
    sys.free_hamiltonian = make_poly_hamiltonian(h0, spec.n);
    sys.interaction_hamiltonian = make_poly_hamiltonian(h1, spec.n);
    return sys;
}

} // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"harmonic+quartic",
         "harmonic oscillator H0 = (p^2 + omega^2 q^2)/2 with quartic interaction H1 = epsilon q^4/4",
         1,
         {{"omega", 1.0}, {"epsilon", 0.1}}},
        {"free+harmonic",
         "free particle H0 = p^2/2 with harmonic interaction H1 = omega^2 q^2/2",
         1,
         {{"omega", 1.0}}},
        {"aniso2d+coupling",
         "2-D anisotropic oscillator with coupling interaction H1 = epsilon q1^2 q2^2",
         2,
         {{"omega1", 1.0}, {"omega2", 2.0}, {"epsilon", 0.05}}},
        {"degenerate",
         "degenerate-Lagrangian fixture (L0 linear in qdot); exercises regularity error paths",
         1,
         {}},
    };
    return entries;
}

SplitSystem load_system(const SystemSpec& spec) {
    if (spec.id == "harmonic+quartic") return build_harmonic_quartic(spec);
    if (spec.id == "free+harmonic") return build_free_harmonic(spec);
    if (spec.id == "aniso2d+coupling") return build_aniso2d_coupling(spec);
    if (spec.id == "degenerate") return build_degenerate(spec);
    if (spec.id == "custom") return build_custom(spec);
    throw UnknownCatalogId("load_system: unknown system id '" + spec.id + "'");
}

} // namespace sympict
