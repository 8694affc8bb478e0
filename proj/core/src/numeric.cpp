#include "sympict/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sympict {

namespace {

using EigenRowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double fd_step_first(double x) {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    return base * std::max(1.0, std::abs(x));
}

double fd_step_second(double x) {
    static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    return base * std::max(1.0, std::abs(x));
}

void check_state(const Vec& y, double t) {
    for (double v : y) {
        if (!std::isfinite(v) || std::abs(v) > k_blowup_threshold)
            throw NonFiniteState("integrate: state blew up near t = " + std::to_string(t));
    }
}

struct Stepper {
    const OdeProblem& problem;
    const IntegratorConfig& cfg;
    long steps_taken = 0;
    Vec k1, k2, k3, k4, k5, k6, k7, ytmp, yerr;

    explicit Stepper(const OdeProblem& p, const IntegratorConfig& c) : problem(p), cfg(c) {}

    void eval(double t, const Vec& y, Vec& out) {
        out.assign(static_cast<std::size_t>(problem.dim), 0.0);
        problem.rhs(t, y, out);
        if (static_cast<int>(out.size()) != problem.dim)
            throw InvalidParameter("integrate: rhs output length does not match problem dimension");
    }

    void count_step(double t) {
        if (++steps_taken > cfg.max_steps)
            throw MaxStepsExceeded("integrate: exceeded max_steps near t = " + std::to_string(t));
    }

    void rk4_step(double t, double h, Vec& y) {
        const std::size_t m = y.size();
        eval(t, y, k1);
        ytmp.resize(m);
        for (std::size_t i = 0; i < m; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        eval(t + 0.5 * h, ytmp, k2);
        for (std::size_t i = 0; i < m; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        eval(t + 0.5 * h, ytmp, k3);
        for (std::size_t i = 0; i < m; ++i) ytmp[i] = y[i] + h * k3[i];
        eval(t + h, ytmp, k4);
        for (std::size_t i = 0; i < m; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    // Fixed-step RK4 across [t_a, t_b] with uniform sub-steps of size <= cfg.dt.
    void rk4_span(double t_a, double t_b, Vec& y) {
        const double span = t_b - t_a;
        if (span == 0.0) return;
        const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(span) / cfg.dt - 1e-12)));
        const double h = span / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            const double t = t_a + h * static_cast<double>(i);
            count_step(t);
            rk4_step(t, h, y);
            check_state(y, t + h);
        }
    }

    void verlet_span(double t_a, double t_b, Vec& y) {
        const auto& sep = *problem.separable;
        const int n = sep.dof;
        const double span = t_b - t_a;
        if (span == 0.0) return;
        const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(std::abs(span) / cfg.dt - 1e-12)));
        const double h = span / static_cast<double>(nsteps);
        Vec q(y.begin(), y.begin() + n), p(y.begin() + n, y.end());
        Vec gv, gt;
        for (long s = 0; s < nsteps; ++s) {
            count_step(t_a + h * static_cast<double>(s));
            gv = sep.potential_grad(q);
            for (int i = 0; i < n; ++i) p[i] -= 0.5 * h * gv[i];
            gt = sep.kinetic_grad(p);
            for (int i = 0; i < n; ++i) q[i] += h * gt[i];
            gv = sep.potential_grad(q);
            for (int i = 0; i < n; ++i) p[i] -= 0.5 * h * gv[i];
        }
        std::copy(q.begin(), q.end(), y.begin());
        std::copy(p.begin(), p.end(), y.begin() + n);
        check_state(y, t_b);
    }

    // Dormand-Prince 5(4): propagates the 5th-order solution, controls the
    // embedded 4th-order error estimate.
    void rk45_span(double t_a, double t_b, Vec& y) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const double dir = (t_b >= t_a) ? 1.0 : -1.0;
        const std::size_t m = y.size();
        double t = t_a;
        double h = dir * std::min(cfg.dt, std::abs(t_b - t_a));
        if (h == 0.0) return;
        while (dir * (t_b - t) > 0.0) {
            if (dir * (t + h) > dir * t_b) h = t_b - t;
            count_step(t);
            eval(t, y, k1);
            ytmp.resize(m);
            for (std::size_t i = 0; i < m; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
            eval(t + c2 * h, ytmp, k2);
            for (std::size_t i = 0; i < m; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            eval(t + c3 * h, ytmp, k3);
            for (std::size_t i = 0; i < m; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            eval(t + c4 * h, ytmp, k4);
            for (std::size_t i = 0; i < m; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            eval(t + c5 * h, ytmp, k5);
            for (std::size_t i = 0; i < m; ++i)
                ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            eval(t + h, ytmp, k6);
            yerr.resize(m);
            Vec ynew(m);
            for (std::size_t i = 0; i < m; ++i)
                ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            eval(t + h, ynew, k7);
            double err = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
                const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(e) / sc);
            }
            if (err <= 1.0) {
                t += h;
                y = std::move(ynew);
                check_state(y, t);
            }
            const double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
                throw NoConvergence("integrate: rk45 step size underflow at t = " + std::to_string(t));
        }
    }

    void advance(double t_a, double t_b, Vec& y) {
        switch (cfg.method) {
            case OdeMethod::rk4_fixed: rk4_span(t_a, t_b, y); break;
            case OdeMethod::rk45_adaptive: rk45_span(t_a, t_b, y); break;
            case OdeMethod::stormer_verlet: verlet_span(t_a, t_b, y); break;
        }
    }
};

} // namespace

OdeMethod ode_method_from_string(std::string_view name) {
    if (name == "rk4-fixed") return OdeMethod::rk4_fixed;
    if (name == "rk45-adaptive") return OdeMethod::rk45_adaptive;
    if (name == "stormer-verlet") return OdeMethod::stormer_verlet;
    throw InvalidParameter("unknown integrator method: " + std::string(name));
}

std::string_view to_string(OdeMethod method) {
    switch (method) {
        case OdeMethod::rk4_fixed: return "rk4-fixed";
        case OdeMethod::rk45_adaptive: return "rk45-adaptive";
        case OdeMethod::stormer_verlet: return "stormer-verlet";
    }
    return "unknown";
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidParameter("IntegratorConfig: dt must be > 0");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw InvalidParameter("IntegratorConfig: tolerances must be > 0");
    if (max_steps < 1) throw InvalidParameter("IntegratorConfig: max_steps must be >= 1");
}

SolutionSamples integrate(const OdeProblem& problem, double t_end,
                          const IntegratorConfig& cfg,
                          const std::vector<double>& sample_times) {
    cfg.validate();
    if (problem.dim <= 0) throw InvalidParameter("integrate: problem dimension must be >= 1");
    if (static_cast<int>(problem.y0.size()) != problem.dim)
        throw InvalidParameter("integrate: y0 length does not match dimension");
    if (cfg.method == OdeMethod::stormer_verlet) {
        if (!problem.separable || problem.separable->dof * 2 != problem.dim)
            throw MethodMismatch("integrate: stormer-verlet requires a separable Hamiltonian problem");
    }

    const double dir = (t_end >= problem.t0) ? 1.0 : -1.0;
    const double lo = std::min(problem.t0, t_end), hi = std::max(problem.t0, t_end);
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    double prev = problem.t0;
    for (double ts : sample_times) {
        if (ts < lo - slack || ts > hi + slack)
            throw InvalidParameter("integrate: sample time outside integration interval");
        if (ts != problem.t0 && dir * (ts - prev) < 0.0)
            throw InvalidParameter("integrate: sample times must be sorted in the direction of integration");
        prev = ts;
    }

    check_state(problem.y0, problem.t0);
    Stepper stepper(problem, cfg);
    SolutionSamples out;
    out.times.reserve(sample_times.size());
    out.states.reserve(sample_times.size());

    Vec y = problem.y0;
    double t = problem.t0;
    for (double ts : sample_times) {
        stepper.advance(t, ts, y);
        t = ts;
        out.times.push_back(ts);
        out.states.push_back(y);
    }
    if (dir < 0.0) {
        std::reverse(out.times.begin(), out.times.end());
        std::reverse(out.states.begin(), out.states.end());
    }
    return out;
}

Vec integrate_to(const OdeProblem& problem, double t_end, const IntegratorConfig& cfg) {
    const auto sol = integrate(problem, t_end, cfg, {t_end});
    return sol.states.front();
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    if (depth > 40)
        throw MaxDepthExceeded("quadrature: exceeded adaptive Simpson depth limit");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw NonFiniteValue("quadrature: integrand is not finite");
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw InvalidParameter("quadrature: tol must be > 0");
    if (a == b) return 0.0;
    if (a > b) return -quadrature(f, b, a, tol);
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw NonFiniteValue("quadrature: integrand is not finite");
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 0);
}

Vec gradient_fd(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size(), 0.0);
    Vec probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = fd_step_first(x[i]);
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFiniteValue("gradient_fd: function not finite near x");
        g[i] = (fp - fm) / ((x[i] + h) - (x[i] - h));
    }
    return g;
}

Mat hessian_fd(const std::function<double(const Vec&)>& f, const Vec& x) {
    const std::size_t n = x.size();
    Mat hess(n, n);
    const double f0 = f(x);
    if (!std::isfinite(f0)) throw NonFiniteValue("hessian_fd: function not finite at x");
    Vec probe = x;
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = fd_step_second(x[i]);
        probe[i] = x[i] + hi;
        const double fp = f(probe);
        probe[i] = x[i] - hi;
        const double fm = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFiniteValue("hessian_fd: function not finite near x");
        hess(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double hj = fd_step_second(x[j]);
            probe[i] = x[i] + hi;
            probe[j] = x[j] + hj;
            const double fpp = f(probe);
            probe[j] = x[j] - hj;
            const double fpm = f(probe);
            probe[i] = x[i] - hi;
            const double fmm = f(probe);
            probe[j] = x[j] + hj;
            const double fmp = f(probe);
            probe[i] = x[i];
            probe[j] = x[j];
            if (!std::isfinite(fpp) || !std::isfinite(fpm) || !std::isfinite(fmm) || !std::isfinite(fmp))
                throw NonFiniteValue("hessian_fd: function not finite near x");
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return hess;
}

Vec solve_linear(const Mat& A, const Vec& b) {
    if (A.rows != A.cols) throw InvalidParameter("solve_linear: matrix must be square");
    if (A.rows != b.size()) throw InvalidParameter("solve_linear: size mismatch");
    Eigen::Map<const EigenRowMat> a(A.data.data(), static_cast<Eigen::Index>(A.rows),
                                    static_cast<Eigen::Index>(A.cols));
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
        throw SingularMatrix("solve_linear: matrix is singular to working precision");
    Eigen::VectorXd x = lu.solve(rhs);
    return Vec(x.data(), x.data() + x.size());
}

double determinant(const Mat& A) {
    if (A.rows != A.cols) throw InvalidParameter("determinant: matrix must be square");
    if (A.rows == 0) return 1.0;
    Eigen::Map<const EigenRowMat> a(A.data.data(), static_cast<Eigen::Index>(A.rows),
                                    static_cast<Eigen::Index>(A.cols));
    return a.determinant();
}

Vec transpose_apply(const Mat& A, const Vec& x) {
    if (A.rows != x.size()) throw InvalidParameter("transpose_apply: size mismatch");
    Vec out(A.cols, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) out[j] += A(i, j) * x[i];
    return out;
}

} // namespace sympict
