#include "sympict/pictures.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sympict {

std::vector<double> sample_grid(double t0, double t_end, int samples) {
    if (samples < 1) throw InvalidParameter("sample_grid: need at least one sample");
    if (t_end == t0) return {t0};
    if (samples < 2) throw InvalidParameter("sample_grid: need at least two samples");
    std::vector<double> grid(static_cast<std::size_t>(samples));
    const double span = t_end - t0;
    for (int i = 0; i < samples; ++i)
        grid[static_cast<std::size_t>(i)] =
            t0 + span * static_cast<double>(i) / static_cast<double>(samples - 1);
    grid.back() = t_end;
    return grid;
}

namespace {

OdeProblem full_flow_problem(const SplitSystem& system, const HamiltonianFn& total,
                             const PhasePoint& x0, double t0) {
    const int n = system.dim;
    OdeProblem problem;
    problem.dim = 2 * n;
    problem.t0 = t0;
    problem.y0 = flatten(x0);
    problem.rhs = [&total, n](double, const Vec& y, Vec& dy) {
        const HamiltonianGrad g = hamiltonian_grad(total, unflatten_phase(y, n));
        for (int i = 0; i < n; ++i) {
            dy[i] = g.dp[i];
            dy[n + i] = -g.dq[i];
        }
    };
    if (system.separable_total) {
        SeparableStructure sep;
        sep.dof = n;
        sep.kinetic_grad = [&total, n](const Vec& p) {
            return hamiltonian_grad(total, PhasePoint{Vec(static_cast<std::size_t>(n), 0.0), p}).dp;
        };
        sep.potential_grad = [&total, n](const Vec& q) {
            return hamiltonian_grad(total, PhasePoint{q, Vec(static_cast<std::size_t>(n), 0.0)}).dq;
        };
        problem.separable = std::move(sep);
    }
    return problem;
}

void record_energies(const SplitSystem& system, Trajectory& traj) {
    auto& h = traj.diagnostics["H"];
    auto& h0 = traj.diagnostics["H0"];
    auto& h1 = traj.diagnostics["H1"];
    h.reserve(traj.size());
    h0.reserve(traj.size());
    h1.reserve(traj.size());
    for (const PhasePoint& x : traj.phase) {
        const double e0 = system.free_hamiltonian.value(x);
        const double e1 = system.interaction_hamiltonian.value(x);
        h0.push_back(e0);
        h1.push_back(e1);
        h.push_back(e0 + e1);
    }
}

Trajectory full_flow_trajectory(const SplitSystem& system, const PhasePoint& x0, double t0,
                                double t_end, const IntegratorConfig& cfg, int samples) {
    check_phase_point(x0, "evolve");
    if (x0.dim() != system.dim) throw InvalidParameter("evolve: initial state dimension mismatch");
    const HamiltonianFn total = system.total_hamiltonian();

    Trajectory traj;
    if (t_end == t0) {
        traj.times = {t0};
        traj.phase = {x0};
        record_energies(system, traj);
        return traj;
    }
    const OdeProblem problem = full_flow_problem(system, total, x0, t0);
    const SolutionSamples sol = integrate(problem, t_end, cfg, sample_grid(t0, t_end, samples));
    traj.times = sol.times;
    traj.phase.reserve(sol.size());
    for (const Vec& y : sol.states) traj.phase.push_back(unflatten_phase(y, system.dim));
    record_energies(system, traj);
    return traj;
}

} // namespace

Trajectory evolve_direct(const SplitSystem& system, const PhasePoint& x0, double t0,
                         double t_end, const IntegratorConfig& cfg, int samples) {
    return full_flow_trajectory(system, x0, t0, t_end, cfg, samples);
}

Trajectory evolve_heisenberg(const SplitSystem& system, const PhasePoint& x0, double t0,
                             double t_end, const IntegratorConfig& cfg, int samples) {
    // The state never moves; evaluating the time-indexed observables at the
    // fixed point is the full flow applied to it, so the kernel is shared.
    return full_flow_trajectory(system, x0, t0, t_end, cfg, samples);
}

double pullback_interaction(const FreeFlow& flow, const SplitSystem& system,
                            const FreeSolutionPoint& m, double t) {
    return system.interaction_hamiltonian.value(flow.forward(m, t));
}

MTangentVector interaction_vector_field(const FreeFlow& flow, const SplitSystem& system,
                                        const FreeSolutionPoint& m, double t) {
    const int n = system.dim;
    const PhasePoint x = flow.forward(m, t);
    const HamiltonianGrad g = hamiltonian_grad(system.interaction_hamiltonian, x);
    Vec grad_x(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grad_x[static_cast<std::size_t>(i)] = g.dq[i];
        grad_x[static_cast<std::size_t>(n + i)] = g.dp[i];
    }
    const Vec grad_m = transpose_apply(flow.jacobian(m, t), grad_x);
    if (!all_finite(grad_m))
        throw NonFiniteValue("interaction_vector_field: non-finite pullback gradient");
    MTangentVector out{Vec(static_cast<std::size_t>(n)), Vec(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) {
        out.dq[i] = grad_m[static_cast<std::size_t>(n + i)];
        out.dp[i] = -grad_m[static_cast<std::size_t>(i)];
    }
    return out;
}

MTangentVector interaction_vector_field_fd(const FreeFlow& flow, const SplitSystem& system,
                                           const FreeSolutionPoint& m, double t) {
    const int n = system.dim;
    const Vec grad_m = gradient_fd(
        [&](const Vec& c) {
            return pullback_interaction(flow, system,
                                        FreeSolutionPoint{unflatten_phase(c, n), m.t_ref}, t);
        },
        flatten(m.coords));
    MTangentVector out{Vec(static_cast<std::size_t>(n)), Vec(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) {
        out.dq[i] = grad_m[static_cast<std::size_t>(n + i)];
        out.dp[i] = -grad_m[static_cast<std::size_t>(i)];
    }
    return out;
}

MTangentVector interaction_vector_field_checked(const FreeFlow& flow, const SplitSystem& system,
                                                const FreeSolutionPoint& m, double t,
                                                double disagreement_tol) {
    const MTangentVector chain = interaction_vector_field(flow, system, m, t);
    const MTangentVector fd = interaction_vector_field_fd(flow, system, m, t);
    double dev = 0.0;
    for (int i = 0; i < system.dim; ++i) {
        dev = std::max(dev, std::abs(chain.dq[i] - fd.dq[i]));
        dev = std::max(dev, std::abs(chain.dp[i] - fd.dp[i]));
    }
    if (dev > disagreement_tol)
        throw PathDisagreement(
            "interaction_vector_field: chain-rule and finite-difference paths differ by " +
            std::to_string(dev));
    return chain;
}

Trajectory evolve_interaction(const FreeFlow& flow, const SplitSystem& system,
                              const FreeSolutionPoint& m0, double t0, double t_end,
                              const IntegratorConfig& cfg, int samples) {
    check_phase_point(m0.coords, "evolve_interaction");
    if (m0.dim() != system.dim)
        throw InvalidParameter("evolve_interaction: dimension mismatch");
    // The curve lives in the fixed chart at t0.
    const FreeSolutionPoint seed = (m0.t_ref == t0) ? m0 : flow.rechart(m0, t0);

    const int n = system.dim;
    Trajectory traj;
    auto push_sample = [&](double t, const PhasePoint& coords) {
        traj.times.push_back(t);
        traj.phase.push_back(coords);
        traj.mf.push_back(FreeSolutionPoint{coords, t0});
        traj.diagnostics["H1_pullback"].push_back(
            pullback_interaction(flow, system, FreeSolutionPoint{coords, t0}, t));
    };

    if (t_end == t0) {
        push_sample(t0, seed.coords);
        return traj;
    }

    OdeProblem problem;
    problem.dim = 2 * n;
    problem.t0 = t0;
    problem.y0 = flatten(seed.coords);
    problem.rhs = [&flow, &system, n, t0](double t, const Vec& y, Vec& dy) {
        const MTangentVector x = interaction_vector_field(
            flow, system, FreeSolutionPoint{unflatten_phase(y, n), t0}, t);
        for (int i = 0; i < n; ++i) {
            dy[i] = x.dq[i];
            dy[n + i] = x.dp[i];
        }
    };
    const std::vector<double> grid = sample_grid(t0, t_end, samples);
    const SolutionSamples sol = integrate(problem, t_end, cfg, grid);

    // Consistency probes: the two gradient paths must agree along the curve.
    const std::size_t probe_stride = std::max<std::size_t>(1, sol.size() / 8);
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const PhasePoint coords = unflatten_phase(sol.states[i], n);
        if (i % probe_stride == 0)
            interaction_vector_field_checked(flow, system, FreeSolutionPoint{coords, t0},
                                             sol.times[i]);
        push_sample(sol.times[i], coords);
    }
    return traj;
}

Trajectory reconstruct(const FreeFlow& flow, const SplitSystem& system,
                       const Trajectory& interaction_traj) {
    if (interaction_traj.mf.size() != interaction_traj.size())
        throw InvalidParameter("reconstruct: trajectory carries no free-solution samples");
    Trajectory out;
    out.times = interaction_traj.times;
    out.mf = interaction_traj.mf;
    out.phase.reserve(interaction_traj.size());
    for (std::size_t i = 0; i < interaction_traj.size(); ++i)
        out.phase.push_back(flow.forward(interaction_traj.mf[i], interaction_traj.times[i]));
    record_energies(system, out);
    return out;
}

IntegratorConfig reference_integrator() {
    IntegratorConfig cfg;
    cfg.method = OdeMethod::rk4_fixed;
    cfg.dt = 1e-5;
    cfg.max_steps = 200'000'000;
    return cfg;
}

namespace {

PictureComparison compare_against(const std::string& name, const Trajectory& reference,
                                  const Trajectory& candidate, const SplitSystem& system,
                                  const PhasePoint& x0, double tolerance) {
    PictureComparison cmp;
    cmp.name = name;
    cmp.ran = true;
    const double e_ref = system.total_energy(x0);
    cmp.dq_dev.reserve(reference.size());
    cmp.dp_dev.reserve(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        double dq = 0.0, dp = 0.0;
        for (int a = 0; a < system.dim; ++a) {
            dq = std::max(dq, std::abs(candidate.phase[i].q[a] - reference.phase[i].q[a]));
            dp = std::max(dp, std::abs(candidate.phase[i].p[a] - reference.phase[i].p[a]));
        }
        cmp.dq_dev.push_back(dq);
        cmp.dp_dev.push_back(dp);
        cmp.max_deviation = std::max(cmp.max_deviation, std::max(dq, dp));
        cmp.energy_drift =
            std::max(cmp.energy_drift, std::abs(system.total_energy(candidate.phase[i]) - e_ref));
    }
    cmp.pass = cmp.max_deviation <= tolerance;
    return cmp;
}

PictureComparison failed_comparison(const std::string& name, const std::string& error) {
    PictureComparison cmp;
    cmp.name = name;
    cmp.ran = false;
    cmp.error = error;
    return cmp;
}

} // namespace

EquivalenceReport equivalence_report(const SplitSystem& system, const PhasePoint& x0,
                                     double t0, double t_end, const IntegratorConfig& cfg,
                                     int samples, double tolerance) {
    if (!(tolerance > 0.0)) throw InvalidParameter("equivalence_report: tolerance must be > 0");
    EquivalenceReport report;
    report.system_id = system.id;
    report.tolerance = tolerance;
    report.times = sample_grid(t0, t_end, samples);

    const Trajectory reference =
        evolve_direct(system, x0, t0, t_end, reference_integrator(), samples);

    try {
        const Trajectory direct = evolve_direct(system, x0, t0, t_end, cfg, samples);
        report.direct = compare_against("direct", reference, direct, system, x0, tolerance);
    } catch (const std::exception& e) {
        report.direct = failed_comparison("direct", e.what());
    }

    try {
        const Trajectory heis = evolve_heisenberg(system, x0, t0, t_end, cfg, samples);
        report.heisenberg = compare_against("heisenberg", reference, heis, system, x0, tolerance);
    } catch (const std::exception& e) {
        report.heisenberg = failed_comparison("heisenberg", e.what());
    }

    try {
        const FreeFlow flow = FreeFlow::preferred(system);
        const FreeSolutionPoint m0 = flow.inverse(x0, t0, t0);
        const Trajectory curve = evolve_interaction(flow, system, m0, t0, t_end, cfg, samples);
        const Trajectory rebuilt = reconstruct(flow, system, curve);
        report.interaction =
            compare_against("interaction", reference, rebuilt, system, x0, tolerance);
    } catch (const std::exception& e) {
        report.interaction = failed_comparison("interaction", e.what());
    }

    report.pass = report.direct.ran && report.direct.pass && report.heisenberg.ran &&
                  report.heisenberg.pass && report.interaction.ran && report.interaction.pass;
    return report;
}

} // namespace sympict
