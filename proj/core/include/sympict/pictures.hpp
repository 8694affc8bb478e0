#pragma once

#include <string>
#include <vector>

#include "sympict/free_solution.hpp"
#include "sympict/numeric.hpp"
#include "sympict/system.hpp"
#include "sympict/types.hpp"

namespace sympict {

/// Uniform sample grid over [t0, t_end] with the given number of points.
std::vector<double> sample_grid(double t0, double t_end, int samples);

/// Phase-space description: integrates the full Hamilton equations for
/// H = H0 + H1 and records per-sample energies.
Trajectory evolve_direct(const SplitSystem& system, const PhasePoint& x0, double t0,
                         double t_end, const IntegratorConfig& cfg, int samples);

/// Motion-space description: the state is the fixed initial point of the
/// space of full motions; what evolves are the coordinate observables read
/// through the time-t evaluation map. Numerically that map is the full flow,
/// so the recorded observable values coincide with evolve_direct's samples.
Trajectory evolve_heisenberg(const SplitSystem& system, const PhasePoint& x0, double t0,
                             double t_end, const IntegratorConfig& cfg, int samples);

/// The interaction Hamiltonian read as a time-dependent function on the
/// free-solution space: H1 evaluated along the free flow.
double pullback_interaction(const FreeFlow& flow, const SplitSystem& system,
                            const FreeSolutionPoint& m, double t);

/// Hamiltonian vector field of the pulled-back interaction, computed by the
/// chain rule through the tangent flow's transpose action.
MTangentVector interaction_vector_field(const FreeFlow& flow, const SplitSystem& system,
                                        const FreeSolutionPoint& m, double t);

/// Same field by direct central differences of pullback_interaction over the
/// chart coordinates; the independent cross-check path.
MTangentVector interaction_vector_field_fd(const FreeFlow& flow, const SplitSystem& system,
                                           const FreeSolutionPoint& m, double t);

/// Chain-rule field, with the finite-difference path evaluated alongside;
/// throws PathDisagreement when the two differ beyond disagreement_tol.
MTangentVector interaction_vector_field_checked(const FreeFlow& flow, const SplitSystem& system,
                                                const FreeSolutionPoint& m, double t,
                                                double disagreement_tol = 1e-4);

/// Free-solution-space description: integrates the curve generated by the
/// pulled-back interaction in the fixed chart at t0. Sample phase values hold
/// the chart coordinates of the evolving point (the state in this
/// description); mf carries the same points for reconstruction.
Trajectory evolve_interaction(const FreeFlow& flow, const SplitSystem& system,
                              const FreeSolutionPoint& m0, double t0, double t_end,
                              const IntegratorConfig& cfg, int samples);

/// Measured values: applies the time-t evaluation map to each stored
/// free-solution point, yielding the physical (q(t), p(t)) samples.
Trajectory reconstruct(const FreeFlow& flow, const SplitSystem& system,
                       const Trajectory& interaction_traj);

struct PictureComparison {
    std::string name;
    bool ran = false;
    std::string error;                 // engine failure, when not empty
    std::vector<double> dq_dev;        // per-sample max_a |dq_a|
    std::vector<double> dp_dev;        // per-sample max_a |dp_a|
    double max_deviation = 0.0;
    double energy_drift = 0.0;         // max_t |H(x(t)) - H(x0)|
    bool pass = false;
};

struct EquivalenceReport {
    std::string system_id;
    std::vector<double> times;
    double tolerance = 0.0;
    PictureComparison direct;       // config integrator vs reference
    PictureComparison heisenberg;   // vs reference
    PictureComparison interaction;  // reconstructed vs reference
    bool pass = false;
};

/// Reference integrator used as the brute-force oracle for cross-picture
/// comparisons: fixed-step RK4 at dt = 1e-5 on the direct equations.
IntegratorConfig reference_integrator();

/// Runs all three engines from the same physical initial state and compares
/// each against the reference oracle. Engine failures are recorded in the
/// corresponding comparison rather than thrown.
EquivalenceReport equivalence_report(const SplitSystem& system, const PhasePoint& x0,
                                     double t0, double t_end, const IntegratorConfig& cfg,
                                     int samples, double tolerance);

} // namespace sympict
