#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sympict/types.hpp"

namespace sympict {

enum class OdeMethod { rk4_fixed, rk45_adaptive, stormer_verlet };

OdeMethod ode_method_from_string(std::string_view name);
std::string_view to_string(OdeMethod method);

struct IntegratorConfig {
    OdeMethod method = OdeMethod::rk4_fixed;
    double dt = 1e-3;          // fixed-step size; also the initial step for rk45
    double abs_tol = 1e-10;    // rk45 only
    double rel_tol = 1e-10;    // rk45 only
    long max_steps = 50'000'000;

    void validate() const;
};

/// Separable Hamiltonian structure H(q, p) = T(p) + V(q), over a state
/// vector laid out as [q, p]. Required by the Stormer-Verlet method.
struct SeparableStructure {
    int dof = 0;
    std::function<Vec(const Vec&)> kinetic_grad;    // dT/dp
    std::function<Vec(const Vec&)> potential_grad;  // dV/dq
};

struct OdeProblem {
    int dim = 0;
    std::function<void(double, const Vec&, Vec&)> rhs;
    double t0 = 0.0;
    Vec y0;
    std::optional<SeparableStructure> separable;
};

struct SolutionSamples {
    std::vector<double> times;       // strictly increasing
    std::vector<Vec> states;

    std::size_t size() const { return times.size(); }
};

/// State magnitude above which integration is aborted as a blow-up.
inline constexpr double k_blowup_threshold = 1e12;

/// Integrates the problem from t0 toward t_end and returns the state at each
/// requested sample time. Backward integration (t_end < t0) is supported;
/// sample_times must be sorted in the direction of integration and lie
/// between t0 and t_end. Output samples are always in increasing time order.
SolutionSamples integrate(const OdeProblem& problem, double t_end,
                          const IntegratorConfig& cfg,
                          const std::vector<double>& sample_times);

/// Endpoint-only convenience wrapper around integrate().
Vec integrate_to(const OdeProblem& problem, double t_end, const IntegratorConfig& cfg);

/// Signed adaptive-Simpson integral of f over [a, b].
double quadrature(const std::function<double(double)>& f, double a, double b, double tol);

/// Central-difference gradient with per-component steps scaled as
/// cbrt(eps) * max(1, |x_i|).
Vec gradient_fd(const std::function<double(const Vec&)>& f, const Vec& x);

/// Central-difference Hessian with steps scaled as eps^(1/4) * max(1, |x_i|).
Mat hessian_fd(const std::function<double(const Vec&)>& f, const Vec& x);

/// Solves A x = b for square A; throws SingularMatrix when A is not invertible.
Vec solve_linear(const Mat& A, const Vec& b);

double determinant(const Mat& A);

/// Transpose-vector product A^T x.
Vec transpose_apply(const Mat& A, const Vec& x);

} // namespace sympict
