#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sympict/errors.hpp"

namespace sympict {

using Vec = std::vector<double>;

/// Dense row-major matrix, sized for the small systems handled here.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline bool all_finite(const Vec& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

/// A point of the velocity phase space: generalized coordinates and velocities.
struct TangentPoint {
    Vec q;
    Vec qdot;

    int dim() const { return static_cast<int>(q.size()); }
};

/// A point of the momentum phase space: generalized coordinates and conjugate momenta.
struct PhasePoint {
    Vec q;
    Vec p;

    int dim() const { return static_cast<int>(q.size()); }
};

/// An element of the free-solution space, held in a chart: the phase
/// coordinates the underlying free solution takes at the reference time.
/// Two points with equal coords but different t_ref generally denote
/// distinct solutions.
struct FreeSolutionPoint {
    PhasePoint coords;
    double t_ref = 0.0;

    int dim() const { return coords.dim(); }
};

/// Tangent vector to the free-solution space, expressed in the canonical
/// chart of its anchor point.
struct MTangentVector {
    Vec dq;
    Vec dp;

    int dim() const { return static_cast<int>(dq.size()); }
};

/// Time-sampled evolution output shared by all three picture engines.
/// mf is populated by the interaction-picture engine only.
struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> phase;
    std::vector<FreeSolutionPoint> mf;
    std::map<std::string, std::vector<double>> diagnostics;

    std::size_t size() const { return times.size(); }
};

inline Vec flatten(const PhasePoint& x) {
    Vec out(x.q);
    out.insert(out.end(), x.p.begin(), x.p.end());
    return out;
}

inline PhasePoint unflatten_phase(const Vec& y, int n) {
    if (static_cast<int>(y.size()) != 2 * n)
        throw InvalidParameter("unflatten_phase: expected length " + std::to_string(2 * n));
    return PhasePoint{Vec(y.begin(), y.begin() + n), Vec(y.begin() + n, y.end())};
}

inline Vec flatten(const MTangentVector& u) {
    Vec out(u.dq);
    out.insert(out.end(), u.dp.begin(), u.dp.end());
    return out;
}

inline MTangentVector unflatten_tangent(const Vec& y, int n) {
    if (static_cast<int>(y.size()) != 2 * n)
        throw InvalidParameter("unflatten_tangent: expected length " + std::to_string(2 * n));
    return MTangentVector{Vec(y.begin(), y.begin() + n), Vec(y.begin() + n, y.end())};
}

inline void check_phase_point(const PhasePoint& x, const char* where) {
    if (x.q.empty() || x.q.size() != x.p.size())
        throw InvalidParameter(std::string(where) + ": q and p must have equal nonzero length");
    if (!all_finite(x.q) || !all_finite(x.p))
        throw InvalidParameter(std::string(where) + ": non-finite phase coordinates");
}

inline void check_tangent_point(const TangentPoint& x, const char* where) {
    if (x.q.empty() || x.q.size() != x.qdot.size())
        throw InvalidParameter(std::string(where) + ": q and qdot must have equal nonzero length");
    if (!all_finite(x.q) || !all_finite(x.qdot))
        throw InvalidParameter(std::string(where) + ": non-finite tangent coordinates");
}

} // namespace sympict
