#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "convex.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "majorization.hpp"
#include "states.hpp"

namespace fentropy::bounds {

using entropy::ConvexFunction;

// Position of eps relative to the peak eps* = t (1 - 1/d) of the bound.
enum class Regime { rising, peak, falling };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::rising: return "rising";
        case Regime::peak: return "peak";
        default: return "falling";
    }
}

struct BoundQuery {
    ConvexFunction f;
    int d;
    double eps;
    double t;
};

struct BoundResult {
    double value;
    BoundQuery query;
    Regime regime;
};

// Audenaert's continuity bound for the von Neumann entropy:
// Delta_d(eps) = h(eps) + eps log2(d-1).
inline double audenaert_bound(double eps, int d) {
    if (d < 2)
        throw ParameterError("d must be >= 2, got " + std::to_string(d));
    if (!(eps >= 0.0 && eps <= 1.0))
        throw ParameterError("eps must lie in [0,1], got " + format_real(eps));
    return entropy::binary_entropy(eps) +
           eps * std::log2(static_cast<double>(d - 1));
}

// The trace-t bound: f(t) - f(t-eps) - (d-1) (f(eps/(d-1)) - f(0)),
// valid for eps in [0, t] and states of trace t. Peaks at t (1 - 1/d),
// rises before, falls after; classified with a 1e-12 peak window so
// reports are deterministic.
inline BoundResult f_bound_trace_t(const ConvexFunction& f, int d, double t,
                                   double eps) {
    if (d < 2)
        throw ParameterError("d must be >= 2, got " + std::to_string(d));
    if (!(t > 0.0) || t > f.t_max())
        throw ParameterError("t = " + format_real(t) + " outside (0, t_max = " +
                             format_real(f.t_max()) + "] of " + f.name());
    if (!(eps >= 0.0) || eps > t)
        throw ParameterError("eps = " + format_real(eps) +
                             " outside [0, t = " + format_real(t) + "]");
    const double value = f(t) - f(t - eps) -
                         (d - 1) * (f(eps / (d - 1)) - f.at_zero());
    const double peak = t * (1.0 - 1.0 / d);
    Regime regime = Regime::peak;
    if (std::abs(eps - peak) > 1e-12)
        regime = eps < peak ? Regime::rising : Regime::falling;
    return {value, {f, d, eps, t}, regime};
}

// The sharp continuity bound of the f-entropy at trace distance eps:
// Delta_{f;d}(eps) = f(1) - f(1-eps) - (d-1) (f(eps/(d-1)) - f(0)).
inline BoundResult f_bound(const ConvexFunction& f, int d, double eps) {
    return f_bound_trace_t(f, d, 1.0, eps);
}

// sup { |S_f(rho) - S_f(sigma)| : T(rho, sigma) <= eps }: the bound is
// unimodal with peak at 1 - 1/d, so capping eps there gives the
// supremum over the ball.
inline double modulus_of_continuity(const ConvexFunction& f, int d, double eps) {
    if (d < 2)
        throw ParameterError("d must be >= 2, got " + std::to_string(d));
    if (!(eps >= 0.0 && eps <= 1.0))
        throw ParameterError("eps must lie in [0,1], got " + format_real(eps));
    return f_bound(f, d, std::min(eps, 1.0 - 1.0 / d)).value;
}

// The extremal eigenvalue family: p = P(x) = (x, 1-x, 0, ..., 0) and
// q = Q(x) = (x - eps, (1-x+eps)/(d-1), ...). E(p, q) equals eps
// whenever (1-x+eps)/(d-1) >= 1-x; the pair's stored eps is recomputed,
// never assumed. At x = 1 this is the pair attaining the bound.
inline majorization::SimplexPair extremal_family(int d, double eps, double x) {
    if (d < 2)
        throw ParameterError("d must be >= 2, got " + std::to_string(d));
    if (!(eps >= 0.0 && eps <= 1.0))
        throw ParameterError("eps must lie in [0,1], got " + format_real(eps));
    if (x < eps || x > 1.0)
        throw ParameterError("x = " + format_real(x) +
                             " outside [eps = " + format_real(eps) + ", 1]");
    std::vector<double> p(d, 0.0);
    p[0] = x;
    p[1] = 1.0 - x;
    std::vector<double> q(d, (1.0 - x + eps) / (d - 1));
    q[0] = x - eps;
    return majorization::SimplexPair(
        majorization::ProbabilityVector(std::move(p)),
        majorization::ProbabilityVector(std::move(q)));
}

// Diagonal embedding of the extremal family at x = 1: the commuting
// pair diag(1, 0, ..., 0) vs diag(1-eps, eps/(d-1), ...), at trace
// distance exactly eps, attaining Delta_{f;d}(eps) for every f.
inline std::pair<states::DensityMatrix, states::DensityMatrix>
extremal_pair(int d, double eps) {
    const majorization::SimplexPair fam = extremal_family(d, eps, 1.0);
    return {states::from_probabilities(fam.p), states::from_probabilities(fam.q)};
}

}  // namespace fentropy::bounds
