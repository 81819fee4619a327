#pragma once

#include <cmath>
#include <string>

#include "convex.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "states.hpp"

namespace fentropy::entropy {

// Real entropy value; in bits for the log2-based entropies, otherwise
// dimensionless. Always finite for valid states.
using EntropyValue = double;

// S_f(rho) = -tr f(rho) = -Sum f(lambda_i), evaluated on the cached
// spectrum. Diagonal states give exactly -Sum f(p_i).
inline EntropyValue f_entropy(const states::DensityMatrix& rho,
                              const ConvexFunction& f) {
    double s = 0.0;
    for (double lam : rho.spectrum()) s += f(lam);
    if (!std::isfinite(s))
        throw NumericalError("f_entropy(" + f.name() + ") is not finite");
    return -s;
}

// Renyi entropy R_alpha(rho) = log2(tr rho^alpha) / (1 - alpha) for
// alpha > 1. Related to the Tsallis entropy by a strictly increasing
// transform: Ts_alpha = (1 - 2^((1-alpha) R_alpha)) / (alpha - 1).
inline EntropyValue renyi(const states::DensityMatrix& rho, double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw ParameterError("renyi order must satisfy alpha > 1");
    double tr = 0.0;
    for (double lam : rho.spectrum()) tr += std::pow(lam, alpha);
    return std::log2(tr) / (1.0 - alpha);
}

// h(eps) = -eps log2(eps) - (1-eps) log2(1-eps), with h(0) = h(1) = 0.
inline double binary_entropy(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw DomainError("binary_entropy argument " + format_real(eps) +
                          " outside [0,1]");
    double h = 0.0;
    if (eps > 0.0) h -= eps * std::log2(eps);
    if (eps < 1.0) h -= (1.0 - eps) * std::log2(1.0 - eps);
    return h;
}

}  // namespace fentropy::entropy
