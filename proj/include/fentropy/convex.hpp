#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace fentropy::entropy {

// How a failed convexity probe is reported at construction time.
enum class ConvexityCheck { warn, strict };

// A convex function f on [0, t_max] with finite endpoint values.
// Entropies are formed as S_f(rho) = -tr f(rho), so convex f gives a
// concave entropy. Instances are immutable once constructed.
//
// The default domain is [0, 1] (density-matrix spectra); a larger t_max
// admits trace-t operators. Builtins are convex on all of [0, inf).
class ConvexFunction {
 public:
    static constexpr double kDomainTol = 1e-10;

    // f(x) = x log2(x), f(0) = 0. S_f is the von Neumann entropy in bits.
    static ConvexFunction shannon(double t_max = 1.0) {
        return ConvexFunction("shannon", [](double x) {
            return x > 0.0 ? x * std::log2(x) : 0.0;
        }, t_max, ConvexityCheck::warn);
    }

    // f(x) = x ln(x), f(0) = 0. Same entropy in nats.
    static ConvexFunction natural_xlogx(double t_max = 1.0) {
        return ConvexFunction("natural_xlogx", [](double x) {
            return x > 0.0 ? x * std::log(x) : 0.0;
        }, t_max, ConvexityCheck::warn);
    }

    // f(x) = (x^alpha - x) / (alpha - 1) for alpha > 1. S_f is the
    // Tsallis entropy. Integer alpha uses an exact polynomial form.
    static ConvexFunction tsallis(double alpha, double t_max = 1.0) {
        return ConvexFunction(tsallis_name(alpha), tsallis_fn(alpha), t_max,
                              ConvexityCheck::warn);
    }

    // f(x) = x^2 - x. S_f is the Gini-Simpson index; values agree exactly
    // with tsallis(2) because both names bind the same closure.
    static ConvexFunction gini_simpson(double t_max = 1.0) {
        return ConvexFunction("gini_simpson", tsallis_fn(2.0), t_max,
                              ConvexityCheck::warn);
    }

    // Arbitrary callable on [0, t_max]. The constructor probes convexity
    // numerically; `check` selects whether a failed probe warns or throws.
    static ConvexFunction custom(std::string name,
                                 std::function<double(double)> fn,
                                 double t_max = 1.0,
                                 ConvexityCheck check = ConvexityCheck::warn) {
        return ConvexFunction(std::move(name), std::move(fn), t_max, check);
    }

    // Piecewise-linear interpolant of sample points. xs must start at 0
    // and be strictly increasing; t_max becomes xs.back(). Convexity of
    // the data is equivalent to monotone slopes, so it is checked
    // directly instead of by sampling.
    static ConvexFunction tabulated(std::string name, std::vector<double> xs,
                                    std::vector<double> ys,
                                    ConvexityCheck check = ConvexityCheck::warn) {
        if (xs.size() != ys.size() || xs.size() < 2)
            throw ValidationError("tabulated function needs at least 2 rows "
                                  "with matching x and fx columns");
        if (xs.front() != 0.0)
            throw ValidationError("tabulated function must start at x = 0");
        for (std::size_t i = 0; i < ys.size(); ++i)
            if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
                throw ValidationError("tabulated function contains a non-finite "
                                      "value (row " + std::to_string(i + 1) + ")");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1]))
                throw ValidationError("tabulated x values must be strictly "
                                      "increasing (row " + std::to_string(i + 1) + ")");
        double prev_slope = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            if (slope < prev_slope - 1e-9)
                report_nonconvex(name, xs[i - 1], check);
            prev_slope = std::max(prev_slope, slope);
        }
        const double t_max = xs.back();
        auto gx = std::make_shared<const std::vector<double>>(std::move(xs));
        auto gy = std::make_shared<const std::vector<double>>(std::move(ys));
        auto fn = [gx, gy](double x) {
            auto it = std::upper_bound(gx->begin(), gx->end(), x);
            std::size_t hi = static_cast<std::size_t>(it - gx->begin());
            if (hi == gx->size()) --hi;
            if (hi == 0) ++hi;
            const std::size_t lo = hi - 1;
            const double w = (x - (*gx)[lo]) / ((*gx)[hi] - (*gx)[lo]);
            return (*gy)[lo] + w * ((*gy)[hi] - (*gy)[lo]);
        };
        return ConvexFunction(std::move(name), std::move(fn), t_max,
                              check, /*skip_probe=*/true);
    }

    const std::string& name() const { return name_; }
    double t_max() const { return t_max_; }
    double at_zero() const { return f0_; }
    double at_tmax() const { return f_tmax_; }

    // Evaluates f. Arguments within kDomainTol outside [0, t_max] are
    // clamped to the endpoint (eigenvalues carry that much noise);
    // anything further out is a caller error.
    double operator()(double x) const {
        if (x < 0.0) {
            if (x < -kDomainTol)
                throw DomainError("argument " + std::to_string(x) +
                                  " below domain of " + name_);
            x = 0.0;
        } else if (x > t_max_) {
            if (x > t_max_ + kDomainTol)
                throw DomainError("argument " + std::to_string(x) +
                                  " above domain of " + name_);
            x = t_max_;
        }
        return fn_(x);
    }

 private:
    ConvexFunction(std::string name, std::function<double(double)> fn,
                   double t_max, ConvexityCheck check, bool skip_probe = false)
        : name_(std::move(name)), fn_(std::move(fn)), t_max_(t_max) {
        if (!(t_max_ > 0.0) || !std::isfinite(t_max_))
            throw ParameterError("t_max must be positive and finite");
        if (!skip_probe) probe_convexity(check);
        f0_ = fn_(0.0);
        f_tmax_ = fn_(t_max_);
        if (!std::isfinite(f0_) || !std::isfinite(f_tmax_))
            throw ValidationError(name_ + " is not finite at a domain endpoint");
    }

    static std::string tsallis_name(double alpha) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "tsallis(%g)", alpha);
        return std::string(buf);
    }

    static std::function<double(double)> tsallis_fn(double alpha) {
        if (!(alpha > 1.0) || !std::isfinite(alpha))
            throw ParameterError("tsallis order must satisfy alpha > 1");
        if (alpha == 2.0)
            return [](double x) { return x * x - x; };
        if (alpha == 3.0)
            return [](double x) { return (x * x * x - x) / 2.0; };
        return [alpha](double x) {
            return (std::pow(x, alpha) - x) / (alpha - 1.0);
        };
    }

    static void report_nonconvex(const std::string& name, double where,
                                 ConvexityCheck check) {
        if (check == ConvexityCheck::strict)
            throw ValidationError(name + " fails convexity near x = " +
                                  std::to_string(where));
        std::fprintf(stderr, "warning: %s fails a convexity probe near "
                     "x = %g; continuing\n", name.c_str(), where);
    }

    // Midpoint convexity on a fixed grid plus deterministic random pairs.
    // A non-finite value anywhere is an error regardless of `check`.
    void probe_convexity(ConvexityCheck check) const {
        constexpr int kGrid = 1024;
        constexpr int kPairs = 2048;
        constexpr double kTol = 1e-9;
        auto eval = [&](double x) {
            const double v = fn_(x);
            if (!std::isfinite(v))
                throw ValidationError(name_ + " returned a non-finite value "
                                      "at x = " + std::to_string(x));
            return v;
        };
        std::vector<double> grid(kGrid + 1);
        for (int i = 0; i <= kGrid; ++i)
            grid[i] = eval(t_max_ * static_cast<double>(i) / kGrid);
        for (int i = 1; i < kGrid; ++i)
            if (2.0 * grid[i] > grid[i - 1] + grid[i + 1] + kTol)
                return report_nonconvex(name_, t_max_ * i / double(kGrid), check);
        std::uint64_t sm = 0x5eedc0de5eedc0deULL;
        for (int k = 0; k < kPairs; ++k) {
            const double a = t_max_ * to_unit(splitmix64_next(sm));
            const double b = t_max_ * to_unit(splitmix64_next(sm));
            const double m = 0.5 * (a + b);
            if (eval(m) > 0.5 * (eval(a) + eval(b)) + kTol)
                return report_nonconvex(name_, m, check);
        }
    }

    static double to_unit(std::uint64_t bits) {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    std::string name_;
    std::function<double(double)> fn_;
    double t_max_;
    double f0_ = 0.0;
    double f_tmax_ = 0.0;
};

// Builtin lookup by name. `alpha` is required for tsallis and rejected
// elsewhere, mirroring the CLI flag pairing.
inline ConvexFunction builtin(const std::string& name,
                              std::optional<double> alpha = std::nullopt,
                              double t_max = 1.0) {
    if (name == "tsallis") {
        if (!alpha)
            throw ParameterError("tsallis requires alpha");
        return ConvexFunction::tsallis(*alpha, t_max);
    }
    if (alpha)
        throw ParameterError("alpha is only meaningful for tsallis");
    if (name == "shannon") return ConvexFunction::shannon(t_max);
    if (name == "gini_simpson") return ConvexFunction::gini_simpson(t_max);
    if (name == "natural_xlogx") return ConvexFunction::natural_xlogx(t_max);
    throw ParameterError("unknown builtin function '" + name + "' (expected "
                         "shannon, tsallis, gini_simpson or natural_xlogx)");
}

// The fixed set of builtins used by certificates and verification runs.
inline const std::vector<ConvexFunction>& builtin_registry() {
    static const std::vector<ConvexFunction> reg = {
        ConvexFunction::shannon(),     ConvexFunction::tsallis(1.5),
        ConvexFunction::tsallis(2.0),  ConvexFunction::tsallis(3.0),
        ConvexFunction::gini_simpson(), ConvexFunction::natural_xlogx(),
    };
    return reg;
}

}  // namespace fentropy::entropy
