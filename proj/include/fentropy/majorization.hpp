#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "convex.hpp"
#include "errors.hpp"
#include "format.hpp"

namespace fentropy::majorization {

// Unconstrained real tuple; the rearrangement utilities work on these.
using RealVector = std::vector<double>;

// Point of the simplex S_d: nonnegative entries summing to 1. Entries
// within 1e-12 below zero are clamped (optimizer arithmetic leaves that
// much dust); anything worse is rejected.
class ProbabilityVector {
 public:
    static constexpr double kSimplexTol = 1e-12;

    explicit ProbabilityVector(RealVector entries) : v_(std::move(entries)) {
        if (v_.empty())
            throw DimensionError("probability vector must be nonempty");
        double sum = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            double& x = v_[i];
            if (!std::isfinite(x))
                throw ValidationError("probability vector entry " +
                                      std::to_string(i + 1) + " is not finite");
            if (x < 0.0) {
                if (x < -kSimplexTol)
                    throw ValidationError("probability vector entry " +
                                          std::to_string(i + 1) + " is negative (" +
                                          format_real(x) + ")");
                x = 0.0;
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > kSimplexTol)
            throw ValidationError("probability vector sums to " +
                                  format_real(sum) + ", not 1");
    }

    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    const RealVector& entries() const { return v_; }

 private:
    RealVector v_;
};

// E(p, q) = (1/2) Sum |p_i - q_i|, the classical total variation.
inline double total_variation(const ProbabilityVector& p,
                              const ProbabilityVector& q) {
    if (p.size() != q.size())
        throw DimensionError("total_variation: vector lengths disagree");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

// A pair (p, q) tagged with eps = E(p, q). When an eps is supplied
// externally it must match the recomputed value.
struct SimplexPair {
    ProbabilityVector p;
    ProbabilityVector q;
    double eps;

    SimplexPair(ProbabilityVector p_in, ProbabilityVector q_in)
        : p(std::move(p_in)), q(std::move(q_in)), eps(total_variation(p, q)) {}

    SimplexPair(ProbabilityVector p_in, ProbabilityVector q_in, double stored_eps)
        : p(std::move(p_in)), q(std::move(q_in)), eps(stored_eps) {
        const double actual = total_variation(p, q);
        if (std::abs(actual - stored_eps) > 1e-12)
            throw ValidationError("stored eps " + format_real(stored_eps) +
                                  " does not match E(p,q) = " + format_real(actual));
    }
};

inline RealVector decreasing_rearrangement(RealVector a) {
    std::sort(a.begin(), a.end(), std::greater<>());
    return a;
}

inline RealVector increasing_rearrangement(RealVector a) {
    std::sort(a.begin(), a.end());
    return a;
}

// j-th largest entry (1-based) computed by brute force over all subsets
// of cardinality j: a_{n:j} = max over such subsets of the subset min.
// Deliberately combinatorial; it is the independent oracle against which
// the sort-based rearrangement is tested.
inline double order_statistic_via_subsets(const RealVector& a, int j) {
    const int n = static_cast<int>(a.size());
    if (n < 1 || n > 20)
        throw ParameterError("subset oracle supports lengths 1..20, got " +
                             std::to_string(n));
    if (j < 1 || j > n)
        throw ParameterError("order statistic index " + std::to_string(j) +
                             " out of range 1.." + std::to_string(n));
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != j) continue;
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) mn = std::min(mn, a[i]);
        best = std::max(best, mn);
    }
    return best;
}

// Schur majorization a >= b: equal totals and dominating prefix sums of
// the decreasing rearrangements, both within 1e-12 absolute (entries
// here are order-1 probabilities).
inline bool majorizes(const RealVector& a, const RealVector& b) {
    if (a.size() != b.size())
        throw DimensionError("majorizes: vector lengths disagree");
    constexpr double kTol = 1e-12;
    const RealVector ad = decreasing_rearrangement(a);
    const RealVector bd = decreasing_rearrangement(b);
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < ad.size(); ++i) {
        pa += ad[i];
        pb += bd[i];
        if (pa < pb - kTol) return false;
    }
    return std::abs(pa - pb) <= kTol;
}

// (eps_down_down, eps_up_down) = ((1/2)||p_dec - q_dec||_1,
// (1/2)||p_inc - q_dec||_1). The trace distance of any two states with
// spectra p, q lies between the two.
inline std::pair<double, double> ky_fan_bracket(const ProbabilityVector& p,
                                                const ProbabilityVector& q) {
    if (p.size() != q.size())
        throw DimensionError("ky_fan_bracket: vector lengths disagree");
    const RealVector pd = decreasing_rearrangement(p.entries());
    const RealVector pu = increasing_rearrangement(p.entries());
    const RealVector qd = decreasing_rearrangement(q.entries());
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < pd.size(); ++i) {
        lo += std::abs(pd[i] - qd[i]);
        hi += std::abs(pu[i] - qd[i]);
    }
    return {0.5 * lo, 0.5 * hi};
}

// Record of the inequalities checked by reduction_step, with slacks
// (all nonnegative when the step behaves as proved).
struct MajorizationCertificate {
    bool prefix_majorizes = false;  // (p*_1..p*_k) >= (p_1..p_k), Schur
    double majorization_slack = 0;  // min prefix-sum margin over the first k
    double dominance_slack = 0;     // min over i <= k of p*_i - q_i
    std::vector<std::pair<std::string, double>> f_sum_slacks;  // per builtin f
};

// The rearrangement step at the heart of the sharpness argument: given
// p_i >= q_i for i <= k, p_i <= q_i for i > k and q_1 >= ... >= q_k,
// with eps = Sum_{i<=k} (p_i - q_i), move the whole surplus onto the
// first coordinate:
//
//   p* = (q_1 + eps, q_2, ..., q_k, p_{k+1}, ..., p_d).
//
// Then E(p*, q) = E(p, q), the first k coordinates of p* majorize those
// of p (so Sum f(p*_i) >= Sum f(p_i) for convex f), and p* still
// dominates q on the first k coordinates. The returned certificate
// records the numerical slack of each of those facts.
inline std::pair<ProbabilityVector, MajorizationCertificate>
reduction_step(const SimplexPair& pair, int k) {
    constexpr double kCondTol = 1e-12;
    const RealVector& p = pair.p.entries();
    const RealVector& q = pair.q.entries();
    const int d = static_cast<int>(p.size());
    if (static_cast<int>(q.size()) != d)
        throw DimensionError("reduction_step: vector lengths disagree");
    if (k < 1 || k > d)
        throw ParameterError("reduction_step: k must be in 1.." +
                             std::to_string(d));
    for (int i = 0; i < k; ++i)
        if (p[i] < q[i] - kCondTol)
            throw ConditionError("reduction_step: condition p_i >= q_i fails "
                                 "at i = " + std::to_string(i + 1));
    for (int i = k; i < d; ++i)
        if (p[i] > q[i] + kCondTol)
            throw ConditionError("reduction_step: condition p_i <= q_i fails "
                                 "at i = " + std::to_string(i + 1));
    for (int i = 1; i < k; ++i)
        if (q[i - 1] < q[i] - kCondTol)
            throw ConditionError("reduction_step: condition q_1 >= ... >= q_k "
                                 "fails at i = " + std::to_string(i + 1));

    double eps = 0.0;
    for (int i = 0; i < k; ++i) eps += p[i] - q[i];

    RealVector pstar(p);
    pstar[0] = q[0] + eps;
    for (int i = 1; i < k; ++i) pstar[i] = q[i];

    MajorizationCertificate cert;
    const RealVector head_star(pstar.begin(), pstar.begin() + k);
    const RealVector head_p(p.begin(), p.begin() + k);
    cert.prefix_majorizes = majorizes(head_star, head_p);
    const RealVector sd = decreasing_rearrangement(head_star);
    const RealVector hd = decreasing_rearrangement(head_p);
    double ps = 0.0, pp = 0.0;
    cert.majorization_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        ps += sd[i];
        pp += hd[i];
        cert.majorization_slack = std::min(cert.majorization_slack, ps - pp);
    }
    cert.dominance_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i)
        cert.dominance_slack = std::min(cert.dominance_slack, pstar[i] - q[i]);
    for (const auto& f : entropy::builtin_registry()) {
        double before = 0.0, after = 0.0;
        for (int i = 0; i < d; ++i) {
            before += f(p[i]);
            after += f(pstar[i]);
        }
        cert.f_sum_slacks.emplace_back(f.name(), after - before);
    }
    return {ProbabilityVector(std::move(pstar)), std::move(cert)};
}

}  // namespace fentropy::majorization
