#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bounds.hpp"
#include "convex.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "majorization.hpp"
#include "rng.hpp"
#include "states.hpp"

namespace fentropy::verify {

using entropy::ConvexFunction;
using majorization::ProbabilityVector;
using majorization::SimplexPair;
using states::DensityMatrix;

// Absolute tolerance on slack = bound - |entropy gap| below which a
// sample counts as a violation; sized for eigensolver error at d <= 8.
constexpr double kViolationTol = 1e-9;

// Outcome of a randomized bound check. `elapsed` is wall time and is
// deliberately left out of the serialized form, which must be
// byte-identical across runs with equal (f, d, n, seed).
struct VerificationReport {
    std::string f_name;
    int d = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    double max_entropy_gap = 0.0;
    double bound_at_gap = 0.0;
    double min_slack = 0.0;
    std::vector<std::pair<int, double>> violations;  // (seed-offset, slack)
    double elapsed = 0.0;
};

// Outcome of the brute-force classical maximization of
// D_f(p, q) = Sum f(p_i) - Sum f(q_i) over P_{d;eps}.
struct OracleResult {
    double eps = 0.0;
    int d = 0;
    std::string f_name;
    double max_Df = 0.0;
    SimplexPair argmax;
    double bound = 0.0;
    double gap = 0.0;  // bound - max_Df; >= -kViolationTol when sound
    long grid_points = 0;
    int polish_iterations = 0;
};

namespace detail {

inline ProbabilityVector random_simplex(int d, Rng& rng) {
    std::vector<double> w(d);
    double sum = 0.0;
    for (double& x : w) {
        x = -std::log(rng.uniform_pos());
        sum += x;
    }
    for (double& x : w) x /= sum;
    return ProbabilityVector(std::move(w));
}

// The structured 10%: stress the bound where it is tight or where
// generic sampling never lands.
inline std::pair<DensityMatrix, DensityMatrix>
structured_pair(int d, int kind, Rng& rng) {
    switch (kind % 4) {
        case 0: {  // commuting diagonal pair
            DensityMatrix rho = states::from_probabilities(random_simplex(d, rng));
            DensityMatrix sigma = states::from_probabilities(random_simplex(d, rng));
            return {std::move(rho), std::move(sigma)};
        }
        case 1: {  // pure vs full-rank
            DensityMatrix rho = states::random_pure(d, rng);
            DensityMatrix sigma = states::random_density(d, rng);
            return {std::move(rho), std::move(sigma)};
        }
        case 2: {  // nearly identical states, T ~ 1e-8
            DensityMatrix rho = states::random_density(d, rng);
            DensityMatrix other = states::random_density(d, rng);
            constexpr double delta = 1e-8;
            DensityMatrix sigma = states::validate_density(
                linalg::add(linalg::scale(1.0 - delta, rho.matrix()),
                            linalg::scale(delta, other.matrix())));
            return {std::move(rho), std::move(sigma)};
        }
        default: {  // extremal pair near the peak, in a random basis
            const double peak = 1.0 - 1.0 / d;
            const double eps =
                std::clamp(peak + 0.2 * (rng.uniform() - 0.5), 0.0, 1.0);
            auto [a, b] = bounds::extremal_pair(d, eps);
            const linalg::ComplexMatrix u = states::random_unitary(d, rng);
            DensityMatrix rho = states::validate_density(
                linalg::conjugate_by(u, a.matrix()));
            DensityMatrix sigma = states::validate_density(
                linalg::conjugate_by(u, b.matrix()));
            return {std::move(rho), std::move(sigma)};
        }
    }
}

}  // namespace detail

// Draws n pairs, the last n/10 of them structured to stress the bound
// where it is tight, and checks
// |S_f(rho) - S_f(sigma)| <= Delta_{f;d}(T(rho, sigma)) on each.
// A negative slack is recorded, never thrown: it would falsify the
// implementation, and the report is the evidence.
//
// Sample i uses the RNG sub-stream (seed, i), so the report depends
// only on (f, d, n, seed), not on evaluation order.
inline VerificationReport sample_check(const ConvexFunction& f, int d, int n,
                                       std::uint64_t seed) {
    if (d < 2)
        throw ParameterError("d must be >= 2, got " + std::to_string(d));
    if (n < 1)
        throw ParameterError("n must be >= 1, got " + std::to_string(n));
    if (f.t_max() < 1.0)
        throw ParameterError(f.name() + " must be defined on [0,1]");
    const auto start = std::chrono::steady_clock::now();
    const int cut = n - n / 10;
    VerificationReport rep;
    rep.f_name = f.name();
    rep.d = d;
    rep.samples = n;
    rep.seed = seed;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        auto [rho, sigma] =
            i < cut ? std::pair{states::random_density(d, rng),
                                states::random_density(d, rng)}
                    : detail::structured_pair(d, i - cut, rng);
        const double t = states::trace_distance(rho, sigma);
        const double gap =
            std::abs(entropy::f_entropy(rho, f) - entropy::f_entropy(sigma, f));
        const double bound = bounds::f_bound(f, d, t).value;
        const double slack = bound - gap;
        if (gap >= rep.max_entropy_gap) {
            rep.max_entropy_gap = gap;
            rep.bound_at_gap = bound;
        }
        rep.min_slack = std::min(rep.min_slack, slack);
        if (slack < -kViolationTol) rep.violations.emplace_back(i, slack);
    }
    rep.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

namespace detail {

// Candidate point on a feasible slice of P_{d;eps}; theta holds the
// free parameters of its pattern, already clamped feasible.
struct OracleCandidate {
    int pattern = 0;  // 0: d=2; 1: d=3 one surplus coord; 2: d=3 two
    std::array<double, 3> theta{};
    bool swapped = false;  // evaluate D_f(q, p) instead of D_f(p, q)
    double value = -std::numeric_limits<double>::infinity();
};

struct OracleSlice {
    int d;
    double eps;

    // Rebuilds (p, q) from free parameters, clamping each coordinate
    // into its feasible interval in dependency order. This is the
    // projection used after every polish move.
    void materialize(int pattern, std::array<double, 3>& th,
                     std::vector<double>& p, std::vector<double>& q) const {
        if (pattern == 0) {
            const double b = std::clamp(th[0], 0.0, 1.0 - eps);
            th = {b, 0.0, 0.0};
            p = {b + eps, 1.0 - b - eps};
            q = {b, 1.0 - b};
            return;
        }
        if (pattern == 1) {
            const double p1 = std::clamp(th[0], eps, 1.0);
            const double p2 = std::clamp(th[1], 0.0, 1.0 - p1);
            const double q1 = p1 - eps;
            const double q2lo = p2;
            const double q2hi = std::min(p2 + eps, 1.0 - q1);
            const double q2 = std::clamp(th[2], q2lo, q2hi);
            th = {p1, p2, q2};
            p = {p1, p2, 1.0 - p1 - p2};
            q = {q1, q2, 1.0 - q1 - q2};
            return;
        }
        // Two surplus coordinates, ordered q1 >= q2, split eps = s +
        // (eps - s). Keeping p2 within [eps - p1, p1 + eps] makes the
        // s-interval nonempty for every (p1, p2), so clamping can never
        // produce an infeasible point (pairs outside the band are the
        // same pairs with the first two coordinates swapped).
        const double p1 = std::clamp(th[0], 0.0, 1.0);
        const double p2 = std::clamp(th[1], std::max(0.0, eps - p1),
                                     std::min(1.0 - p1, p1 + eps));
        const double slo = std::max(0.0, eps - p2);
        const double shi =
            std::max(slo, std::min({eps, p1, (p1 - p2 + eps) / 2.0}));
        const double s = std::clamp(th[2], slo, shi);
        th = {p1, p2, s};
        const double q1 = p1 - s;
        const double q2 = p2 - eps + s;
        p = {p1, p2, 1.0 - p1 - p2};
        q = {q1, q2, 1.0 - q1 - q2};
    }
};

inline double eval_Df(const ConvexFunction& f, const std::vector<double>& p,
                      const std::vector<double>& q) {
    double v = 0.0;
    for (double x : p) v += f(x);
    for (double x : q) v -= f(x);
    return v;
}

}  // namespace detail

// Maximizes D_f(p, q) = Sum f(p_i) - Sum f(q_i) over P_{d;eps} by
// exhaustive grid search over feasible slices, then cyclic coordinate
// ascent with a halving step. d is restricted to {2, 3}, where the
// slice parameterization is exact:
//
//   d=2: p = (b+eps, 1-b-eps), q = (b, 1-b), b in [0, 1-eps].
//   d=3: the proof's sign patterns - either one coordinate with
//        p_i >= q_i (free: p1, p2, q2) or two (free: p1, p2, and the
//        first surplus s), with q1 >= q2 on the surplus coordinates.
//
// Swapped orientations (q, p) are scanned via -D_f at no extra cost,
// and the extremal family at x = 1 is always seeded, which pins
// max_Df to the bound from below.
inline OracleResult oracle_max_Df(const ConvexFunction& f, int d, double eps,
                                  int grid = 200, int polish = 60) {
    if (d != 2 && d != 3)
        throw ParameterError("oracle supports d in {2,3}, got " +
                             std::to_string(d));
    if (!(eps >= 0.0 && eps <= 1.0))
        throw ParameterError("eps must lie in [0,1], got " + format_real(eps));
    if (grid < 50)
        throw ParameterError("grid must be >= 50, got " + std::to_string(grid));
    if (polish < 0)
        throw ParameterError("polish must be >= 0");
    if (f.t_max() < 1.0)
        throw ParameterError(f.name() + " must be defined on [0,1]");

    const double bound = bounds::f_bound(f, d, eps).value;
    const detail::OracleSlice slice{d, eps};
    detail::OracleCandidate best;
    long evaluated = 0;
    std::vector<double> p, q;

    auto consider = [&](int pattern, std::array<double, 3> th) {
        slice.materialize(pattern, th, p, q);
        const double v = detail::eval_Df(f, p, q);
        ++evaluated;
        if (v > best.value) best = {pattern, th, false, v};
        if (-v > best.value) best = {pattern, th, true, -v};
    };

    // Seed: the known maximizer p = (1, 0, ...), q = (1-eps, eps/(d-1), ...).
    if (d == 2)
        consider(0, {1.0 - eps, 0.0, 0.0});
    else
        consider(1, {1.0, 0.0, eps / 2.0});

    const double step0 = 1.0 / grid;
    if (d == 2) {
        for (int i = 0; i <= grid; ++i)
            consider(0, {(1.0 - eps) * i * step0, 0.0, 0.0});
    } else {
        for (int i = 0; i <= grid; ++i) {
            const double p1 = eps + (1.0 - eps) * i * step0;
            for (int j = 0; j <= grid; ++j) {
                const double p2 = (1.0 - p1) * j * step0;
                const double q2hi = std::min(p2 + eps, 1.0 - (p1 - eps));
                for (int k = 0; k <= grid; ++k)
                    consider(1, {p1, p2, p2 + (q2hi - p2) * k * step0});
            }
        }
        for (int i = 0; i <= grid; ++i) {
            const double p1 = i * step0;
            const double p2lo = std::max(0.0, eps - p1);
            const double p2hi = std::min(1.0 - p1, p1 + eps);
            for (int j = 0; j <= grid; ++j) {
                const double p2 = p2lo + (p2hi - p2lo) * j * step0;
                const double slo = std::max(0.0, eps - p2);
                const double shi = std::max(
                    slo, std::min({eps, p1, (p1 - p2 + eps) / 2.0}));
                for (int k = 0; k <= grid; ++k)
                    consider(2, {p1, p2, slo + (shi - slo) * k * step0});
            }
        }
    }
    const long grid_points = evaluated;

    // Cyclic coordinate ascent, step halved `polish` times. Every probe
    // goes through materialize, so iterates stay feasible.
    const int naxes = d == 2 ? 1 : 3;
    int sweeps = 0;
    double step = step0;
    for (int level = 0; level < polish; ++level) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 64) {
            improved = false;
            ++sweeps;
            for (int axis = 0; axis < naxes; ++axis)
                for (double dir : {step, -step}) {
                    std::array<double, 3> th = best.theta;
                    th[axis] += dir;
                    slice.materialize(best.pattern, th, p, q);
                    double v = detail::eval_Df(f, p, q);
                    if (best.swapped) v = -v;
                    ++evaluated;
                    if (v > best.value) {
                        best.theta = th;
                        best.value = v;
                        improved = true;
                    }
                }
        }
        step *= 0.5;
    }

    slice.materialize(best.pattern, best.theta, p, q);
    if (best.swapped) std::swap(p, q);
    OracleResult out{
        eps,
        d,
        f.name(),
        best.value,
        SimplexPair(ProbabilityVector(std::move(p)), ProbabilityVector(std::move(q))),
        bound,
        bound - best.value,
        grid_points,
        sweeps};
    return out;
}

// One sweep row: the bound at eps plus optional certification columns.
struct SweepRow {
    double eps = 0.0;
    double delta = 0.0;
    bounds::Regime regime = bounds::Regime::rising;
    std::optional<double> min_slack;
    std::optional<double> oracle_gap;
};

struct SweepOptions {
    std::optional<int> n;           // enables min_slack column
    std::uint64_t seed = 0;
    std::optional<int> oracle_grid;  // enables oracle_gap column (d in {2,3})
    int polish = 60;
};

namespace detail {

// A pair at trace distance exactly eps: a pure state against its
// eps-mixture with an orthogonal-complement state, or a random pair
// contracted along the mixing line onto distance eps.
inline std::pair<DensityMatrix, DensityMatrix>
pair_at_distance(int d, double eps, bool contracted, Rng& rng) {
    if (contracted) {
        DensityMatrix rho = states::random_density(d, rng);
        DensityMatrix sigma = states::random_density(d, rng);
        const double t0 = states::trace_distance(rho, sigma);
        if (t0 >= eps && t0 > 0.0) {
            const double c = eps / t0;
            DensityMatrix mixed = states::validate_density(
                linalg::add(linalg::scale(1.0 - c, rho.matrix()),
                            linalg::scale(c, sigma.matrix())));
            return {std::move(rho), std::move(mixed)};
        }
        // Random pairs can be closer than eps; fall through to the
        // pure-vs-complement construction, which always reaches it.
    }
    const linalg::ComplexMatrix u = states::random_unitary(d, rng);
    std::vector<double> wr(d, 0.0);
    wr[0] = 1.0;
    const ProbabilityVector mix = random_simplex(d - 1, rng);
    std::vector<double> ws(d, 0.0);
    ws[0] = 1.0 - eps;
    for (int i = 1; i < d; ++i) ws[i] = eps * mix[i - 1];
    DensityMatrix rho =
        states::validate_density(linalg::outer_sum(wr, u));
    DensityMatrix sigma =
        states::validate_density(linalg::outer_sum(ws, u));
    return {std::move(rho), std::move(sigma)};
}

}  // namespace detail

// Evaluates the bound along an ascending eps grid. With `n` set, each
// row also reports the minimum slack over n pairs constructed at trace
// distance exactly that row's eps (sub-streams indexed row-major, so
// the table is deterministic). With `oracle_grid` set and d in {2,3},
// each row reports the oracle gap.
inline std::vector<SweepRow> sweep(const ConvexFunction& f, int d,
                                   const std::vector<double>& eps_grid,
                                   double t = 1.0,
                                   const SweepOptions& opts = {}) {
    if (d < 2)
        throw ParameterError("d must be >= 2, got " + std::to_string(d));
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] >= 0.0) || eps_grid[i] > t)
            throw ParameterError("sweep grid value " + format_real(eps_grid[i]) +
                                 " outside [0, t = " + format_real(t) + "]");
        if (i > 0 && eps_grid[i] < eps_grid[i - 1])
            throw ParameterError("sweep grid is not sorted ascending at index " +
                                 std::to_string(i));
    }
    if (opts.n && *opts.n < 1)
        throw ParameterError("n must be >= 1");
    if ((opts.n || opts.oracle_grid) && t != 1.0)
        throw ParameterError("certification columns require t = 1");
    if (opts.oracle_grid && d > 3)
        throw ParameterError("oracle supports d in {2,3}, got " +
                             std::to_string(d));

    std::vector<SweepRow> rows;
    rows.reserve(eps_grid.size());
    for (std::size_t r = 0; r < eps_grid.size(); ++r) {
        const double eps = eps_grid[r];
        const bounds::BoundResult br = bounds::f_bound_trace_t(f, d, t, eps);
        SweepRow row;
        row.eps = eps;
        row.delta = br.value;
        row.regime = br.regime;
        if (opts.n) {
            double worst = std::numeric_limits<double>::infinity();
            for (int i = 0; i < *opts.n; ++i) {
                Rng rng = Rng::substream(
                    opts.seed, r * static_cast<std::uint64_t>(*opts.n) + i);
                auto [rho, sigma] =
                    detail::pair_at_distance(d, eps, i % 2 == 1, rng);
                const double td = states::trace_distance(rho, sigma);
                const double gap = std::abs(entropy::f_entropy(rho, f) -
                                            entropy::f_entropy(sigma, f));
                worst = std::min(worst,
                                 bounds::f_bound(f, d, td).value - gap);
            }
            row.min_slack = worst;
        }
        if (opts.oracle_grid)
            row.oracle_gap =
                oracle_max_Df(f, d, eps, *opts.oracle_grid, opts.polish).gap;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fentropy::verify
