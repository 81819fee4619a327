#include "testutil.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fentropy;
using namespace fentropy::verify;
using fentropy::entropy::builtin_registry;
using fentropy::entropy::ConvexFunction;
using Catch::Matchers::WithinAbs;

TEST_CASE("sample_check finds no violations on honest inputs", "[verify]") {
    const auto rep =
        sample_check(ConvexFunction::shannon(), 2, 1000, 1);
    CHECK(rep.f_name == "shannon");
    CHECK(rep.d == 2);
    CHECK(rep.samples == 1000);
    CHECK(rep.seed == 1);
    CHECK(rep.violations.empty());
    CHECK(rep.min_slack >= -1e-9);
    CHECK(rep.max_entropy_gap >= 0.0);
    CHECK(rep.max_entropy_gap <= rep.bound_at_gap + 1e-9);
    CHECK(rep.elapsed >= 0.0);

    // structured samples include extremal pairs sitting exactly on the
    // bound, so the minimum slack is evaluation noise around zero
    const auto rep2 =
        sample_check(ConvexFunction::tsallis(2.0), 5, 1000, 1);
    CHECK(rep2.violations.empty());
    CHECK(rep2.min_slack >= -1e-9);
}

TEST_CASE("sample_check is deterministic in (f, d, n, seed)", "[verify]") {
    const auto a = sample_check(ConvexFunction::tsallis(1.5), 3, 500, 7);
    const auto b = sample_check(ConvexFunction::tsallis(1.5), 3, 500, 7);
    CHECK(a.max_entropy_gap == b.max_entropy_gap);
    CHECK(a.bound_at_gap == b.bound_at_gap);
    CHECK(a.min_slack == b.min_slack);
    CHECK(a.violations == b.violations);
}

TEST_CASE("sample_check validates parameters", "[verify]") {
    CHECK_THROWS_AS(sample_check(ConvexFunction::shannon(), 2, 0, 1),
                    ParameterError);
    CHECK_THROWS_AS(sample_check(ConvexFunction::shannon(), 1, 10, 1),
                    ParameterError);
    // a table covering only [0, 0.5] cannot bound states on [0, 1]
    const auto half = ConvexFunction::tabulated(
        "half", {0.0, 0.25, 0.5}, {0.0, -0.1, 0.0});
    CHECK_THROWS_AS(sample_check(half, 2, 10, 1), ParameterError);
    CHECK_THROWS_AS(oracle_max_Df(half, 2, 0.3), ParameterError);
}

TEST_CASE("oracle reproduces the d=2 closed form", "[verify]") {
    const auto res = oracle_max_Df(ConvexFunction::shannon(), 2, 0.5);
    CHECK_THAT(res.max_Df, WithinAbs(1.0, 1e-6));
    CHECK_THAT(res.bound, WithinAbs(1.0, 1e-14));
    CHECK(res.gap >= -1e-9);
    CHECK(res.gap <= 1e-6);
    // argmax is the extremal family point
    CHECK_THAT(res.argmax.p[0], WithinAbs(1.0, 1e-3));
    CHECK_THAT(res.argmax.q[0], WithinAbs(0.5, 1e-3));
    CHECK(res.grid_points > 0);
}

TEST_CASE("oracle reproduces the hand value at d=3", "[verify]") {
    const auto res =
        oracle_max_Df(ConvexFunction::tsallis(2.0), 3, 0.5, 60);
    CHECK_THAT(res.max_Df, WithinAbs(0.625, 1e-6));
    CHECK_THAT(res.gap, WithinAbs(0.0, 1e-6));
}

TEST_CASE("oracle at eps 0 finds the empty maximum", "[verify]") {
    // the entropy difference of identical vectors is summation noise
    const auto res = oracle_max_Df(ConvexFunction::shannon(), 2, 0.0);
    CHECK(std::abs(res.max_Df) <= 1e-12);
    CHECK(res.argmax.p.entries() == res.argmax.q.entries());
}

TEST_CASE("oracle validates its parameters", "[verify]") {
    const auto f = ConvexFunction::shannon();
    CHECK_THROWS_AS(oracle_max_Df(f, 4, 0.3), ParameterError);
    CHECK_THROWS_AS(oracle_max_Df(f, 2, 0.3, 10), ParameterError);
    CHECK_THROWS_AS(oracle_max_Df(f, 2, 1.5), ParameterError);
    CHECK_THROWS_AS(oracle_max_Df(f, 2, 0.3, 200, -1), ParameterError);
}

TEST_CASE("oracle gap stays in the certification window", "[verify]") {
    // moderate grid; the polish and the extremal seed carry the rest
    for (const auto& f : builtin_registry()) {
        for (int d : {2, 3}) {
            for (double eps : {0.1, 0.5, 0.9}) {
                const auto res =
                    oracle_max_Df(f, d, eps, d == 2 ? 400 : 60);
                REQUIRE(res.gap >= -1e-9);
                REQUIRE(res.gap <= 1e-6);
            }
        }
    }
}

TEST_CASE("oracle at grid 400 stays within 5e-4 before polish matters",
          "[verify]") {
    // the full grid=400 sweep at d=3 is slow, so spot-check two points
    const auto a = oracle_max_Df(ConvexFunction::shannon(), 3, 0.3, 400);
    REQUIRE(a.gap >= -1e-9);
    REQUIRE(a.gap <= 5e-4);
    const auto b = oracle_max_Df(ConvexFunction::tsallis(1.5), 3, 0.7, 400);
    REQUIRE(b.gap >= -1e-9);
    REQUIRE(b.gap <= 5e-4);
}

TEST_CASE("polished argmax matches the extremal family shape", "[verify]") {
    using fentropy::majorization::decreasing_rearrangement;
    for (const auto& f : builtin_registry()) {
        for (int d : {2, 3}) {
            for (double eps : {0.2, 0.6}) {
                const auto res = oracle_max_Df(f, d, eps, d == 2 ? 400 : 80);
                // family shape after sorting: p = (x, 1-x, 0...),
                // q = (x-eps, rest equal)
                const auto p = decreasing_rearrangement(res.argmax.p.entries());
                const auto q = decreasing_rearrangement(res.argmax.q.entries());
                const double x = p[0];
                // the family lists q in construction order, which is not
                // descending once eps/(d-1) exceeds x-eps, so sort both sides
                const auto fam = bounds::extremal_family(d, eps, x);
                const auto fp = decreasing_rearrangement(fam.p.entries());
                const auto fq = decreasing_rearrangement(fam.q.entries());
                double linf = 0.0;
                for (int i = 0; i < d; ++i) {
                    linf = std::max(linf, std::abs(p[i] - fp[i]));
                    linf = std::max(linf, std::abs(q[i] - fq[i]));
                }
                REQUIRE(linf <= 1e-3);
            }
        }
    }
}

TEST_CASE("sweep tabulates the shannon d=2 closed form", "[verify]") {
    const auto f = ConvexFunction::shannon();
    const auto rows = sweep(f, 2, {0.0, 0.25, 0.5, 0.75, 1.0});
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].delta == 0.0);
    CHECK_THAT(rows[1].delta, WithinAbs(entropy::binary_entropy(0.25), 1e-13));
    CHECK_THAT(rows[2].delta, WithinAbs(1.0, 1e-14));
    CHECK_THAT(rows[3].delta, WithinAbs(entropy::binary_entropy(0.75), 1e-13));
    CHECK(rows[4].delta == 0.0);
    CHECK(rows[1].regime == bounds::Regime::rising);
    CHECK(rows[2].regime == bounds::Regime::peak);
    CHECK(rows[3].regime == bounds::Regime::falling);
    CHECK_FALSE(rows[0].min_slack.has_value());
    CHECK_FALSE(rows[0].oracle_gap.has_value());
}

TEST_CASE("sweep accepts an empty grid", "[verify]") {
    const auto rows = sweep(ConvexFunction::shannon(), 2, {});
    CHECK(rows.empty());
}

TEST_CASE("sweep rejects bad grids", "[verify]") {
    const auto f = ConvexFunction::shannon();
    CHECK_THROWS_AS(sweep(f, 2, {0.5, 0.2}), ParameterError);
    CHECK_THROWS_AS(sweep(f, 2, {0.5, 1.2}), ParameterError);
    CHECK_THROWS_AS(sweep(f, 2, {-0.1, 0.5}), ParameterError);
}

TEST_CASE("sweep certification columns", "[verify]") {
    const auto f = ConvexFunction::tsallis(2.0);
    SweepOptions opts;
    opts.n = 25;
    opts.seed = 11;
    opts.oracle_grid = 60;
    const auto rows = sweep(f, 3, {0.0, 0.4, 0.8}, 1.0, opts);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.min_slack.has_value());
        REQUIRE(row.oracle_gap.has_value());
        // sampled pairs never violate the bound
        CHECK(*row.min_slack >= -1e-9);
        // and the oracle certifies sharpness at each grid point
        CHECK(*row.oracle_gap >= -1e-9);
        CHECK(*row.oracle_gap <= 1e-6);
    }
}

TEST_CASE("sweep sampled columns are reproducible", "[verify]") {
    const auto f = ConvexFunction::shannon();
    SweepOptions opts;
    opts.n = 40;
    opts.seed = 3;
    const auto a = sweep(f, 4, {0.2, 0.7}, 1.0, opts);
    const auto b = sweep(f, 4, {0.2, 0.7}, 1.0, opts);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        REQUIRE(*a[i].min_slack == *b[i].min_slack);
}

TEST_CASE("sweep restricts certification to t = 1 and small d", "[verify]") {
    const auto f = ConvexFunction::shannon();
    SweepOptions with_n;
    with_n.n = 10;
    CHECK_THROWS_AS(sweep(f, 2, {0.1, 0.2}, 0.5, with_n), ParameterError);
    SweepOptions with_oracle;
    with_oracle.oracle_grid = 60;
    CHECK_THROWS_AS(sweep(f, 4, {0.1, 0.2}, 1.0, with_oracle),
                    ParameterError);
}

TEST_CASE("modulus of continuity dominates sampled pairs and is attained",
          "[verify]") {
    // pairs at distance <= eps never exceed the modulus, and the
    // extremal pair at min(eps, 1-1/d) attains it
    const auto f = ConvexFunction::shannon();
    const int d = 3;
    const double eps = 0.55;
    const double mod = bounds::modulus_of_continuity(f, d, eps);
    Rng rng(90);
    double worst = 0.0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto rho = states::random_density(d, rng);
        const auto sigma = states::random_density(d, rng);
        if (states::trace_distance(rho, sigma) > eps) continue;
        worst = std::max(worst, std::abs(entropy::f_entropy(rho, f) -
                                         entropy::f_entropy(sigma, f)));
    }
    REQUIRE(worst <= mod + 1e-9);
    const auto [rho, sigma] =
        bounds::extremal_pair(d, std::min(eps, 1.0 - 1.0 / d));
    const double attained = std::abs(entropy::f_entropy(rho, f) -
                                     entropy::f_entropy(sigma, f));
    REQUIRE_THAT(attained, WithinAbs(mod, 1e-10));
}
