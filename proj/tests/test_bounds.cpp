#include "testutil.hpp"

#include <cmath>
#include <vector>

using namespace fentropy;
using namespace fentropy::bounds;
using fentropy::entropy::builtin_registry;
using fentropy::entropy::ConvexFunction;
using Catch::Matchers::WithinAbs;

TEST_CASE("audenaert bound on known points", "[bounds]") {
    CHECK(audenaert_bound(0.0, 2) == 0.0);
    CHECK(audenaert_bound(0.0, 9) == 0.0);
    CHECK_THAT(audenaert_bound(0.5, 2), WithinAbs(1.0, 1e-15));
    CHECK_THAT(audenaert_bound(0.5, 3), WithinAbs(1.5, 1e-14));
    CHECK_THAT(audenaert_bound(0.3, 8), WithinAbs(1.7234973758479738, 1e-14));
    CHECK_THROWS_AS(audenaert_bound(-0.1, 2), ParameterError);
    CHECK_THROWS_AS(audenaert_bound(1.1, 2), ParameterError);
    CHECK_THROWS_AS(audenaert_bound(0.5, 1), ParameterError);
}

TEST_CASE("f_bound for shannon coincides with audenaert", "[bounds]") {
    const auto f = ConvexFunction::shannon();
    for (int d = 2; d <= 16; ++d)
        for (int i = 0; i <= 100; ++i) {
            const double eps = i / 100.0;
            REQUIRE_THAT(f_bound(f, d, eps).value,
                         WithinAbs(audenaert_bound(eps, d), 1e-12));
        }
}

TEST_CASE("f_bound for tsallis(2) matches hand algebra", "[bounds]") {
    // f(x) = x^2 - x gives Delta = eps(2 - eps) - eps^2/(d-1)
    const auto f = ConvexFunction::tsallis(2.0);
    CHECK_THAT(f_bound(f, 2, 0.5).value, WithinAbs(0.5, 1e-15));
    for (int d = 2; d <= 8; ++d)
        for (int i = 0; i <= 20; ++i) {
            const double eps = i / 20.0;
            const double expected =
                eps * (2.0 - eps) - eps * eps / (d - 1.0);
            REQUIRE_THAT(f_bound(f, d, eps).value, WithinAbs(expected, 1e-13));
        }
}

TEST_CASE("f_bound vanishes at eps 0 and validates input", "[bounds]") {
    for (const auto& f : builtin_registry()) {
        CHECK(f_bound(f, 5, 0.0).value == 0.0);
        CHECK_THROWS_AS(f_bound(f, 1, 0.5), ParameterError);
        CHECK_THROWS_AS(f_bound(f, 5, -0.01), ParameterError);
        CHECK_THROWS_AS(f_bound(f, 5, 1.01), ParameterError);
    }
}

TEST_CASE("f_bound is nonnegative on the whole domain", "[bounds]") {
    for (const auto& f : builtin_registry())
        for (int d = 2; d <= 8; ++d)
            for (int i = 0; i <= 500; ++i)
                REQUIRE(f_bound(f, d, i / 500.0).value >= -1e-12);
}

TEST_CASE("regime classification around the peak", "[bounds]") {
    const auto f = ConvexFunction::shannon();
    CHECK(f_bound(f, 2, 0.25).regime == Regime::rising);
    CHECK(f_bound(f, 2, 0.5).regime == Regime::peak);
    CHECK(f_bound(f, 2, 0.75).regime == Regime::falling);
    CHECK(f_bound(f, 4, 0.75).regime == Regime::peak);
    // the peak window is 1e-12 wide
    CHECK(f_bound(f, 2, 0.5 + 1e-13).regime == Regime::peak);
    CHECK(f_bound(f, 2, 0.5 + 1e-11).regime == Regime::falling);

    CHECK(std::string(regime_name(Regime::rising)) == "rising");
    CHECK(std::string(regime_name(Regime::peak)) == "peak");
    CHECK(std::string(regime_name(Regime::falling)) == "falling");
}

TEST_CASE("f_bound is unimodal with peak at 1 - 1/d", "[bounds]") {
    for (const auto& f : builtin_registry()) {
        for (int d = 2; d <= 8; ++d) {
            const double peak = 1.0 - 1.0 / d;
            double prev = 0.0;
            double prev_eps = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double eps = i / 1000.0;
                const double v = f_bound(f, d, eps).value;
                // the pair straddling the peak is exempt: the bound may
                // still rise to the peak inside that interval
                if (i > 0 && eps <= peak) REQUIRE(v >= prev - 1e-12);
                if (i > 0 && prev_eps >= peak) REQUIRE(v <= prev + 1e-12);
                prev = v;
                prev_eps = eps;
            }
        }
    }
}

TEST_CASE("trace-t bound reduces to f_bound at t = 1", "[bounds]") {
    for (const auto& f : builtin_registry())
        for (int d : {2, 3, 5, 8})
            for (int i = 0; i <= 50; ++i) {
                const double eps = i / 50.0;
                REQUIRE(f_bound_trace_t(f, d, 1.0, eps).value ==
                        f_bound(f, d, eps).value);
            }
}

TEST_CASE("trace-t bound on the extended gini_simpson domain", "[bounds]") {
    const auto f = ConvexFunction::gini_simpson(2.0);
    // f(2) - f(1) - (f(1) - f(0)) with f(x) = x^2 - x
    CHECK_THAT(f_bound_trace_t(f, 2, 2.0, 1.0).value, WithinAbs(2.0, 1e-14));
}

TEST_CASE("trace-t bound validates eps <= t <= t_max", "[bounds]") {
    const auto f = ConvexFunction::shannon();
    CHECK_THROWS_AS(f_bound_trace_t(f, 2, 0.5, 0.6), ParameterError);
    CHECK_THROWS_AS(f_bound_trace_t(f, 2, 1.5, 0.5), ParameterError);
    CHECK_THROWS_AS(f_bound_trace_t(f, 2, 0.0, 0.0), ParameterError);
    CHECK_NOTHROW(f_bound_trace_t(f, 2, 0.5, 0.5));
}

TEST_CASE("trace-t bound peak sits at t(1 - 1/d)", "[bounds]") {
    const auto f = ConvexFunction::shannon();
    CHECK(f_bound_trace_t(f, 2, 0.5, 0.25).regime == Regime::peak);
    CHECK(f_bound_trace_t(f, 4, 0.8, 0.6).regime == Regime::peak);
    CHECK(f_bound_trace_t(f, 2, 0.5, 0.2).regime == Regime::rising);
    CHECK(f_bound_trace_t(f, 2, 0.5, 0.3).regime == Regime::falling);
}

TEST_CASE("trace-t bound is nondecreasing in t and d", "[bounds]") {
    const double eps = 0.15;
    for (const auto& f : builtin_registry()) {
        for (int d = 2; d <= 8; ++d) {
            double prev = -1.0;
            for (int ti = 2; ti <= 10; ++ti) {
                const double t = ti / 10.0;
                const double v = f_bound_trace_t(f, d, t, eps).value;
                REQUIRE(v >= prev - 1e-12);
                prev = v;
            }
        }
        for (int ti = 2; ti <= 10; ++ti) {
            const double t = ti / 10.0;
            double prev = -1.0;
            for (int d = 2; d <= 8; ++d) {
                const double v = f_bound_trace_t(f, d, t, eps).value;
                REQUIRE(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("trace-t bound is not monotone in eps", "[bounds]") {
    // a decrease witness must exist for every builtin at d = 2
    for (const auto& f : builtin_registry()) {
        for (double t : {0.5, 1.0}) {
            double best_drop = 0.0;
            double prev = 0.0;
            for (int i = 0; i <= 200; ++i) {
                const double eps = t * i / 200.0;
                const double v = f_bound_trace_t(f, 2, t, eps).value;
                if (i > 0) best_drop = std::max(best_drop, prev - v);
                prev = v;
            }
            REQUIRE(best_drop > 1e-6);
        }
    }
}

TEST_CASE("modulus of continuity clamps at the peak", "[bounds]") {
    const auto f = ConvexFunction::shannon();
    CHECK_THAT(modulus_of_continuity(f, 2, 1.0), WithinAbs(1.0, 1e-14));
    CHECK(modulus_of_continuity(f, 3, 0.0) == 0.0);
    // constant once eps passes 1 - 1/d
    const double at_peak = modulus_of_continuity(f, 4, 0.75);
    CHECK(modulus_of_continuity(f, 4, 0.8) == at_peak);
    CHECK(modulus_of_continuity(f, 4, 1.0) == at_peak);
    // below the peak it is just f_bound
    CHECK(modulus_of_continuity(f, 4, 0.3) == f_bound(f, 4, 0.3).value);
    CHECK_THROWS_AS(modulus_of_continuity(f, 4, 1.2), ParameterError);
}

TEST_CASE("extremal family on known points", "[bounds]") {
    const auto pair = extremal_family(3, 0.6, 1.0);
    CHECK(pair.p.entries() == std::vector<double>({1.0, 0.0, 0.0}));
    CHECK_THAT(pair.q[0], WithinAbs(0.4, 1e-15));
    CHECK_THAT(pair.q[1], WithinAbs(0.3, 1e-15));
    CHECK_THAT(pair.q[2], WithinAbs(0.3, 1e-15));
    CHECK_THAT(pair.eps, WithinAbs(0.6, 1e-15));

    const auto same = extremal_family(2, 0.0, 1.0);
    CHECK(same.p.entries() == same.q.entries());
    CHECK(same.eps == 0.0);

    const auto half = extremal_family(2, 0.5, 1.0);
    CHECK(half.q.entries() == std::vector<double>({0.5, 0.5}));
}

TEST_CASE("extremal family reports the computed eps off the main branch",
          "[bounds]") {
    // x small enough that (1 - x + eps)/(d-1) < 1 - x: the family no
    // longer sits at distance eps, and the pair must carry the true E
    const auto pair = extremal_family(3, 0.1, 0.5);
    // p = (0.5, 0.5, 0), q = (0.4, 0.3, 0.3) -> E = 0.3
    CHECK_THAT(pair.eps, WithinAbs(0.3, 1e-15));
    CHECK_THROWS_AS(extremal_family(2, 0.5, 0.4), ParameterError);
    CHECK_THROWS_AS(extremal_family(2, 0.5, 1.1), ParameterError);
}

TEST_CASE("extremal pair attains the bound for every builtin", "[bounds]") {
    for (const auto& f : builtin_registry()) {
        for (int d = 2; d <= 8; ++d) {
            for (int i = 0; i <= 10; ++i) {
                const double eps = i / 10.0;
                const auto [rho, sigma] = extremal_pair(d, eps);
                REQUIRE_THAT(states::trace_distance(rho, sigma),
                             WithinAbs(eps, 1e-12));
                const double gap = std::abs(entropy::f_entropy(rho, f) -
                                            entropy::f_entropy(sigma, f));
                REQUIRE_THAT(gap, WithinAbs(f_bound(f, d, eps).value, 1e-10));
            }
        }
    }
}

TEST_CASE("extremal pair commuting example", "[bounds]") {
    const auto [rho, sigma] = extremal_pair(2, 1.0);
    CHECK(rho.matrix()(0, 0).real() == 1.0);
    CHECK(sigma.matrix()(1, 1).real() == 1.0);
    CHECK_THAT(states::trace_distance(rho, sigma), WithinAbs(1.0, 1e-15));

    const auto [rho2, sigma2] = extremal_pair(4, 0.3);
    CHECK_THAT(sigma2.matrix()(0, 0).real(), WithinAbs(0.7, 1e-15));
    CHECK_THAT(sigma2.matrix()(1, 1).real(), WithinAbs(0.1, 1e-15));
}
