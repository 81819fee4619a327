#include "testutil.hpp"

#include <cmath>
#include <vector>

using namespace fentropy;
using namespace fentropy::entropy;
using fentropy::majorization::ProbabilityVector;
using fentropy::states::from_probabilities;
using fentropy::states::random_density;
using Catch::Matchers::WithinAbs;

TEST_CASE("shannon entropy of canonical states", "[entropy]") {
    const auto f = ConvexFunction::shannon();
    CHECK(f_entropy(from_probabilities(ProbabilityVector({1.0, 0.0})), f) ==
          0.0);
    CHECK_THAT(f_entropy(from_probabilities(ProbabilityVector({0.5, 0.5})), f),
               WithinAbs(1.0, 1e-14));
    CHECK_THAT(
        f_entropy(from_probabilities(ProbabilityVector(
                      std::vector<double>(8, 0.125))),
                  f),
        WithinAbs(3.0, 1e-13));
}

TEST_CASE("shannon entropy stays in [0, log2 d]", "[entropy]") {
    const auto f = ConvexFunction::shannon();
    Rng rng(60);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + static_cast<int>(rng.next() % 7);
        const double s = f_entropy(random_density(d, rng), f);
        REQUIRE(s >= 0.0);
        REQUIRE(s <= std::log2(double(d)) + 1e-12);
    }
}

TEST_CASE("natural_xlogx entropy is ln2 times shannon", "[entropy]") {
    const auto s = ConvexFunction::shannon();
    const auto n = ConvexFunction::natural_xlogx();
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rho = random_density(4, rng);
        REQUIRE_THAT(f_entropy(rho, n),
                     WithinAbs(std::log(2.0) * f_entropy(rho, s), 1e-12));
    }
}

TEST_CASE("tsallis entropy of known spectra", "[entropy]") {
    const auto t2 = ConvexFunction::tsallis(2.0);
    // S_2 = 1 - sum p^2
    CHECK_THAT(f_entropy(from_probabilities(ProbabilityVector({0.5, 0.5})), t2),
               WithinAbs(0.5, 1e-14));
    CHECK_THAT(
        f_entropy(from_probabilities(ProbabilityVector({0.5, 0.25, 0.25})),
                  t2),
        WithinAbs(1.0 - 0.375, 1e-14));
    CHECK(f_entropy(from_probabilities(ProbabilityVector({1.0, 0.0})), t2) ==
          0.0);
}

TEST_CASE("gini_simpson entropy equals tsallis(2) exactly", "[entropy]") {
    const auto g = ConvexFunction::gini_simpson();
    const auto t2 = ConvexFunction::tsallis(2.0);
    Rng rng(62);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rho = random_density(5, rng);
        REQUIRE(f_entropy(rho, g) == f_entropy(rho, t2));
    }
}

TEST_CASE("renyi parameter validation", "[entropy]") {
    const auto rho = from_probabilities(ProbabilityVector({0.5, 0.5}));
    CHECK_THROWS_AS(renyi(rho, 1.0), ParameterError);
    CHECK_THROWS_AS(renyi(rho, 0.5), ParameterError);
    CHECK_THAT(renyi(rho, 2.0), WithinAbs(1.0, 1e-14));
}

TEST_CASE("tsallis is the documented transform of renyi", "[entropy]") {
    Rng rng(63);
    for (double alpha : {1.5, 2.0, 3.0}) {
        const auto f = ConvexFunction::tsallis(alpha);
        for (int trial = 0; trial < 30; ++trial) {
            const int d = 2 + static_cast<int>(rng.next() % 5);
            const auto rho = random_density(d, rng);
            const double r = renyi(rho, alpha);
            const double expected =
                (1.0 - std::exp2((1.0 - alpha) * r)) / (alpha - 1.0);
            REQUIRE_THAT(f_entropy(rho, f), WithinAbs(expected, 1e-9));
        }
    }
}

TEST_CASE("f_entropy is basis independent", "[entropy]") {
    const auto f = ConvexFunction::shannon();
    Rng rng(64);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 2 + static_cast<int>(rng.next() % 5);
        const auto rho = random_density(d, rng);
        const auto u = states::random_unitary(d, rng);
        const auto rotated =
            states::validate_density(linalg::conjugate_by(u, rho.matrix()));
        REQUIRE_THAT(f_entropy(rotated, f),
                     WithinAbs(f_entropy(rho, f), 1e-9));
    }
}

TEST_CASE("binary entropy values and symmetry", "[entropy]") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK_THAT(binary_entropy(0.5), WithinAbs(1.0, 1e-15));
    CHECK_THAT(binary_entropy(0.11), WithinAbs(0.49991595816452800, 1e-14));
    CHECK_THAT(binary_entropy(0.25), WithinAbs(0.81127812445913286, 1e-14));
    // exact symmetry on a dyadic grid, where 1-x is exact
    for (int i = 0; i <= 64; ++i) {
        const double x = i / 64.0;
        REQUIRE(binary_entropy(x) == binary_entropy(1.0 - x));
    }
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
}
