#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "samplan/normal.hpp"

using samplan::confidence_spec;
using samplan::phi;
using samplan::phi_inv;

namespace {

// High-precision reference values, frozen from a 50-digit evaluation of the
// normal CDF. Tolerance 1e-10 absolute.
struct PhiRef {
    double x;
    double p;
};
const PhiRef kPhiRefs[] = {
    {-8.0, 6.22096057427178412e-16},
    {-6.0, 9.86587645037698141e-10},
    {-5.0, 2.86651571879193912e-7},
    {-4.0, 0.0000316712418331199213},
    {-3.0, 0.00134989803163009453},
    {-2.326, 0.0100092753408676655},
    {-2.0, 0.0227501319481792072},
    {-1.645, 0.0499849055391213634},
    {-1.0, 0.158655253931457051},
    {-0.5, 0.308537538725986896},
    {-0.1, 0.460172162722971016},
    {0.3, 0.617911422188952633},
    {0.524, 0.699860730068389042},
    {0.842, 0.800106023273943219},
    {1.036, 0.849898928741722554},
    {1.282, 0.90007867688661713},
    {1.645, 0.950015094460878637},
    {1.96, 0.975002104851779564},
    {2.5, 0.993790334674223865},
    {4.0, 0.99996832875816688},
};

} // namespace

TEST_CASE("phi matches frozen references to 1e-10") {
    for (const auto& ref : kPhiRefs) {
        INFO("x = " << ref.x);
        CHECK(std::abs(phi(ref.x) - ref.p) <= 1e-10);
    }
}

TEST_CASE("phi basic shape") {
    CHECK(phi(0.0) == 0.5);
    CHECK(phi(40.0) == 1.0);
    CHECK(phi(-40.0) == 0.0);

    SECTION("symmetry phi(x) + phi(-x) == 1") {
        for (double x = -8.0; x <= 8.0; x += 0.173) {
            CHECK(std::abs(phi(x) + phi(-x) - 1.0) <= 1e-12);
        }
    }

    SECTION("strictly increasing on random pairs") {
        std::mt19937 rng(20240613u);
        std::uniform_real_distribution<double> u(-6.0, 6.0);
        for (int i = 0; i < 1000; ++i) {
            double a = u(rng), b = u(rng);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            CHECK(phi(a) < phi(b));
        }
    }

    SECTION("rejects non-finite input") {
        CHECK_THROWS_AS(phi(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
        CHECK_THROWS_AS(phi(std::numeric_limits<double>::infinity()), std::invalid_argument);
    }
}

TEST_CASE("phi_inv matches frozen quantiles") {
    // Frozen from the same 50-digit evaluation.
    CHECK(phi_inv(0.5) == 0.0);
    CHECK(std::abs(phi_inv(0.70) - 0.524400512708041) <= 1e-9);
    CHECK(std::abs(phi_inv(0.75) - 0.674489750196082) <= 1e-9);
    CHECK(std::abs(phi_inv(0.80) - 0.841621233572914) <= 1e-9);
    CHECK(std::abs(phi_inv(0.85) - 1.036433389493790) <= 1e-9);
    CHECK(std::abs(phi_inv(0.90) - 1.281551565544600) <= 1e-9);
    CHECK(std::abs(phi_inv(0.95) - 1.644853626951472) <= 1e-9);
    CHECK(std::abs(phi_inv(0.99) - 2.326347874040841) <= 1e-9);
}

TEST_CASE("phi_inv round trip on the 999-point grid") {
    // p = 0.001 .. 0.999: |phi(phi_inv(p)) - p| <= 1e-9 everywhere.
    for (int i = 1; i <= 999; ++i) {
        double p = i / 1000.0;
        INFO("p = " << p);
        CHECK(std::abs(phi(phi_inv(p)) - p) <= 1e-9);
    }
}

TEST_CASE("phi_inv antisymmetry and tails") {
    for (double p : {0.0001, 0.013, 0.2, 0.37, 0.49}) {
        CHECK(std::abs(phi_inv(1.0 - p) + phi_inv(p)) <= 1e-9);
    }
    // Deep tails still round trip (relative error, since p is tiny).
    for (double p : {1e-12, 1e-9, 1e-6, 1.0 - 1e-9}) {
        CHECK(std::abs(phi(phi_inv(p)) - p) / p <= 1e-6);
    }
}

TEST_CASE("phi_inv rejects out-of-domain p") {
    CHECK_THROWS_AS(phi_inv(0.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_inv(1.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_inv(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(phi_inv(1.7), std::invalid_argument);
}

TEST_CASE("confidence_spec carries level, alpha and z") {
    // z values as published to three decimals; the stored quantile must
    // agree with each rounded value to 5e-4.
    const std::pair<double, double> rows[] = {
        {0.70, 0.524}, {0.75, 0.674}, {0.80, 0.842}, {0.85, 1.036},
        {0.90, 1.282}, {0.95, 1.645}, {0.99, 2.326},
    };
    for (const auto& [level, z3] : rows) {
        auto c = confidence_spec(level);
        INFO("level = " << level);
        CHECK(c.level == level);
        CHECK(std::abs(c.alpha - (1.0 - level)) <= 1e-15);
        CHECK(std::abs(c.z - z3) <= 5e-4);
        CHECK(std::abs(phi(c.z) - level) <= 1e-10);
    }
}

TEST_CASE("confidence_spec rejects vacuous levels") {
    CHECK_THROWS_AS(confidence_spec(0.5), std::invalid_argument);
    CHECK_THROWS_AS(confidence_spec(1.0), std::invalid_argument);
    CHECK_THROWS_AS(confidence_spec(0.3), std::invalid_argument);
    CHECK_THROWS_AS(confidence_spec(-1.0), std::invalid_argument);
}
