#include <doctest.h>

#include <random>

#include "gfix/contract.hpp"
#include "gfix/picard.hpp"
#include "oracles.hpp"

using namespace gfix;
using namespace gfix::picard;

namespace {

std::shared_ptr<const FiniteGSpace> three_points()
{
    return std::make_shared<const FiniteGSpace>(
        1, std::vector<std::string>{"a", "b", "c"},
        gspace::DistanceTable{{Rational(0), Rational(1), Rational(2)},
                              {Rational(1), Rational(0), Rational(2)},
                              {Rational(2), Rational(2), Rational(0)}});
}

FiniteMap random_map(std::mt19937_64& rng, std::shared_ptr<const FiniteGSpace> space)
{
    std::vector<PointIndex> image(space->size());
    std::uniform_int_distribution<PointIndex> pick(0, space->size() - 1);
    for (auto& p : image)
        p = pick(rng);
    return FiniteMap(std::move(space), image);
}

}  // namespace

TEST_CASE("constant map reaches its fixed point at index at most 1")
{
    const FiniteMap constant(three_points(), {2, 2, 2});
    for (PointIndex x0 = 0; x0 < 3; ++x0) {
        const auto r = iterate(constant, x0, 10);
        REQUIRE(r.is_fixed_point());
        const auto fp = std::get<FixedPoint<PointIndex>>(r.outcome);
        CHECK(fp.z == 2);
        CHECK(fp.at <= 1);
        for (std::size_t i = fp.at; i < r.trace.size(); ++i)
            CHECK(r.trace[i] == 2);
    }
    const auto from_a = iterate(constant, 0, 10);
    const auto d = orbit_dichotomy(from_a);
    REQUIRE(std::holds_alternative<AllSameFrom>(d));
    CHECK(std::get<AllSameFrom>(d).k == 1);
}

TEST_CASE("swap map cycles with period 2")
{
    const FiniteMap swap(three_points(), {1, 0, 2});
    const auto r = iterate(swap, 0, 10);
    REQUIRE(r.is_cycle());
    CHECK(std::get<Cycle>(r.outcome).entry == 0);
    CHECK(std::get<Cycle>(r.outcome).period == 2);
    const auto d = orbit_dichotomy(r);
    REQUIRE(std::holds_alternative<CycleFound>(d));
    CHECK(std::get<CycleFound>(d).entry == 0);
    CHECK(std::get<CycleFound>(d).period == 2);
}

TEST_CASE("short budgets exhaust")
{
    const FiniteMap map(three_points(), {0, 0, 1});
    const auto r = iterate(map, 2, 1);
    CHECK(std::holds_alternative<BudgetExhausted>(r.outcome));
    CHECK(std::holds_alternative<AllDistinct>(orbit_dichotomy(r)));
    CHECK(r.trace.size() == 2);
    CHECK(iterate(map, 2, 3).is_fixed_point());
}

TEST_CASE("fixed point enumeration")
{
    CHECK(fixed_points(FiniteMap(three_points(), {0, 1, 2})) == std::vector<PointIndex>{0, 1, 2});
    CHECK(fixed_points(FiniteMap(three_points(), {2, 2, 2})) == std::vector<PointIndex>{2});
    CHECK(fixed_points(FiniteMap(three_points(), {0, 0, 1})) == std::vector<PointIndex>{0});
}

TEST_CASE("x/(1+x) against the closed form 1/(n+1)")
{
    // x_n = x0 / (1 + n x0): step n is 1/((n+1)(n+2)), first <= 1e-3 at n = 31
    std::size_t expect = 0;
    while ((expect + 1) * (expect + 2) < 1000)
        ++expect;
    REQUIRE(expect == 31);

    const auto space = std::make_shared<const IntervalSpace>(0.0, 2.0);
    const IntervalMap map(space, realdsl::parse_map_expr("x/(1+x)"));
    const auto r = iterate(map, 1.0, 1000, 1e-3);
    REQUIRE(r.is_fixed_point());
    const auto fp = std::get<FixedPoint<double>>(r.outcome);
    CHECK(fp.at == expect);
    CHECK(fp.z < 0.05);
    for (std::size_t n = 0; n < r.trace.size(); ++n)
        CHECK(r.trace[n] == doctest::Approx(1.0 / static_cast<double>(n + 1)).epsilon(1e-12));
    REQUIRE(r.diagnostics.has_value());
    CHECK(r.eps_series.size() == 2);
    for (const auto& series : r.eps_series)
        for (std::size_t n = 1; n < series.size(); ++n)
            CHECK(series[n] < series[n - 1]);

    CHECK(std::holds_alternative<BudgetExhausted>(iterate(map, 1.0, 20, 1e-3).outcome));
}

TEST_CASE("interval orbit leaving the domain is an error")
{
    const auto space = std::make_shared<const IntervalSpace>(0.0, 1.0);
    const IntervalMap map(space, realdsl::parse_map_expr("x*x"));
    CHECK(iterate(map, 0.5, 100, 1e-9).is_fixed_point());
    CHECK_THROWS_AS(IntervalMap(space, realdsl::parse_map_expr("2*x")), std::invalid_argument);
}

TEST_CASE("CM-certified maps converge to their unique fixed point")
{
    std::mt19937_64 rng(41);
    int certified = 0;
    for (std::uint64_t seed = 0; seed < 600; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(gspace::generate_space(
            1 + seed % 3, 3 + seed % 4, seed, static_cast<gspace::Strategy>(seed % 3)));
        const auto map = random_map(rng, space);
        if (!std::holds_alternative<contract::ContractionCertificate>(contract::cm_modulus(map)))
            continue;
        ++certified;
        const auto fixed = fixed_points(map);
        REQUIRE(fixed.size() == 1);
        for (PointIndex x0 = 0; x0 < space->size(); ++x0) {
            const auto r = iterate(map, x0, 4 * space->size());
            REQUIRE(r.is_fixed_point());
            CHECK(std::get<FixedPoint<PointIndex>>(r.outcome).z == fixed.front());
            CHECK_FALSE(std::holds_alternative<CycleFound>(orbit_dichotomy(r)));
            for (const auto& series : r.eps_series)
                for (std::size_t n = 1; n < series.size(); ++n)
                    CHECK(series[n] < series[n - 1]);
        }
    }
    CHECK(certified > 20);
}

TEST_CASE("finite outcomes are stable under larger budgets")
{
    std::mt19937_64 rng(42);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(
            gspace::generate_space(2, 6, seed, gspace::Strategy::Reject));
        const auto map = random_map(rng, space);
        const auto a = iterate(map, 0, 6);
        const auto b = iterate(map, 0, 60);
        REQUIRE_FALSE(std::holds_alternative<BudgetExhausted>(a.outcome));
        CHECK(describe(a.outcome, *space) == describe(b.outcome, *space));
        CHECK(a.trace.entries() == b.trace.entries());
    }
}

TEST_CASE("orbit prefix follows the map")
{
    const FiniteMap map(three_points(), {0, 0, 1});
    CHECK(orbit_prefix(map, 2, 5).entries() == std::vector<PointIndex>{2, 1, 0, 0, 0});
}
