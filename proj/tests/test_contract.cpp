#include <doctest.h>

#include <random>

#include "gfix/contract.hpp"
#include "oracles.hpp"

using namespace gfix;
using namespace gfix::contract;

namespace {

std::shared_ptr<const FiniteGSpace> two_points()
{
    return std::make_shared<const FiniteGSpace>(
        1, std::vector<std::string>{"a", "b"},
        gspace::DistanceTable{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
}

/// d(a,b) = 1, d(a,c) = d(b,c) = 2
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

ContractionCertificate cert(const CertificateOrRefusal& r)
{
    REQUIRE(std::holds_alternative<ContractionCertificate>(r));
    return std::get<ContractionCertificate>(r);
}

Refusal refusal(const CertificateOrRefusal& r)
{
    REQUIRE(std::holds_alternative<Refusal>(r));
    return std::get<Refusal>(r);
}

}  // namespace

TEST_CASE("self-map construction")
{
    CHECK_THROWS_AS(FiniteMap(two_points(), {0}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteMap(two_points(), {0, 2}), std::invalid_argument);
    const FiniteMap m(three_points(), {0, 0, 1});
    CHECK(m.power(2, 2) == 0);
    const std::array<PointIndex, 2> keep{0, 1};
    CHECK(m.preserves(keep));
    CHECK(m.restrict_to(keep).image() == std::vector<PointIndex>{0, 0});
}

TEST_CASE("gauge values")
{
    const FiniteMap swap(two_points(), {1, 0});
    CHECK(gauge_value(CiricMax{}, swap, 0, 1) == Rational(1));
    CHECK(gauge_value(PlainDistance{}, swap, 0, 0) == Rational(0));
    CHECK(gauge_value(proinov_gauge(Rational(1)), swap, 0, 1) == Rational(3));

    const FiniteMap identity(two_points(), {0, 1});
    CHECK(gauge_value(proinov_gauge(Rational(7)), identity, 0, 1) == Rational(1));
    CHECK_THROWS_AS(proinov_gauge(Rational(0)), std::invalid_argument);

    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(
            gspace::generate_space(2, 5, seed, gspace::Strategy::Reject));
        const auto map = random_map(rng, space);
        const Rational gamma(1, 2);
        for (PointIndex x = 0; x < 5; ++x)
            for (PointIndex y = 0; y < 5; ++y) {
                const auto plain = gauge_value(PlainDistance{}, map, x, y);
                const auto diff = gauge_value(ProinovGauge{gamma}, map, x, y) - plain;
                CHECK(diff == gamma * (space->distance(x, map(x)) + space->distance(y, map(y))));
                CHECK(diff.is_zero() == (map(x) == x && map(y) == y));
                CHECK(gauge_value(CiricMax{}, map, x, y) >= plain);
            }
    }
}

TEST_CASE("strict shrink")
{
    const auto id = strict_shrink_check(FiniteMap(two_points(), {0, 1}), PlainDistance{});
    CHECK_FALSE(id.holds);
    CHECK(id.violating == PointPair{0, 1});
    CHECK(strict_shrink_check(FiniteMap(three_points(), {2, 2, 2}), PlainDistance{}).holds);
    CHECK(strict_shrink_check(FiniteMap(two_points(), {1, 0}), proinov_gauge(Rational(1))).holds);

    // minimal-distance violation: identity on the 3-point space reports (a,b)
    const auto three = strict_shrink_check(FiniteMap(three_points(), {0, 1, 2}), PlainDistance{});
    CHECK(three.violating == PointPair{0, 1});
}

TEST_CASE("three-point CM example")
{
    const FiniteMap map(three_points(), {0, 0, 1});
    const auto c = cert(cm_modulus(map));
    const auto& table = std::get<CiricMatkowski>(c.kind).modulus;
    REQUIRE(table.entries.size() == 2);
    CHECK(table.entries[0].eps == Rational(0));
    CHECK(table.entries[0].delta == Rational(2));
    CHECK(table.entries[1].eps == Rational(1));
    CHECK_FALSE(table.entries[1].delta.has_value());
    CHECK(table.delta_at(Rational(1, 2)) == Rational(3, 2));
    CHECK_FALSE(table.delta_at(Rational(5)).has_value());

    const auto rels = oracle::cm_relations(map);
    CHECK(oracle::cm_oracle(map));
    CHECK(oracle::certificate_delta_works(rels, table));

    const auto ratio = banach_ratio(map, PlainDistance{});
    CHECK(ratio.r == Rational(1, 2));
    CHECK(ratio.certificate.has_value());
}

TEST_CASE("constant, identity and swap maps")
{
    const FiniteMap constant(three_points(), {1, 1, 1});
    const auto table = std::get<CiricMatkowski>(cert(cm_modulus(constant)).kind).modulus;
    CHECK_FALSE(table.delta_at(Rational(1, 1000)).has_value());
    CHECK(banach_ratio(constant, PlainDistance{}).r == Rational(0));

    const auto id = refusal(cm_modulus(FiniteMap(two_points(), {0, 1})));
    CHECK(id.pair == PointPair{0, 1});
    CHECK_FALSE(id.undetermined);

    const auto swap = banach_ratio(FiniteMap(two_points(), {1, 0}), PlainDistance{});
    CHECK(swap.r == Rational(1));
    CHECK_FALSE(swap.certificate.has_value());
}

TEST_CASE("on finite spaces strict shrink already gives the CM condition")
{
    std::mt19937_64 rng(17);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(
            gspace::generate_space(1 + seed % 3, 4, seed, gspace::Strategy::Repair));
        const auto map = random_map(rng, space);
        CHECK(oracle::strict_shrink_brute(map) == oracle::cm_oracle(map));
    }
}

TEST_CASE("cm_modulus agrees with the implication oracle")
{
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(gspace::generate_space(
            1 + seed % 3, 2 + seed % 4, seed, static_cast<gspace::Strategy>(seed % 3)));
        const auto map = random_map(rng, space);
        const auto result = cm_modulus(map);
        const bool expect = oracle::cm_oracle(map);
        CHECK(std::holds_alternative<ContractionCertificate>(result) == expect);
        if (expect) {
            const auto& table = std::get<CiricMatkowski>(std::get<ContractionCertificate>(result).kind).modulus;
            CHECK(oracle::certificate_delta_works(oracle::cm_relations(map), table));
            for (const auto& e : table.entries)
                if (e.delta)
                    CHECK(e.delta->is_positive());
        }
    }
}

TEST_CASE("Banach certificates imply CM with delta >= eps (1 - r) / r")
{
    std::mt19937_64 rng(7);
    int seen = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(
            gspace::generate_space(1 + seed % 3, 3 + seed % 3, seed, gspace::Strategy::MetricPerturb));
        const auto map = random_map(rng, space);
        const auto ratio = banach_ratio(map, PlainDistance{});
        if (!ratio.certificate || ratio.r.is_zero())
            continue;
        ++seen;
        const auto result = cm_modulus(map);
        const auto table = std::get<CiricMatkowski>(cert(result).kind).modulus;
        for (const auto& eps : oracle::epsilon_grid(oracle::cm_relations(map))) {
            const auto delta = table.delta_at(eps);
            if (delta)
                CHECK(*delta >= eps * (Rational(1) - ratio.r) / ratio.r);
        }
    }
    CHECK(seen >= 10);
}

TEST_CASE("CM maps have at most one fixed point")
{
    std::mt19937_64 rng(8);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(
            gspace::generate_space(2, 4, seed, gspace::Strategy::Reject));
        const auto map = random_map(rng, space);
        if (!std::holds_alternative<ContractionCertificate>(cm_modulus(map)))
            continue;
        int fixed = 0;
        for (PointIndex x = 0; x < 4; ++x)
            fixed += map(x) == x;
        CHECK(fixed <= 1);
    }
}

TEST_CASE("Proinov shift examples")
{
    const auto constant = cert(proinov_shift_check(FiniteMap(three_points(), {2, 2, 2}), Rational(1), 0));
    CHECK(constant.witnessed);

    // every point fixed: the epsilon-delta condition holds but strict shrink
    // against the gauge does not, so the certificate is unwitnessed
    const auto fixed = cert(proinov_shift_check(FiniteMap(two_points(), {0, 1}), Rational(1, 2), 0));
    CHECK_FALSE(fixed.witnessed);
    const auto& table = std::get<ProinovShift>(fixed.kind).modulus;
    CHECK(table.entries.front().delta == Rational(1));

    const FiniteMap cm(three_points(), {0, 0, 1});
    for (const auto& gamma : default_gamma_grid())
        for (unsigned n : kDefaultBigNGrid) {
            const auto result = proinov_shift_check(cm, gamma, n);
            const auto rels = oracle::proinov_relations(cm, gamma, n);
            CHECK(std::holds_alternative<ContractionCertificate>(result) == oracle::implication_holds_on_grid(rels));
        }
    const auto quarter = proinov_shift_check(cm, Rational(1, 4), 1);
    CHECK(std::holds_alternative<ContractionCertificate>(quarter) ==
          oracle::implication_holds_on_grid(oracle::proinov_relations(cm, Rational(1, 4), 1)));
}

TEST_CASE("Proinov search reports grid exhaustion as undetermined")
{
    // d(a,b) = 1, every other distance 10; T swaps {a,b} with {c,d}
    gspace::DistanceTable d(4, std::vector<Rational>(4, Rational(10)));
    for (int i = 0; i < 4; ++i)
        d[i][i] = Rational(0);
    d[0][1] = d[1][0] = Rational(1);
    const auto space = std::make_shared<const FiniteGSpace>(1, std::vector<std::string>{"a", "b", "c", "d"}, d);
    const FiniteMap expand(space, {2, 3, 0, 1});

    // m(a,b) = 1 + 1/4 (10 + 10) = 6 < d(c,d) = 10
    const auto single = refusal(proinov_shift_check(expand, Rational(1, 4), 0));
    CHECK_FALSE(single.undetermined);
    REQUIRE(single.epsilon.has_value());
    CHECK_FALSE(oracle::delta_exists(oracle::proinov_relations(expand, Rational(1, 4), 0), *single.epsilon));

    const auto r = refusal(proinov_search(expand, Rational(1, 4)));
    CHECK(r.undetermined);

    const auto swap = cert(proinov_search(FiniteMap(two_points(), {1, 0}), Rational(1, 4)));
    CHECK(swap.witnessed);
    const auto found = cert(proinov_search(FiniteMap(three_points(), {0, 0, 1}), Rational(1)));
    CHECK(std::get<ProinovShift>(found.kind).big_n <= 3);
}

TEST_CASE("proinov_shift_check agrees with the implication oracle")
{
    std::mt19937_64 rng(123);
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto space = std::make_shared<const FiniteGSpace>(
            gspace::generate_space(1 + seed % 3, 2 + seed % 4, seed, gspace::Strategy::Repair));
        const auto map = random_map(rng, space);
        for (const auto& gamma : default_gamma_grid())
            for (unsigned n : kDefaultBigNGrid) {
                const auto result = proinov_shift_check(map, gamma, n);
                const auto rels = oracle::proinov_relations(map, gamma, n);
                const bool expect = oracle::implication_holds_on_grid(rels);
                REQUIRE(std::holds_alternative<ContractionCertificate>(result) == expect);
                if (expect) {
                    const auto& c = std::get<ContractionCertificate>(result);
                    CHECK(c.witnessed == oracle::proinov_shrink_brute(map, gamma));
                    CHECK(oracle::certificate_delta_works(rels, std::get<ProinovShift>(c.kind).modulus));
                }
            }
    }
}

TEST_CASE("asymptotic regularity")
{
    const auto constant = asymptotic_regularity_check(FiniteMap(three_points(), {1, 1, 1}), 2);
    for (const auto& v : constant)
        CHECK(v.regular);
    const auto swap = asymptotic_regularity_check(FiniteMap(two_points(), {1, 0}), 50);
    for (const auto& v : swap)
        CHECK_FALSE(v.regular);

    const auto space = std::make_shared<const gspace::IntervalSpace>(0.0, 1.0);
    const IntervalMap half(space, realdsl::parse_map_expr("x/2"));
    const auto v = asymptotic_regularity_check(half, {1.0}, 23, 1e-6);
    REQUIRE(v.size() == 1);
    CHECK(v[0].regular);
    // closed form: s_n = 2^-n (1/2 + 3/4) = 1.25 * 2^-n <= 1e-6 first at n = 21
    std::size_t first = 0;
    while (1.25 * std::ldexp(1.0, -static_cast<int>(first)) > 1e-6)
        ++first;
    CHECK(v[0].from == first);
    CHECK_FALSE(asymptotic_regularity_check(half, {1.0}, 22, 1e-6)[0].regular);
}

TEST_CASE("classify")
{
    const auto constant = classify(FiniteMap(three_points(), {2, 2, 2}));
    bool banach = false, quasi = false, cm = false, proinov = false;
    for (const auto& c : constant.certificates) {
        banach |= std::holds_alternative<Banach>(c.kind);
        quasi |= std::holds_alternative<CiricQuasi>(c.kind);
        cm |= std::holds_alternative<CiricMatkowski>(c.kind);
        proinov |= std::holds_alternative<ProinovShift>(c.kind);
    }
    CHECK((banach && quasi && cm && proinov));

    const auto identity = classify(FiniteMap(three_points(), {0, 1, 2}));
    CHECK(identity.certificates.empty());
    CHECK_FALSE(identity.refusals.empty());
}
