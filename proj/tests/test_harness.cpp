#include <doctest.h>

#include <filesystem>

#include "gfix/harness.hpp"
#include "gfix/io.hpp"

using namespace gfix;
using namespace gfix::harness;

namespace {

HuntConfig small_config(Theorem theorem = Theorem::CmFixedPoint)
{
    HuntConfig c;
    c.nus = {1, 2, 3};
    c.sizes = {3, 4, 5};
    c.instances = 120;
    c.seed = 7;
    c.theorem = theorem;
    return c;
}

bool same_tallies(const HuntReport& a, const HuntReport& b)
{
    if (a.attempted != b.attempted || a.generation_failures != b.generation_failures ||
        a.hypothesis_satisfied != b.hypothesis_satisfied || a.conclusion_verified != b.conclusion_verified ||
        a.counterexamples.size() != b.counterexamples.size())
        return false;
    for (std::size_t i = 0; i < a.counterexamples.size(); ++i)
        if (a.counterexamples[i].instance != b.counterexamples[i].instance ||
            a.counterexamples[i].image != b.counterexamples[i].image)
            return false;
    return true;
}

}  // namespace

TEST_CASE("names parse back")
{
    for (auto t : {Theorem::CmFixedPoint, Theorem::Proinov, Theorem::NuCauchyBridge, Theorem::StepLemma,
                   Theorem::DistanceContinuity})
        CHECK(parse_theorem(to_string(t)) == t);
    CHECK_FALSE(parse_theorem("banach").has_value());
    CHECK(parse_map_mode("uniform") == MapMode::Uniform);
    CHECK(parse_map_mode("sink-biased") == MapMode::SinkBiased);
}

TEST_CASE("config validation")
{
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    c.instances = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.gamma_grid = {Rational(0)};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.nus.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("instances depend only on seed and index")
{
    const auto c = small_config();
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto a = make_instance(c, i);
        const auto b = make_instance(c, i);
        REQUIRE(a.map.has_value() == b.map.has_value());
        if (a.map) {
            CHECK(a.map->image() == b.map->image());
            CHECK(a.map->space().table() == b.map->space().table());
            CHECK(gspace::validate_space(a.map->space()).ok);
        }
    }
}

TEST_CASE("every theorem hunt is clean and its tallies are consistent")
{
    for (auto t : {Theorem::CmFixedPoint, Theorem::Proinov, Theorem::NuCauchyBridge, Theorem::StepLemma,
                   Theorem::DistanceContinuity}) {
        const auto report = run_hunt(small_config(t));
        INFO(to_string(t));
        CHECK(report.counterexamples.empty());
        CHECK(report.hypothesis_satisfied > 0);
        CHECK(report.hypothesis_satisfied <= report.attempted);
        CHECK(report.conclusion_verified + report.counterexamples.size() == report.hypothesis_satisfied);
        CHECK(report.attempted == 120);
    }
}

TEST_CASE("reports do not depend on the thread count")
{
    auto c = small_config();
    const auto serial = run_hunt(c);
    c.threads = 3;
    CHECK(same_tallies(serial, run_hunt(c)));
    c.invert_assertion = true;
    c.shrink = false;
    const auto inv3 = run_hunt(c);
    c.threads = 1;
    CHECK(same_tallies(inv3, run_hunt(c)));
}

TEST_CASE("inverted assertion reports every satisfied instance")
{
    auto c = small_config();
    c.invert_assertion = true;
    c.shrink = false;
    const auto report = run_hunt(c);
    CHECK(report.hypothesis_satisfied > 0);
    CHECK(report.counterexamples.size() == report.hypothesis_satisfied);
    CHECK(report.conclusion_verified == 0);
    for (const auto& cx : report.counterexamples)
        CHECK(reproduces(c, cx));
}

TEST_CASE("shrinking keeps a reproducible counterexample and never grows it")
{
    auto c = small_config();
    c.invert_assertion = true;
    c.instances = 40;
    const auto report = run_hunt(c);
    REQUIRE_FALSE(report.counterexamples.empty());
    for (const auto& cx : report.counterexamples) {
        const auto original = make_instance(c, cx.instance);
        REQUIRE(original.map.has_value());
        CHECK(cx.space.size() <= original.map->space().size());
        CHECK(reproduces(c, cx));
    }
}

TEST_CASE("machine reports round trip byte for byte")
{
    auto c = small_config();
    c.invert_assertion = true;
    c.instances = 30;
    const auto report = run_hunt(c);
    const auto machine = render_report(report, Format::Machine);
    const auto back = parse_report(machine);
    CHECK(render_report(back, Format::Machine) == machine);
    CHECK(same_tallies(report, back));

    const auto clean = render_report(run_hunt(small_config()), Format::Machine);
    CHECK(render_report(parse_report(clean), Format::Machine) == clean);
    CHECK_THROWS_AS(parse_report("{}"), io::InputError);
}

TEST_CASE("empty report has zero tallies")
{
    HuntReport empty;
    const auto text = render_report(empty, Format::Text);
    CHECK(text.find("attempted             0") != std::string::npos);
    CHECK(text.find("counterexamples       0") != std::string::npos);
    const auto back = parse_report(render_report(empty, Format::Machine));
    CHECK(back.attempted == 0);
    CHECK(back.hypothesis_satisfied == 0);
    CHECK(back.counterexamples.empty());
}

TEST_CASE("counterexample dumps reload as space and map files")
{
    auto c = small_config();
    c.invert_assertion = true;
    c.instances = 10;
    const auto report = run_hunt(c);
    REQUIRE_FALSE(report.counterexamples.empty());
    const auto& cx = report.counterexamples.front();

    const auto dir = std::filesystem::temp_directory_path() / "gfix_harness_test";
    std::filesystem::create_directories(dir);
    io::write_text_file(dir / "space.json", io::to_json(cx.space).dump(2));
    io::write_text_file(dir / "map.json", io::to_json(cx.map()).dump(2));

    const auto space = std::make_shared<const gspace::FiniteGSpace>(io::load_space(dir / "space.json"));
    const auto map = std::get<contract::FiniteMap>(io::map_from_json(io::read_json_file(dir / "map.json"), space));
    CHECK(map.image() == cx.image);
    const auto ev = evaluate(c, map);
    CHECK(ev.hypothesis);
    CHECK(ev.failure.has_value());
}

TEST_CASE("the identity never satisfies a hypothesis")
{
    const auto space = std::make_shared<const gspace::FiniteGSpace>(gspace::generate_space(1, 3, 1, gspace::Strategy::Reject));
    const contract::FiniteMap identity(space, {0, 1, 2});
    for (auto t : {Theorem::CmFixedPoint, Theorem::Proinov}) {
        HuntConfig c;
        c.theorem = t;
        CHECK_FALSE(evaluate(c, identity).hypothesis);
    }
}
