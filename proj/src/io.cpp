#include "gfix/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gfix::io {

using contract::FiniteMap;
using contract::IntervalMap;
using gspace::FiniteGSpace;
using gspace::IntervalSpace;
using gspace::PointIndex;

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << text;
}

Rational rational_from_json(const json& j)
{
    try {
        if (j.is_string())
            return Rational::parse(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(j.get<std::int64_t>());
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    throw InputError("expected a rational literal, got " + j.dump());
}

json to_json(const FiniteGSpace& space)
{
    json dist = json::array();
    for (const auto& row : space.table()) {
        json r = json::array();
        for (const auto& d : row)
            r.push_back(d.to_string());
        dist.push_back(std::move(r));
    }
    return json{{"nu", space.nu()}, {"points", space.points()}, {"dist", std::move(dist)}};
}

FiniteGSpace space_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("nu") || !j.contains("points") || !j.contains("dist"))
        throw InputError("space document needs \"nu\", \"points\" and \"dist\"");
    if (!j["nu"].is_number_integer() || j["nu"].get<std::int64_t>() < 1)
        throw InputError("\"nu\" must be a positive integer");
    if (!j["points"].is_array() || !j["dist"].is_array())
        throw InputError("\"points\" and \"dist\" must be arrays");

    std::vector<std::string> points;
    for (const auto& p : j["points"]) {
        if (!p.is_string())
            throw InputError("point identifiers must be strings");
        points.push_back(p.get<std::string>());
    }
    gspace::DistanceTable table;
    for (const auto& row : j["dist"]) {
        if (!row.is_array())
            throw InputError("\"dist\" must be an array of rows");
        std::vector<Rational> r;
        for (const auto& d : row)
            r.push_back(rational_from_json(d));
        table.push_back(std::move(r));
    }
    try {
        return FiniteGSpace(static_cast<unsigned>(j["nu"].get<std::int64_t>()), std::move(points), std::move(table));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

FiniteGSpace load_space(const std::filesystem::path& path) { return space_from_json(read_json_file(path)); }

json to_json(const gspace::ValidationReport& report, const FiniteGSpace& space)
{
    json mode;
    if (const auto* s = std::get_if<gspace::Sampled>(&report.mode))
        mode = json{{"kind", "sampled"}, {"budget", s->budget}, {"seed", s->seed}};
    else
        mode = json{{"kind", "exhaustive"}};
    json violations = json::array();
    for (const auto& v : report.violations) {
        json tuple = json::array();
        for (PointIndex p : v.tuple)
            tuple.push_back(p < space.size() ? space.name(p) : std::to_string(p));
        violations.push_back(json{{"kind", std::string(gspace::to_string(v.kind))},
                                  {"tuple", std::move(tuple)},
                                  {"lhs", v.lhs.to_string()},
                                  {"rhs", v.rhs.to_string()}});
    }
    return json{{"ok", report.ok},
                {"nu", space.nu()},
                {"mode", std::move(mode)},
                {"tuples_checked", report.tuples_checked},
                {"violations", std::move(violations)}};
}

namespace {

std::pair<double, double> domain_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("\"domain\" must be [lo, hi]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::shared_ptr<const IntervalSpace> interval_from_domain(const json& j)
{
    const auto [lo, hi] = domain_from_json(j);
    try {
        return std::make_shared<const IntervalSpace>(lo, hi);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

}  // namespace

AnyMap map_from_json(const json& j, std::shared_ptr<const FiniteGSpace> space)
{
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw InputError("map document needs a \"type\"");
    const auto type = j["type"].get<std::string>();
    if (type == "table") {
        if (!space)
            throw InputError("a table map needs a space");
        if (!j.contains("map") || !j["map"].is_object())
            throw InputError("table map needs a \"map\" object");
        std::vector<std::optional<PointIndex>> image(space->size());
        for (const auto& [from, to] : j["map"].items()) {
            const auto x = space->find(from);
            if (!x)
                throw InputError("map key '" + from + "' is not a point of the space");
            if (!to.is_string())
                throw InputError("map values must be point identifiers");
            const auto y = space->find(to.get<std::string>());
            if (!y)
                throw InputError("map value '" + to.get<std::string>() + "' is not a point of the space");
            image[*x] = *y;
        }
        std::vector<PointIndex> resolved;
        for (std::size_t i = 0; i < image.size(); ++i) {
            if (!image[i])
                throw InputError("map is not total: no image for '" + space->name(i) + "'");
            resolved.push_back(*image[i]);
        }
        return FiniteMap(std::move(space), std::move(resolved));
    }
    if (type == "expr") {
        if (!j.contains("expr") || !j["expr"].is_string() || !j.contains("domain"))
            throw InputError("expression map needs \"domain\" and \"expr\"");
        auto interval = interval_from_domain(j["domain"]);
        try {
            return IntervalMap(std::move(interval), realdsl::parse_map_expr(j["expr"].get<std::string>()));
        } catch (const realdsl::ParseError& e) {
            throw InputError(std::string("expression: ") + e.what());
        } catch (const realdsl::EvalError& e) {
            throw InputError(std::string("expression: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    throw InputError("unknown map type '" + type + "'");
}

json to_json(const FiniteMap& map)
{
    json table = json::object();
    for (PointIndex x = 0; x < map.space().size(); ++x)
        table[map.space().name(x)] = map.space().name(map(x));
    return json{{"type", "table"}, {"map", std::move(table)}};
}

json to_json(const IntervalMap& map)
{
    return json{{"type", "expr"},
                {"domain", json::array({map.space().lo(), map.space().hi()})},
                {"expr", map.expr().to_source()}};
}

json to_json(const contract::ModulusTable& table)
{
    json entries = json::array();
    for (const auto& e : table.entries)
        entries.push_back(json{{"eps", e.eps.to_string()}, {"delta", e.delta ? e.delta->to_string() : "inf"}});
    return json{{"entries", std::move(entries)}, {"domain_note", table.domain_note}};
}

contract::ModulusTable modulus_from_json(const json& j)
{
    contract::ModulusTable table;
    if (!j.contains("entries") || !j["entries"].is_array())
        throw InputError("modulus table needs \"entries\"");
    for (const auto& e : j["entries"]) {
        contract::ModulusEntry entry{rational_from_json(e.at("eps")), std::nullopt};
        if (!(e.at("delta").is_string() && e.at("delta").get<std::string>() == "inf"))
            entry.delta = rational_from_json(e.at("delta"));
        table.entries.push_back(std::move(entry));
    }
    table.domain_note = j.value("domain_note", "");
    return table;
}

json to_json(const contract::ContractionCertificate& cert)
{
    json out = std::visit(
        [](const auto& k) -> json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, contract::Banach>)
                return json{{"kind", "banach"}, {"r", k.r.to_string()}};
            else if constexpr (std::is_same_v<K, contract::CiricQuasi>)
                return json{{"kind", "ciric-quasi"}, {"r", k.r.to_string()}};
            else if constexpr (std::is_same_v<K, contract::CiricMatkowski>)
                return json{{"kind", "ciric-matkowski"}, {"modulus", to_json(k.modulus)}};
            else
                return json{{"kind", "proinov-shift"},
                            {"gamma", k.gamma.to_string()},
                            {"N", k.big_n},
                            {"modulus", to_json(k.modulus)}};
        },
        cert.kind);
    out["witnessed"] = cert.witnessed;
    return out;
}

contract::ContractionCertificate certificate_from_json(const json& j)
{
    try {
        const auto kind = j.at("kind").get<std::string>();
        const bool witnessed = j.at("witnessed").get<bool>();
        if (kind == "banach")
            return {contract::Banach{rational_from_json(j.at("r"))}, witnessed};
        if (kind == "ciric-quasi")
            return {contract::CiricQuasi{rational_from_json(j.at("r"))}, witnessed};
        if (kind == "ciric-matkowski")
            return {contract::CiricMatkowski{modulus_from_json(j.at("modulus"))}, witnessed};
        if (kind == "proinov-shift")
            return {contract::ProinovShift{rational_from_json(j.at("gamma")), j.at("N").get<unsigned>(),
                                           modulus_from_json(j.at("modulus"))},
                    witnessed};
        throw InputError("unknown certificate kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InputError(std::string("certificate: ") + e.what());
    }
}

json to_json(const contract::Refusal& refusal, const FiniteGSpace& space)
{
    json out{{"reason", refusal.reason}, {"undetermined", refusal.undetermined}};
    if (refusal.pair)
        out["pair"] = json::array({space.name(refusal.pair->first), space.name(refusal.pair->second)});
    if (refusal.epsilon)
        out["epsilon"] = refusal.epsilon->to_string();
    return out;
}

json to_json(const IntervalSpace& space)
{
    return json{{"type", "interval"}, {"domain", json::array({space.lo(), space.hi()})}};
}

AnyTrace trace_from_json(const json& j, const std::filesystem::path& base_dir)
{
    if (!j.is_object() || !j.contains("space") || !j.contains("entries") || !j["entries"].is_array())
        throw InputError("trace document needs \"space\" and \"entries\"");
    json space_doc = j["space"];
    if (space_doc.is_string())
        space_doc = read_json_file(base_dir / space_doc.get<std::string>());

    try {
        if (space_doc.is_object() && space_doc.value("type", "") == "interval") {
            auto space = interval_from_domain(space_doc.at("domain"));
            std::vector<double> entries;
            for (const auto& e : j["entries"]) {
                if (!e.is_number())
                    throw InputError("interval trace entries must be numbers");
                entries.push_back(e.get<double>());
            }
            return Trace<IntervalSpace>(std::move(space), std::move(entries));
        }
        auto space = std::make_shared<const FiniteGSpace>(space_from_json(space_doc));
        std::vector<PointIndex> entries;
        for (const auto& e : j["entries"]) {
            if (!e.is_string())
                throw InputError("finite trace entries must be point identifiers");
            const auto p = space->find(e.get<std::string>());
            if (!p)
                throw InputError("trace entry '" + e.get<std::string>() + "' is not a point of the space");
            entries.push_back(*p);
        }
        return Trace<FiniteGSpace>(std::move(space), std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    } catch (const json::exception& e) {
        throw InputError(e.what());
    }
}

json to_json(const Trace<FiniteGSpace>& trace)
{
    json entries = json::array();
    for (PointIndex p : trace.entries())
        entries.push_back(trace.space().name(p));
    return json{{"space", to_json(trace.space())}, {"entries", std::move(entries)}};
}

json to_json(const Trace<IntervalSpace>& trace)
{
    return json{{"space", to_json(trace.space())}, {"entries", trace.entries()}};
}

namespace {

template <class V>
json value_json(const V& v)
{
    if constexpr (std::is_same_v<V, Rational>)
        return v.to_string();
    else
        return v;
}

template <class V>
json series_json(const std::vector<V>& values)
{
    json out = json::array();
    for (const auto& v : values)
        out.push_back(value_json(v));
    return out;
}

template <class S>
json orbit_json(const picard::OrbitResult<S>& result, json outcome)
{
    json out = to_json(result.trace);
    out["outcome"] = std::move(outcome);
    if (result.diagnostics) {
        json series = json::array();
        for (const auto& s : result.diagnostics->series)
            series.push_back(json{{"stride", s.stride},
                                  {"tail_below_tol", s.tail_below_tol},
                                  {"values", series_json(s.values)}});
        out["diagnostics"] = json{{"tol", value_json(result.diagnostics->tol)},
                                  {"tail_fraction", result.diagnostics->tail_fraction},
                                  {"series", std::move(series)}};
    }
    json eps = json::array();
    for (const auto& e : result.eps_series)
        eps.push_back(series_json(e));
    out["eps_series"] = std::move(eps);
    return out;
}

template <class P, class Name>
json outcome_json(const picard::Outcome<P>& outcome, Name&& name)
{
    if (const auto* fp = std::get_if<picard::FixedPoint<P>>(&outcome))
        return json{{"kind", "fixed-point"}, {"z", name(fp->z)}, {"at", fp->at}};
    if (const auto* c = std::get_if<picard::Cycle>(&outcome))
        return json{{"kind", "cycle"}, {"entry", c->entry}, {"period", c->period}};
    return json{{"kind", "budget-exhausted"}};
}

}  // namespace

json to_json(const picard::OrbitResult<FiniteGSpace>& result)
{
    const auto& space = result.trace.space();
    return orbit_json(result, outcome_json(result.outcome, [&](PointIndex p) { return space.name(p); }));
}

json to_json(const picard::OrbitResult<IntervalSpace>& result)
{
    auto out = orbit_json(result, outcome_json(result.outcome, [](double z) { return z; }));
    if (result.is_fixed_point())
        out["outcome"]["proxy"] = true;
    return out;
}

}  // namespace gfix::io
