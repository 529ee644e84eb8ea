// gfix: exact tools for generalized metric spaces and fixed-point certificates.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gfix/contract.hpp"
#include "gfix/gspace.hpp"
#include "gfix/harness.hpp"
#include "gfix/io.hpp"
#include "gfix/picard.hpp"
#include "gfix/realdsl.hpp"
#include "gfix/seqlab.hpp"

namespace fs = std::filesystem;
using namespace gfix;
using io::json;

namespace {

enum Exit : int {
    kOk = 0,
    kInputError = 1,
    kViolation = 2,
    kCycle = 3,
    kBudgetExhausted = 4,
    kCounterexamples = 5,
};

struct Globals {
    std::uint64_t seed = 42;
    std::string output;
    std::string format = "text";
    bool machine() const { return format == "machine"; }
};

void emit(const Globals& g, const json& doc, const std::string& text)
{
    const std::string body = g.machine() ? doc.dump(2) + "\n" : text;
    if (g.output.empty())
        std::cout << body;
    else
        io::write_text_file(g.output, body);
}

std::string show(const Rational& v) { return v.to_string(); }

std::string show(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class V>
std::string show_series(const std::vector<V>& values, std::size_t limit = 12)
{
    std::string out = "[";
    for (std::size_t i = 0; i < values.size() && i < limit; ++i)
        out += (i ? ", " : "") + show(values[i]);
    if (values.size() > limit)
        out += ", ... (" + std::to_string(values.size()) + " values)";
    return out + "]";
}

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

std::shared_ptr<const gspace::FiniteGSpace> load_space_ptr(const std::string& path)
{
    return std::make_shared<const gspace::FiniteGSpace>(io::load_space(path));
}

std::string modulus_text(const contract::ModulusTable& t)
{
    std::ostringstream os;
    os << "    modulus (" << t.domain_note << ")\n";
    for (const auto& e : t.entries)
        os << "      eps >= " << e.eps << "  delta = " << (e.delta ? e.delta->to_string() : "inf") << "\n";
    return os.str();
}

std::string certificate_text(const contract::ContractionCertificate& c)
{
    std::string out = "  " + contract::certificate_name(c) + (c.witnessed ? "" : " [unwitnessed]") + "\n";
    if (const auto* cm = std::get_if<contract::CiricMatkowski>(&c.kind))
        out += modulus_text(cm->modulus);
    else if (const auto* p = std::get_if<contract::ProinovShift>(&c.kind))
        out += modulus_text(p->modulus);
    return out;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::string space;
    std::uint64_t sampled = 0;
    std::uint64_t threshold = gspace::kDefaultExhaustiveThreshold;
};

int run_validate(const Globals& g, const ValidateArgs& a)
{
    const auto space = io::load_space(a.space);
    const auto report = a.sampled ? gspace::validate_space(space, gspace::Sampled{a.sampled, g.seed})
                                  : gspace::validate_auto(space, g.seed, a.threshold);
    std::ostringstream os;
    os << (report.ok ? "valid" : "invalid") << ": " << space.size() << " points, nu=" << space.nu() << ", "
       << report.tuples_checked << " tuples checked ("
       << (std::holds_alternative<gspace::Sampled>(report.mode) ? "sampled" : "exhaustive") << ")\n";
    for (const auto& v : report.violations) {
        os << "  " << gspace::to_string(v.kind) << " (";
        for (std::size_t i = 0; i < v.tuple.size(); ++i)
            os << (i ? ", " : "") << (v.tuple[i] < space.size() ? space.name(v.tuple[i]) : std::to_string(v.tuple[i]));
        os << "): " << v.lhs << " vs " << v.rhs << "\n";
    }
    if (report.ok) {
        const auto m = gspace::is_metric(space);
        os << "  metric: " << (m.metric ? "yes" : "no");
        if (m.violating) {
            const auto [x, u, y] = *m.violating;
            os << " (d(" << space.name(x) << "," << space.name(y) << ") > d(" << space.name(x) << ","
               << space.name(u) << ") + d(" << space.name(u) << "," << space.name(y) << "))";
        }
        os << "\n";
    }
    emit(g, io::to_json(report, space), os.str());
    return report.ok ? kOk : kViolation;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
    std::string space;
    std::string map;
    std::vector<std::string> gammas;
    std::vector<unsigned> big_ns;
};

int run_classify(const Globals& g, const ClassifyArgs& a)
{
    const auto space = load_space_ptr(a.space);
    const auto any = io::map_from_json(io::read_json_file(a.map), space);
    const auto* map = std::get_if<contract::FiniteMap>(&any);
    if (!map)
        throw io::InputError("classify needs a table map: certificates exist only on finite spaces");

    contract::ClassifyConfig config;
    if (!a.gammas.empty()) {
        config.gammas.clear();
        for (const auto& s : a.gammas)
            config.gammas.push_back(contract::proinov_gauge(Rational::parse(s)).gamma);
    }
    if (!a.big_ns.empty())
        config.big_ns = a.big_ns;
    const auto result = contract::classify(*map, config);

    json certs = json::array();
    json refusals = json::array();
    std::ostringstream os;
    os << "certificates (" << result.certificates.size() << "):\n";
    for (const auto& c : result.certificates) {
        certs.push_back(io::to_json(c));
        os << certificate_text(c);
    }
    os << "refusals (" << result.refusals.size() << "):\n";
    for (const auto& [label, r] : result.refusals) {
        auto j = io::to_json(r, *space);
        j["check"] = label;
        refusals.push_back(std::move(j));
        os << "  " << label << ": " << r.reason << (r.undetermined ? " [undetermined]" : "") << "\n";
    }
    const auto fps = picard::fixed_points(*map);
    os << "fixed points:";
    json fixed = json::array();
    for (auto p : fps) {
        os << ' ' << space->name(p);
        fixed.push_back(space->name(p));
    }
    os << (fps.empty() ? " none\n" : "\n");
    emit(g, json{{"certificates", certs}, {"refusals", refusals}, {"fixed_points", fixed}}, os.str());
    return kOk;
}

// ---------------------------------------------------------------- iterate

struct IterateArgs {
    std::string space;
    std::string map;
    std::string from;
    std::size_t budget = 1000;
    double tol = 1e-9;
};

template <class P>
int outcome_code(const picard::Outcome<P>& o)
{
    if (std::holds_alternative<picard::FixedPoint<P>>(o))
        return kOk;
    return std::holds_alternative<picard::Cycle>(o) ? kCycle : kBudgetExhausted;
}

int run_iterate(const Globals& g, const IterateArgs& a)
{
    if (a.budget == 0)
        throw io::InputError("--budget must be at least 1");
    const auto map_doc = io::read_json_file(a.map);
    std::shared_ptr<const gspace::FiniteGSpace> space;
    if (map_doc.value("type", "") == "table") {
        if (a.space.empty())
            throw io::InputError("a table map needs --space");
        space = load_space_ptr(a.space);
    }
    const auto any = io::map_from_json(map_doc, space);

    if (const auto* fm = std::get_if<contract::FiniteMap>(&any)) {
        const auto x0 = space->find(a.from);
        if (!x0)
            throw io::InputError("--from '" + a.from + "' is not a point of the space");
        const auto r = picard::iterate(*fm, *x0, a.budget);
        std::ostringstream os;
        os << "orbit:";
        for (auto p : r.trace.entries())
            os << ' ' << space->name(p);
        os << "\noutcome: " << picard::describe(r.outcome, *space) << "\n";
        for (std::size_t i = 0; i < r.eps_series.size(); ++i)
            os << "eps_n = d(x_n, x_{n+" << i + 1 << "}): " << show_series(r.eps_series[i]) << "\n";
        emit(g, io::to_json(r), os.str());
        return outcome_code(r.outcome);
    }

    const auto& im = std::get<contract::IntervalMap>(any);
    double x0 = 0.0;
    try {
        std::size_t used = 0;
        x0 = std::stod(a.from, &used);
        if (used != a.from.size())
            throw std::invalid_argument(a.from);
    } catch (const std::exception&) {
        throw io::InputError("--from '" + a.from + "' is not a number");
    }
    if (!im.space().contains(x0))
        throw io::InputError("--from lies outside the map's domain");
    const auto r = picard::iterate(im, x0, a.budget, a.tol);
    std::ostringstream os;
    os << "map: " << im.expr().to_source() << " on [" << show(im.space().lo()) << ", " << show(im.space().hi())
       << "] (" << realdsl::SelfMapVerdict::label << ", " << im.verdict().points_checked << " points)\n";
    os << "iterates: " << r.trace.size() << ", last " << show(r.trace.entries().back()) << "\n";
    os << "outcome: " << picard::describe(r.outcome) << "\n";
    if (r.diagnostics)
        os << "steps: " << show_series(r.diagnostics->stride(1).values) << "\n";
    emit(g, io::to_json(r), os.str());
    return outcome_code(r.outcome);
}

// ---------------------------------------------------------------- analyze-trace

struct AnalyzeArgs {
    std::string trace;
    std::vector<unsigned> ks{1, 2, 3};
    std::string tol = "0";
    std::string epsilon;
    unsigned nu = 0;
    std::size_t count = 4;
};

template <class V>
V parse_value(const std::string& text);

template <>
Rational parse_value<Rational>(const std::string& text)
{
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument& e) {
        throw io::InputError(e.what());
    }
}

template <>
double parse_value<double>(const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::exception&) {
    }
    throw io::InputError("'" + text + "' is not a number");
}

template <class S>
int analyze(const Globals& g, const AnalyzeArgs& a, const Trace<S>& t)
{
    using V = typename S::value_type;
    json doc{{"length", t.size()}};
    std::ostringstream os;
    os << "trace of length " << t.size() << "\n";

    const auto distinct = seqlab::all_distinct(t);
    doc["all_distinct"] = distinct.distinct;
    os << "all distinct: " << (distinct.distinct ? "yes" : "no");
    if (distinct.collision) {
        doc["collision"] = json::array({distinct.collision->first, distinct.collision->second});
        os << " (entries " << distinct.collision->first << " and " << distinct.collision->second << ")";
    }
    os << "\n";

    json moduli = json::array();
    for (unsigned k : a.ks) {
        if (k == 0 || t.size() < k + 2)
            continue;
        const auto m = seqlab::cauchy_modulus(t, k);
        moduli.push_back(json{{"k", k}, {"values", series_json(m.values)}, {"attained_at", m.attained_at}});
        os << "modulus k=" << k << ": " << show_series(m.values) << "\n";
    }
    doc["moduli"] = std::move(moduli);

    if (t.size() >= 4) {
        const auto d = seqlab::step_diagnostics(t, parse_value<V>(a.tol));
        json series = json::array();
        for (const auto& s : d.series) {
            series.push_back(json{{"stride", s.stride}, {"tail_below_tol", s.tail_below_tol}, {"values", series_json(s.values)}});
            os << "steps m=" << s.stride << " (tail below tol: " << (s.tail_below_tol ? "yes" : "no")
               << "): " << show_series(s.values) << "\n";
        }
        doc["diagnostics"] = json{{"tol", value_json(d.tol)}, {"tail_fraction", d.tail_fraction}, {"series", series}};
    }

    if (!a.epsilon.empty()) {
        const unsigned nu = a.nu ? a.nu : t.space().nu();
        const auto w = seqlab::extract_anti_cauchy_witnesses(t, parse_value<V>(a.epsilon), nu, a.count);
        json pairs = json::array();
        os << "witnesses at eps=" << a.epsilon << ", nu=" << nu << ": " << seqlab::to_string(w.status);
        if (!w.reason.empty())
            os << " (" << w.reason << ")";
        if (w.truncated)
            os << " [truncated]";
        os << "\n";
        for (const auto& p : w.pairs) {
            pairs.push_back(json{{"i", p.i},
                                 {"k", p.k},
                                 {"n", p.n},
                                 {"m", p.m},
                                 {"p", p.p},
                                 {"q", p.q},
                                 {"over", value_json(p.over)},
                                 {"under", value_json(p.under)},
                                 {"chain_lhs", value_json(p.chain_lhs)},
                                 {"chain_bound", value_json(p.chain_bound)},
                                 {"chain_checked", p.chain_checked},
                                 {"chain_holds", p.chain_holds}});
            os << "  i=" << p.i << " k=" << p.k << " n=" << p.n << " m=" << p.m << " (p,q)=(" << p.p << "," << p.q
               << ") over=" << show(p.over) << " under=" << show(p.under) << " chain " << show(p.chain_lhs)
               << " <= " << show(p.chain_bound)
               << (p.chain_checked ? (p.chain_holds ? " ok" : " FAILS") : " (skipped: chain points collide)") << "\n";
        }
        doc["witnesses"] = json{{"epsilon", value_json(w.epsilon)},
                                {"nu", w.nu},
                                {"status", seqlab::to_string(w.status)},
                                {"reason", w.reason},
                                {"truncated", w.truncated},
                                {"pairs", pairs}};
    }
    emit(g, doc, os.str());
    return kOk;
}

int run_analyze(const Globals& g, const AnalyzeArgs& a)
{
    const fs::path path(a.trace);
    const auto any = io::trace_from_json(io::read_json_file(path), path.parent_path());
    return std::visit([&](const auto& t) { return analyze(g, a, t); }, any);
}

// ---------------------------------------------------------------- parse

struct ParseArgs {
    std::string expr;
    std::vector<double> check;
    std::size_t grid = realdsl::kDefaultCheckGrid;
};

int run_parse(const Globals& g, const ParseArgs& a)
{
    realdsl::MapExpr e = [&] {
        try {
            return realdsl::parse_map_expr(a.expr);
        } catch (const realdsl::ParseError& err) {
            std::string msg = std::string(err.what()) + "\n  " + a.expr + "\n  " + std::string(err.offset(), ' ') + "^";
            if (!err.expected().empty()) {
                msg += "\n  expected:";
                for (const auto& t : err.expected())
                    msg += " " + t;
            }
            throw io::InputError(msg);
        }
    }();
    json doc{{"tree", e.to_tree()}, {"source", e.to_source()}};
    std::ostringstream os;
    os << "tree:   " << e.to_tree() << "\nsource: " << e.to_source() << "\n";
    int code = kOk;
    if (!a.check.empty()) {
        if (a.check.size() != 2)
            throw io::InputError("--check takes lo and hi");
        realdsl::SelfMapVerdict v;
        try {
            v = realdsl::check_self_map(e, a.check[0], a.check[1], a.grid);
        } catch (const realdsl::EvalError& err) {
            throw io::InputError(err.what());
        } catch (const std::invalid_argument& err) {
            throw io::InputError(err.what());
        }
        doc["check"] = json{{"lo", a.check[0]},
                            {"hi", a.check[1]},
                            {"in_range", v.in_range},
                            {"points_checked", v.points_checked},
                            {"worst_x", v.worst_x},
                            {"worst_value", v.worst_value},
                            {"worst_excursion", v.worst_excursion},
                            {"label", realdsl::SelfMapVerdict::label}};
        os << "self-map on [" << show(a.check[0]) << ", " << show(a.check[1]) << "]: "
           << (v.in_range ? "in range" : "out of range") << " (" << realdsl::SelfMapVerdict::label << ", "
           << v.points_checked << " points; worst x=" << show(v.worst_x) << " value=" << show(v.worst_value)
           << " excursion=" << show(v.worst_excursion) << ")\n";
        code = v.in_range ? kOk : kViolation;
    }
    emit(g, doc, os.str());
    return code;
}

// ---------------------------------------------------------------- hunt

struct HuntArgs {
    std::string theorem = "cm-fixed-point";
    std::vector<unsigned> nus{1, 2};
    std::vector<std::size_t> sizes{3, 4, 5, 6};
    std::uint64_t instances = 500;
    std::vector<std::string> gammas;
    std::vector<unsigned> big_ns;
    std::string map_mode = "sink-biased";
    std::string sink_probability = "1/2";
    unsigned threads = 1;
    bool invert = false;
    bool no_shrink = false;
    std::string dump_dir;
};

int run_hunt(const Globals& g, const HuntArgs& a)
{
    harness::HuntConfig c;
    const auto theorem = harness::parse_theorem(a.theorem);
    if (!theorem)
        throw io::InputError("unknown theorem '" + a.theorem + "'");
    const auto mode = harness::parse_map_mode(a.map_mode);
    if (!mode)
        throw io::InputError("unknown map mode '" + a.map_mode + "'");
    c.theorem = *theorem;
    c.map_mode = *mode;
    c.nus = a.nus;
    c.sizes = a.sizes;
    c.instances = a.instances;
    c.seed = g.seed;
    c.threads = a.threads;
    c.invert_assertion = a.invert;
    c.shrink = !a.no_shrink;
    c.sink_probability = parse_value<Rational>(a.sink_probability);
    if (!a.gammas.empty()) {
        c.gamma_grid.clear();
        for (const auto& s : a.gammas)
            c.gamma_grid.push_back(parse_value<Rational>(s));
    }
    if (!a.big_ns.empty())
        c.big_n_grid = a.big_ns;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw io::InputError(e.what());
    }

    const auto report = harness::run_hunt(c);
    const auto format = g.machine() ? harness::Format::Machine : harness::Format::Text;
    const auto body = harness::render_report(report, format);
    if (g.output.empty())
        std::cout << body;
    else
        io::write_text_file(g.output, body);

    if (!a.dump_dir.empty() && !report.counterexamples.empty()) {
        fs::create_directories(a.dump_dir);
        for (const auto& cx : report.counterexamples) {
            const std::string stem = "counterexample_" + std::to_string(cx.instance);
            io::write_text_file(fs::path(a.dump_dir) / (stem + "_space.json"), io::to_json(cx.space).dump(2) + "\n");
            io::write_text_file(fs::path(a.dump_dir) / (stem + "_map.json"), io::to_json(cx.map()).dump(2) + "\n");
        }
    }
    return report.counterexamples.empty() ? kOk : kCounterexamples;
}

// ---------------------------------------------------------------- demo

int run_demo(const Globals& g)
{
    std::ostringstream os;
    json doc;

    // d(a,b)=1, d(a,c)=d(b,c)=2 with a->a, b->a, c->b
    const auto space = std::make_shared<const gspace::FiniteGSpace>(
        1, std::vector<std::string>{"a", "b", "c"},
        gspace::DistanceTable{{Rational(0), Rational(1), Rational(2)},
                              {Rational(1), Rational(0), Rational(2)},
                              {Rational(2), Rational(2), Rational(0)}});
    const contract::FiniteMap map(space, {0, 0, 1});
    const auto cls = contract::classify(map);
    os << "== three-point space: a->a, b->a, c->b\n";
    os << "valid: " << (gspace::validate_space(*space).ok ? "yes" : "no") << "\n";
    json certs = json::array();
    for (const auto& c : cls.certificates) {
        os << certificate_text(c);
        certs.push_back(io::to_json(c));
    }
    const auto orbit = picard::iterate(map, 2, 10);
    os << "orbit from c: ";
    for (auto p : orbit.trace.entries())
        os << space->name(p) << ' ';
    os << "-> " << picard::describe(orbit.outcome, *space) << "\n\n";
    doc["three_point"] = json{{"space", io::to_json(*space)},
                              {"map", io::to_json(map)},
                              {"certificates", certs},
                              {"orbit", io::to_json(orbit)}};

    const auto interval = std::make_shared<const gspace::IntervalSpace>(0.0, 2.0);
    const contract::IntervalMap rational_map(interval, realdsl::parse_map_expr("x/(1+x)"));
    const auto ro = picard::iterate(rational_map, 1.0, 1000, 1e-3);
    os << "== x/(1+x) on [0, 2] from 1, tol 1e-3\n";
    os << "outcome: " << picard::describe(ro.outcome) << "\n";
    os << "x_n = 1/(n+1): x_10 = " << show(ro.trace[10]) << "\n\n";
    doc["rational_map"] = io::to_json(ro);

    std::vector<double> xs;
    double h = 0.0;
    for (int j = 1; j <= 64; ++j)
        xs.push_back(h += 1.0 / j);
    const Trace<gspace::IntervalSpace> harmonic(std::make_shared<const gspace::IntervalSpace>(0.0, 8.0), xs);
    const auto w = seqlab::extract_anti_cauchy_witnesses(harmonic, 1.0, 1, 2);
    os << "== harmonic partial sums, 64 terms, eps=1, nu=1\n";
    os << "status: " << seqlab::to_string(w.status) << "\n";
    json pairs = json::array();
    for (const auto& p : w.pairs) {
        os << "  (p,q)=(" << p.p << "," << p.q << ") over=" << show(p.over) << " under=" << show(p.under)
           << " chain " << show(p.chain_lhs) << " <= " << show(p.chain_bound) << "\n";
        pairs.push_back(json{{"p", p.p}, {"q", p.q}, {"over", p.over}, {"under", p.under}});
    }
    doc["harmonic"] = json{{"status", seqlab::to_string(w.status)}, {"pairs", pairs}};

    emit(g, doc, os.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact tools for nu-generalized metric spaces and fixed-point certificates"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "master seed for sampling and hunts");
    app.add_option("--output", g.output, "write the result document here instead of stdout");
    app.add_option("--format", g.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    app.fallthrough();

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "check the generalized metric axioms of a space file");
    validate->add_option("space", va.space, "space file")->required();
    validate->add_option("--sampled", va.sampled, "check this many seeded random tuples instead");
    validate->add_option("--threshold", va.threshold, "largest tuple count checked exhaustively");

    ClassifyArgs ca;
    auto* classify = app.add_subcommand("classify", "compute contraction certificates for a table map");
    classify->add_option("--space", ca.space, "space file")->required();
    classify->add_option("--map", ca.map, "map file")->required();
    classify->add_option("--gamma", ca.gammas, "Proinov gamma grid")->delimiter(',');
    classify->add_option("--big-n", ca.big_ns, "Proinov shift grid")->delimiter(',');

    IterateArgs ia;
    auto* iterate = app.add_subcommand("iterate", "run Picard iteration");
    iterate->add_option("--space", ia.space, "space file (table maps)");
    iterate->add_option("--map", ia.map, "map file")->required();
    iterate->add_option("--from", ia.from, "start point")->required();
    iterate->add_option("--budget", ia.budget, "maximum number of map applications");
    iterate->add_option("--tol", ia.tol, "step tolerance on intervals");

    AnalyzeArgs aa;
    auto* analyze_cmd = app.add_subcommand("analyze-trace", "moduli, step series and anti-Cauchy witnesses");
    analyze_cmd->add_option("trace", aa.trace, "trace file")->required();
    analyze_cmd->add_option("--k", aa.ks, "strides for the Cauchy modulus")->delimiter(',');
    analyze_cmd->add_option("--tol", aa.tol, "tolerance for the step tail flags");
    analyze_cmd->add_option("--epsilon", aa.epsilon, "extract witnesses at this level");
    analyze_cmd->add_option("--nu", aa.nu, "stride for witness extraction (default: the space's nu)");
    analyze_cmd->add_option("--count", aa.count, "number of witness pairs");

    ParseArgs pa;
    auto* parse = app.add_subcommand("parse", "parse a map expression");
    parse->add_option("--expr", pa.expr, "expression in x")->required();
    parse->add_option("--check", pa.check, "grid-check that the map sends [lo, hi] into itself")->expected(2);
    parse->add_option("--grid", pa.grid, "grid points for --check");

    HuntArgs ha;
    auto* hunt = app.add_subcommand("hunt", "search random instances for counterexamples");
    hunt->add_option("--theorem", ha.theorem, "cm-fixed-point, proinov, nu-cauchy-bridge, step-lemma, distance-continuity");
    hunt->add_option("--nus", ha.nus, "polygon orders")->delimiter(',');
    hunt->add_option("--sizes", ha.sizes, "point counts")->delimiter(',');
    hunt->add_option("--instances", ha.instances, "number of instances");
    hunt->add_option("--gamma", ha.gammas, "Proinov gamma grid")->delimiter(',');
    hunt->add_option("--big-n", ha.big_ns, "Proinov shift grid")->delimiter(',');
    hunt->add_option("--map-mode", ha.map_mode, "uniform or sink-biased");
    hunt->add_option("--sink-probability", ha.sink_probability, "sink probability for sink-biased maps");
    hunt->add_option("--threads", ha.threads, "worker threads");
    hunt->add_flag("--invert", ha.invert, "report instances where the conclusion holds");
    hunt->add_flag("--no-shrink", ha.no_shrink, "keep counterexamples at full size");
    hunt->add_option("--dump-dir", ha.dump_dir, "write counterexample space and map files here");

    auto* demo = app.add_subcommand("demo", "run the worked examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInputError;
    }

    try {
        if (*validate)
            return run_validate(g, va);
        if (*classify)
            return run_classify(g, ca);
        if (*iterate)
            return run_iterate(g, ia);
        if (*analyze_cmd)
            return run_analyze(g, aa);
        if (*parse)
            return run_parse(g, pa);
        if (*hunt)
            return run_hunt(g, ha);
        if (*demo)
            return run_demo(g);
    } catch (const io::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
