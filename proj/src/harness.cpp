#include "gfix/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include "gfix/io.hpp"
#include "gfix/picard.hpp"
#include "gfix/rng.hpp"
#include "gfix/seqlab.hpp"

namespace gfix::harness {

using contract::ContractionCertificate;
using gspace::FiniteGSpace;

std::string_view to_string(Theorem t)
{
    switch (t) {
    case Theorem::CmFixedPoint: return "cm-fixed-point";
    case Theorem::Proinov: return "proinov";
    case Theorem::NuCauchyBridge: return "nu-cauchy-bridge";
    case Theorem::StepLemma: return "step-lemma";
    case Theorem::DistanceContinuity: return "distance-continuity";
    }
    return "unknown";
}

std::optional<Theorem> parse_theorem(std::string_view text)
{
    for (auto t : {Theorem::CmFixedPoint, Theorem::Proinov, Theorem::NuCauchyBridge, Theorem::StepLemma,
                   Theorem::DistanceContinuity})
        if (to_string(t) == text)
            return t;
    return std::nullopt;
}

std::string_view to_string(MapMode m) { return m == MapMode::Uniform ? "uniform" : "sink-biased"; }

std::optional<MapMode> parse_map_mode(std::string_view text)
{
    if (text == "uniform")
        return MapMode::Uniform;
    if (text == "sink-biased" || text == "sink")
        return MapMode::SinkBiased;
    return std::nullopt;
}

void HuntConfig::validate() const
{
    if (instances < 1)
        throw std::invalid_argument("instances must be at least 1");
    if (nus.empty() || std::any_of(nus.begin(), nus.end(), [](unsigned v) { return v == 0; }))
        throw std::invalid_argument("nus must be a non-empty list of positive integers");
    if (sizes.empty() || std::any_of(sizes.begin(), sizes.end(), [](std::size_t v) { return v < 2; }))
        throw std::invalid_argument("sizes must be a non-empty list of integers >= 2");
    if (gamma_grid.empty() ||
        std::any_of(gamma_grid.begin(), gamma_grid.end(), [](const Rational& g) { return !g.is_positive(); }))
        throw std::invalid_argument("gamma grid must be a non-empty list of positive rationals");
    if (big_n_grid.empty())
        throw std::invalid_argument("N grid must not be empty");
    if (sink_probability.is_negative() || sink_probability > Rational{1})
        throw std::invalid_argument("sink probability must lie in [0, 1]");
}

FiniteMap Counterexample::map() const
{
    return FiniteMap(std::make_shared<const FiniteGSpace>(space), image);
}

namespace {

OrbitRecord record_of(const picard::OrbitResult<FiniteGSpace>& r)
{
    return OrbitRecord{r.trace[0], r.trace.entries(), picard::describe(r.outcome, r.trace.space())};
}

OrbitRecord record_of(const Trace<FiniteGSpace>& t, std::string note)
{
    return OrbitRecord{t[0], t.entries(), std::move(note)};
}

/// Long enough that every orbit on n points has settled for most of the trace.
std::size_t settled_length(std::size_t n) { return 4 * n + 8; }

struct Check {
    std::optional<std::string> failure;
    std::optional<OrbitRecord> orbit;
};

Check unique_fixed_point_reached(const FiniteMap& map)
{
    const auto& s = map.space();
    const auto fps = picard::fixed_points(map);
    if (fps.size() != 1)
        return {"expected exactly one fixed point, found " + std::to_string(fps.size()), std::nullopt};
    for (PointIndex x = 0; x < s.size(); ++x) {
        const auto r = picard::iterate(map, x, s.size() + 1);
        const auto* fp = std::get_if<picard::FixedPoint<PointIndex>>(&r.outcome);
        if (!fp)
            return {"orbit from " + s.name(x) + " does not reach a fixed point: " + picard::describe(r.outcome, s),
                    record_of(r)};
        if (fp->z != fps.front())
            return {"orbit from " + s.name(x) + " settles at " + s.name(fp->z) + " instead of " +
                        s.name(fps.front()),
                    record_of(r)};
    }
    return {};
}

Check cm_fixed_point_conclusion(const FiniteMap& map)
{
    if (auto c = unique_fixed_point_reached(map); c.failure)
        return c;
    const auto& s = map.space();
    for (PointIndex x = 0; x < s.size(); ++x) {
        const auto r = picard::iterate(map, x, s.size() + 1);
        if (std::holds_alternative<picard::CycleFound>(picard::orbit_dichotomy(r)))
            return {"orbit from " + s.name(x) + " cycles", record_of(r)};
        for (std::size_t i = 1; i <= 2; ++i)
            if (const auto n = seqlab::first_non_decrease(r.eps_series[i - 1]))
                return {"eps_n = d(x_n, x_{n+" + std::to_string(i) + "}) from " + s.name(x) +
                            " is not strictly decreasing at n = " + std::to_string(*n),
                        record_of(r)};
    }
    return {};
}

Check nu_cauchy_bridge_conclusion(const FiniteMap& map)
{
    const auto& s = map.space();
    const unsigned nu = s.nu();
    const Rational zero;
    for (PointIndex x = 0; x < s.size(); ++x) {
        const auto t = picard::orbit_prefix(map, x, settled_length(s.size()));
        const bool nu_cauchy = !(seqlab::tail_max(seqlab::cauchy_modulus(t, nu).values) > zero);
        const bool bridge = nu % 2 == 1 || seqlab::step_diagnostics(t, zero).stride(2).tail_below_tol;
        const bool cauchy = !(seqlab::tail_max(seqlab::cauchy_modulus(t, 1).values) > zero);
        if (nu_cauchy && bridge && !cauchy)
            return {"orbit from " + s.name(x) + " is nu-Cauchy with vanishing 2-steps but not Cauchy",
                    record_of(t, "prefix")};
    }
    return {};
}

Check step_lemma_conclusion(const FiniteMap& map)
{
    const auto& s = map.space();
    for (PointIndex x = 0; x < s.size(); ++x) {
        const auto t = picard::orbit_prefix(map, x, settled_length(s.size()));
        const auto diag = seqlab::step_diagnostics(t, Rational{0}, 5);
        if (!diag.stride(1).tail_below_tol)
            continue;
        for (unsigned m = 3; m <= 5; ++m)
            if (!diag.stride(m).tail_below_tol)
                return {"orbit from " + s.name(x) + ": steps vanish but d(x_n, x_{n+" + std::to_string(m) +
                            "}) does not",
                        record_of(t, "prefix")};
    }
    return {};
}

Check distance_continuity_conclusion(const FiniteMap& map)
{
    const auto& s = map.space();
    const auto fps = picard::fixed_points(map);
    if (fps.size() != 1)
        return {"expected exactly one fixed point, found " + std::to_string(fps.size()), std::nullopt};
    const PointIndex z = fps.front();
    for (PointIndex x = 0; x < s.size(); ++x) {
        const auto tx = picard::orbit_prefix(map, x, settled_length(s.size()));
        for (PointIndex y = x; y < s.size(); ++y) {
            const auto ty = picard::orbit_prefix(map, y, settled_length(s.size()));
            const auto check = seqlab::distance_continuity_check(tx, ty, z, z, Rational{0});
            if (check.verdict != seqlab::Continuity::Holds)
                return {"orbits from " + s.name(x) + " and " + s.name(y) + ": continuity " +
                            seqlab::to_string(check.verdict) + (check.reason.empty() ? "" : " (" + check.reason + ")"),
                        record_of(tx, "prefix")};
        }
    }
    return {};
}

}  // namespace

Evaluation evaluate(const HuntConfig& config, const FiniteMap& map)
{
    Evaluation ev;
    Check check;
    if (config.theorem == Theorem::Proinov) {
        for (const auto& gamma : config.gamma_grid) {
            auto found = contract::proinov_search(map, gamma, config.big_n_grid);
            if (auto* c = std::get_if<ContractionCertificate>(&found); c && c->witnessed) {
                ev.certificate = std::move(*c);
                break;
            }
        }
        if (!ev.certificate)
            return ev;
        const auto regular = contract::asymptotic_regularity_check(map, map.space().size() + 1);
        if (!std::all_of(regular.begin(), regular.end(), [](const auto& v) { return v.regular; }))
            return ev;
        ev.hypothesis = true;
        check = unique_fixed_point_reached(map);
    } else {
        auto cm = contract::cm_modulus(map);
        auto* c = std::get_if<ContractionCertificate>(&cm);
        if (!c)
            return ev;
        ev.certificate = std::move(*c);
        ev.hypothesis = true;
        switch (config.theorem) {
        case Theorem::CmFixedPoint: check = cm_fixed_point_conclusion(map); break;
        case Theorem::NuCauchyBridge: check = nu_cauchy_bridge_conclusion(map); break;
        case Theorem::StepLemma: check = step_lemma_conclusion(map); break;
        case Theorem::DistanceContinuity: check = distance_continuity_conclusion(map); break;
        case Theorem::Proinov: break;
        }
    }

    if (config.invert_assertion) {
        if (!check.failure)
            ev.failure = "inverted assertion: the conclusion held";
    } else {
        ev.failure = std::move(check.failure);
        ev.orbit = std::move(check.orbit);
    }
    return ev;
}

FiniteMap draw_map(std::shared_ptr<const FiniteGSpace> space, std::mt19937_64& rng, MapMode mode,
                   const Rational& sink_probability)
{
    const std::size_t n = space->size();
    constexpr std::uint64_t kScale = std::uint64_t{1} << 32;
    const auto threshold = static_cast<std::uint64_t>(std::llround(sink_probability.to_double() * kScale));
    const PointIndex sink = uniform_index(rng, 0, n - 1);
    std::vector<PointIndex> image(n);
    for (auto& y : image) {
        if (mode == MapMode::SinkBiased && coin(rng, threshold, kScale))
            y = sink;
        else
            y = uniform_index(rng, 0, n - 1);
    }
    return FiniteMap(std::move(space), std::move(image));
}

Instance make_instance(const HuntConfig& config, std::uint64_t index)
{
    auto rng = stream_rng(config.seed, index);
    Instance inst;
    inst.nu = config.nus[uniform_index(rng, 0, config.nus.size() - 1)];
    const std::size_t n = config.sizes[uniform_index(rng, 0, config.sizes.size() - 1)];
    inst.strategy = static_cast<gspace::Strategy>(uniform_index(rng, 0, 2));
    const std::uint64_t space_seed = rng();
    try {
        auto space = std::make_shared<const FiniteGSpace>(gspace::generate_space(inst.nu, n, space_seed, inst.strategy));
        inst.map = draw_map(std::move(space), rng, config.map_mode, config.sink_probability);
    } catch (const gspace::GenerationError&) {
        inst.map.reset();
    }
    return inst;
}

Counterexample shrink_counterexample(const HuntConfig& config, Counterexample cx)
{
    bool progress = true;
    while (progress && cx.space.size() > 1) {
        progress = false;
        const FiniteMap current = cx.map();
        for (PointIndex drop = 0; drop < cx.space.size(); ++drop) {
            std::vector<PointIndex> keep;
            for (PointIndex p = 0; p < cx.space.size(); ++p)
                if (p != drop)
                    keep.push_back(p);
            if (!current.preserves(keep))
                continue;
            const FiniteMap smaller = current.restrict_to(keep);
            if (!gspace::validate_space(smaller.space()).ok)
                continue;
            auto ev = evaluate(config, smaller);
            if (!ev.hypothesis || !ev.failure)
                continue;
            cx = Counterexample{cx.instance,         std::move(*ev.failure),      smaller.space(),
                                smaller.image(),     std::move(ev.certificate),   std::move(ev.orbit)};
            progress = true;
            break;
        }
    }
    return cx;
}

bool reproduces(const HuntConfig& config, const Counterexample& cx)
{
    if (!gspace::validate_space(cx.space).ok)
        return false;
    const auto ev = evaluate(config, cx.map());
    return ev.hypothesis && ev.failure.has_value();
}

namespace {

enum class Status { GenerationFailed, HypothesisFailed, Verified, Failed };

struct InstanceResult {
    Status status = Status::HypothesisFailed;
    std::optional<Counterexample> counterexample;
};

InstanceResult run_instance(const HuntConfig& config, std::uint64_t index)
{
    const auto inst = make_instance(config, index);
    if (!inst.map)
        return {Status::GenerationFailed, std::nullopt};
    auto ev = evaluate(config, *inst.map);
    if (!ev.hypothesis)
        return {Status::HypothesisFailed, std::nullopt};
    if (!ev.failure)
        return {Status::Verified, std::nullopt};
    Counterexample cx{index,
                      std::move(*ev.failure),
                      inst.map->space(),
                      inst.map->image(),
                      std::move(ev.certificate),
                      std::move(ev.orbit)};
    if (config.shrink)
        cx = shrink_counterexample(config, std::move(cx));
    return {Status::Failed, std::move(cx)};
}

}  // namespace

HuntReport run_hunt(const HuntConfig& config)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    std::vector<InstanceResult> results(config.instances);
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(config.threads == 0 ? 1 : config.threads, 1, config.instances));
    if (workers == 1) {
        for (std::uint64_t i = 0; i < config.instances; ++i)
            results[i] = run_instance(config, i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t i = w; i < config.instances; i += workers)
                    results[i] = run_instance(config, i);
            });
    }

    HuntReport report;
    report.config = config;
    for (auto& r : results) {
        ++report.attempted;
        switch (r.status) {
        case Status::GenerationFailed: ++report.generation_failures; break;
        case Status::HypothesisFailed: break;
        case Status::Verified:
            ++report.hypothesis_satisfied;
            ++report.conclusion_verified;
            break;
        case Status::Failed:
            ++report.hypothesis_satisfied;
            report.counterexamples.push_back(std::move(*r.counterexample));
            break;
        }
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

namespace {

using io::json;

json config_json(const HuntConfig& c)
{
    json gammas = json::array();
    for (const auto& g : c.gamma_grid)
        gammas.push_back(g.to_string());
    return json{{"theorem", std::string(to_string(c.theorem))},
                {"seed", c.seed},
                {"instances", c.instances},
                {"nus", c.nus},
                {"sizes", c.sizes},
                {"gamma_grid", std::move(gammas)},
                {"N_grid", c.big_n_grid},
                {"map_mode", std::string(to_string(c.map_mode))},
                {"sink_probability", c.sink_probability.to_string()},
                {"invert_assertion", c.invert_assertion},
                {"shrink", c.shrink}};
}

HuntConfig config_from_json(const json& j)
{
    HuntConfig c;
    const auto theorem = parse_theorem(j.at("theorem").get<std::string>());
    if (!theorem)
        throw io::InputError("unknown theorem in report");
    c.theorem = *theorem;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.instances = j.at("instances").get<std::uint64_t>();
    c.nus = j.at("nus").get<std::vector<unsigned>>();
    c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    c.gamma_grid.clear();
    for (const auto& g : j.at("gamma_grid"))
        c.gamma_grid.push_back(io::rational_from_json(g));
    c.big_n_grid = j.at("N_grid").get<std::vector<unsigned>>();
    const auto mode = parse_map_mode(j.at("map_mode").get<std::string>());
    if (!mode)
        throw io::InputError("unknown map mode in report");
    c.map_mode = *mode;
    c.sink_probability = io::rational_from_json(j.at("sink_probability"));
    c.invert_assertion = j.at("invert_assertion").get<bool>();
    c.shrink = j.at("shrink").get<bool>();
    return c;
}

json counterexample_json(const Counterexample& cx)
{
    const FiniteMap map = cx.map();
    json out{{"instance", cx.instance},
             {"failure", cx.failure},
             {"space", io::to_json(cx.space)},
             {"map", io::to_json(map)},
             {"certificate", cx.certificate ? io::to_json(*cx.certificate) : json(nullptr)},
             {"orbit", nullptr}};
    if (cx.orbit) {
        json entries = json::array();
        for (PointIndex p : cx.orbit->entries)
            entries.push_back(cx.space.name(p));
        out["orbit"] = json{{"start", cx.space.name(cx.orbit->start)},
                            {"entries", std::move(entries)},
                            {"outcome", cx.orbit->outcome}};
    }
    return out;
}

Counterexample counterexample_from_json(const json& j)
{
    auto space = io::space_from_json(j.at("space"));
    auto shared = std::make_shared<const FiniteGSpace>(space);
    auto map = std::get<FiniteMap>(io::map_from_json(j.at("map"), shared));
    Counterexample cx{j.at("instance").get<std::uint64_t>(), j.at("failure").get<std::string>(), std::move(space),
                      map.image(), std::nullopt, std::nullopt};
    if (!j.at("certificate").is_null())
        cx.certificate = io::certificate_from_json(j.at("certificate"));
    if (!j.at("orbit").is_null()) {
        const auto& o = j.at("orbit");
        OrbitRecord rec;
        auto lookup = [&](const json& id) {
            const auto p = cx.space.find(id.get<std::string>());
            if (!p)
                throw io::InputError("orbit entry is not a point of the space");
            return *p;
        };
        rec.start = lookup(o.at("start"));
        for (const auto& e : o.at("entries"))
            rec.entries.push_back(lookup(e));
        rec.outcome = o.at("outcome").get<std::string>();
        cx.orbit = std::move(rec);
    }
    return cx;
}

}  // namespace

std::string render_report(const HuntReport& report, Format format)
{
    if (format == Format::Machine) {
        json cxs = json::array();
        for (const auto& cx : report.counterexamples)
            cxs.push_back(counterexample_json(cx));
        json doc{{"config", config_json(report.config)},
                 {"attempted", report.attempted},
                 {"generation_failures", report.generation_failures},
                 {"hypothesis_satisfied", report.hypothesis_satisfied},
                 {"conclusion_verified", report.conclusion_verified},
                 {"counterexample_count", report.counterexamples.size()},
                 {"counterexamples", std::move(cxs)},
                 {"wall_time_seconds", report.wall_time_seconds}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream os;
    os << "hunt: theorem=" << to_string(report.config.theorem) << " seed=" << report.config.seed
       << " map-mode=" << to_string(report.config.map_mode)
       << (report.config.invert_assertion ? " (inverted assertion)" : "") << "\n";
    os << "  attempted             " << report.attempted << "\n";
    os << "  generation failures   " << report.generation_failures << "\n";
    os << "  hypothesis satisfied  " << report.hypothesis_satisfied << "\n";
    os << "  conclusion verified   " << report.conclusion_verified << "\n";
    os << "  counterexamples       " << report.counterexamples.size() << "\n";
    os << "  wall time             " << std::fixed << std::setprecision(3) << report.wall_time_seconds << " s\n";
    for (const auto& cx : report.counterexamples) {
        os << "counterexample (instance " << cx.instance << "): " << cx.failure << "\n";
        os << "  space: " << io::to_json(cx.space).dump() << "\n";
        os << "  map:   " << io::to_json(cx.map()).dump() << "\n";
        if (cx.certificate)
            os << "  certificate: " << contract::certificate_name(*cx.certificate) << "\n";
        if (cx.orbit) {
            os << "  orbit:";
            for (PointIndex p : cx.orbit->entries)
                os << ' ' << cx.space.name(p);
            os << "  [" << cx.orbit->outcome << "]\n";
        }
    }
    return os.str();
}

HuntReport parse_report(std::string_view machine)
{
    try {
        const auto doc = json::parse(machine);
        HuntReport r;
        r.config = config_from_json(doc.at("config"));
        r.attempted = doc.at("attempted").get<std::uint64_t>();
        r.generation_failures = doc.at("generation_failures").get<std::uint64_t>();
        r.hypothesis_satisfied = doc.at("hypothesis_satisfied").get<std::uint64_t>();
        r.conclusion_verified = doc.at("conclusion_verified").get<std::uint64_t>();
        for (const auto& cx : doc.at("counterexamples"))
            r.counterexamples.push_back(counterexample_from_json(cx));
        if (doc.at("counterexample_count").get<std::size_t>() != r.counterexamples.size())
            throw io::InputError("counterexample_count does not match the dump list");
        r.wall_time_seconds = doc.at("wall_time_seconds").get<double>();
        return r;
    } catch (const io::json::exception& e) {
        throw io::InputError(std::string("hunt report: ") + e.what());
    }
}

}  // namespace gfix::harness
