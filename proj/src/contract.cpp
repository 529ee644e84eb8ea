#include "gfix/contract.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gfix::contract {

FiniteMap::FiniteMap(std::shared_ptr<const FiniteGSpace> space, std::vector<PointIndex> image)
    : space_(std::move(space)), image_(std::move(image))
{
    if (!space_)
        throw std::invalid_argument("self-map requires a space");
    if (image_.size() != space_->size())
        throw std::invalid_argument("self-map must assign an image to every point");
    for (PointIndex y : image_)
        if (y >= space_->size())
            throw std::invalid_argument("self-map image lies outside the space");
}

PointIndex FiniteMap::power(PointIndex x, std::size_t n) const
{
    for (std::size_t i = 0; i < n; ++i)
        x = image_.at(x);
    return x;
}

bool FiniteMap::preserves(std::span<const PointIndex> keep) const
{
    const std::set<PointIndex> members(keep.begin(), keep.end());
    return std::all_of(keep.begin(), keep.end(), [&](PointIndex x) { return members.contains(image_.at(x)); });
}

FiniteMap FiniteMap::restrict_to(std::span<const PointIndex> keep) const
{
    if (!preserves(keep))
        throw std::invalid_argument("restriction target is not invariant under the map");
    std::vector<PointIndex> image;
    for (PointIndex x : keep) {
        const auto it = std::find(keep.begin(), keep.end(), image_.at(x));
        image.push_back(static_cast<PointIndex>(it - keep.begin()));
    }
    return FiniteMap(std::make_shared<const FiniteGSpace>(space_->subspace(keep)), std::move(image));
}

IntervalMap::IntervalMap(std::shared_ptr<const IntervalSpace> space, realdsl::MapExpr expr, std::size_t grid)
    : space_(std::move(space)), expr_(std::move(expr))
{
    if (!space_)
        throw std::invalid_argument("self-map requires a space");
    verdict_ = realdsl::check_self_map(expr_, space_->lo(), space_->hi(), grid);
    if (!verdict_.in_range)
        throw std::invalid_argument("expression leaves the interval at x = " + std::to_string(verdict_.worst_x) +
                                    " (value " + std::to_string(verdict_.worst_value) + ")");
}

ProinovGauge proinov_gauge(Rational gamma)
{
    if (!gamma.is_positive())
        throw std::invalid_argument("Proinov gauge requires gamma > 0");
    return ProinovGauge{std::move(gamma)};
}

std::string to_string(const GaugeKind& kind)
{
    if (std::holds_alternative<PlainDistance>(kind))
        return "plain";
    if (std::holds_alternative<CiricMax>(kind))
        return "ciric-max";
    return "proinov(gamma=" + std::get<ProinovGauge>(kind).gamma.to_string() + ")";
}

Rational gauge_value(const GaugeKind& kind, const FiniteMap& map, PointIndex x, PointIndex y)
{
    const auto& s = map.space();
    const PointIndex tx = map(x);
    const PointIndex ty = map(y);
    if (std::holds_alternative<PlainDistance>(kind))
        return s.distance(x, y);
    if (std::holds_alternative<CiricMax>(kind))
        return std::max({s.distance(x, y), s.distance(x, tx), s.distance(y, ty), s.distance(x, ty),
                         s.distance(y, tx)});
    const auto& gamma = std::get<ProinovGauge>(kind).gamma;
    if (!gamma.is_positive())
        throw std::invalid_argument("Proinov gauge requires gamma > 0");
    return s.distance(x, y) + gamma * (s.distance(x, tx) + s.distance(y, ty));
}

std::optional<Rational> ModulusTable::delta_at(const Rational& eps) const
{
    if (entries.empty())
        throw std::logic_error("empty modulus table");
    const ModulusEntry* bucket = &entries.front();
    for (const auto& e : entries)
        if (e.eps <= eps)
            bucket = &e;
    if (!bucket->delta)
        return std::nullopt;
    return bucket->eps + *bucket->delta - eps;
}

std::string certificate_name(const ContractionCertificate& c)
{
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Banach>)
                return "Banach(r=" + k.r.to_string() + ")";
            else if constexpr (std::is_same_v<K, CiricQuasi>)
                return "CiricQuasi(r=" + k.r.to_string() + ")";
            else if constexpr (std::is_same_v<K, CiricMatkowski>)
                return "CiricMatkowski";
            else
                return "ProinovShift(gamma=" + k.gamma.to_string() + ", N=" + std::to_string(k.big_n) + ")";
        },
        c.kind);
}

ShrinkCheck strict_shrink_check(const FiniteMap& map, const GaugeKind& kind)
{
    const auto& s = map.space();
    ShrinkCheck out;
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = x + 1; y < s.size(); ++y) {
            if (s.distance(map(x), map(y)) < gauge_value(kind, map, x, y))
                continue;
            if (!out.violating || s.distance(x, y) < s.distance(out.violating->first, out.violating->second))
                out.violating = PointPair{x, y};
            out.holds = false;
        }
    return out;
}

namespace {

/// premise(pair) < delta + eps  =>  conclusion(pair) <= eps
struct Implication {
    PointPair pair;
    Rational premise;
    Rational conclusion;
};

/// The set {pairs : conclusion > eps} only changes when eps crosses a
/// conclusion value, so gap(eps) = min premise over that set is a step
/// function. With levels v_1 < ... < v_K (positive conclusion values) and
/// v_0 = 0, bucket j is [v_j, v_{j+1}) and its gap g_j is the min premise over
/// pairs with conclusion >= v_{j+1}. A delta > 0 exists for every eps in the
/// bucket iff g_j > eps there, i.e. iff g_j >= v_{j+1}. The last bucket has no
/// such pairs and any delta works.
std::variant<ModulusTable, Refusal> decide_buckets(std::vector<Implication> items, std::string note)
{
    std::vector<Rational> levels;
    for (const auto& it : items)
        if (it.conclusion.is_positive())
            levels.push_back(it.conclusion);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::sort(items.begin(), items.end(),
              [](const Implication& a, const Implication& b) { return a.conclusion > b.conclusion; });

    const std::size_t buckets = levels.size();
    std::vector<std::optional<Rational>> gap(buckets + 1);
    std::vector<std::optional<PointPair>> gap_pair(buckets + 1);
    std::optional<Rational> running;
    std::optional<PointPair> running_pair;
    std::size_t cursor = 0;
    for (std::size_t j = buckets; j-- > 0;) {
        const Rational& next_level = levels[j];  // v_{j+1}
        while (cursor < items.size() && items[cursor].conclusion >= next_level) {
            if (!running || items[cursor].premise < *running) {
                running = items[cursor].premise;
                running_pair = items[cursor].pair;
            }
            ++cursor;
        }
        gap[j] = running;
        gap_pair[j] = running_pair;
    }

    ModulusTable table;
    table.domain_note = std::move(note);
    for (std::size_t j = 0; j <= buckets; ++j) {
        const Rational left = j == 0 ? Rational{0} : levels[j - 1];
        if (j == buckets) {
            table.entries.push_back({left, std::nullopt});
            break;
        }
        const Rational& g = *gap[j];
        if (g < levels[j]) {
            Refusal r;
            r.epsilon = std::max(left, g);
            r.pair = gap_pair[j];
            r.reason = "no delta > 0 exists for eps = " + r.epsilon->to_string() + ": premise value " +
                       g.to_string() + " does not exceed eps while the conclusion is at least " +
                       levels[j].to_string();
            return r;
        }
        table.entries.push_back({left, g - left});
    }
    return table;
}

std::string pair_text(const FiniteGSpace& s, const PointPair& p)
{
    return "(" + s.name(p.first) + ", " + s.name(p.second) + ")";
}

}  // namespace

CertificateOrRefusal cm_modulus(const FiniteMap& map)
{
    const auto& s = map.space();
    if (const auto shrink = strict_shrink_check(map, PlainDistance{}); !shrink.holds) {
        Refusal r;
        r.pair = shrink.violating;
        r.reason = "strict shrink fails: d(Tx,Ty) >= d(x,y) at " + pair_text(s, *shrink.violating);
        return r;
    }
    std::vector<Implication> items;
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = x + 1; y < s.size(); ++y)
            items.push_back({{x, y}, s.distance(x, y), s.distance(map(x), map(y))});

    auto decided = decide_buckets(std::move(items),
                                  "entry j certifies eps in [eps_j, eps_{j+1}) (first bucket open at 0) "
                                  "with delta(eps) = eps_j + delta_j - eps");
    if (auto* refusal = std::get_if<Refusal>(&decided)) {
        if (refusal->pair)
            refusal->reason += " at " + pair_text(s, *refusal->pair);
        return *refusal;
    }
    return ContractionCertificate{CiricMatkowski{std::get<ModulusTable>(std::move(decided))}, true};
}

RatioResult banach_ratio(const FiniteMap& map, const GaugeKind& kind)
{
    const auto& s = map.space();
    RatioResult out;
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = x + 1; y < s.size(); ++y) {
            const Rational g = gauge_value(kind, map, x, y);
            if (!g.is_positive())
                throw std::invalid_argument("gauge vanishes at distinct points " + pair_text(s, {x, y}));
            const Rational ratio = s.distance(map(x), map(y)) / g;
            if (!out.attained_at || ratio > out.r) {
                out.r = ratio;
                out.attained_at = PointPair{x, y};
            }
        }
    if (out.r < Rational{1}) {
        if (std::holds_alternative<PlainDistance>(kind))
            out.certificate = ContractionCertificate{Banach{out.r}, true};
        else if (std::holds_alternative<CiricMax>(kind))
            out.certificate = ContractionCertificate{CiricQuasi{out.r}, true};
    }
    return out;
}

CertificateOrRefusal proinov_shift_check(const FiniteMap& map, const Rational& gamma, unsigned big_n)
{
    const auto gauge = proinov_gauge(gamma);
    const auto& s = map.space();
    std::vector<Implication> items;
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = x + 1; y < s.size(); ++y) {
            const PointIndex a = map.power(x, big_n);
            const PointIndex b = map.power(y, big_n);
            if (a == b)
                continue;
            items.push_back({{x, y}, gauge_value(gauge, map, a, b), s.distance(map(a), map(b))});
        }

    auto decided = decide_buckets(std::move(items),
                                  "premise m(T^N x, T^N y), conclusion d(T^{N+1} x, T^{N+1} y); entry j "
                                  "certifies eps in [eps_j, eps_{j+1}) with delta(eps) = eps_j + delta_j - eps");
    if (auto* refusal = std::get_if<Refusal>(&decided)) {
        if (refusal->pair)
            refusal->reason += " at " + pair_text(s, *refusal->pair) + " with N = " + std::to_string(big_n);
        return *refusal;
    }
    const bool shrink = strict_shrink_check(map, gauge).holds;
    return ContractionCertificate{ProinovShift{gamma, big_n, std::get<ModulusTable>(std::move(decided))}, shrink};
}

std::vector<Rational> default_gamma_grid() { return {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)}; }

CertificateOrRefusal proinov_search(const FiniteMap& map, const Rational& gamma,
                                    const std::vector<unsigned>& big_n_grid)
{
    std::optional<Refusal> last;
    for (unsigned n : big_n_grid) {
        auto result = proinov_shift_check(map, gamma, n);
        if (std::holds_alternative<ContractionCertificate>(result))
            return result;
        last = std::get<Refusal>(std::move(result));
    }
    Refusal r;
    r.undetermined = true;
    r.reason = "no N in the search grid satisfies the shift condition for gamma = " + gamma.to_string();
    if (last) {
        r.pair = last->pair;
        r.epsilon = last->epsilon;
        r.reason += " (last: " + last->reason + ")";
    }
    return r;
}

std::vector<RegularityVerdict> asymptotic_regularity_check(const FiniteMap& map, std::size_t budget)
{
    std::vector<RegularityVerdict> out;
    for (PointIndex start = 0; start < map.space().size(); ++start) {
        RegularityVerdict v;
        v.start = start;
        PointIndex cur = start;
        for (std::size_t n = 0; n < budget; ++n) {
            const PointIndex next = map(cur);
            if (next == cur) {
                v.regular = true;
                v.from = n;
                break;
            }
            cur = next;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<IntervalRegularityVerdict> asymptotic_regularity_check(const IntervalMap& map,
                                                                   const std::vector<double>& starts,
                                                                   std::size_t budget, double tol)
{
    std::vector<IntervalRegularityVerdict> out;
    for (double start : starts) {
        IntervalRegularityVerdict v;
        v.start = start;
        std::vector<double> orbit{start};
        for (std::size_t i = 0; i < budget; ++i)
            orbit.push_back(map(orbit.back()));
        if (budget >= 2) {
            std::optional<std::size_t> from;
            for (std::size_t n = budget - 1; n-- > 0;) {
                const double sum = std::abs(orbit[n] - orbit[n + 1]) + std::abs(orbit[n] - orbit[n + 2]);
                if (sum > tol)
                    break;
                from = n;
            }
            v.regular = from.has_value();
            v.from = from;
        }
        out.push_back(v);
    }
    return out;
}

Classification classify(const FiniteMap& map, const ClassifyConfig& config)
{
    Classification out;
    const auto& s = map.space();

    for (const GaugeKind& kind : {GaugeKind{PlainDistance{}}, GaugeKind{CiricMax{}}}) {
        const auto ratio = banach_ratio(map, kind);
        const std::string label = std::holds_alternative<PlainDistance>(kind) ? "banach" : "ciric-quasi";
        if (ratio.certificate) {
            out.certificates.push_back(*ratio.certificate);
        } else {
            Refusal r;
            r.pair = ratio.attained_at;
            r.reason = "ratio r = " + ratio.r.to_string() + " is not below 1";
            if (ratio.attained_at)
                r.reason += " at " + pair_text(s, *ratio.attained_at);
            out.refusals.emplace_back(label, std::move(r));
        }
    }

    auto cm = cm_modulus(map);
    if (auto* c = std::get_if<ContractionCertificate>(&cm))
        out.certificates.push_back(std::move(*c));
    else
        out.refusals.emplace_back("ciric-matkowski", std::get<Refusal>(std::move(cm)));

    for (const auto& gamma : config.gammas) {
        const std::string label = "proinov-shift(gamma=" + gamma.to_string() + ")";
        auto found = proinov_search(map, gamma, config.big_ns);
        if (auto* c = std::get_if<ContractionCertificate>(&found)) {
            if (c->witnessed) {
                out.certificates.push_back(std::move(*c));
                continue;
            }
            const auto shrink = strict_shrink_check(map, ProinovGauge{gamma});
            Refusal r;
            r.pair = shrink.violating;
            r.reason = "shift condition holds with N = " + std::to_string(std::get<ProinovShift>(c->kind).big_n) +
                       " but d(Tx,Ty) < m(x,y) fails at " + pair_text(s, *shrink.violating);
            out.refusals.emplace_back(label, std::move(r));
        } else {
            out.refusals.emplace_back(label, std::get<Refusal>(std::move(found)));
        }
    }
    return out;
}

}  // namespace gfix::contract
