#include "gfix/picard.hpp"

#include <sstream>
#include <stdexcept>

namespace gfix::picard {

namespace {

template <DistanceSpace S>
void attach_diagnostics(OrbitResult<S>& result, std::size_t distinct_prefix, typename S::value_type tol)
{
    if (result.trace.size() >= 4)
        result.diagnostics = seqlab::step_diagnostics(result.trace, tol);
    for (std::size_t i = 1; i <= 2; ++i) {
        std::vector<typename S::value_type> series;
        for (std::size_t n = 0; n + i < distinct_prefix; ++n)
            series.push_back(result.trace.distance(n, n + i));
        result.eps_series.push_back(std::move(series));
    }
}

}  // namespace

OrbitResult<FiniteGSpace> iterate(const FiniteMap& map, PointIndex x0, std::size_t budget)
{
    if (x0 >= map.space().size())
        throw std::invalid_argument("start point is not in the space");
    if (budget == 0)
        throw std::invalid_argument("budget must be at least 1");

    std::vector<std::optional<std::size_t>> first_seen(map.space().size());
    std::vector<PointIndex> entries{x0};
    first_seen[x0] = 0;
    Outcome<PointIndex> outcome = BudgetExhausted{};
    for (std::size_t t = 1; t <= budget; ++t) {
        const PointIndex next = map(entries.back());
        entries.push_back(next);
        if (const auto seen = first_seen[next]) {
            if (*seen == t - 1)
                outcome = FixedPoint<PointIndex>{next, *seen};
            else
                outcome = Cycle{*seen, t - *seen};
            break;
        }
        first_seen[next] = t;
    }

    const bool repeated = !std::holds_alternative<BudgetExhausted>(outcome);
    const std::size_t distinct_prefix = repeated ? entries.size() - 1 : entries.size();
    OrbitResult<FiniteGSpace> result{Trace<FiniteGSpace>(map.space_ptr(), std::move(entries)), outcome, {}, {}};
    attach_diagnostics(result, distinct_prefix, Rational{0});
    return result;
}

OrbitResult<IntervalSpace> iterate(const IntervalMap& map, double x0, std::size_t budget, double tol)
{
    if (!map.space().contains(x0))
        throw std::invalid_argument("start point is not in the interval");
    if (budget == 0)
        throw std::invalid_argument("budget must be at least 1");

    constexpr std::size_t kConfirmation = 3;
    std::vector<double> entries{x0};
    Outcome<double> outcome = BudgetExhausted{};
    std::size_t run = 0;  // consecutive steps <= tol ending at the newest one
    for (std::size_t t = 1; t <= budget; ++t) {
        const double next = map(entries.back());
        if (!map.space().contains(next))
            throw std::domain_error("orbit left the interval at iterate " + std::to_string(t));
        const double step = map.space().distance(entries.back(), next);
        entries.push_back(next);
        run = step <= tol ? run + 1 : 0;
        if (run == kConfirmation + 1) {
            outcome = FixedPoint<double>{next, t - run};
            break;
        }
    }

    const auto distinct = seqlab::all_distinct(Trace<IntervalSpace>(map.space_ptr(), entries));
    const std::size_t distinct_prefix = distinct.distinct ? entries.size() : distinct.collision->second;
    OrbitResult<IntervalSpace> result{Trace<IntervalSpace>(map.space_ptr(), std::move(entries)), outcome, {}, {}};
    attach_diagnostics(result, distinct_prefix, tol);
    return result;
}

Dichotomy orbit_dichotomy(const OrbitResult<FiniteGSpace>& result)
{
    if (const auto* fp = std::get_if<FixedPoint<PointIndex>>(&result.outcome))
        return AllSameFrom{fp->at};
    if (const auto* c = std::get_if<Cycle>(&result.outcome))
        return CycleFound{c->entry, c->period};
    return AllDistinct{};
}

std::vector<PointIndex> fixed_points(const FiniteMap& map)
{
    std::vector<PointIndex> out;
    for (PointIndex x = 0; x < map.space().size(); ++x)
        if (map(x) == x)
            out.push_back(x);
    return out;
}

Trace<FiniteGSpace> orbit_prefix(const FiniteMap& map, PointIndex x0, std::size_t length)
{
    if (length == 0)
        throw std::invalid_argument("orbit prefix needs at least one entry");
    std::vector<PointIndex> entries{x0};
    while (entries.size() < length)
        entries.push_back(map(entries.back()));
    return Trace<FiniteGSpace>(map.space_ptr(), std::move(entries));
}

std::string describe(const Outcome<PointIndex>& outcome, const FiniteGSpace& space)
{
    std::ostringstream os;
    if (const auto* fp = std::get_if<FixedPoint<PointIndex>>(&outcome))
        os << "fixed-point z=" << space.name(fp->z) << " at=" << fp->at;
    else if (const auto* c = std::get_if<Cycle>(&outcome))
        os << "cycle entry=" << c->entry << " period=" << c->period;
    else
        os << "budget-exhausted";
    return os.str();
}

std::string describe(const Outcome<double>& outcome)
{
    std::ostringstream os;
    os.precision(17);
    if (const auto* fp = std::get_if<FixedPoint<double>>(&outcome))
        os << "fixed-point (proxy) z=" << fp->z << " at=" << fp->at;
    else if (const auto* c = std::get_if<Cycle>(&outcome))
        os << "cycle entry=" << c->entry << " period=" << c->period;
    else
        os << "budget-exhausted";
    return os.str();
}

}  // namespace gfix::picard
