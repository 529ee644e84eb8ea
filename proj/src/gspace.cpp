#include "gfix/gspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "gfix/rng.hpp"

namespace gfix::gspace {

FiniteGSpace::FiniteGSpace(unsigned nu, std::vector<std::string> points, DistanceTable dist)
    : nu_(nu), points_(std::move(points)), dist_(std::move(dist))
{
    if (nu_ == 0)
        throw std::invalid_argument("nu must be a positive integer");
    if (points_.empty())
        throw std::invalid_argument("a space needs at least one point");
    std::set<std::string_view> seen;
    for (const auto& p : points_)
        if (!seen.insert(p).second)
            throw std::invalid_argument("duplicate point identifier '" + p + "'");
}

std::optional<PointIndex> FiniteGSpace::find(std::string_view id) const
{
    const auto it = std::find(points_.begin(), points_.end(), id);
    if (it == points_.end())
        return std::nullopt;
    return static_cast<PointIndex>(it - points_.begin());
}

bool FiniteGSpace::is_square() const
{
    if (dist_.size() != points_.size())
        return false;
    return std::all_of(dist_.begin(), dist_.end(),
                       [n = points_.size()](const auto& row) { return row.size() == n; });
}

FiniteGSpace FiniteGSpace::with_nu(unsigned nu) const { return FiniteGSpace(nu, points_, dist_); }

FiniteGSpace FiniteGSpace::subspace(std::span<const PointIndex> keep) const
{
    std::vector<std::string> names;
    DistanceTable table;
    names.reserve(keep.size());
    for (PointIndex i : keep) {
        names.push_back(points_.at(i));
        std::vector<Rational> row;
        row.reserve(keep.size());
        for (PointIndex j : keep)
            row.push_back(distance(i, j));
        table.push_back(std::move(row));
    }
    return FiniteGSpace(nu_, std::move(names), std::move(table));
}

IntervalSpace::IntervalSpace(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw std::invalid_argument("interval requires finite lo < hi");
}

std::string_view to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::Shape: return "shape";
    case ViolationKind::Negative: return "negative";
    case ViolationKind::Identity: return "identity";
    case ViolationKind::Positivity: return "positivity";
    case ViolationKind::Symmetry: return "symmetry";
    case ViolationKind::Polygon: return "polygon";
    }
    return "unknown";
}

namespace {

Rational chain_sum(const FiniteGSpace& space, std::span<const PointIndex> tuple)
{
    Rational sum;
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i)
        sum += space.distance(tuple[i], tuple[i + 1]);
    return sum;
}

void check_pairs(const FiniteGSpace& space, std::vector<Violation>& out)
{
    const std::size_t n = space.size();
    for (PointIndex x = 0; x < n; ++x) {
        for (PointIndex y = 0; y < n; ++y) {
            const Rational& d = space.distance(x, y);
            if (d.is_negative())
                out.push_back({ViolationKind::Negative, {x, y}, Rational{0}, d});
            else if (x == y && !d.is_zero())
                out.push_back({ViolationKind::Identity, {x, x}, d, Rational{0}});
            else if (x != y && d.is_zero())
                out.push_back({ViolationKind::Positivity, {x, y}, Rational{0}, Rational{0}});
            if (x < y && d != space.distance(y, x)) {
                const Rational& e = space.distance(y, x);
                out.push_back({ViolationKind::Symmetry, {x, y}, std::max(d, e), std::min(d, e)});
            }
        }
    }
}

void check_polygon(const FiniteGSpace& space, std::span<const PointIndex> tuple, std::vector<Violation>& out)
{
    const Rational lhs = space.distance(tuple.front(), tuple.back());
    Rational rhs = chain_sum(space, tuple);
    if (lhs > rhs)
        out.push_back({ViolationKind::Polygon, {tuple.begin(), tuple.end()}, lhs, std::move(rhs)});
}

/// Calls visit(tuple) for every (k)-tuple of distinct points with first < last.
template <class Visit>
std::uint64_t for_each_polygon_tuple(std::size_t n, std::size_t k, Visit&& visit)
{
    if (k > n || k < 2)
        return 0;
    std::vector<PointIndex> tuple(k);
    std::vector<bool> used(n, false);
    std::uint64_t count = 0;

    auto fill_interior = [&](auto&& self, std::size_t slot) -> void {
        if (slot == k - 1) {
            ++count;
            visit(std::span<const PointIndex>(tuple));
            return;
        }
        for (PointIndex u = 0; u < n; ++u) {
            if (used[u])
                continue;
            used[u] = true;
            tuple[slot] = u;
            self(self, slot + 1);
            used[u] = false;
        }
    };

    for (PointIndex x = 0; x < n; ++x) {
        for (PointIndex y = x + 1; y < n; ++y) {
            tuple.front() = x;
            tuple.back() = y;
            used[x] = used[y] = true;
            fill_interior(fill_interior, 1);
            used[x] = used[y] = false;
        }
    }
    return count;
}

std::vector<PointIndex> draw_tuple(std::uint64_t seed, std::uint64_t draw, std::size_t n, std::size_t k)
{
    auto rng = stream_rng(seed, draw);
    std::vector<PointIndex> pool(n);
    std::iota(pool.begin(), pool.end(), PointIndex{0});
    for (std::size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[uniform_index(rng, i, n - 1)]);
    pool.resize(k);
    if (pool.front() > pool.back())
        std::reverse(pool.begin(), pool.end());
    return pool;
}

}  // namespace

ValidationReport validate_space(const FiniteGSpace& space, ValidationMode mode)
{
    ValidationReport report;
    report.mode = mode;

    if (!space.is_square()) {
        const std::size_t n = space.size();
        if (space.table().size() != n)
            report.violations.push_back({ViolationKind::Shape, {},
                                         Rational{static_cast<std::int64_t>(space.table().size())},
                                         Rational{static_cast<std::int64_t>(n)}});
        for (std::size_t i = 0; i < space.table().size(); ++i)
            if (space.table()[i].size() != n)
                report.violations.push_back({ViolationKind::Shape, {i},
                                             Rational{static_cast<std::int64_t>(space.table()[i].size())},
                                             Rational{static_cast<std::int64_t>(n)}});
        report.ok = false;
        return report;
    }

    check_pairs(space, report.violations);

    const std::size_t n = space.size();
    const std::size_t k = space.nu() + 2;
    if (std::holds_alternative<Exhaustive>(mode)) {
        report.tuples_checked = for_each_polygon_tuple(
            n, k, [&](std::span<const PointIndex> t) { check_polygon(space, t, report.violations); });
    } else if (k <= n) {
        const auto& sampled = std::get<Sampled>(mode);
        std::set<std::vector<PointIndex>> seen;
        for (std::uint64_t draw = 0; draw < sampled.budget; ++draw) {
            const auto tuple = draw_tuple(sampled.seed, draw, n, k);
            ++report.tuples_checked;
            if (seen.contains(tuple))
                continue;
            const std::size_t before = report.violations.size();
            check_polygon(space, tuple, report.violations);
            if (report.violations.size() != before)
                seen.insert(tuple);
        }
    }

    report.ok = report.violations.empty();
    return report;
}

std::uint64_t ordered_tuple_count(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t factor = n - i;
        if (count > std::numeric_limits<std::uint64_t>::max() / factor)
            return std::numeric_limits<std::uint64_t>::max();
        count *= factor;
    }
    return count;
}

ValidationReport validate_auto(const FiniteGSpace& space, std::uint64_t seed, std::uint64_t threshold)
{
    if (ordered_tuple_count(space.size(), space.nu() + 2) <= threshold)
        return validate_space(space, Exhaustive{});
    return validate_space(space, Sampled{threshold, seed});
}

Rational polygon_defect(const FiniteGSpace& space, std::span<const PointIndex> tuple)
{
    if (tuple.size() != space.nu() + 2)
        throw std::invalid_argument("polygon tuple must have nu+2 entries");
    std::set<PointIndex> distinct(tuple.begin(), tuple.end());
    if (distinct.size() != tuple.size())
        throw std::invalid_argument("polygon tuple entries must be pairwise distinct");
    return space.distance(tuple.front(), tuple.back()) - chain_sum(space, tuple);
}

MetricCheck is_metric(const FiniteGSpace& space)
{
    const std::size_t n = space.size();
    for (PointIndex x = 0; x < n; ++x)
        for (PointIndex y = 0; y < n; ++y)
            for (PointIndex u = 0; u < n; ++u) {
                if (x == y || u == x || u == y)
                    continue;
                if (space.distance(x, y) > space.distance(x, u) + space.distance(u, y))
                    return {false, std::array<PointIndex, 3>{x, u, y}};
            }
    return {};
}

std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::MetricPerturb: return "metric-perturb";
    case Strategy::Reject: return "reject";
    case Strategy::Repair: return "repair";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text)
{
    if (text == "metric-perturb")
        return Strategy::MetricPerturb;
    if (text == "reject")
        return Strategy::Reject;
    if (text == "repair")
        return Strategy::Repair;
    return std::nullopt;
}

GenerationError::GenerationError(Strategy strategy, std::uint64_t attempts)
    : std::runtime_error("space generation (" + std::string(to_string(strategy)) + ") failed after " +
                         std::to_string(attempts) + " attempts"),
      attempts_(attempts)
{
}

namespace {

constexpr std::uint64_t kPerturbAttempts = 64;
constexpr std::uint64_t kRejectAttempts = 20'000;
constexpr std::uint64_t kRepairPasses = 2'000;

std::vector<std::string> point_names(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("p" + std::to_string(i));
    return names;
}

DistanceTable zero_table(std::size_t n) { return DistanceTable(n, std::vector<Rational>(n)); }

/// Symmetric table with off-diagonal entries k/4, k uniform in [lo_quarters, hi_quarters].
DistanceTable random_table(std::mt19937_64& rng, std::size_t n, std::uint64_t lo_quarters, std::uint64_t hi_quarters)
{
    auto table = zero_table(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto k = static_cast<std::int64_t>(uniform_index(rng, lo_quarters, hi_quarters));
            table[i][j] = table[j][i] = Rational(k, 4);
        }
    return table;
}

/// Shortest-path closure of random integer edge weights: always a metric.
DistanceTable random_metric(std::mt19937_64& rng, std::size_t n)
{
    auto table = zero_table(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            table[i][j] = table[j][i] = Rational(static_cast<std::int64_t>(uniform_index(rng, 1, 8)));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (table[i][k] + table[k][j] < table[i][j])
                    table[i][j] = table[i][k] + table[k][j];
    return table;
}

FiniteGSpace metric_perturb(unsigned nu, std::size_t n, std::mt19937_64& rng)
{
    static const std::array<Rational, 6> factors{Rational(1, 2), Rational(3, 4), Rational(5, 4),
                                                 Rational(3, 2), Rational(2),    Rational(3)};
    const auto base = random_metric(rng, n);
    for (std::uint64_t attempt = 0; attempt < kPerturbAttempts; ++attempt) {
        auto table = base;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (coin(rng, 1, 3)) {
                    table[i][j] *= factors[uniform_index(rng, 0, factors.size() - 1)];
                    table[j][i] = table[i][j];
                }
        FiniteGSpace candidate(nu, point_names(n), std::move(table));
        if (validate_space(candidate).ok)
            return candidate;
    }
    return FiniteGSpace(nu, point_names(n), base);
}

FiniteGSpace reject(unsigned nu, std::size_t n, std::mt19937_64& rng)
{
    for (std::uint64_t attempt = 1; attempt <= kRejectAttempts; ++attempt) {
        FiniteGSpace candidate(nu, point_names(n), random_table(rng, n, 4, 12));
        if (validate_space(candidate).ok)
            return candidate;
    }
    throw GenerationError(Strategy::Reject, kRejectAttempts);
}

FiniteGSpace repair(unsigned nu, std::size_t n, std::mt19937_64& rng)
{
    auto table = random_table(rng, n, 1, 16);
    const Rational links(static_cast<std::int64_t>(nu) + 1);
    for (std::uint64_t pass = 1; pass <= kRepairPasses; ++pass) {
        FiniteGSpace candidate(nu, point_names(n), table);
        const auto report = validate_space(candidate);
        if (report.ok)
            return candidate;
        // Raise every chain edge of a violated tuple to at least lhs/(nu+1).
        // Entries only grow and never exceed the current maximum entry.
        for (const auto& v : report.violations) {
            const auto& t = v.tuple;
            const Rational floor = table[t.front()][t.back()] / links;
            for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                auto& e = table[t[i]][t[i + 1]];
                if (e < floor)
                    e = table[t[i + 1]][t[i]] = floor;
            }
        }
    }
    throw GenerationError(Strategy::Repair, kRepairPasses);
}

}  // namespace

FiniteGSpace generate_space(unsigned nu, std::size_t n, std::uint64_t seed, Strategy strategy)
{
    if (nu == 0)
        throw std::invalid_argument("nu must be a positive integer");
    if (n < 2)
        throw std::invalid_argument("generate_space needs at least two points");
    auto rng = stream_rng(seed, (static_cast<std::uint64_t>(nu) << 32) ^ (n << 8) ^ static_cast<std::uint64_t>(strategy));
    switch (strategy) {
    case Strategy::MetricPerturb: return metric_perturb(nu, n, rng);
    case Strategy::Reject: return reject(nu, n, rng);
    case Strategy::Repair: return repair(nu, n, rng);
    }
    throw std::invalid_argument("unknown generation strategy");
}

}  // namespace gfix::gspace
