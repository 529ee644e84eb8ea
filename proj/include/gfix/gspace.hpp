#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gfix/rational.hpp"

namespace gfix::gspace {

using PointIndex = std::size_t;
using DistanceTable = std::vector<std::vector<Rational>>;

/// A finite point set with an exact distance table and a polygon order nu.
///
/// The table is stored as given; shape and axiom problems are reported by
/// validate_space rather than rejected here, so a malformed file can still be
/// loaded and diagnosed. Only nu >= 1 and unique point identifiers are
/// enforced at construction.
class FiniteGSpace {
public:
    using point_type = PointIndex;
    using value_type = Rational;

    FiniteGSpace(unsigned nu, std::vector<std::string> points, DistanceTable dist);

    unsigned nu() const { return nu_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& name(PointIndex p) const { return points_.at(p); }
    std::optional<PointIndex> find(std::string_view id) const;
    const DistanceTable& table() const { return dist_; }

    /// Bounds-checked lookup.
    const Rational& distance(PointIndex x, PointIndex y) const { return dist_.at(x).at(y); }
    bool same(PointIndex x, PointIndex y) const { return x == y; }
    bool contains(PointIndex p) const { return p < points_.size(); }

    bool is_square() const;

    FiniteGSpace with_nu(unsigned nu) const;
    /// Restriction to the listed points, in the listed order.
    FiniteGSpace subspace(std::span<const PointIndex> keep) const;

private:
    unsigned nu_;
    std::vector<std::string> points_;
    DistanceTable dist_;
};

/// The real interval [lo, hi] with |x - y|; a metric, hence nu = 1.
class IntervalSpace {
public:
    using point_type = double;
    using value_type = double;

    IntervalSpace(double lo, double hi);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    unsigned nu() const { return 1; }
    bool contains(double x) const { return x >= lo_ && x <= hi_; }
    double distance(double x, double y) const { return x > y ? x - y : y - x; }
    bool same(double x, double y) const { return x == y; }

private:
    double lo_;
    double hi_;
};

/// Comparison tolerance for convergence tests on interval spaces only.
inline constexpr double kIntervalTolerance = 1e-12;

enum class ViolationKind {
    Shape,       // row i has the wrong length: lhs = row length, rhs = point count
    Negative,    // d(x,y) < 0: lhs = 0, rhs = d(x,y)
    Identity,    // d(x,x) != 0: lhs = d(x,x), rhs = 0
    Positivity,  // d(x,y) = 0 for x != y: lhs = rhs = 0
    Symmetry,    // d(x,y) != d(y,x): lhs the larger of the two, rhs the smaller
    Polygon,     // d(x,y) > chain sum: lhs = d(x,y), rhs = chain sum
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<PointIndex> tuple;
    Rational lhs;
    Rational rhs;
};

struct Exhaustive {};
struct Sampled {
    std::uint64_t budget;
    std::uint64_t seed;
};
using ValidationMode = std::variant<Exhaustive, Sampled>;

struct ValidationReport {
    bool ok = true;
    ValidationMode mode = Exhaustive{};
    std::uint64_t tuples_checked = 0;
    std::vector<Violation> violations;
};

/// Checks identity, symmetry and positivity over all pairs, then the
/// nu-polygon inequality over (nu+2)-tuples of pairwise-distinct points
/// (all of them, or `budget` seeded draws). Polygon tuples are reported with
/// the first endpoint before the last one in point order; the reversed tuple
/// is the same inequality.
ValidationReport validate_space(const FiniteGSpace& space, ValidationMode mode = Exhaustive{});

inline constexpr std::uint64_t kDefaultExhaustiveThreshold = 5'000'000;

/// Number of ordered k-tuples of distinct points out of n, saturating at UINT64_MAX.
std::uint64_t ordered_tuple_count(std::size_t n, std::size_t k);

/// Exhaustive when the ordered tuple count is at most `threshold`, otherwise
/// sampled with `threshold` draws.
ValidationReport validate_auto(const FiniteGSpace& space, std::uint64_t seed,
                               std::uint64_t threshold = kDefaultExhaustiveThreshold);

/// d(x,y) - [d(x,u1) + ... + d(u_nu,y)] for tuple (x, u1, ..., u_nu, y).
/// Throws std::invalid_argument unless the tuple has nu+2 distinct entries.
Rational polygon_defect(const FiniteGSpace& space, std::span<const PointIndex> tuple);

struct MetricCheck {
    bool metric = true;
    /// (x, u, y) with d(x,y) > d(x,u) + d(u,y).
    std::optional<std::array<PointIndex, 3>> violating;
};

MetricCheck is_metric(const FiniteGSpace& space);

enum class Strategy { MetricPerturb, Reject, Repair };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);

class GenerationError : public std::runtime_error {
public:
    GenerationError(Strategy strategy, std::uint64_t attempts);
    std::uint64_t attempts() const { return attempts_; }

private:
    std::uint64_t attempts_;
};

/// Deterministic in all arguments; the result always passes exhaustive
/// validation for `nu`. Points are named "p0", "p1", ...
FiniteGSpace generate_space(unsigned nu, std::size_t n, std::uint64_t seed, Strategy strategy);

}  // namespace gfix::gspace
