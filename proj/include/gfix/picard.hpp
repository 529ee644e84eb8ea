#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gfix/selfmap.hpp"
#include "gfix/seqlab.hpp"
#include "gfix/trace.hpp"

namespace gfix::picard {

using contract::FiniteMap;
using contract::IntervalMap;
using gspace::FiniteGSpace;
using gspace::IntervalSpace;
using gspace::PointIndex;

template <class P>
struct FixedPoint {
    P z{};
    std::size_t at = 0;
};

struct Cycle {
    std::size_t entry = 0;
    std::size_t period = 2;
};

struct BudgetExhausted {};

template <class P>
using Outcome = std::variant<FixedPoint<P>, Cycle, BudgetExhausted>;

template <DistanceSpace S>
struct OrbitResult {
    using value_type = typename S::value_type;
    using point_type = typename S::point_type;

    Trace<S> trace;
    Outcome<point_type> outcome;
    /// Present when the trace has at least 4 entries.
    std::optional<seqlab::StepDiagnostics<value_type>> diagnostics;
    /// eps_series[i-1][n] = d(x_n, x_{n+i}) over the pairwise-distinct prefix, i = 1, 2.
    std::vector<std::vector<value_type>> eps_series;

    bool is_fixed_point() const { return std::holds_alternative<FixedPoint<point_type>>(outcome); }
    bool is_cycle() const { return std::holds_alternative<Cycle>(outcome); }
};

/// Exact first-repeat detection with at most `budget` applications of the
/// map: x_{t} = x_{t-1} is a FixedPoint at t-1, x_t = x_j for j < t-1 is a
/// Cycle entering at j.
OrbitResult<FiniteGSpace> iterate(const FiniteMap& map, PointIndex x0, std::size_t budget);

/// Stops at the first n with |x_n - x_{n+1}| <= tol followed by three more
/// steps <= tol. The FixedPoint is a proxy: z is the last computed iterate.
/// Throws std::domain_error if the orbit leaves the interval.
OrbitResult<IntervalSpace> iterate(const IntervalMap& map, double x0, std::size_t budget, double tol);

struct AllSameFrom {
    std::size_t k = 0;
};
struct AllDistinct {};
struct CycleFound {
    std::size_t entry = 0;
    std::size_t period = 2;
};
using Dichotomy = std::variant<AllSameFrom, AllDistinct, CycleFound>;

Dichotomy orbit_dichotomy(const OrbitResult<FiniteGSpace>& result);

std::vector<PointIndex> fixed_points(const FiniteMap& map);

/// x0, T x0, ..., T^{length-1} x0 without early stopping.
Trace<FiniteGSpace> orbit_prefix(const FiniteMap& map, PointIndex x0, std::size_t length);

std::string describe(const Outcome<PointIndex>& outcome, const FiniteGSpace& space);
std::string describe(const Outcome<double>& outcome);

}  // namespace gfix::picard
