#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "gfix/gspace.hpp"
#include "gfix/realdsl.hpp"

namespace gfix::contract {

using gspace::FiniteGSpace;
using gspace::IntervalSpace;
using gspace::PointIndex;

/// Table-backed self-map of a finite space.
class FiniteMap {
public:
    using space_type = FiniteGSpace;

    /// Throws std::invalid_argument unless `image` has one in-range entry per point.
    FiniteMap(std::shared_ptr<const FiniteGSpace> space, std::vector<PointIndex> image);

    const FiniteGSpace& space() const { return *space_; }
    const std::shared_ptr<const FiniteGSpace>& space_ptr() const { return space_; }
    const std::vector<PointIndex>& image() const { return image_; }

    PointIndex operator()(PointIndex x) const { return image_.at(x); }
    /// T^n x.
    PointIndex power(PointIndex x, std::size_t n) const;

    /// True if T maps the listed points into the list.
    bool preserves(std::span<const PointIndex> keep) const;
    /// Restriction to an invariant subset; indices are renumbered in `keep` order.
    FiniteMap restrict_to(std::span<const PointIndex> keep) const;

private:
    std::shared_ptr<const FiniteGSpace> space_;
    std::vector<PointIndex> image_;
};

/// Expression-backed self-map of a real interval, checked on a grid.
class IntervalMap {
public:
    using space_type = IntervalSpace;

    /// Throws std::invalid_argument if the grid check finds a value outside the interval.
    IntervalMap(std::shared_ptr<const IntervalSpace> space, realdsl::MapExpr expr,
                std::size_t grid = realdsl::kDefaultCheckGrid);

    const IntervalSpace& space() const { return *space_; }
    const std::shared_ptr<const IntervalSpace>& space_ptr() const { return space_; }
    const realdsl::MapExpr& expr() const { return expr_; }
    const realdsl::SelfMapVerdict& verdict() const { return verdict_; }

    double operator()(double x) const { return expr_.eval(x); }

private:
    std::shared_ptr<const IntervalSpace> space_;
    realdsl::MapExpr expr_;
    realdsl::SelfMapVerdict verdict_;
};

}  // namespace gfix::contract
