#pragma once

#include <concepts>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gfix/gspace.hpp"

namespace gfix {

/// A space whose points can be compared and measured.
template <class S>
concept DistanceSpace = requires(const S& s, const typename S::point_type& p) {
    typename S::value_type;
    { s.distance(p, p) } -> std::convertible_to<typename S::value_type>;
    { s.same(p, p) } -> std::same_as<bool>;
    { s.contains(p) } -> std::same_as<bool>;
    { s.nu() } -> std::convertible_to<unsigned>;
};

static_assert(DistanceSpace<gspace::FiniteGSpace>);
static_assert(DistanceSpace<gspace::IntervalSpace>);

/// Finite prefix x_0, ..., x_{N-1} of a sequence in a space.
template <DistanceSpace S>
class Trace {
public:
    using space_type = S;
    using point_type = typename S::point_type;
    using value_type = typename S::value_type;

    Trace(std::shared_ptr<const S> space, std::vector<point_type> entries)
        : space_(std::move(space)), entries_(std::move(entries))
    {
        if (!space_)
            throw std::invalid_argument("trace requires a space");
        if (entries_.empty())
            throw std::invalid_argument("trace must have at least one entry");
        for (const auto& p : entries_)
            if (!space_->contains(p))
                throw std::invalid_argument("trace entry is not a point of the space");
    }

    const S& space() const { return *space_; }
    const std::shared_ptr<const S>& space_ptr() const { return space_; }
    const std::vector<point_type>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const point_type& operator[](std::size_t i) const { return entries_[i]; }

    value_type distance(std::size_t i, std::size_t j) const { return space_->distance(entries_[i], entries_[j]); }
    bool same(std::size_t i, std::size_t j) const { return space_->same(entries_[i], entries_[j]); }

    Trace prefix(std::size_t length) const
    {
        return Trace(space_, std::vector<point_type>(entries_.begin(), entries_.begin() + length));
    }

private:
    std::shared_ptr<const S> space_;
    std::vector<point_type> entries_;
};

}  // namespace gfix
