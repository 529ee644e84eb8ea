#pragma once

// Finite-window analysis of sequence traces. Every limit or supremum over an
// infinite tail is replaced by a maximum over what the trace contains, and
// tail behavior is reported through flags, never as a Cauchy verdict.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gfix/trace.hpp"

namespace gfix::seqlab {

inline constexpr double kDefaultTailFraction = 0.25;

/// First index of the tail window: the last ceil(fraction * length) entries, at least one.
inline std::size_t tail_start(std::size_t length, double fraction)
{
    if (length == 0)
        return 0;
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(length)));
    count = std::clamp<std::size_t>(count, 1, length);
    return length - count;
}

template <class V>
V tail_max(const std::vector<V>& values, double fraction = kDefaultTailFraction)
{
    if (values.empty())
        throw std::invalid_argument("tail_max of an empty series");
    return *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(tail_start(values.size(), fraction)),
                             values.end());
}

/// Index n of the first pair with values[n+1] >= values[n], if any.
template <class V>
std::optional<std::size_t> first_non_decrease(const std::vector<V>& values)
{
    for (std::size_t n = 0; n + 1 < values.size(); ++n)
        if (!(values[n + 1] < values[n]))
            return n;
    return std::nullopt;
}

template <class V>
struct CauchyModulusTable {
    unsigned k = 1;
    /// values[n] = max{ d(x_n, x_{n+1+mk}) : m >= 0, n+1+mk < N }, n = 0..N-2.
    std::vector<V> values;
    /// Index j = n+1+mk attaining values[n] (first one on ties).
    std::vector<std::size_t> attained_at;
};

/// Throws std::invalid_argument if k == 0 or the trace is shorter than k + 2.
template <DistanceSpace S>
CauchyModulusTable<typename S::value_type> cauchy_modulus(const Trace<S>& trace, unsigned k)
{
    if (k == 0)
        throw std::invalid_argument("cauchy_modulus: k must be positive");
    if (trace.size() < static_cast<std::size_t>(k) + 2)
        throw std::invalid_argument("cauchy_modulus: trace needs at least k+2 entries");

    const std::size_t n_entries = trace.size();
    CauchyModulusTable<typename S::value_type> table;
    table.k = k;
    table.values.reserve(n_entries - 1);
    table.attained_at.reserve(n_entries - 1);
    for (std::size_t n = 0; n + 1 < n_entries; ++n) {
        auto best = trace.distance(n, n + 1);
        std::size_t at = n + 1;
        for (std::size_t j = n + 1 + k; j < n_entries; j += k) {
            auto d = trace.distance(n, j);
            if (d > best) {
                best = std::move(d);
                at = j;
            }
        }
        table.values.push_back(std::move(best));
        table.attained_at.push_back(at);
    }
    return table;
}

template <class V>
struct StepSeries {
    unsigned stride = 1;
    /// values[n] = d(x_n, x_{n+stride}).
    std::vector<V> values;
    /// Every value in the tail window is <= tol.
    bool tail_below_tol = false;
};

template <class V>
struct StepDiagnostics {
    V tol{};
    double tail_fraction = kDefaultTailFraction;
    std::vector<StepSeries<V>> series;

    const StepSeries<V>& stride(unsigned m) const
    {
        for (const auto& s : series)
            if (s.stride == m)
                return s;
        throw std::out_of_range("no step series for stride " + std::to_string(m));
    }
};

/// Series d(x_n, x_{n+m}) for m = 1..max_stride (bounded by the trace length).
/// Throws std::invalid_argument for traces shorter than 4 entries.
template <DistanceSpace S>
StepDiagnostics<typename S::value_type> step_diagnostics(const Trace<S>& trace, typename S::value_type tol,
                                                         unsigned max_stride = 5,
                                                         double tail_fraction = kDefaultTailFraction)
{
    if (trace.size() < 4)
        throw std::invalid_argument("step_diagnostics: trace needs at least 4 entries");
    StepDiagnostics<typename S::value_type> out;
    out.tol = tol;
    out.tail_fraction = tail_fraction;
    const auto top = static_cast<unsigned>(std::min<std::size_t>(max_stride, trace.size() - 1));
    for (unsigned m = 1; m <= top; ++m) {
        StepSeries<typename S::value_type> s;
        s.stride = m;
        for (std::size_t n = 0; n + m < trace.size(); ++n)
            s.values.push_back(trace.distance(n, n + m));
        s.tail_below_tol = !(tail_max(s.values, tail_fraction) > tol);
        out.series.push_back(std::move(s));
    }
    return out;
}

struct DistinctCheck {
    bool distinct = true;
    /// (i, j), i < j, with x_i = x_j and j minimal.
    std::optional<std::pair<std::size_t, std::size_t>> collision;
};

template <DistanceSpace S>
DistinctCheck all_distinct(const Trace<S>& trace)
{
    for (std::size_t j = 1; j < trace.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (trace.same(i, j))
                return {false, std::pair{i, j}};
    return {};
}

enum class WitnessStatus { Witnesses, EmpiricallyCauchy, PreconditionFailed };

inline const char* to_string(WitnessStatus s)
{
    switch (s) {
    case WitnessStatus::Witnesses: return "witnesses";
    case WitnessStatus::EmpiricallyCauchy: return "empirically-nu-cauchy";
    case WitnessStatus::PreconditionFailed: return "precondition-failed";
    }
    return "unknown";
}

template <class V>
struct WitnessPair {
    std::size_t i = 0;  // 1-based rank
    std::size_t k = 0;  // threshold: d(x_n, x_{n+1}) < eps/i for n >= k
    std::size_t n = 0;
    std::size_t m = 0;  // minimal, >= 1
    std::size_t p = 0;  // n - 1
    std::size_t q = 0;  // n + m*nu
    V over{};           // d(x_{p+1}, x_{q+1}) > eps
    V under{};          // d(x_{p+1}, x_{q+1-nu}) <= eps
    V chain_lhs{};      // d(x_p, x_q)
    V chain_bound{};    // nu*eps/i + eps
    bool chain_checked = false;  // chain points x_p, x_{p+1}, x_{q+1-nu}, ..., x_q pairwise distinct
    bool chain_holds = false;
};

template <class V>
struct AntiCauchyWitness {
    V epsilon{};
    unsigned nu = 1;
    WitnessStatus status = WitnessStatus::Witnesses;
    std::string reason;
    std::vector<WitnessPair<V>> pairs;
    /// Fewer than the requested pairs because a threshold or an excess index lies beyond the trace.
    bool truncated = false;
};

/// Runs the constructive argument that a sequence with vanishing steps whose
/// nu-strided window maxima stay above eps produces index pairs (p_i, q_i)
/// with d(x_{p_i+1}, x_{q_i+1}) > eps, d(x_{p_i+1}, x_{q_i+1-nu}) <= eps and
/// d(x_{p_i}, x_{q_i}) <= nu*eps/i + eps.
template <DistanceSpace S>
AntiCauchyWitness<typename S::value_type> extract_anti_cauchy_witnesses(const Trace<S>& trace,
                                                                        typename S::value_type epsilon,
                                                                        unsigned nu, std::size_t count)
{
    using V = typename S::value_type;
    if (nu == 0)
        throw std::invalid_argument("nu must be positive");
    if (!(epsilon > V{}))
        throw std::invalid_argument("epsilon must be positive");

    AntiCauchyWitness<V> out;
    out.epsilon = epsilon;
    out.nu = nu;

    const std::size_t n_entries = trace.size();
    if (n_entries < 3) {
        out.status = WitnessStatus::PreconditionFailed;
        out.reason = "trace too short";
        return out;
    }
    if (const auto d = all_distinct(trace); !d.distinct) {
        out.status = WitnessStatus::PreconditionFailed;
        out.reason = "entries " + std::to_string(d.collision->first) + " and " +
                     std::to_string(d.collision->second) + " coincide";
        return out;
    }

    const std::size_t last = n_entries - 2;  // largest n with a successor
    std::vector<V> steps;
    for (std::size_t n = 0; n <= last; ++n)
        steps.push_back(trace.distance(n, n + 1));

    std::size_t prev_k = 0;
    for (std::size_t i = 1; i <= count; ++i) {
        const V level = epsilon / V(static_cast<std::int64_t>(i));
        // k_i: smallest k > k_{i-1}, k >= 1, with steps[n] < eps/i for every n in [k, last].
        std::size_t k = 0;
        for (std::size_t n = last + 1; n-- > 0;) {
            if (!(steps[n] < level)) {
                k = n + 1;
                break;
            }
        }
        k = std::max({k, prev_k + 1, std::size_t{1}});
        if (k > last) {
            if (i == 1) {
                out.status = WitnessStatus::PreconditionFailed;
                out.reason = "step series does not fall below eps/1 within the trace";
            } else {
                out.truncated = true;
            }
            return out;
        }
        prev_k = k;

        // n_i >= k_i + 1 and minimal m_i with d(x_n, x_{n+1+m*nu}) > eps.
        std::optional<std::pair<std::size_t, std::size_t>> found;
        for (std::size_t n = k + 1; n <= last && !found; ++n)
            for (std::size_t m = 0, j = n + 1; j < n_entries; ++m, j += nu)
                if (trace.distance(n, j) > epsilon) {
                    found = std::pair{n, m};
                    break;
                }
        if (!found) {
            if (i == 1) {
                out.status = WitnessStatus::EmpiricallyCauchy;
                out.reason = "no nu-strided window beyond the first threshold exceeds eps";
            } else {
                out.truncated = true;
            }
            return out;
        }

        WitnessPair<V> w;
        w.i = i;
        w.k = k;
        w.n = found->first;
        w.m = found->second;
        w.p = w.n - 1;
        w.q = w.n + w.m * nu;
        w.over = trace.distance(w.p + 1, w.q + 1);
        w.under = trace.distance(w.p + 1, w.q + 1 - nu);
        w.chain_lhs = trace.distance(w.p, w.q);
        w.chain_bound = V(static_cast<std::int64_t>(nu)) * epsilon / V(static_cast<std::int64_t>(i)) + epsilon;

        std::vector<std::size_t> chain{w.p, w.p + 1};
        for (std::size_t j = w.q + 1 - nu; j <= w.q; ++j)
            chain.push_back(j);
        w.chain_checked = true;
        for (std::size_t a = 0; a < chain.size() && w.chain_checked; ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (trace.same(chain[a], chain[b])) {
                    w.chain_checked = false;
                    break;
                }
        w.chain_holds = w.chain_checked && !(w.chain_lhs > w.chain_bound);
        out.pairs.push_back(std::move(w));
    }
    return out;
}

enum class Continuity { Holds, Fails, Inconclusive };

inline const char* to_string(Continuity c)
{
    switch (c) {
    case Continuity::Holds: return "holds";
    case Continuity::Fails: return "fails";
    case Continuity::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

template <class V>
struct ContinuityCheck {
    Continuity verdict = Continuity::Inconclusive;
    V limit_distance{};  // d(x, y)
    V tail_distance{};   // d(x_{N-1}, y_{N-1})
    std::string reason;
};

/// Compares d(x, y) with d(x_N, y_N) at the trace tails. Each trace must look
/// convergent to its limit in the strong sense (tail of the 1-modulus and the
/// final distance to the limit both <= tol); otherwise the verdict is
/// Inconclusive. Holds iff |d(x,y) - d(x_N,y_N)| <= tol * max(1, d(x,y)).
template <DistanceSpace S>
ContinuityCheck<typename S::value_type> distance_continuity_check(const Trace<S>& xs, const Trace<S>& ys,
                                                                  const typename S::point_type& x_limit,
                                                                  const typename S::point_type& y_limit,
                                                                  typename S::value_type tol,
                                                                  double tail_fraction = kDefaultTailFraction)
{
    using V = typename S::value_type;
    ContinuityCheck<V> out;
    out.limit_distance = xs.space().distance(x_limit, y_limit);
    out.tail_distance = xs.space().distance(xs.entries().back(), ys.entries().back());

    for (const auto* t : {&xs, &ys}) {
        const auto& limit = t == &xs ? x_limit : y_limit;
        if (t->size() < 3) {
            out.reason = "trace shorter than 3 entries";
            return out;
        }
        if (tail_max(cauchy_modulus(*t, 1).values, tail_fraction) > tol) {
            out.reason = "trace tail is not Cauchy within tol";
            return out;
        }
        if (t->space().distance(t->entries().back(), limit) > tol) {
            out.reason = "trace tail is not within tol of its limit";
            return out;
        }
    }

    const V diff = out.limit_distance > out.tail_distance ? out.limit_distance - out.tail_distance
                                                          : out.tail_distance - out.limit_distance;
    const V one(1);
    const V scale = out.limit_distance > one ? out.limit_distance : one;
    out.verdict = diff > tol * scale ? Continuity::Fails : Continuity::Holds;
    return out;
}

}  // namespace gfix::seqlab
