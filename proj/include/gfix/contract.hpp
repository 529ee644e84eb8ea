#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gfix/rational.hpp"
#include "gfix/selfmap.hpp"

namespace gfix::contract {

using PointPair = std::pair<PointIndex, PointIndex>;

struct PlainDistance {};
/// max{d(x,y), d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)}
struct CiricMax {};
/// d(x,y) + gamma (d(x,Tx) + d(y,Ty)), gamma > 0
struct ProinovGauge {
    Rational gamma;
};
using GaugeKind = std::variant<PlainDistance, CiricMax, ProinovGauge>;

/// Throws std::invalid_argument unless gamma > 0.
ProinovGauge proinov_gauge(Rational gamma);

std::string to_string(const GaugeKind& kind);

Rational gauge_value(const GaugeKind& kind, const FiniteMap& map, PointIndex x, PointIndex y);

struct ModulusEntry {
    Rational eps;
    /// nullopt stands for +infinity.
    std::optional<Rational> delta;
};

/// Exact epsilon -> delta modulus. Entry j covers every eps in
/// [entries[j].eps, entries[j+1].eps) (the first bucket is open at 0) with
/// delta(eps) = entries[j].eps + entries[j].delta - eps, i.e. the bucket's gap
/// minus eps. Tabulated deltas are the values at each bucket's left endpoint.
struct ModulusTable {
    std::vector<ModulusEntry> entries;
    std::string domain_note;

    /// delta certified for a given eps > 0; nullopt stands for +infinity.
    std::optional<Rational> delta_at(const Rational& eps) const;
};

struct Banach {
    Rational r;
};
struct CiricQuasi {
    Rational r;
};
struct CiricMatkowski {
    ModulusTable modulus;
};
struct ProinovShift {
    Rational gamma;
    unsigned big_n = 0;
    ModulusTable modulus;
};
using CertificateKind = std::variant<Banach, CiricQuasi, CiricMatkowski, ProinovShift>;

struct ContractionCertificate {
    CertificateKind kind;
    /// The full hypothesis set of the matching theorem holds. Ratio and CM
    /// certificates always carry it; a ProinovShift certificate has it only
    /// when d(Tx,Ty) < m(x,y) also holds for every x != y.
    bool witnessed = true;
};

std::string certificate_name(const ContractionCertificate& c);

struct Refusal {
    std::string reason;
    std::optional<PointPair> pair;
    std::optional<Rational> epsilon;
    /// Search exhausted its parameter grid: not a negative answer.
    bool undetermined = false;
};

using CertificateOrRefusal = std::variant<ContractionCertificate, Refusal>;

struct ShrinkCheck {
    bool holds = true;
    /// Violating pair with the smallest d(x,y), ties broken lexicographically.
    std::optional<PointPair> violating;
};

/// d(Tx,Ty) < gauge(x,y) for every x != y.
ShrinkCheck strict_shrink_check(const FiniteMap& map, const GaugeKind& kind);

/// Decides the Ciric-Matkowski epsilon-delta condition with the non-strict
/// conclusion d(Tx,Ty) <= eps, after requiring strict shrink.
CertificateOrRefusal cm_modulus(const FiniteMap& map);

struct RatioResult {
    Rational r;
    std::optional<PointPair> attained_at;
    /// Banach (PlainDistance) or CiricQuasi (CiricMax) when r < 1.
    std::optional<ContractionCertificate> certificate;
};

/// Smallest r with d(Tx,Ty) <= r * gauge(x,y) for all x != y.
RatioResult banach_ratio(const FiniteMap& map, const GaugeKind& kind);

/// Decides m(T^N x, T^N y) < delta + eps => d(T^{N+1}x, T^{N+1}y) <= eps for
/// every eps > 0, with m the Proinov gauge for gamma.
CertificateOrRefusal proinov_shift_check(const FiniteMap& map, const Rational& gamma, unsigned big_n);

inline const std::vector<unsigned> kDefaultBigNGrid{0, 1, 2, 3};
std::vector<Rational> default_gamma_grid();

/// Smallest N in the grid whose shift check succeeds; an exhausted grid is
/// reported as an undetermined refusal.
CertificateOrRefusal proinov_search(const FiniteMap& map, const Rational& gamma,
                                    const std::vector<unsigned>& big_n_grid = kDefaultBigNGrid);

struct RegularityVerdict {
    PointIndex start = 0;
    bool regular = false;
    /// First n from which the step sum stays at or below tol.
    std::optional<std::size_t> from;
};

/// Finite spaces require the step sum to reach exactly zero, i.e. the orbit
/// hits a fixed point within `budget` applications.
std::vector<RegularityVerdict> asymptotic_regularity_check(const FiniteMap& map, std::size_t budget);

struct IntervalRegularityVerdict {
    double start = 0.0;
    bool regular = false;
    std::optional<std::size_t> from;
};

/// With budget B, step sums s_n = |x_n - x_{n+1}| + |x_n - x_{n+2}| are formed
/// for n <= B - 2; regular iff some s_n <= tol and every later one is too.
std::vector<IntervalRegularityVerdict> asymptotic_regularity_check(const IntervalMap& map,
                                                                   const std::vector<double>& starts,
                                                                   std::size_t budget, double tol);

struct ClassifyConfig {
    std::vector<Rational> gammas = default_gamma_grid();
    std::vector<unsigned> big_ns = kDefaultBigNGrid;
};

struct Classification {
    std::vector<ContractionCertificate> certificates;
    std::vector<std::pair<std::string, Refusal>> refusals;
};

/// Runs both ratio checks, cm_modulus and the Proinov grid. Only witnessed
/// certificates are returned as successes.
Classification classify(const FiniteMap& map, const ClassifyConfig& config = {});

}  // namespace gfix::contract
