#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gfix/contract.hpp"
#include "gfix/gspace.hpp"

namespace gfix::harness {

using contract::FiniteMap;
using gspace::PointIndex;

enum class Theorem { CmFixedPoint, Proinov, NuCauchyBridge, StepLemma, DistanceContinuity };

std::string_view to_string(Theorem t);
std::optional<Theorem> parse_theorem(std::string_view text);

enum class MapMode { Uniform, SinkBiased };

std::string_view to_string(MapMode m);
std::optional<MapMode> parse_map_mode(std::string_view text);

struct HuntConfig {
    std::vector<unsigned> nus{1, 2};
    std::vector<std::size_t> sizes{3, 4, 5, 6};
    std::uint64_t instances = 500;
    std::uint64_t seed = 42;
    Theorem theorem = Theorem::CmFixedPoint;
    std::vector<Rational> gamma_grid = contract::default_gamma_grid();
    std::vector<unsigned> big_n_grid = contract::kDefaultBigNGrid;
    MapMode map_mode = MapMode::SinkBiased;
    /// Probability of sending a point to the designated sink in SinkBiased mode.
    Rational sink_probability{1, 2};
    unsigned threads = 1;
    /// Report a counterexample exactly when the conclusion holds. Exercises the reporting path.
    bool invert_assertion = false;
    bool shrink = true;

    /// Throws std::invalid_argument on an empty or non-positive grid.
    void validate() const;
};

struct OrbitRecord {
    PointIndex start = 0;
    std::vector<PointIndex> entries;
    std::string outcome;
};

struct Counterexample {
    std::uint64_t instance = 0;
    std::string failure;
    gspace::FiniteGSpace space;
    std::vector<PointIndex> image;
    std::optional<contract::ContractionCertificate> certificate;
    std::optional<OrbitRecord> orbit;

    FiniteMap map() const;
};

struct HuntReport {
    HuntConfig config;
    std::uint64_t attempted = 0;
    std::uint64_t generation_failures = 0;
    std::uint64_t hypothesis_satisfied = 0;
    std::uint64_t conclusion_verified = 0;
    std::vector<Counterexample> counterexamples;
    double wall_time_seconds = 0.0;
};

/// Hypothesis and conclusion of the configured theorem on one instance.
struct Evaluation {
    bool hypothesis = false;
    /// Set when the hypothesis holds and the (possibly inverted) assertion fails.
    std::optional<std::string> failure;
    std::optional<contract::ContractionCertificate> certificate;
    std::optional<OrbitRecord> orbit;
};

Evaluation evaluate(const HuntConfig& config, const FiniteMap& map);

/// Uniform point function, or each point sent to a random sink with the configured probability.
FiniteMap draw_map(std::shared_ptr<const gspace::FiniteGSpace> space, std::mt19937_64& rng, MapMode mode,
                   const Rational& sink_probability);

struct Instance {
    unsigned nu = 1;
    gspace::Strategy strategy = gspace::Strategy::MetricPerturb;
    std::optional<FiniteMap> map;  // empty when space generation failed
};

/// Instance `index` of a hunt; depends only on (config, index).
Instance make_instance(const HuntConfig& config, std::uint64_t index);

/// Greedily drops points (keeping the map invariant and the space valid) while
/// the hypothesis still holds and the assertion still fails.
Counterexample shrink_counterexample(const HuntConfig& config, Counterexample cx);

/// Re-evaluates a dumped counterexample in isolation.
bool reproduces(const HuntConfig& config, const Counterexample& cx);

HuntReport run_hunt(const HuntConfig& config);

enum class Format { Text, Machine };

std::string render_report(const HuntReport& report, Format format);
/// Inverse of render_report(..., Format::Machine). Throws io::InputError.
HuntReport parse_report(std::string_view machine);

}  // namespace gfix::harness
