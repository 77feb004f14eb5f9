#pragma once

#include "tscsim/random.hpp"
#include "tscsim/shapes.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tscsim {

enum class SimulatorKind : int {
    Elastic = 0,
    Interval = 1,
    Shapelet = 2,
    Dictionary = 3,
    Arma = 4,
};

inline constexpr std::array<SimulatorKind, 5> kAllSimulatorKinds{
    SimulatorKind::Elastic, SimulatorKind::Interval, SimulatorKind::Shapelet,
    SimulatorKind::Dictionary, SimulatorKind::Arma};

std::string_view to_string(SimulatorKind kind);
SimulatorKind simulator_kind_from_string(std::string_view name);

/// Parameters shared by every simulator family. Only two-class problems are
/// supported.
struct CommonParams {
    std::size_t nosClasses = 2;
    std::size_t seriesLength = 100;
    std::vector<std::size_t> casesPerClass{50, 50};
    double trainProp = 0.1;
    double noiseSigma = 1.0;
    double amplitude = 1.0;

    std::size_t total_cases() const;
    /// Throws ConfigError when the block cannot produce a valid split.
    void validate() const;
};

struct ElasticParams {
    CommonParams common{2, 100, {100, 100}, 0.1, 1.0, 1.0};
    /// Shortest stretch as a fraction of the series length.
    double minStretch = 0.2;
};

struct IntervalParams {
    CommonParams common{2, 1000, {200, 200}, 0.1, 1.0, 1.0};
    std::size_t numIntervals = 3;
    std::size_t shapeToNoiseRatio = 10;

    /// floor(seriesLength / (numIntervals * shapeToNoiseRatio)); 33 at defaults.
    std::size_t interval_length() const;
};

struct ShapeletParams {
    CommonParams common{2, 300, {50, 50}, 0.1, 1.0, 1.0};
    std::size_t numShapelets = 1;
    std::size_t shapeletLength = 29;
};

struct DictionaryParams {
    CommonParams common{2, 1500, {200, 200}, 0.1, 1.0, 1.0};
    /// Class 0 carries (first, second) occurrences of the two model shapes,
    /// class 1 the swapped pair.
    std::array<std::size_t, 2> shapeletsPerClass{5, 10};
    std::size_t shapeLength = 29;
};

struct ArmaParams {
    CommonParams common{2, 200, {100, 100}, 0.1, 1.0, 1.0};
    /// Per-class AR coefficients; auto-drawn AR(2) per model when empty.
    std::optional<std::array<std::vector<double>, 2>> coefficients;
    std::size_t burnIn = 100;
};

using FamilyParams =
    std::variant<ElasticParams, IntervalParams, ShapeletParams, DictionaryParams, ArmaParams>;

SimulatorKind kind_of(const FamilyParams& params);
FamilyParams default_params(SimulatorKind kind);
const CommonParams& common_of(const FamilyParams& params);
CommonParams& common_of(FamilyParams& params);

/// Checks everything that can be known before drawing a model. Throws
/// ConfigError.
void validate_params(const FamilyParams& params);

/// One class's generative description inside a model instance.
struct ClassModel {
    /// Elastic, Interval, Shapelet: one kind. Dictionary: the (A, B) pair.
    std::vector<ShapeKind> kinds;
    /// Dictionary only: occurrences of kinds[0], kinds[1].
    std::vector<std::size_t> counts;
    /// Arma only.
    std::vector<double> arCoefficients;
};

struct ModelInstance {
    SimulatorKind simulator = SimulatorKind::Elastic;
    std::vector<ClassModel> perClass;
    /// Interval family: sorted start indices shared by both classes.
    std::vector<std::size_t> intervalStarts;
    /// Interval, Shapelet, Dictionary: rendered shape length.
    std::size_t shapeLength = 0;
};

/// Where a shape was written into a series; generation trace only.
struct Placement {
    ShapeKind kind = ShapeKind::Triangle;
    std::size_t start = 0;
    std::size_t length = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct LabeledSeries {
    Waveform values;
    int label = 0;
    /// Filled by the simulators; empty for series read back from disk.
    std::vector<Placement> placements;
};

struct DatasetMeta {
    SimulatorKind simulator = SimulatorKind::Elastic;
    std::optional<FamilyParams> params;
    std::uint64_t masterSeed = 0;
    std::uint64_t resample = 0;
    std::uint64_t seed = 0;
    std::string name = "dataset";
};

struct DatasetPair {
    std::vector<LabeledSeries> train;
    std::vector<LabeledSeries> test;
    DatasetMeta meta;
    std::optional<ModelInstance> model;
    std::vector<std::string> warnings;
};

/// i.i.d. N(0, sigma^2) draws.
Waveform white_noise(std::size_t length, double sigma, Rng& rng);

/// True when every root of 1 - sum phi_i z^i lies strictly outside the unit
/// circle (checked by the step-down recursion on reflection coefficients).
bool is_stationary(std::span<const double> phi);

/// Draws one random model. Classes never share a shape kind, except the
/// dictionary family where both classes use the same pair with swapped counts.
ModelInstance instantiate_model(const FamilyParams& params, Rng& rng);

/// Generates casesPerClass series per class from a fixed model, class 0 first.
std::vector<LabeledSeries> generate_cases(const ModelInstance& model,
                                          const FamilyParams& params, Rng& rng);

/// Stratified split: round-half-up(trainProp * n_c) cases of each class go to
/// train, chosen uniformly; both halves keep the input order.
DatasetPair split_train_test(std::vector<LabeledSeries> cases, double trainProp, Rng& rng);

DatasetPair simulate_elastic(const ElasticParams& params, Rng& rng);
DatasetPair simulate_interval(const IntervalParams& params, Rng& rng);
DatasetPair simulate_shapelet(const ShapeletParams& params, Rng& rng);
DatasetPair simulate_dictionary(const DictionaryParams& params, Rng& rng);
DatasetPair simulate_arma(const ArmaParams& params, Rng& rng);

/// Dispatches on the parameter family.
DatasetPair simulate(const FamilyParams& params, Rng& rng);

/// Generates resample `resample` of an experiment: seeds a fresh generator
/// with child_seed(masterSeed, kind, resample) and records provenance.
DatasetPair generate_resample(const FamilyParams& params, std::uint64_t masterSeed,
                              std::uint64_t resample);

/// Uniform random placement of `count` non-overlapping blocks of `length`
/// samples in a series of `seriesLength`. Every arrangement of the blocks is
/// equally likely; blocks may abut. Returns sorted starts.
std::vector<std::size_t> place_disjoint(std::size_t count, std::size_t length,
                                        std::size_t seriesLength, Rng& rng);

} // namespace tscsim
