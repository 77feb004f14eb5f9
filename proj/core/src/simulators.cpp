#include "tscsim/simulators.hpp"

#include "tscsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace tscsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double kArmaPhi1Bound = 0.9;
constexpr double kArmaPhi2Floor = -0.9;
// Keeps auto-drawn AR(2) models away from the edge of the stationary triangle.
constexpr double kArmaStationaryMargin = 0.05;
constexpr double kArmaMinSeparation = 0.2;
constexpr int kArmaMaxRedraws = 10000;

std::size_t ceil_fraction(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

template <class T>
void shuffle(std::vector<T>& values, Rng& rng) {
    if (values.size() < 2) {
        return;
    }
    for (std::size_t i = values.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
        std::swap(values[i], values[j]);
    }
}

// Two distinct kinds, uniformly without replacement.
std::pair<ShapeKind, ShapeKind> draw_two_kinds(Rng& rng) {
    const auto first = static_cast<std::size_t>(rng.uniform_int(0, 4));
    auto second = static_cast<std::size_t>(rng.uniform_int(0, 3));
    if (second >= first) {
        ++second;
    }
    return {kAllShapeKinds[first], kAllShapeKinds[second]};
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::max(a.size(), b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        worst = std::max(worst, std::abs(x - y));
    }
    return worst;
}

std::vector<double> draw_ar2(Rng& rng) {
    const double phi1 = rng.uniform(-kArmaPhi1Bound, kArmaPhi1Bound);
    const double phi2 =
        rng.uniform(kArmaPhi2Floor, 1.0 - std::abs(phi1) - kArmaStationaryMargin);
    return {phi1, phi2};
}

Waveform noisy_base(const CommonParams& common, Rng& rng) {
    return white_noise(common.seriesLength, common.noiseSigma, rng);
}

void put(LabeledSeries& series, ShapeKind kind, std::span<const double> shape,
         std::size_t start) {
    add_shape_in_place(series.values, shape, start);
    series.placements.push_back({kind, start, shape.size()});
}

std::vector<LabeledSeries> generate_elastic(const ModelInstance& model, const ElasticParams& p,
                                            Rng& rng) {
    const auto& c = p.common;
    const std::size_t n = c.seriesLength;
    const std::size_t shortest = std::max<std::size_t>(2, ceil_fraction(p.minStretch, n));
    std::vector<LabeledSeries> out;
    out.reserve(c.total_cases());
    for (std::size_t cls = 0; cls < c.nosClasses; ++cls) {
        const ShapeKind kind = model.perClass[cls].kinds.front();
        for (std::size_t i = 0; i < c.casesPerClass[cls]; ++i) {
            LabeledSeries s{noisy_base(c, rng), static_cast<int>(cls), {}};
            const auto length = static_cast<std::size_t>(rng.uniform_int(
                static_cast<std::int64_t>(shortest), static_cast<std::int64_t>(n)));
            const Waveform shape = render_shape({kind, length, c.amplitude});
            put(s, kind, shape, (n - length) / 2);
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<LabeledSeries> generate_interval(const ModelInstance& model,
                                             const IntervalParams& p, Rng& rng) {
    const auto& c = p.common;
    std::vector<LabeledSeries> out;
    out.reserve(c.total_cases());
    for (std::size_t cls = 0; cls < c.nosClasses; ++cls) {
        const ShapeKind kind = model.perClass[cls].kinds.front();
        const Waveform shape = render_shape({kind, model.shapeLength, c.amplitude});
        for (std::size_t i = 0; i < c.casesPerClass[cls]; ++i) {
            LabeledSeries s{noisy_base(c, rng), static_cast<int>(cls), {}};
            for (const auto start : model.intervalStarts) {
                put(s, kind, shape, start);
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<LabeledSeries> generate_shapelet(const ModelInstance& model,
                                             const ShapeletParams& p, Rng& rng) {
    const auto& c = p.common;
    std::vector<LabeledSeries> out;
    out.reserve(c.total_cases());
    for (std::size_t cls = 0; cls < c.nosClasses; ++cls) {
        const ShapeKind kind = model.perClass[cls].kinds.front();
        const Waveform shape = render_shape({kind, model.shapeLength, c.amplitude});
        for (std::size_t i = 0; i < c.casesPerClass[cls]; ++i) {
            LabeledSeries s{noisy_base(c, rng), static_cast<int>(cls), {}};
            for (const auto start :
                 place_disjoint(p.numShapelets, model.shapeLength, c.seriesLength, rng)) {
                put(s, kind, shape, start);
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<LabeledSeries> generate_dictionary(const ModelInstance& model,
                                               const DictionaryParams& p, Rng& rng) {
    const auto& c = p.common;
    std::vector<LabeledSeries> out;
    out.reserve(c.total_cases());
    for (std::size_t cls = 0; cls < c.nosClasses; ++cls) {
        const auto& desc = model.perClass[cls];
        const Waveform shapeA = render_shape({desc.kinds[0], model.shapeLength, c.amplitude});
        const Waveform shapeB = render_shape({desc.kinds[1], model.shapeLength, c.amplitude});
        const std::size_t total = desc.counts[0] + desc.counts[1];
        for (std::size_t i = 0; i < c.casesPerClass[cls]; ++i) {
            LabeledSeries s{noisy_base(c, rng), static_cast<int>(cls), {}};
            const auto starts = place_disjoint(total, model.shapeLength, c.seriesLength, rng);
            // Which slots carry shape A: a uniformly shuffled 0/1 pattern.
            std::vector<int> isB(total, 0);
            std::fill(isB.begin() + static_cast<std::ptrdiff_t>(desc.counts[0]), isB.end(), 1);
            shuffle(isB, rng);
            for (std::size_t k = 0; k < total; ++k) {
                if (isB[k] != 0) {
                    put(s, desc.kinds[1], shapeB, starts[k]);
                } else {
                    put(s, desc.kinds[0], shapeA, starts[k]);
                }
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<LabeledSeries> generate_arma(const ModelInstance& model, const ArmaParams& p,
                                         Rng& rng) {
    const auto& c = p.common;
    const std::size_t n = c.seriesLength;
    std::vector<LabeledSeries> out;
    out.reserve(c.total_cases());
    for (std::size_t cls = 0; cls < c.nosClasses; ++cls) {
        const auto& phi = model.perClass[cls].arCoefficients;
        for (std::size_t i = 0; i < c.casesPerClass[cls]; ++i) {
            const Waveform eps = white_noise(p.burnIn + n, c.noiseSigma, rng);
            std::vector<double> y(eps.size(), 0.0);
            for (std::size_t t = 0; t < y.size(); ++t) {
                double value = eps[t];
                for (std::size_t lag = 1; lag <= phi.size() && lag <= t; ++lag) {
                    value += phi[lag - 1] * y[t - lag];
                }
                y[t] = value;
            }
            LabeledSeries s;
            s.label = static_cast<int>(cls);
            s.values.assign(y.begin() + static_cast<std::ptrdiff_t>(p.burnIn), y.end());
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace

std::string_view to_string(SimulatorKind kind) {
    switch (kind) {
    case SimulatorKind::Elastic:
        return "elastic";
    case SimulatorKind::Interval:
        return "interval";
    case SimulatorKind::Shapelet:
        return "shapelet";
    case SimulatorKind::Dictionary:
        return "dictionary";
    case SimulatorKind::Arma:
        return "arma";
    }
    return "unknown";
}

SimulatorKind simulator_kind_from_string(std::string_view name) {
    for (const auto kind : kAllSimulatorKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw ConfigError("unknown simulator '" + std::string(name) + "'");
}

std::size_t CommonParams::total_cases() const {
    return std::accumulate(casesPerClass.begin(), casesPerClass.end(), std::size_t{0});
}

void CommonParams::validate() const {
    if (nosClasses != 2) {
        throw ConfigError("only two-class problems are supported");
    }
    if (casesPerClass.size() != nosClasses) {
        throw ConfigError("casesPerClass must list one count per class");
    }
    if (seriesLength < 1) {
        throw ConfigError("seriesLength must be positive");
    }
    for (const auto count : casesPerClass) {
        if (count == 0) {
            throw ConfigError("every class needs at least one case");
        }
    }
    if (!(trainProp > 0.0 && trainProp < 1.0)) {
        throw ConfigError("trainProp must lie in (0, 1)");
    }
    if (trainProp * static_cast<double>(total_cases()) < static_cast<double>(nosClasses)) {
        throw ConfigError("trainProp leaves fewer train cases than classes");
    }
    if (!(noiseSigma >= 0.0) || !std::isfinite(noiseSigma)) {
        throw ConfigError("noiseSigma must be finite and non-negative");
    }
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw ConfigError("amplitude must be finite and positive");
    }
}

std::size_t IntervalParams::interval_length() const {
    const std::size_t denominator = numIntervals * shapeToNoiseRatio;
    return denominator == 0 ? 0 : common.seriesLength / denominator;
}

SimulatorKind kind_of(const FamilyParams& params) {
    return std::visit(
        Overloaded{
            [](const ElasticParams&) { return SimulatorKind::Elastic; },
            [](const IntervalParams&) { return SimulatorKind::Interval; },
            [](const ShapeletParams&) { return SimulatorKind::Shapelet; },
            [](const DictionaryParams&) { return SimulatorKind::Dictionary; },
            [](const ArmaParams&) { return SimulatorKind::Arma; },
        },
        params);
}

FamilyParams default_params(SimulatorKind kind) {
    switch (kind) {
    case SimulatorKind::Elastic:
        return ElasticParams{};
    case SimulatorKind::Interval:
        return IntervalParams{};
    case SimulatorKind::Shapelet:
        return ShapeletParams{};
    case SimulatorKind::Dictionary:
        return DictionaryParams{};
    case SimulatorKind::Arma:
        return ArmaParams{};
    }
    throw ConfigError("unknown simulator kind");
}

const CommonParams& common_of(const FamilyParams& params) {
    return std::visit([](const auto& p) -> const CommonParams& { return p.common; }, params);
}

CommonParams& common_of(FamilyParams& params) {
    return std::visit([](auto& p) -> CommonParams& { return p.common; }, params);
}

void validate_params(const FamilyParams& params) {
    const CommonParams& c = common_of(params);
    c.validate();
    const std::size_t n = c.seriesLength;
    std::visit(
        Overloaded{
            [&](const ElasticParams& p) {
                if (n < 10) {
                    throw ConfigError("elastic simulator needs seriesLength >= 10");
                }
                if (!(p.minStretch > 0.0 && p.minStretch <= 1.0)) {
                    throw ConfigError("elastic minStretch must lie in (0, 1]");
                }
            },
            [&](const IntervalParams& p) {
                if (p.numIntervals == 0 || p.shapeToNoiseRatio == 0) {
                    throw ConfigError("interval simulator needs numIntervals and "
                                      "shapeToNoiseRatio >= 1");
                }
                const std::size_t length = p.interval_length();
                if (length < 2) {
                    throw ConfigError("interval length floor(" + std::to_string(n) + "/(" +
                                      std::to_string(p.numIntervals) + "*" +
                                      std::to_string(p.shapeToNoiseRatio) + ")) = " +
                                      std::to_string(length) + " is below 2");
                }
                if (p.numIntervals * length > n) {
                    throw ConfigError("intervals cannot fit without overlap");
                }
            },
            [&](const ShapeletParams& p) {
                if (p.numShapelets == 0) {
                    throw ConfigError("shapelet simulator needs numShapelets >= 1");
                }
                if (p.shapeletLength < 2) {
                    throw ConfigError("shapeletLength must be at least 2");
                }
                if (p.numShapelets * p.shapeletLength > n) {
                    throw ConfigError("shapelets of length " + std::to_string(p.shapeletLength) +
                                      " do not fit in series of length " + std::to_string(n));
                }
            },
            [&](const DictionaryParams& p) {
                if (p.shapeLength < 2) {
                    throw ConfigError("dictionary shapeLength must be at least 2");
                }
                if (p.shapeletsPerClass[0] + p.shapeletsPerClass[1] == 0) {
                    throw ConfigError("dictionary counts must not both be zero");
                }
                if ((p.shapeletsPerClass[0] + p.shapeletsPerClass[1]) * p.shapeLength > n) {
                    throw ConfigError("dictionary shapes cannot be packed without overlap");
                }
            },
            [&](const ArmaParams& p) {
                if (p.coefficients) {
                    for (const auto& phi : *p.coefficients) {
                        if (!is_stationary(phi)) {
                            throw ConfigError("AR coefficients are not stationary");
                        }
                    }
                }
            },
        },
        params);
}

Waveform white_noise(std::size_t length, double sigma, Rng& rng) {
    Waveform out(length, 0.0);
    if (sigma == 0.0) {
        return out;
    }
    for (auto& v : out) {
        v = sigma * rng.normal();
    }
    return out;
}

bool is_stationary(std::span<const double> phi) {
    std::vector<double> a(phi.begin(), phi.end());
    for (std::size_t k = a.size(); k > 0; --k) {
        const double reflection = a[k - 1];
        if (!std::isfinite(reflection) || std::abs(reflection) >= 1.0) {
            return false;
        }
        const double scale = 1.0 - reflection * reflection;
        std::vector<double> next(k - 1);
        for (std::size_t i = 1; i < k; ++i) {
            next[i - 1] = (a[i - 1] + reflection * a[k - i - 1]) / scale;
        }
        a = std::move(next);
    }
    return true;
}

std::vector<std::size_t> place_disjoint(std::size_t count, std::size_t length,
                                        std::size_t seriesLength, Rng& rng) {
    if (count * length > seriesLength) {
        throw ConfigError("cannot place " + std::to_string(count) + " blocks of length " +
                          std::to_string(length) + " in " + std::to_string(seriesLength));
    }
    if (count == 0) {
        return {};
    }
    // count distinct slots out of slack + count, then undo the stars-and-bars shift.
    const std::size_t slack = seriesLength - count * length;
    std::vector<std::size_t> slots(slack + count);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(
            static_cast<std::int64_t>(i), static_cast<std::int64_t>(slots.size() - 1)));
        std::swap(slots[i], slots[j]);
    }
    slots.resize(count);
    std::sort(slots.begin(), slots.end());
    std::vector<std::size_t> starts(count);
    for (std::size_t i = 0; i < count; ++i) {
        starts[i] = slots[i] - i + i * length;
    }
    return starts;
}

ModelInstance instantiate_model(const FamilyParams& params, Rng& rng) {
    validate_params(params);
    ModelInstance model;
    model.simulator = kind_of(params);
    model.perClass.resize(2);
    std::visit(
        Overloaded{
            [&](const ElasticParams&) {
                const auto [a, b] = draw_two_kinds(rng);
                model.perClass[0].kinds = {a};
                model.perClass[1].kinds = {b};
            },
            [&](const IntervalParams& p) {
                const auto [a, b] = draw_two_kinds(rng);
                model.perClass[0].kinds = {a};
                model.perClass[1].kinds = {b};
                model.shapeLength = p.interval_length();
                model.intervalStarts =
                    place_disjoint(p.numIntervals, model.shapeLength, p.common.seriesLength, rng);
            },
            [&](const ShapeletParams& p) {
                const auto [a, b] = draw_two_kinds(rng);
                model.perClass[0].kinds = {a};
                model.perClass[1].kinds = {b};
                model.shapeLength = p.shapeletLength;
            },
            [&](const DictionaryParams& p) {
                const auto [a, b] = draw_two_kinds(rng);
                model.shapeLength = p.shapeLength;
                model.perClass[0].kinds = {a, b};
                model.perClass[0].counts = {p.shapeletsPerClass[0], p.shapeletsPerClass[1]};
                model.perClass[1].kinds = {a, b};
                model.perClass[1].counts = {p.shapeletsPerClass[1], p.shapeletsPerClass[0]};
            },
            [&](const ArmaParams& p) {
                if (p.coefficients) {
                    model.perClass[0].arCoefficients = (*p.coefficients)[0];
                    model.perClass[1].arCoefficients = (*p.coefficients)[1];
                    return;
                }
                model.perClass[0].arCoefficients = draw_ar2(rng);
                for (int attempt = 0;; ++attempt) {
                    if (attempt == kArmaMaxRedraws) {
                        throw GenerationError("could not draw separated AR models");
                    }
                    auto candidate = draw_ar2(rng);
                    if (linf_distance(candidate, model.perClass[0].arCoefficients) >=
                        kArmaMinSeparation) {
                        model.perClass[1].arCoefficients = std::move(candidate);
                        break;
                    }
                }
            },
        },
        params);
    return model;
}

std::vector<LabeledSeries> generate_cases(const ModelInstance& model,
                                          const FamilyParams& params, Rng& rng) {
    if (model.simulator != kind_of(params)) {
        throw ConfigError("model and parameter family disagree");
    }
    return std::visit(
        Overloaded{
            [&](const ElasticParams& p) { return generate_elastic(model, p, rng); },
            [&](const IntervalParams& p) { return generate_interval(model, p, rng); },
            [&](const ShapeletParams& p) { return generate_shapelet(model, p, rng); },
            [&](const DictionaryParams& p) { return generate_dictionary(model, p, rng); },
            [&](const ArmaParams& p) { return generate_arma(model, p, rng); },
        },
        params);
}

DatasetPair split_train_test(std::vector<LabeledSeries> cases, double trainProp, Rng& rng) {
    if (!(trainProp > 0.0 && trainProp < 1.0)) {
        throw ConfigError("trainProp must lie in (0, 1)");
    }
    int maxLabel = -1;
    for (const auto& s : cases) {
        if (s.label < 0) {
            throw ConfigError("negative class label");
        }
        maxLabel = std::max(maxLabel, s.label);
    }
    std::vector<std::vector<std::size_t>> byClass(static_cast<std::size_t>(maxLabel + 1));
    for (std::size_t i = 0; i < cases.size(); ++i) {
        byClass[static_cast<std::size_t>(cases[i].label)].push_back(i);
    }
    std::vector<char> inTrain(cases.size(), 0);
    for (std::size_t cls = 0; cls < byClass.size(); ++cls) {
        auto& members = byClass[cls];
        if (members.empty()) {
            throw ConfigError("class " + std::to_string(cls) + " has no cases");
        }
        const auto take = static_cast<std::size_t>(
            std::floor(trainProp * static_cast<double>(members.size()) + 0.5));
        if (take == 0) {
            throw ConfigError("trainProp gives class " + std::to_string(cls) +
                              " no training cases");
        }
        shuffle(members, rng);
        for (std::size_t k = 0; k < take; ++k) {
            inTrain[members[k]] = 1;
        }
    }
    DatasetPair out;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        (inTrain[i] != 0 ? out.train : out.test).push_back(std::move(cases[i]));
    }
    return out;
}

DatasetPair simulate(const FamilyParams& params, Rng& rng) {
    ModelInstance model = instantiate_model(params, rng);
    auto cases = generate_cases(model, params, rng);
    DatasetPair out = split_train_test(std::move(cases), common_of(params).trainProp, rng);
    out.meta.simulator = model.simulator;
    out.meta.params = params;
    out.meta.name = std::string(to_string(model.simulator));
    if (const auto* dict = std::get_if<DictionaryParams>(&params)) {
        if (dict->shapeletsPerClass[0] == dict->shapeletsPerClass[1]) {
            out.warnings.push_back(
                "degenerate dictionary configuration: equal shape counts make both "
                "classes identically distributed");
        }
    }
    out.model = std::move(model);
    return out;
}

DatasetPair simulate_elastic(const ElasticParams& params, Rng& rng) {
    return simulate(FamilyParams{params}, rng);
}

DatasetPair simulate_interval(const IntervalParams& params, Rng& rng) {
    return simulate(FamilyParams{params}, rng);
}

DatasetPair simulate_shapelet(const ShapeletParams& params, Rng& rng) {
    return simulate(FamilyParams{params}, rng);
}

DatasetPair simulate_dictionary(const DictionaryParams& params, Rng& rng) {
    return simulate(FamilyParams{params}, rng);
}

DatasetPair simulate_arma(const ArmaParams& params, Rng& rng) {
    return simulate(FamilyParams{params}, rng);
}

DatasetPair generate_resample(const FamilyParams& params, std::uint64_t masterSeed,
                              std::uint64_t resample) {
    const auto kind = kind_of(params);
    const std::uint64_t seed =
        child_seed(masterSeed, static_cast<std::uint64_t>(kind), resample);
    Rng rng(seed);
    DatasetPair out = simulate(params, rng);
    out.meta.masterSeed = masterSeed;
    out.meta.resample = resample;
    out.meta.seed = seed;
    out.meta.name = std::string(to_string(kind)) + "_" + std::to_string(resample);
    return out;
}

} // namespace tscsim
