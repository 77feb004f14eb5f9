#include "oracles.hpp"

#include "tscsim/dataset_io.hpp"
#include "tscsim/error.hpp"
#include "tscsim/simulators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace tscsim;

namespace {

double lag1_autocorrelation(const Waveform& y) {
    const double n = static_cast<double>(y.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        den += (y[t] - mean) * (y[t] - mean);
        if (t > 0) {
            num += (y[t] - mean) * (y[t - 1] - mean);
        }
    }
    return num / den;
}

std::size_t count_label(const std::vector<LabeledSeries>& s, int label) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [&](const auto& x) { return x.label == label; }));
}

std::string export_arff(const DatasetPair& ds) {
    std::ostringstream out;
    write_arff(out, "train", ds.train);
    write_arff(out, "test", ds.test);
    return out.str();
}

template <class P>
P zero_noise(P p) {
    p.common.noiseSigma = 0.0;
    return p;
}

} // namespace

TEST(WhiteNoise, ZeroSigmaIsZero) {
    Rng rng(3);
    EXPECT_EQ(white_noise(5, 0.0, rng), Waveform(5, 0.0));
}

TEST(WhiteNoise, MomentsAtLargeLength) {
    Rng rng(42);
    const auto w = white_noise(100000, 1.0, rng);
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / 1e5;
    double ss = 0.0;
    for (const double v : w) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (1e5 - 1.0));
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_GE(sd, 0.99);
    EXPECT_LE(sd, 1.01);
}

TEST(WhiteNoise, Deterministic) {
    Rng a(11);
    Rng b(11);
    EXPECT_EQ(white_noise(64, 2.5, a), white_noise(64, 2.5, b));
}

TEST(ChildSeed, FrozenDerivation) {
    // First SplitMix64 output from state 0, the published reference value.
    EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFULL);
    // Stored master seeds must keep reproducing the same datasets.
    EXPECT_EQ(child_seed(42, 0, 0), 14149931527633564892ULL);
    EXPECT_NE(child_seed(42, 0, 0), child_seed(42, 0, 1));
    EXPECT_NE(child_seed(42, 0, 0), child_seed(42, 1, 0));
    EXPECT_NE(child_seed(42, 0, 0), child_seed(43, 0, 0));
}

TEST(InstantiateModel, DictionarySwapsCounts) {
    Rng rng(5);
    const auto model = instantiate_model(DictionaryParams{}, rng);
    ASSERT_EQ(model.perClass.size(), 2u);
    EXPECT_EQ(model.perClass[0].kinds, model.perClass[1].kinds);
    EXPECT_NE(model.perClass[0].kinds[0], model.perClass[0].kinds[1]);
    EXPECT_EQ(model.perClass[0].counts, (std::vector<std::size_t>{5, 10}));
    EXPECT_EQ(model.perClass[1].counts, (std::vector<std::size_t>{10, 5}));
}

TEST(InstantiateModel, ElasticClassesUseDistinctKinds) {
    std::set<std::pair<int, int>> seen;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        Rng rng(seed);
        const auto model = instantiate_model(ElasticParams{}, rng);
        const auto a = model.perClass[0].kinds.at(0);
        const auto b = model.perClass[1].kinds.at(0);
        ASSERT_NE(a, b);
        seen.emplace(static_cast<int>(a), static_cast<int>(b));
    }
    // 20 ordered pairs of distinct kinds exist; all should turn up.
    EXPECT_EQ(seen.size(), 20u);
}

TEST(InstantiateModel, IntervalStartsAreSharedAndDisjoint) {
    IntervalParams p;
    Rng rng(9);
    const auto model = instantiate_model(p, rng);
    EXPECT_EQ(model.shapeLength, 33u);
    ASSERT_EQ(model.intervalStarts.size(), 3u);
    for (std::size_t i = 1; i < 3; ++i) {
        EXPECT_GE(model.intervalStarts[i], model.intervalStarts[i - 1] + 33);
    }
    EXPECT_LE(model.intervalStarts.back() + 33, 1000u);
}

TEST(InstantiateModel, ReproducibleFromSameState) {
    Rng a(77);
    Rng b(77);
    const auto ma = instantiate_model(IntervalParams{}, a);
    const auto mb = instantiate_model(IntervalParams{}, b);
    EXPECT_EQ(ma.intervalStarts, mb.intervalStarts);
    EXPECT_EQ(ma.perClass[0].kinds, mb.perClass[0].kinds);
}

TEST(PlaceDisjoint, CoversFullSupportAndNeverOverlaps) {
    Rng rng(1);
    // 2 blocks of 3 in 10 cells: C(6, 2) = 15 arrangements, all equally likely.
    std::map<std::vector<std::size_t>, int> seen;
    const int trials = 15000;
    for (int trial = 0; trial < trials; ++trial) {
        const auto starts = place_disjoint(2, 3, 10, rng);
        ASSERT_EQ(starts.size(), 2u);
        ASSERT_GE(starts[1], starts[0] + 3);
        ASSERT_LE(starts[1] + 3, 10u);
        ++seen[starts];
    }
    EXPECT_EQ(seen.size(), 15u);
    for (const auto& [starts, count] : seen) {
        EXPECT_NEAR(count, trials / 15, 150);
    }
    for (int trial = 0; trial < 200; ++trial) {
        const auto starts = place_disjoint(4, 10, 60, rng);
        for (std::size_t i = 1; i < starts.size(); ++i) {
            ASSERT_GE(starts[i], starts[i - 1] + 10);
        }
        ASSERT_LE(starts.back() + 10, 60u);
    }
    EXPECT_EQ(place_disjoint(6, 10, 60, rng), (std::vector<std::size_t>{0, 10, 20, 30, 40, 50}));
    EXPECT_THROW(place_disjoint(7, 10, 60, rng), ConfigError);
}

TEST(SimulateElastic, DefaultSizes) {
    Rng rng(1);
    const auto ds = simulate_elastic(ElasticParams{}, rng);
    EXPECT_EQ(ds.train.size(), 20u);
    EXPECT_EQ(ds.test.size(), 180u);
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            EXPECT_EQ(s.values.size(), 100u);
        }
    }
}

TEST(SimulateElastic, ZeroNoiseFullStretchEqualsShape) {
    auto p = zero_noise(ElasticParams{});
    p.minStretch = 1.0;
    Rng rng(4);
    const auto ds = simulate_elastic(p, rng);
    const auto kind0 = ds.model->perClass[0].kinds[0];
    const auto expected = render_shape({kind0, 100, 1.0});
    for (const auto& s : ds.train) {
        if (s.label == 0) {
            EXPECT_EQ(s.values, expected);
        }
    }
}

TEST(SimulateElastic, StretchWithinRangeAndCentred) {
    Rng rng(8);
    const auto ds = simulate_elastic(ElasticParams{}, rng);
    for (const auto& s : ds.test) {
        ASSERT_EQ(s.placements.size(), 1u);
        const auto& p = s.placements.front();
        EXPECT_GE(p.length, 20u);
        EXPECT_LE(p.length, 100u);
        EXPECT_EQ(p.start, (100 - p.length) / 2);
    }
}

TEST(SimulateElastic, SameSeedSameBytes) {
    const auto a = generate_resample(ElasticParams{}, 42, 3);
    const auto b = generate_resample(ElasticParams{}, 42, 3);
    EXPECT_EQ(export_arff(a), export_arff(b));
    const auto c = generate_resample(ElasticParams{}, 42, 4);
    EXPECT_NE(export_arff(a), export_arff(c));
}

TEST(SimulateInterval, DefaultShapeAndNoiseCounts) {
    Rng rng(2);
    const auto ds = simulate_interval(IntervalParams{}, rng);
    EXPECT_EQ(ds.train.size() + ds.test.size(), 400u);
    for (const auto& s : ds.train) {
        std::size_t shapeSamples = 0;
        for (const auto& p : s.placements) {
            EXPECT_EQ(p.length, 33u);
            shapeSamples += p.length;
        }
        EXPECT_EQ(shapeSamples, 99u);
        EXPECT_EQ(s.values.size() - shapeSamples, 901u);
    }
}

TEST(SimulateInterval, ZeroNoiseSameClassSeriesIdentical) {
    Rng rng(3);
    const auto ds = simulate_interval(zero_noise(IntervalParams{}), rng);
    const LabeledSeries* first[2] = {nullptr, nullptr};
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            auto& ref = first[s.label];
            if (ref == nullptr) {
                ref = &s;
            } else {
                EXPECT_EQ(s.values, ref->values);
            }
        }
    }
    ASSERT_NE(first[0], nullptr);
    ASSERT_NE(first[1], nullptr);
    EXPECT_NE(first[0]->values, first[1]->values);
}

TEST(SimulateInterval, PositionsSharedAcrossResample) {
    Rng rng(12);
    const auto ds = simulate_interval(IntervalParams{}, rng);
    std::vector<std::size_t> reference;
    for (const auto& p : ds.train.front().placements) {
        reference.push_back(p.start);
    }
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            std::vector<std::size_t> starts;
            for (const auto& p : s.placements) {
                starts.push_back(p.start);
            }
            EXPECT_EQ(starts, reference);
        }
    }
}

TEST(SimulateInterval, ManyShortIntervalsStillPlaceable) {
    // floor(1000 / 310) = 3 samples per interval; 93 samples fit easily.
    IntervalParams p;
    p.numIntervals = 31;
    Rng rng(6);
    const auto model = instantiate_model(p, rng);
    EXPECT_EQ(model.shapeLength, 3u);
    ASSERT_EQ(model.intervalStarts.size(), 31u);
    for (std::size_t i = 1; i < 31; ++i) {
        EXPECT_GE(model.intervalStarts[i], model.intervalStarts[i - 1] + 3);
    }
}

TEST(SimulateInterval, InfeasibleConfigurationRejected) {
    IntervalParams p;
    p.numIntervals = 40;
    p.shapeToNoiseRatio = 30; // floor(1000 / 1200) = 0
    Rng rng(1);
    EXPECT_THROW(simulate_interval(p, rng), ConfigError);
    IntervalParams tight;
    tight.common.seriesLength = 20;
    tight.numIntervals = 3;
    tight.shapeToNoiseRatio = 3; // length 2, fits
    EXPECT_NO_THROW(simulate_interval(tight, rng));
}

TEST(SimulateShapelet, DefaultSizes) {
    Rng rng(1);
    const auto ds = simulate_shapelet(ShapeletParams{}, rng);
    EXPECT_EQ(ds.train.size(), 10u);
    EXPECT_EQ(ds.test.size(), 90u);
    EXPECT_EQ(ds.train.front().values.size(), 300u);
}

TEST(SimulateShapelet, StartCoversFullRange) {
    ShapeletParams p;
    p.common.casesPerClass = {5000, 5000};
    p.common.noiseSigma = 0.0;
    Rng rng(21);
    const auto ds = simulate_shapelet(p, rng);
    std::vector<int> hits(272, 0);
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            ASSERT_EQ(s.placements.size(), 1u);
            ASSERT_LE(s.placements[0].start, 271u);
            ++hits[s.placements[0].start];
        }
    }
    EXPECT_EQ(std::count(hits.begin(), hits.end(), 0), 0);
}

TEST(SimulateShapelet, ZeroNoiseSingleRun) {
    Rng rng(5);
    const auto ds = simulate_shapelet(zero_noise(ShapeletParams{}), rng);
    for (const auto& s : ds.test) {
        std::size_t first = s.values.size();
        std::size_t last = 0;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (s.values[i] != 0.0) {
                first = std::min(first, i);
                last = i;
            }
        }
        ASSERT_LT(first, s.values.size());
        EXPECT_LE(last - first + 1, 29u);
    }
}

TEST(SimulateShapelet, TooLongShapeletRejected) {
    ShapeletParams p;
    p.shapeletLength = 301;
    Rng rng(1);
    EXPECT_THROW(simulate_shapelet(p, rng), ConfigError);
}

TEST(SimulateDictionary, DefaultCounts) {
    DictionaryParams p;
    p.common.casesPerClass = {20, 20};
    Rng rng(3);
    const auto ds = simulate_dictionary(p, rng);
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            ASSERT_EQ(s.placements.size(), 15u);
            std::size_t samples = 0;
            std::size_t countA = 0;
            auto sorted = s.placements;
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& x, const auto& y) { return x.start < y.start; });
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                samples += sorted[i].length;
                countA += sorted[i].kind == ds.model->perClass[0].kinds[0] ? 1 : 0;
                if (i > 0) {
                    ASSERT_GE(sorted[i].start, sorted[i - 1].start + sorted[i - 1].length);
                }
            }
            EXPECT_EQ(samples, 435u);
            EXPECT_EQ(countA, s.label == 0 ? 5u : 10u);
        }
    }
}

TEST(SimulateDictionary, ZeroNoiseCountingRecoversSignature) {
    DictionaryParams p = zero_noise(DictionaryParams{});
    p.common.casesPerClass = {20, 20};
    Rng rng(13);
    const auto ds = simulate_dictionary(p, rng);
    const auto& model = *ds.model;
    const auto a = render_shape({model.perClass[0].kinds[0], 29, 1.0});
    const auto b = render_shape({model.perClass[0].kinds[1], 29, 1.0});
    for (const auto& s : ds.test) {
        const auto [ca, cb] = oracle::count_occurrences(s.values, a, b);
        if (s.label == 0) {
            EXPECT_EQ(ca, 5u);
            EXPECT_EQ(cb, 10u);
        } else {
            EXPECT_EQ(ca, 10u);
            EXPECT_EQ(cb, 5u);
        }
    }
}

TEST(SimulateDictionary, SymmetricCountsWarn) {
    DictionaryParams p;
    p.shapeletsPerClass = {1, 1};
    p.common.casesPerClass = {10, 10};
    Rng rng(1);
    const auto ds = simulate_dictionary(p, rng);
    ASSERT_EQ(ds.warnings.size(), 1u);
    EXPECT_NE(ds.warnings[0].find("degenerate"), std::string::npos);
    Rng rng2(1);
    EXPECT_TRUE(simulate_dictionary(DictionaryParams{}, rng2).warnings.empty());
}

TEST(SimulateDictionary, InfeasiblePackingRejected) {
    DictionaryParams p;
    p.common.seriesLength = 400; // 15 * 29 = 435 > 400
    Rng rng(1);
    EXPECT_THROW(simulate_dictionary(p, rng), ConfigError);
}

TEST(Stationarity, KnownRegions) {
    EXPECT_TRUE(is_stationary(std::vector<double>{}));
    EXPECT_TRUE(is_stationary(std::vector<double>{0.0}));
    EXPECT_TRUE(is_stationary(std::vector<double>{0.9}));
    EXPECT_FALSE(is_stationary(std::vector<double>{1.1}));
    EXPECT_FALSE(is_stationary(std::vector<double>{1.0}));
    EXPECT_FALSE(is_stationary(std::vector<double>{-1.0}));
    // AR(2) triangle: phi1 + phi2 < 1, phi2 - phi1 < 1, |phi2| < 1.
    EXPECT_TRUE(is_stationary(std::vector<double>{0.5, 0.3}));
    EXPECT_FALSE(is_stationary(std::vector<double>{0.5, 0.6}));
    EXPECT_FALSE(is_stationary(std::vector<double>{-0.5, 0.6}));
    EXPECT_TRUE(is_stationary(std::vector<double>{1.5, -0.7}));
    EXPECT_FALSE(is_stationary(std::vector<double>{0.0, -1.0}));
    // (1 - 0.5z)^3 expands to phi = {1.5, -0.75, 0.125}; roots at z = 2.
    EXPECT_TRUE(is_stationary(std::vector<double>{1.5, -0.75, 0.125}));
    // (1 - 1.25z)(1 - 0.5z)^2: one root inside the unit circle.
    EXPECT_FALSE(is_stationary(std::vector<double>{2.25, -1.5, 0.3125}));
}

TEST(SimulateArma, WhiteNoiseWhenPhiZero) {
    ArmaParams p;
    p.common.seriesLength = 10000;
    p.common.casesPerClass = {2, 2};
    p.common.trainProp = 0.5;
    p.coefficients = std::array<std::vector<double>, 2>{std::vector<double>{0.0},
                                                        std::vector<double>{0.9}};
    Rng rng(4);
    const auto ds = simulate_arma(p, rng);
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            const double r1 = lag1_autocorrelation(s.values);
            if (s.label == 0) {
                EXPECT_LT(std::abs(r1), 0.05);
            } else {
                EXPECT_GE(r1, 0.85);
                EXPECT_LE(r1, 0.95);
            }
        }
    }
}

TEST(SimulateArma, UnitRootRejected) {
    ArmaParams p;
    p.coefficients = std::array<std::vector<double>, 2>{std::vector<double>{1.1},
                                                        std::vector<double>{0.2}};
    Rng rng(1);
    EXPECT_THROW(simulate_arma(p, rng), ConfigError);
}

TEST(SimulateArma, AutoDrawnModelsSeparatedAndStationary) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const auto model = instantiate_model(ArmaParams{}, rng);
        const auto& a = model.perClass[0].arCoefficients;
        const auto& b = model.perClass[1].arCoefficients;
        ASSERT_EQ(a.size(), 2u);
        ASSERT_EQ(b.size(), 2u);
        EXPECT_TRUE(is_stationary(a));
        EXPECT_TRUE(is_stationary(b));
        EXPECT_GE(std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])), 0.2);
    }
}

TEST(SplitTrainTest, StratifiedTenPercent) {
    std::vector<LabeledSeries> cases;
    for (int i = 0; i < 200; ++i) {
        cases.push_back({Waveform{static_cast<double>(i)}, i < 100 ? 0 : 1, {}});
    }
    Rng rng(7);
    const auto ds = split_train_test(cases, 0.1, rng);
    EXPECT_EQ(count_label(ds.train, 0), 10u);
    EXPECT_EQ(count_label(ds.train, 1), 10u);
    EXPECT_EQ(count_label(ds.test, 0), 90u);
    EXPECT_EQ(count_label(ds.test, 1), 90u);
    // Disjoint and exhaustive.
    std::set<double> ids;
    for (const auto* half : {&ds.train, &ds.test}) {
        for (const auto& s : *half) {
            ids.insert(s.values[0]);
        }
    }
    EXPECT_EQ(ids.size(), 200u);
}

TEST(SplitTrainTest, RoundHalfUp) {
    std::vector<LabeledSeries> cases;
    for (int i = 0; i < 30; ++i) {
        cases.push_back({Waveform{0.0}, i < 15 ? 0 : 1, {}});
    }
    Rng rng(1);
    const auto ds = split_train_test(cases, 0.1, rng); // 1.5 rounds to 2
    EXPECT_EQ(count_label(ds.train, 0), 2u);
    EXPECT_EQ(count_label(ds.train, 1), 2u);
}

TEST(SplitTrainTest, ZeroTrainCasesRejected) {
    std::vector<LabeledSeries> cases;
    for (int i = 0; i < 8; ++i) {
        cases.push_back({Waveform{0.0}, i < 4 ? 0 : 1, {}});
    }
    Rng rng(1);
    EXPECT_THROW(split_train_test(cases, 0.1, rng), ConfigError); // 0.4 rounds to 0
}

TEST(SplitTrainTest, SameSeedSameSplit) {
    std::vector<LabeledSeries> cases;
    for (int i = 0; i < 60; ++i) {
        cases.push_back({Waveform{static_cast<double>(i)}, i % 2, {}});
    }
    Rng a(99);
    Rng b(99);
    const auto x = split_train_test(cases, 0.3, a);
    const auto y = split_train_test(cases, 0.3, b);
    ASSERT_EQ(x.train.size(), y.train.size());
    for (std::size_t i = 0; i < x.train.size(); ++i) {
        EXPECT_EQ(x.train[i].values, y.train[i].values);
    }
}

TEST(CommonParams, RejectsInvalidBlocks) {
    CommonParams c;
    c.nosClasses = 3;
    c.casesPerClass = {10, 10, 10};
    EXPECT_THROW(c.validate(), ConfigError);
    CommonParams d;
    d.casesPerClass = {10};
    EXPECT_THROW(d.validate(), ConfigError);
    CommonParams e;
    e.trainProp = 1.0;
    EXPECT_THROW(e.validate(), ConfigError);
    CommonParams f;
    f.noiseSigma = -1.0;
    EXPECT_THROW(f.validate(), ConfigError);
}

TEST(ZeroNoiseOracle, TemplateMatcherRecoversEveryClass) {
    for (const auto kind : {SimulatorKind::Elastic, SimulatorKind::Interval,
                            SimulatorKind::Shapelet, SimulatorKind::Dictionary}) {
        FamilyParams params = default_params(kind);
        common_of(params).noiseSigma = 0.0;
        common_of(params).casesPerClass = {20, 20};
        for (std::uint64_t r = 0; r < 3; ++r) {
            const auto ds = generate_resample(params, 1234, r);
            for (const auto* half : {&ds.train, &ds.test}) {
                for (const auto& s : *half) {
                    const auto cls = oracle::template_class(s.values, *ds.model, params);
                    ASSERT_TRUE(cls.has_value()) << to_string(kind);
                    EXPECT_EQ(*cls, s.label) << to_string(kind);
                }
            }
        }
    }
}
