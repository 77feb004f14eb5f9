#pragma once

#include "tscsim/random.hpp"
#include "tscsim/simulators.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tscsim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sakoe-Chiba half-width for a window fraction of an n-sample series:
/// 0 when windowFrac is 0, otherwise max(1, round(windowFrac * n)).
std::size_t warping_window(double windowFrac, std::size_t n);

/// Sum of squared differences. Returns kInfinity as soon as the running sum
/// exceeds `cutoff`.
double squared_euclidean(std::span<const double> a, std::span<const double> b,
                         double cutoff = kInfinity);

/// DTW with squared pointwise cost inside a band |i - j| <= window. Returns
/// kInfinity once every cell of a row exceeds cutoff (the final distance could
/// not be below it). Throws UnsupportedError on unequal or empty inputs.
double dtw_banded(std::span<const double> a, std::span<const double> b, std::size_t window,
                  double cutoff = kInfinity);

/// DTW with the band derived from a window fraction in [0, 1].
double dtw_distance(std::span<const double> a, std::span<const double> b, double windowFrac);

/// LB_Keogh lower bound of dtw_banded(query, candidate, window) built from the
/// candidate's envelope.
struct Envelope {
    std::vector<double> upper;
    std::vector<double> lower;
};
Envelope make_envelope(std::span<const double> series, std::size_t window);
double lb_keogh(std::span<const double> query, const Envelope& envelope,
                double cutoff = kInfinity);

struct Distance {
    enum class Kind { Euclidean, Dtw };

    Kind kind = Kind::Euclidean;
    double windowFrac = 0.0;

    static Distance euclidean() { return {Kind::Euclidean, 0.0}; }
    static Distance dtw(double windowFrac) { return {Kind::Dtw, windowFrac}; }

    double operator()(std::span<const double> a, std::span<const double> b,
                      double cutoff = kInfinity) const;
};

struct Prediction {
    std::vector<int> labels;
    /// Fraction of test labels matched; NaN for an empty test set.
    double accuracy = 0.0;
};

double accuracy_of(std::span<const int> predicted, std::span<const LabeledSeries> truth);

/// Index of the nearest train case to `query`, ties to the lowest index.
/// `skip` excludes one train index (leave-one-out).
std::size_t nearest_neighbour(std::span<const LabeledSeries> train, std::span<const double> query,
                              const Distance& distance,
                              std::size_t skip = std::numeric_limits<std::size_t>::max());

/// 1-NN classification of every test case. Throws InvalidSpecError on empty
/// train and UnsupportedError on unequal lengths.
Prediction fit_predict_1nn(std::span<const LabeledSeries> train,
                           std::span<const LabeledSeries> test, const Distance& distance);

/// Leave-one-out 1-NN accuracy on the train set.
double loocv_accuracy(std::span<const LabeledSeries> train, const Distance& distance);

/// loocv_accuracy under DTW for every fraction in `grid`, in grid order.
/// Distances are shared across windows: an optimal path that never leaves a
/// narrower band gives that band's distance for free.
std::vector<double> loocv_window_accuracies(std::span<const LabeledSeries> train,
                                            std::span<const double> grid);

/// {0, 0.05, ..., 1.0}.
std::vector<double> default_window_grid();

/// Window fraction maximising leave-one-out accuracy; ties go to the smallest
/// fraction. Requires at least two train cases and a non-empty grid.
double select_dtw_window(std::span<const LabeledSeries> train, std::span<const double> grid);

/// Simplified time series forest: each tree sees `intervalsPerTree` random
/// intervals summarised by mean, standard deviation and slope, and splits on
/// single-feature thresholds (information gain) until its leaves are pure.
class IntervalForest {
public:
    struct Interval {
        std::size_t start = 0;
        std::size_t length = 0;
    };

    static IntervalForest fit(std::span<const LabeledSeries> train, std::size_t numTrees,
                              std::size_t intervalsPerTree, Rng& rng);

    int predict(std::span<const double> series) const;
    std::size_t num_trees() const { return trees_.size(); }

private:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
    };
    struct Tree {
        std::vector<Interval> intervals;
        std::vector<Node> nodes;
    };

    std::vector<Tree> trees_;
    std::size_t seriesLength_ = 0;
    int numClasses_ = 2;
};

/// Fits an IntervalForest on `train` and classifies `test`.
Prediction interval_forest(std::span<const LabeledSeries> train,
                           std::span<const LabeledSeries> test, std::size_t numTrees,
                           std::size_t intervalsPerTree, Rng& rng);

/// Z-normalised copy (zero mean, unit population variance; constant series
/// become all zeros).
Waveform z_normalize(std::span<const double> series);

// ---------------------------------------------------------------------------
// Named classifiers used by the experiment runner.

struct ClassifierSpec {
    /// One of ed1nn, dtw1nn_full, dtw1nn_cv, ivf.
    std::string name;
    std::vector<double> windowGrid = default_window_grid();
    std::size_t numTrees = 100;
    /// 0 selects floor(sqrt(seriesLength)).
    std::size_t intervalsPerTree = 0;
    bool normalize = false;
};

bool is_known_classifier(const std::string& name);
std::vector<std::string> known_classifiers();

class TrainedModel {
public:
    virtual ~TrainedModel() = default;
    virtual int predict(std::span<const double> series) const = 0;
    /// Fitted hyperparameters worth reporting, e.g. the selected window.
    virtual std::vector<std::pair<std::string, double>> summary() const { return {}; }
};

/// Trains a named classifier. `seed` drives any randomness (ivf). Throws
/// ConfigError for an unknown name.
std::unique_ptr<TrainedModel> fit_classifier(const ClassifierSpec& spec,
                                             std::span<const LabeledSeries> train,
                                             std::uint64_t seed);

Prediction predict_all(const TrainedModel& model, std::span<const LabeledSeries> test);

} // namespace tscsim
