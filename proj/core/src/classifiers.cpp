#include "tscsim/classifiers.hpp"

#include "tscsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>

namespace tscsim {

namespace {

// LB_Keogh and the banded DP sum in different orders; a bound equal to the
// distance can round a few ulps above it.
constexpr double kLowerBoundSlack = 1e-12;

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw UnsupportedError("series lengths differ (" + std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()) + "); only equal lengths are supported");
    }
    if (a.empty()) {
        throw UnsupportedError("empty series");
    }
}

std::size_t common_length(std::span<const LabeledSeries> train,
                          std::span<const LabeledSeries> test = {}) {
    if (train.empty()) {
        throw InvalidSpecError("training set is empty");
    }
    const std::size_t n = train.front().values.size();
    const auto check = [n](const LabeledSeries& s) {
        if (s.values.size() != n) {
            throw UnsupportedError("all series must have the same length");
        }
    };
    std::for_each(train.begin(), train.end(), check);
    std::for_each(test.begin(), test.end(), check);
    return n;
}

// Nearest-neighbour search over a fixed train set. Candidates are visited in
// order of their lower bound so the best-so-far tightens early; the answer is
// the exact argmin with ties to the lowest train index.
class NeighbourIndex {
public:
    NeighbourIndex(std::span<const LabeledSeries> train, const Distance& distance)
        : train_(train), distance_(distance) {
        if (distance_.kind == Distance::Kind::Dtw) {
            window_ = warping_window(distance_.windowFrac, train.front().values.size());
            envelopes_.reserve(train.size());
            for (const auto& s : train) {
                envelopes_.push_back(make_envelope(s.values, window_));
            }
        }
    }

    std::size_t nearest(std::span<const double> query, std::size_t skip) const {
        const std::size_t count = train_.size();
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(count);
        for (std::size_t j = 0; j < count; ++j) {
            if (j == skip) {
                continue;
            }
            const double bound = envelopes_.empty() ? 0.0 : lb_keogh(query, envelopes_[j]);
            order.emplace_back(bound, j);
        }
        if (order.empty()) {
            throw InvalidSpecError("no candidate neighbours");
        }
        std::sort(order.begin(), order.end());
        double best = kInfinity;
        std::size_t bestIndex = order.front().second;
        for (const auto& [bound, j] : order) {
            if (bound > best * (1.0 + kLowerBoundSlack)) {
                break;
            }
            const double d = distance_kind(query, train_[j].values, best);
            if (d < best || (d == best && j < bestIndex)) {
                best = d;
                bestIndex = j;
            }
        }
        return bestIndex;
    }

private:
    double distance_kind(std::span<const double> a, std::span<const double> b,
                         double cutoff) const {
        if (distance_.kind == Distance::Kind::Euclidean) {
            return squared_euclidean(a, b, cutoff);
        }
        return dtw_banded(a, b, window_, cutoff);
    }

    std::span<const LabeledSeries> train_;
    Distance distance_;
    std::size_t window_ = 0;
    std::vector<Envelope> envelopes_;
};

class NearestNeighbourModel final : public TrainedModel {
public:
    NearestNeighbourModel(std::vector<LabeledSeries> train, Distance distance, bool normalize,
                          std::vector<std::pair<std::string, double>> summary)
        : train_(std::move(train)),
          distance_(distance),
          normalize_(normalize),
          summary_(std::move(summary)),
          index_(train_, distance_) {}

    int predict(std::span<const double> series) const override {
        if (normalize_) {
            const Waveform z = z_normalize(series);
            return train_[index_.nearest(z, kNoSkip)].label;
        }
        return train_[index_.nearest(series, kNoSkip)].label;
    }

    std::vector<std::pair<std::string, double>> summary() const override { return summary_; }

private:
    static constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

    std::vector<LabeledSeries> train_;
    Distance distance_;
    bool normalize_;
    std::vector<std::pair<std::string, double>> summary_;
    NeighbourIndex index_;
};

class ForestModel final : public TrainedModel {
public:
    ForestModel(IntervalForest forest, bool normalize, std::size_t intervals)
        : forest_(std::move(forest)), normalize_(normalize), intervals_(intervals) {}

    int predict(std::span<const double> series) const override {
        if (normalize_) {
            return forest_.predict(z_normalize(series));
        }
        return forest_.predict(series);
    }

    std::vector<std::pair<std::string, double>> summary() const override {
        return {{"trees", static_cast<double>(forest_.num_trees())},
                {"intervals_per_tree", static_cast<double>(intervals_)}};
    }

private:
    IntervalForest forest_;
    bool normalize_;
    std::size_t intervals_;
};

// Prefix sums that give mean, standard deviation and slope of any interval in
// constant time.
struct IntervalStats {
    std::vector<double> sum;
    std::vector<double> sumSq;
    std::vector<double> sumIx;

    explicit IntervalStats(std::span<const double> x)
        : sum(x.size() + 1, 0.0), sumSq(x.size() + 1, 0.0), sumIx(x.size() + 1, 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum[i + 1] = sum[i] + x[i];
            sumSq[i + 1] = sumSq[i] + x[i] * x[i];
            sumIx[i + 1] = sumIx[i] + static_cast<double>(i) * x[i];
        }
    }

    void features(const IntervalForest::Interval& iv, double* out) const {
        const std::size_t a = iv.start;
        const std::size_t b = iv.start + iv.length;
        const double len = static_cast<double>(iv.length);
        const double s = sum[b] - sum[a];
        const double mean = s / len;
        const double var = std::max(0.0, (sumSq[b] - sumSq[a]) / len - mean * mean);
        // Least-squares slope against t = i - start.
        const double sumTx = (sumIx[b] - sumIx[a]) - static_cast<double>(a) * s;
        const double tMean = (len - 1.0) / 2.0;
        const double sxx = len * (len * len - 1.0) / 12.0;
        const double slope = sxx > 0.0 ? (sumTx - tMean * s) / sxx : 0.0;
        out[0] = mean;
        out[1] = std::sqrt(var);
        out[2] = slope;
    }
};

double entropy(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) {
        return 0.0;
    }
    double h = 0.0;
    for (const auto c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / static_cast<double>(total);
            h -= p * std::log2(p);
        }
    }
    return h;
}

struct TracedDistance {
    double value = kInfinity; // kInfinity when abandoned
    std::size_t deviation = 0; // max |i - j| along one optimal path
};

// dtw_banded with the same arithmetic, also tracking how far one optimal path
// strays from the diagonal.
TracedDistance dtw_traced(std::span<const double> a, std::span<const double> b,
                          std::size_t window, double cutoff) {
    const std::size_t n = a.size();
    const std::size_t w = std::min(window, n - 1);
    std::vector<double> prev(n, kInfinity);
    std::vector<double> curr(n, kInfinity);
    std::vector<std::size_t> prevDev(n, 0);
    std::vector<std::size_t> currDev(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > w ? i - w : 0;
        const std::size_t hi = std::min(n - 1, i + w);
        if (lo > 0) {
            curr[lo - 1] = kInfinity;
        }
        double rowMin = kInfinity;
        const double ai = a[i];
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = ai - b[j];
            double best = 0.0;
            std::size_t dev = 0;
            if (i != 0 || j != 0) {
                best = prev[j];
                dev = prevDev[j];
                if (j > 0) {
                    if (prev[j - 1] <= best) {
                        best = prev[j - 1];
                        dev = prevDev[j - 1];
                    }
                    if (curr[j - 1] < best) {
                        best = curr[j - 1];
                        dev = currDev[j - 1];
                    }
                }
            }
            const double value = d * d + best;
            curr[j] = value;
            currDev[j] = std::max(dev, i > j ? i - j : j - i);
            rowMin = std::min(rowMin, value);
        }
        if (rowMin > cutoff) {
            return {};
        }
        std::swap(prev, curr);
        std::swap(prevDev, currDev);
    }
    return {prev[n - 1], prevDev[n - 1]};
}

int majority(std::span<const std::size_t> counts) {
    int best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(c);
        }
    }
    return best;
}

} // namespace

std::size_t warping_window(double windowFrac, std::size_t n) {
    if (!(windowFrac >= 0.0 && windowFrac <= 1.0)) {
        throw InvalidSpecError("window fraction must lie in [0, 1]");
    }
    if (windowFrac == 0.0) {
        return 0;
    }
    const auto w = static_cast<std::size_t>(std::llround(windowFrac * static_cast<double>(n)));
    return std::max<std::size_t>(1, w);
}

double squared_euclidean(std::span<const double> a, std::span<const double> b, double cutoff) {
    require_same_length(a, b);
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        total += d * d;
        if (total > cutoff) {
            return kInfinity;
        }
    }
    return total;
}

double dtw_banded(std::span<const double> a, std::span<const double> b, std::size_t window,
                  double cutoff) {
    require_same_length(a, b);
    const std::size_t n = a.size();
    const std::size_t w = std::min(window, n - 1);
    std::vector<double> prev(n, kInfinity);
    std::vector<double> curr(n, kInfinity);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > w ? i - w : 0;
        const std::size_t hi = std::min(n - 1, i + w);
        if (lo > 0) {
            curr[lo - 1] = kInfinity;
        }
        double rowMin = kInfinity;
        const double ai = a[i];
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = ai - b[j];
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = prev[j];
                if (j > 0) {
                    best = std::min(best, std::min(prev[j - 1], curr[j - 1]));
                }
            }
            const double value = d * d + best;
            curr[j] = value;
            rowMin = std::min(rowMin, value);
        }
        if (rowMin > cutoff) {
            return kInfinity;
        }
        std::swap(prev, curr);
    }
    return prev[n - 1];
}

double dtw_distance(std::span<const double> a, std::span<const double> b, double windowFrac) {
    require_same_length(a, b);
    return dtw_banded(a, b, warping_window(windowFrac, a.size()));
}

Envelope make_envelope(std::span<const double> series, std::size_t window) {
    const std::size_t n = series.size();
    Envelope env{std::vector<double>(n), std::vector<double>(n)};
    // Monotone deques over the sliding range [i - w, i + w].
    std::deque<std::size_t> maxQ;
    std::deque<std::size_t> minQ;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t right = std::min(n - 1, i + window);
        while (next <= right) {
            while (!maxQ.empty() && series[maxQ.back()] <= series[next]) {
                maxQ.pop_back();
            }
            maxQ.push_back(next);
            while (!minQ.empty() && series[minQ.back()] >= series[next]) {
                minQ.pop_back();
            }
            minQ.push_back(next);
            ++next;
        }
        const std::size_t left = i > window ? i - window : 0;
        while (maxQ.front() < left) {
            maxQ.pop_front();
        }
        while (minQ.front() < left) {
            minQ.pop_front();
        }
        env.upper[i] = series[maxQ.front()];
        env.lower[i] = series[minQ.front()];
    }
    return env;
}

double lb_keogh(std::span<const double> query, const Envelope& envelope, double cutoff) {
    if (query.size() != envelope.upper.size()) {
        throw UnsupportedError("envelope length differs from query length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
        const double q = query[i];
        if (q > envelope.upper[i]) {
            const double d = q - envelope.upper[i];
            total += d * d;
        } else if (q < envelope.lower[i]) {
            const double d = envelope.lower[i] - q;
            total += d * d;
        }
        if (total > cutoff) {
            return kInfinity;
        }
    }
    return total;
}

double Distance::operator()(std::span<const double> a, std::span<const double> b,
                            double cutoff) const {
    if (kind == Kind::Euclidean) {
        return squared_euclidean(a, b, cutoff);
    }
    return dtw_banded(a, b, warping_window(windowFrac, a.size()), cutoff);
}

double accuracy_of(std::span<const int> predicted, std::span<const LabeledSeries> truth) {
    if (predicted.size() != truth.size()) {
        throw InvalidSpecError("prediction count differs from test size");
    }
    if (truth.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        correct += predicted[i] == truth[i].label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

std::size_t nearest_neighbour(std::span<const LabeledSeries> train, std::span<const double> query,
                              const Distance& distance, std::size_t skip) {
    const std::size_t n = common_length(train);
    if (query.size() != n) {
        throw UnsupportedError("query length differs from train length");
    }
    return NeighbourIndex(train, distance).nearest(query, skip);
}

Prediction fit_predict_1nn(std::span<const LabeledSeries> train,
                           std::span<const LabeledSeries> test, const Distance& distance) {
    common_length(train, test);
    const NeighbourIndex index(train, distance);
    Prediction out;
    out.labels.reserve(test.size());
    for (const auto& s : test) {
        out.labels.push_back(train[index.nearest(s.values, std::numeric_limits<std::size_t>::max())].label);
    }
    out.accuracy = accuracy_of(out.labels, test);
    return out;
}

double loocv_accuracy(std::span<const LabeledSeries> train, const Distance& distance) {
    common_length(train);
    if (train.size() < 2) {
        throw InvalidSpecError("leave-one-out needs at least two train cases");
    }
    const NeighbourIndex index(train, distance);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        correct += train[index.nearest(train[i].values, i)].label == train[i].label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(train.size());
}

std::vector<double> default_window_grid() {
    std::vector<double> grid;
    for (int step = 0; step <= 20; ++step) {
        grid.push_back(static_cast<double>(step) / 20.0);
    }
    return grid;
}

std::vector<double> loocv_window_accuracies(std::span<const LabeledSeries> train,
                                            std::span<const double> grid) {
    const std::size_t n = common_length(train);
    const std::size_t m = train.size();
    if (m < 2) {
        throw InvalidSpecError("leave-one-out needs at least two train cases");
    }
    std::vector<std::size_t> windows;
    for (const double f : grid) {
        windows.push_back(std::min(warping_window(f, n), n - 1));
    }
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return windows[x] > windows[y]; });

    // Per unordered pair: an exact distance valid for every band at least
    // `deviation` wide, or failing that a lower bound. Narrowing the band never
    // lowers DTW, so bounds carry over from wide windows to narrow ones.
    struct PairState {
        bool exact = false;
        double value = 0.0;
        std::size_t deviation = 0;
    };
    std::vector<PairState> pairs(m * m);
    const auto pair = [&](std::size_t i, std::size_t j) -> PairState& {
        return pairs[std::min(i, j) * m + std::max(i, j)];
    };

    std::vector<double> accuracies(grid.size(), 0.0);
    std::optional<std::size_t> lastWindow;
    double lastAccuracy = 0.0;
    std::vector<std::pair<double, std::size_t>> candidates;
    for (const std::size_t k : order) {
        const std::size_t w = windows[k];
        if (lastWindow == w) {
            accuracies[k] = lastAccuracy;
            continue;
        }
        for (auto& p : pairs) {
            if (p.exact && p.deviation > w) {
                p.exact = false;
            }
        }
        std::vector<Envelope> envelopes;
        envelopes.reserve(m);
        for (const auto& s : train) {
            envelopes.push_back(make_envelope(s.values, w));
        }
        std::size_t correct = 0;
        for (std::size_t i = 0; i < m; ++i) {
            candidates.clear();
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) {
                    continue;
                }
                const PairState& p = pair(i, j);
                const double key =
                    p.exact ? p.value : std::max(p.value, lb_keogh(train[i].values, envelopes[j]));
                candidates.emplace_back(key, j);
            }
            std::sort(candidates.begin(), candidates.end());
            double best = kInfinity;
            std::size_t bestIndex = candidates.front().second;
            for (const auto& [key, j] : candidates) {
                if (key > best * (1.0 + kLowerBoundSlack)) {
                    break;
                }
                PairState& p = pair(i, j);
                double d = p.value;
                if (!p.exact) {
                    const TracedDistance t = dtw_traced(train[i].values, train[j].values, w, best);
                    if (t.value == kInfinity) {
                        p.value = std::max(p.value, best);
                        continue;
                    }
                    p = {true, t.value, t.deviation};
                    d = t.value;
                }
                if (d < best || (d == best && j < bestIndex)) {
                    best = d;
                    bestIndex = j;
                }
            }
            correct += train[bestIndex].label == train[i].label ? 1 : 0;
        }
        lastWindow = w;
        lastAccuracy = static_cast<double>(correct) / static_cast<double>(m);
        accuracies[k] = lastAccuracy;
    }
    return accuracies;
}

double select_dtw_window(std::span<const LabeledSeries> train, std::span<const double> grid) {
    if (grid.empty()) {
        throw InvalidSpecError("window grid is empty");
    }
    if (train.size() < 2) {
        throw InvalidSpecError("window selection needs at least two train cases");
    }
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const auto accuracies = loocv_window_accuracies(train, sorted);
    double bestWindow = sorted.front();
    double bestAccuracy = -1.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (accuracies[k] > bestAccuracy) {
            bestAccuracy = accuracies[k];
            bestWindow = sorted[k];
        }
    }
    return bestWindow;
}

IntervalForest IntervalForest::fit(std::span<const LabeledSeries> train, std::size_t numTrees,
                                   std::size_t intervalsPerTree, Rng& rng) {
    const std::size_t n = common_length(train);
    if (n < 3) {
        throw InvalidSpecError("interval forest needs series of length >= 3");
    }
    if (numTrees == 0 || intervalsPerTree == 0) {
        throw InvalidSpecError("interval forest needs at least one tree and one interval");
    }
    IntervalForest forest;
    forest.seriesLength_ = n;
    int maxLabel = 0;
    for (const auto& s : train) {
        maxLabel = std::max(maxLabel, s.label);
    }
    forest.numClasses_ = maxLabel + 1;
    const auto classes = static_cast<std::size_t>(forest.numClasses_);

    std::vector<IntervalStats> stats;
    stats.reserve(train.size());
    for (const auto& s : train) {
        stats.emplace_back(s.values);
    }

    const std::size_t numFeatures = 3 * intervalsPerTree;
    std::vector<double> features(train.size() * numFeatures);
    for (std::size_t t = 0; t < numTrees; ++t) {
        Tree tree;
        tree.intervals.reserve(intervalsPerTree);
        for (std::size_t k = 0; k < intervalsPerTree; ++k) {
            const auto length = static_cast<std::size_t>(rng.uniform_int(3, static_cast<std::int64_t>(n)));
            const auto start = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(n - length)));
            tree.intervals.push_back({start, length});
        }
        for (std::size_t i = 0; i < train.size(); ++i) {
            for (std::size_t k = 0; k < intervalsPerTree; ++k) {
                stats[i].features(tree.intervals[k], &features[i * numFeatures + 3 * k]);
            }
        }

        // Depth-first growth with an explicit stack of (node, members).
        std::vector<std::pair<int, std::vector<std::size_t>>> stack;
        std::vector<std::size_t> all(train.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        tree.nodes.emplace_back();
        stack.emplace_back(0, std::move(all));
        std::vector<std::pair<double, int>> column;
        while (!stack.empty()) {
            auto [nodeId, members] = std::move(stack.back());
            stack.pop_back();
            std::vector<std::size_t> counts(classes, 0);
            for (const auto m : members) {
                ++counts[static_cast<std::size_t>(train[m].label)];
            }
            const int label = majority(counts);
            tree.nodes[static_cast<std::size_t>(nodeId)].label = label;
            if (counts[static_cast<std::size_t>(label)] == members.size()) {
                continue;
            }
            const double parentEntropy = entropy(counts, members.size());
            double bestGain = -1.0;
            int bestFeature = -1;
            double bestThreshold = 0.0;
            for (std::size_t f = 0; f < numFeatures; ++f) {
                column.clear();
                for (const auto m : members) {
                    column.emplace_back(features[m * numFeatures + f], train[m].label);
                }
                std::sort(column.begin(), column.end());
                std::vector<std::size_t> left(classes, 0);
                for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                    ++left[static_cast<std::size_t>(column[k].second)];
                    if (column[k].first == column[k + 1].first) {
                        continue;
                    }
                    std::vector<std::size_t> right(classes, 0);
                    for (std::size_t c = 0; c < classes; ++c) {
                        right[c] = counts[c] - left[c];
                    }
                    const std::size_t nl = k + 1;
                    const std::size_t nr = column.size() - nl;
                    const double childEntropy =
                        (static_cast<double>(nl) * entropy(left, nl) +
                         static_cast<double>(nr) * entropy(right, nr)) /
                        static_cast<double>(column.size());
                    const double gain = parentEntropy - childEntropy;
                    if (gain > bestGain) {
                        bestGain = gain;
                        bestFeature = static_cast<int>(f);
                        bestThreshold = 0.5 * (column[k].first + column[k + 1].first);
                    }
                }
            }
            if (bestFeature < 0) {
                continue; // indistinguishable members: majority leaf
            }
            std::vector<std::size_t> goLeft;
            std::vector<std::size_t> goRight;
            for (const auto m : members) {
                const double v = features[m * numFeatures + static_cast<std::size_t>(bestFeature)];
                (v <= bestThreshold ? goLeft : goRight).push_back(m);
            }
            const int leftId = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            const int rightId = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            auto& node = tree.nodes[static_cast<std::size_t>(nodeId)];
            node.feature = bestFeature;
            node.threshold = bestThreshold;
            node.left = leftId;
            node.right = rightId;
            stack.emplace_back(rightId, std::move(goRight));
            stack.emplace_back(leftId, std::move(goLeft));
        }
        forest.trees_.push_back(std::move(tree));
    }
    return forest;
}

int IntervalForest::predict(std::span<const double> series) const {
    if (series.size() != seriesLength_) {
        throw UnsupportedError("query length differs from training length");
    }
    const IntervalStats stats(series);
    std::vector<std::size_t> votes(static_cast<std::size_t>(numClasses_), 0);
    std::vector<double> feature(3);
    for (const auto& tree : trees_) {
        std::size_t id = 0;
        while (tree.nodes[id].feature >= 0) {
            const auto& node = tree.nodes[id];
            const auto f = static_cast<std::size_t>(node.feature);
            stats.features(tree.intervals[f / 3], feature.data());
            id = static_cast<std::size_t>(feature[f % 3] <= node.threshold ? node.left : node.right);
        }
        ++votes[static_cast<std::size_t>(tree.nodes[id].label)];
    }
    return majority(votes);
}

Prediction interval_forest(std::span<const LabeledSeries> train,
                           std::span<const LabeledSeries> test, std::size_t numTrees,
                           std::size_t intervalsPerTree, Rng& rng) {
    common_length(train, test);
    const IntervalForest forest = IntervalForest::fit(train, numTrees, intervalsPerTree, rng);
    Prediction out;
    out.labels.reserve(test.size());
    for (const auto& s : test) {
        out.labels.push_back(forest.predict(s.values));
    }
    out.accuracy = accuracy_of(out.labels, test);
    return out;
}

Waveform z_normalize(std::span<const double> series) {
    Waveform out(series.begin(), series.end());
    if (out.empty()) {
        return out;
    }
    const double n = static_cast<double>(out.size());
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : out) {
        var += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(var / n);
    for (auto& v : out) {
        v = sd > 1e-12 ? (v - mean) / sd : 0.0;
    }
    return out;
}

bool is_known_classifier(const std::string& name) {
    const auto names = known_classifiers();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> known_classifiers() {
    return {"ed1nn", "dtw1nn_full", "dtw1nn_cv", "ivf"};
}

std::unique_ptr<TrainedModel> fit_classifier(const ClassifierSpec& spec,
                                             std::span<const LabeledSeries> train,
                                             std::uint64_t seed) {
    if (!is_known_classifier(spec.name)) {
        throw ConfigError("unknown classifier '" + spec.name + "'");
    }
    const std::size_t n = common_length(train);
    std::vector<LabeledSeries> prepared(train.begin(), train.end());
    if (spec.normalize) {
        for (auto& s : prepared) {
            s.values = z_normalize(s.values);
        }
    }
    if (spec.name == "ivf") {
        const std::size_t intervals =
            spec.intervalsPerTree > 0
                ? spec.intervalsPerTree
                : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
        Rng rng(seed);
        return std::make_unique<ForestModel>(
            IntervalForest::fit(prepared, spec.numTrees, intervals, rng), spec.normalize,
            intervals);
    }
    Distance distance = Distance::euclidean();
    std::vector<std::pair<std::string, double>> summary;
    if (spec.name == "dtw1nn_full") {
        distance = Distance::dtw(1.0);
    } else if (spec.name == "dtw1nn_cv") {
        const double window = select_dtw_window(prepared, spec.windowGrid);
        distance = Distance::dtw(window);
        summary.emplace_back("window", window);
    }
    return std::make_unique<NearestNeighbourModel>(std::move(prepared), distance, spec.normalize,
                                                   std::move(summary));
}

Prediction predict_all(const TrainedModel& model, std::span<const LabeledSeries> test) {
    Prediction out;
    out.labels.reserve(test.size());
    for (const auto& s : test) {
        out.labels.push_back(model.predict(s.values));
    }
    out.accuracy = accuracy_of(out.labels, test);
    return out;
}

} // namespace tscsim
