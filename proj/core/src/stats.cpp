#include "tscsim/stats.hpp"

#include "tscsim/error.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace tscsim {

namespace {

// Average ranks (1-based, ascending by key) with ties sharing the mean rank.
// Returned doubled so tied halves stay integral.
std::vector<std::int64_t> doubled_average_ranks(std::span<const double> keys) {
    const std::size_t n = keys.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<std::int64_t> ranks(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && keys[order[j + 1]] == keys[order[i]]) {
            ++j;
        }
        // Positions i..j (0-based) hold ranks i+1..j+1; doubled mean = i + j + 2.
        const auto doubled = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = doubled;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace

AccuracyMatrix::AccuracyMatrix(std::vector<std::string> classifiers,
                               std::vector<std::vector<double>> rows)
    : classifiers_(std::move(classifiers)), rows_(std::move(rows)) {}

std::vector<double> AccuracyMatrix::column(std::size_t j) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        out.push_back(row[j]);
    }
    return out;
}

AccuracyMatrix AccuracyMatrix::complete_rows() const {
    std::vector<std::vector<double>> kept;
    for (const auto& row : rows_) {
        if (std::none_of(row.begin(), row.end(), [](double v) { return std::isnan(v); })) {
            kept.push_back(row);
        }
    }
    return {classifiers_, std::move(kept)};
}

std::size_t AccuracyMatrix::missing_row_count() const {
    return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [](const auto& row) {
        return std::any_of(row.begin(), row.end(), [](double v) { return std::isnan(v); });
    }));
}

void AccuracyMatrix::validate() const {
    if (classifiers_.size() < 2) {
        throw InvalidSpecError("accuracy matrix needs at least two classifiers");
    }
    if (rows_.empty()) {
        throw InvalidSpecError("accuracy matrix has no rows");
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != classifiers_.size()) {
            throw InvalidSpecError("accuracy matrix row " + std::to_string(r) + " is ragged");
        }
        for (std::size_t c = 0; c < rows_[r].size(); ++c) {
            const double v = rows_[r][c];
            if (!std::isnan(v) && !(v >= 0.0 && v <= 1.0)) {
                throw InvalidSpecError("accuracy at row " + std::to_string(r) + ", column " +
                                       classifiers_[c] + " is outside [0, 1]");
            }
        }
    }
}

std::vector<double> rank_descending(std::span<const double> row) {
    std::vector<double> negated(row.size());
    std::transform(row.begin(), row.end(), negated.begin(), [](double v) { return -v; });
    const auto doubled = doubled_average_ranks(negated);
    std::vector<double> out(doubled.size());
    std::transform(doubled.begin(), doubled.end(), out.begin(),
                   [](std::int64_t r) { return static_cast<double>(r) / 2.0; });
    return out;
}

RankSummary summarize(const AccuracyMatrix& matrix) {
    const AccuracyMatrix complete = matrix.complete_rows();
    const std::size_t k = matrix.num_classifiers();
    const std::size_t n = complete.num_rows();
    RankSummary out;
    out.classifiers = matrix.classifiers();
    out.meanAccuracy.assign(k, 0.0);
    out.standardError.assign(k, 0.0);
    out.meanRank.assign(k, 0.0);
    out.rowsUsed = n;
    out.rowsExcluded = matrix.num_rows() - n;
    if (n == 0) {
        return out;
    }
    for (const auto& row : complete.rows()) {
        const auto ranks = rank_descending(row);
        for (std::size_t j = 0; j < k; ++j) {
            out.meanAccuracy[j] += row[j];
            out.meanRank[j] += ranks[j];
        }
    }
    const double rows = static_cast<double>(n);
    for (std::size_t j = 0; j < k; ++j) {
        out.meanAccuracy[j] /= rows;
        out.meanRank[j] /= rows;
    }
    if (n > 1) {
        for (std::size_t j = 0; j < k; ++j) {
            double ss = 0.0;
            for (const auto& row : complete.rows()) {
                const double d = row[j] - out.meanAccuracy[j];
                ss += d * d;
            }
            out.standardError[j] = std::sqrt(ss / (rows - 1.0)) / std::sqrt(rows);
        }
    }
    return out;
}

double chi_square_sf(double x, double degreesOfFreedom) {
    if (x <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(degreesOfFreedom / 2.0, x / 2.0);
}

FriedmanResult friedman_test(const AccuracyMatrix& matrix) {
    const AccuracyMatrix complete = matrix.complete_rows();
    const std::size_t k = complete.num_classifiers();
    const std::size_t n = complete.num_rows();
    if (k < 3) {
        throw UnsupportedError("Friedman test needs at least three classifiers");
    }
    if (n < 2) {
        throw UnsupportedError("Friedman test needs at least two complete rows");
    }
    std::vector<double> rankSums(k, 0.0);
    for (const auto& row : complete.rows()) {
        const auto ranks = rank_descending(row);
        for (std::size_t j = 0; j < k; ++j) {
            rankSums[j] += ranks[j];
        }
    }
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double centre = (kd + 1.0) / 2.0;
    double spread = 0.0;
    for (const double s : rankSums) {
        const double d = s / nd - centre;
        spread += d * d;
    }
    FriedmanResult out;
    out.statistic = 12.0 * nd / (kd * (kd + 1.0)) * spread;
    out.degreesOfFreedom = k - 1;
    out.pValue = chi_square_sf(out.statistic, static_cast<double>(k - 1));
    return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) {
        throw InvalidSpecError("Wilcoxon test needs two non-empty columns of equal length");
    }
    std::vector<double> magnitudes;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) {
            magnitudes.push_back(std::abs(d));
            positive.push_back(d > 0.0);
        }
    }
    WilcoxonResult out;
    const std::size_t n = magnitudes.size();
    out.effectiveN = n;
    if (n == 0) {
        out.degenerate = true;
        out.exact = true;
        return out;
    }
    const auto ranks = doubled_average_ranks(magnitudes);
    std::int64_t plus2 = 0;
    std::int64_t total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += ranks[i];
        if (positive[i]) {
            plus2 += ranks[i];
        }
    }
    const std::int64_t minus2 = total2 - plus2;
    const std::int64_t stat2 = std::min(plus2, minus2);
    out.wPlus = static_cast<double>(plus2) / 2.0;
    out.wMinus = static_cast<double>(minus2) / 2.0;
    out.statistic = static_cast<double>(stat2) / 2.0;

    if (n <= kWilcoxonExactLimit) {
        // Null distribution of the doubled W+ over all 2^n sign patterns.
        std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
        ways[0] = 1.0;
        std::int64_t reach = 0;
        for (const auto r : ranks) {
            for (std::int64_t s = reach; s >= 0; --s) {
                ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
            }
            reach += r;
        }
        double extreme = 0.0;
        for (std::int64_t w = 0; w <= total2; ++w) {
            if (std::min(w, total2 - w) <= stat2) {
                extreme += ways[static_cast<std::size_t>(w)];
            }
        }
        out.exact = true;
        out.pValue = std::min(1.0, std::ldexp(extreme, -static_cast<int>(n)));
        return out;
    }

    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double tieTerm = 0.0;
    {
        std::vector<std::int64_t> sorted(ranks.begin(), ranks.end());
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) {
                ++j;
            }
            const double t = static_cast<double>(j - i);
            tieTerm += t * t * t - t;
            i = j;
        }
    }
    const double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tieTerm / 48.0;
    if (variance <= 0.0) {
        out.pValue = 1.0;
        return out;
    }
    const double z = std::max(0.0, std::abs(out.wPlus - mean) - 0.5) / std::sqrt(variance);
    out.pValue = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return out;
}

std::vector<bool> holm_correct(std::span<const double> pValues, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidSpecError("alpha must lie in (0, 1)");
    }
    for (const double p : pValues) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidSpecError("p-values must lie in [0, 1]");
        }
    }
    const std::size_t m = pValues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pValues[a] < pValues[b]; });
    std::vector<bool> rejected(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (pValues[order[i]] <= alpha / static_cast<double>(m - i)) {
            rejected[order[i]] = true;
        } else {
            break;
        }
    }
    return rejected;
}

std::vector<PairwiseResult> pairwise_wilcoxon(const AccuracyMatrix& matrix, double alpha) {
    const AccuracyMatrix complete = matrix.complete_rows();
    const std::size_t k = complete.num_classifiers();
    if (complete.num_rows() == 0) {
        throw InvalidSpecError("no complete rows for pairwise tests");
    }
    std::vector<PairwiseResult> out;
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < k; ++j) {
        columns.push_back(complete.column(j));
    }
    std::vector<double> pValues;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            PairwiseResult r;
            r.first = a;
            r.second = b;
            r.test = wilcoxon_signed_rank(columns[a], columns[b]);
            pValues.push_back(r.test.pValue);
            out.push_back(r);
        }
    }
    const auto rejected = holm_correct(pValues, alpha);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].rejected = rejected[i];
    }
    return out;
}

std::vector<std::size_t> rank_order(const RankSummary& summary) {
    std::vector<std::size_t> order(summary.meanRank.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return summary.meanRank[a] < summary.meanRank[b];
    });
    return order;
}

CliqueSet form_cliques(const RankSummary& summary, std::span<const PairwiseResult> pairwise) {
    const std::size_t k = summary.meanRank.size();
    std::vector<std::vector<int>> rejected(k, std::vector<int>(k, -1));
    for (const auto& p : pairwise) {
        if (p.first >= k || p.second >= k || p.first == p.second) {
            throw InvalidSpecError("pairwise result references an unknown classifier");
        }
        rejected[p.first][p.second] = p.rejected ? 1 : 0;
        rejected[p.second][p.first] = p.rejected ? 1 : 0;
    }
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            if (rejected[a][b] < 0) {
                throw InvalidSpecError("pairwise results do not cover every pair");
            }
        }
    }

    CliqueSet out;
    std::vector<std::size_t> cliqueOf(k, 0);
    for (const auto idx : rank_order(summary)) {
        const bool joins =
            !out.cliques.empty() &&
            std::none_of(out.cliques.back().begin(), out.cliques.back().end(),
                         [&](std::size_t member) { return rejected[idx][member] == 1; });
        if (!joins) {
            out.cliques.emplace_back();
        }
        out.cliques.back().push_back(idx);
        cliqueOf[idx] = out.cliques.size() - 1;
    }
    const auto order = rank_order(summary);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto a = order[i];
            const auto b = order[j];
            if (rejected[a][b] == 0 && cliqueOf[a] != cliqueOf[b]) {
                out.anomalies.emplace_back(a, b);
            }
        }
    }
    return out;
}

double quantile_linear(std::vector<double> values, double p) {
    if (values.empty()) {
        throw InvalidSpecError("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double position = p * static_cast<double>(values.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const std::size_t upper = std::min(lower + 1, values.size() - 1);
    const double fraction = position - static_cast<double>(lower);
    return values[lower] + fraction * (values[upper] - values[lower]);
}

FiveNumberSummary five_number_summary(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    if (v.empty()) {
        throw InvalidSpecError("five-number summary of an empty sample");
    }
    std::sort(v.begin(), v.end());
    return {v.front(), quantile_linear(v, 0.25), quantile_linear(v, 0.5), quantile_linear(v, 0.75),
            v.back()};
}

} // namespace tscsim
