#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tscsim {

/// Resamples x classifiers grid of test accuracies. A missing cell (classifier
/// failure) is stored as NaN.
class AccuracyMatrix {
public:
    AccuracyMatrix() = default;
    AccuracyMatrix(std::vector<std::string> classifiers, std::vector<std::vector<double>> rows);

    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_classifiers() const { return classifiers_.size(); }
    const std::vector<std::string>& classifiers() const { return classifiers_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    double at(std::size_t row, std::size_t column) const { return rows_[row][column]; }
    std::vector<double> column(std::size_t j) const;

    /// Rows with no missing cell, and how many were dropped.
    AccuracyMatrix complete_rows() const;
    std::size_t missing_row_count() const;

    /// Throws InvalidSpecError if the matrix is ragged, has fewer than two
    /// columns or no rows, or holds a present value outside [0, 1].
    void validate() const;

private:
    std::vector<std::string> classifiers_;
    std::vector<std::vector<double>> rows_;
};

/// Ranks of one row: rank 1 is the highest value, ties share the average rank.
std::vector<double> rank_descending(std::span<const double> row);

struct RankSummary {
    std::vector<std::string> classifiers;
    std::vector<double> meanAccuracy;
    /// Sample standard deviation (N - 1) over sqrt(N); 0 for a single row.
    std::vector<double> standardError;
    std::vector<double> meanRank;
    std::size_t rowsUsed = 0;
    std::size_t rowsExcluded = 0;
};

/// Summary over complete rows only; rows with a missing cell are counted in
/// rowsExcluded.
RankSummary summarize(const AccuracyMatrix& matrix);

struct FriedmanResult {
    double statistic = 0.0;
    std::size_t degreesOfFreedom = 0;
    double pValue = 1.0;
};

/// Chi-square form: 12N/(k(k+1)) * sum_j (Rbar_j - (k+1)/2)^2 on k-1 degrees
/// of freedom. Requires N >= 2 and k >= 3 (UnsupportedError otherwise).
FriedmanResult friedman_test(const AccuracyMatrix& matrix);

/// Survival function of the chi-square distribution.
double chi_square_sf(double x, double degreesOfFreedom);

struct WilcoxonResult {
    /// min(W+, W-).
    double statistic = 0.0;
    double wPlus = 0.0;
    double wMinus = 0.0;
    double pValue = 1.0;
    /// Non-zero differences used.
    std::size_t effectiveN = 0;
    bool exact = false;
    /// Every difference was zero.
    bool degenerate = false;
};

/// Largest effective n handled by exact enumeration.
inline constexpr std::size_t kWilcoxonExactLimit = 20;

/// Two-sided signed-rank test. Zero differences are dropped and tied absolute
/// differences share average ranks. Exact null distribution for n <= 20,
/// otherwise the normal approximation with continuity and tie corrections.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

/// Holm step-down rejections in input order.
std::vector<bool> holm_correct(std::span<const double> pValues, double alpha);

struct PairwiseResult {
    std::size_t first = 0;
    std::size_t second = 0;
    WilcoxonResult test;
    bool rejected = false;
};

/// All k(k-1)/2 Wilcoxon tests on complete rows, Holm-corrected at `alpha`.
std::vector<PairwiseResult> pairwise_wilcoxon(const AccuracyMatrix& matrix, double alpha);

struct CliqueSet {
    /// Classifier indices, each clique listed best mean rank first.
    std::vector<std::vector<std::size_t>> cliques;
    /// Non-rejected pairs whose members ended in different cliques.
    std::vector<std::pair<std::size_t, std::size_t>> anomalies;
};

/// Walks classifiers in mean-rank order and grows each clique while the next
/// classifier has no rejected pair with any current member. The cliques
/// partition the classifiers.
CliqueSet form_cliques(const RankSummary& summary, std::span<const PairwiseResult> pairwise);

/// Mean-rank order (best first), ties by index.
std::vector<std::size_t> rank_order(const RankSummary& summary);

struct FiveNumberSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quantile by linear interpolation between order statistics at position
/// p * (n - 1) (the R type 7 rule).
double quantile_linear(std::vector<double> values, double p);
FiveNumberSummary five_number_summary(std::span<const double> values);

/// CSV `classifier,min,q1,median,q3,max`, one row per classifier, over
/// complete rows.
void write_boxplot_csv(std::ostream& out, const AccuracyMatrix& matrix);
void boxplot_summary(const AccuracyMatrix& matrix, const std::filesystem::path& destination);

/// SVG critical difference diagram. Identical inputs give identical bytes.
std::string render_cd_svg(const RankSummary& summary, const CliqueSet& cliques);
void render_cd_diagram(const RankSummary& summary, const CliqueSet& cliques,
                       const std::filesystem::path& destination);

} // namespace tscsim
