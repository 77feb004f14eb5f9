#pragma once

#include "tscsim/classifiers.hpp"
#include "tscsim/simulators.hpp"
#include "tscsim/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tscsim {

inline constexpr int kResultsSchemaVersion = 1;
inline constexpr std::size_t kDefaultResamples = 25;
inline constexpr double kDefaultAlpha = 0.05;

struct ExperimentConfig {
    std::vector<SimulatorKind> simulators;
    /// Also report one matrix pooling every simulator's resamples.
    bool pooled = false;
    std::size_t resamples = kDefaultResamples;
    std::uint64_t masterSeed = 0;
    std::vector<ClassifierSpec> classifiers;
    /// Empty: nothing is written.
    std::filesystem::path outputDir;
    /// Base parameters per simulator; family defaults when absent.
    std::map<SimulatorKind, FamilyParams> baseParams;
    std::optional<double> noiseSigma;
    std::optional<double> amplitude;
    std::optional<double> trainProp;
    std::size_t jobs = 1;
    double alpha = kDefaultAlpha;

    /// Base parameters with the global overrides applied.
    FamilyParams params_for(SimulatorKind kind) const;
    /// Throws ConfigError.
    void validate() const;
};

struct CellResult {
    std::string classifier;
    /// Absent when the classifier failed.
    std::optional<double> accuracy;
    std::optional<std::string> error;
    std::vector<std::pair<std::string, double>> summary;
    double fitSeconds = 0.0;
    double predictSeconds = 0.0;
};

struct ResampleResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::vector<CellResult> cells;
};

struct SimulatorResults {
    SimulatorKind simulator = SimulatorKind::Elastic;
    std::vector<ResampleResult> resamples;
};

struct ResultsDocument {
    int schemaVersion = kResultsSchemaVersion;
    /// Serialized configuration echo (JSON object text).
    std::string configJson = "{}";
    std::vector<std::string> classifiers;
    bool pooled = false;
    double alpha = kDefaultAlpha;
    std::vector<SimulatorResults> experiments;
};

/// Matrix for one simulator, or every simulator stacked when `simulator` is
/// empty.
AccuracyMatrix accuracy_matrix(const ResultsDocument& doc,
                               std::optional<SimulatorKind> simulator = std::nullopt);

/// JSON text of the document. Timing fields are the only non-deterministic
/// bytes; `includeTiming = false` drops them.
std::string results_to_json(const ResultsDocument& doc, bool includeTiming = true);
/// Throws ParseError, SchemaError or ValidationError.
ResultsDocument results_from_json(const std::string& text, const std::string& source = "<results>");

void write_results(const ResultsDocument& doc, const std::filesystem::path& path);
ResultsDocument read_results(const std::filesystem::path& path);

/// Generates every (simulator, resample) dataset from its child seed, fits
/// each classifier on train and scores it once on test. Work is spread over
/// `config.jobs` threads and merged by index. When outputDir is set, writes
/// results.json and the report artifacts there.
ResultsDocument run_experiment(const ExperimentConfig& config);

struct ReportFiles {
    std::vector<std::filesystem::path> files;
};

/// Summary markdown (accuracy, standard error, mean rank) for one matrix.
std::string summary_markdown(const std::string& title, const AccuracyMatrix& matrix, double alpha);

/// Writes <group>_summary.md, <group>_pairwise.csv, <group>_cd.svg and
/// <group>_boxplot.csv for each simulator (and "pooled" when enabled).
ReportFiles write_reports(const ResultsDocument& doc, const std::filesystem::path& outputDir);

/// Re-renders all report artifacts from a stored results document.
ReportFiles report(const std::filesystem::path& resultsPath, const std::filesystem::path& outputDir);

} // namespace tscsim
