#include "tscsim/experiment.hpp"

#include "tscsim/dataset_io.hpp"
#include "tscsim/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace tscsim {

namespace {

using Json = nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

constexpr const char* kSchemaName = "tscsim.results";

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed for a classifier's own randomness inside one resample; keyed by name so
// adding a classifier leaves the others' draws unchanged.
std::uint64_t classifier_seed(std::uint64_t datasetSeed, const std::string& name) {
    return mix64(datasetSeed ^ mix64(fnv1a(name)));
}

Json common_to_json(const CommonParams& c) {
    return Json{{"nos_classes", c.nosClasses},  {"series_length", c.seriesLength},
                {"cases_per_class", c.casesPerClass}, {"train_prop", c.trainProp},
                {"noise_sigma", c.noiseSigma}, {"amplitude", c.amplitude}};
}

Json params_to_json(const FamilyParams& params) {
    Json j = std::visit(
        Overloaded{
            [](const ElasticParams& p) { return Json{{"min_stretch", p.minStretch}}; },
            [](const IntervalParams& p) {
                return Json{{"num_intervals", p.numIntervals},
                            {"shape_to_noise_ratio", p.shapeToNoiseRatio},
                            {"interval_length", p.interval_length()}};
            },
            [](const ShapeletParams& p) {
                return Json{{"num_shapelets", p.numShapelets},
                            {"shapelet_length", p.shapeletLength}};
            },
            [](const DictionaryParams& p) {
                return Json{{"shapelets_per_class", p.shapeletsPerClass},
                            {"shape_length", p.shapeLength}};
            },
            [](const ArmaParams& p) {
                Json out{{"burn_in", p.burnIn}};
                if (p.coefficients) {
                    out["coefficients"] = Json::array({(*p.coefficients)[0], (*p.coefficients)[1]});
                } else {
                    out["coefficients"] = "auto-ar2";
                }
                return out;
            },
        },
        params);
    j["common"] = common_to_json(common_of(params));
    return j;
}

Json config_to_json(const ExperimentConfig& config) {
    Json sims = Json::array();
    Json params = Json::object();
    for (const auto kind : config.simulators) {
        sims.push_back(std::string(to_string(kind)));
        params[std::string(to_string(kind))] = params_to_json(config.params_for(kind));
    }
    Json classifiers = Json::array();
    for (const auto& c : config.classifiers) {
        classifiers.push_back(Json{{"name", c.name},
                                   {"window_grid", c.windowGrid},
                                   {"num_trees", c.numTrees},
                                   {"intervals_per_tree", c.intervalsPerTree},
                                   {"normalize", c.normalize}});
    }
    return Json{{"simulators", sims},
                {"pooled", config.pooled},
                {"resamples", config.resamples},
                {"master_seed", config.masterSeed},
                {"classifiers", classifiers},
                {"params", params},
                {"alpha", config.alpha}};
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string percent(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f%%", 100.0 * v);
    return buffer;
}

std::string fixed2(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return buffer;
}

ResampleResult run_resample(const ExperimentConfig& config, SimulatorKind kind, std::size_t index) {
    using Clock = std::chrono::steady_clock;
    ResampleResult result;
    result.index = index;
    result.seed = child_seed(config.masterSeed, static_cast<std::uint64_t>(kind), index);
    std::optional<DatasetPair> data;
    std::string generationError;
    try {
        data = generate_resample(config.params_for(kind), config.masterSeed, index);
    } catch (const std::exception& e) {
        generationError = std::string("generation failed: ") + e.what();
    }
    for (const auto& spec : config.classifiers) {
        CellResult cell;
        cell.classifier = spec.name;
        if (!data) {
            cell.error = generationError;
            result.cells.push_back(std::move(cell));
            continue;
        }
        try {
            const auto fitStart = Clock::now();
            const auto model = fit_classifier(spec, data->train, classifier_seed(result.seed, spec.name));
            const auto fitEnd = Clock::now();
            const Prediction prediction = predict_all(*model, data->test);
            const auto predictEnd = Clock::now();
            cell.fitSeconds = std::chrono::duration<double>(fitEnd - fitStart).count();
            cell.predictSeconds = std::chrono::duration<double>(predictEnd - fitEnd).count();
            if (std::isnan(prediction.accuracy)) {
                cell.error = "empty test set";
            } else {
                cell.accuracy = prediction.accuracy;
            }
            cell.summary = model->summary();
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
    }
    return result;
}

} // namespace

FamilyParams ExperimentConfig::params_for(SimulatorKind kind) const {
    const auto it = baseParams.find(kind);
    FamilyParams params = it != baseParams.end() ? it->second : default_params(kind);
    if (kind_of(params) != kind) {
        throw ConfigError("base parameters for " + std::string(to_string(kind)) +
                          " belong to another simulator");
    }
    CommonParams& c = common_of(params);
    if (noiseSigma) {
        c.noiseSigma = *noiseSigma;
    }
    if (amplitude) {
        c.amplitude = *amplitude;
    }
    if (trainProp) {
        c.trainProp = *trainProp;
    }
    return params;
}

void ExperimentConfig::validate() const {
    if (simulators.empty()) {
        throw ConfigError("no simulators selected");
    }
    if (resamples < 1) {
        throw ConfigError("resamples must be at least 1");
    }
    if (classifiers.empty()) {
        throw ConfigError("no classifiers selected");
    }
    if (jobs < 1) {
        throw ConfigError("jobs must be at least 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    std::set<std::string> names;
    for (const auto& c : classifiers) {
        if (!is_known_classifier(c.name)) {
            throw ConfigError("unknown classifier '" + c.name + "'");
        }
        if (!names.insert(c.name).second) {
            throw ConfigError("classifier '" + c.name + "' listed twice");
        }
        if (c.name == "dtw1nn_cv" && c.windowGrid.empty()) {
            throw ConfigError("dtw1nn_cv needs a non-empty window grid");
        }
        for (const double w : c.windowGrid) {
            if (!(w >= 0.0 && w <= 1.0)) {
                throw ConfigError("window fractions must lie in [0, 1]");
            }
        }
        if (c.name == "ivf" && c.numTrees == 0) {
            throw ConfigError("ivf needs at least one tree");
        }
    }
    std::set<SimulatorKind> seen;
    for (const auto kind : simulators) {
        if (!seen.insert(kind).second) {
            throw ConfigError("simulator '" + std::string(to_string(kind)) + "' listed twice");
        }
        const FamilyParams params = params_for(kind);
        validate_params(params);
        const auto& c = common_of(params);
        for (const auto count : c.casesPerClass) {
            const auto take = static_cast<std::size_t>(
                std::floor(c.trainProp * static_cast<double>(count) + 0.5));
            if (take == 0) {
                throw ConfigError("trainProp gives a class of " + std::string(to_string(kind)) +
                                  " no training cases");
            }
            if (take >= count) {
                throw ConfigError("trainProp leaves a class of " + std::string(to_string(kind)) +
                                  " no test cases");
            }
        }
    }
}

AccuracyMatrix accuracy_matrix(const ResultsDocument& doc, std::optional<SimulatorKind> simulator) {
    std::vector<std::vector<double>> rows;
    for (const auto& exp : doc.experiments) {
        if (simulator && exp.simulator != *simulator) {
            continue;
        }
        for (const auto& r : exp.resamples) {
            std::vector<double> row;
            row.reserve(r.cells.size());
            for (const auto& cell : r.cells) {
                row.push_back(cell.accuracy ? *cell.accuracy
                                            : std::numeric_limits<double>::quiet_NaN());
            }
            rows.push_back(std::move(row));
        }
    }
    return {doc.classifiers, std::move(rows)};
}

std::string results_to_json(const ResultsDocument& doc, bool includeTiming) {
    Json experiments = Json::array();
    for (const auto& exp : doc.experiments) {
        Json resamples = Json::array();
        for (const auto& r : exp.resamples) {
            Json cells = Json::array();
            for (const auto& cell : r.cells) {
                Json c{{"classifier", cell.classifier}};
                c["accuracy"] = cell.accuracy ? Json(*cell.accuracy) : Json(nullptr);
                c["error"] = cell.error ? Json(*cell.error) : Json(nullptr);
                Json summary = Json::object();
                for (const auto& [key, value] : cell.summary) {
                    summary[key] = value;
                }
                c["summary"] = summary;
                if (includeTiming) {
                    c["timing"] = Json{{"fit_seconds", cell.fitSeconds},
                                       {"predict_seconds", cell.predictSeconds}};
                }
                cells.push_back(std::move(c));
            }
            resamples.push_back(Json{{"index", r.index}, {"seed", r.seed}, {"cells", cells}});
        }
        experiments.push_back(
            Json{{"simulator", std::string(to_string(exp.simulator))}, {"resamples", resamples}});
    }
    Json root{{"schema", kSchemaName},
              {"schema_version", doc.schemaVersion},
              {"config", Json::parse(doc.configJson)},
              {"classifiers", doc.classifiers},
              {"pooled", doc.pooled},
              {"alpha", doc.alpha},
              {"experiments", experiments}};
    return root.dump(2) + "\n";
}

ResultsDocument results_from_json(const std::string& text, const std::string& source) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source, line_of(text, e.byte), e.what());
    }
    if (!root.is_object()) {
        throw ParseError(source, 1, "results document must be a JSON object");
    }
    if (!root.contains("schema") || root.at("schema") != kSchemaName) {
        throw SchemaError(source + ": not a " + std::string(kSchemaName) + " document");
    }
    const Json& version = require(root, "schema_version", source);
    if (!version.is_number_integer() || version.get<int>() != kResultsSchemaVersion) {
        throw SchemaError(source + ": unsupported results schema version " + version.dump() +
                          " (this build reads version " + std::to_string(kResultsSchemaVersion) +
                          ")");
    }
    ResultsDocument doc;
    try {
        doc.configJson = require(root, "config", source).dump();
        doc.classifiers = require(root, "classifiers", source).get<std::vector<std::string>>();
        doc.pooled = require(root, "pooled", source).get<bool>();
        doc.alpha = require(root, "alpha", source).get<double>();
        const Json& experiments = require(root, "experiments", source);
        for (std::size_t e = 0; e < experiments.size(); ++e) {
            const Json& exp = experiments.at(e);
            const std::string where = "experiments[" + std::to_string(e) + "]";
            SimulatorResults sr;
            sr.simulator =
                simulator_kind_from_string(require(exp, "simulator", where).get<std::string>());
            const Json& resamples = require(exp, "resamples", where);
            for (std::size_t r = 0; r < resamples.size(); ++r) {
                const Json& rj = resamples.at(r);
                const std::string rWhere = where + ".resamples[" + std::to_string(r) + "]";
                ResampleResult rr;
                rr.index = require(rj, "index", rWhere).get<std::size_t>();
                rr.seed = require(rj, "seed", rWhere).get<std::uint64_t>();
                const Json& cells = require(rj, "cells", rWhere);
                if (cells.size() != doc.classifiers.size()) {
                    throw ValidationError(rWhere + ": has " + std::to_string(cells.size()) +
                                          " cells for " + std::to_string(doc.classifiers.size()) +
                                          " classifiers");
                }
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    const Json& cj = cells.at(c);
                    const std::string cWhere = rWhere + ".cells[" + std::to_string(c) + "]";
                    CellResult cell;
                    cell.classifier = require(cj, "classifier", cWhere).get<std::string>();
                    if (cell.classifier != doc.classifiers[c]) {
                        throw ValidationError(cWhere + ": classifier '" + cell.classifier +
                                              "' out of order (expected '" + doc.classifiers[c] +
                                              "')");
                    }
                    const Json& acc = require(cj, "accuracy", cWhere);
                    if (!acc.is_null()) {
                        const double v = acc.get<double>();
                        if (!(v >= 0.0 && v <= 1.0)) {
                            throw ValidationError(cWhere + " (" + std::string(to_string(sr.simulator)) +
                                                  " resample " + std::to_string(rr.index) + ", " +
                                                  cell.classifier + "): accuracy " + acc.dump() +
                                                  " outside [0, 1]");
                        }
                        cell.accuracy = v;
                    }
                    if (cj.contains("error") && !cj.at("error").is_null()) {
                        cell.error = cj.at("error").get<std::string>();
                    }
                    if (!cell.accuracy && !cell.error) {
                        throw ValidationError(cWhere + ": neither accuracy nor failure marker");
                    }
                    if (cj.contains("summary")) {
                        for (const auto& [key, value] : cj.at("summary").items()) {
                            cell.summary.emplace_back(key, value.get<double>());
                        }
                    }
                    if (cj.contains("timing")) {
                        const Json& t = cj.at("timing");
                        cell.fitSeconds = t.value("fit_seconds", 0.0);
                        cell.predictSeconds = t.value("predict_seconds", 0.0);
                    }
                    rr.cells.push_back(std::move(cell));
                }
                sr.resamples.push_back(std::move(rr));
            }
            doc.experiments.push_back(std::move(sr));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(source + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return doc;
}

void write_results(const ResultsDocument& doc, const std::filesystem::path& path) {
    write_text(path, results_to_json(doc));
}

ResultsDocument read_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return results_from_json(text.str(), path.string());
}

ResultsDocument run_experiment(const ExperimentConfig& config) {
    config.validate();

    ResultsDocument doc;
    doc.configJson = config_to_json(config).dump();
    doc.pooled = config.pooled;
    doc.alpha = config.alpha;
    for (const auto& c : config.classifiers) {
        doc.classifiers.push_back(c.name);
    }

    struct Task {
        std::size_t experiment;
        std::size_t resample;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < config.simulators.size(); ++e) {
        SimulatorResults sr;
        sr.simulator = config.simulators[e];
        sr.resamples.resize(config.resamples);
        doc.experiments.push_back(std::move(sr));
        for (std::size_t r = 0; r < config.resamples; ++r) {
            tasks.push_back({e, r});
        }
    }

    // Each task writes only its own slot, so the merge is by index.
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
            const Task task = tasks[t];
            doc.experiments[task.experiment].resamples[task.resample] =
                run_resample(config, config.simulators[task.experiment], task.resample);
        }
    };
    const std::size_t threads = std::min(config.jobs, tasks.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    if (!config.outputDir.empty()) {
        write_results(doc, config.outputDir / "results.json");
        write_reports(doc, config.outputDir);
    }
    return doc;
}

std::string summary_markdown(const std::string& title, const AccuracyMatrix& matrix, double alpha) {
    const RankSummary summary = summarize(matrix);
    std::ostringstream md;
    md << "# " << title << "\n\n";
    md << "Resamples used: " << summary.rowsUsed << " (excluded with failed cells: "
       << summary.rowsExcluded << ")\n\n";
    md << "| Classifier | Mean accuracy | Standard error | Mean rank |\n";
    md << "|---|---|---|---|\n";
    for (const auto idx : rank_order(summary)) {
        md << "| " << summary.classifiers[idx] << " | " << percent(summary.meanAccuracy[idx])
           << " | " << percent(summary.standardError[idx]) << " | "
           << fixed2(summary.meanRank[idx]) << " |\n";
    }
    md << '\n';
    const AccuracyMatrix complete = matrix.complete_rows();
    if (complete.num_classifiers() >= 3 && complete.num_rows() >= 2) {
        const auto f = friedman_test(complete);
        char line[128];
        std::snprintf(line, sizeof line, "Friedman: chi2 = %.4f, df = %zu, p = %.4g\n", f.statistic,
                      f.degreesOfFreedom, f.pValue);
        md << line;
    } else {
        md << "Friedman: not applicable (needs at least 3 classifiers and 2 complete resamples)\n";
    }
    if (complete.num_rows() > 0) {
        const auto pairs = pairwise_wilcoxon(complete, alpha);
        const auto cliques = form_cliques(summary, pairs);
        md << "\nCliques (Wilcoxon signed-rank, Holm alpha = " << alpha << "):";
        for (const auto& clique : cliques.cliques) {
            md << " {";
            for (std::size_t i = 0; i < clique.size(); ++i) {
                md << (i ? ", " : "") << summary.classifiers[clique[i]];
            }
            md << "}";
        }
        md << "\n";
        if (!cliques.anomalies.empty()) {
            md << "\nWarning: not significantly different but split across cliques:";
            for (const auto& [a, b] : cliques.anomalies) {
                md << " (" << summary.classifiers[a] << ", " << summary.classifiers[b] << ")";
            }
            md << "\n";
        }
    }
    return md.str();
}

ReportFiles write_reports(const ResultsDocument& doc, const std::filesystem::path& outputDir) {
    std::vector<std::pair<std::string, AccuracyMatrix>> groups;
    for (const auto& exp : doc.experiments) {
        groups.emplace_back(std::string(to_string(exp.simulator)), accuracy_matrix(doc, exp.simulator));
    }
    if (doc.pooled) {
        groups.emplace_back("pooled", accuracy_matrix(doc));
    }
    ReportFiles out;
    for (const auto& [name, matrix] : groups) {
        const auto md = outputDir / (name + "_summary.md");
        write_text(md, summary_markdown(name, matrix, doc.alpha));
        out.files.push_back(md);

        const auto box = outputDir / (name + "_boxplot.csv");
        boxplot_summary(matrix, box);
        out.files.push_back(box);

        const AccuracyMatrix complete = matrix.complete_rows();
        if (complete.num_classifiers() < 2 || complete.num_rows() == 0) {
            continue;
        }
        const RankSummary summary = summarize(complete);
        const auto pairs = pairwise_wilcoxon(complete, doc.alpha);
        std::ostringstream csv;
        csv << "first,second,statistic,p_value,n,exact,rejected\n";
        for (const auto& p : pairs) {
            csv << doc.classifiers[p.first] << ',' << doc.classifiers[p.second] << ','
                << format_value(p.test.statistic) << ',' << format_value(p.test.pValue) << ','
                << p.test.effectiveN << ',' << (p.test.exact ? 1 : 0) << ','
                << (p.rejected ? 1 : 0) << '\n';
        }
        const auto pairwisePath = outputDir / (name + "_pairwise.csv");
        write_text(pairwisePath, csv.str());
        out.files.push_back(pairwisePath);

        const auto svg = outputDir / (name + "_cd.svg");
        render_cd_diagram(summary, form_cliques(summary, pairs), svg);
        out.files.push_back(svg);
    }
    return out;
}

ReportFiles report(const std::filesystem::path& resultsPath, const std::filesystem::path& outputDir) {
    return write_reports(read_results(resultsPath), outputDir);
}

} // namespace tscsim
