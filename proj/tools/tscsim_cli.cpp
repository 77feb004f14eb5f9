// tscsim: generate simulated TSC datasets, run comparison experiments and
// re-render their reports.
//
//   tscsim generate   --simulator shapelet --resamples 3 --format arff --out data/
//   tscsim experiment --simulator all --resamples 25 --classifiers ed1nn,dtw1nn_cv,ivf --out run/
//   tscsim report     run/results.json --out run/
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include "tscsim/dataset_io.hpp"
#include "tscsim/error.hpp"
#include "tscsim/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

struct SharedOptions {
    std::string simulator = "elastic";
    std::size_t resamples = tscsim::kDefaultResamples;
    std::uint64_t seed = 0;
    std::optional<double> noiseSigma;
    std::optional<double> amplitude;
    std::optional<double> trainProp;
    std::string out = ".";
};

void add_shared(CLI::App& cmd, SharedOptions& o) {
    cmd.add_option("--simulator", o.simulator,
                   "elastic|interval|shapelet|dictionary|arma, a comma list, or 'all' (pooled)")
        ->capture_default_str();
    cmd.add_option("--resamples", o.resamples, "Resamples per simulator")->capture_default_str();
    cmd.add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd.add_option("--noise-sigma", o.noiseSigma, "White noise standard deviation");
    cmd.add_option("--amplitude", o.amplitude, "Shape amplitude in noise-sigma units");
    cmd.add_option("--train-prop", o.trainProp, "Per-class train proportion");
    cmd.add_option("--out", o.out, "Output directory")->capture_default_str();
}

std::pair<std::vector<tscsim::SimulatorKind>, bool> parse_simulators(const std::string& text) {
    if (text == "all") {
        return {{tscsim::kAllSimulatorKinds.begin(), tscsim::kAllSimulatorKinds.end()}, true};
    }
    std::vector<tscsim::SimulatorKind> kinds;
    for (const auto& name : split_list(text)) {
        kinds.push_back(tscsim::simulator_kind_from_string(name));
    }
    if (kinds.empty()) {
        throw tscsim::ConfigError("no simulator given");
    }
    return {kinds, false};
}

tscsim::FamilyParams with_overrides(tscsim::SimulatorKind kind, const SharedOptions& o) {
    tscsim::ExperimentConfig config;
    config.noiseSigma = o.noiseSigma;
    config.amplitude = o.amplitude;
    config.trainProp = o.trainProp;
    return config.params_for(kind);
}

int run_generate(const SharedOptions& o, const std::string& format) {
    const auto dataFormat = tscsim::data_format_from_string(format);
    const auto [kinds, pooled] = parse_simulators(o.simulator);
    if (o.resamples < 1) {
        throw tscsim::ConfigError("resamples must be at least 1");
    }
    for (const auto kind : kinds) {
        tscsim::validate_params(with_overrides(kind, o));
    }
    for (const auto kind : kinds) {
        const auto params = with_overrides(kind, o);
        for (std::size_t r = 0; r < o.resamples; ++r) {
            const auto ds = tscsim::generate_resample(params, o.seed, r);
            for (const auto& w : ds.warnings) {
                std::cerr << "warning: " << ds.meta.name << ": " << w << '\n';
            }
            const auto files = tscsim::write_dataset(ds, dataFormat, o.out);
            std::cout << files.train.string() << '\n' << files.test.string() << '\n';
        }
    }
    return 0;
}

int run_experiment(const SharedOptions& o, const std::string& classifiers, std::size_t jobs,
                   bool normalize, double alpha) {
    tscsim::ExperimentConfig config;
    std::tie(config.simulators, config.pooled) = parse_simulators(o.simulator);
    config.resamples = o.resamples;
    config.masterSeed = o.seed;
    config.noiseSigma = o.noiseSigma;
    config.amplitude = o.amplitude;
    config.trainProp = o.trainProp;
    config.outputDir = o.out;
    config.jobs = jobs;
    config.alpha = alpha;
    for (const auto& name : split_list(classifiers)) {
        tscsim::ClassifierSpec spec;
        spec.name = name;
        spec.normalize = normalize;
        config.classifiers.push_back(spec);
    }
    const auto doc = tscsim::run_experiment(config);
    std::size_t failures = 0;
    for (const auto& exp : doc.experiments) {
        for (const auto& r : exp.resamples) {
            for (const auto& cell : r.cells) {
                if (cell.error) {
                    ++failures;
                    std::cerr << "failed: " << to_string(exp.simulator) << " resample " << r.index
                              << " " << cell.classifier << ": " << *cell.error << '\n';
                }
            }
        }
    }
    std::cout << "wrote " << (std::filesystem::path(o.out) / "results.json").string() << '\n';
    for (const auto& exp : doc.experiments) {
        std::cout << '\n'
                  << tscsim::summary_markdown(std::string(to_string(exp.simulator)),
                                              tscsim::accuracy_matrix(doc, exp.simulator), alpha);
    }
    return failures == 0 ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulated time series classification benchmarks"};
    app.require_subcommand(1);

    SharedOptions generateOpts;
    std::string format = "arff";
    auto* generate = app.add_subcommand("generate", "Write simulated datasets as ARFF or CSV");
    add_shared(*generate, generateOpts);
    generate->add_option("--format", format, "arff|csv")->capture_default_str();

    SharedOptions experimentOpts;
    std::string classifiers = "ed1nn,dtw1nn_cv,ivf";
    std::size_t jobs = 1;
    bool normalize = false;
    double alpha = tscsim::kDefaultAlpha;
    auto* experiment = app.add_subcommand("experiment", "Generate, fit, score and report");
    add_shared(*experiment, experimentOpts);
    experiment->add_option("--classifiers", classifiers, "Comma list of ed1nn, dtw1nn_full, dtw1nn_cv, ivf")
        ->capture_default_str();
    experiment->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    experiment->add_flag("--normalize", normalize, "Z-normalise every series before classification");
    experiment->add_option("--alpha", alpha, "Family-wise alpha for the Holm correction")
        ->capture_default_str();

    std::string resultsPath;
    std::string reportOut = ".";
    auto* report = app.add_subcommand("report", "Re-render reports from a results document");
    report->add_option("results", resultsPath, "results.json")->required();
    report->add_option("--out", reportOut, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*generate) {
            return run_generate(generateOpts, format);
        }
        if (*experiment) {
            return run_experiment(experimentOpts, classifiers, jobs, normalize, alpha);
        }
        if (*report) {
            const auto files = tscsim::report(resultsPath, reportOut);
            for (const auto& f : files.files) {
                std::cout << f.string() << '\n';
            }
            return 0;
        }
    } catch (const tscsim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
