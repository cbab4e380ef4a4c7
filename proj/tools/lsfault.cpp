// lsfault: dataset generation, training, evaluation, sweeps and single-record
// classification for the series-compensated line fault classifier.
//
// Exit codes: 0 ok, 2 I/O or input format, 3 numerical/training, 4 invalid code.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsfault/classifier.hpp"
#include "lsfault/errors.hpp"
#include "lsfault/fault_sim.hpp"
#include "lsfault/io.hpp"

namespace fs = std::filesystem;
using namespace lsfault;

namespace {

constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvalidCode = 4;

struct GenerateArgs {
    std::string out;
    std::string preset = "train";
    std::uint64_t seed = 42;
    std::vector<std::string> fault_types;
    std::vector<double> locations, resistances, inception_angles, compensations, load_angles;
    std::optional<std::string> snr;
    std::optional<std::size_t> limit;
    std::optional<int> post_cycles;
};

struct SearchArgs {
    std::string dataset;
    std::string kernel = "rbf";
    std::optional<double> gamma;
    std::optional<double> sigma2;
    std::optional<int> degree;
    std::vector<double> gamma_grid;
    std::vector<double> sigma2_grid;
    std::size_t folds = 5;
    std::uint64_t seed = 42;
};

struct TrainArgs {
    SearchArgs search;
    std::string model;
};

struct EvaluateArgs {
    std::string model;
    std::string dataset;
    std::string report;
};

struct SweepArgs {
    SearchArgs search;
    std::string module = "R";
    std::string out;
};

struct ClassifyArgs {
    std::string model;
    std::string record;
    std::optional<std::size_t> id;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

void require_writable_parent(const std::string& path) {
    fs::path parent = fs::path(path).parent_path();
    if (parent.empty()) parent = ".";
    std::error_code ec;
    if (!fs::is_directory(parent, ec)) throw IoError("directory '" + parent.string() + "' does not exist");
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

double parse_snr(const std::string& s) {
    if (s == "inf" || s == "none") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw InvalidInput("--snr expects a number of dB or 'inf'");
    return v;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string describe_choice(const ModuleSummary& s) {
    return describe(s.kernel) + " gamma=" + fmt("%g", s.gamma);
}

// ---------------------------------------------------------------- generate

int cmd_generate(const GenerateArgs& a) {
    ScenarioGrid grid;
    if (a.preset == "train") grid = ScenarioGrid::default_train();
    else if (a.preset == "test") grid = ScenarioGrid::default_test();
    else throw InvalidInput("--preset must be 'train' or 'test'");

    bool axes_changed = false;
    if (!a.fault_types.empty()) {
        grid.fault_types.clear();
        for (const auto& n : a.fault_types) grid.fault_types.push_back(parse_fault_type(n));
        axes_changed = true;
    }
    auto take = [&](std::vector<double>& axis, const std::vector<double>& given) {
        if (given.empty()) return;
        axis = given;
        axes_changed = true;
    };
    take(grid.locations, a.locations);
    take(grid.resistances, a.resistances);
    take(grid.inception_angles, a.inception_angles);
    take(grid.compensations, a.compensations);
    take(grid.load_angles, a.load_angles);
    if (axes_changed) grid.limit = 0;
    if (a.limit) grid.limit = *a.limit;
    if (a.snr) grid.snr_db = parse_snr(*a.snr);
    if (a.post_cycles) grid.post_cycles = *a.post_cycles;
    grid.validate();

    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (!fs::is_directory(a.out)) throw IoError("cannot create output directory '" + a.out + "'");

    const LineParameters line;
    const auto records = generate_dataset(line, grid, a.seed);
    const auto samples = make_samples(records);

    const fs::path dir(a.out);
    write_file((dir / "features.csv").string(), [&](std::ostream& o) { write_feature_csv(o, samples); });
    write_file((dir / "scenarios.csv").string(), [&](std::ostream& o) { write_scenario_csv(o, records); });
    write_file((dir / "records.csv").string(), [&](std::ostream& o) { write_records_csv(o, records); });
    std::cout << "generated " << records.size() << " records in " << a.out << '\n';
    return 0;
}

// ------------------------------------------------------------ train / sweep

// Fixed (kernel, gamma) when every parameter is pinned; otherwise a grid search
// with any pinned parameter collapsed to a single grid point.
ModuleOptions module_options(const SearchArgs& a) {
    ModuleOptions opt;
    opt.family = parse_kernel_family(a.kernel);
    GridSearchConfig& g = opt.grid;
    if (!a.gamma_grid.empty()) g.gamma_grid = a.gamma_grid;
    if (!a.sigma2_grid.empty()) g.sigma2_grid = a.sigma2_grid;
    g.folds = a.folds;
    g.seed = a.seed;

    KernelSpec k;
    k.family = opt.family;
    if (a.sigma2) k.sigma2 = *a.sigma2;
    if (a.degree) k.degree = *a.degree;
    k.offset = g.poly_offset;

    const bool param_pinned = opt.family == KernelFamily::RBF        ? a.sigma2.has_value()
                              : opt.family == KernelFamily::Polynomial ? a.degree.has_value()
                                                                       : true;
    if (a.gamma && param_pinned) {
        k.validate();
        opt.fixed = FixedParameters{k, *a.gamma};
        return opt;
    }
    if (a.gamma) g.gamma_grid = {*a.gamma};
    if (a.sigma2) g.sigma2_grid = {*a.sigma2};
    if (a.degree) g.degree_grid = {*a.degree};
    return opt;
}

std::vector<LabeledSample> load_dataset(const std::string& path) {
    auto in = open_in(path);
    auto samples = read_feature_csv(in);
    if (samples.size() < 2) throw IoError("dataset '" + path + "' needs at least two rows");
    return samples;
}

int cmd_train(const TrainArgs& a) {
    require_writable_parent(a.model);
    const auto samples = load_dataset(a.search.dataset);
    const ModuleOptions per_module = module_options(a.search);
    TrainingOptions options;
    options.modules.fill(per_module);

    const FaultClassifier clf = train_modular(samples, options);
    write_file(a.model, [&](std::ostream& o) { save_model(o, clf); });

    std::cout << "trained on " << samples.size() << " records\n";
    for (auto m : kModules) {
        const auto& s = clf.summary[static_cast<std::size_t>(m)];
        std::string cv = std::isnan(s.cv_accuracy) ? std::string("fixed") : fmt("%.4f", s.cv_accuracy);
        char line[256];
        std::snprintf(line, sizeof line, "  %-8s %-28s cv=%-7s residual=%.2e\n",
                      std::string(module_name(m)).c_str(), describe_choice(s).c_str(), cv.c_str(),
                      s.kkt_residual);
        std::cout << line;
    }
    std::cout << "model written to " << a.model << '\n';
    return 0;
}

int cmd_sweep(const SweepArgs& a) {
    if (!a.out.empty()) require_writable_parent(a.out);
    const auto samples = load_dataset(a.search.dataset);
    const Module m = parse_module(a.module);
    ModuleOptions opt = module_options(a.search);
    if (opt.fixed) {
        opt.grid.gamma_grid = {opt.fixed->gamma};
        opt.grid.sigma2_grid = {opt.fixed->kernel.sigma2};
        opt.grid.degree_grid = {opt.fixed->kernel.degree};
    }

    std::vector<RawFeatures> raw;
    raw.reserve(samples.size());
    for (const auto& s : samples) raw.push_back(s.raw);
    const TrainingSet set = module_set(samples, fit_normalizer(raw), m);
    const GridSearchResult res = grid_search(set, opt.family, opt.grid);

    const char* param = opt.family == KernelFamily::RBF          ? "sigma2"
                        : opt.family == KernelFamily::Polynomial ? "degree"
                        : opt.family == KernelFamily::MLP        ? "kappa"
                                                                 : "param";
    auto emit = [&](std::ostream& o) {
        o << "gamma," << param << ",module,cv_accuracy\n";
        for (const auto& c : res.full_surface) {
            std::string p;
            switch (opt.family) {
                case KernelFamily::RBF: p = format_real(c.kernel.sigma2); break;
                case KernelFamily::Polynomial: p = std::to_string(c.kernel.degree); break;
                case KernelFamily::MLP: p = format_real(c.kernel.kappa); break;
                case KernelFamily::Linear: break;
            }
            o << format_real(c.gamma) << ',' << p << ',' << module_name(m) << ',' << format_real(c.accuracy)
              << '\n';
        }
    };
    if (a.out.empty()) {
        emit(std::cout);
    } else {
        write_file(a.out, emit);
        std::cout << "best " << describe(res.best_kernel) << " gamma=" << fmt("%g", res.best_gamma)
                  << " cv=" << fmt("%.4f", res.cv_accuracy) << '\n';
        std::cout << res.full_surface.size() << " cells written to " << a.out << '\n';
    }
    return 0;
}

// ---------------------------------------------------- evaluate / classify

FaultClassifier load_classifier(const std::string& path) {
    auto in = open_in(path);
    return load_model(in);
}

int cmd_evaluate(const EvaluateArgs& a) {
    if (!a.report.empty()) require_writable_parent(a.report);
    const FaultClassifier clf = load_classifier(a.model);
    const auto samples = load_dataset(a.dataset);
    const ClassificationReport rep = evaluate(clf, samples);
    write_report_text(std::cout, rep);
    if (!a.report.empty()) write_file(a.report, [&](std::ostream& o) { write_report_csv(o, rep); });
    return 0;
}

std::string signed_int(int v) { return v > 0 ? "+1" : "-1"; }

int cmd_classify(const ClassifyArgs& a) {
    const FaultClassifier clf = load_classifier(a.model);
    auto in = open_in(a.record);
    const auto stored = read_records_csv(in);

    const StoredRecord* pick = nullptr;
    if (a.id) {
        for (const auto& s : stored)
            if (s.scenario_id == *a.id) pick = &s;
        if (!pick) throw IoError("no record with scenario_id " + std::to_string(*a.id));
    } else if (stored.size() == 1) {
        pick = &stored.front();
    } else {
        throw IoError("record file holds " + std::to_string(stored.size()) + " records; choose one with --id");
    }

    const Classification c = classify(clf, pick->record);
    std::string out(c.decoded.name());
    out += " section=" + signed_int(c.section);
    out += " code=" + signed_int(c.code[0]) + ',' + signed_int(c.code[1]) + ',' + signed_int(c.code[2]) + ',' +
           signed_int(c.code[3]);
    out += " decision=";
    for (std::size_t i = 0; i < c.decision_values.size(); ++i) {
        if (i) out += ',';
        out += fmt("%.6f", c.decision_values[i]);
    }
    std::cout << out << '\n';
    return c.decoded.valid() ? 0 : kExitInvalidCode;
}

// ------------------------------------------------------------------ config

// Flat key=value file; keys are long option names of the chosen subcommand.
// Options given on the command line win over the file.
std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw IoError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    if (rest.empty()) throw IoError("--config needs a subcommand");

    auto in = open_in(path);
    std::vector<std::string> extra;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError(path + ":" + std::to_string(number) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw IoError(path + ":" + std::to_string(number) + ": empty key");
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& r : rest)
            if (r == flag || r.rfind(flag + "=", 0) == 0) given = true;
        if (!given) {
            extra.push_back(flag);
            extra.push_back(value);
        }
    }
    // Subcommand first, then file values, then the remaining command line.
    std::vector<std::string> merged{rest.front()};
    merged.insert(merged.end(), extra.begin(), extra.end());
    merged.insert(merged.end(), rest.begin() + 1, rest.end());
    return merged;
}

void add_search_flags(CLI::App* sub, SearchArgs& a) {
    sub->add_option("--dataset", a.dataset, "Feature CSV")->required();
    sub->add_option("--kernel", a.kernel, "linear, poly, rbf or mlp")->capture_default_str();
    sub->add_option("--gamma", a.gamma, "Fix gamma");
    sub->add_option("--sigma2", a.sigma2, "Fix the RBF width");
    sub->add_option("--degree", a.degree, "Fix the polynomial degree");
    sub->add_option("--gamma-grid", a.gamma_grid, "Gamma values searched")->delimiter(',');
    sub->add_option("--sigma2-grid", a.sigma2_grid, "RBF widths searched")->delimiter(',');
    sub->add_option("--folds", a.folds, "Cross-validation folds")->capture_default_str();
    sub->add_option("--seed", a.seed, "Fold shuffling seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault type and section classifier for a series-compensated line"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::string config_unused;
    app.add_option("--config", config_unused, "key=value file of option defaults");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Simulate a scenario grid and write CSV files");
    g->add_option("--out", gen.out, "Output directory")->required();
    g->add_option("--preset", gen.preset, "Base grid: train (208 records) or test (916)")->capture_default_str();
    g->add_option("--seed", gen.seed, "Noise and transient seed")->capture_default_str();
    g->add_option("--fault-types", gen.fault_types, "e.g. R-G,RY,RY-G")->delimiter(',');
    g->add_option("--locations", gen.locations, "Percent of line length")->delimiter(',');
    g->add_option("--resistances", gen.resistances, "Fault resistance, ohm")->delimiter(',');
    g->add_option("--inception-angles", gen.inception_angles, "Degrees")->delimiter(',');
    g->add_option("--compensations", gen.compensations, "Percent")->delimiter(',');
    g->add_option("--load-angles", gen.load_angles, "Degrees")->delimiter(',');
    g->add_option("--snr", gen.snr, "Signal-to-noise ratio in dB, or inf");
    g->add_option("--limit", gen.limit, "Thin the grid to this many records (0 keeps all); "
                                        "defaults to the preset's count unless an axis is overridden");
    g->add_option("--post-cycles", gen.post_cycles, "Cycles recorded after inception");

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train the five modules and write a model file");
    add_search_flags(t, train.search);
    t->add_option("--model", train.model, "Model file to write")->required();

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Score a model on a feature CSV");
    e->add_option("--model", ev.model, "Model file")->required();
    e->add_option("--dataset", ev.dataset, "Feature CSV")->required();
    e->add_option("--report", ev.report, "Also write the report as CSV");

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Cross-validated accuracy over the gamma x kernel-parameter grid");
    add_search_flags(s, sw.search);
    s->add_option("--module", sw.module, "R, Y, B, G or section")->capture_default_str();
    s->add_option("--out", sw.out, "CSV file (stdout when omitted)");

    ClassifyArgs cl;
    auto* c = app.add_subcommand("classify", "Classify one record");
    c->add_option("--model", cl.model, "Model file")->required();
    c->add_option("--record", cl.record, "Records CSV")->required();
    c->add_option("--id", cl.id, "scenario_id to pick when the file holds several records");

    try {
        auto args = merge_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitIo;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*t) return cmd_train(train);
        if (*e) return cmd_evaluate(ev);
        if (*s) return cmd_sweep(sw);
        if (*c) return cmd_classify(cl);
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    } catch (const DimensionMismatch& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const DegenerateDataset& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalFailure& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const GridSearchFailure& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const InvalidInput& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
