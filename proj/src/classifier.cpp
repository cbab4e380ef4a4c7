#include "lsfault/classifier.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "lsfault/errors.hpp"

namespace lsfault {

std::string_view module_name(Module m) {
    switch (m) {
        case Module::R: return "R";
        case Module::Y: return "Y";
        case Module::B: return "B";
        case Module::G: return "G";
        case Module::Section: return "section";
    }
    return "?";
}

Module parse_module(std::string_view name) {
    for (auto m : kModules)
        if (module_name(m) == name) return m;
    if (name == "r") return Module::R;
    if (name == "y") return Module::Y;
    if (name == "b") return Module::B;
    if (name == "g") return Module::G;
    if (name == "S" || name == "s") return Module::Section;
    throw InvalidInput("unknown module '" + std::string(name) + "'");
}

LabeledSample make_sample(const ThreePhaseRecord& record, std::size_t scenario_id) {
    return {extract_window(record), label_for(record.scenario), scenario_id};
}

std::vector<LabeledSample> make_samples(std::span<const ThreePhaseRecord> records) {
    std::vector<LabeledSample> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) out.push_back(make_sample(records[i], i));
    return out;
}

int module_target(const FaultLabel& label, Module m) {
    switch (m) {
        case Module::R: return label.r;
        case Module::Y: return label.y;
        case Module::B: return label.b;
        case Module::G: return label.g;
        case Module::Section: return label.section;
    }
    return 0;
}

TrainingOptions TrainingOptions::searched(KernelFamily family, const GridSearchConfig& grid) {
    TrainingOptions o;
    for (auto& m : o.modules) {
        m.family = family;
        m.grid = grid;
    }
    return o;
}

TrainingOptions TrainingOptions::fixed(const KernelSpec& kernel, double gamma) {
    TrainingOptions o;
    for (auto& m : o.modules) {
        m.family = kernel.family;
        m.fixed = FixedParameters{kernel, gamma};
    }
    return o;
}

RawFeatures model_input(const RawFeatures& raw, const NormStats& stats) {
    static const double shrink = 1.0 / std::sqrt(static_cast<double>(kFeatureCount));
    RawFeatures x = normalize(raw, stats);
    for (double& v : x) v *= shrink;
    return x;
}

TrainingSet module_set(std::span<const LabeledSample> samples, const NormStats& stats, Module m) {
    TrainingSet set;
    set.inputs.reserve(samples.size());
    set.targets.reserve(samples.size());
    for (const auto& s : samples) {
        const RawFeatures x = model_input(s.raw, stats);
        set.inputs.emplace_back(x.begin(), x.end());
        set.targets.push_back(module_target(s.label, m));
    }
    return set;
}

namespace {

// "model_r", ..., "model_section"
std::string model_label(Module m) {
    std::string name = "model_" + std::string(module_name(m));
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return name;
}

void require_two_classes(const TrainingSet& set, Module m) {
    bool pos = false, neg = false;
    for (int t : set.targets) (t > 0 ? pos : neg) = true;
    if (!(pos && neg))
        throw DegenerateDataset(model_label(m),
                                std::string("target column contains only ") + (pos ? "+1" : "-1"));
}

std::pair<LssvmModel, ModuleSummary> fit_module(const TrainingSet& set, Module m,
                                                const ModuleOptions& options) {
    const std::string prefix = model_label(m) + ": ";
    ModuleSummary summary;
    try {
        if (options.fixed) {
            summary.gamma = options.fixed->gamma;
            summary.kernel = options.fixed->kernel;
            summary.cv_accuracy = std::numeric_limits<double>::quiet_NaN();
        } else {
            auto search = grid_search(set, options.family, options.grid);
            summary.gamma = search.best_gamma;
            summary.kernel = search.best_kernel;
            summary.cv_accuracy = search.cv_accuracy;
            summary.search = std::move(search);
        }
        LssvmModel model = train(set, summary.kernel, summary.gamma);
        summary.kkt_residual = kkt_residual(model, set.targets);
        return {std::move(model), std::move(summary)};
    } catch (const NumericalFailure& e) {
        throw NumericalFailure(prefix + e.what(), e.rcond(), e.residual());
    } catch (const GridSearchFailure& e) {
        throw GridSearchFailure(prefix + e.what());
    }
}

}  // namespace

FaultClassifier train_modular(std::span<const LabeledSample> samples, const TrainingOptions& options) {
    if (samples.size() < 2) throw InvalidInput("need at least two training samples");

    std::array<TrainingSet, kModuleCount> sets;
    std::vector<RawFeatures> raw;
    raw.reserve(samples.size());
    for (const auto& s : samples) raw.push_back(s.raw);

    FaultClassifier clf;
    clf.norm_stats = fit_normalizer(raw);
    for (auto m : kModules) {
        auto& set = sets[static_cast<std::size_t>(m)];
        set = module_set(samples, clf.norm_stats, m);
        require_two_classes(set, m);
    }
    for (auto m : kModules) {
        const auto i = static_cast<std::size_t>(m);
        auto [model, summary] = fit_module(sets[i], m, options.modules[i]);
        clf.models[i] = std::move(model);
        clf.summary[i] = std::move(summary);
    }
    return clf;
}

void retrain_module(FaultClassifier& classifier, Module m, std::span<const LabeledSample> samples,
                    const ModuleOptions& options) {
    const TrainingSet set = module_set(samples, classifier.norm_stats, m);
    require_two_classes(set, m);
    auto [model, summary] = fit_module(set, m, options);
    const auto i = static_cast<std::size_t>(m);
    classifier.models[i] = std::move(model);
    classifier.summary[i] = std::move(summary);
}

std::string_view DecodedCode::name() const {
    switch (kind) {
        case Kind::Fault: return fault_name(type);
        case Kind::NoFault: return "NONE";
        case Kind::InvalidCode: return "INVALID";
    }
    return "?";
}

DecodedCode decode_fault_type(int r, int y, int b, int g) {
    for (int v : {r, y, b, g})
        if (v != 1 && v != -1) throw InvalidInput("module outputs must be +1 or -1");
    const std::array<int, 4> code{r, y, b, g};
    if (code == std::array<int, 4>{-1, -1, -1, -1}) return {DecodedCode::Kind::NoFault, FaultType::None};
    for (auto t : kFaultClasses)
        if (targets_from_fault_type(t) == code) return {DecodedCode::Kind::Fault, t};
    return {DecodedCode::Kind::InvalidCode, FaultType::None};
}

Classification classify(const FaultClassifier& classifier, const RawFeatures& raw) {
    const RawFeatures x = model_input(raw, classifier.norm_stats);
    Classification out;
    for (auto m : kModules) {
        const auto i = static_cast<std::size_t>(m);
        out.decision_values[i] = decision_value(classifier.models[i], x);
    }
    for (std::size_t i = 0; i < 4; ++i) out.code[i] = sign_label(out.decision_values[i]);
    out.section = sign_label(out.decision_values[static_cast<std::size_t>(Module::Section)]);
    out.decoded = decode_fault_type(out.code);
    return out;
}

Classification classify(const FaultClassifier& classifier, const ThreePhaseRecord& record) {
    return classify(classifier, extract_window(record));
}

int identify_section(const FaultClassifier& classifier, const ThreePhaseRecord& record) {
    const RawFeatures x = model_input(extract_window(record), classifier.norm_stats);
    return predict(classifier.model(Module::Section), x);
}

std::size_t ClassificationReport::class_total(std::size_t row) const {
    std::size_t sum = 0;
    for (auto c : confusion[row]) sum += c;
    return sum;
}

ClassificationReport evaluate(const FaultClassifier& classifier, std::span<const LabeledSample> samples) {
    if (samples.empty()) throw InvalidInput("evaluation set is empty");
    ClassificationReport rep;
    std::size_t section_correct = 0;
    std::size_t trace = 0;

    for (const auto& s : samples) {
        const FaultType truth = parse_fault_type(s.label.fault_name);
        const Classification c = classify(classifier, s.raw);

        if (truth != FaultType::None) {
            ++rep.section_total;
            if (c.section == s.label.section) ++section_correct;
        }
        const int row = class_index(truth);
        if (row < 0) {
            ++rep.unscored_count;
            continue;
        }
        ++rep.total;
        std::size_t col = kInvalidColumn;
        if (c.decoded.valid()) col = static_cast<std::size_t>(class_index(c.decoded.type));
        else ++rep.invalid_code_count;
        ++rep.confusion[static_cast<std::size_t>(row)][col];
        if (col == static_cast<std::size_t>(row)) ++trace;
    }

    for (std::size_t i = 0; i < rep.per_class_accuracy.size(); ++i) {
        const std::size_t n = rep.class_total(i);
        rep.per_class_accuracy[i] = n == 0 ? std::numeric_limits<double>::quiet_NaN()
                                           : static_cast<double>(rep.confusion[i][i]) / static_cast<double>(n);
    }
    rep.overall_accuracy = rep.total == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(rep.total);
    rep.section_accuracy = rep.section_total == 0
                               ? 0.0
                               : static_cast<double>(section_correct) / static_cast<double>(rep.section_total);
    return rep;
}

}  // namespace lsfault
