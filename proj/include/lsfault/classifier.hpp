#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsfault/features.hpp"
#include "lsfault/lssvm.hpp"
#include "lsfault/model_selection.hpp"

namespace lsfault {

/// The five binary modules: three phase selectors, the ground detector and
/// the section identifier.
enum class Module : std::size_t { R = 0, Y = 1, B = 2, G = 3, Section = 4 };
inline constexpr std::size_t kModuleCount = 5;
inline constexpr std::array<Module, kModuleCount> kModules{Module::R, Module::Y, Module::B,
                                                           Module::G, Module::Section};

std::string_view module_name(Module m);  // "R", "Y", "B", "G", "section"
Module parse_module(std::string_view name);

/// One training/evaluation example: raw (un-normalized) window plus truth.
struct LabeledSample {
    RawFeatures raw{};
    FaultLabel label;
    std::size_t scenario_id = 0;
};

LabeledSample make_sample(const ThreePhaseRecord& record, std::size_t scenario_id);
std::vector<LabeledSample> make_samples(std::span<const ThreePhaseRecord> records);

/// +/-1 target of `m` for a label.
int module_target(const FaultLabel& label, Module m);

/// What the kernel machines see: z-scores scaled by 1/sqrt(kFeatureCount).
RawFeatures model_input(const RawFeatures& raw, const NormStats& stats);

/// Inputs and +/-1 targets of one module.
TrainingSet module_set(std::span<const LabeledSample> samples, const NormStats& stats, Module m);

struct FixedParameters {
    KernelSpec kernel;
    double gamma = 100.0;
};

/// How one module picks its hyperparameters: a fixed (kernel, gamma) pair or
/// a cross-validated grid search over `family`.
struct ModuleOptions {
    KernelFamily family = KernelFamily::RBF;
    std::optional<FixedParameters> fixed;
    GridSearchConfig grid;
};

struct TrainingOptions {
    std::array<ModuleOptions, kModuleCount> modules;

    static TrainingOptions searched(KernelFamily family, const GridSearchConfig& grid = {});
    static TrainingOptions fixed(const KernelSpec& kernel, double gamma);
};

/// What was chosen for a module and how well it fitted.
struct ModuleSummary {
    double gamma = 0.0;
    KernelSpec kernel;
    /// Best CV accuracy when grid-searched; NaN for fixed parameters.
    double cv_accuracy = 0.0;
    /// Relative residual of the solved KKT system.
    double kkt_residual = 0.0;
    std::optional<GridSearchResult> search;
};

struct FaultClassifier {
    std::array<LssvmModel, kModuleCount> models;
    NormStats norm_stats;
    std::array<ModuleSummary, kModuleCount> summary;

    const LssvmModel& model(Module m) const { return models[static_cast<std::size_t>(m)]; }
};

/// Normalizes the shared features and trains all five modules independently.
/// Throws DegenerateDataset naming the module whose target column has a single
/// class; training failures are rethrown with the module name prepended.
FaultClassifier train_modular(std::span<const LabeledSample> samples, const TrainingOptions& options);

/// Retrains a single module in place against the classifier's stored
/// normalization. Other modules are untouched.
void retrain_module(FaultClassifier& classifier, Module m, std::span<const LabeledSample> samples,
                    const ModuleOptions& options);

/// Result of looking a four-output code up in the fault-type table.
struct DecodedCode {
    enum class Kind { Fault, NoFault, InvalidCode };
    Kind kind = Kind::NoFault;
    FaultType type = FaultType::None;  // meaningful for Kind::Fault

    /// Fault name, "NONE" or "INVALID".
    std::string_view name() const;
    bool valid() const { return kind != Kind::InvalidCode; }
    bool operator==(const DecodedCode&) const = default;
};

DecodedCode decode_fault_type(int r, int y, int b, int g);
inline DecodedCode decode_fault_type(const std::array<int, 4>& code) {
    return decode_fault_type(code[0], code[1], code[2], code[3]);
}

struct Classification {
    DecodedCode decoded;
    std::array<int, 4> code{};
    int section = +1;
    /// Raw outputs of R, Y, B, G and section modules, in that order.
    std::array<double, kModuleCount> decision_values{};
};

Classification classify(const FaultClassifier& classifier, const RawFeatures& raw);
Classification classify(const FaultClassifier& classifier, const ThreePhaseRecord& record);

int identify_section(const FaultClassifier& classifier, const ThreePhaseRecord& record);

/// Confusion counts: rows are true classes in kClassOrder; columns are the
/// same eleven classes followed by an InvalidCode column, so each row sums to
/// the number of test samples of that class.
inline constexpr std::size_t kInvalidColumn = 11;

struct ClassificationReport {
    std::array<std::array<std::size_t, 12>, 11> confusion{};
    std::array<double, 11> per_class_accuracy{};  // NaN where a class has no samples
    double overall_accuracy = 0.0;
    std::size_t total = 0;
    std::size_t invalid_code_count = 0;
    /// Samples whose true type has no decodable class (ungrounded RYB); they
    /// only count towards section accuracy.
    std::size_t unscored_count = 0;
    double section_accuracy = 0.0;
    std::size_t section_total = 0;

    std::size_t class_total(std::size_t row) const;
};

/// Section accuracy is taken over samples whose truth is an actual fault.
ClassificationReport evaluate(const FaultClassifier& classifier, std::span<const LabeledSample> samples);

}  // namespace lsfault
