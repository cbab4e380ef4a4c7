#pragma once

// File formats used by the command-line tool.
//
// Feature CSV   header `f00..f14,r,y,b,g,section,fault_type,scenario_id`;
//               raw (un-normalized) window samples, +/-1 targets.
// Scenario CSV  header `scenario_id,fault_type,location_pct,fault_resistance,
//               inception_angle,load_angle,compensation_pct,snr_db,seed`.
// Records CSV   header `scenario_id,fault_index,sample,R,Y,B`; one row per
//               sample, secondary amperes.
// Model file    text, first line `lsfault-model v1`; see save_model.
// Report CSV    header `metric,truth,predicted,value`.
//
// Reals are written in shortest round-trip form and read back exactly.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsfault/classifier.hpp"
#include "lsfault/fault_sim.hpp"

namespace lsfault {

/// Malformed or unreadable file content.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model file built for a different feature length.
class DimensionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_real(double v);

void write_feature_csv(std::ostream& out, std::span<const LabeledSample> samples);
std::vector<LabeledSample> read_feature_csv(std::istream& in);

void write_scenario_csv(std::ostream& out, std::span<const ThreePhaseRecord> records);

struct StoredRecord {
    std::size_t scenario_id = 0;
    ThreePhaseRecord record;
};

void write_records_csv(std::ostream& out, std::span<const ThreePhaseRecord> records);
/// Records come back in file order with their samples and fault index; the
/// scenario fields are left at their defaults.
std::vector<StoredRecord> read_records_csv(std::istream& in);

/// Layout:
///
///     lsfault-model v1
///     features 15
///     norm_mean <15 reals>
///     norm_scale <15 reals>
///     module <R|Y|B|G|section>          (five blocks, this order)
///     kernel <family> <degree> <offset> <sigma2> <kappa> <theta>
///     gamma <real>
///     bias <real>
///     cv_accuracy <real|nan>
///     kkt_residual <real>
///     support <n>
///     sv <alpha> <15 reals>              (n lines)
///     end
void save_model(std::ostream& out, const FaultClassifier& classifier);
FaultClassifier load_model(std::istream& in);

void write_report_text(std::ostream& out, const ClassificationReport& report);
void write_report_csv(std::ostream& out, const ClassificationReport& report);

}  // namespace lsfault
