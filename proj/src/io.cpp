#include "lsfault/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "lsfault/errors.hpp"

namespace lsfault {

namespace {

constexpr const char* kModelMagic = "lsfault-model";
constexpr const char* kModelVersion = "v1";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> words(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string w;
    while (ss >> w) out.push_back(w);
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_real(const std::string& s, const std::string& where) {
    if (s.empty()) throw IoError(where + ": empty number");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw IoError(where + ": cannot parse number '" + s + "'");
    return v;
}

long long parse_integer(const std::string& s, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw IoError(where + ": cannot parse integer '" + s + "'");
    return v;
}

std::size_t parse_index(const std::string& s, const std::string& where) {
    const long long v = parse_integer(s, where);
    if (v < 0) throw IoError(where + ": negative index");
    return static_cast<std::size_t>(v);
}

int parse_sign(const std::string& s, const std::string& where) {
    const long long v = parse_integer(s, where);
    if (v != 1 && v != -1) throw IoError(where + ": expected +1 or -1, got '" + s + "'");
    return static_cast<int>(v);
}

std::string feature_header() {
    std::string h;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "f%02zu,", f);
        h += buf;
    }
    return h + "r,y,b,g,section,fault_type,scenario_id";
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            strip_cr(line);
            if (!line.empty()) return true;
        }
        return false;
    }

    std::string require(const char* what) {
        std::string line;
        if (!next(line)) throw IoError(std::string("unexpected end of file, expected ") + what);
        return line;
    }

    std::string where() const { return "line " + std::to_string(number_); }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

std::vector<std::string> expect_key(LineReader& reader, const char* key, std::size_t values) {
    const auto w = words(reader.require(key));
    if (w.empty() || w[0] != key)
        throw IoError(reader.where() + ": expected '" + key + "'");
    if (w.size() != values + 1)
        throw IoError(reader.where() + ": '" + key + "' needs " + std::to_string(values) + " values");
    return {w.begin() + 1, w.end()};
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ------------------------------------------------------------------ features

void write_feature_csv(std::ostream& out, std::span<const LabeledSample> samples) {
    out << feature_header() << '\n';
    for (const auto& s : samples) {
        for (double v : s.raw) out << format_real(v) << ',';
        out << s.label.r << ',' << s.label.y << ',' << s.label.b << ',' << s.label.g << ','
            << s.label.section << ',' << s.label.fault_name << ',' << s.scenario_id << '\n';
    }
}

std::vector<LabeledSample> read_feature_csv(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw IoError("feature file is empty");
    if (line != feature_header()) throw IoError("feature file has an unexpected header");

    std::vector<LabeledSample> out;
    while (reader.next(line)) {
        const auto f = split(line, ',');
        const std::string where = reader.where();
        if (f.size() != kFeatureCount + 7)
            throw IoError(where + ": expected " + std::to_string(kFeatureCount + 7) + " fields");
        LabeledSample s;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            s.raw[i] = parse_real(f[i], where);
            if (!std::isfinite(s.raw[i])) throw IoError(where + ": non-finite feature");
        }
        std::size_t c = kFeatureCount;
        s.label.r = parse_sign(f[c++], where);
        s.label.y = parse_sign(f[c++], where);
        s.label.b = parse_sign(f[c++], where);
        s.label.g = parse_sign(f[c++], where);
        s.label.section = parse_sign(f[c++], where);
        try {
            s.label.fault_name = std::string(fault_name(parse_fault_type(f[c++])));
        } catch (const InvalidInput& e) {
            throw IoError(where + ": " + e.what());
        }
        s.scenario_id = parse_index(f[c], where);
        out.push_back(std::move(s));
    }
    return out;
}

// ----------------------------------------------------------------- scenarios

void write_scenario_csv(std::ostream& out, std::span<const ThreePhaseRecord> records) {
    out << "scenario_id,fault_type,location_pct,fault_resistance,inception_angle,load_angle,"
           "compensation_pct,snr_db,seed\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& s = records[i].scenario;
        out << i << ',' << fault_name(s.fault_type) << ',' << format_real(s.location_pct) << ','
            << format_real(s.fault_resistance) << ',' << format_real(s.inception_angle) << ','
            << format_real(s.load_angle) << ',' << format_real(s.compensation_pct) << ','
            << format_real(s.snr_db) << ',' << s.seed << '\n';
    }
}

void write_records_csv(std::ostream& out, std::span<const ThreePhaseRecord> records) {
    out << "scenario_id,fault_index,sample,R,Y,B\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        for (std::size_t n = 0; n < r.length(); ++n) {
            out << i << ',' << r.fault_index << ',' << n << ',' << format_real(r.samples[0][n]) << ','
                << format_real(r.samples[1][n]) << ',' << format_real(r.samples[2][n]) << '\n';
        }
    }
}

std::vector<StoredRecord> read_records_csv(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw IoError("record file is empty");
    if (line != "scenario_id,fault_index,sample,R,Y,B")
        throw IoError("record file has an unexpected header");

    std::vector<StoredRecord> out;
    while (reader.next(line)) {
        const auto f = split(line, ',');
        const std::string where = reader.where();
        if (f.size() != 6) throw IoError(where + ": expected 6 fields");
        const std::size_t id = parse_index(f[0], where);
        const std::size_t fault_index = parse_index(f[1], where);
        const std::size_t sample = parse_index(f[2], where);

        if (out.empty() || out.back().scenario_id != id) {
            out.push_back({});
            out.back().scenario_id = id;
            out.back().record.fault_index = fault_index;
        }
        auto& rec = out.back().record;
        if (rec.fault_index != fault_index) throw IoError(where + ": fault index changes within a record");
        if (sample != rec.length()) throw IoError(where + ": samples out of order");
        for (std::size_t p = 0; p < 3; ++p) {
            const double v = parse_real(f[3 + p], where);
            if (!std::isfinite(v)) throw IoError(where + ": non-finite sample");
            rec.samples[p].push_back(v);
        }
    }
    if (out.empty()) throw IoError("record file contains no samples");
    return out;
}

// -------------------------------------------------------------------- models

void save_model(std::ostream& out, const FaultClassifier& clf) {
    out << kModelMagic << ' ' << kModelVersion << '\n';
    out << "features " << kFeatureCount << '\n';
    out << "norm_mean";
    for (double v : clf.norm_stats.mean) out << ' ' << format_real(v);
    out << "\nnorm_scale";
    for (double v : clf.norm_stats.scale) out << ' ' << format_real(v);
    out << '\n';
    for (auto m : kModules) {
        const auto i = static_cast<std::size_t>(m);
        const LssvmModel& model = clf.models[i];
        const ModuleSummary& sum = clf.summary[i];
        const KernelSpec& k = model.kernel;
        out << "module " << module_name(m) << '\n';
        out << "kernel " << to_string(k.family) << ' ' << k.degree << ' ' << format_real(k.offset) << ' '
            << format_real(k.sigma2) << ' ' << format_real(k.kappa) << ' ' << format_real(k.theta) << '\n';
        out << "gamma " << format_real(model.gamma) << '\n';
        out << "bias " << format_real(model.bias) << '\n';
        out << "cv_accuracy " << format_real(sum.cv_accuracy) << '\n';
        out << "kkt_residual " << format_real(sum.kkt_residual) << '\n';
        out << "support " << model.alphas.size() << '\n';
        for (std::size_t s = 0; s < model.alphas.size(); ++s) {
            out << "sv " << format_real(model.alphas[s]);
            for (double v : model.support_inputs[s]) out << ' ' << format_real(v);
            out << '\n';
        }
    }
    out << "end\n";
}

FaultClassifier load_model(std::istream& in) {
    LineReader reader(in);
    {
        const auto w = words(reader.require("model header"));
        if (w.size() != 2 || w[0] != kModelMagic) throw IoError("not an lsfault model file");
        if (w[1] != kModelVersion) throw IoError("unsupported model version '" + w[1] + "'");
    }
    const auto feat = expect_key(reader, "features", 1);
    if (parse_index(feat[0], reader.where()) != kFeatureCount)
        throw DimensionMismatch("model was trained on " + feat[0] + " features, expected " +
                      std::to_string(kFeatureCount));

    FaultClassifier clf;
    const auto mean = expect_key(reader, "norm_mean", kFeatureCount);
    const auto scale = expect_key(reader, "norm_scale", kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        clf.norm_stats.mean[f] = parse_real(mean[f], "norm_mean");
        clf.norm_stats.scale[f] = parse_real(scale[f], "norm_scale");
        if (!(clf.norm_stats.scale[f] > 0.0)) throw IoError("norm_scale entries must be > 0");
    }

    for (auto m : kModules) {
        const auto i = static_cast<std::size_t>(m);
        const auto name = expect_key(reader, "module", 1);
        if (name[0] != module_name(m))
            throw IoError(reader.where() + ": expected module " + std::string(module_name(m)));

        const auto k = expect_key(reader, "kernel", 6);
        LssvmModel& model = clf.models[i];
        try {
            model.kernel.family = parse_kernel_family(k[0]);
            model.kernel.degree = static_cast<int>(parse_integer(k[1], "kernel degree"));
            model.kernel.offset = parse_real(k[2], "kernel offset");
            model.kernel.sigma2 = parse_real(k[3], "kernel sigma2");
            model.kernel.kappa = parse_real(k[4], "kernel kappa");
            model.kernel.theta = parse_real(k[5], "kernel theta");
            model.kernel.validate();
        } catch (const InvalidInput& e) {
            throw IoError(reader.where() + ": " + e.what());
        }
        model.gamma = parse_real(expect_key(reader, "gamma", 1)[0], "gamma");
        model.bias = parse_real(expect_key(reader, "bias", 1)[0], "bias");
        ModuleSummary& sum = clf.summary[i];
        sum.gamma = model.gamma;
        sum.kernel = model.kernel;
        sum.cv_accuracy = parse_real(expect_key(reader, "cv_accuracy", 1)[0], "cv_accuracy");
        sum.kkt_residual = parse_real(expect_key(reader, "kkt_residual", 1)[0], "kkt_residual");

        const std::size_t n = parse_index(expect_key(reader, "support", 1)[0], "support");
        if (n == 0) throw IoError("module " + std::string(module_name(m)) + " has no support vectors");
        model.alphas.reserve(n);
        model.support_inputs.reserve(n);
        for (std::size_t s = 0; s < n; ++s) {
            const auto sv = expect_key(reader, "sv", kFeatureCount + 1);
            model.alphas.push_back(parse_real(sv[0], reader.where()));
            std::vector<double> x(kFeatureCount);
            for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = parse_real(sv[f + 1], reader.where());
            model.support_inputs.push_back(std::move(x));
        }
    }
    const auto tail = words(reader.require("end"));
    if (tail.size() != 1 || tail[0] != "end") throw IoError(reader.where() + ": expected 'end'");
    return clf;
}

// ------------------------------------------------------------------- reports

void write_report_text(std::ostream& out, const ClassificationReport& rep) {
    char buf[160];
    out << "fault-type classification\n";
    std::snprintf(buf, sizeof buf, "  overall accuracy   %.4f (%zu records)\n", rep.overall_accuracy, rep.total);
    out << buf;
    std::snprintf(buf, sizeof buf, "  invalid codes      %zu\n", rep.invalid_code_count);
    out << buf;
    if (rep.unscored_count != 0) {
        std::snprintf(buf, sizeof buf, "  unscored records   %zu\n", rep.unscored_count);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "section identification\n  section accuracy   %.4f (%zu records)\n",
                  rep.section_accuracy, rep.section_total);
    out << buf;
    out << "per-class accuracy\n";
    for (std::size_t i = 0; i < kClassOrder.size(); ++i) {
        const std::size_t n = rep.class_total(i);
        if (n == 0) continue;
        std::snprintf(buf, sizeof buf, "  %-6s %.4f (%zu)\n", std::string(fault_name(kClassOrder[i])).c_str(),
                      rep.per_class_accuracy[i], n);
        out << buf;
    }
    out << "confusion (rows truth, columns predicted)\n       ";
    for (auto t : kClassOrder) {
        std::snprintf(buf, sizeof buf, " %6s", std::string(fault_name(t)).c_str());
        out << buf;
    }
    out << "    INV\n";
    for (std::size_t i = 0; i < kClassOrder.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  %-5s", std::string(fault_name(kClassOrder[i])).c_str());
        out << buf;
        for (auto c : rep.confusion[i]) {
            std::snprintf(buf, sizeof buf, " %6zu", c);
            out << buf;
        }
        out << '\n';
    }
}

void write_report_csv(std::ostream& out, const ClassificationReport& rep) {
    out << "metric,truth,predicted,value\n";
    out << "overall_accuracy,,," << format_real(rep.overall_accuracy) << '\n';
    out << "section_accuracy,,," << format_real(rep.section_accuracy) << '\n';
    out << "total,,," << rep.total << '\n';
    out << "section_total,,," << rep.section_total << '\n';
    out << "invalid_code_count,,," << rep.invalid_code_count << '\n';
    out << "unscored_count,,," << rep.unscored_count << '\n';
    for (std::size_t i = 0; i < kClassOrder.size(); ++i) {
        const std::string truth(fault_name(kClassOrder[i]));
        out << "class_accuracy," << truth << ",," << format_real(rep.per_class_accuracy[i]) << '\n';
    }
    for (std::size_t i = 0; i < kClassOrder.size(); ++i) {
        const std::string truth(fault_name(kClassOrder[i]));
        for (std::size_t j = 0; j < rep.confusion[i].size(); ++j) {
            const std::string pred =
                j == kInvalidColumn ? std::string("INVALID") : std::string(fault_name(kClassOrder[j]));
            out << "confusion," << truth << ',' << pred << ',' << rep.confusion[i][j] << '\n';
        }
    }
}

}  // namespace lsfault
