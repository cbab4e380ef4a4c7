#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "lsfault/errors.hpp"
#include "lsfault/io.hpp"

using namespace lsfault;

namespace {

const LineParameters kLine;

std::vector<ThreePhaseRecord> small_records() {
    ScenarioGrid g = ScenarioGrid::default_train();
    g.limit = 40;
    g.snr_db = 30;
    return generate_dataset(kLine, g, 5);
}

std::string model_text(const FaultClassifier& c) {
    std::ostringstream o;
    save_model(o, c);
    return o.str();
}

FaultClassifier load_text(const std::string& s) {
    std::istringstream in(s);
    return load_model(in);
}

std::string replace_line(std::string text, const std::string& prefix, const std::string& with) {
    const auto at = text.find(prefix);
    REQUIRE(at != std::string::npos);
    const auto end = text.find('\n', at);
    return text.replace(at, end - at, with);
}

}  // namespace

TEST_CASE("reals round-trip through text") {
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.0, -0.0, 123456789.125}) {
        const std::string s = format_real(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("feature CSV round trip") {
    const auto samples = make_samples(small_records());
    std::stringstream io;
    write_feature_csv(io, samples);
    const std::string text = io.str();
    CHECK(text.rfind("f00,f01,f02,f03,f04,f05,f06,f07,f08,f09,f10,f11,f12,f13,f14,r,y,b,g,section,fault_type,scenario_id\n", 0) == 0);

    const auto back = read_feature_csv(io);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(back[i].raw == samples[i].raw);
        CHECK(back[i].label.code() == samples[i].label.code());
        CHECK(back[i].label.section == samples[i].label.section);
        CHECK(back[i].label.fault_name == samples[i].label.fault_name);
        CHECK(back[i].scenario_id == i);
    }
}

TEST_CASE("feature CSV rejects malformed input") {
    std::ostringstream o;
    write_feature_csv(o, make_samples(small_records()));
    const std::string good = o.str();
    const std::string header = good.substr(0, good.find('\n') + 1);
    const std::string row = good.substr(header.size(), good.find('\n', header.size()) + 1 - header.size());

    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_feature_csv(in);
    };
    CHECK(parse(header + row).size() == 1);
    CHECK(parse(header).empty());
    CHECK_THROWS_AS(parse(""), IoError);
    CHECK_THROWS_AS(parse("a,b,c\n" + row), IoError);
    CHECK_THROWS_AS(parse(header + "1,2,3\n"), IoError);

    std::string bad_sign = row;
    bad_sign.replace(bad_sign.find(",1,") != std::string::npos ? bad_sign.find(",1,") : bad_sign.find(",-1,"), 3, ",0,");
    CHECK_THROWS_AS(parse(header + bad_sign), IoError);

    std::string bad_num = row;
    bad_num.replace(0, bad_num.find(','), "1.5x");
    CHECK_THROWS_AS(parse(header + bad_num), IoError);

    std::string bad_type = row;
    const auto type_at = bad_type.rfind(',', bad_type.rfind(',') - 1) + 1;
    bad_type.replace(type_at, bad_type.rfind(',') - type_at, "QQ");
    CHECK_THROWS_AS(parse(header + bad_type), IoError);

    // CRLF line endings are accepted
    std::string crlf = header + row;
    crlf.insert(crlf.find('\n'), "\r");
    CHECK(parse(crlf).size() == 1);
}

TEST_CASE("record CSV round trip") {
    const auto recs = small_records();
    std::stringstream io;
    write_records_csv(io, recs);
    const auto back = read_records_csv(io);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].scenario_id == i);
        CHECK(back[i].record.fault_index == recs[i].fault_index);
        CHECK(back[i].record.samples == recs[i].samples);
        CHECK(extract_window(back[i].record) == extract_window(recs[i]));
    }
}

TEST_CASE("record CSV rejects malformed input") {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_records_csv(in);
    };
    const std::string h = "scenario_id,fault_index,sample,R,Y,B\n";
    CHECK(parse(h + "4,0,0,1,2,3\n4,0,1,1,2,3\n").front().record.length() == 2);
    CHECK_THROWS_AS(parse(h), IoError);
    CHECK_THROWS_AS(parse("id,R\n"), IoError);
    CHECK_THROWS_AS(parse(h + "0,0,1,1,2,3\n"), IoError);             // starts at sample 1
    CHECK_THROWS_AS(parse(h + "0,0,0,1,2,3\n0,1,1,1,2,3\n"), IoError);  // fault index changes
    CHECK_THROWS_AS(parse(h + "0,0,0,1,2\n"), IoError);
    CHECK_THROWS_AS(parse(h + "0,0,0,1,nan,3\n"), IoError);
    CHECK_THROWS_AS(parse(h + "-1,0,0,1,2,3\n"), IoError);
}

TEST_CASE("scenario CSV lists every scenario field") {
    const auto recs = small_records();
    std::ostringstream o;
    write_scenario_csv(o, recs);
    std::istringstream in(o.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "scenario_id,fault_type,location_pct,fault_resistance,inception_angle,load_angle,"
                  "compensation_pct,snr_db,seed");
    std::getline(in, line);
    const auto& s = recs[0].scenario;
    CHECK(line == "0," + std::string(fault_name(s.fault_type)) + "," + format_real(s.location_pct) + "," +
                      format_real(s.fault_resistance) + "," + format_real(s.inception_angle) + "," +
                      format_real(s.load_angle) + "," + format_real(s.compensation_pct) + ",30," +
                      std::to_string(s.seed));
}

TEST_CASE("model save and load preserve every output bit") {
    const auto samples = make_samples(small_records());
    GridSearchConfig grid;
    grid.gamma_grid = {1, 100};
    grid.sigma2_grid = {0.5, 2};
    TrainingOptions opt = TrainingOptions::searched(KernelFamily::RBF, grid);
    opt.modules[2].family = KernelFamily::Polynomial;
    opt.modules[3].fixed = FixedParameters{KernelSpec::mlp(0.5, -0.1), 10};
    opt.modules[4].family = KernelFamily::Linear;
    const FaultClassifier c = train_modular(samples, opt);

    const std::string text = model_text(c);
    CHECK(text.rfind("lsfault-model v1\nfeatures 15\n", 0) == 0);
    const FaultClassifier back = load_text(text);
    CHECK(model_text(back) == text);

    CHECK(back.norm_stats.mean == c.norm_stats.mean);
    CHECK(back.norm_stats.scale == c.norm_stats.scale);
    for (auto m : kModules) {
        const auto i = static_cast<std::size_t>(m);
        CHECK(back.models[i].kernel == c.models[i].kernel);
        CHECK(back.models[i].gamma == c.models[i].gamma);
        CHECK(back.models[i].bias == c.models[i].bias);
        CHECK(back.models[i].alphas == c.models[i].alphas);
        CHECK(back.models[i].support_inputs == c.models[i].support_inputs);
        CHECK(back.summary[i].kkt_residual == c.summary[i].kkt_residual);
    }
    CHECK(std::isnan(back.summary[3].cv_accuracy));
    CHECK(back.summary[0].cv_accuracy == c.summary[0].cv_accuracy);

    for (const auto& s : samples) {
        const auto a = classify(c, s.raw), b = classify(back, s.raw);
        CHECK(a.decision_values == b.decision_values);
        CHECK(a.decoded == b.decoded);
    }
}

TEST_CASE("model loader rejects damaged files") {
    const auto samples = make_samples(small_records());
    const std::string good = model_text(train_modular(samples, TrainingOptions::fixed(KernelSpec::rbf(1), 10)));
    CHECK_NOTHROW(load_text(good));

    CHECK_THROWS_AS(load_text(""), IoError);
    CHECK_THROWS_AS(load_text("hello world\n"), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "lsfault-model", "lsfault-model v2")), IoError);
    CHECK_THROWS_AS(load_text(good.substr(0, good.size() / 2)), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "kernel rbf", "kernel gauss 3 1 1 1 0")), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "kernel rbf", "kernel rbf 3 1 -1 1 0")), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "gamma", "gamma ten")), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "module R", "module Q")), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "norm_scale", "norm_scale 1 2 3")), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "end", "fin")), IoError);
    CHECK_THROWS_AS(load_text(replace_line(good, "features 15", "features 16")), DimensionMismatch);
}

TEST_CASE("report formats") {
    const auto samples = make_samples(small_records());
    const FaultClassifier c = train_modular(samples, TrainingOptions::fixed(KernelSpec::rbf(1), 1e6));
    const ClassificationReport r = evaluate(c, samples);

    std::ostringstream text, csv;
    write_report_text(text, r);
    write_report_csv(csv, r);
    CHECK(text.str().find("overall accuracy") != std::string::npos);
    CHECK(text.str().find("section accuracy") != std::string::npos);
    CHECK(csv.str().rfind("metric,truth,predicted,value\noverall_accuracy,,," + format_real(r.overall_accuracy) + "\n", 0) == 0);
    CHECK(csv.str().find("total,,,40\n") != std::string::npos);
    CHECK(csv.str().find("confusion,R-G,INVALID,") != std::string::npos);

    std::size_t rows = 0;
    std::istringstream in(csv.str());
    for (std::string line; std::getline(in, line);) rows += line.rfind("confusion,", 0) == 0;
    CHECK(rows == 11 * 12);
}
