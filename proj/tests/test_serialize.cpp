#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "olsattn/experiments.hpp"
#include "olsattn/memory_shift.hpp"
#include "olsattn/serialize.hpp"
#include "olsattn/trainer.hpp"

using olsattn::format_double;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

olsattn::TrainingTrace small_trace() {
    olsattn::TrainConfig config;
    config.n = 30;
    config.epochs = 3;
    config.seed = 5;
    return olsattn::train(config);
}

}  // namespace

TEST_CASE("doubles round-trip through their shortest representation") {
    for (double v : {0.1, 1.0 / 3.0, 12345.6789, -2.5e10, 1e-300, 0.0, -1.0, 1.7e308}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(3.0) == "3");
}

TEST_CASE("training trace CSV carries the versioned header and all records") {
    olsattn::TrainingTrace trace = small_trace();
    std::string csv = olsattn::trace_to_csv(trace);
    CHECK(csv.find('\r') == std::string::npos);

    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 2 + trace.records.size());
    CHECK(lines[0] == "# ols-attention v1, command=train, seed=5");
    CHECK(lines[1] == "epoch,mse,rel_dist_to_ols,l_value");

    // Fields round-trip exactly.
    std::istringstream row(lines[2]);
    std::string field;
    std::getline(row, field, ',');
    CHECK(std::stoull(field) == trace.records[0].epoch);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == trace.records[0].mse);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == trace.records[0].rel_dist_to_ols);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == trace.records[0].l_value);
}

TEST_CASE("training trace JSON echoes the config and data") {
    olsattn::TrainingTrace trace = small_trace();
    nlohmann::json doc = nlohmann::json::parse(olsattn::trace_to_json(trace));
    CHECK(doc["command"] == "train");
    CHECK(doc["config"]["n"] == 30);
    CHECK(doc["config"]["epochs"] == 3);
    CHECK(doc["config"]["seed"] == 5);
    CHECK(doc["config"]["distribution"] == "uniform");
    CHECK(doc["l_star"].get<double>() == trace.l_star);
    CHECK(doc["near_zero_stall_epoch"].is_null());
    REQUIRE(doc["records"].size() == trace.records.size());
    CHECK(doc["records"][0]["mse"].get<double>() == trace.records[0].mse);
    CHECK(doc["records"][2]["epoch"].get<std::size_t>() == trace.records[2].epoch);
}

TEST_CASE("equivalence sweep serializes to CSV and JSON consistently") {
    olsattn::EquivSweepConfig config;
    config.trials = 5;
    config.max_n = 40;
    config.max_k = 4;
    config.seed = 9;
    std::vector<olsattn::EquivTrial> rows = olsattn::equivalence_sweep(config);

    std::string csv = olsattn::equiv_to_csv(rows, config);
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "# ols-attention v1, command=equiv, seed=9");
    CHECK(lines[1] == "trial,n,k,max_abs_diff,rel_frobenius_diff,whitening_residual");

    nlohmann::json doc = nlohmann::json::parse(olsattn::equiv_to_json(rows, config));
    CHECK(doc["command"] == "equiv");
    CHECK(doc["config"]["trials"] == 5);
    REQUIRE(doc["trials"].size() == 5);
    double max_rel = 0.0;
    for (const olsattn::EquivTrial& r : rows) max_rel = std::max(max_rel, r.report.rel_frobenius_diff);
    CHECK(doc["max_rel_frobenius_diff"].get<double>() == max_rel);
    CHECK(doc["trials"][0]["n"].get<std::size_t>() == rows[0].n);
}

TEST_CASE("shift sweep serializes the frozen column set") {
    olsattn::ShiftSweepConfig config;
    config.n = 60;
    config.k = 2;
    config.seed = 4;
    std::vector<olsattn::ShiftSweepRow> rows = olsattn::shift_sweep(config);
    REQUIRE(rows.size() == 7);  // 0.5:2.0:0.25

    std::string csv = olsattn::shift_to_csv(rows, config);
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] == "# ols-attention v1, command=shift, seed=4");
    CHECK(lines[1] == "shift_kind,shift_param,relative_error,distortion_frobenius_dist_from_identity");
    CHECK(lines[2].rfind("scale,0.5,", 0) == 0);

    nlohmann::json doc = nlohmann::json::parse(olsattn::shift_to_json(rows, config));
    CHECK(doc["config"]["shift_kind"] == "scale");
    CHECK(doc["config"]["grid"]["step"].get<double>() == 0.25);
    REQUIRE(doc["rows"].size() == 7);
    CHECK(doc["rows"][2]["shift_param"].get<double>() == 1.0);
    CHECK(doc["rows"][2]["relative_error"].get<double>() <= 1e-8);
}

TEST_CASE("single shift report serializes its matrices") {
    olsattn::Rng rng(21);
    olsattn::Matrix x = rng.gaussian_matrix(50, 2);
    olsattn::Matrix y = matmul(x, rng.gaussian_matrix(2, 1));
    olsattn::ShiftReport report = olsattn::shift_experiment(x, y, olsattn::ShiftSpec::scale(1.5), 77);

    nlohmann::json doc = nlohmann::json::parse(olsattn::shift_report_to_json(report));
    REQUIRE(doc["sigma_x"].size() == 2);
    REQUIRE(doc["sigma_x"][0].size() == 2);
    CHECK(doc["sigma_x"][0][0].get<double>() == report.sigma_x(0, 0));
    CHECK(doc["distortion"][1][1].get<double>() == report.distortion(1, 1));
    CHECK(doc["predicted"].size() == report.predicted.rows());
    CHECK(doc["relative_error"].get<double>() == report.relative_error);
}

TEST_CASE("grid expansion is inclusive and validated") {
    std::vector<double> g = olsattn::grid_values(0.5, 2.0, 0.25);
    REQUIRE(g.size() == 7);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<double> angles = olsattn::grid_values(0.0, 1.57, 0.785);
    REQUIRE(angles.size() == 3);

    CHECK(olsattn::grid_values(1.0, 1.0, 0.5).size() == 1);
    CHECK_THROWS_AS(olsattn::grid_values(1.0, 0.5, 0.25), olsattn::dimension_error);
    CHECK_THROWS_AS(olsattn::grid_values(0.0, 1.0, 0.0), olsattn::dimension_error);
    CHECK_THROWS_AS(olsattn::grid_values(0.0, 1.0, -1.0), olsattn::dimension_error);
}

TEST_CASE("file writer emits bytes verbatim") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "olsattn-serialize-test";
    fs::create_directories(dir);
    fs::path file = dir / "out.csv";

    const std::string content = "# header\na,b\n1,2\n";
    olsattn::write_file(file.string(), content);

    std::ifstream in(file, std::ios::binary);
    std::string read_back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(read_back == content);

    CHECK_THROWS_AS(olsattn::write_file((dir / "missing" / "out.csv").string(), content),
                    std::runtime_error);
    fs::remove_all(dir);
}
