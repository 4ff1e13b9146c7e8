#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gnv/errors.hpp"
#include "gnv/mc.hpp"
#include "gnv/report.hpp"
#include "gnv/sampler.hpp"

using namespace gnv;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path(GNV_TEST_TMP) / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig report_config() {
    ExperimentConfig c;
    c.params = {1.0, 2.0, 1.0};
    c.T_list = {10.0, 20.0};
    c.dt = 0.05;
    c.replications = 24;
    c.master_seed = 5;
    return c;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("number formatting round-trips") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::nan("")) == "nan");
    for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.31950791077289426}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("path CSV round trip") {
    const auto g = sample_fgn_circulant(0.7, 50, 0.1, 3);
    const auto x = simulate_vasicek({1.0, 2.0, 1.0}, g, Scheme::exact_recursion);
    std::stringstream s;
    write_path_csv(s, g, x);
    CHECK(s.str().rfind("t,G,X\n", 0) == 0);
    const auto table = read_path_csv(s);
    CHECK(table.grid == g.grid);
    REQUIRE(table.G);
    REQUIRE(table.X);
    CHECK(*table.G == g.values);
    CHECK(*table.X == x.values);

    std::stringstream only_g;
    write_path_csv(only_g, g);
    const auto t2 = read_path_csv(only_g);
    CHECK(t2.G);
    CHECK_FALSE(t2.X);
}

TEST_CASE("malformed path CSVs are rejected") {
    for (const char* text : {"", "t,G\n0,0\n", "t,G\n0,0\n0.1,1\n0.3,2\n", "t,G\n0.1,0\n0.2,1\n",
                             "t,Y\n0,0\n0.1,1\n", "G,t\n0,0\n1,0.1\n", "t,G\n0,0\n0.1,abc\n",
                             "t,G\n0,0\n0.1\n", "t\n0\n0.1\n"}) {
        std::stringstream s(text);
        INFO(text);
        CHECK_THROWS_AS(read_path_csv(s), ShapeError);
    }
    CHECK_THROWS_AS(read_path_csv(fs::path(GNV_TEST_TMP) / "missing.csv"), IoError);
}

TEST_CASE("replications CSV round trip reproduces the summary") {
    const ExperimentConfig c = report_config();
    const auto records = run_experiment(c, 1);
    std::stringstream s;
    write_replications_csv(s, records);
    std::string header;
    std::getline(s, header);
    CHECK(header == "index,T,seed,mu_hat,k_hat,mu_ls,k_ls,mode,e_mu,e_k,e_mu_ls,e_k_ls");
    s.seekg(0);
    const auto back = read_replications_csv(s, c);
    REQUIRE(back.size() == records.size());
    std::stringstream again;
    write_replications_csv(again, back);
    CHECK(again.str() == s.str());
    CHECK(summary_to_json(summarize(back, c), c).dump(2) == summary_to_json(summarize(records, c), c).dump(2));
}

TEST_CASE("replications CSV that does not fit the configuration") {
    const ExperimentConfig c = report_config();
    std::stringstream bad_header("index,T\n");
    CHECK_THROWS_AS(read_replications_csv(bad_header, c), ShapeError);
    std::stringstream bad_T(std::string(kReplicationsHeader) + "\n0,15,1,2,1,2,1,pathwise,0,0,0,0\n");
    CHECK_THROWS_AS(read_replications_csv(bad_T, c), ShapeError);
    std::stringstream short_row(std::string(kReplicationsHeader) + "\n0,10,1,2\n");
    CHECK_THROWS_AS(read_replications_csv(short_row, c), ShapeError);
    std::stringstream missing_modes(std::string(kReplicationsHeader) + "\n0,10,1,2,1,2,1,pathwise,0,0,0,0\n");
    CHECK_THROWS_AS(read_replications_csv(missing_modes, c), ShapeError);
}

TEST_CASE("emit_report writes every file") {
    const ExperimentConfig c = report_config();
    const auto records = run_experiment(c, 1);
    const auto summary = summarize(records, c);
    const fs::path dir = fresh_dir("emit");
    emit_report(summary, records, c, dir);
    CHECK(fs::exists(dir / "replications.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    for (const auto& cell : summary.cells) {
        const fs::path qq = dir / ("qq_" + cell.estimator + "_" + format_double(cell.T) + ".csv");
        REQUIRE(fs::exists(qq));
        std::ifstream in(qq);
        std::string line;
        std::getline(in, line);
        CHECK(line == "p,theoretical,empirical");
        double prev_t = -1e300, prev_e = -1e300;
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            std::stringstream ls(line);
            std::string p, t, e;
            std::getline(ls, p, ',');
            std::getline(ls, t, ',');
            std::getline(ls, e, ',');
            CHECK(std::stod(t) >= prev_t);
            CHECK(std::stod(e) >= prev_e);
            prev_t = std::stod(t);
            prev_e = std::stod(e);
            ++rows;
        }
        CHECK(rows == cell.n_valid);
    }
    const auto doc = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(doc.at("cells").size() == summary.cells.size());
    CHECK(doc.at("config").at("replications") == 24);
}

TEST_CASE("emit_report refuses empty input without touching the disk") {
    const ExperimentConfig c = report_config();
    const fs::path dir = fresh_dir("empty");
    CHECK_THROWS_AS(emit_report(SummaryStats{}, {}, c, dir), ExperimentError);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("write failures name the path") {
    const ExperimentConfig c = report_config();
    const auto records = run_experiment(c, 1);
    const auto summary = summarize(records, c);
    const fs::path blocker = fresh_dir("blocker");
    fs::create_directories(blocker.parent_path());
    { std::ofstream(blocker) << "not a directory"; }
    try {
        emit_report(summary, records, c, blocker / "sub");
        FAIL("expected an IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("blocker") != std::string::npos);
    }
    fs::remove(blocker);
}

}  // TEST_SUITE
