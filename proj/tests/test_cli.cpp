// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests of the rnnf binary. The binary path arrives in the
// RNNF_CLI environment variable (set by CTest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rnnf/model_io.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

std::string cli_path() {
    const char* p = std::getenv("RNNF_CLI");
    REQUIRE_MESSAGE(p != nullptr, "RNNF_CLI must point at the rnnf binary");
    return p;
}

RunResult run(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "run.log";
    const std::string cmd = cli_path() + " " + args + " >" + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

// Two-region fixture long enough for the reference split date.
fs::path write_two_region_fixture(const fs::path& dir) {
    const auto start = rnnf::Date::parse("2020-06-10");
    std::map<std::string, rnnf::TimeSeries> regions;
    regions["Maharashtra"] = fixtures::make_series(
        "Maharashtra", start, fixtures::wave_values(260, 60000, 70, 25, 45000, 180, 22, 500));
    regions["Kerala"] = fixtures::make_series(
        "Kerala", start, fixtures::wave_values(260, 20000, 100, 30, 35000, 190, 25, 300));
    const fs::path path = dir / "cases.csv";
    fixtures::write_jhu_fixture(path, regions);
    return path;
}

} // namespace

TEST_CASE("ingest writes one active-case file per region") {
    const auto dir = fixtures::scratch_dir("cli_ingest");
    const auto data = write_two_region_fixture(dir);

    const auto r = run("ingest --data " + data.string() + " --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "Maharashtra.csv"));
    CHECK(fs::exists(dir / "out" / "Kerala.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    {
        std::ifstream in(dir / "out" / "Maharashtra.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "date,active");
    }

    SUBCASE("region filter keeps exactly one output") {
        const auto f = run("ingest --data " + data.string() + " --region Kerala --out " +
                               (dir / "only").string(),
                           dir);
        CHECK(f.exit_code == 0);
        CHECK(fs::exists(dir / "only" / "Kerala.csv"));
        CHECK_FALSE(fs::exists(dir / "only" / "Maharashtra.csv"));
    }
    SUBCASE("missing input file fails and names the path") {
        const auto f = run("ingest --data " + (dir / "nope.csv").string() + " --out " +
                               (dir / "x").string(),
                           dir);
        CHECK(f.exit_code != 0);
        CHECK(f.output.find("nope.csv") != std::string::npos);
        CHECK(f.output.find("\"error\"") != std::string::npos);
    }
    SUBCASE("malformed data is a data error (exit 2)") {
        const fs::path bad = dir / "bad.csv";
        std::ofstream(bad) << "date,region,confirmed,deaths,recovered\n2020-06-10,R,abc,0,0\n";
        const auto f = run("ingest --data " + bad.string() + " --out " + (dir / "y").string(), dir);
        CHECK(f.exit_code == 2);
    }
}

TEST_CASE("config validation lists every problem before any work") {
    const auto dir = fixtures::scratch_dir("cli_validate");
    const auto r = run("evaluate", dir);
    CHECK(r.exit_code == 1);
    // both missing pieces named in one shot
    CHECK(r.output.find("--model") != std::string::npos);
    CHECK(r.output.find("--split or --test-start") != std::string::npos);

    SUBCASE("unknown profile") {
        const auto f = run("train --profile paper-atlantis", dir);
        CHECK(f.exit_code == 1);
        CHECK(f.output.find("paper-atlantis") != std::string::npos);
    }
    SUBCASE("unknown config key") {
        const fs::path cfg = dir / "cfg.json";
        std::ofstream(cfg) << R"({"window_siz": 8})";
        const auto f = run("train --config " + cfg.string(), dir);
        CHECK(f.exit_code == 1);
        CHECK(f.output.find("window_siz") != std::string::npos);
    }
}

TEST_CASE("train, replay, evaluate and forecast round trip") {
    const auto dir = fixtures::scratch_dir("cli_train");
    const auto data = write_two_region_fixture(dir);
    const std::string common = " --data " + data.string() +
                               " --region Maharashtra --split 2020-12-27 --units 8 --window 8 "
                               "--epochs 6 --seed 7";

    const auto t = run("train" + common + " --out " + (dir / "m1").string(), dir);
    REQUIRE_MESSAGE(t.exit_code == 0, t.output);
    REQUIRE(fs::exists(dir / "m1" / "model.json"));
    REQUIRE(fs::exists(dir / "m1" / "train_report.json"));

    SUBCASE("replaying the manifest reproduces the artifacts byte for byte") {
        const auto t2 = run("train --config " + (dir / "m1" / "manifest.json").string() +
                                " --out " + (dir / "m2").string(),
                            dir);
        REQUIRE_MESSAGE(t2.exit_code == 0, t2.output);
        CHECK(slurp(dir / "m1" / "model.json") == slurp(dir / "m2" / "model.json"));
        CHECK(slurp(dir / "m1" / "train_report.json") ==
              slurp(dir / "m2" / "train_report.json"));
    }
    SUBCASE("evaluate on the foreign region") {
        const auto e = run("evaluate --model " + (dir / "m1" / "model.json").string() +
                               " --data " + data.string() +
                               " --region Kerala --split 2020-12-27 --scaler-policy "
                               "full-series --out " +
                               (dir / "eval").string(),
                           dir);
        REQUIRE_MESSAGE(e.exit_code == 0, e.output);
        CHECK(fs::exists(dir / "eval" / "evaluation.csv"));
        // 260-day fixture split after day 200 leaves 59 predictions
        CHECK(count_lines(dir / "eval" / "evaluation.csv") == 60);
    }
    SUBCASE("forecast continues past the series end") {
        const auto ing =
            run("ingest --data " + data.string() + " --out " + (dir / "ing").string(), dir);
        REQUIRE(ing.exit_code == 0);
        const auto f = run("forecast --model " + (dir / "m1" / "model.json").string() +
                               " --series " + (dir / "ing" / "Maharashtra.csv").string() +
                               " --label Maharashtra --horizon 12 --out " +
                               (dir / "fc").string(),
                           dir);
        REQUIRE_MESSAGE(f.exit_code == 0, f.output);
        CHECK(count_lines(dir / "fc" / "forecast.csv") == 13);
        std::ifstream in(dir / "fc" / "forecast.csv");
        std::string header, first;
        std::getline(in, header);
        std::getline(in, first);
        CHECK(first.substr(0, 10) == "2021-02-25"); // fixture ends 2021-02-24
    }
    SUBCASE("explain emits trace, heatmap and envelope artifacts") {
        const auto x = run("explain --model " + (dir / "m1" / "model.json").string() +
                               " --data " + data.string() +
                               " --region Kerala --split 2020-12-27 --scaler-policy full-series "
                               "--analysis-start 10 --analysis-end 40 --out " +
                               (dir / "xp").string(),
                           dir);
        REQUIRE_MESSAGE(x.exit_code == 0, x.output);
        CHECK(fs::exists(dir / "xp" / "activations.csv"));
        CHECK(fs::exists(dir / "xp" / "activations.ppm"));
        CHECK(fs::exists(dir / "xp" / "activations.json"));
        CHECK(fs::exists(dir / "xp" / "envelope.csv"));
    }
}

TEST_CASE("numeric failures exit with code 3") {
    const auto dir = fixtures::scratch_dir("cli_numeric");
    // a hand-built bundle whose dense head emits values that overflow once
    // denormalized by a wide scaler
    rnnf::ModelBundle bundle;
    bundle.config.architecture = rnnf::Architecture::LSTM;
    bundle.config.hidden_units = {2};
    bundle.config.window_size = 4;
    bundle.params = rnnf::zero_parameters(bundle.config);
    bundle.params.dense.bias = 1.0e308;
    bundle.scaler = rnnf::ScalerParams{0.0, 1.0e9};
    bundle.source_region = "X";
    rnnf::save_model(bundle, dir / "model.json");

    const auto series = fixtures::make_series("X", rnnf::Date::parse("2021-01-01"),
                                              fixtures::wave_values(30, 100, 15, 5, 0, 0, 1));
    fixtures::write_simple_fixture(dir / "x.csv", series);

    const auto r = run("forecast --model " + (dir / "model.json").string() + " --series " +
                           (dir / "x.csv").string() + " --label X --horizon 5 --out " +
                           (dir / "out").string(),
                       dir);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("\"numeric\"") != std::string::npos);
}

TEST_CASE("transfer produces one report per region and a two-approach summary") {
    const auto dir = fixtures::scratch_dir("cli_transfer");
    const auto data = write_two_region_fixture(dir);

    const auto t = run("train --data " + data.string() +
                           " --region Maharashtra --split 2020-12-27 --units 6 --window 8 "
                           "--epochs 5 --seed 3 --out " +
                           (dir / "m").string(),
                       dir);
    REQUIRE_MESSAGE(t.exit_code == 0, t.output);

    const auto tr = run("transfer --model " + (dir / "m" / "model.json").string() + " --data " +
                            data.string() + " --all-regions --with-native --split 2020-12-27 "
                            "--seed 3 --jobs 2 --out " +
                            (dir / "tr").string(),
                        dir);
    REQUIRE_MESSAGE(tr.exit_code == 0, tr.output);
    CHECK(fs::exists(dir / "tr" / "Kerala_transfer.csv"));
    CHECK(fs::exists(dir / "tr" / "Maharashtra_transfer.csv"));
    REQUIRE(fs::exists(dir / "tr" / "transfer_summary.csv"));
    std::ifstream in(dir / "tr" / "transfer_summary.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "region,mae_transfer,mae_native");
    std::string line;
    int rows = 0, with_both = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.find(",,") == std::string::npos && line.back() != ',') ++with_both;
    }
    CHECK(rows == 2);
    CHECK(with_both == 2);
}

TEST_CASE("compare completes the six presets and is bit-reproducible") {
    const auto dir = fixtures::scratch_dir("cli_compare");
    const auto data = write_two_region_fixture(dir);
    const std::string args = "compare --data " + data.string() +
                             " --region Maharashtra --split 2020-12-27 --epochs 2 --seed 11";

    const auto c1 = run(args + " --out " + (dir / "c1").string(), dir);
    REQUIRE_MESSAGE(c1.exit_code == 0, c1.output);
    REQUIRE(fs::exists(dir / "c1" / "comparison.csv"));
    CHECK(count_lines(dir / "c1" / "comparison.csv") == 7); // header + six presets

    const auto c2 = run(args + " --out " + (dir / "c2").string(), dir);
    REQUIRE(c2.exit_code == 0);
    CHECK(slurp(dir / "c1" / "comparison.csv") == slurp(dir / "c2" / "comparison.csv"));
    CHECK(slurp(dir / "c1" / "comparison.json") == slurp(dir / "c2" / "comparison.json"));
}
