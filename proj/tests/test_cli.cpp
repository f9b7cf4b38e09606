#include "hypfred/cli.hpp"
#include "hypfred/error.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace hypfred;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hypfred-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome run(std::vector<std::string> args, const fs::path& out_dir = {}) {
        args.insert(args.begin(), "hypfred");
        if (args.size() > 1 && args[1] != "list-builtins") {
            args.push_back("--out");
            args.push_back((out_dir.empty() ? dir_ : out_dir).string());
        }
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return {code, out.str(), err.str()};
    }

    std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    nlohmann::json json_file(const std::string& name) { return nlohmann::json::parse(slurp(dir_ / name)); }

    fs::path dir_;
};

} // namespace

TEST(GridList, Parses) {
    const auto grids = parse_grids("17x16,33x32");
    ASSERT_EQ(grids.size(), 2u);
    EXPECT_EQ(grids[1].nx(), 33);
    EXPECT_EQ(grids[1].nt(), 32);
    EXPECT_THROW(parse_grids("17x"), RangeError);
    EXPECT_THROW(parse_grids("17*16"), RangeError);
    EXPECT_THROW(parse_grids(""), RangeError);
}

TEST_F(Cli, ListBuiltins) {
    const Outcome r = run({"list-builtins"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("example13"), std::string::npos);
    EXPECT_NE(r.out.find("manufactured-wellposed"), std::string::npos);
}

TEST_F(Cli, SolveUniqueBranchWritesReportAndSolution) {
    const Outcome r = run({"solve", "--builtin", "pure-forcing", "--nx", "9", "--nt", "8"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = json_file("report.json");
    EXPECT_EQ(doc["branch"], "unique");
    EXPECT_EQ(doc["kernel_dim"], 0);
    EXPECT_EQ(doc["unknowns"], 72);
    EXPECT_FALSE(doc.contains("timings"));
    std::istringstream csv(slurp(dir_ / "solution.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "j,i,q,x,t,value");
    int rows = 0;
    while (std::getline(csv, line)) {
        double x = 0, v = 0;
        int j = 0, i = 0, q = 0;
        double t = 0;
        ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf,%lf", &j, &i, &q, &x, &t, &v), 6);
        EXPECT_NEAR(v, x, 1e-14);
        ++rows;
    }
    EXPECT_EQ(rows, 72);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
    const fs::path a = dir_ / "a", b = dir_ / "b";
    fs::create_directories(a);
    fs::create_directories(b);
    for (const fs::path& d : {a, b}) {
        ASSERT_EQ(run({"solve", "--builtin", "levy-pass", "--nx", "9", "--nt", "8"}, d).code, kExitOk);
        ASSERT_EQ(run({"spectrum", "--builtin", "levy-pass", "--nx", "9", "--nt", "8"}, d).code, kExitOk);
    }
    for (const char* f : {"report.json", "solution.csv", "spectrum.json", "spectrum.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
        EXPECT_FALSE(slurp(a / f).empty());
    }
}

TEST_F(Cli, TimingsAreOptIn) {
    ASSERT_EQ(run({"solve", "--builtin", "levy-pass", "--nx", "5", "--nt", "4", "--timings"}).code, kExitOk);
    EXPECT_TRUE(json_file("report.json").contains("timings"));
}

TEST_F(Cli, ResonantBranchExitCode) {
    const Outcome r = run({"solve", "--builtin", "example13", "--nx", "17", "--nt", "16", "--tau", "1e-2"});
    EXPECT_EQ(r.code, kExitResonant) << r.err;
    const auto doc = json_file("report.json");
    EXPECT_EQ(doc["branch"], "resonant");
    EXPECT_GE(doc["kernel_dim"].get<int>(), 1);
}

TEST_F(Cli, ResonantExampleKernelOnTheStandardGrid) {
    const Outcome r = run({"kernel", "--builtin", "example13", "--nx", "65", "--nt", "64", "--tau", "1e-2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = json_file("kernel.json");
    const int dim = doc["kernel_dim"].get<int>();
    EXPECT_GE(dim, 3);
    ASSERT_EQ(static_cast<int>(doc["modes"].size()), dim);
    for (const auto& mode : doc["modes"]) {
        EXPECT_LE(mode["residual"].get<double>(), 1e-2);
        EXPECT_TRUE(fs::exists(dir_ / mode["file"].get<std::string>()));
    }
}

TEST_F(Cli, SpectrumCsvIsDescending) {
    ASSERT_EQ(run({"spectrum", "--builtin", "manufactured-wellposed", "--nx", "9", "--nt", "8"}).code, kExitOk);
    std::istringstream csv(slurp(dir_ / "spectrum.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "index,sigma");
    double prev = 1e300;
    int count = 0;
    while (std::getline(csv, line)) {
        const double s = std::stod(line.substr(line.find(',') + 1));
        EXPECT_LE(s, prev);
        prev = s;
        ++count;
    }
    EXPECT_EQ(count, 144);
}

TEST_F(Cli, PartialSpectrumIndicesPointIntoTheFullSpectrum) {
    ASSERT_EQ(run({"spectrum", "--builtin", "manufactured-wellposed", "--nx", "9", "--nt", "8", "--full-svd-limit",
                   "0"})
                  .code,
              kExitOk);
    EXPECT_FALSE(json_file("spectrum.json")["spectrum"]["complete"].get<bool>());
    const std::string csv = slurp(dir_ / "spectrum.csv");
    EXPECT_NE(csv.find("\n1,"), std::string::npos);
    EXPECT_NE(csv.find("\n144,"), std::string::npos);
}

TEST_F(Cli, LevyScreenReportsFailingPairs) {
    const Outcome r = run({"check-levy", "--builtin", "example13"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("necessary-condition"), std::string::npos);
    EXPECT_NE(r.out.find("pair (1,2): FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("pair (2,1): FAIL"), std::string::npos);
    const auto doc = json_file("check-levy.json");
    EXPECT_FALSE(doc["pass"].get<bool>());
    EXPECT_EQ(doc["pairs"][0]["j"], 1);
    const std::string csv = slurp(dir_ / "check-levy.csv");
    EXPECT_NE(csv.find("1,2,FAIL"), std::string::npos);

    const Outcome ok = run({"check-levy", "--builtin", "levy-pass"});
    EXPECT_EQ(ok.code, kExitOk);
    EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, ResidualStudyOfTheResonantMode) {
    const Outcome r = run({"residual", "--builtin", "example13", "--exact",
                       "sin(pi*x/2)*sin(t - pi*x/2), cos(pi*x/2)*sin(t - pi*x/2)"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = json_file("residual.json");
    const auto& rows = doc["rows"];
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GE(rows[2]["order"].get<double>(), 1.8);
}

TEST_F(Cli, ConvergeUsesTheKnownSolution) {
    const Outcome r = run({"converge", "--builtin", "manufactured-wellposed", "--grids", "9x8,17x16,33x32"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = json_file("converge.json");
    EXPECT_EQ(doc["quantity"], "error");
    EXPECT_GE(doc["rows"][2]["order"].get<double>(), 1.8);
    const Outcome s = run({"converge", "--builtin", "example13", "--grids", "9x8,17x16"});
    ASSERT_EQ(s.code, kExitOk) << s.err;
    EXPECT_EQ(json_file("converge.json")["quantity"], "sigma_min");
}

TEST_F(Cli, ProblemFileInput) {
    std::ofstream(dir_ / "p.json") << R"({"n": 1, "m": 1, "a": ["1"], "f": ["1"]})";
    EXPECT_EQ(run({"solve", "--problem", (dir_ / "p.json").string(), "--nx", "5", "--nt", "4"}).code, kExitOk);
    std::ofstream(dir_ / "bad.json") << R"({"n": 1, "m": 1, "a": ["1"], "f": ["sin("]})";
    const Outcome bad = run({"solve", "--problem", (dir_ / "bad.json").string()});
    EXPECT_EQ(bad.code, kExitError);
    EXPECT_NE(bad.err.find("f[1]"), std::string::npos);
    std::ofstream(dir_ / "broken.json") << "{";
    const Outcome broken = run({"solve", "--problem", (dir_ / "broken.json").string()});
    EXPECT_EQ(broken.code, kExitError);
    EXPECT_NE(broken.err.find("malformed JSON"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({"solve"}).code, kExitError);
    EXPECT_EQ(run({"solve", "--builtin", "nope"}).code, kExitError);
    EXPECT_EQ(run({"solve", "--builtin", "levy-pass", "--tau", "-1"}).code, kExitError);
    EXPECT_EQ(run({"solve", "--builtin", "levy-pass", "--nx", "2"}).code, kExitError);
    EXPECT_EQ(run({"converge", "--builtin", "levy-pass", "--grids", "9x8,9x16"}).code, kExitError);
    EXPECT_EQ(run({"frobnicate"}).code, kExitError);
}

TEST_F(Cli, DebugCommands) {
    ASSERT_EQ(run({"trace", "--builtin", "example13", "--component", "2", "--x", "0.5", "--t", "1", "--nx", "9"}).code,
              kExitOk);
    std::istringstream csv(slurp(dir_ / "trace.csv"));
    std::string line, last;
    std::getline(csv, line);
    EXPECT_EQ(line, "xi,omega,c,d");
    while (std::getline(csv, line)) last = line;
    double xi = 0, om = 0;
    ASSERT_EQ(std::sscanf(last.c_str(), "%lf,%lf", &xi, &om), 2);
    EXPECT_EQ(xi, 1.0);
    EXPECT_NEAR(om, 1.0 + std::numbers::pi / 4, 1e-13);

    ASSERT_EQ(run({"apply", "--builtin", "pure-forcing", "--part", "f", "--nx", "5", "--nt", "4"}).code, kExitOk);
    EXPECT_TRUE(fs::exists(dir_ / "apply.csv"));
    EXPECT_EQ(run({"apply", "--builtin", "example13", "--part", "b", "--nx", "5", "--nt", "4"}).code, kExitError);
    EXPECT_EQ(run({"apply", "--builtin", "example13", "--part", "q", "--exact", "x, x", "--nx", "5", "--nt", "4"}).code,
              kExitError);
}
