#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "pmblue/csv.hpp"

namespace fs = std::filesystem;
using pmblue::cli::dispatch;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("pmblue_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

const std::regex error_line(R"(error: kind=(usage|validation|numerical|runtime) param=\S+ message=".*"\n)");

}  // namespace

TEST(Cli, MomentsCsvToStdout) {
    const auto r = run({"moments", "--dist", "uniform", "--n", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto t = pmblue::read_csv(in);
    EXPECT_EQ(t.rows.size(), 6u);
    const auto mu = t.column("mu_i");
    EXPECT_NEAR(pmblue::parse_number(t.rows.back()[mu]), 0.75, 1e-12);
}

TEST(Cli, JsonOutputToFile) {
    const auto dir = scratch("json");
    const auto path = dir / "blue.json";
    const auto r = run({"blue", "--dist", "logistic", "--n", "6", "--format", "json", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(r.out.empty());
    const auto j = nlohmann::json::parse(slurp(path));
    EXPECT_LT(j.at("l2_path_agreement").at("max_coefficient_difference").get<double>(), 1e-8);
    fs::remove_all(dir);
}

TEST(Cli, NcpAtomFails) {
    const auto r = run({"ncp", "--dist", "atom_truncated_uniform", "--n", "3", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("verdict"), "ncp_fail");
}

TEST(Cli, ErrorsAndExitCodes) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"moments", "--dist", "cauchy", "--n", "3"},
             {"blue", "--dist", "normal", "--n", "1"},
             {"moments", "--dist", "pareto:a=1", "--n", "3"},
             {"simulate", "--dist", "uniform", "--n", "3", "--replicates", "10"},
             {"moments", "--dist", "uniform", "--n", "3", "--format", "xml"},
             {},
             {"frobnicate"},
         }) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args[0]);
        EXPECT_TRUE(std::regex_match(r.err, error_line)) << r.err;
    }
    const auto r = run({"moments", "--dist", "cauchy", "--n", "3"});
    EXPECT_NE(r.err.find("param=dist"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("paper-pack"), std::string::npos);
}

TEST(Cli, SimulateIsDeterministic) {
    const std::vector<std::string> args{"simulate", "--dist", "negexp", "--reflect", "--n", "10",
                                        "--replicates", "2000", "--seed", "9", "--workers", "2"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConfigFile) {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "run.toml");
        f << "[moments]\ndist = \"uniform\"\nn = 4\n";
    }
    const auto r = run({"moments", "--config", (dir / "run.toml").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    EXPECT_EQ(pmblue::read_csv(in).rows.size(), 10u);
    fs::remove_all(dir);
}

TEST(Cli, PaperPackIsIdempotent) {
    const auto dir = scratch("pack");
    const auto a = run({"paper-pack", "--out", dir.string()});
    // The two Fisher limit checks are expected to fail.
    EXPECT_EQ(a.code, 4) << a.err;
    for (const char* f : {"uniform_rate.csv", "ncp_verdicts.csv", "von_mises.csv", "fisher_counterexample.json",
                          "fisher_minima_ladder.csv", "checks.csv"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    const std::string first = slurp(dir / "checks.csv");
    const auto b = run({"paper-pack", "--out", dir.string()});
    EXPECT_EQ(b.code, a.code);
    EXPECT_EQ(slurp(dir / "checks.csv"), first);
    EXPECT_EQ(a.out, b.out);
    fs::remove_all(dir);
}
