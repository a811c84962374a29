#include "hphc/cli.hpp"

#include "doctest.h"

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace hphc;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hphc");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.starts_with("#")) lines.push_back(line);
    return lines;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("hphc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("help and version") {
    CHECK(run({"--help"}).code == kExitOk);
    const auto v = run({"--version"});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find("hphc 0.1.0") != std::string::npos);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"nonsense"}).code == kExitUsage);
}

TEST_CASE("return-prob") {
    const auto one = run({"return-prob", "--n", "1", "--mode", "exact"});
    REQUIRE(one.code == kExitOk);
    const auto lines = data_lines(one.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "N,exact_num,exact_den,log_prob,scaled");
    CHECK(lines[1].starts_with("1,5,16,"));
    CHECK(one.out.find("# hphc 0.1.0\n# config: {") == 0);

    const auto grid = run({"return-prob", "--grid", "100,1000,10000", "--mode", "log"});
    REQUIRE(grid.code == kExitOk);
    CHECK(data_lines(grid.out).size() == 4);
    CHECK(grid.out.find("# trend_toward_one: true") != std::string::npos);

    const auto big = run({"return-prob", "--n", "100000", "--mode", "exact"});
    CHECK(big.code == kExitSizeBound);
    CHECK_FALSE(big.err.empty());
    CHECK(run({"return-prob", "--n", "600", "--mode", "exact", "--exact-bound", "600"}).code == kExitOk);
    CHECK(run({"return-prob"}).code == kExitUsage);
    CHECK(run({"return-prob", "--grid", "10,5"}).code == kExitUsage);
    CHECK(run({"return-prob", "--n", "3", "--mode", "fast"}).code == kExitUsage);
}

TEST_CASE("exact") {
    const auto row = run({"exact", "--quantity", "p2n2r", "--n", "2"});
    REQUIRE(row.code == kExitOk);
    const auto lines = data_lines(row.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "p2n2r,2,1,1,16,0.0625");
    CHECK(lines[2] == "p2n2r,2,2,1,8,0.125");
    CHECK(data_lines(run({"exact", "--quantity", "negbin-pmf", "--n", "2", "--r", "0"}).out)[1] ==
          "negbin-pmf,2,0,1,4,0.25");
    CHECK(data_lines(run({"exact", "--quantity", "q", "--n", "2", "--r", "1"}).out)[1] ==
          "q,2,1,2,3,0.66666666666666663");
    CHECK(data_lines(run({"exact", "--quantity", "negbin-cdf", "--n", "3"}).out)[1] == "negbin-cdf,3,-1,0,1,0");
    CHECK(run({"exact", "--quantity", "p2n2r", "--n", "2", "--r", "0"}).code == kExitUsage);
    CHECK(run({"exact", "--quantity", "what", "--n", "2"}).code == kExitUsage);
    CHECK(run({"exact", "--quantity", "negbin-pmf", "--n", "2"}).code == kExitUsage);
}

TEST_CASE("verify") {
    const auto ok = run({"verify"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(data_lines(ok.out).size() == 13);
    CHECK(run({"verify", "--max-n", "10"}).code == kExitOk);

    const auto bad = run({"verify", "--inject-fault", "sparre_andersen"});
    CHECK(bad.code == kExitVerifyFailed);
    CHECK(bad.out.find("sparre_andersen,110,1,FAIL,") != std::string::npos);
    CHECK(run({"verify", "--inject-fault", "no_such_check"}).code == kExitUsage);
}

TEST_CASE("simulate") {
    const auto zero = run({"simulate", "--profile", "hphc", "--steps", "0", "--seed", "7"});
    REQUIRE(zero.code == kExitOk);
    CHECK(data_lines(zero.out) == std::vector<std::string>{"step,k,j", "0,0,0"});

    const auto hist = run({"simulate", "--steps", "2", "--replicas", "1000", "--engine", "construction"});
    REQUIRE(hist.code == kExitOk);
    CHECK(data_lines(hist.out)[0] == "k,j,count,frequency");

    CHECK(run({"simulate", "--profile", "periodic:1/2", "--steps", "3"}).code == kExitUsage);
    CHECK(run({"simulate", "--start", "x", "--steps", "3"}).code == kExitUsage);
    CHECK(run({"simulate", "--engine", "construction", "--profile", "comb", "--steps", "3"}).code == kExitUsage);
}

TEST_CASE("local-time and compare") {
    const auto ratio = run({"local-time", "--ratio", "0,1:0,-1", "--steps", "10000", "--replicas", "20"});
    REQUIRE(ratio.code == kExitOk);
    CHECK(data_lines(ratio.out)[0].starts_with("site_a,site_b,N,mean,ci_lo,ci_hi,zero_denominator_count"));
    CHECK(run({"local-time", "--ratio", "0,1", "--steps", "10"}).code == kExitUsage);
    CHECK(run({"local-time", "--task", "ratio", "--ratio", "0,1:0,-1", "--steps", "0"}).code == kExitUsage);
    CHECK(run({"local-time", "--task", "nope"}).code == kExitUsage);

    const auto green = run({"local-time", "--task", "green", "--grid", "2,3", "--mode", "exact"});
    REQUIRE(green.code == kExitOk);
    CHECK(data_lines(green.out)[1].starts_with("2,1.3125,"));
    CHECK(data_lines(green.out)[1].ends_with(",21,16"));
    CHECK(run({"local-time", "--task", "green", "--n", "5000", "--mode", "exact"}).code == kExitSizeBound);

    const auto res = run({"local-time", "--task", "residual", "--profile", "comb", "--radius", "3"});
    CHECK(res.out.find("# all_zero: true") != std::string::npos);
    const auto flat = run({"local-time", "--task", "residual", "--measure", "constant:1", "--radius", "3"});
    CHECK(flat.out.find("# all_zero: false") != std::string::npos);

    const auto ledger = run({"local-time", "--task", "ledger", "--steps", "100", "--seed", "3"});
    CHECK(ledger.out.find("# steps: 100") != std::string::npos);
    CHECK(run({"local-time", "--task", "lil", "--grid", "16,100", "--replicas", "2"}).code == kExitOk);
    CHECK(run({"local-time", "--task", "exp-law", "--n", "100", "--replicas", "5"}).code == kExitOk);

    const auto cmp = run({"compare", "--models", "simple,hphc,periodic:1/4,1/3,comb", "--n", "1000"});
    REQUIRE(cmp.code == kExitOk);
    const auto lines = data_lines(cmp.out);
    CHECK(lines[0] == "N,simple,hphc,\"periodic:1/4,1/3\",comb");
    CHECK(lines[1].starts_with("1000,0.00031830988618379"));
    CHECK(run({"compare", "--models", "simple,square", "--n", "10"}).code == kExitUsage);
}

TEST_CASE("artifacts reproduce themselves from their embedded config") {
    const fs::path dir = scratch_dir();
    const std::vector<std::vector<std::string>> runs{
        {"local-time", "--ratio", "0,1:3,2", "--steps", "20000", "--replicas", "30", "--seed", "5"},
        {"local-time", "--task", "exp-law", "--grid", "100,1000", "--replicas", "50", "--format", "json"},
        {"simulate", "--steps", "6", "--replicas", "500", "--seed", "77"},
        {"return-prob", "--grid", "1,2,30", "--mode", "both"},
        {"local-time", "--task", "lil", "--grid", "16,500", "--replicas", "3", "--engine", "construction"},
    };
    int i = 0;
    for (auto args : runs) {
        const fs::path first = dir / ("a" + std::to_string(i));
        const fs::path second = dir / ("b" + std::to_string(i++));
        args.insert(args.end(), {"--workers", "3", "--out", first.string()});
        REQUIRE(run(args).code == kExitOk);
        const std::string command = args[0];
        REQUIRE(run({command, "--config", first.string(), "--workers", "1", "--out", second.string()}).code ==
                kExitOk);
        CHECK(slurp(first) == slurp(second));
    }
    const auto cfg = load_run_config((dir / "a1").string());
    CHECK(cfg.task == "exp-law");
    CHECK(cfg.grid == std::vector<long>{100, 1000});
    CHECK(cfg.format == "json");
    CHECK(run({"simulate", "--config", (dir / "a3").string()}).code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("config files override flags") {
    const fs::path dir = scratch_dir();
    {
        std::ofstream(dir / "cfg.json") << R"({"n": 2, "mode": "exact"})";
    }
    const auto r = run({"return-prob", "--n", "7", "--config", (dir / "cfg.json").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(data_lines(r.out)[1].starts_with("2,3,16,"));
    {
        std::ofstream(dir / "broken.json") << "not json";
    }
    CHECK(run({"return-prob", "--config", (dir / "broken.json").string()}).code == kExitUsage);
    CHECK(run({"return-prob", "--config", (dir / "missing.json").string()}).code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("json output") {
    const auto r = run({"return-prob", "--n", "1", "--mode", "both", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["generator"] == "hphc 0.1.0");
    CHECK(j["config"]["n"] == 1);
    CHECK(j["config"]["seed"] == 1);
    CHECK(j["columns"][1] == "exact_num");
    CHECK(j["rows"][0][1] == "5");
    CHECK(j["notes"]["trend_toward_one"] == "true");
}

TEST_CASE("output directory from the environment") {
    const fs::path dir = scratch_dir();
    ::setenv(kOutputDirEnv, dir.string().c_str(), 1);
    const auto r = run({"local-time", "--task", "green", "--n", "10"});
    ::unsetenv(kOutputDirEnv);
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    CHECK(fs::exists(dir / "local-time-green.csv"));
    fs::remove_all(dir);
}
