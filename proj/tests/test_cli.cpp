#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "connectgraph/cli.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/serialize.hpp"

using namespace connectgraph;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "connectgraph");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

const std::vector<std::string> kToy{"toy", "--rho-p", "0.7", "--alpha-p", "0.15", "--beta-p", "0.1",
                                    "--gamma-p", "0.05", "--eta", "0.01"};

std::vector<std::string> small_sweep() {
    return {"sbm-sweep", "--vary", "alpha", "--from", "0.05", "--to", "0.35", "--steps", "7",
            "--r", "3", "--m", "2", "--n", "6", "--rho", "0.6", "--beta", "0.3", "--gamma", "0.2",
            "--trials", "10", "--seed", "7"};
}

class EnvSeed {
public:
    explicit EnvSeed(const char* v) { setenv("CONNECTGRAPH_SEED", v, 1); }
    ~EnvSeed() { unsetenv("CONNECTGRAPH_SEED"); }
};

}  // namespace

TEST(Cli, ToyExample) {
    const auto r = run(kToy);
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["target_error"].get<double>(), 0.0);
    EXPECT_EQ(j["predicted_classes"], Json::parse("[1, 2, 1, 2]"));
    EXPECT_EQ(r.out.back(), '\n');
}

TEST(Cli, SweepRowCount) {
    const auto r = run(small_sweep());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 71u);
    EXPECT_EQ(lines[0], std::string(kSweepCsvHeader));
    EXPECT_EQ(lines[1].rfind("alpha,0.050000000000000003,0,", 0), 0u);
    EXPECT_EQ(lines[70].rfind("alpha,0.34999999999999998,9,", 0), 0u);
}

TEST(Cli, SweepJson) {
    auto args = small_sweep();
    args.insert(args.end(), {"--format", "json"});
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out).size(), 70u);
}

TEST(Cli, ByteIdenticalAcrossThreads) {
    std::string first;
    for (const char* t : {"1", "2", "8"}) {
        auto args = small_sweep();
        args.insert(args.end(), {"--threads", t});
        const auto r = run(args);
        ASSERT_EQ(r.code, 0);
        if (first.empty()) first = r.out;
        EXPECT_EQ(r.out, first) << "threads " << t;
    }
    kernels::set_threads(1);
}

TEST(Cli, EnvironmentSeedOverrides) {
    const std::vector<std::string> base{"sbm-run", "--r", "2", "--m", "2", "--n", "8", "--rho", "0.6",
                                        "--alpha", "0.4", "--beta", "0.3", "--gamma", "0.1"};
    auto with_seed = base;
    with_seed.insert(with_seed.end(), {"--seed", "5"});
    auto other = base;
    other.insert(other.end(), {"--seed", "6"});
    const auto plain = run(with_seed);
    ASSERT_EQ(plain.code, 0) << plain.err;
    EXPECT_EQ(Json::parse(plain.out)["seed"].get<std::uint64_t>(), 5u);
    {
        EnvSeed env("5");
        EXPECT_EQ(run(other).out, plain.out);
    }
    {
        EnvSeed env("not-a-number");
        const auto bad = run(other);
        EXPECT_EQ(bad.code, 2);
        EXPECT_NE(bad.err.find("CONNECTGRAPH_SEED"), std::string::npos);
    }
}

TEST(Cli, SbmRunWithGraphAndCsv) {
    const std::vector<std::string> base{"sbm-run", "--r", "2", "--m", "2", "--n", "4", "--rho", "0.6",
                                        "--alpha", "0.4", "--beta", "0.3", "--gamma", "0.1", "--seed", "1"};
    auto g = base;
    g.push_back("--with-graph");
    const auto r = run(g);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["graph"]["weights"].size(), 256u);
    auto c = base;
    c.insert(c.end(), {"--format", "csv"});
    EXPECT_EQ(split_lines(run(c).out).size(), 2u);
}

TEST(Cli, ValidationErrorsNameTheFlag) {
    auto bad_sum = kToy;
    bad_sum[2] = "0.9";
    const auto a = run(bad_sum);
    EXPECT_EQ(a.code, 2);
    EXPECT_NE(a.err.find("--rho-p"), std::string::npos);

    auto out_of_range = kToy;
    out_of_range[4] = "1.5";
    const auto b = run(out_of_range);
    EXPECT_EQ(b.code, 2);
    EXPECT_NE(b.err.find("--alpha-p"), std::string::npos);

    auto bad_eta = kToy;
    bad_eta[10] = "-1";
    EXPECT_EQ(run(bad_eta).code, 2);

    const auto c = run({"frobnicate"});
    EXPECT_EQ(c.code, 2);
    EXPECT_NE(c.err.find("unknown command"), std::string::npos);

    auto grid = small_sweep();
    grid[6] = "1.4";
    const auto d = run(grid);
    EXPECT_EQ(d.code, 2);
    EXPECT_NE(d.err.find("--vary"), std::string::npos);

    auto missing = small_sweep();
    missing.erase(missing.begin() + 19, missing.begin() + 21);  // --gamma 0.2
    const auto e = run(missing);
    EXPECT_EQ(e.code, 2);
    EXPECT_NE(e.err.find("--gamma"), std::string::npos);

    EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
    EXPECT_EQ(run({"fit", "--input", "/nonexistent/file.csv"}).code, 2);
}

TEST(Cli, OutputFile) {
    const auto dir = std::filesystem::temp_directory_path() / "connectgraph_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "toy.json").string();
    auto args = kToy;
    args.insert(args.end(), {"--output", path});
    const auto r = run(args);
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), run(kToy).out);

    auto unwritable = kToy;
    unwritable.insert(unwritable.end(), {"--output", (dir / "missing" / "x.json").string()});
    const auto w = run(unwritable);
    EXPECT_EQ(w.code, 2);
    EXPECT_NE(w.err.find("--output"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cli, FitFromFile) {
    const auto path = (std::filesystem::temp_directory_path() / "connectgraph_fit.csv").string();
    {
        std::ofstream f(path);
        f << "pair_id,accuracy,alpha,beta,gamma\n";
        f << "a,0.5,2,1.5,1\nb,0.3,1.1,3,1\nc,0.2,1.3,1.2,1\nd,0.6,2.5,2,1\n";
    }
    const auto r = run({"fit", "--input", path});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_TRUE(j.contains("w1"));
    EXPECT_EQ(j["residuals"].size(), 4u);
    std::filesystem::remove(path);
}

TEST(Cli, PaperTables) {
    const auto r = run({"paper-tables"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["published"]["w1"].get<double>(), 14.9);
    EXPECT_EQ(j["fits"].size(), 3u);
}

TEST(Cli, AblateFractions) {
    const std::vector<std::string> base{"ablate", "--r", "2", "--m", "2", "--n", "6", "--rho", "0.6",
                                        "--alpha", "0.4", "--beta", "0.3", "--gamma", "0.1", "--trials", "2"};
    auto one = base;
    one.insert(one.end(), {"--fraction", "0.5"});
    EXPECT_EQ(split_lines(run(one).out).size(), 3u);
    auto grid = base;
    grid.insert(grid.end(), {"--from", "0", "--to", "0.75", "--steps", "4"});
    EXPECT_EQ(split_lines(run(grid).out).size(), 9u);
    auto both = one;
    both.insert(both.end(), {"--from", "0"});
    EXPECT_EQ(run(both).code, 2);
}

TEST(Cli, VerifySuite) {
    const auto r = run({"verify", "--suite", "graph_core"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("PASS graph_core/"), std::string::npos);
    EXPECT_EQ(r.out, run({"verify", "--suite", "graph_core"}).out);
    const auto j = run({"verify", "--suite", "probe", "--format", "json"});
    EXPECT_TRUE(Json::parse(j.out).is_array());
}

TEST(Cli, Help) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sbm-sweep"), std::string::npos);
}
