#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dunkl/config.hpp"
#include "dunkl/experiments.hpp"
#include "dunkl/io.hpp"
#include "dunkl/runner.hpp"

using namespace dunkl;

namespace {

std::string error_key(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ParseConfig, Examples)
{
    const auto c = parse_config("family = A\nrank = 3\nk = [1.0]\n");
    EXPECT_EQ(c.family, Family::A);
    EXPECT_EQ(c.k, std::vector<double>{1.0});
    EXPECT_EQ(error_key("family = B\nrank = 2\nk = [0.5]\n"), "k");
    EXPECT_EQ(error_key("dt = 0\n"), "dt");
}

TEST(ParseConfig, FailClosed)
{
    EXPECT_EQ(error_key("colour = red\n"), "colour");
    EXPECT_EQ(error_key("rank = two\nfamily = A\nk = [1]\n"), "rank");
    EXPECT_EQ(error_key("command = hitting\nfamily = A\nrank = 3\nk = [0.3]\n"), "x0");
    EXPECT_EQ(error_key("command = hitting\nrank = 3\nk = [0.3]\nx0 = [2, 1, 0]\n"), "family");
    EXPECT_EQ(error_key("command = fly\n"), "command");
    EXPECT_EQ(error_key("k = 0.5\nfamily = A\nrank = 3\n"), "k");
    EXPECT_EQ(error_key("seed = -1\n"), "seed");
    EXPECT_EQ(error_key("seed = 1\nseed = 2\n"), "seed");
    EXPECT_EQ(error_key("clip_fraction = 1.5\n"), "clip_fraction");
    EXPECT_EQ(error_key("command = hitting\nfamily = A\nrank = 3\nk = [0.3]\nx0 = [0, 1, 2]\n"), "x0");
    EXPECT_EQ(error_key("command = compare\nfamily = A\nrank = 3\nk = [0.3]\nx0 = [2, 1, 0]\n"), "alpha");
    EXPECT_EQ(error_key("command = moments\nmodel = laguerre\nrank = 2\nbeta = 2\nx0 = [2, 1]\n"), "delta");
    EXPECT_EQ(error_key("command = occupation\nfamily = A\nrank = 3\nk = [0.3]\nx0 = [2, 1, 0]\n"),
              "epsilons");
    EXPECT_EQ(error_key("garbage\n"), "line 1");
}

TEST(ParseConfig, CommentsAndWhitespace)
{
    const auto c = parse_config("# run\n  command=hitting # inline\nfamily = rank_one\nrank=1\n"
                                "k=[ 0.25 ]\nx0=[1]\nhit_epsilon = 1e-8\nseed = 18446744073709551615\n");
    EXPECT_EQ(c.command, Command::Hitting);
    EXPECT_EQ(c.sim.hit_epsilon, 1e-8);
    EXPECT_EQ(c.sim.master_seed, 18446744073709551615ull);
}

TEST(ParseConfig, RenderRoundTrip)
{
    RunConfig c;
    c.command = Command::Occupation;
    c.family = Family::B;
    c.rank = 3;
    c.k = {0.6 + 1e-16, 1.0 / 3.0};
    c.x0 = {3.0, 2.0, 0.1};
    c.sim.dt = 0.1 / 3.0;
    c.sim.horizon = 2.0;
    c.epsilons = {0.1, 0.03, 0.01};
    c.out = "results/run 1";
    EXPECT_EQ(parse_config(render(c)), c);

    RunConfig l;
    l.command = Command::Moments;
    l.model = Model::Laguerre;
    l.rank = 2;
    l.beta = 2.0;
    l.delta = 3.0;
    l.x0 = {4, 1};
    EXPECT_EQ(parse_config(render(l)), l);
    EXPECT_EQ(parse_config(render(RunConfig{})), RunConfig{});
}

TEST(Csv, FormatAndPrecision)
{
    PathRecord r;
    r.dim = 2;
    r.times = {0.0, 0.1};
    r.states = {1.0 / 3.0, 0.0, 2.0, -1e-300};
    r.row_margins = {1.0 / 3.0, 2.0};
    std::ostringstream out;
    write_csv(out, r);
    EXPECT_EQ(out.str(), "t,x_1,x_2,min_margin\n"
                         "0,0.33333333333333331,0,0.33333333333333331\n"
                         "0.10000000000000001,2,-1e-300,2\n");
    for (double v : {0.1, 1.0 / 3.0, -1e-300, 6.02214076e23, 4.9e-324})
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
}

TEST(Run, SimulateIsByteIdentical)
{
    const auto dir = std::filesystem::temp_directory_path() / "dunkl_lab_test_sim";
    std::filesystem::remove_all(dir);
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
        auto c = parse_config("command = simulate\nfamily = B\nrank = 2\nk = [0.4, 0.2]\n"
                              "x0 = [2, 1]\npaths = 3\nseed = 5\nout = " + (dir / std::to_string(rep)).string() + "\n");
        std::ostringstream log;
        EXPECT_EQ(run(c, log), 0);
        const auto text = slurp(dir / std::to_string(rep) / "path_5_2.csv");
        EXPECT_FALSE(text.empty());
        if (rep == 0)
            first = text;
        else
            EXPECT_EQ(text, first);
    }
}

TEST(Run, HittingWritesReport)
{
    const auto dir = std::filesystem::temp_directory_path() / "dunkl_lab_test_hit";
    std::filesystem::remove_all(dir);
    auto c = parse_config("command = hitting\nfamily = rank_one\nrank = 1\nk = [0.25]\nx0 = [1]\n"
                          "horizon = 2\npaths = 100\nthreshold = 0.1\nout = " + dir.string() + "\n");
    std::ostringstream log;
    EXPECT_EQ(run(c, log), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "hitting_0.json"));
    EXPECT_NE(log.str().find("hitting seed=0"), std::string::npos);
    const auto j = Json::parse(slurp(dir / "hitting_0.json"));
    EXPECT_TRUE(j.contains("ci_low"));
    EXPECT_EQ(j["ci_method"], "wilson");
}

TEST(Run, ValidateSuite)
{
    const auto dir = std::filesystem::temp_directory_path() / "dunkl_lab_test_validate";
    RunConfig c;
    c.out = dir.string();
    std::ostringstream log;
    EXPECT_EQ(run(c, log), 0) << log.str();
    const auto j = Json::parse(slurp(dir / "validate_0.json"));
    EXPECT_GE(j["properties"].size(), 12u);
}
