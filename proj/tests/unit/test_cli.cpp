#include "mmwsec/cli.hpp"
#include "mmwsec/errors.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mmwsec;
using namespace mmwsec::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "mmwsec_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

int invoke(const std::vector<std::string>& args, std::string* err_text = nullptr)
{
    std::ostringstream out, err;
    const int rc = main_entry(args, out, err);
    if (err_text)
        *err_text = err.str();
    return rc;
}

} // namespace

TEST_CASE("figure 1 matches its preset")
{
    const auto cfg = parse_args({"figure", "1"});
    CHECK(cfg.command == "figure");
    CHECK(cfg.figure_id == 1);
    const auto preset = figure_preset(1);
    CHECK(cfg.spec.axis_values == preset.axis_values);
    CHECK(cfg.spec.series_values == preset.series_values);
    CHECK(cfg.spec.fixed.n_antennas == 32);
    CHECK(cfg.spec.fixed.rho_e_db == 15.0);
}

TEST_CASE("flags override the preset")
{
    const auto cfg = parse_args({"figure", "3", "--antennas", "16", "--ensemble", "7", "--seed", "9",
                                 "--strategies", "rp,joint"});
    CHECK(cfg.spec.fixed.n_antennas == 16);
    CHECK(cfg.spec.ensemble == 7);
    CHECK(cfg.spec.base_seed == 9);
    CHECK(cfg.spec.strategies == std::vector<StrategyKind>{StrategyKind::RandomPath, StrategyKind::JointPathAntenna});

    const auto f1 = parse_args({"figure", "1", "--paths", "2,6"});
    CHECK(f1.spec.series_values == std::vector<int>{2, 6});
}

TEST_CASE("sweep picks its axis from list-valued flags")
{
    auto cfg = parse_args({"sweep", "--theta-e", "10,20,30"});
    CHECK(cfg.spec.axis == SweepAxis::ThetaE);
    CHECK(cfg.spec.axis_values == std::vector<double>{10, 20, 30});

    cfg = parse_args({"sweep", "--rho-e-db", "0:20:5", "--theta-e", "55"});
    CHECK(cfg.spec.axis == SweepAxis::RhoE);
    CHECK(cfg.spec.axis_values == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(cfg.spec.fixed.theta_e_deg == 55.0);

    cfg = parse_args({"sweep", "--axis", "n_antennas", "--values", "16,32"});
    CHECK(cfg.spec.axis == SweepAxis::NAntennas);

    cfg = parse_args({"sweep", "--theta-e", "40", "--paths", "4,8"});
    CHECK(cfg.spec.series_axis == SweepAxis::NPaths);
}

TEST_CASE("invalid command lines")
{
    CHECK_THROWS_AS(parse_args({"sweep", "--theta-e", "40", "--paths", "1", "--strategies", "joint"}), ValidationError);
    CHECK_THROWS_AS(parse_args({"sweep", "--m-main", "40", "--antennas", "32"}), ValidationError);
    CHECK_THROWS_AS(parse_args({"sweep", "--unknown", "3"}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--strategies", ""}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--strategies", "warp"}), UsageError);
    CHECK_THROWS_AS(parse_args({"figure", "9"}), UsageError);
    CHECK_THROWS_AS(parse_args({}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--antennas", "abc"}), UsageError);
    CHECK_THROWS_AS(parse_args({"sweep", "--help"}), HelpRequested);

    std::string err;
    CHECK(invoke({"sweep", "--m-main", "40", "--antennas", "32"}, &err) == kExitUsage);
    CHECK(err.find("m_main") != std::string::npos);
    CHECK(invoke({"sweep", "--bogus"}) == kExitUsage);
}

TEST_CASE("config file sits between preset and flags")
{
    const auto path = scratch("layer.cfg");
    {
        std::ofstream f(path);
        f << "# comment line\nantennas = 16\nensemble=3   # trailing\nseed=4\n";
    }
    auto cfg = parse_args({"figure", "3", "--config", path.string()});
    CHECK(cfg.spec.fixed.n_antennas == 16);
    CHECK(cfg.spec.ensemble == 3);
    cfg = parse_args({"figure", "3", "--config", path.string(), "--ensemble", "5"});
    CHECK(cfg.spec.ensemble == 5);
    CHECK(cfg.spec.base_seed == 4);

    {
        std::ofstream f(path);
        f << "warp=9\n";
    }
    CHECK_THROWS_AS(parse_args({"sweep", "--config", path.string()}), UsageError);
    CHECK_THROWS_AS(read_config_file(scratch("missing.cfg").string()), UsageError);
}

TEST_CASE("runs are byte-identical and reproducible from the metadata")
{
    const auto a = scratch("a.csv"), b = scratch("b.csv"), c = scratch("c.csv");
    const std::vector<std::string> base{"sweep", "--theta-e", "40,55", "--paths", "6",
                                        "--symbols", "300", "--ensemble", "4", "--seed", "7"};
    auto with_output = [&](const fs::path& p) {
        auto v = base;
        v.insert(v.end(), {"--output", p.string()});
        return v;
    };
    REQUIRE(invoke(with_output(a)) == kExitOk);
    REQUIRE(invoke(with_output(b)) == kExitOk);
    CHECK(slurp(a) == slurp(b));

    const std::string meta = slurp(a.string() + ".meta");
    CHECK(meta.find("seed=7") != std::string::npos);
    CHECK(meta.find("tool_version=") != std::string::npos);
    REQUIRE(invoke({"sweep", "--config", a.string() + ".meta", "--output", c.string()}) == kExitOk);
    CHECK(slurp(a) == slurp(c));
}

TEST_CASE("figure run writes every strategy over the grid")
{
    const auto out = scratch("fig3.csv");
    REQUIRE(invoke({"figure", "3", "--symbols", "200", "--ensemble", "2", "--output", out.string()}) == kExitOk);
    const std::string text = slurp(out);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 4 * 9);
    for (const char* name : {"conventional,", "switched,", "random-path,", "joint,"})
        CHECK(text.find(std::string("\n") + name + "rho_e_db,-10,") != std::string::npos);
}

TEST_CASE("analytic output")
{
    const auto out = scratch("an.csv");
    REQUIRE(invoke({"sweep", "--theta-e", "55", "--symbols", "200", "--ensemble", "2", "--analytic", "--output",
                    out.string()}) == kExitOk);
    const std::string text = slurp(out.string() + ".analytic.csv");
    CHECK(text.find("random-path,") != std::string::npos);
    CHECK(text.find("conventional,") == std::string::npos);
}

TEST_CASE("unwritable output is an I/O failure")
{
    std::string err;
    CHECK(invoke({"sweep", "--symbols", "200", "--ensemble", "1", "--output", "/nonexistent/dir/x.csv"}, &err) ==
          kExitIo);
    CHECK(err.find("cannot write") != std::string::npos);
}
