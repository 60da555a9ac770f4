#include "mmwsec/errors.hpp"
#include "mmwsec/montecarlo.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace mmwsec;
using Catch::Approx;

namespace {

SweepSpec small_spec()
{
    SweepSpec s;
    s.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    s.axis = SweepAxis::ThetaE;
    s.axis_values = {40.0, 55.0, 100.0};
    s.symbols = 500;
    s.ensemble = 6;
    s.base_seed = 5;
    return s;
}

std::string csv(const ResultTable& t)
{
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

} // namespace

TEST_CASE("figure presets")
{
    const auto f1 = figure_preset(1);
    CHECK(f1.fixed.n_antennas == 32);
    CHECK(f1.fixed.rho_r_db == 10.0);
    CHECK(f1.fixed.rho_e_db == 15.0);
    CHECK(f1.fixed.theta_r_deg == 40);
    CHECK(f1.axis == SweepAxis::ThetaE);
    CHECK(f1.axis_values.size() == 180);
    CHECK(f1.series_axis == SweepAxis::NPaths);
    CHECK(f1.series_values == std::vector<int>{4, 8, 12});

    const auto f2 = figure_preset(2);
    CHECK(f2.series_axis == SweepAxis::NAntennas);
    CHECK(f2.series_values == std::vector<int>{16, 32, 64});
    CHECK(f2.fixed.n_paths == 12);

    const auto f3 = figure_preset(3);
    CHECK(f3.axis == SweepAxis::RhoE);
    CHECK(f3.fixed.theta_e_deg == 40.0);
    CHECK(f3.fixed.n_paths == 12);
    CHECK(figure_preset(4).fixed.theta_e_deg == 55.0);
    CHECK_THROWS_AS(figure_preset(5), UsageError);
    for (int id = 1; id <= 4; ++id)
        CHECK_NOTHROW(figure_preset(id).validate());
}

TEST_CASE("axis names round trip")
{
    for (auto a : {SweepAxis::ThetaE, SweepAxis::RhoE, SweepAxis::NAntennas, SweepAxis::NPaths})
        CHECK(parse_axis(to_string(a)) == a);
    CHECK_FALSE(parse_axis("bogus"));
}

TEST_CASE("spec validation names the broken invariant")
{
    auto s = small_spec();
    s.strategies.clear();
    CHECK_THROWS_AS(s.validate(), ValidationError);

    s = small_spec();
    s.fixed.m_main = 40;
    CHECK_THROWS_WITH(s.validate(), Catch::Matchers::ContainsSubstring("m_main"));

    s = small_spec();
    s.fixed.n_paths = 1;
    s.strategies = {StrategyKind::JointPathAntenna};
    CHECK_THROWS_WITH(s.validate(), Catch::Matchers::ContainsSubstring("n_paths >= 2"));

    s = small_spec();
    s.axis_values = {0.0};
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("sweeps are deterministic and independent of the thread count")
{
    const auto s = small_spec();
    const auto a = csv(run_sweep(s, 1));
    CHECK(a == csv(run_sweep(s, 1)));
    CHECK(a == csv(run_sweep(s, 3)));
}

TEST_CASE("csv layout")
{
    const auto t = run_sweep(small_spec(), 1);
    CHECK(t.rows.size() == 12);
    const auto text = csv(t);
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 13);
    CHECK(text.find("random-path,theta_e_deg,55,") != std::string::npos);
}

TEST_CASE("conventional at the receiver angle leaks everything")
{
    auto s = small_spec();
    s.axis_values = {40.0};
    s.ensemble = 20;
    const auto t = run_sweep(s, 1);
    for (auto k : {StrategyKind::Conventional, StrategyKind::SwitchedArray}) {
        const auto* row = t.find(k, 40.0);
        REQUIRE(row);
        CHECK(row->point.rate_bps_hz == 0.0);
        for (double r : row->channel_rates)
            CHECK(r == 0.0);
    }
    const auto* rp = t.find(StrategyKind::RandomPath, 40.0);
    REQUIRE(rp);
    CHECK(rp->point.rate_bps_hz > 0.0);
}

TEST_CASE("infeasible rows are kept and marked")
{
    SweepSpec s = small_spec();
    s.strategies = {StrategyKind::JointPathAntenna, StrategyKind::RandomPath};
    s.axis = SweepAxis::NPaths;
    s.axis_values = {1.0, 4.0};
    s.fixed.theta_e_deg = 55.0;
    const auto t = run_sweep(s, 1);
    REQUIRE(t.rows.size() == 4);
    const auto* bad = t.find(StrategyKind::JointPathAntenna, 1.0);
    REQUIRE(bad);
    CHECK(bad->status == RowStatus::Inapplicable);
    CHECK(std::isnan(bad->point.rate_bps_hz));
    CHECK(t.find(StrategyKind::JointPathAntenna, 4.0)->status == RowStatus::Ok);
    CHECK(t.find(StrategyKind::RandomPath, 1.0)->status == RowStatus::Ok);
    CHECK_FALSE(t.all_inapplicable());
    CHECK(csv(t).find("joint,n_paths,1,nan,nan,nan,nan,inapplicable") != std::string::npos);
}

TEST_CASE("series rows carry their value in the label")
{
    SweepSpec s = small_spec();
    s.strategies = {StrategyKind::RandomPath};
    s.axis_values = {40.0};
    s.series_axis = SweepAxis::NPaths;
    s.series_values = {4, 8};
    const auto t = run_sweep(s, 1);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.find(StrategyKind::RandomPath, 40.0, 4));
    const auto text = csv(t);
    CHECK(text.find("random-path[n_paths=4],theta_e_deg,40,") != std::string::npos);
    CHECK(text.find("random-path[n_paths=8],theta_e_deg,40,") != std::string::npos);
}

TEST_CASE("standard error shrinks with the ensemble")
{
    SweepSpec s = small_spec();
    s.strategies = {StrategyKind::RandomPath};
    s.axis_values = {40.0};
    s.symbols = 300;
    s.ensemble = 50;
    const double se_small = run_sweep(s, 1).rows[0].stderr_rate;
    s.ensemble = 800;
    const double se_large = run_sweep(s, 1).rows[0].stderr_rate;
    // Sixteen times the channels: about a quarter of the error.
    CHECK(se_large / se_small == Approx(0.25).margin(0.1));
}

TEST_CASE("closed-form comparison")
{
    SweepSpec s = small_spec();
    s.strategies = {StrategyKind::RandomPath, StrategyKind::JointPathAntenna};
    const auto t = compare_analytic(s, 1);
    for (const auto& row : t.rows) {
        CHECK(row.status == RowStatus::Ok);
        CHECK(std::isfinite(row.point.rate_bps_hz));
    }
    // Per channel the random path receiver term is N rho / L with rho taken
    // against the mean path gain; it does not depend on the eavesdropper.
    CHECK(t.find(StrategyKind::RandomPath, 40.0)->point.snr.snr_r ==
          Approx(t.find(StrategyKind::RandomPath, 100.0)->point.snr.snr_r));

    s.strategies = {StrategyKind::Conventional};
    CHECK_THROWS_AS(compare_analytic(s, 1), UsageError);
}
