#include "mmwsec/errors.hpp"
#include "mmwsec/strategies.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace mmwsec;
using Catch::Approx;

namespace {

ChannelRealization test_channel(int l, std::uint64_t seed = 21)
{
    Rng rng(seed);
    return sample_channel(l, 40, rng);
}

void check_unit_norm(const SymbolPlan& p)
{
    CHECK(p.weights.norm() == Approx(1.0).epsilon(1e-12));
}

} // namespace

TEST_CASE("strategy names round trip")
{
    for (auto k : kAllStrategies)
        CHECK(parse_strategy(to_string(k)) == k);
    CHECK(parse_strategy("rp") == StrategyKind::RandomPath);
    CHECK_FALSE(parse_strategy("nonsense"));
}

TEST_CASE("conventional plan steers everything at theta_R")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    const auto p = conventional_plan(ch, cfg);
    CHECK(p.weights == steered_weights(cfg, 40.0));
    CHECK(conventional_plan(ch, cfg) == p);
    CHECK(std::abs(pattern_gain(cfg, 40.0, p.weights) - 1.0) < 1e-12);
    CHECK(p.main_set.size() == 32);
}

TEST_CASE("switched array keeps a deterministic main-lobe gain")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    Rng rng(4);
    for (int m : {1, 5, 16, 31}) {
        for (int k = 0; k < 50; ++k) {
            const auto p = switched_array_plan(ch, cfg, m, rng);
            check_unit_norm(p);
            CHECK(p.main_set.size() == static_cast<std::size_t>(m));
            CHECK(std::abs(pattern_gain(cfg, 40.0, p.weights)) == Approx(std::sqrt(m / 32.0)).epsilon(1e-12));
            std::size_t active = 0;
            for (auto w : p.weights.entries())
                if (w != cplx{}) {
                    ++active;
                    CHECK(std::abs(w) == Approx(1.0 / std::sqrt(m)));
                }
            CHECK(active == static_cast<std::size_t>(m));
        }
    }
}

TEST_CASE("switched array with every antenna is the conventional plan")
{
    const ArrayConfig cfg{16, 0.5};
    const auto ch = test_channel(6);
    Rng rng(8);
    const auto full = switched_array_plan(ch, cfg, 16, rng);
    const auto conv = conventional_plan(ch, cfg);
    for (std::size_t n = 0; n < 16; ++n)
        CHECK(std::abs(full.weights[n] - conv.weights[n]) < 1e-15);
}

TEST_CASE("switched array gain off the main lobe fluctuates")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    Rng rng(12);
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double g = std::abs(pattern_gain(cfg, 70.0, switched_array_plan(ch, cfg, 16, rng).weights));
        s += g;
        s2 += g * g;
    }
    CHECK(s2 / 1000 - (s / 1000) * (s / 1000) > 1e-4);
}

TEST_CASE("random path picks paths uniformly and coherently")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    Rng rng(99);
    std::vector<int> hits(12, 0);
    for (int k = 0; k < 10000; ++k) {
        const auto p = random_path_plan(ch, cfg, rng);
        ++hits[p.main_path];
        CHECK(p.main_aod_deg == ch.paths[p.main_path].aod_deg);
        if (k < 200)
            CHECK(std::abs(pattern_gain(cfg, p.main_aod_deg, p.weights) - 1.0) < 1e-12);
    }
    for (int h : hits)
        CHECK(h / 10000.0 == Approx(1.0 / 12).margin(0.01));

    const auto single = test_channel(1);
    for (int k = 0; k < 20; ++k)
        CHECK(random_path_plan(single, cfg, rng).main_path == 0);
}

TEST_CASE("joint plan partitions the array")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    const StrategyParams params{16, 5};
    const auto top = top_k_paths(ch, 5);
    Rng rng(31);
    for (int k = 0; k < 500; ++k) {
        const auto p = joint_plan(ch, cfg, params, rng);
        check_unit_norm(p);
        REQUIRE(p.secondary_path);
        CHECK(*p.secondary_path != ch.strongest_index);
        CHECK(std::find(top.begin(), top.end(), *p.secondary_path) != top.end());
        CHECK(p.main_aod_deg == 40.0);
        CHECK(p.main_set.size() == 16);
        std::vector<int> all = p.main_set;
        all.insert(all.end(), p.secondary_set.begin(), p.secondary_set.end());
        std::sort(all.begin(), all.end());
        std::vector<int> expect(32);
        std::iota(expect.begin(), expect.end(), 0);
        CHECK(all == expect);
        for (auto w : p.weights.entries())
            CHECK(std::abs(w) == Approx(1.0 / std::sqrt(32.0)));
    }
}

TEST_CASE("joint main-lobe sum contains exactly M coherent terms")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    Rng rng(5);
    const int m = 12;
    for (int k = 0; k < 100; ++k) {
        const auto p = joint_plan(ch, cfg, {m, 5}, rng);
        const auto a = array_response(cfg, p.main_aod_deg);
        cplx main_part{}, rest{};
        for (int n : p.main_set)
            main_part += std::conj(a[n]) * p.weights[n] * 32.0;
        for (int n : p.secondary_set)
            rest += std::conj(a[n]) * p.weights[n] * 32.0;
        CHECK(main_part.real() == Approx(m).epsilon(1e-12));
        CHECK(std::abs(main_part.imag()) < 1e-10);
        CHECK(std::abs(pattern_gain(cfg, p.main_aod_deg, p.weights) * 32.0 - (main_part + rest)) < 1e-10);
    }
}

TEST_CASE("joint with M = N reduces to conventional")
{
    const ArrayConfig cfg{16, 0.5};
    const auto ch = test_channel(6);
    Rng rng(2);
    const auto p = joint_plan(ch, cfg, {16, 5}, rng);
    const auto conv = conventional_plan(ch, cfg);
    for (std::size_t n = 0; n < 16; ++n)
        CHECK(std::abs(p.weights[n] - conv.weights[n]) < 1e-15);
    CHECK(p.secondary_set.empty());
}

TEST_CASE("joint needs more than one path")
{
    const ArrayConfig cfg{16, 0.5};
    const auto ch = test_channel(1);
    Rng rng(2);
    CHECK_THROWS_AS(joint_plan(ch, cfg, {8, 5}, rng), InfeasibleError);
    CHECK_FALSE(is_applicable({StrategyKind::JointPathAntenna, {8, 5}}, cfg, 1));
    CHECK(is_applicable({StrategyKind::JointPathAntenna, {8, 5}}, cfg, 2));
    CHECK_THROWS_AS(check_applicable({StrategyKind::SwitchedArray, {17, 5}}, cfg, 4), ValidationError);
}

TEST_CASE("secondary pool is clamped to the available paths")
{
    const auto ch = test_channel(3);
    const auto pool = secondary_pool(ch, 5);
    CHECK(pool.size() == 2);
    CHECK(std::find(pool.begin(), pool.end(), ch.strongest_index) == pool.end());
}

TEST_CASE("plans are reproducible from the seed")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    for (auto kind : kAllStrategies) {
        const Strategy s{kind, {16, 5}};
        Rng a(123), b(123);
        for (int k = 0; k < 20; ++k)
            CHECK(draw_plan(s, ch, cfg, a) == draw_plan(s, ch, cfg, b));
    }
}

TEST_CASE("plan generator matches the free functions")
{
    const ArrayConfig cfg{32, 0.5};
    const auto ch = test_channel(12);
    for (auto kind : kAllStrategies) {
        const Strategy s{kind, {16, 5}};
        const PlanGenerator gen(ch, cfg, s);
        Rng a(7), b(7);
        for (int k = 0; k < 20; ++k) {
            const auto x = gen.next(a);
            const auto y = draw_plan(s, ch, cfg, b);
            CHECK(x.main_path == y.main_path);
            CHECK(x.main_set == y.main_set);
            for (std::size_t n = 0; n < 32; ++n)
                CHECK(std::abs(x.weights[n] - y.weights[n]) < 1e-14);
        }
    }
}
