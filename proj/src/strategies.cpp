#include "mmwsec/strategies.hpp"
#include "mmwsec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mmwsec {

std::string_view to_string(StrategyKind kind)
{
    switch (kind) {
    case StrategyKind::Conventional: return "conventional";
    case StrategyKind::SwitchedArray: return "switched";
    case StrategyKind::RandomPath: return "random-path";
    case StrategyKind::JointPathAntenna: return "joint";
    }
    return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name)
{
    if (name == "conventional" || name == "conv")
        return StrategyKind::Conventional;
    if (name == "switched" || name == "switched-array" || name == "sw")
        return StrategyKind::SwitchedArray;
    if (name == "random-path" || name == "random" || name == "rp")
        return StrategyKind::RandomPath;
    if (name == "joint" || name == "joint-path-antenna")
        return StrategyKind::JointPathAntenna;
    return std::nullopt;
}

void check_applicable(const Strategy& s, const ArrayConfig& cfg, std::size_t n_paths)
{
    cfg.validate();
    if (n_paths < 1)
        throw UsageError("channel has no paths");
    const int m = s.params.m_main;
    switch (s.kind) {
    case StrategyKind::Conventional:
    case StrategyKind::RandomPath:
        return;
    case StrategyKind::SwitchedArray:
        if (m < 1 || m > cfg.n_antennas)
            throw ValidationError("switched-array subset size m_main=" + std::to_string(m) +
                                  " must lie in [1, n_antennas=" + std::to_string(cfg.n_antennas) + "]");
        return;
    case StrategyKind::JointPathAntenna:
        if (n_paths < 2)
            throw InfeasibleError("joint path-and-antenna selection requires n_paths >= 2, got " +
                                  std::to_string(n_paths));
        if (m < 1 || m > cfg.n_antennas)
            throw ValidationError("m_main=" + std::to_string(m) + " must lie in [1, n_antennas=" +
                                  std::to_string(cfg.n_antennas) + "]");
        if (s.params.l_s < 2)
            throw ValidationError("l_s=" + std::to_string(s.params.l_s) +
                                  " must be >= 2 so a secondary path exists");
        return;
    }
}

bool is_applicable(const Strategy& s, const ArrayConfig& cfg, std::size_t n_paths)
{
    try {
        check_applicable(s, cfg, n_paths);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::size_t> secondary_pool(const ChannelRealization& ch, int l_s)
{
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(l_s, 1)), ch.path_count());
    std::vector<std::size_t> pool;
    for (auto idx : top_k_paths(ch, k))
        if (idx != ch.strongest_index)
            pool.push_back(idx);
    return pool;
}

PlanGenerator::PlanGenerator(const ChannelRealization& ch, const ArrayConfig& cfg, const Strategy& strategy)
    : ch_(&ch), cfg_(cfg), strategy_(strategy)
{
    check_applicable(strategy, cfg, ch.path_count());
    steering_.reserve(ch.path_count());
    for (const auto& p : ch.paths)
        steering_.push_back(array_response(cfg, p.aod_deg));
    if (strategy.kind == StrategyKind::JointPathAntenna)
        pool_ = secondary_pool(ch, strategy.params.l_s);
}

SymbolPlan PlanGenerator::steered_plan(std::size_t path) const
{
    SymbolPlan plan;
    plan.kind = strategy_.kind;
    plan.weights = Weights(steering_[path]);
    plan.main_path = path;
    plan.main_aod_deg = ch_->paths[path].aod_deg;
    plan.main_set.resize(cfg_.size());
    std::iota(plan.main_set.begin(), plan.main_set.end(), 0);
    return plan;
}

SymbolPlan PlanGenerator::next(Rng& rng) const
{
    const std::size_t n = cfg_.size();
    const std::size_t strongest = ch_->strongest_index;

    switch (strategy_.kind) {
    case StrategyKind::Conventional:
        return steered_plan(strongest);

    case StrategyKind::RandomPath: {
        std::uniform_int_distribution<std::size_t> pick(0, ch_->path_count() - 1);
        return steered_plan(pick(rng));
    }

    case StrategyKind::SwitchedArray: {
        const auto m = static_cast<std::size_t>(strategy_.params.m_main);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        SymbolPlan plan;
        plan.kind = strategy_.kind;
        plan.main_path = strongest;
        plan.main_aod_deg = ch_->paths[strongest].aod_deg;
        plan.main_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(plan.main_set.begin(), plan.main_set.end());
        // Active entries keep the steering phase at magnitude 1/sqrt(m).
        const double rescale = std::sqrt(static_cast<double>(n) / static_cast<double>(m));
        CVec w(n, cplx{});
        const CVec& a = steering_[strongest];
        for (int idx : plan.main_set)
            w[idx] = a[idx] * rescale;
        plan.weights = Weights(std::move(w));
        return plan;
    }

    case StrategyKind::JointPathAntenna: {
        std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
        const std::size_t secondary = pool_[pick(rng)];
        const auto m = static_cast<std::size_t>(strategy_.params.m_main);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        SymbolPlan plan;
        plan.kind = strategy_.kind;
        plan.main_path = strongest;
        plan.main_aod_deg = ch_->paths[strongest].aod_deg;
        plan.secondary_path = secondary;
        plan.secondary_aod_deg = ch_->paths[secondary].aod_deg;
        plan.main_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
        plan.secondary_set.assign(order.begin() + static_cast<std::ptrdiff_t>(m), order.end());
        std::sort(plan.main_set.begin(), plan.main_set.end());
        std::sort(plan.secondary_set.begin(), plan.secondary_set.end());

        CVec w(n);
        const CVec& a_main = steering_[strongest];
        const CVec& a_sec = steering_[secondary];
        for (int idx : plan.main_set)
            w[idx] = a_main[idx];
        for (int idx : plan.secondary_set)
            w[idx] = a_sec[idx];
        plan.weights = Weights(std::move(w));
        return plan;
    }
    }
    throw UsageError("unknown strategy");
}

SymbolPlan conventional_plan(const ChannelRealization& ch, const ArrayConfig& cfg)
{
    Rng unused;
    return PlanGenerator(ch, cfg, {StrategyKind::Conventional, StrategyParams::defaults_for(cfg)}).next(unused);
}

SymbolPlan switched_array_plan(const ChannelRealization& ch, const ArrayConfig& cfg, int m, Rng& rng)
{
    return PlanGenerator(ch, cfg, {StrategyKind::SwitchedArray, {m, 5}}).next(rng);
}

SymbolPlan random_path_plan(const ChannelRealization& ch, const ArrayConfig& cfg, Rng& rng)
{
    return PlanGenerator(ch, cfg, {StrategyKind::RandomPath, StrategyParams::defaults_for(cfg)}).next(rng);
}

SymbolPlan joint_plan(const ChannelRealization& ch, const ArrayConfig& cfg, const StrategyParams& params, Rng& rng)
{
    return PlanGenerator(ch, cfg, {StrategyKind::JointPathAntenna, params}).next(rng);
}

SymbolPlan draw_plan(const Strategy& s, const ChannelRealization& ch, const ArrayConfig& cfg, Rng& rng)
{
    return PlanGenerator(ch, cfg, s).next(rng);
}

} // namespace mmwsec
