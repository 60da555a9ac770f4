#pragma once

#include "mmwsec/array_geometry.hpp"
#include "mmwsec/channel_model.hpp"
#include "mmwsec/rng.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace mmwsec {

enum class StrategyKind {
    Conventional,      // all antennas steered to the strongest path
    SwitchedArray,     // random antenna subset steered to the strongest path
    RandomPath,        // all antennas steered to a uniformly drawn path
    JointPathAntenna,  // M antennas on the strongest path, N-M on a random secondary
};

inline constexpr std::array<StrategyKind, 4> kAllStrategies = {
    StrategyKind::Conventional, StrategyKind::SwitchedArray,
    StrategyKind::RandomPath, StrategyKind::JointPathAntenna};

// Canonical short names used on the command line and in result tables:
// "conventional", "switched", "random-path", "joint".
std::string_view to_string(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

struct StrategyParams {
    int m_main = 16;  // M: antennas on the main path (also the switched-array subset size)
    int l_s = 5;      // L_S: secondary candidates are drawn from the top-L_S paths

    static StrategyParams defaults_for(const ArrayConfig& cfg) { return {cfg.n_antennas / 2, 5}; }
};

struct Strategy {
    StrategyKind kind = StrategyKind::Conventional;
    StrategyParams params;
};

// Throws InfeasibleError when the strategy cannot run on an L-path channel
// (joint selection needs L >= 2 and L_S >= 2) and ValidationError when the
// parameters break their invariants for the array.
void check_applicable(const Strategy& s, const ArrayConfig& cfg, std::size_t n_paths);
bool is_applicable(const Strategy& s, const ArrayConfig& cfg, std::size_t n_paths);

// Weights for one symbol plus the schedule that produced them.
struct SymbolPlan {
    StrategyKind kind = StrategyKind::Conventional;
    Weights weights;
    std::size_t main_path = 0;
    std::optional<std::size_t> secondary_path;
    double main_aod_deg = 0.0;
    std::optional<double> secondary_aod_deg;
    std::vector<int> main_set;       // I_M(k), ascending
    std::vector<int> secondary_set;  // I_L(k), ascending; empty unless joint

    bool operator==(const SymbolPlan&) const = default;
};

SymbolPlan conventional_plan(const ChannelRealization& ch, const ArrayConfig& cfg);
SymbolPlan switched_array_plan(const ChannelRealization& ch, const ArrayConfig& cfg, int m, Rng& rng);
SymbolPlan random_path_plan(const ChannelRealization& ch, const ArrayConfig& cfg, Rng& rng);
SymbolPlan joint_plan(const ChannelRealization& ch, const ArrayConfig& cfg,
                      const StrategyParams& params, Rng& rng);

// Dispatches to the plan generator for s.kind.
SymbolPlan draw_plan(const Strategy& s, const ChannelRealization& ch, const ArrayConfig& cfg, Rng& rng);

// Caches per-path steering vectors so repeated draws on one channel cost
// no trigonometry. Random draws per symbol: none (conventional); one antenna
// shuffle (switched); one path index (random path); one secondary index then
// one antenna shuffle (joint).
class PlanGenerator {
public:
    // Throws as check_applicable.
    PlanGenerator(const ChannelRealization& ch, const ArrayConfig& cfg, const Strategy& strategy);

    SymbolPlan next(Rng& rng) const;

    const Strategy& strategy() const { return strategy_; }
    const CVec& steering(std::size_t path) const { return steering_.at(path); }
    const std::vector<std::size_t>& pool() const { return pool_; }

private:
    SymbolPlan steered_plan(std::size_t path) const;

    const ChannelRealization* ch_;
    ArrayConfig cfg_;
    Strategy strategy_;
    std::vector<CVec> steering_;
    std::vector<std::size_t> pool_;
};

// Candidate secondary paths for joint selection: top-min(L_S, L) minus the
// strongest path.
std::vector<std::size_t> secondary_pool(const ChannelRealization& ch, int l_s);

} // namespace mmwsec
