#pragma once

#include "mmwsec/analysis.hpp"
#include "mmwsec/strategies.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmwsec {

enum class SweepAxis { ThetaE, RhoE, NAntennas, NPaths };

// CSV/config names: theta_e_deg, rho_e_db, n_antennas, n_paths.
std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

// Scalar parameters of a sweep. Whatever the axis or series varies is taken
// from the axis/series values instead.
struct FixedParams {
    int n_antennas = 32;
    int n_paths = 12;
    int m_main = 0;  // 0 selects N/2
    int l_s = 5;
    double rho_r_db = 10.0;
    double rho_e_db = 15.0;
    int theta_r_deg = 40;
    double theta_e_deg = 40.0;
    double spacing_over_wavelength = 0.5;
};

struct SweepSpec {
    std::vector<StrategyKind> strategies;
    SweepAxis axis = SweepAxis::ThetaE;
    std::vector<double> axis_values;
    // Optional second parameter giving one curve per value (figure 1: L, figure 2: N).
    std::optional<SweepAxis> series_axis;
    std::vector<int> series_values;
    FixedParams fixed;
    std::size_t symbols = 10000;   // K per (channel, point)
    std::size_t ensemble = 200;    // channel realizations per point
    std::uint64_t base_seed = 1;

    // Throws ValidationError naming the violated invariant.
    void validate() const;
};

// Integer degrees 1..180.
std::vector<double> theta_e_grid();

// Figure presets 1-4: theta_E sweeps (1: L in {4,8,12}, N=32; 2: L=12,
// N in {16,32,64}) and rho_E sweeps at N=32, L=12 (3: theta_E=40, 4: theta_E=55),
// all at rho_R = 10 dB, rho_E = 15 dB, theta_R = 40, M = N/2, L_S = 5.
SweepSpec figure_preset(int id);

enum class RowStatus { Ok, Inapplicable };

struct SecrecyPoint {
    StrategyKind strategy = StrategyKind::Conventional;
    double sweep_value = 0.0;
    SnrPair snr;          // ensemble means, linear
    double rate_bps_hz = 0.0;  // ensemble mean
};

struct ResultRow {
    SecrecyPoint point;
    std::optional<int> series_value;
    double stderr_rate = 0.0;  // standard error of the ensemble-mean rate
    RowStatus status = RowStatus::Ok;
    std::vector<double> channel_rates;  // one per ensemble member, in ensemble order
};

struct ResultTable {
    SweepSpec spec;
    std::vector<ResultRow> rows;

    const ResultRow* find(StrategyKind s, double axis_value, std::optional<int> series = std::nullopt) const;
    bool all_inapplicable() const;
};

// Monte Carlo sweep: for every (strategy, series, axis value) the secrecy rate
// is averaged over the channel ensemble, each channel evaluated from simulated
// symbol streams at the receiver (informed, path-resolved) and the eavesdropper
// (unaware). Deterministic for a given spec regardless of thread count.
ResultTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

// Same grid evaluated with the closed-form SNR expressions on the same channel
// ensemble. Only RandomPath and JointPathAntenna are supported.
ResultTable compare_analytic(const SweepSpec& spec, unsigned threads = 0);

inline constexpr std::string_view kCsvHeader =
    "strategy,axis,axis_value,snr_r_db,snr_e_db,secrecy_rate_bps_hz,stderr,status";

void write_csv(std::ostream& os, const ResultTable& table);

} // namespace mmwsec
