#pragma once

#include "mmwsec/array_geometry.hpp"
#include "mmwsec/channel_model.hpp"
#include "mmwsec/rng.hpp"
#include "mmwsec/strategies.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace mmwsec {

enum class ObserverKind { Receiver, Eavesdropper };

// How the legitimate receiver sees the transmission.
//  PathResolved: only the scheduled paths' contributions (the path the symbol
//                was sent on, or S and i for joint selection).
//  Aggregate:    the full single-antenna h^H f over all L paths.
enum class Reception { PathResolved, Aggregate };

struct ObserverSpec {
    ObserverKind kind = ObserverKind::Eavesdropper;
    double aod_deg = 40.0;  // theta_E for the eavesdropper; unused for the receiver
    double rho_db = 15.0;   // gain-to-noise ratio rho_R or rho_E
    Reception reception = Reception::PathResolved;
    cplx path_gain{1.0, 0.0};  // alpha_E; eavesdropper only

    static ObserverSpec receiver(double rho_db, Reception r = Reception::PathResolved);
    static ObserverSpec eavesdropper(double aod_deg, double rho_db, cplx alpha_e = {1.0, 0.0});

    double rho_linear() const;
    void validate() const;
};

// Additive noise power sigma^2 implied by the observer's rho. The receiver's
// rho is referenced to the strongest path (sigma_R^2 = |alpha_S|^2 / rho_R),
// the eavesdropper's to its own path gain (sigma_E^2 = |alpha_E|^2 / rho_E).
double noise_power(const ObserverSpec& obs, const ChannelRealization& ch);

struct SignalSample {
    std::size_t symbol_index = 0;
    cplx effective_gain{};
    bool aligned = false;  // eavesdropper on the AoD of a path used for this symbol
};

// True when cos(a) and cos(b) agree to 1e-12.
bool aods_aligned(double a_deg, double b_deg);

// h^H f with h = sqrt(N/L) sum_l alpha_l a_T(theta_l), evaluated literally.
cplx receiver_gain(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg);

// Per-path terms sqrt(N/L) conj(alpha_l) a_T^H(theta_l) f; they sum to receiver_gain.
CVec path_contributions(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg);

// Sum of path_contributions over the paths the plan transmits on.
cplx scheduled_gain(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg);

// Single-path eavesdropper at theta_E: sqrt(N/L) conj(alpha_e) a_T^H(theta_E) f.
cplx eavesdropper_gain(const ObserverSpec& obs, const SymbolPlan& plan, const ArrayConfig& cfg,
                       cplx alpha_e, std::size_t n_paths);

// sum_n exp(-j((N-1)/2 - n) 2 pi d/lambda (cos theta_e - cos theta_l)); real by
// conjugate pairing. Returns exactly N on alignment.
double dirichlet_B(double theta_e_deg, double theta_l_deg, const ArrayConfig& cfg);

// Receiver-side cross term of joint selection:
//   sum_{I_L} conj(a_S) e^{j c_n (cos th_i - cos th_S)} + sum_{I_M} conj(a_i) e^{j c_n (cos th_S - cos th_i)}
// Throws UsageError for non-joint plans.
cplx beta_r_term(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg);

// Sidelobe artificial-noise term, 1/sqrt(LN) applied to both sums:
//   (1/sqrt(LN)) [sum_{I_M} e^{j c_n (cos th_S - cos th_E)} + sum_{I_L} e^{j c_n (cos th_i - cos th_E)}]
cplx beta_e_term(const SymbolPlan& plan, double theta_e_deg, const ArrayConfig& cfg, std::size_t n_paths);

// Mainlobe interception, unnormalized: M + sum_{I_L}(...) when theta_E = theta_S,
// N - M + sum_{I_M}(...) when theta_E = theta_i. UsageError otherwise.
cplx beta_e_hat_term(const SymbolPlan& plan, double theta_e_deg, const ArrayConfig& cfg);

// Draws K plans from the strategy and records every observer's effective gain
// for each one. All observers see the same plan sequence. Result is indexed
// [observer][symbol].
std::vector<std::vector<SignalSample>> simulate_symbols(const ChannelRealization& ch, const Strategy& strategy,
                                                        const ArrayConfig& cfg,
                                                        const std::vector<ObserverSpec>& observers,
                                                        std::size_t n_symbols, Rng& rng);

// Running sums of a gain stream; enough for both SNR estimators.
struct GainAccumulator {
    std::size_t count = 0;
    cplx sum{};
    double sum_abs = 0.0;
    double sum_abs2 = 0.0;

    void add(cplx g);
};

// Same draws as simulate_symbols (identical rng consumption) without storing samples.
std::vector<GainAccumulator> accumulate_symbols(const ChannelRealization& ch, const Strategy& strategy,
                                                const ArrayConfig& cfg,
                                                const std::vector<ObserverSpec>& observers,
                                                std::size_t n_symbols, Rng& rng);

// Delimited trace, one `k,observer,gain_re,gain_im` line per sample.
void write_trace(std::ostream& os, const std::vector<std::vector<SignalSample>>& samples);

} // namespace mmwsec
