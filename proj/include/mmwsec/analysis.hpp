#pragma once

#include "mmwsec/array_geometry.hpp"
#include "mmwsec/channel_model.hpp"
#include "mmwsec/rng.hpp"
#include "mmwsec/signal_engine.hpp"
#include "mmwsec/strategies.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mmwsec {

struct SnrPair {
    double snr_r = 0.0;  // linear
    double snr_e = 0.0;  // linear
};

double db_to_linear(double db);
double linear_to_db(double linear);

// [log2(1 + SNR_R) - log2(1 + SNR_E)]^+ in bits/s/Hz.
double secrecy_rate(const SnrPair& snr);

// Random path selection, receiver: N rho_R / L.
double snr_r_random_path(int n_antennas, int n_paths, double rho_r);

struct BMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Moments of dirichlet_B(theta_e, theta_l) over a uniform draw of l.
BMoments b_moments(double theta_e_deg, std::span<const double> path_aods, const ArrayConfig& cfg);

// Random path selection, eavesdropper: alignment mixture with weights 1/L and 1 - 1/L,
//   rho_E N / L^2 + (1 - 1/L) rho_E E[B]^2 / (rho_E var[B] + L N)
double snr_e_random_path(int n_antennas, int n_paths, double rho_e, double theta_e_deg,
                         std::span<const double> path_aods, const ArrayConfig& cfg);

// Joint selection, receiver:
//   (|a_S|^2 M^2 + abar_excl^2 (N-M)^2 + |E beta_R|^2) / (L N sigma_R^2)
double snr_r_joint(int n_antennas, int n_paths, int m_main, double alpha_s, double mean_excl,
                   double beta_r_mean_sq, double sigma_r_sq);

// Joint selection, eavesdropper; beta moments are of the unnormalized kernel sum:
//   2 rho_E E[beta_hat]^2 / (L^2 N) + (1 - 2/L) rho_E E[beta]^2 / (rho_E var[beta] + L N)
double snr_e_joint(int n_antennas, int n_paths, int m_main, double rho_e, double beta_hat_mean_sq,
                   double beta_mean_sq, double beta_var);

// Moments of the joint-selection noise terms over the secondary-path draw and
// the random M-subset. beta_e moments are of sqrt(LN) * beta_e_term.
struct JointMoments {
    cplx beta_r_mean{};
    double beta_e_mean_sq = 0.0;
    double beta_e_var = 0.0;
    double beta_hat_mean_sq = 0.0;
    std::size_t draws = 0;    // subset draws per secondary path (0 for the closed form)
    bool exhaustive = false;
};

// Closed form: exact moments of sampling M antennas without replacement,
// averaged over the uniform secondary-path draw.
JointMoments joint_moments_exact(const ChannelRealization& ch, const ArrayConfig& cfg,
                                 const StrategyParams& params, double theta_e_deg);

// Enumeration: every M-subset when C(N, M) <= max_exhaustive, otherwise
// `sampled_draws` uniform subsets per secondary path.
JointMoments joint_moments_enumerated(const ChannelRealization& ch, const ArrayConfig& cfg,
                                      const StrategyParams& params, double theta_e_deg, Rng& rng,
                                      std::size_t sampled_draws = 10000,
                                      double max_exhaustive = 1e6);

// Whether the observer can remove the known symbol-to-symbol fluctuation of
// its gain (the receiver holds the schedule; the eavesdropper does not).
enum class ScheduleKnowledge { Unaware, Informed };

// Unaware:  |mean g|^2 / (var g + sigma^2)   (fluctuation acts as artificial noise)
// Informed: (mean |g|)^2 / sigma^2
// Needs at least two samples.
double mc_snr_estimator(std::span<const SignalSample> samples, double noise_power,
                        ScheduleKnowledge knowledge = ScheduleKnowledge::Unaware);
double mc_snr_estimator(const GainAccumulator& acc, double noise_power,
                        ScheduleKnowledge knowledge = ScheduleKnowledge::Unaware);

// Unaware estimator evaluated separately on aligned and unaligned symbols and
// mixed by their empirical frequencies; the simulation counterpart of the
// alignment mixtures above.
double mc_snr_alignment_mixture(std::span<const SignalSample> samples, double noise_power);

} // namespace mmwsec
