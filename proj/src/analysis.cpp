#include "mmwsec/analysis.hpp"
#include "mmwsec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mmwsec {

namespace {

double element_offset(int n, const ArrayConfig& cfg)
{
    return (0.5 * (cfg.n_antennas - 1) - n) * 2.0 * pi * cfg.spacing_over_wavelength;
}

double cos_deg(double deg) { return std::cos(deg_to_rad(deg)); }

// exp(j c_n (cos a - cos b)) for every antenna
CVec kernel(const ArrayConfig& cfg, double a_deg, double b_deg)
{
    const double delta = cos_deg(a_deg) - cos_deg(b_deg);
    CVec out(cfg.size());
    for (int n = 0; n < cfg.n_antennas; ++n)
        out[n] = std::polar(1.0, element_offset(n, cfg) * delta);
    return out;
}

cplx total(const CVec& v) { return std::accumulate(v.begin(), v.end(), cplx{}); }

void require_nonnegative(double v, const char* what)
{
    if (!(v >= 0.0))
        throw UsageError(std::string(what) + " must be a nonnegative number");
}

double safe_ratio(double num, double den)
{
    if (den > 0.0)
        return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

// Per-secondary-path vectors shared by both moment routes. For secondary i:
//   beta_R  = sum(u) + sum_{I_M}(v - u)
//   beta_E  = sum(y) + sum_{I_M}(x - y)          (unnormalized)
//   hat_S   = M + sum_{I_L} w = M + sum(w) - sum_{I_M} w
//   hat_i   = N - M + sum_{I_M} q
struct JointKernels {
    CVec u, v, x, y, w, q;
};

JointKernels joint_kernels(const ChannelRealization& ch, const ArrayConfig& cfg, std::size_t secondary,
                           double theta_e_deg)
{
    const auto& s = ch.strongest();
    const auto& i = ch.paths.at(secondary);
    JointKernels k;
    k.w = kernel(cfg, i.aod_deg, s.aod_deg);
    k.q = kernel(cfg, s.aod_deg, i.aod_deg);
    k.u = k.w;
    k.v = k.q;
    for (auto& e : k.u)
        e *= std::conj(s.gain);
    for (auto& e : k.v)
        e *= std::conj(i.gain);
    k.x = kernel(cfg, s.aod_deg, theta_e_deg);
    k.y = kernel(cfg, i.aod_deg, theta_e_deg);
    return k;
}

struct MomentSums {
    cplx beta_r{};
    cplx beta_e{};
    double beta_e_abs2 = 0.0;
    cplx hat_s{};
    cplx hat_i{};
    double weight = 0.0;
};

JointMoments finish(const MomentSums& m)
{
    JointMoments out;
    out.beta_r_mean = m.beta_r / m.weight;
    const cplx be = m.beta_e / m.weight;
    out.beta_e_mean_sq = std::norm(be);
    out.beta_e_var = std::max(0.0, m.beta_e_abs2 / m.weight - out.beta_e_mean_sq);
    out.beta_hat_mean_sq = 0.5 * (std::norm(m.hat_s / m.weight) + std::norm(m.hat_i / m.weight));
    return out;
}

void check_joint_inputs(const ChannelRealization& ch, const ArrayConfig& cfg, const StrategyParams& params)
{
    check_applicable({StrategyKind::JointPathAntenna, params}, cfg, ch.path_count());
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double secrecy_rate(const SnrPair& snr)
{
    require_nonnegative(snr.snr_r, "snr_r");
    require_nonnegative(snr.snr_e, "snr_e");
    return std::max(0.0, std::log2(1.0 + snr.snr_r) - std::log2(1.0 + snr.snr_e));
}

double snr_r_random_path(int n_antennas, int n_paths, double rho_r)
{
    if (n_antennas < 1 || n_paths < 1)
        throw UsageError("n_antennas and n_paths must be >= 1");
    require_nonnegative(rho_r, "rho_r");
    return n_antennas * rho_r / n_paths;
}

BMoments b_moments(double theta_e_deg, std::span<const double> path_aods, const ArrayConfig& cfg)
{
    if (path_aods.empty())
        throw UsageError("b_moments needs at least one path");
    std::vector<double> b;
    b.reserve(path_aods.size());
    for (double aod : path_aods)
        b.push_back(dirichlet_B(theta_e_deg, aod, cfg));
    const double count = static_cast<double>(b.size());
    BMoments m;
    m.mean = std::accumulate(b.begin(), b.end(), 0.0) / count;
    double ss = 0.0;
    for (double v : b)
        ss += (v - m.mean) * (v - m.mean);
    m.variance = ss / count;
    return m;
}

double snr_e_random_path(int n_antennas, int n_paths, double rho_e, double theta_e_deg,
                         std::span<const double> path_aods, const ArrayConfig& cfg)
{
    if (n_antennas < 1 || n_paths < 1)
        throw UsageError("n_antennas and n_paths must be >= 1");
    require_nonnegative(rho_e, "rho_e");
    const double n = n_antennas;
    const double l = n_paths;
    const BMoments b = b_moments(theta_e_deg, path_aods, cfg);
    const double aligned = rho_e * n / (l * l);
    const double unaligned = safe_ratio(rho_e * b.mean * b.mean, rho_e * b.variance + l * n);
    return aligned + (1.0 - 1.0 / l) * unaligned;
}

double snr_r_joint(int n_antennas, int n_paths, int m_main, double alpha_s, double mean_excl,
                   double beta_r_mean_sq, double sigma_r_sq)
{
    if (n_antennas < 1 || n_paths < 1)
        throw UsageError("n_antennas and n_paths must be >= 1");
    if (m_main < 0 || m_main > n_antennas)
        throw UsageError("m_main must lie in [0, n_antennas]");
    require_nonnegative(beta_r_mean_sq, "beta_r_mean_sq");
    if (!(sigma_r_sq > 0.0))
        throw UsageError("sigma_r_sq must be > 0");
    const double n = n_antennas;
    const double m = m_main;
    const double main = alpha_s * alpha_s * m * m;
    const double secondary = mean_excl * mean_excl * (n - m) * (n - m);
    return (main + secondary + beta_r_mean_sq) / (n_paths * n * sigma_r_sq);
}

double snr_e_joint(int n_antennas, int n_paths, int m_main, double rho_e, double beta_hat_mean_sq,
                   double beta_mean_sq, double beta_var)
{
    if (n_paths < 2)
        throw InfeasibleError("joint path-and-antenna selection requires n_paths >= 2, got " +
                              std::to_string(n_paths));
    if (n_antennas < 1 || m_main < 0 || m_main > n_antennas)
        throw UsageError("m_main must lie in [0, n_antennas]");
    require_nonnegative(rho_e, "rho_e");
    require_nonnegative(beta_var, "beta_var");
    const double n = n_antennas;
    const double l = n_paths;
    const double aligned = 2.0 * rho_e * beta_hat_mean_sq / (l * l * n);
    const double unaligned = safe_ratio(rho_e * beta_mean_sq, rho_e * beta_var + l * n);
    return aligned + (1.0 - 2.0 / l) * unaligned;
}

JointMoments joint_moments_exact(const ChannelRealization& ch, const ArrayConfig& cfg,
                                 const StrategyParams& params, double theta_e_deg)
{
    check_joint_inputs(ch, cfg, params);
    const auto pool = secondary_pool(ch, params.l_s);
    const double n = cfg.n_antennas;
    const double m = params.m_main;
    const double frac = m / n;
    // Variance factor of a sum over a uniform M-subset drawn without replacement.
    const double fpc = n > 1.0 ? m * (n - m) / (n * (n - 1.0)) : 0.0;

    MomentSums sums;
    for (auto idx : pool) {
        const JointKernels k = joint_kernels(ch, cfg, idx, theta_e_deg);
        const cplx su = total(k.u);
        const cplx sv = total(k.v);
        const cplx sx = total(k.x);
        const cplx sy = total(k.y);
        sums.beta_r += su + frac * (sv - su);

        const cplx zbar = (sx - sy) / n;
        double spread = 0.0;
        for (std::size_t j = 0; j < k.x.size(); ++j)
            spread += std::norm(k.x[j] - k.y[j] - zbar);
        const cplx mean_e = sy + frac * (sx - sy);
        sums.beta_e += mean_e;
        sums.beta_e_abs2 += fpc * spread + std::norm(mean_e);

        sums.hat_s += m + (1.0 - frac) * total(k.w);
        sums.hat_i += (n - m) + frac * total(k.q);
        sums.weight += 1.0;
    }
    JointMoments out = finish(sums);
    out.draws = 0;
    out.exhaustive = true;
    return out;
}

JointMoments joint_moments_enumerated(const ChannelRealization& ch, const ArrayConfig& cfg,
                                      const StrategyParams& params, double theta_e_deg, Rng& rng,
                                      std::size_t sampled_draws, double max_exhaustive)
{
    check_joint_inputs(ch, cfg, params);
    const auto pool = secondary_pool(ch, params.l_s);
    const int n = cfg.n_antennas;
    const int m = params.m_main;

    double n_subsets = 1.0;
    for (int j = 0; j < m; ++j)
        n_subsets = n_subsets * (n - j) / (j + 1);
    const bool exhaustive = n_subsets <= max_exhaustive;

    MomentSums sums;
    std::vector<int> subset(m);
    std::vector<int> order(n);

    for (auto idx : pool) {
        const JointKernels k = joint_kernels(ch, cfg, idx, theta_e_deg);
        const cplx su = total(k.u);
        const cplx sy = total(k.y);
        const cplx sw = total(k.w);

        auto visit = [&](const std::vector<int>& main_set) {
            cplx r = su;
            cplx e = sy;
            cplx hs = static_cast<double>(m) + sw;
            cplx hi = static_cast<double>(n - m);
            for (int a : main_set) {
                r += k.v[a] - k.u[a];
                e += k.x[a] - k.y[a];
                hs -= k.w[a];
                hi += k.q[a];
            }
            sums.beta_r += r;
            sums.beta_e += e;
            sums.beta_e_abs2 += std::norm(e);
            sums.hat_s += hs;
            sums.hat_i += hi;
            sums.weight += 1.0;
        };

        if (exhaustive) {
            std::iota(subset.begin(), subset.end(), 0);
            while (true) {
                visit(subset);
                int pos = m - 1;
                while (pos >= 0 && subset[pos] == n - m + pos)
                    --pos;
                if (pos < 0)
                    break;
                ++subset[pos];
                for (int j = pos + 1; j < m; ++j)
                    subset[j] = subset[j - 1] + 1;
            }
        } else {
            for (std::size_t d = 0; d < sampled_draws; ++d) {
                std::iota(order.begin(), order.end(), 0);
                std::shuffle(order.begin(), order.end(), rng);
                subset.assign(order.begin(), order.begin() + m);
                visit(subset);
            }
        }
    }
    JointMoments out = finish(sums);
    out.draws = exhaustive ? static_cast<std::size_t>(n_subsets) : sampled_draws;
    out.exhaustive = exhaustive;
    return out;
}

double mc_snr_estimator(const GainAccumulator& acc, double noise_power, ScheduleKnowledge knowledge)
{
    if (acc.count < 2)
        throw UsageError("SNR estimation needs at least two samples, got " + std::to_string(acc.count));
    require_nonnegative(noise_power, "noise_power");
    const double k = static_cast<double>(acc.count);
    if (knowledge == ScheduleKnowledge::Informed) {
        const double mean_abs = acc.sum_abs / k;
        return safe_ratio(mean_abs * mean_abs, noise_power);
    }
    const cplx mean = acc.sum / k;
    const double var = std::max(0.0, (acc.sum_abs2 - k * std::norm(mean)) / (k - 1.0));
    return safe_ratio(std::norm(mean), var + noise_power);
}

double mc_snr_estimator(std::span<const SignalSample> samples, double noise_power, ScheduleKnowledge knowledge)
{
    if (samples.size() < 2)
        throw UsageError("SNR estimation needs at least two samples, got " + std::to_string(samples.size()));
    require_nonnegative(noise_power, "noise_power");
    const double k = static_cast<double>(samples.size());
    if (knowledge == ScheduleKnowledge::Informed) {
        double s = 0.0;
        for (const auto& x : samples)
            s += std::abs(x.effective_gain);
        return safe_ratio((s / k) * (s / k), noise_power);
    }
    cplx mean{};
    for (const auto& x : samples)
        mean += x.effective_gain;
    mean /= k;
    double ss = 0.0;
    for (const auto& x : samples)
        ss += std::norm(x.effective_gain - mean);
    return safe_ratio(std::norm(mean), ss / (k - 1.0) + noise_power);
}

double mc_snr_alignment_mixture(std::span<const SignalSample> samples, double noise_power)
{
    if (samples.size() < 2)
        throw UsageError("SNR estimation needs at least two samples, got " + std::to_string(samples.size()));
    require_nonnegative(noise_power, "noise_power");
    std::vector<SignalSample> groups[2];
    for (const auto& s : samples)
        groups[s.aligned ? 1 : 0].push_back(s);
    double snr = 0.0;
    for (const auto& g : groups) {
        if (g.empty())
            continue;
        const double weight = static_cast<double>(g.size()) / static_cast<double>(samples.size());
        const double part = g.size() >= 2 ? mc_snr_estimator(g, noise_power)
                                          : safe_ratio(std::norm(g.front().effective_gain), noise_power);
        snr += weight * part;
    }
    return snr;
}

} // namespace mmwsec
