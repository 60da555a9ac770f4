#include "mmwsec/signal_engine.hpp"
#include "mmwsec/analysis.hpp"
#include "mmwsec/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace mmwsec {

namespace {

constexpr double kAlignTol = 1e-12;

// c_n = ((N-1)/2 - n) * 2 pi d/lambda
double element_offset(int n, const ArrayConfig& cfg)
{
    return (0.5 * (cfg.n_antennas - 1) - n) * 2.0 * pi * cfg.spacing_over_wavelength;
}

double cos_deg(double deg) { return std::cos(deg_to_rad(deg)); }

// sum over `set` of exp(j c_n (cos a - cos b))
cplx phase_sum(const std::vector<int>& set, const ArrayConfig& cfg, double a_deg, double b_deg)
{
    const double delta = cos_deg(a_deg) - cos_deg(b_deg);
    cplx acc{};
    for (int n : set)
        acc += std::polar(1.0, element_offset(n, cfg) * delta);
    return acc;
}

const SymbolPlan& require_joint(const SymbolPlan& plan)
{
    if (plan.kind != StrategyKind::JointPathAntenna || !plan.secondary_path || !plan.secondary_aod_deg)
        throw UsageError("term is defined for joint path-and-antenna plans only");
    return plan;
}

double inv_sqrt_ln(std::size_t n_paths, const ArrayConfig& cfg)
{
    return 1.0 / std::sqrt(static_cast<double>(n_paths) * cfg.n_antennas);
}

} // namespace

ObserverSpec ObserverSpec::receiver(double rho_db, Reception r)
{
    ObserverSpec o;
    o.kind = ObserverKind::Receiver;
    o.rho_db = rho_db;
    o.reception = r;
    return o;
}

ObserverSpec ObserverSpec::eavesdropper(double aod_deg, double rho_db, cplx alpha_e)
{
    ObserverSpec o;
    o.kind = ObserverKind::Eavesdropper;
    o.aod_deg = aod_deg;
    o.rho_db = rho_db;
    o.path_gain = alpha_e;
    return o;
}

double ObserverSpec::rho_linear() const { return db_to_linear(rho_db); }

void ObserverSpec::validate() const
{
    if (!std::isfinite(rho_db))
        throw UsageError("observer rho_db must be finite");
    if (kind == ObserverKind::Eavesdropper) {
        if (!(aod_deg >= kMinAodDeg && aod_deg <= kMaxAodDeg))
            throw UsageError("eavesdropper AoD must lie in [1, 180] degrees, got " + std::to_string(aod_deg));
        if (std::abs(path_gain) == 0.0)
            throw UsageError("eavesdropper path gain must be nonzero");
    }
}

double noise_power(const ObserverSpec& obs, const ChannelRealization& ch)
{
    obs.validate();
    const double ref = obs.kind == ObserverKind::Receiver ? std::norm(ch.strongest().gain) : std::norm(obs.path_gain);
    return ref / obs.rho_linear();
}

bool aods_aligned(double a_deg, double b_deg) { return std::abs(cos_deg(a_deg) - cos_deg(b_deg)) < kAlignTol; }

cplx receiver_gain(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg)
{
    if (plan.weights.size() != cfg.size())
        throw UsageError("plan does not match the array size");
    const double scale = std::sqrt(static_cast<double>(cfg.n_antennas) / static_cast<double>(ch.path_count()));
    CVec h(cfg.size(), cplx{});
    for (const auto& p : ch.paths) {
        const CVec a = array_response(cfg, p.aod_deg);
        for (std::size_t n = 0; n < h.size(); ++n)
            h[n] += scale * p.gain * a[n];
    }
    return project(h, plan.weights);
}

CVec path_contributions(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg)
{
    const double scale = std::sqrt(static_cast<double>(cfg.n_antennas) / static_cast<double>(ch.path_count()));
    CVec out;
    out.reserve(ch.path_count());
    for (const auto& p : ch.paths)
        out.push_back(scale * std::conj(p.gain) * pattern_gain(cfg, p.aod_deg, plan.weights));
    return out;
}

cplx scheduled_gain(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg)
{
    const double scale = std::sqrt(static_cast<double>(cfg.n_antennas) / static_cast<double>(ch.path_count()));
    auto term = [&](std::size_t l) {
        const auto& p = ch.paths.at(l);
        return scale * std::conj(p.gain) * pattern_gain(cfg, p.aod_deg, plan.weights);
    };
    cplx g = term(plan.main_path);
    if (plan.secondary_path)
        g += term(*plan.secondary_path);
    return g;
}

cplx eavesdropper_gain(const ObserverSpec& obs, const SymbolPlan& plan, const ArrayConfig& cfg, cplx alpha_e,
                       std::size_t n_paths)
{
    if (obs.kind != ObserverKind::Eavesdropper)
        throw UsageError("eavesdropper_gain needs an eavesdropper observer");
    if (n_paths < 1)
        throw UsageError("path count must be >= 1");
    const double scale = std::sqrt(static_cast<double>(cfg.n_antennas) / static_cast<double>(n_paths));
    return scale * std::conj(alpha_e) * pattern_gain(cfg, obs.aod_deg, plan.weights);
}

double dirichlet_B(double theta_e_deg, double theta_l_deg, const ArrayConfig& cfg)
{
    cfg.validate();
    if (aods_aligned(theta_e_deg, theta_l_deg))
        return static_cast<double>(cfg.n_antennas);
    const double delta = cos_deg(theta_e_deg) - cos_deg(theta_l_deg);
    // Imaginary parts cancel pairwise (n, N-1-n); only the cosines survive.
    double acc = 0.0;
    for (int n = 0; n < cfg.n_antennas; ++n)
        acc += std::cos(element_offset(n, cfg) * delta);
    return acc;
}

cplx beta_r_term(const ChannelRealization& ch, const SymbolPlan& plan, const ArrayConfig& cfg)
{
    require_joint(plan);
    const double th_s = plan.main_aod_deg;
    const double th_i = *plan.secondary_aod_deg;
    const cplx a_s = ch.paths.at(plan.main_path).gain;
    const cplx a_i = ch.paths.at(*plan.secondary_path).gain;
    return std::conj(a_s) * phase_sum(plan.secondary_set, cfg, th_i, th_s) +
           std::conj(a_i) * phase_sum(plan.main_set, cfg, th_s, th_i);
}

cplx beta_e_term(const SymbolPlan& plan, double theta_e_deg, const ArrayConfig& cfg, std::size_t n_paths)
{
    require_joint(plan);
    const cplx sum = phase_sum(plan.main_set, cfg, plan.main_aod_deg, theta_e_deg) +
                     phase_sum(plan.secondary_set, cfg, *plan.secondary_aod_deg, theta_e_deg);
    return inv_sqrt_ln(n_paths, cfg) * sum;
}

cplx beta_e_hat_term(const SymbolPlan& plan, double theta_e_deg, const ArrayConfig& cfg)
{
    require_joint(plan);
    const double th_s = plan.main_aod_deg;
    const double th_i = *plan.secondary_aod_deg;
    if (aods_aligned(theta_e_deg, th_s))
        return static_cast<double>(plan.main_set.size()) + phase_sum(plan.secondary_set, cfg, th_i, th_s);
    if (aods_aligned(theta_e_deg, th_i))
        return static_cast<double>(plan.secondary_set.size()) + phase_sum(plan.main_set, cfg, th_s, th_i);
    throw UsageError("beta_e_hat requires theta_E to coincide with the main or secondary AoD");
}

namespace {

// Shared symbol loop; sink(observer, symbol, gain, aligned).
template <typename Sink>
void run_symbols(const ChannelRealization& ch, const Strategy& strategy, const ArrayConfig& cfg,
                 const std::vector<ObserverSpec>& observers, std::size_t n_symbols, Rng& rng, Sink&& sink)
{
    if (n_symbols < 1)
        throw UsageError("symbol count must be >= 1");
    for (const auto& o : observers)
        o.validate();

    const PlanGenerator gen(ch, cfg, strategy);
    const std::size_t n_paths = ch.path_count();
    const double scale = std::sqrt(static_cast<double>(cfg.n_antennas) / static_cast<double>(n_paths));

    std::vector<CVec> eaves_response(observers.size());
    std::vector<std::vector<char>> aligned_to(observers.size(), std::vector<char>(n_paths, 0));
    for (std::size_t o = 0; o < observers.size(); ++o) {
        if (observers[o].kind != ObserverKind::Eavesdropper)
            continue;
        eaves_response[o] = array_response(cfg, observers[o].aod_deg);
        for (std::size_t l = 0; l < n_paths; ++l)
            aligned_to[o][l] = aods_aligned(observers[o].aod_deg, ch.paths[l].aod_deg) ? 1 : 0;
    }

    auto path_term = [&](std::size_t l, const Weights& w) {
        return scale * std::conj(ch.paths[l].gain) * project(gen.steering(l), w);
    };

    for (std::size_t k = 0; k < n_symbols; ++k) {
        const SymbolPlan plan = gen.next(rng);
        for (std::size_t o = 0; o < observers.size(); ++o) {
            const ObserverSpec& obs = observers[o];
            if (obs.kind == ObserverKind::Receiver) {
                cplx g{};
                if (obs.reception == Reception::PathResolved) {
                    g = path_term(plan.main_path, plan.weights);
                    if (plan.secondary_path)
                        g += path_term(*plan.secondary_path, plan.weights);
                } else {
                    for (std::size_t l = 0; l < n_paths; ++l)
                        g += path_term(l, plan.weights);
                }
                sink(o, k, g, false);
            } else {
                const cplx g = scale * std::conj(obs.path_gain) * project(eaves_response[o], plan.weights);
                const bool aligned = aligned_to[o][plan.main_path] != 0 ||
                                     (plan.secondary_path && aligned_to[o][*plan.secondary_path] != 0);
                sink(o, k, g, aligned);
            }
        }
    }
}

} // namespace

std::vector<std::vector<SignalSample>> simulate_symbols(const ChannelRealization& ch, const Strategy& strategy,
                                                        const ArrayConfig& cfg,
                                                        const std::vector<ObserverSpec>& observers,
                                                        std::size_t n_symbols, Rng& rng)
{
    std::vector<std::vector<SignalSample>> out(observers.size());
    for (auto& v : out)
        v.reserve(n_symbols);
    run_symbols(ch, strategy, cfg, observers, n_symbols, rng,
                [&](std::size_t o, std::size_t k, cplx g, bool aligned) { out[o].push_back({k, g, aligned}); });
    return out;
}

void GainAccumulator::add(cplx g)
{
    ++count;
    sum += g;
    const double mag = std::abs(g);
    sum_abs += mag;
    sum_abs2 += mag * mag;
}

std::vector<GainAccumulator> accumulate_symbols(const ChannelRealization& ch, const Strategy& strategy,
                                                const ArrayConfig& cfg,
                                                const std::vector<ObserverSpec>& observers,
                                                std::size_t n_symbols, Rng& rng)
{
    std::vector<GainAccumulator> acc(observers.size());
    run_symbols(ch, strategy, cfg, observers, n_symbols, rng,
                [&](std::size_t o, std::size_t, cplx g, bool) { acc[o].add(g); });
    return acc;
}

void write_trace(std::ostream& os, const std::vector<std::vector<SignalSample>>& samples)
{
    const auto old_prec = os.precision(17);
    os << "k,observer,gain_re,gain_im\n";
    for (std::size_t o = 0; o < samples.size(); ++o)
        for (const auto& s : samples[o])
            os << s.symbol_index << ',' << o << ',' << s.effective_gain.real() << ',' << s.effective_gain.imag()
               << '\n';
    os.precision(old_prec);
}

} // namespace mmwsec
