#include "mmwsec/montecarlo.hpp"
#include "mmwsec/errors.hpp"
#include "mmwsec/signal_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <thread>

namespace mmwsec {

namespace {

// Stream tags keep channel and symbol streams disjoint for equal keys.
constexpr std::uint64_t kChannelTag = 0x43484E4CULL;  // "CHNL"
constexpr std::uint64_t kSymbolTag = 0x53594D42ULL;   // "SYMB"
constexpr std::uint64_t kSharedAxis = ~std::uint64_t{0};

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true))
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

// Parameters of one grid point after applying series and axis values.
struct PointParams {
    ArrayConfig cfg;
    int n_paths = 0;
    StrategyParams strategy_params;
    double theta_e_deg = 0.0;
    double rho_e_db = 0.0;
};

PointParams point_params(const SweepSpec& spec, std::optional<int> series, double axis_value)
{
    PointParams p;
    p.cfg.n_antennas = spec.fixed.n_antennas;
    p.cfg.spacing_over_wavelength = spec.fixed.spacing_over_wavelength;
    p.n_paths = spec.fixed.n_paths;
    p.theta_e_deg = spec.fixed.theta_e_deg;
    p.rho_e_db = spec.fixed.rho_e_db;

    auto apply = [&](SweepAxis axis, double v) {
        switch (axis) {
        case SweepAxis::ThetaE: p.theta_e_deg = v; break;
        case SweepAxis::RhoE: p.rho_e_db = v; break;
        case SweepAxis::NAntennas: p.cfg.n_antennas = static_cast<int>(v); break;
        case SweepAxis::NPaths: p.n_paths = static_cast<int>(v); break;
        }
    };
    if (spec.series_axis && series)
        apply(*spec.series_axis, *series);
    apply(spec.axis, axis_value);

    const int m = spec.fixed.m_main > 0 ? spec.fixed.m_main : p.cfg.n_antennas / 2;
    p.strategy_params = {m, spec.fixed.l_s};
    return p;
}

std::vector<std::optional<int>> series_list(const SweepSpec& spec)
{
    std::vector<std::optional<int>> out;
    if (spec.series_axis)
        out.assign(spec.series_values.begin(), spec.series_values.end());
    else
        out.push_back(std::nullopt);
    return out;
}

bool axis_shares_stream(SweepAxis axis) { return axis == SweepAxis::ThetaE || axis == SweepAxis::RhoE; }

ChannelRealization channel_for(const SweepSpec& spec, int n_paths, std::size_t member)
{
    Rng rng = make_stream({spec.base_seed, kChannelTag, static_cast<std::uint64_t>(n_paths), member});
    return sample_channel(n_paths, spec.fixed.theta_r_deg, rng);
}

struct Cell {
    double snr_r = 0.0;
    double snr_e = 0.0;
    double rate = 0.0;
};

// Accumulates per-member cells into rows in (strategy, series, axis) order.
class TableBuilder {
public:
    TableBuilder(const SweepSpec& spec)
        : spec_(spec), series_(series_list(spec)),
          cells_(spec.strategies.size() * series_.size() * spec.axis_values.size(),
                 std::vector<Cell>(spec.ensemble)),
          applicable_(cells_.size(), true)
    {
    }

    std::size_t index(std::size_t s, std::size_t series, std::size_t a) const
    {
        return (s * series_.size() + series) * spec_.axis_values.size() + a;
    }
    Cell& cell(std::size_t s, std::size_t series, std::size_t a, std::size_t member)
    {
        return cells_[index(s, series, a)][member];
    }
    void mark_inapplicable(std::size_t s, std::size_t series, std::size_t a) { applicable_[index(s, series, a)] = false; }
    const std::vector<std::optional<int>>& series() const { return series_; }

    ResultTable build() const
    {
        ResultTable table;
        table.spec = spec_;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t s = 0; s < spec_.strategies.size(); ++s) {
            for (std::size_t se = 0; se < series_.size(); ++se) {
                for (std::size_t a = 0; a < spec_.axis_values.size(); ++a) {
                    ResultRow row;
                    row.point.strategy = spec_.strategies[s];
                    row.point.sweep_value = spec_.axis_values[a];
                    row.series_value = series_[se];
                    const std::size_t idx = index(s, se, a);
                    if (!applicable_[idx]) {
                        row.status = RowStatus::Inapplicable;
                        row.point.snr = {nan, nan};
                        row.point.rate_bps_hz = nan;
                        row.stderr_rate = nan;
                    } else {
                        const auto& members = cells_[idx];
                        const double e = static_cast<double>(members.size());
                        double sr = 0.0, snr_e = 0.0, rate = 0.0;
                        for (const auto& c : members) {
                            sr += c.snr_r;
                            snr_e += c.snr_e;
                            rate += c.rate;
                            row.channel_rates.push_back(c.rate);
                        }
                        row.point.snr = {sr / e, snr_e / e};
                        row.point.rate_bps_hz = rate / e;
                        double ss = 0.0;
                        for (const auto& c : members)
                            ss += (c.rate - row.point.rate_bps_hz) * (c.rate - row.point.rate_bps_hz);
                        row.stderr_rate = members.size() > 1 ? std::sqrt(ss / (e - 1.0) / e) : 0.0;
                    }
                    table.rows.push_back(std::move(row));
                }
            }
        }
        auto strategy_rank = [](StrategyKind k) { return static_cast<int>(k); };
        std::stable_sort(table.rows.begin(), table.rows.end(), [&](const ResultRow& x, const ResultRow& y) {
            if (x.point.strategy != y.point.strategy)
                return strategy_rank(x.point.strategy) < strategy_rank(y.point.strategy);
            if (x.series_value != y.series_value)
                return x.series_value < y.series_value;
            return x.point.sweep_value < y.point.sweep_value;
        });
        return table;
    }

private:
    const SweepSpec& spec_;
    std::vector<std::optional<int>> series_;
    std::vector<std::vector<Cell>> cells_;
    std::vector<bool> applicable_;
};

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

std::string_view to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::ThetaE: return "theta_e_deg";
    case SweepAxis::RhoE: return "rho_e_db";
    case SweepAxis::NAntennas: return "n_antennas";
    case SweepAxis::NPaths: return "n_paths";
    }
    return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name)
{
    for (auto a : {SweepAxis::ThetaE, SweepAxis::RhoE, SweepAxis::NAntennas, SweepAxis::NPaths})
        if (name == to_string(a))
            return a;
    if (name == "theta-e" || name == "theta_e")
        return SweepAxis::ThetaE;
    if (name == "rho-e" || name == "rho_e")
        return SweepAxis::RhoE;
    if (name == "antennas")
        return SweepAxis::NAntennas;
    if (name == "paths")
        return SweepAxis::NPaths;
    return std::nullopt;
}

void SweepSpec::validate() const
{
    auto fail = [](const std::string& msg) { throw ValidationError(msg); };

    if (strategies.empty())
        fail("strategy list must not be empty");
    if (std::set<StrategyKind>(strategies.begin(), strategies.end()).size() != strategies.size())
        fail("strategy list contains duplicates");
    if (axis_values.empty())
        fail("axis values must not be empty");
    if (symbols < 100)
        fail("symbols per point must be >= 100, got " + std::to_string(symbols));
    if (ensemble < 1)
        fail("ensemble size must be >= 1");
    if (series_axis) {
        if (*series_axis != SweepAxis::NAntennas && *series_axis != SweepAxis::NPaths)
            fail("series axis must be n_antennas or n_paths");
        if (*series_axis == axis)
            fail("series axis must differ from the sweep axis");
        if (series_values.empty())
            fail("series values must not be empty");
    }
    if (fixed.theta_r_deg < kMinAodDeg || fixed.theta_r_deg > kMaxAodDeg)
        fail("theta_r must lie in [1, 180] degrees, got " + std::to_string(fixed.theta_r_deg));
    if (!(fixed.spacing_over_wavelength > 0.0))
        fail("spacing_over_wavelength must be > 0");
    if (!std::isfinite(fixed.rho_r_db) || !std::isfinite(fixed.rho_e_db))
        fail("rho_r_db and rho_e_db must be finite");
    if (fixed.l_s < 1)
        fail("l_s must be >= 1, got " + std::to_string(fixed.l_s));
    if (fixed.m_main < 0)
        fail("m_main must be >= 1 (or 0 for N/2), got " + std::to_string(fixed.m_main));

    // Collect every N and L the sweep will use.
    std::vector<int> ns{fixed.n_antennas};
    std::vector<int> ls{fixed.n_paths};
    auto collect = [&](SweepAxis a, const std::vector<double>& values) {
        if (a == SweepAxis::NAntennas)
            ns.assign(values.begin(), values.end());
        if (a == SweepAxis::NPaths)
            ls.assign(values.begin(), values.end());
    };
    if (series_axis)
        collect(*series_axis, std::vector<double>(series_values.begin(), series_values.end()));
    collect(axis, axis_values);

    for (double v : axis_values) {
        if (!std::isfinite(v))
            fail("axis values must be finite");
        if ((axis == SweepAxis::NAntennas || axis == SweepAxis::NPaths) && !is_integer(v))
            fail(std::string(to_string(axis)) + " values must be integers");
    }
    if (axis != SweepAxis::ThetaE && !(fixed.theta_e_deg >= kMinAodDeg && fixed.theta_e_deg <= kMaxAodDeg))
        fail("theta_e must lie in [1, 180] degrees");
    if (axis == SweepAxis::ThetaE)
        for (double v : axis_values)
            if (!(v >= kMinAodDeg && v <= kMaxAodDeg))
                fail("theta_e values must lie in [1, 180] degrees");
    for (int n : ns)
        if (n < 2)
            fail("n_antennas must be >= 2, got " + std::to_string(n));
    for (int l : ls)
        if (l < 1 || l > kMaxAodDeg - kMinAodDeg + 1)
            fail("n_paths must lie in [1, 180], got " + std::to_string(l));
    if (fixed.m_main > 0) {
        const int n_min = *std::min_element(ns.begin(), ns.end());
        if (fixed.m_main > n_min)
            fail("m_main (" + std::to_string(fixed.m_main) + ") must not exceed n_antennas (" +
                 std::to_string(n_min) + ")");
    }
    const bool joint = std::find(strategies.begin(), strategies.end(), StrategyKind::JointPathAntenna) !=
                       strategies.end();
    if (joint) {
        if (*std::max_element(ls.begin(), ls.end()) < 2)
            fail("joint path-and-antenna selection requires n_paths >= 2");
        if (fixed.l_s < 2)
            fail("joint path-and-antenna selection requires l_s >= 2");
    }
}

std::vector<double> theta_e_grid()
{
    std::vector<double> g;
    for (int d = kMinAodDeg; d <= kMaxAodDeg; ++d)
        g.push_back(d);
    return g;
}

SweepSpec figure_preset(int id)
{
    SweepSpec s;
    s.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    s.fixed = FixedParams{};
    switch (id) {
    case 1:
        s.axis = SweepAxis::ThetaE;
        s.axis_values = theta_e_grid();
        s.series_axis = SweepAxis::NPaths;
        s.series_values = {4, 8, 12};
        break;
    case 2:
        s.axis = SweepAxis::ThetaE;
        s.axis_values = theta_e_grid();
        s.series_axis = SweepAxis::NAntennas;
        s.series_values = {16, 32, 64};
        break;
    case 3:
    case 4:
        s.axis = SweepAxis::RhoE;
        for (int db = -10; db <= 30; db += 5)
            s.axis_values.push_back(db);
        s.fixed.theta_e_deg = id == 3 ? 40.0 : 55.0;
        break;
    default:
        throw UsageError("figure id must be 1, 2, 3 or 4, got " + std::to_string(id));
    }
    return s;
}

const ResultRow* ResultTable::find(StrategyKind s, double axis_value, std::optional<int> series) const
{
    for (const auto& r : rows)
        if (r.point.strategy == s && r.point.sweep_value == axis_value && r.series_value == series)
            return &r;
    return nullptr;
}

bool ResultTable::all_inapplicable() const
{
    return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.status == RowStatus::Inapplicable; });
}

ResultTable run_sweep(const SweepSpec& spec, unsigned threads)
{
    spec.validate();
    TableBuilder table(spec);
    const auto& series = table.series();
    const bool shared = axis_shares_stream(spec.axis);
    const std::size_t n_axis_units = shared ? 1 : spec.axis_values.size();
    const std::size_t per_strategy = series.size() * n_axis_units * spec.ensemble;
    const std::size_t units = spec.strategies.size() * per_strategy;

    // Applicability depends on the point, not on the ensemble member.
    for (std::size_t s = 0; s < spec.strategies.size(); ++s)
        for (std::size_t se = 0; se < series.size(); ++se)
            for (std::size_t a = 0; a < spec.axis_values.size(); ++a) {
                const PointParams p = point_params(spec, series[se], spec.axis_values[a]);
                if (!is_applicable({spec.strategies[s], p.strategy_params}, p.cfg, static_cast<std::size_t>(p.n_paths)))
                    table.mark_inapplicable(s, se, a);
            }

    parallel_for(units, threads, [&](std::size_t unit) {
        const std::size_t s = unit / per_strategy;
        std::size_t rest = unit % per_strategy;
        const std::size_t se = rest / (n_axis_units * spec.ensemble);
        rest %= n_axis_units * spec.ensemble;
        const std::size_t axis_unit = rest / spec.ensemble;
        const std::size_t member = rest % spec.ensemble;

        const std::size_t a_begin = shared ? 0 : axis_unit;
        const std::size_t a_end = shared ? spec.axis_values.size() : axis_unit + 1;
        const PointParams p0 = point_params(spec, series[se], spec.axis_values[a_begin]);
        const Strategy strategy{spec.strategies[s], p0.strategy_params};
        if (!is_applicable(strategy, p0.cfg, static_cast<std::size_t>(p0.n_paths)))
            return;

        const ChannelRealization ch = channel_for(spec, p0.n_paths, member);
        std::vector<ObserverSpec> observers{ObserverSpec::receiver(spec.fixed.rho_r_db)};
        if (spec.axis == SweepAxis::ThetaE) {
            for (std::size_t a = a_begin; a < a_end; ++a)
                observers.push_back(ObserverSpec::eavesdropper(spec.axis_values[a], p0.rho_e_db));
        } else {
            observers.push_back(ObserverSpec::eavesdropper(p0.theta_e_deg, p0.rho_e_db));
        }

        Rng rng = make_stream({spec.base_seed, kSymbolTag, static_cast<std::uint64_t>(spec.strategies[s]), se,
                               shared ? kSharedAxis : axis_unit, member});
        const auto acc = accumulate_symbols(ch, strategy, p0.cfg, observers, spec.symbols, rng);
        const double snr_r =
            mc_snr_estimator(acc[0], noise_power(observers[0], ch), ScheduleKnowledge::Informed);

        for (std::size_t a = a_begin; a < a_end; ++a) {
            const PointParams p = point_params(spec, series[se], spec.axis_values[a]);
            const std::size_t o = spec.axis == SweepAxis::ThetaE ? 1 + (a - a_begin) : 1;
            ObserverSpec eve = observers[o];
            eve.rho_db = p.rho_e_db;
            const double snr_e = mc_snr_estimator(acc[o], noise_power(eve, ch));
            table.cell(s, se, a, member) = {snr_r, snr_e, secrecy_rate({snr_r, snr_e})};
        }
    });
    return table.build();
}

ResultTable compare_analytic(const SweepSpec& spec, unsigned threads)
{
    spec.validate();
    for (auto k : spec.strategies)
        if (k != StrategyKind::RandomPath && k != StrategyKind::JointPathAntenna)
            throw UsageError("closed-form comparison supports random-path and joint only, got " +
                             std::string(to_string(k)));
    TableBuilder table(spec);
    const auto& series = table.series();
    const std::size_t n_axis = spec.axis_values.size();

    for (std::size_t s = 0; s < spec.strategies.size(); ++s)
        for (std::size_t se = 0; se < series.size(); ++se)
            for (std::size_t a = 0; a < n_axis; ++a) {
                const PointParams p = point_params(spec, series[se], spec.axis_values[a]);
                if (!is_applicable({spec.strategies[s], p.strategy_params}, p.cfg, static_cast<std::size_t>(p.n_paths)))
                    table.mark_inapplicable(s, se, a);
            }

    const std::size_t units = spec.strategies.size() * series.size() * n_axis * spec.ensemble;
    parallel_for(units, threads, [&](std::size_t unit) {
        const std::size_t member = unit % spec.ensemble;
        std::size_t rest = unit / spec.ensemble;
        const std::size_t a = rest % n_axis;
        rest /= n_axis;
        const std::size_t se = rest % series.size();
        const std::size_t s = rest / series.size();

        const PointParams p = point_params(spec, series[se], spec.axis_values[a]);
        const Strategy strategy{spec.strategies[s], p.strategy_params};
        if (!is_applicable(strategy, p.cfg, static_cast<std::size_t>(p.n_paths)))
            return;

        const ChannelRealization ch = channel_for(spec, p.n_paths, member);
        const ChannelStats stats = channel_stats(ch);
        const double rho_r = db_to_linear(spec.fixed.rho_r_db);
        const double rho_e = db_to_linear(p.rho_e_db);
        const double alpha_s = std::abs(ch.strongest().gain);
        const double sigma_r_sq = alpha_s * alpha_s / rho_r;
        const int n = p.cfg.n_antennas;
        const int l = p.n_paths;

        Cell c;
        if (strategy.kind == StrategyKind::RandomPath) {
            // Closed form is stated in terms of rho referenced to the mean path gain.
            const double rho_r_mean = stats.mean_gain * stats.mean_gain / sigma_r_sq;
            const auto aods = ch.aods();
            c.snr_r = snr_r_random_path(n, l, rho_r_mean);
            c.snr_e = snr_e_random_path(n, l, rho_e, p.theta_e_deg, aods, p.cfg);
        } else {
            const JointMoments jm = joint_moments_exact(ch, p.cfg, strategy.params, p.theta_e_deg);
            c.snr_r = snr_r_joint(n, l, strategy.params.m_main, alpha_s, stats.mean_gain_excl_strongest.value_or(0.0),
                                  std::norm(jm.beta_r_mean), sigma_r_sq);
            c.snr_e = snr_e_joint(n, l, strategy.params.m_main, rho_e, jm.beta_hat_mean_sq, jm.beta_e_mean_sq,
                                  jm.beta_e_var);
        }
        c.rate = secrecy_rate({c.snr_r, c.snr_e});
        table.cell(s, se, a, member) = c;
    });
    return table.build();
}

void write_csv(std::ostream& os, const ResultTable& table)
{
    os << kCsvHeader << '\n';
    const std::string axis_name(to_string(table.spec.axis));
    for (const auto& r : table.rows) {
        std::string label(to_string(r.point.strategy));
        if (r.series_value && table.spec.series_axis)
            label += "[" + std::string(to_string(*table.spec.series_axis)) + "=" + std::to_string(*r.series_value) + "]";
        const bool ok = r.status == RowStatus::Ok;
        os << label << ',' << axis_name << ',' << format_number(r.point.sweep_value) << ','
           << format_number(ok ? linear_to_db(r.point.snr.snr_r) : r.point.snr.snr_r) << ','
           << format_number(ok ? linear_to_db(r.point.snr.snr_e) : r.point.snr.snr_e) << ','
           << format_number(r.point.rate_bps_hz) << ',' << format_number(r.stderr_rate) << ','
           << (ok ? "ok" : "inapplicable") << '\n';
    }
}

} // namespace mmwsec
