#include "mmwsec/channel_model.hpp"
#include "mmwsec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

namespace mmwsec {

std::vector<double> ChannelRealization::aods() const
{
    std::vector<double> out;
    out.reserve(paths.size());
    for (const auto& p : paths)
        out.push_back(p.aod_deg);
    return out;
}

ChannelRealization sample_channel(int n_paths, int theta_r_deg, Rng& rng)
{
    if (n_paths < 1)
        throw UsageError("path count must be >= 1, got " + std::to_string(n_paths));
    if (theta_r_deg < kMinAodDeg || theta_r_deg > kMaxAodDeg)
        throw UsageError("theta_r must lie in [1, 180] degrees, got " + std::to_string(theta_r_deg));
    const int lattice = kMaxAodDeg - kMinAodDeg + 1;
    if (n_paths > lattice)
        throw InfeasibleError("cannot place " + std::to_string(n_paths) + " distinct AoDs on " +
                              std::to_string(lattice) + " integer degrees");

    // CN(0,1): real and imaginary parts each N(0, 1/2).
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<cplx> gains(n_paths);
    for (auto& g : gains) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g = {re, im};
    }
    const auto strongest = std::max_element(gains.begin(), gains.end(),
                                            [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    std::iter_swap(gains.begin(), strongest);

    // Partial Fisher-Yates over {1..180} \ {theta_r}.
    std::vector<int> pool;
    pool.reserve(lattice - 1);
    for (int d = kMinAodDeg; d <= kMaxAodDeg; ++d)
        if (d != theta_r_deg)
            pool.push_back(d);
    for (int i = 0; i < n_paths - 1; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }

    ChannelRealization ch;
    ch.paths.reserve(n_paths);
    ch.paths.push_back({static_cast<double>(theta_r_deg), gains[0]});
    for (int i = 1; i < n_paths; ++i)
        ch.paths.push_back({static_cast<double>(pool[i - 1]), gains[i]});
    ch.strongest_index = 0;
    return ch;
}

ChannelRealization make_channel(std::vector<PathComponent> paths)
{
    if (paths.empty())
        throw UsageError("a channel needs at least one path");
    std::set<double> seen;
    for (const auto& p : paths) {
        if (!(p.aod_deg >= kMinAodDeg && p.aod_deg <= kMaxAodDeg))
            throw UsageError("AoD " + std::to_string(p.aod_deg) + " outside [1, 180] degrees");
        if (!seen.insert(p.aod_deg).second)
            throw UsageError("duplicate AoD " + std::to_string(p.aod_deg));
    }
    ChannelRealization ch;
    ch.paths = std::move(paths);
    // First maximum wins, matching the tie rule of top_k_paths.
    std::size_t best = 0;
    for (std::size_t i = 1; i < ch.paths.size(); ++i)
        if (std::abs(ch.paths[i].gain) > std::abs(ch.paths[best].gain))
            best = i;
    ch.strongest_index = best;
    return ch;
}

std::vector<std::size_t> top_k_paths(const ChannelRealization& ch, std::size_t k)
{
    if (k < 1 || k > ch.path_count())
        throw UsageError("k must lie in [1, " + std::to_string(ch.path_count()) + "], got " +
                         std::to_string(k));
    std::vector<std::size_t> idx(ch.path_count());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(ch.paths[a].gain) > std::abs(ch.paths[b].gain);
    });
    idx.resize(k);
    return idx;
}

ChannelStats channel_stats(const ChannelRealization& ch)
{
    if (ch.paths.empty())
        throw UsageError("channel has no paths");
    double total = 0.0;
    for (const auto& p : ch.paths)
        total += std::abs(p.gain);
    ChannelStats s;
    s.mean_gain = total / static_cast<double>(ch.path_count());
    if (ch.path_count() >= 2) {
        const double rest = total - std::abs(ch.strongest().gain);
        s.mean_gain_excl_strongest = rest / static_cast<double>(ch.path_count() - 1);
    }
    return s;
}

void write_channel(std::ostream& os, const ChannelRealization& ch)
{
    const auto old_prec = os.precision(17);
    os << "# aod_deg,gain_re,gain_im\n";
    for (const auto& p : ch.paths)
        os << p.aod_deg << ',' << p.gain.real() << ',' << p.gain.imag() << '\n';
    os.precision(old_prec);
}

ChannelRealization read_channel(std::istream& is)
{
    std::vector<PathComponent> paths;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        std::istringstream ls(line);
        PathComponent p;
        double re = 0.0;
        double im = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(ls >> p.aod_deg >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
            throw UsageError("malformed channel record on line " + std::to_string(line_no));
        p.gain = {re, im};
        paths.push_back(p);
    }
    return make_channel(std::move(paths));
}

} // namespace mmwsec
