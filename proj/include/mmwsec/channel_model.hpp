#pragma once

#include "mmwsec/array_geometry.hpp"
#include "mmwsec/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mmwsec {

// One propagation path of the geometric channel: AoD theta_l and gain alpha_l.
struct PathComponent {
    double aod_deg = 0.0;
    cplx gain{};
};

// A set of L paths. The strongest path (largest |gain|) is the one the
// receiver is served on; sample_channel pins it to the configured theta_R.
struct ChannelRealization {
    std::vector<PathComponent> paths;
    std::size_t strongest_index = 0;

    std::size_t path_count() const { return paths.size(); }
    const PathComponent& strongest() const { return paths.at(strongest_index); }
    std::vector<double> aods() const;
};

struct ChannelStats {
    double mean_gain = 0.0;                          // (1/L) sum |alpha_l|
    std::optional<double> mean_gain_excl_strongest;  // absent when L == 1
};

inline constexpr int kMinAodDeg = 1;
inline constexpr int kMaxAodDeg = 180;

// Draws L paths: one at theta_r carrying the largest-magnitude of L i.i.d.
// CN(0,1) gains, the rest at distinct integer degrees drawn without
// replacement from {1..180} \ {theta_r}.
ChannelRealization sample_channel(int n_paths, int theta_r_deg, Rng& rng);

// Builds a realization from explicit paths; strongest_index is recomputed.
// Throws UsageError on empty input, duplicate or out-of-range AoDs.
ChannelRealization make_channel(std::vector<PathComponent> paths);

// Indices of the k largest-|gain| paths, descending; ties keep lower index.
std::vector<std::size_t> top_k_paths(const ChannelRealization& ch, std::size_t k);

ChannelStats channel_stats(const ChannelRealization& ch);

// Plain-text dump, one `aod_deg,gain_re,gain_im` line per path. Values are
// written with round-trip precision so read_channel restores bit-identical
// gains. Lines starting with '#' are ignored on read.
void write_channel(std::ostream& os, const ChannelRealization& ch);
ChannelRealization read_channel(std::istream& is);

} // namespace mmwsec
