#include "mmwsec/rng.hpp"

namespace mmwsec {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = 0x6A09E667F3BCC908ULL;
    for (auto k : keys)
        h = splitmix64(h ^ splitmix64(k));
    return h;
}

Rng make_stream(std::initializer_list<std::uint64_t> keys)
{
    const std::uint64_t s = derive_seed(keys);
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return Rng(seq);
}

} // namespace mmwsec
