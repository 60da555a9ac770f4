#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmwsec {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds from keys.
std::uint64_t splitmix64(std::uint64_t x);

// Folds an ordered list of keys into one 64-bit seed.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys);

// Random stream for a work unit identified by (base seed, keys...).
Rng make_stream(std::initializer_list<std::uint64_t> keys);

} // namespace mmwsec
