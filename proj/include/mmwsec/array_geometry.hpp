#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mmwsec {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double pi = 3.14159265358979323846;

double deg_to_rad(double deg);

// Transmit uniform linear array.
struct ArrayConfig {
    int n_antennas = 32;
    double spacing_over_wavelength = 0.5;

    // Throws UsageError if n_antennas < 2 or spacing <= 0.
    void validate() const;
    std::size_t size() const { return static_cast<std::size_t>(n_antennas); }
};

// Per-symbol beamforming vector. Phase-only entries of magnitude 1/sqrt(N),
// except switched-array plans, which carry 1/sqrt(m) on the active subset and
// zeros elsewhere. Either way the Euclidean norm is 1.
class Weights {
public:
    Weights() = default;
    explicit Weights(CVec entries) : entries_(std::move(entries)) {}

    std::span<const cplx> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const cplx& operator[](std::size_t n) const { return entries_[n]; }
    double norm() const;

    bool operator==(const Weights&) const = default;

private:
    CVec entries_;
};

// Phase applied at antenna n to steer toward theta:
//   ((N-1)/2 - n) * 2*pi*(d/lambda) * cos(theta)
double steering_phase(int n, const ArrayConfig& cfg, double theta_deg);

// a_T(theta), entry n = exp(j*steering_phase(n)) / sqrt(N).
CVec array_response(const ArrayConfig& cfg, double theta_deg);

// Phase-only weights steered to theta; a_T^H(theta) f = 1.
Weights steered_weights(const ArrayConfig& cfg, double theta_deg);

// a^H f for an arbitrary response vector and weight vector of equal length.
cplx project(std::span<const cplx> response, const Weights& w);

// a_T^H(theta) f, i.e. the array gain the weights produce toward theta.
cplx pattern_gain(const ArrayConfig& cfg, double theta_deg, const Weights& w);

} // namespace mmwsec
