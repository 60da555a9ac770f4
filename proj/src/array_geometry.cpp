#include "mmwsec/array_geometry.hpp"
#include "mmwsec/errors.hpp"

#include <cmath>
#include <string>

namespace mmwsec {

namespace {

void check_angle(double theta_deg)
{
    if (!(theta_deg >= 0.0 && theta_deg <= 180.0))
        throw UsageError("angle must lie in [0, 180] degrees, got " + std::to_string(theta_deg));
}

} // namespace

double deg_to_rad(double deg) { return deg * pi / 180.0; }

void ArrayConfig::validate() const
{
    if (n_antennas < 2)
        throw UsageError("n_antennas must be >= 2, got " + std::to_string(n_antennas));
    if (!(spacing_over_wavelength > 0.0) || !std::isfinite(spacing_over_wavelength))
        throw UsageError("spacing_over_wavelength must be > 0");
}

double Weights::norm() const
{
    double s = 0.0;
    for (const auto& w : entries_)
        s += std::norm(w);
    return std::sqrt(s);
}

double steering_phase(int n, const ArrayConfig& cfg, double theta_deg)
{
    cfg.validate();
    check_angle(theta_deg);
    if (n < 0 || n >= cfg.n_antennas)
        throw UsageError("antenna index " + std::to_string(n) + " outside [0, " +
                         std::to_string(cfg.n_antennas) + ")");
    const double offset = 0.5 * (cfg.n_antennas - 1) - n;
    return offset * 2.0 * pi * cfg.spacing_over_wavelength * std::cos(deg_to_rad(theta_deg));
}

CVec array_response(const ArrayConfig& cfg, double theta_deg)
{
    cfg.validate();
    check_angle(theta_deg);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
    CVec a(cfg.size());
    for (int n = 0; n < cfg.n_antennas; ++n)
        a[n] = std::polar(scale, steering_phase(n, cfg, theta_deg));
    return a;
}

Weights steered_weights(const ArrayConfig& cfg, double theta_deg)
{
    // Phase-only weights coincide with the array response itself.
    return Weights(array_response(cfg, theta_deg));
}

cplx project(std::span<const cplx> response, const Weights& w)
{
    if (response.size() != w.size())
        throw UsageError("response and weight lengths differ");
    cplx acc{};
    for (std::size_t n = 0; n < response.size(); ++n)
        acc += std::conj(response[n]) * w[n];
    return acc;
}

cplx pattern_gain(const ArrayConfig& cfg, double theta_deg, const Weights& w)
{
    const CVec a = array_response(cfg, theta_deg);
    return project(a, w);
}

} // namespace mmwsec
