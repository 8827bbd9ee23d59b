#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "planeprop/field.hpp"
#include "planeprop/kernel.hpp"

namespace planeprop {

struct PointSource {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    complex amplitude{1.0, 0.0};

    friend bool operator==(const PointSource&, const PointSource&) = default;
};

struct SourceSet {
    std::vector<PointSource> sources;
    MediumParams medium;

    friend bool operator==(const SourceSet&, const SourceSet&) = default;
};

/// Far-field plane wave incident in the x-z plane; theta in [0, pi/2] is
/// measured so that the transverse frequency along x is sin(theta)/L.
class PlaneWave {
public:
    PlaneWave(double theta, complex amplitude, MediumParams medium)
        : theta_(theta), amplitude_(amplitude), medium_(medium) {
        if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
            throw validation_error("plane-wave angle must lie in [0, pi/2]");
        if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
            throw validation_error("plane-wave amplitude must be finite");
    }

    double theta() const noexcept { return theta_; }
    complex amplitude() const noexcept { return amplitude_; }
    const MediumParams& medium() const noexcept { return medium_; }
    double fx() const noexcept { return std::sin(theta_) / medium_.wavelength(); }
    double fz() const noexcept { return std::cos(theta_) / medium_.wavelength(); }

private:
    double theta_;
    complex amplitude_;
    MediumParams medium_;
};

/// Minimum distance between a source and any screen sample.
inline double standoff_limit(const MediumParams& m) { return m.wavelength() / 10.0; }

namespace detail {

// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(complex v) noexcept {
        re_.add(v.real());
        im_.add(v.imag());
    }
    complex value() const noexcept { return {re_.value(), im_.value()}; }

private:
    struct Real {
        double sum = 0.0;
        double comp = 0.0;
        void add(double x) noexcept {
            const double t = sum + x;
            if (std::abs(sum) >= std::abs(x))
                comp += (sum - t) + x;
            else
                comp += (x - t) + sum;
            sum = t;
        }
        double value() const noexcept { return sum + comp; }
    };
    Real re_, im_;
};

} // namespace detail

/// Superposition of Green-Born propagators from every source onto the screen
/// samples, evaluated at exact continuous distances. Throws std::domain_error
/// if any sample lies within L/10 of a source.
inline Wavefield direct_field(const SourceSet& srcs, const GridSpec& screen) {
    const double min_r = standoff_limit(srcs.medium);
    std::vector<complex> data(screen.size());
    for (std::size_t j = 0; j < screen.ny(); ++j) {
        const double y = screen.y_at(j);
        for (std::size_t i = 0; i < screen.nx(); ++i) {
            const double x = screen.x_at(i);
            detail::CompensatedSum acc;
            for (const auto& s : srcs.sources) {
                const double r = std::hypot(x - s.x, y - s.y, screen.z() - s.z);
                if (r < min_r) throw std::domain_error("source too close to screen sample");
                acc.add(s.amplitude * green_born(r, srcs.medium));
            }
            data[screen.index(i, j)] = acc.value();
        }
    }
    return Wavefield(screen, srcs.medium, std::move(data));
}

/// amplitude * exp(j 2 pi x sin(theta) / L), constant along y.
inline Wavefield plane_wave_field(const PlaneWave& pw, const GridSpec& screen) {
    const double fx = pw.fx();
    std::vector<complex> data(screen.size());
    for (std::size_t j = 0; j < screen.ny(); ++j)
        for (std::size_t i = 0; i < screen.nx(); ++i)
            data[screen.index(i, j)] = pw.amplitude() * std::polar(1.0, 2.0 * std::numbers::pi * screen.x_at(i) * fx);
    return Wavefield(screen, pw.medium(), std::move(data));
}

/// Fringe periods along the two screen axes; nullopt means the screen is not
/// modulated along that axis.
struct FringeSpacing {
    std::optional<double> along_x;
    std::optional<double> along_y;
};

/// (L / sin(theta), L / cos(theta)) for theta in [0, pi/2].
inline FringeSpacing fringe_spacing(double theta, const MediumParams& medium) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw std::invalid_argument("fringe angle must lie in [0, pi/2]");
    const double L = medium.wavelength();
    FringeSpacing out;
    if (theta != 0.0) out.along_x = L / std::sin(theta);
    if (theta != std::numbers::pi / 2) out.along_y = L / std::cos(theta);
    return out;
}

} // namespace planeprop
