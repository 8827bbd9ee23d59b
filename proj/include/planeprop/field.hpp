#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "planeprop/errors.hpp"

namespace planeprop {

using complex = std::complex<double>;

/// Monochromatic homogeneous medium. Only wavelength and speed are stored;
/// the temporal frequency is always derived as speed / wavelength.
class MediumParams {
public:
    MediumParams(double wavelength, double speed) : wavelength_(wavelength), speed_(speed) {
        if (!std::isfinite(wavelength) || wavelength <= 0.0)
            throw validation_error("wavelength must be finite and > 0");
        if (!std::isfinite(speed) || speed <= 0.0)
            throw validation_error("speed must be finite and > 0");
    }

    double wavelength() const noexcept { return wavelength_; }
    double speed() const noexcept { return speed_; }
    double frequency() const noexcept { return speed_ / wavelength_; }
    double wavenumber() const noexcept { return 2.0 * std::numbers::pi / wavelength_; }

    /// Squared radius 1/L^2 of the propagation shell.
    double shell_radius_sq() const noexcept { return 1.0 / (wavelength_ * wavelength_); }

    friend bool operator==(const MediumParams&, const MediumParams&) = default;

private:
    double wavelength_;
    double speed_;
};

/// Uniform sampling of a plane z = const. Sample (i, j) sits at
/// (origin_x + i*dx, origin_y + j*dy, z).
class GridSpec {
public:
    GridSpec(std::size_t nx, std::size_t ny, double dx, double dy,
             double origin_x = 0.0, double origin_y = 0.0, double z = 0.0)
        : nx_(nx), ny_(ny), dx_(dx), dy_(dy), origin_x_(origin_x), origin_y_(origin_y), z_(z) {
        if (nx == 0 || ny == 0) throw validation_error("grid dimensions must be >= 1");
        if (!std::isfinite(dx) || dx <= 0.0 || !std::isfinite(dy) || dy <= 0.0)
            throw validation_error("grid pitch must be finite and > 0");
        if (!std::isfinite(origin_x) || !std::isfinite(origin_y) || !std::isfinite(z))
            throw validation_error("grid origin and plane location must be finite");
    }

    /// nx x ny grid centred laterally on (0, 0): sample (nx/2, ny/2) is the origin.
    static GridSpec centered(std::size_t nx, std::size_t ny, double dx, double dy, double z = 0.0) {
        return GridSpec(nx, ny, dx, dy, -static_cast<double>(nx / 2) * dx,
                        -static_cast<double>(ny / 2) * dy, z);
    }

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return nx_ * ny_; }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }
    double origin_x() const noexcept { return origin_x_; }
    double origin_y() const noexcept { return origin_y_; }
    double z() const noexcept { return z_; }

    double x_at(std::size_t i) const noexcept { return origin_x_ + static_cast<double>(i) * dx_; }
    double y_at(std::size_t j) const noexcept { return origin_y_ + static_cast<double>(j) * dy_; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx_ + i; }

    GridSpec at_z(double z) const { return GridSpec(nx_, ny_, dx_, dy_, origin_x_, origin_y_, z); }

    /// Same lattice (counts and pitch), ignoring origin and plane location.
    bool same_lattice(const GridSpec& o) const noexcept {
        return nx_ == o.nx_ && ny_ == o.ny_ && dx_ == o.dx_ && dy_ == o.dy_;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::size_t nx_, ny_;
    double dx_, dy_;
    double origin_x_, origin_y_;
    double z_;
};

namespace detail {

template <class Tag>
class SampledPlane {
public:
    SampledPlane(GridSpec grid, MediumParams medium, std::vector<complex> data)
        : grid_(std::move(grid)), medium_(medium), data_(std::move(data)) {
        if (data_.size() != grid_.size())
            throw validation_error("sample count " + std::to_string(data_.size()) +
                                   " does not match grid size " + std::to_string(grid_.size()));
        if constexpr (Tag::require_finite) {
            for (const auto& v : data_)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw validation_error("non-finite sample value");
        }
    }

    const GridSpec& grid() const noexcept { return grid_; }
    const MediumParams& medium() const noexcept { return medium_; }
    std::span<const complex> data() const noexcept { return data_; }
    const complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[grid_.index(i, j)]; }

    /// Moves the samples out, leaving this object empty-but-destructible.
    std::vector<complex> release() && { return std::move(data_); }

private:
    GridSpec grid_;
    MediumParams medium_;
    std::vector<complex> data_;
};

struct FieldTag { static constexpr bool require_finite = true; };
struct SpectrumTag { static constexpr bool require_finite = false; };

} // namespace detail

/// Complex amplitudes on a plane, row-major with x fastest.
using Wavefield = detail::SampledPlane<detail::FieldTag>;

/// DFT bins of a Wavefield; bin (k, l) is stored at l*nx + k.
using AngularSpectrum = detail::SampledPlane<detail::SpectrumTag>;

/// Signed DFT index: k for k < ceil(n/2), k - n otherwise.
constexpr long wrap_index(std::size_t k, std::size_t n) noexcept {
    const std::size_t half = (n + 1) / 2;
    return k < half ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

/// Inverse of wrap_index for signed indices in [-floor(n/2), ceil(n/2)).
constexpr std::size_t unwrap_index(long w, std::size_t n) noexcept {
    return w < 0 ? static_cast<std::size_t>(w + static_cast<long>(n)) : static_cast<std::size_t>(w);
}

struct FrequencyBin {
    double fx;
    double fy;
};

inline double frequency_x(const GridSpec& g, std::size_t k) {
    return static_cast<double>(wrap_index(k, g.nx())) / (static_cast<double>(g.nx()) * g.dx());
}

inline double frequency_y(const GridSpec& g, std::size_t l) {
    return static_cast<double>(wrap_index(l, g.ny())) / (static_cast<double>(g.ny()) * g.dy());
}

/// Spatial frequency of every DFT bin, in storage order.
inline std::vector<FrequencyBin> frequency_grid(const GridSpec& g) {
    std::vector<FrequencyBin> out;
    out.reserve(g.size());
    for (std::size_t l = 0; l < g.ny(); ++l) {
        const double fy = frequency_y(g, l);
        for (std::size_t k = 0; k < g.nx(); ++k) out.push_back({frequency_x(g, k), fy});
    }
    return out;
}

inline double energy(std::span<const complex> data) {
    double s = 0.0;
    for (const auto& v : data) s += std::norm(v);
    return s;
}

} // namespace planeprop
