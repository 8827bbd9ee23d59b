#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "planeprop/field.hpp"
#include "planeprop/spectrum.hpp"

namespace planeprop {

/// Treatment of spectral bins with fx^2 + fy^2 > 1/L^2.
enum class EvanescentPolicy {
    truncate, ///< set to exactly zero
    decay,    ///< attenuate by exp(-2 pi |dz| sqrt(fx^2 + fy^2 - 1/L^2)) in both directions
};

inline std::string_view to_string(EvanescentPolicy p) noexcept {
    return p == EvanescentPolicy::truncate ? "truncate" : "decay";
}

namespace detail {

// Rounding can push exact-rim bins a hair outside the disk.
inline constexpr double rim_tolerance = 1e-15;

/// Squared transverse frequency of bin (k, l). When both axes share the same
/// frequency step the integer index norm is formed first, so bins with equal
/// k^2 + l^2 get bit-identical values.
inline double transverse_freq_sq(const GridSpec& g, std::size_t k, std::size_t l) {
    const double kx = static_cast<double>(wrap_index(k, g.nx()));
    const double ky = static_cast<double>(wrap_index(l, g.ny()));
    const double step_x = 1.0 / (static_cast<double>(g.nx()) * g.dx());
    const double step_y = 1.0 / (static_cast<double>(g.ny()) * g.dy());
    if (step_x == step_y) return (kx * kx + ky * ky) * (step_x * step_x);
    return kx * kx * (step_x * step_x) + ky * ky * (step_y * step_y);
}

/// 1/L^2 - (fx^2 + fy^2), with the rim clamp applied. Negative means evanescent.
inline double axial_freq_sq(const GridSpec& g, const MediumParams& m, std::size_t k, std::size_t l) {
    const double shell = m.shell_radius_sq();
    const double arg = shell - transverse_freq_sq(g, k, l);
    if (arg < 0.0 && arg >= -rim_tolerance * shell) return 0.0;
    return arg;
}

} // namespace detail

/// True when bin (k, l) lies on or inside the band-limit disk of radius 1/L.
inline bool in_band(const GridSpec& g, const MediumParams& m, std::size_t k, std::size_t l) {
    return detail::axial_freq_sq(g, m, k, l) >= 0.0;
}

/// Plane-to-plane transfer function for a signed distance dz. Propagating
/// bins carry exp(j 2 pi dz sqrt(1/L^2 - fx^2 - fy^2)); negative dz is
/// backward propagation through the same code path.
class PropagationKernel {
public:
    PropagationKernel(const GridSpec& grid, const MediumParams& medium, double dz, EvanescentPolicy policy)
        : grid_(grid), medium_(medium), dz_(dz), policy_(policy) {
        if (!std::isfinite(dz)) throw std::invalid_argument("propagation distance must be finite");
        values_.resize(grid.size());
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t l = 0; l < grid.ny(); ++l) {
            for (std::size_t k = 0; k < grid.nx(); ++k) {
                const double arg = detail::axial_freq_sq(grid, medium, k, l);
                complex v;
                if (arg >= 0.0) {
                    v = std::polar(1.0, two_pi * dz * std::sqrt(arg));
                } else if (policy == EvanescentPolicy::truncate) {
                    v = 0.0;
                } else {
                    v = std::exp(-two_pi * std::abs(dz) * std::sqrt(-arg));
                }
                values_[grid.index(k, l)] = v;
            }
        }
    }

    const GridSpec& grid() const noexcept { return grid_; }
    const MediumParams& medium() const noexcept { return medium_; }
    double dz() const noexcept { return dz_; }
    EvanescentPolicy policy() const noexcept { return policy_; }
    std::span<const complex> values() const noexcept { return values_; }
    const complex& operator()(std::size_t k, std::size_t l) const noexcept { return values_[grid_.index(k, l)]; }

    AngularSpectrum apply(const AngularSpectrum& spec) const {
        if (!spec.grid().same_lattice(grid_)) throw std::invalid_argument("kernel and spectrum grids differ");
        std::vector<complex> out(spec.data().begin(), spec.data().end());
        for (std::size_t n = 0; n < out.size(); ++n) out[n] *= values_[n];
        return AngularSpectrum(spec.grid(), spec.medium(), std::move(out));
    }

private:
    GridSpec grid_;
    MediumParams medium_;
    double dz_;
    EvanescentPolicy policy_;
    std::vector<complex> values_;
};

inline PropagationKernel make_kernel(const GridSpec& grid, const MediumParams& medium, double dz,
                                     EvanescentPolicy policy = EvanescentPolicy::truncate) {
    return PropagationKernel(grid, medium, dz, policy);
}

/// Moves the field by dz along +z. The output plane sits at field.z + dz.
inline Wavefield propagate(const Wavefield& field, double dz,
                           EvanescentPolicy policy = EvanescentPolicy::truncate) {
    const auto kernel = make_kernel(field.grid(), field.medium(), dz, policy);
    auto moved = inverse_spectrum(kernel.apply(forward_spectrum(field)));
    const auto out_grid = field.grid().at_z(field.grid().z() + dz);
    return Wavefield(out_grid, field.medium(), std::move(moved).release());
}

namespace detail {

/// Lattice of pad_factor x the original extent in each axis, same pitch, with
/// the original samples placed at offset ((P - 1) nx / 2, (P - 1) ny / 2).
struct PaddedLayout {
    GridSpec grid;
    std::size_t off_x;
    std::size_t off_y;
};

inline PaddedLayout padded_layout(const GridSpec& g, std::size_t pad_factor) {
    if (pad_factor == 0) throw std::invalid_argument("pad factor must be >= 1");
    const std::size_t px = g.nx() * pad_factor, py = g.ny() * pad_factor;
    const std::size_t ox = (px - g.nx()) / 2, oy = (py - g.ny()) / 2;
    return {GridSpec(px, py, g.dx(), g.dy(), g.origin_x() - static_cast<double>(ox) * g.dx(),
                     g.origin_y() - static_cast<double>(oy) * g.dy(), g.z()),
            ox, oy};
}

inline Wavefield embed(const Wavefield& field, const PaddedLayout& lay) {
    const auto& g = field.grid();
    std::vector<complex> data(lay.grid.size());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) data[lay.grid.index(i + lay.off_x, j + lay.off_y)] = field(i, j);
    return Wavefield(lay.grid, field.medium(), std::move(data));
}

inline std::vector<complex> crop(const Wavefield& padded, const GridSpec& g, const PaddedLayout& lay) {
    std::vector<complex> data(g.size());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) data[g.index(i, j)] = padded(i + lay.off_x, j + lay.off_y);
    return data;
}

} // namespace detail

/// Propagation with explicit zero padding: the field is embedded in a
/// lattice pad_factor times larger per axis, propagated there, and cropped
/// back. Suppresses wrap-around from the periodic DFT boundary. The band
/// limit then applies on the finer padded frequency lattice.
inline Wavefield propagate(const Wavefield& field, double dz, EvanescentPolicy policy, std::size_t pad_factor) {
    if (pad_factor == 1) return propagate(field, dz, policy);
    const auto lay = detail::padded_layout(field.grid(), pad_factor);
    const auto moved = propagate(detail::embed(field, lay), dz, policy);
    return Wavefield(field.grid().at_z(field.grid().z() + dz), field.medium(), detail::crop(moved, field.grid(), lay));
}

/// Backward propagation by a positive distance: propagate(field, -dz, policy).
inline Wavefield backpropagate(const Wavefield& field, double dz,
                               EvanescentPolicy policy = EvanescentPolicy::truncate, std::size_t pad_factor = 1) {
    if (!(dz > 0.0)) throw std::invalid_argument("backpropagation distance must be > 0");
    return propagate(field, -dz, policy, pad_factor);
}

/// Zeroes every spectral bin outside the disk fx^2 + fy^2 <= 1/L^2.
inline Wavefield band_limit(const Wavefield& field) {
    const auto& g = field.grid();
    auto spec = std::move(forward_spectrum(field)).release();
    for (std::size_t l = 0; l < g.ny(); ++l)
        for (std::size_t k = 0; k < g.nx(); ++k)
            if (!in_band(g, field.medium(), k, l)) spec[g.index(k, l)] = 0.0;
    return inverse_spectrum(AngularSpectrum(g, field.medium(), std::move(spec)));
}

} // namespace planeprop
