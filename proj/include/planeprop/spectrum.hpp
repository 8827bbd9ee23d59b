#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "planeprop/field.hpp"

namespace planeprop {

namespace detail {

// FFTW planning is not thread-safe; execution with the new-array interface is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

enum class Direction { forward, inverse };

/// In-place unnormalized 2D DFT over x-fastest data of ny rows by nx columns.
/// FFTW_UNALIGNED keeps the codelet choice independent of buffer address,
/// so repeated calls on equal input give bit-identical output.
inline void dft2d_inplace(std::vector<complex>& data, std::size_t nx, std::size_t ny, Direction dir) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    fftw_execute_dft(plan, buf, buf);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

} // namespace detail

/// Unnormalized forward DFT, kernel exp(-j 2 pi (fx x + fy y)).
inline AngularSpectrum forward_spectrum(const Wavefield& field) {
    const auto& g = field.grid();
    std::vector<complex> buf(field.data().begin(), field.data().end());
    detail::dft2d_inplace(buf, g.nx(), g.ny(), detail::Direction::forward);
    return AngularSpectrum(g, field.medium(), std::move(buf));
}

/// Exact inverse of forward_spectrum, carrying the 1/(nx ny) factor.
inline Wavefield inverse_spectrum(const AngularSpectrum& spec) {
    const auto& g = spec.grid();
    std::vector<complex> buf(spec.data().begin(), spec.data().end());
    detail::dft2d_inplace(buf, g.nx(), g.ny(), detail::Direction::inverse);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& v : buf) v *= scale;
    return Wavefield(g, spec.medium(), std::move(buf));
}

} // namespace planeprop
