#pragma once

// Test-only helpers: random generators and a brute-force DFT that shares no
// code with the library's FFTW path.

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "planeprop/planeprop.hpp"

namespace planeprop::testing {

inline std::vector<complex> random_samples(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<complex> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

inline Wavefield random_field(const GridSpec& g, const MediumParams& m, std::mt19937_64& rng) {
    return Wavefield(g, m, random_samples(g.size(), rng));
}

/// Random field whose spectrum is zero outside the disk of radius 1/L.
/// Disk membership is decided here from plain fx^2 + fy^2 <= 1/L^2.
inline Wavefield random_band_limited(const GridSpec& g, const MediumParams& m, std::mt19937_64& rng) {
    auto spec = random_samples(g.size(), rng);
    const auto freqs = frequency_grid(g);
    const double shell = 1.0 / (m.wavelength() * m.wavelength());
    for (std::size_t n = 0; n < spec.size(); ++n)
        if (freqs[n].fx * freqs[n].fx + freqs[n].fy * freqs[n].fy > shell) spec[n] = 0.0;
    return inverse_spectrum(AngularSpectrum(g, m, std::move(spec)));
}

/// sqrt(sum |a - b|^2 / sum |b|^2)
inline double rel_rms(std::span<const complex> a, std::span<const complex> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        num += std::norm(a[n] - b[n]);
        den += std::norm(b[n]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double rel_rms(const Wavefield& a, const Wavefield& b) { return rel_rms(a.data(), b.data()); }

/// Naive O(N^2) 2D DFT, x fastest. sign = -1 forward, +1 inverse (unnormalized).
inline std::vector<complex> naive_dft(std::span<const complex> in, std::size_t nx, std::size_t ny, int sign) {
    std::vector<complex> out(nx * ny);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t l = 0; l < ny; ++l) {
        for (std::size_t k = 0; k < nx; ++k) {
            complex acc = 0.0;
            for (std::size_t j = 0; j < ny; ++j) {
                for (std::size_t i = 0; i < nx; ++i) {
                    const double phase = two_pi * (static_cast<double>((k * i) % nx) / static_cast<double>(nx) +
                                                   static_cast<double>((l * j) % ny) / static_cast<double>(ny));
                    acc += in[j * nx + i] * std::polar(1.0, sign * phase);
                }
            }
            out[l * nx + k] = acc;
        }
    }
    return out;
}

/// Sub-window [i0, i0 + w) x [j0, j0 + h) of a field's samples.
inline std::vector<complex> window(const Wavefield& f, std::size_t i0, std::size_t j0, std::size_t w, std::size_t h) {
    std::vector<complex> out;
    out.reserve(w * h);
    for (std::size_t j = j0; j < j0 + h; ++j)
        for (std::size_t i = i0; i < i0 + w; ++i) out.push_back(f(i, j));
    return out;
}

inline bool bit_equal(std::span<const complex> a, std::span<const complex> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t n = 0; n < a.size(); ++n)
        if (std::memcmp(&a[n], &b[n], sizeof(complex)) != 0) return false;
    return true;
}

} // namespace planeprop::testing
