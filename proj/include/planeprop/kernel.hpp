#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "planeprop/field.hpp"

namespace planeprop {

/// Real Helmholtz impulse response (2 / (L|r|)) sin(2 pi |r| / L).
/// Even in r by construction. Throws std::domain_error at r = 0.
inline complex green_kernel(double r, const MediumParams& medium) {
    if (r == 0.0) throw std::domain_error("kernel singularity");
    const double L = medium.wavelength();
    const double a = std::abs(r);
    return {2.0 / (L * a) * std::sin(2.0 * std::numbers::pi * a / L), 0.0};
}

/// Outgoing propagator exp(j 2 pi r / L) / (j L r) evaluated at the signed
/// distance r. Negative r gives the backward (conjugate-phase) propagator.
inline complex green_born(double r, const MediumParams& medium) {
    if (r == 0.0) throw std::domain_error("kernel singularity");
    const double L = medium.wavelength();
    const double phase = 2.0 * std::numbers::pi * r / L;
    // exp(j phase) / (j L r) = (sin(phase) - j cos(phase)) / (L r)
    const double inv = 1.0 / (L * r);
    return {std::sin(phase) * inv, -std::cos(phase) * inv};
}

/// fx^2 + fy^2 + fz^2 - 1/L^2; zero on the propagation shell.
inline double dispersion_residual(double fx, double fy, double fz, const MediumParams& medium) {
    return (fx * fx + fy * fy + fz * fz) - medium.shell_radius_sq();
}

} // namespace planeprop
