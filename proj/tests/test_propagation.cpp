#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "planeprop/propagation.hpp"
#include "planeprop/sources.hpp"
#include "support.hpp"

using namespace planeprop;
namespace pt = planeprop::testing;
using planeprop::testing::rel_rms;

namespace {

constexpr double pi = std::numbers::pi;
const MediumParams unit(1.0, 1.0);

// 64 x 64 at L/2: frequency step 1/32, band edge exactly on bin +-32.
const GridSpec small_grid = GridSpec::centered(64, 64, 0.5, 0.5);

double fsq(const GridSpec& g, std::size_t k, std::size_t l) {
    const double fx = frequency_x(g, k), fy = frequency_y(g, l);
    return fx * fx + fy * fy;
}

} // namespace

TEST(Kernel, OnAxisPhase) {
    for (double dz : {0.0, 0.3, 7.0, -12.5}) {
        const auto k = make_kernel(small_grid, unit, dz);
        EXPECT_NEAR(std::abs(k(0, 0) - std::polar(1.0, 2 * pi * dz)), 0.0, 1e-14);
    }
}

TEST(Kernel, RimBinHasZeroPhase) {
    const std::size_t rim = unwrap_index(-32, 64); // fx = -1/L
    ASSERT_EQ(fsq(small_grid, rim, 0), 1.0);
    for (auto policy : {EvanescentPolicy::truncate, EvanescentPolicy::decay}) {
        for (double dz : {1.0, -3.7, 250.0}) {
            const auto k = make_kernel(small_grid, unit, dz, policy);
            EXPECT_EQ(k(rim, 0), complex(1.0, 0.0));
            EXPECT_EQ(k(0, rim), complex(1.0, 0.0));
        }
    }
}

TEST(Kernel, RimClampAbsorbsRounding) {
    // L = 0.1 with pitch L/2: the rim bin's fx^2 is not exactly 1/L^2 in floating point.
    const MediumParams m(0.1, 1.0);
    const GridSpec g(40, 1, 0.05, 0.05);
    const std::size_t rim = unwrap_index(-20, 40);
    const auto k = make_kernel(g, m, 3.0, EvanescentPolicy::truncate);
    EXPECT_TRUE(in_band(g, m, rim, 0));
    EXPECT_NEAR(std::abs(k(rim, 0) - 1.0), 0.0, 1e-6);
}

TEST(Kernel, TruncateZeroesEvanescentBins) {
    const auto k = make_kernel(small_grid, unit, 5.0, EvanescentPolicy::truncate);
    for (std::size_t l = 0; l < 64; ++l)
        for (std::size_t i = 0; i < 64; ++i) {
            if (fsq(small_grid, i, l) > 1.0)
                EXPECT_EQ(k(i, l), complex(0.0, 0.0));
            else
                EXPECT_NEAR(std::abs(k(i, l)), 1.0, 1e-15);
        }
}

TEST(Kernel, DecayAttenuatesInBothDirections) {
    for (double dz : {2.0, -2.0}) {
        const auto k = make_kernel(small_grid, unit, dz, EvanescentPolicy::decay);
        for (std::size_t l = 0; l < 64; ++l)
            for (std::size_t i = 0; i < 64; ++i) {
                const double s = fsq(small_grid, i, l);
                if (s <= 1.0) continue;
                const double want = std::exp(-2 * pi * std::abs(dz) * std::sqrt(s - 1.0));
                EXPECT_EQ(k(i, l).imag(), 0.0);
                EXPECT_NEAR(k(i, l).real(), want, 1e-14);
                EXPECT_LE(std::abs(k(i, l)), 1.0);
            }
    }
}

TEST(Kernel, DecayMagnitudeIsContinuousAtRim) {
    // Bin fx = -1 sits just outside (L slightly above 1) or just inside
    // (L slightly below 1) the disk.
    const GridSpec g(1024, 1, 0.5, 0.5);
    const std::size_t edge = unwrap_index(-512, 1024);
    double previous = 0.0;
    for (double eps : {1e-4, 1e-8, 1e-12}) {
        const MediumParams outside(1.0 / (1.0 - eps), 1.0);
        ASSERT_FALSE(in_band(g, outside, edge, 0));
        const double mag = std::abs(make_kernel(g, outside, 1.0, EvanescentPolicy::decay)(edge, 0));
        EXPECT_LT(mag, 1.0);
        EXPECT_GT(mag, previous);
        previous = mag;

        const MediumParams inside(1.0 / (1.0 + eps), 1.0);
        ASSERT_TRUE(in_band(g, inside, edge, 0));
        EXPECT_NEAR(std::abs(make_kernel(g, inside, 1.0, EvanescentPolicy::decay)(edge, 0)), 1.0, 1e-15);
    }
    EXPECT_GT(previous, 0.9999);
}

TEST(Kernel, NegativeDistanceConjugates) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(0.0, 100.0);
    const GridSpec g(48, 40, 0.5, 0.6);
    for (int n = 0; n < 5; ++n) {
        const double dz = d(rng);
        const auto fwd_t = make_kernel(g, unit, dz, EvanescentPolicy::truncate);
        const auto bwd_t = make_kernel(g, unit, -dz, EvanescentPolicy::truncate);
        const auto fwd_d = make_kernel(g, unit, dz, EvanescentPolicy::decay);
        const auto bwd_d = make_kernel(g, unit, -dz, EvanescentPolicy::decay);
        for (std::size_t b = 0; b < g.size(); ++b) {
            EXPECT_EQ(bwd_t.values()[b], std::conj(fwd_t.values()[b]));
            EXPECT_EQ(bwd_d.values()[b], std::conj(fwd_d.values()[b]));
            EXPECT_EQ(std::abs(bwd_d.values()[b]), std::abs(fwd_d.values()[b]));
        }
    }
}

TEST(Kernel, RadiallySymmetric) {
    const auto k = make_kernel(small_grid, unit, 17.3, EvanescentPolicy::decay);
    std::map<long, complex> by_radius;
    for (std::size_t l = 0; l < 64; ++l)
        for (std::size_t i = 0; i < 64; ++i) {
            const long a = wrap_index(i, 64), b = wrap_index(l, 64);
            const auto [it, fresh] = by_radius.emplace(a * a + b * b, k(i, l));
            if (!fresh) EXPECT_EQ(it->second, k(i, l)) << a << "," << b;
        }
}

TEST(Kernel, RejectsNonFiniteDistance) {
    EXPECT_THROW(make_kernel(small_grid, unit, INFINITY), std::invalid_argument);
    EXPECT_THROW(make_kernel(small_grid, unit, NAN), std::invalid_argument);
}

TEST(Propagate, ZeroDistanceIsBandLimit) {
    std::mt19937_64 rng(22);
    const auto f = pt::random_field(small_grid, unit, rng);
    const auto p = propagate(f, 0.0, EvanescentPolicy::truncate);
    EXPECT_TRUE(pt::bit_equal(p.data(), band_limit(f).data()));
    EXPECT_EQ(p.grid(), f.grid());
}

TEST(Propagate, UpdatesPlaneLocation) {
    const Wavefield f(small_grid.at_z(2.0), unit, std::vector<complex>(small_grid.size(), 1.0));
    EXPECT_EQ(propagate(f, 3.5).grid().z(), 5.5);
    EXPECT_EQ(backpropagate(f, 3.5).grid().z(), -1.5);
}

TEST(Propagate, PlaneWaveGainsGlobalPhase) {
    // sin(theta) = 10/32 puts the wave exactly on bin 10.
    const double theta = std::asin(10.0 / 32.0);
    const auto f = plane_wave_field(PlaneWave(theta, {0.5, -1.0}, unit), small_grid);
    for (double dz : {1.0, 33.3, -8.0}) {
        const auto p = propagate(f, dz);
        const complex phase = std::polar(1.0, 2 * pi * dz * std::cos(theta));
        for (std::size_t n = 0; n < f.data().size(); ++n)
            EXPECT_NEAR(std::abs(p.data()[n] - f.data()[n] * phase), 0.0, 1e-12);
    }
}

TEST(Propagate, InverseLawAndConjugateKernel) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(1e-3, 100.0);
    for (int n = 0; n < 5; ++n) {
        const auto f = pt::random_field(small_grid, unit, rng);
        const double dz = d(rng);
        EXPECT_LT(rel_rms(backpropagate(propagate(f, dz), dz), band_limit(f)), 1e-10);
        EXPECT_LT(rel_rms(propagate(propagate(f, -dz), dz), band_limit(f)), 1e-10);
    }
}

TEST(Propagate, DecayBreaksInverseOnlyOutsideDisk) {
    std::mt19937_64 rng(24);
    const auto f = pt::random_band_limited(small_grid, unit, rng);
    const auto there_and_back = backpropagate(propagate(f, 4.0, EvanescentPolicy::decay), 4.0, EvanescentPolicy::decay);
    EXPECT_LT(rel_rms(there_and_back, f), 1e-10);

    const auto g = pt::random_field(small_grid, unit, rng);
    const auto round = backpropagate(propagate(g, 4.0, EvanescentPolicy::decay), 4.0, EvanescentPolicy::decay);
    EXPECT_LE(energy(round.data()), energy(g.data()));
    EXPECT_GT(rel_rms(round, g), 1e-3);
}

TEST(Propagate, ConservesEnergyOnTheDisk) {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    for (int n = 0; n < 5; ++n) {
        const auto f = pt::random_field(small_grid, unit, rng);
        const double e_ref = energy(band_limit(f).data());
        EXPECT_NEAR(energy(propagate(f, d(rng)).data()), e_ref, 1e-10 * e_ref);
    }
}

TEST(Propagate, GroupLaw) {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    const GridSpec g(40, 24, 0.5, 0.45);
    for (int n = 0; n < 6; ++n) {
        const auto f = pt::random_field(g, unit, rng);
        const double a = d(rng), b = d(rng);
        EXPECT_LT(rel_rms(propagate(propagate(f, a), b), propagate(f, a + b)), 1e-10);
    }
}

TEST(Propagate, MatchesDirectSummationOffAxis) {
    const SourceSet src{{PointSource{3.0, -2.0, -60.0, {0.3, 0.8}}}, unit};
    const auto screen = GridSpec::centered(256, 256, 0.5, 0.5, 0.0);
    const auto moved = propagate(direct_field(src, screen), 15.0, EvanescentPolicy::truncate, 2);
    const auto oracle = direct_field(src, screen.at_z(15.0));
    EXPECT_LE(rel_rms(pt::window(moved, 64, 64, 128, 128), pt::window(oracle, 64, 64, 128, 128)), 0.05);
}

TEST(Propagate, PaddingOptions) {
    std::mt19937_64 rng(27);
    const auto f = pt::random_field(small_grid, unit, rng);
    EXPECT_TRUE(pt::bit_equal(propagate(f, 2.0, EvanescentPolicy::truncate, 1).data(), propagate(f, 2.0).data()));
    EXPECT_THROW(propagate(f, 2.0, EvanescentPolicy::truncate, 0), std::invalid_argument);
    const auto padded = propagate(f, 2.0, EvanescentPolicy::truncate, 3);
    EXPECT_EQ(padded.grid(), small_grid.at_z(2.0));
}

TEST(Backpropagate, RequiresPositiveDistance) {
    const Wavefield f(small_grid, unit, std::vector<complex>(small_grid.size()));
    EXPECT_THROW(backpropagate(f, 0.0), std::invalid_argument);
    EXPECT_THROW(backpropagate(f, -1.0), std::invalid_argument);
}

TEST(Backpropagate, FocusesOnPointSource) {
    const PointSource s{3.2, -5.1, -40.0, {1.0, 0.0}};
    const auto screen = GridSpec::centered(256, 256, 0.5, 0.5, 0.0);
    const auto image = backpropagate(direct_field(SourceSet{{s}, unit}, screen), 40.0);
    std::size_t best = 0;
    for (std::size_t n = 0; n < image.data().size(); ++n)
        if (std::norm(image.data()[n]) > std::norm(image.data()[best])) best = n;
    const std::size_t i = best % screen.nx(), j = best / screen.nx();
    EXPECT_LE(std::abs(screen.x_at(i) - s.x), screen.dx());
    EXPECT_LE(std::abs(screen.y_at(j) - s.y), screen.dy());
}

TEST(BandLimit, Behaviour) {
    std::mt19937_64 rng(28);
    const auto bl = pt::random_band_limited(small_grid, unit, rng);
    EXPECT_LT(rel_rms(band_limit(bl), bl), 1e-12);

    const auto f = pt::random_field(small_grid, unit, rng);
    const auto once = band_limit(f);
    EXPECT_LT(rel_rms(band_limit(once), once), 1e-12);

    // Single evanescent bin at fx = 20/32 * 2 > 1/L is not representable on
    // small_grid, so use a coarser frequency step.
    const GridSpec g(16, 16, 0.25, 0.25); // step 1/4, Nyquist 2/L
    std::vector<complex> spec(g.size());
    spec[g.index(6, 0)] = 1.0; // fx = 1.5 / L
    const auto evanescent = inverse_spectrum(AngularSpectrum(g, unit, spec));
    const auto limited = band_limit(evanescent);
    for (const auto& v : limited.data()) EXPECT_LT(std::abs(v), 1e-15);
}

TEST(Propagate, ThreadCountDoesNotChangeResults) {
    std::mt19937_64 rng(29);
    const auto f = pt::random_field(small_grid, unit, rng);
    const auto ref = propagate(f, 9.5);
    std::vector<std::vector<complex>> results(8);
    std::vector<std::thread> pool;
    for (auto& r : results)
        pool.emplace_back([&] {
            const auto p = propagate(f, 9.5);
            r.assign(p.data().begin(), p.data().end());
        });
    for (auto& t : pool) t.join();
    for (const auto& r : results) EXPECT_TRUE(pt::bit_equal(r, ref.data()));
}
