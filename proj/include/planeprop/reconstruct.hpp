#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "planeprop/field.hpp"
#include "planeprop/propagation.hpp"

namespace planeprop {

/// Back-propagated planes at strictly increasing z, all sharing one lattice.
class DepthStack {
public:
    DepthStack(std::vector<Wavefield> planes, double source_recording_z)
        : planes_(std::move(planes)), recording_z_(source_recording_z) {
        if (planes_.empty()) throw std::invalid_argument("depth stack needs at least one plane");
        const auto& first = planes_.front();
        for (std::size_t k = 1; k < planes_.size(); ++k) {
            const auto& p = planes_[k];
            if (!p.grid().same_lattice(first.grid()) || !(p.medium() == first.medium()))
                throw std::invalid_argument("depth stack planes must share grid and medium");
            if (!(p.grid().z() > planes_[k - 1].grid().z()))
                throw std::invalid_argument("depth stack planes must have strictly increasing z");
        }
    }

    const std::vector<Wavefield>& planes() const noexcept { return planes_; }
    std::size_t size() const noexcept { return planes_.size(); }
    const Wavefield& operator[](std::size_t k) const { return planes_[k]; }
    double source_recording_z() const noexcept { return recording_z_; }

private:
    std::vector<Wavefield> planes_;
    double recording_z_;
};

struct SourceEstimate {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double peak_intensity = 0.0;
};

/// Propagates the recording independently to every target plane. Targets on
/// the source side of the recording lie at lower z (waves travel toward +z).
inline DepthStack sweep(const Wavefield& recording, const std::vector<double>& z_targets,
                        EvanescentPolicy policy = EvanescentPolicy::truncate, std::size_t pad_factor = 1) {
    if (z_targets.empty()) throw std::invalid_argument("sweep needs at least one target plane");
    for (std::size_t k = 1; k < z_targets.size(); ++k)
        if (!(z_targets[k] > z_targets[k - 1]))
            throw std::invalid_argument("sweep targets must be strictly increasing");

    const auto& g = recording.grid();
    const auto lay = detail::padded_layout(g, pad_factor);
    // One forward transform serves every plane.
    const auto spectrum = forward_spectrum(pad_factor == 1 ? recording : detail::embed(recording, lay));
    const double z0 = g.z();
    std::vector<Wavefield> planes;
    planes.reserve(z_targets.size());
    for (double zt : z_targets) {
        const auto kernel = make_kernel(spectrum.grid(), recording.medium(), zt - z0, policy);
        auto plane = inverse_spectrum(kernel.apply(spectrum));
        auto data = pad_factor == 1 ? std::move(plane).release() : detail::crop(plane, g, lay);
        planes.emplace_back(g.at_z(zt), recording.medium(), std::move(data));
    }
    return DepthStack(std::move(planes), z0);
}

/// Peak sample intensity max |v|^2.
inline double focus_metric(const Wavefield& plane) {
    double best = 0.0;
    for (const auto& v : plane.data()) best = std::max(best, std::norm(v));
    return best;
}

/// Local intensity maxima over the 26-neighbourhood of the (x, y, z) lattice
/// that reach threshold_fraction of the global maximum. Out-of-stack
/// neighbours are ignored. Within a plateau only the first sample in (z, y, x)
/// order is reported. Sorted by descending intensity, ties by index order.
inline std::vector<SourceEstimate> locate_sources(const DepthStack& stack, double threshold_fraction) {
    if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0))
        throw std::invalid_argument("threshold fraction must lie in (0, 1]");

    const auto& g = stack[0].grid();
    const std::size_t nx = g.nx(), ny = g.ny(), nz = stack.size();
    std::vector<double> intensity(nx * ny * nz);
    for (std::size_t k = 0; k < nz; ++k) {
        const auto data = stack[k].data();
        for (std::size_t n = 0; n < data.size(); ++n) intensity[k * nx * ny + n] = std::norm(data[n]);
    }
    const double global = *std::max_element(intensity.begin(), intensity.end());
    if (!(global > 0.0)) return {};
    const double threshold = threshold_fraction * global;

    auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return intensity[(k * ny + j) * nx + i]; };

    struct Hit {
        std::size_t k, j, i;
        double value;
    };
    std::vector<Hit> hits;
    for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const double v = at(i, j, k);
                if (v < threshold) continue;
                bool is_max = true;
                for (int dk = -1; dk <= 1 && is_max; ++dk) {
                    for (int dj = -1; dj <= 1 && is_max; ++dj) {
                        for (int di = -1; di <= 1 && is_max; ++di) {
                            if (dk == 0 && dj == 0 && di == 0) continue;
                            const long kk = static_cast<long>(k) + dk;
                            const long jj = static_cast<long>(j) + dj;
                            const long ii = static_cast<long>(i) + di;
                            if (kk < 0 || jj < 0 || ii < 0 || kk >= static_cast<long>(nz) ||
                                jj >= static_cast<long>(ny) || ii >= static_cast<long>(nx))
                                continue;
                            const double w = at(ii, jj, kk);
                            // Neighbours earlier in (z, y, x) order win ties.
                            const bool earlier = std::tie(kk, jj, ii) < std::tuple<long, long, long>(k, j, i);
                            if (w > v || (earlier && w == v)) is_max = false;
                        }
                    }
                }
                if (is_max) hits.push_back({k, j, i, v});
            }
        }
    }

    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.value > b.value; });

    std::vector<SourceEstimate> out;
    out.reserve(hits.size());
    for (const auto& h : hits) {
        const auto& pg = stack[h.k].grid();
        out.push_back({pg.x_at(h.i), pg.y_at(h.j), pg.z(), h.value});
    }
    return out;
}

} // namespace planeprop
