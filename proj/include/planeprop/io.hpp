#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "planeprop/errors.hpp"
#include "planeprop/field.hpp"
#include "planeprop/sources.hpp"

namespace planeprop {

// ---------------------------------------------------------------------------
// Binary field file
//
//   offset  size  content
//        0     4  magic "WFLD"
//        4     4  version (u32) = 1
//        8     4  nx (u32)
//       12     4  ny (u32)
//       16    56  dx dy origin_x origin_y z wavelength speed (f64 each)
//       72  16*N  samples as (re f64, im f64), row-major, x fastest
//
// All multi-byte values are little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::array<char, 4> field_magic{'W', 'F', 'L', 'D'};
inline constexpr std::uint32_t field_version = 1;
inline constexpr std::size_t field_header_bytes = 72;

namespace detail {

template <class T>
void put_le(std::vector<unsigned char>& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.insert(out.end(), bytes.begin(), bytes.end());
}

template <class T>
T get_le(const unsigned char* p) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

inline std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_all(const std::filesystem::path& path, const void* data, std::size_t n) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out) throw std::system_error(errno, std::generic_category(), "write failed: " + path.string());
}

} // namespace detail

inline std::vector<unsigned char> encode_field(const Wavefield& field) {
    const auto& g = field.grid();
    if (g.nx() > UINT32_MAX || g.ny() > UINT32_MAX) throw validation_error("grid too large for field file");
    std::vector<unsigned char> out;
    out.reserve(field_header_bytes + 16 * g.size());
    out.insert(out.end(), field_magic.begin(), field_magic.end());
    detail::put_le<std::uint32_t>(out, field_version);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
    for (double v : {g.dx(), g.dy(), g.origin_x(), g.origin_y(), g.z(), field.medium().wavelength(),
                     field.medium().speed()})
        detail::put_le<double>(out, v);
    for (const auto& v : field.data()) {
        detail::put_le<double>(out, v.real());
        detail::put_le<double>(out, v.imag());
    }
    return out;
}

/// Parses a field file image. Structural problems raise format_error with the
/// byte offset; invalid header values or non-finite samples raise
/// validation_error.
inline Wavefield decode_field(std::span<const unsigned char> bytes) {
    if (bytes.size() < field_header_bytes)
        throw format_error("truncated header: expected " + std::to_string(field_header_bytes) +
                               " bytes, got " + std::to_string(bytes.size()),
                           bytes.size());
    if (!std::equal(field_magic.begin(), field_magic.end(), bytes.begin()))
        throw format_error("bad magic at offset 0 (expected \"WFLD\")", 0);
    const auto version = detail::get_le<std::uint32_t>(bytes.data() + 4);
    if (version != field_version)
        throw format_error("unsupported version " + std::to_string(version) + " at offset 4", 4);
    const auto nx = detail::get_le<std::uint32_t>(bytes.data() + 8);
    const auto ny = detail::get_le<std::uint32_t>(bytes.data() + 12);
    if (nx == 0) throw format_error("nx must be >= 1 at offset 8", 8);
    if (ny == 0) throw format_error("ny must be >= 1 at offset 12", 12);
    std::array<double, 7> h;
    for (std::size_t n = 0; n < h.size(); ++n) h[n] = detail::get_le<double>(bytes.data() + 16 + 8 * n);

    const std::uint64_t count = std::uint64_t{nx} * ny;
    const std::uint64_t expected = field_header_bytes + 16 * count;
    if (bytes.size() != expected)
        throw format_error("payload size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                               std::to_string(bytes.size()),
                           std::min<std::uint64_t>(bytes.size(), expected));

    GridSpec grid(nx, ny, h[0], h[1], h[2], h[3], h[4]);
    MediumParams medium(h[5], h[6]);
    std::vector<complex> data(count);
    const unsigned char* p = bytes.data() + field_header_bytes;
    for (auto& v : data) {
        v = {detail::get_le<double>(p), detail::get_le<double>(p + 8)};
        p += 16;
    }
    return Wavefield(grid, medium, std::move(data));
}

inline void write_field(const Wavefield& field, const std::filesystem::path& path) {
    const auto bytes = encode_field(field);
    detail::write_all(path, bytes.data(), bytes.size());
}

inline Wavefield read_field(const std::filesystem::path& path) {
    const auto bytes = detail::read_all(path);
    return decode_field(bytes);
}

// ---------------------------------------------------------------------------
// Scene text file
// ---------------------------------------------------------------------------

/// Point sources plus the screen they are recorded on.
struct Scene {
    SourceSet sources;
    GridSpec screen;

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline bool parse_size(std::string_view s, std::size_t& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        out.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

} // namespace detail

inline std::string render_scene(const Scene& scene) {
    std::string out;
    const auto& m = scene.sources.medium;
    out += "wavelength " + format_double(m.wavelength()) + " speed " + format_double(m.speed()) + "\n";
    for (const auto& s : scene.sources.sources) {
        out += "src " + format_double(s.x) + " " + format_double(s.y) + " " + format_double(s.z) + " " +
               format_double(s.amplitude.real()) + " " + format_double(s.amplitude.imag()) + "\n";
    }
    const auto& g = scene.screen;
    out += "screen " + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + " " + format_double(g.dx()) +
           " " + format_double(g.dy()) + " " + format_double(g.origin_x()) + " " + format_double(g.origin_y()) +
           " " + format_double(g.z()) + "\n";
    return out;
}

/// Parses the scene format. Errors are format_error carrying the 1-based line.
inline Scene parse_scene(std::string_view text) {
    std::optional<MediumParams> medium;
    std::optional<GridSpec> screen;
    std::vector<PointSource> sources;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = detail::split_ws(line);
        if (tok.empty()) continue;

        auto fail = [&](const std::string& why) -> format_error {
            return format_error("scene line " + std::to_string(line_no) + ": " + why, line_no);
        };
        auto num = [&](std::string_view s) {
            double v;
            if (!detail::parse_double(s, v) || !std::isfinite(v))
                throw fail("invalid number '" + std::string(s) + "'");
            return v;
        };

        try {
            if (tok[0] == "wavelength") {
                if (medium) throw fail("duplicate medium header");
                if (!sources.empty() || screen) throw fail("medium header must come first");
                if (tok.size() != 4 || tok[2] != "speed") throw fail("expected 'wavelength <m> speed <m/s>'");
                medium.emplace(num(tok[1]), num(tok[3]));
            } else if (tok[0] == "src") {
                if (!medium) throw fail("source before medium header");
                if (tok.size() != 6) throw fail("expected 'src <x> <y> <z> <re> <im>'");
                sources.push_back({num(tok[1]), num(tok[2]), num(tok[3]), {num(tok[4]), num(tok[5])}});
            } else if (tok[0] == "screen") {
                if (screen) throw fail("duplicate screen line");
                if (tok.size() != 8) throw fail("expected 'screen <nx> <ny> <dx> <dy> <ox> <oy> <z>'");
                std::size_t nx, ny;
                if (!detail::parse_size(tok[1], nx) || !detail::parse_size(tok[2], ny))
                    throw fail("invalid grid size");
                screen.emplace(nx, ny, num(tok[3]), num(tok[4]), num(tok[5]), num(tok[6]), num(tok[7]));
            } else {
                throw fail("unknown record '" + std::string(tok[0]) + "'");
            }
        } catch (const validation_error& e) {
            throw fail(e.what());
        }
    }
    if (!medium) throw format_error("scene has no 'wavelength ... speed ...' header");
    if (!screen) throw format_error("scene has no 'screen' line");
    return Scene{SourceSet{std::move(sources), *medium}, *screen};
}

inline Scene read_scene(const std::filesystem::path& path) {
    const auto bytes = detail::read_all(path);
    return parse_scene(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline void write_scene(const Scene& scene, const std::filesystem::path& path) {
    const auto text = render_scene(scene);
    detail::write_all(path, text.data(), text.size());
}

// ---------------------------------------------------------------------------
// PGM export
// ---------------------------------------------------------------------------

enum class ImageKind { magnitude, phase, intensity };

/// 8-bit grayscale rendering, row j = 0 first. Magnitude and intensity are
/// scaled by the plane maximum (all-zero plane gives all-zero pixels); phase
/// maps (-pi, pi] linearly onto 0..255.
inline std::vector<unsigned char> render_gray(const Wavefield& field, ImageKind kind) {
    const auto data = field.data();
    std::vector<unsigned char> px(data.size(), 0);
    if (kind == ImageKind::phase) {
        const double pi = std::numbers::pi;
        for (std::size_t n = 0; n < data.size(); ++n) {
            double phi = std::arg(data[n]);
            if (phi <= -pi) phi = pi;
            px[n] = static_cast<unsigned char>(std::lround((phi + pi) / (2.0 * pi) * 255.0));
        }
        return px;
    }
    std::vector<double> value(data.size());
    for (std::size_t n = 0; n < data.size(); ++n)
        value[n] = kind == ImageKind::magnitude ? std::abs(data[n]) : std::norm(data[n]);
    const double peak = value.empty() ? 0.0 : *std::max_element(value.begin(), value.end());
    if (!(peak > 0.0)) return px;
    for (std::size_t n = 0; n < data.size(); ++n)
        px[n] = static_cast<unsigned char>(std::lround(std::clamp(value[n] / peak, 0.0, 1.0) * 255.0));
    return px;
}

inline std::vector<unsigned char> encode_pgm(const Wavefield& field, ImageKind kind) {
    const auto& g = field.grid();
    const std::string header = "P5\n" + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    const auto px = render_gray(field, kind);
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

inline void export_image(const Wavefield& field, ImageKind kind, const std::filesystem::path& path) {
    const auto bytes = encode_pgm(field, kind);
    detail::write_all(path, bytes.data(), bytes.size());
}

} // namespace planeprop
