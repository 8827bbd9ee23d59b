#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process through planeprop::cli::run.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planeprop/planeprop.hpp"

namespace planeprop::cli {

enum ExitCode : int { ok = 0, internal_error = 1, argument_error = 2, file_error = 3 };

/// Failure reading or writing a file named on the command line.
class file_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Wavefield load_field(const std::string& path) {
    try {
        return read_field(path);
    } catch (const std::exception& e) {
        throw file_failure(path + ": " + e.what());
    }
}

inline void save_field(const Wavefield& f, const std::string& path) {
    try {
        write_field(f, path);
    } catch (const std::exception& e) {
        throw file_failure(path + ": " + e.what());
    }
}

inline EvanescentPolicy parse_policy(const std::string& s) {
    if (s == "truncate") return EvanescentPolicy::truncate;
    if (s == "decay") return EvanescentPolicy::decay;
    throw std::invalid_argument("unknown policy '" + s + "' (expected truncate or decay)");
}

inline ImageKind parse_kind(const std::string& s) {
    if (s == "magnitude") return ImageKind::magnitude;
    if (s == "phase") return ImageKind::phase;
    if (s == "intensity") return ImageKind::intensity;
    throw std::invalid_argument("unknown image kind '" + s + "'");
}

inline std::vector<double> linspace(double start, double stop, std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("--steps must be >= 1");
    if (steps == 1) return {start};
    std::vector<double> out(steps);
    const double step = (stop - start) / static_cast<double>(steps - 1);
    for (std::size_t k = 0; k < steps; ++k) out[k] = start + static_cast<double>(k) * step;
    out.back() = stop;
    return out;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Plane-to-plane wavefield propagation and backward-propagation imaging", "planeprop"};
    app.require_subcommand(1);

    // synth
    std::string scene_path, out_path, in_path;
    auto* synth = app.add_subcommand("synth", "Record a point-source scene on its screen");
    synth->add_option("--scene", scene_path, "Scene text file")->required();
    synth->add_option("--out", out_path, "Output field file")->required();

    // planewave
    double theta = 0.0, amp_re = 1.0, amp_im = 0.0, wavelength = 0.0, speed = 0.0;
    double pitch_x = 0.0, pitch_y = 0.0, plane_z = 0.0, origin_x = 0.0, origin_y = 0.0;
    std::size_t nx = 0, ny = 0;
    auto* planewave = app.add_subcommand("planewave", "Sample a tilted plane wave on a screen");
    planewave->add_option("--theta", theta, "Angle from the screen normal toward +x (rad)")->required();
    planewave->add_option("--amp-re", amp_re, "Amplitude, real part");
    planewave->add_option("--amp-im", amp_im, "Amplitude, imaginary part");
    planewave->add_option("--wavelength", wavelength, "Wavelength (m)")->required();
    planewave->add_option("--speed", speed, "Propagation speed (m/s)")->required();
    planewave->add_option("--nx", nx)->required();
    planewave->add_option("--ny", ny)->required();
    planewave->add_option("--dx", pitch_x)->required();
    planewave->add_option("--dy", pitch_y)->required();
    planewave->add_option("--z", plane_z);
    planewave->add_option("--ox", origin_x, "x of sample (0, 0)");
    planewave->add_option("--oy", origin_y, "y of sample (0, 0)");
    planewave->add_option("--out", out_path)->required();

    // prop / backprop
    double dz = 0.0;
    std::string policy_name = "truncate";
    std::size_t pad = 1;
    auto* prop = app.add_subcommand("prop", "Propagate a field by a signed distance");
    prop->add_option("--in", in_path)->required();
    prop->add_option("--dz", dz, "Signed distance (m)")->required();
    prop->add_option("--policy", policy_name, "truncate|decay");
    prop->add_option("--pad", pad, "Zero-padding factor per axis (1 = none)")->check(CLI::PositiveNumber);
    prop->add_option("--out", out_path)->required();

    auto* backprop = app.add_subcommand("backprop", "Propagate a field backward by a positive distance");
    backprop->add_option("--in", in_path)->required();
    backprop->add_option("--dz", dz, "Positive distance (m)")->required();
    backprop->add_option("--policy", policy_name, "truncate|decay");
    backprop->add_option("--pad", pad, "Zero-padding factor per axis (1 = none)")->check(CLI::PositiveNumber);
    backprop->add_option("--out", out_path)->required();

    // sweep
    double z_start = 0.0, z_stop = 0.0, threshold = 0.5;
    std::size_t steps = 0;
    std::string out_dir;
    bool locate = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Back-propagate a recording to a range of planes");
    sweep_cmd->add_option("--in", in_path)->required();
    sweep_cmd->add_option("--z-start", z_start)->required();
    sweep_cmd->add_option("--z-stop", z_stop)->required();
    sweep_cmd->add_option("--steps", steps)->required();
    sweep_cmd->add_option("--policy", policy_name, "truncate|decay");
    sweep_cmd->add_option("--pad", pad, "Zero-padding factor per axis (1 = none)")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out-dir", out_dir)->required();
    sweep_cmd->add_flag("--locate", locate, "Report local intensity maxima");
    sweep_cmd->add_option("--threshold", threshold, "Fraction of the global peak");

    // export
    std::string kind_name;
    auto* export_cmd = app.add_subcommand("export", "Write a PGM image of a field");
    export_cmd->add_option("--in", in_path)->required();
    export_cmd->add_option("--kind", kind_name, "magnitude|phase|intensity")->required();
    export_cmd->add_option("--out", out_path)->required();

    // info
    auto* info = app.add_subcommand("info", "Print header fields and total energy");
    info->add_option("--in", in_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return ok;
        }
        err << "error: " << e.what() << "\n";
        return argument_error;
    }

    try {
        if (synth->parsed()) {
            Scene scene = [&] {
                try {
                    return read_scene(scene_path);
                } catch (const std::exception& e) {
                    throw file_failure(scene_path + ": " + e.what());
                }
            }();
            detail::save_field(direct_field(scene.sources, scene.screen), out_path);
        } else if (planewave->parsed()) {
            const MediumParams medium(wavelength, speed);
            const GridSpec grid(nx, ny, pitch_x, pitch_y, origin_x, origin_y, plane_z);
            detail::save_field(plane_wave_field(PlaneWave(theta, {amp_re, amp_im}, medium), grid), out_path);
        } else if (prop->parsed()) {
            const auto policy = detail::parse_policy(policy_name);
            detail::save_field(propagate(detail::load_field(in_path), dz, policy, pad), out_path);
        } else if (backprop->parsed()) {
            const auto policy = detail::parse_policy(policy_name);
            if (!(dz > 0.0)) throw std::invalid_argument("backprop requires --dz > 0");
            detail::save_field(backpropagate(detail::load_field(in_path), dz, policy, pad), out_path);
        } else if (sweep_cmd->parsed()) {
            const auto policy = detail::parse_policy(policy_name);
            const auto targets = detail::linspace(z_start, z_stop, steps);
            const auto recording = detail::load_field(in_path);
            const auto stack = sweep(recording, targets, policy, pad);
            std::vector<SourceEstimate> found;
            if (locate) found = locate_sources(stack, threshold);

            const std::filesystem::path dir(out_dir);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw file_failure(out_dir + ": " + ec.message());
            for (std::size_t k = 0; k < stack.size(); ++k)
                detail::save_field(stack[k], (dir / ("plane_" + std::to_string(k) + ".wfld")).string());
            if (locate) {
                const auto report_path = dir / "report.txt";
                std::ofstream report(report_path);
                if (!report) throw file_failure(report_path.string() + ": cannot open");
                for (const auto& s : found) {
                    const std::string line = format_double(s.x) + " " + format_double(s.y) + " " +
                                             format_double(s.z) + " " + format_double(s.peak_intensity) + "\n";
                    report << line;
                    out << line;
                }
            }
        } else if (export_cmd->parsed()) {
            const auto kind = detail::parse_kind(kind_name);
            const auto field = detail::load_field(in_path);
            try {
                export_image(field, kind, out_path);
            } catch (const std::exception& e) {
                throw file_failure(out_path + ": " + e.what());
            }
        } else if (info->parsed()) {
            const auto field = detail::load_field(in_path);
            const auto& g = field.grid();
            out << "version " << field_version << "\n"
                << "nx " << g.nx() << "\n"
                << "ny " << g.ny() << "\n"
                << "dx " << format_double(g.dx()) << "\n"
                << "dy " << format_double(g.dy()) << "\n"
                << "origin_x " << format_double(g.origin_x()) << "\n"
                << "origin_y " << format_double(g.origin_y()) << "\n"
                << "z " << format_double(g.z()) << "\n"
                << "wavelength " << format_double(field.medium().wavelength()) << "\n"
                << "speed " << format_double(field.medium().speed()) << "\n"
                << "energy " << format_double(energy(field.data())) << "\n";
        }
    } catch (const file_failure& e) {
        err << "error: " << e.what() << "\n";
        return file_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return argument_error;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return argument_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return internal_error;
    }
    return ok;
}

} // namespace planeprop::cli
