#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "cellinj/dynamics.hpp"
#include "cellinj/errors.hpp"
#include "cellinj/format.hpp"
#include "cellinj/frames.hpp"
#include "cellinj/propcheck.hpp"
#include "cellinj/scenario.hpp"

namespace cellinj::commands {

enum ExitCode : int {
    kOk = 0,
    kPropertyFailure = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

inline constexpr std::string_view kCsvHeader = "t,x,y,xdot,ydot,xc,yc,u,v";

/// One CSV row per trajectory sample; camera and image columns are the frame
/// transforms of the stage columns.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Calibration& c) {
    os << kCsvHeader << '\n';
    for (const StageState& s : traj) {
        const CameraPoint cam = stage_to_camera(StagePoint(s.x, s.y), c);
        const ImagePoint img = camera_to_image(cam, c);
        os << format_sig17(s.t) << ',' << format_sig17(s.x) << ',' << format_sig17(s.y) << ','
           << format_sig17(s.xdot) << ',' << format_sig17(s.ydot) << ',' << format_sig17(cam.first()) << ','
           << format_sig17(cam.second()) << ',' << format_sig17(img.first()) << ',' << format_sig17(img.second())
           << '\n';
    }
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

/// Simulates `config` and writes the CSV to `out`.
inline int cmd_simulate(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Trajectory traj =
            simulate(config.masses, config.initial, config.wrench, config.sim.dt, config.sim.t_end);
        write_trajectory_csv(out, traj, config.calibration);
        return out ? kOk : kNumericalFailure;
    } catch (const OverflowError& e) {
        err << "simulate: numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const DomainError& e) {
        err << "simulate: config error: " << e.what() << '\n';
        return kUsageError;
    }
}

inline int cmd_simulate(const std::string& config_path, const std::string& out_path, std::ostream& err) {
    std::optional<ScenarioConfig> config;
    try {
        config = load_config(config_path);
    } catch (const ParseError& e) {
        err << "simulate: config error: " << e.what() << '\n';
        return kUsageError;
    }
    std::ostringstream csv;
    const int code = cmd_simulate(*config, csv, err);
    if (code != kOk) return code;
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        err << "simulate: cannot open output '" << out_path << "'\n";
        return kUsageError;
    }
    out << csv.str();
    return out ? kOk : kUsageError;
}

/// Prints the camera and image coordinates of stage point (x, y):
///     camera <xc> <yc>
///     image <u> <v>
inline int cmd_transform(const ScenarioConfig& config, double x, double y, std::ostream& out) {
    const CameraPoint cam = stage_to_camera(StagePoint(x, y), config.calibration);
    const ImagePoint img = camera_to_image(cam, config.calibration);
    out << "camera " << format_sig17(cam.first()) << ' ' << format_sig17(cam.second()) << '\n';
    out << "image " << format_sig17(img.first()) << ' ' << format_sig17(img.second()) << '\n';
    return kOk;
}

/// Streams one report per registered property; exit 0 iff all pass.
inline int cmd_verify(std::size_t samples, std::uint64_t seed, std::ostream& out,
                      const propcheck::CheckOptions& options = {}) {
    if (samples < 1) return kUsageError;
    const auto reports = propcheck::run_all(propcheck::SampleDomain{}, samples, seed, options);
    for (const auto& r : reports) propcheck::write_report(out, r);
    return propcheck::all_pass(reports) ? kOk : kPropertyFailure;
}

}  // namespace cellinj::commands
