#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "cellinj/dynamics.hpp"
#include "cellinj/errors.hpp"
#include "cellinj/format.hpp"
#include "cellinj/frames.hpp"

namespace cellinj {

struct SimSettings {
    double dt = kDefaultStep;
    double t_end = 0.0;

    friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

/// Everything one simulation run needs. The initial state always sits at t = 0.
struct ScenarioConfig {
    MassParams masses;
    Calibration calibration;
    StageState initial;
    Wrench wrench;
    SimSettings sim;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

namespace detail {

struct SectionLayout {
    std::string_view name;
    std::array<std::string_view, 5> keys;
    std::size_t key_count;
};

inline constexpr std::array<SectionLayout, 5> kConfigLayout{{
    {"masses", {"mx", "my", "mp"}, 3},
    {"calibration", {"alpha", "dx", "dy", "fx", "fy"}, 5},
    {"initial", {"x0", "y0", "xd0", "yd0"}, 4},
    {"wrench", {"taux", "tauy", "fexd", "feyd"}, 4},
    {"sim", {"dt", "t_end"}, 2},
}};

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_real(std::string_view text) {
    // from_chars rejects a leading '+', which the format allows.
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::general);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

struct Entry {
    double value;
    std::size_t line;
};

}  // namespace detail

/// Parses the sectioned key-value scenario format:
///
///     # comment
///     [masses]
///     mx = 0.5
///     ...
///
/// Sections masses, calibration, initial, wrench and sim must each appear exactly
/// once with exactly their keys (see README). Values are decimal or scientific
/// reals. Text after '#' is ignored.
inline ScenarioConfig parse_config(std::string_view text) {
    using detail::kConfigLayout;

    std::map<std::string, std::size_t, std::less<>> section_lines;
    std::map<std::string, detail::Entry, std::less<>> entries;
    const detail::SectionLayout* current = nullptr;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "", "malformed section header");
            const std::string_view name = detail::trim(line.substr(1, line.size() - 2));
            current = nullptr;
            for (const auto& s : kConfigLayout)
                if (s.name == name) current = &s;
            if (current == nullptr) throw ParseError(line_no, "", "unknown section [" + std::string(name) + "]");
            if (!section_lines.emplace(std::string(name), line_no).second)
                throw ParseError(line_no, "", "duplicate section [" + std::string(name) + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view raw = detail::trim(line.substr(eq + 1));
        if (current == nullptr) throw ParseError(line_no, key, "key outside of any section");
        bool known = false;
        for (std::size_t i = 0; i < current->key_count; ++i) known = known || current->keys[i] == key;
        if (!known)
            throw ParseError(line_no, key, "unknown key in section [" + std::string(current->name) + "]");
        const auto value = detail::parse_real(raw);
        if (!value) throw ParseError(line_no, key, "malformed number '" + std::string(raw) + "'");
        if (!entries.emplace(key, detail::Entry{*value, line_no}).second)
            throw ParseError(line_no, key, "duplicate key");
    }

    for (const auto& s : kConfigLayout) {
        const auto sec = section_lines.find(s.name);
        if (sec == section_lines.end()) throw ParseError(0, "", "missing section [" + std::string(s.name) + "]");
        for (std::size_t i = 0; i < s.key_count; ++i)
            if (!entries.contains(s.keys[i]))
                throw ParseError(sec->second, std::string(s.keys[i]),
                                 "missing key in section [" + std::string(s.name) + "]");
    }

    auto get = [&](std::string_view key) { return entries.find(key)->second.value; };
    auto positive = [&](std::string_view key) {
        const auto& e = entries.find(key)->second;
        if (!(e.value > 0.0)) throw ParseError(e.line, std::string(key), std::string(key) + " must be positive");
        return e.value;
    };
    auto mass = [&](std::string_view key) {
        const double m = positive(key);
        if (m < kMinMass)
            throw ParseError(entries.find(key)->second.line, std::string(key),
                             std::string(key) + " is below the minimum mass 1e-12");
        return m;
    };

    const double mx = mass("mx");
    const double my = mass("my");
    const double mp = mass("mp");
    const double dx = positive("dx");
    const double dy = positive("dy");
    const double fx = positive("fx");
    const double fy = positive("fy");
    const double dt = positive("dt");
    const double t_end = positive("t_end");

    return ScenarioConfig{
        MassParams(mx, my, mp),
        Calibration(get("alpha"), dx, dy, fx, fy),
        StageState{0.0, get("x0"), get("y0"), get("xd0"), get("yd0")},
        Wrench{get("taux"), get("tauy"), get("fexd"), get("feyd")},
        SimSettings{dt, t_end},
    };
}

/// Inverse of parse_config; values in shortest round-trip form.
inline std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream os;
    auto kv = [&](const char* key, double v) { os << key << " = " << format_shortest(v) << '\n'; };
    os << "[masses]\n";
    kv("mx", c.masses.mx());
    kv("my", c.masses.my());
    kv("mp", c.masses.mp());
    os << "\n[calibration]\n";
    kv("alpha", c.calibration.alpha());
    kv("dx", c.calibration.dx());
    kv("dy", c.calibration.dy());
    kv("fx", c.calibration.fx());
    kv("fy", c.calibration.fy());
    os << "\n[initial]\n";
    kv("x0", c.initial.x);
    kv("y0", c.initial.y);
    kv("xd0", c.initial.xdot);
    kv("yd0", c.initial.ydot);
    os << "\n[wrench]\n";
    kv("taux", c.wrench.taux);
    kv("tauy", c.wrench.tauy);
    kv("fexd", c.wrench.fexd);
    kv("feyd", c.wrench.feyd);
    os << "\n[sim]\n";
    kv("dt", c.sim.dt);
    kv("t_end", c.sim.t_end);
    return os.str();
}

}  // namespace cellinj
