#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ivwsn/csv.hpp"
#include "ivwsn/errors.hpp"
#include "ivwsn/types.hpp"
#include "ivwsn/units.hpp"

namespace ivwsn {

enum class TraceKind : std::uint8_t {
    Accel3Axis,  ///< columns ax, ay, az in m/s^2 (gravity-inclusive logger convention)
    TempPair,    ///< columns t_hot_c, t_amb_c in deg C
};

/// Uniformly sampled measurement trace.
struct Trace {
    TraceKind kind = TraceKind::Accel3Axis;
    double sample_rate_hz = 0.0;
    double t0_s = 0.0;
    std::vector<std::array<double, 3>> samples;  ///< third channel unused for TempPair
    Compartment compartment = Compartment::Engine;
    std::string label;

    std::size_t size() const { return samples.size(); }
    double dt_s() const { return 1.0 / sample_rate_hz; }
    double time_at(std::size_t i) const { return t0_s + static_cast<double>(i) * dt_s(); }
    std::size_t channels() const { return kind == TraceKind::Accel3Axis ? 3 : 2; }
};

inline void validate_trace(const Trace& t) {
    if (!(t.sample_rate_hz > 0.0)) throw NonUniformTrace("sample rate must be > 0");
    if (t.size() < 2) throw ParseFail("trace needs at least 2 samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t c = 0; c < t.channels(); ++c) {
            const double v = t.samples[i][c];
            if (!std::isfinite(v))
                throw ParseFail("non-finite sample value", i + 2);
            if (t.kind == TraceKind::TempPair && (v < -60.0 || v > 300.0))
                throw ParseFail("temperature " + format_double(v) +
                                    " degC outside sanity bounds [-60, 300]",
                                i + 2);
        }
    }
}

namespace detail {

/// Round to 9 significant decimal digits; recovers "nice" sample intervals
/// from timestamps that went through one write/parse cycle.
inline double snap9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return std::strtod(buf, nullptr);
}

inline const std::vector<std::string>& header_for(TraceKind kind) {
    static const std::vector<std::string> accel{"t_s", "ax", "ay", "az"};
    static const std::vector<std::string> temps{"t_s", "t_hot_c", "t_amb_c"};
    return kind == TraceKind::Accel3Axis ? accel : temps;
}

}  // namespace detail

/// Parses a trace CSV. Near-uniform timestamps (jitter < 1% of the interval)
/// are accepted and snapped to a uniform grid.
inline Trace parse_trace(const std::string& path, TraceKind kind,
                         Compartment compartment = Compartment::Engine,
                         const std::string& label = "") {
    CsvReader reader(path);
    reader.expect_header(detail::header_for(kind));
    const std::size_t ncols = detail::header_for(kind).size();

    std::vector<double> times;
    Trace trace;
    trace.kind = kind;
    trace.compartment = compartment;
    trace.label = label.empty() ? path : label;

    std::vector<std::string> f;
    while (reader.next_row(f)) {
        const std::size_t row = reader.row();
        if (f.size() != ncols)
            throw ParseFail("expected " + std::to_string(ncols) + " fields, got " +
                                std::to_string(f.size()),
                            row);
        const double t = parse_double_field(f[0], row);
        if (!times.empty() && t <= times.back())
            throw NonMonotonicTime("timestamps must be strictly increasing", row);
        times.push_back(t);
        std::array<double, 3> s{0.0, 0.0, 0.0};
        for (std::size_t c = 1; c < ncols; ++c) s[c - 1] = parse_double_field(f[c], row);
        trace.samples.push_back(s);
    }
    if (times.size() < 2) throw ParseFail("trace needs at least 2 samples", reader.row());

    const double dt = detail::snap9((times.back() - times.front()) /
                                    static_cast<double>(times.size() - 1));
    if (!(dt > 0.0)) throw NonUniformTrace("degenerate time span");
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double expected = times.front() + static_cast<double>(i) * dt;
        if (std::abs(times[i] - expected) >= 0.01 * dt)
            throw ExcessiveJitter("timestamp jitter exceeds 1% of the sample interval", i + 2);
    }
    trace.t0_s = times.front();
    trace.sample_rate_hz = 1.0 / dt;
    validate_trace(trace);
    return trace;
}

inline void write_trace(const Trace& trace, std::ostream& out) {
    const auto& header = detail::header_for(trace.kind);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    const double dt = trace.dt_s();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << format_double(trace.t0_s + static_cast<double>(i) * dt);
        for (std::size_t c = 0; c < trace.channels(); ++c)
            out << ',' << format_double(trace.samples[i][c]);
        out << '\n';
    }
}

/// Linear interpolation onto a uniform grid at target_hz spanning the
/// original time range.
inline Trace resample(const Trace& trace, double target_hz) {
    if (!(target_hz > 0.0)) throw ConfigError("resample target rate must be > 0");
    if (target_hz == trace.sample_rate_hz) return trace;

    Trace out = trace;
    out.sample_rate_hz = target_hz;
    out.samples.clear();
    const double duration = static_cast<double>(trace.size() - 1) * trace.dt_s();
    const std::size_t n_out = static_cast<std::size_t>(std::floor(duration * target_hz + 1e-9)) + 1;
    out.samples.reserve(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double pos = (static_cast<double>(i) / target_hz) * trace.sample_rate_hz;
        const double nearest = std::round(pos);
        std::array<double, 3> s{0.0, 0.0, 0.0};
        if (std::abs(pos - nearest) < 1e-9 && nearest < static_cast<double>(trace.size())) {
            s = trace.samples[static_cast<std::size_t>(nearest)];
        } else {
            std::size_t k = static_cast<std::size_t>(pos);
            if (k >= trace.size() - 1) k = trace.size() - 2;
            const double frac = pos - static_cast<double>(k);
            for (std::size_t c = 0; c < 3; ++c)
                s[c] = (1.0 - frac) * trace.samples[k][c] + frac * trace.samples[k + 1][c];
        }
        out.samples.push_back(s);
    }
    return out;
}

enum class DriveScenario : std::uint8_t { Idle, City, Highway };

inline constexpr std::string_view name(DriveScenario s) {
    switch (s) {
        case DriveScenario::Idle: return "idle";
        case DriveScenario::City: return "city";
        case DriveScenario::Highway: return "highway";
    }
    return "?";
}

inline DriveScenario parse_scenario(std::string_view s) {
    if (s == "idle") return DriveScenario::Idle;
    if (s == "city") return DriveScenario::City;
    if (s == "highway") return DriveScenario::Highway;
    throw ParseFail("unknown scenario: '" + std::string(s) + "'");
}

/// Per-compartment environment used by the synthetic generators. The
/// vibration levels are calibrated so the default harvester settings land on
/// the reported per-compartment mean powers; temperatures come from the
/// coolant-pipe / transmission / rear-pillar measurement points.
struct CompartmentEnv {
    double vibration_rms_g = 0.0;   ///< vertical RMS target, city scenario
    double thermal_delta_t_c = 0.0; ///< hot-minus-ambient steady state, city
    double thermal_tau_s = 120.0;   ///< first-order warm-up constant
    double ambient_c = 25.0;
};

inline CompartmentEnv default_env(Compartment c) {
    switch (c) {
        case Compartment::Engine: return {1.38, 40.0, 120.0, 25.0};
        case Compartment::Chassis: return {0.84, 14.0, 180.0, 25.0};
        case Compartment::Passenger: return {0.265, 2.0, 90.0, 25.0};
    }
    return {};
}

namespace detail {

inline double scenario_vibration_scale(DriveScenario s) {
    switch (s) {
        case DriveScenario::Idle: return 0.35;
        case DriveScenario::City: return 1.0;
        case DriveScenario::Highway: return 1.3;
    }
    return 1.0;
}

inline double scenario_thermal_scale(DriveScenario s) {
    switch (s) {
        case DriveScenario::Idle: return 0.8;
        case DriveScenario::City: return 1.0;
        case DriveScenario::Highway: return 1.1;
    }
    return 1.0;
}

/// Dominant firing frequency of a 4-cylinder engine at typical RPM.
inline double scenario_firing_hz(DriveScenario s) {
    switch (s) {
        case DriveScenario::Idle: return 27.0;
        case DriveScenario::City: return 67.0;
        case DriveScenario::Highway: return 100.0;
    }
    return 67.0;
}

/// Seeded generator; distributions are hand-rolled so traces are identical
/// across standard libraries.
class SynthRng {
  public:
    SynthRng(std::uint64_t seed, Compartment c, DriveScenario s)
        : rng_(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(c) * 131 +
               static_cast<std::uint64_t>(s) * 65537 + 1) {}

    double uniform01() {  // [0, 1)
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::mt19937_64 rng_;
};

}  // namespace detail

/// Synthetic gravity-inclusive 3-axis acceleration: engine-order harmonics
/// plus band-limited noise, deterministic for a given seed.
inline Trace synth_accel(DriveScenario scenario, Compartment compartment, double duration_s,
                         std::uint64_t seed, double rate_hz = 1000.0,
                         const CompartmentEnv* env = nullptr) {
    if (!(duration_s > 0.0)) throw ConfigError("duration must be > 0");
    if (!(rate_hz > 0.0)) throw ConfigError("sample rate must be > 0");
    const CompartmentEnv e = env ? *env : default_env(compartment);

    const double g = kGravityMps2;
    const double v_rms = e.vibration_rms_g * detail::scenario_vibration_scale(scenario) * g;
    const double f0 = detail::scenario_firing_hz(scenario);
    const double a1 = v_rms * 0.8 * std::sqrt(2.0);
    const double a2 = v_rms * 0.35 * std::sqrt(2.0);
    const double noise_sigma = v_rms * 0.45;
    const double alpha = 0.15;  // one-pole smoothing of the white component
    const double drive_sigma = noise_sigma / std::sqrt(alpha / 2.0);
    const double lat = 0.35;

    detail::SynthRng rng(seed, compartment, scenario);
    const double ph1 = rng.uniform01() * 6.283185307179586;
    const double ph2 = rng.uniform01() * 6.283185307179586;
    const double ph3 = rng.uniform01() * 6.283185307179586;
    const double ph4 = rng.uniform01() * 6.283185307179586;

    Trace t;
    t.kind = TraceKind::Accel3Axis;
    t.sample_rate_hz = rate_hz;
    t.compartment = compartment;
    t.label = std::string("synth-accel-") + std::string(name(scenario)) + "-" +
              std::string(name(compartment));
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    t.samples.reserve(n);
    double nx = 0.0, ny = 0.0, nz = 0.0;
    const double dt = 1.0 / rate_hz;
    const double two_pi = 6.283185307179586;
    for (std::size_t i = 0; i < n; ++i) {
        const double time = static_cast<double>(i) * dt;
        nz = (1.0 - alpha) * nz + alpha * rng.gaussian() * drive_sigma;
        nx = (1.0 - alpha) * nx + alpha * rng.gaussian() * drive_sigma * lat;
        ny = (1.0 - alpha) * ny + alpha * rng.gaussian() * drive_sigma * lat;
        const double az = g + a1 * std::sin(two_pi * f0 * time + ph1) +
                          a2 * std::sin(two_pi * 2.0 * f0 * time + ph2) + nz;
        const double ax = lat * a1 * std::sin(two_pi * f0 * time + ph3) + nx;
        const double ay = lat * a2 * std::sin(two_pi * 2.0 * f0 * time + ph4) + ny;
        t.samples.push_back({ax, ay, az});
    }
    return t;
}

/// Synthetic hot/ambient temperature pair: first-order warm-up of the
/// gradient toward the per-compartment steady state.
inline Trace synth_temps(DriveScenario scenario, Compartment compartment, double duration_s,
                         double rate_hz = 1.0, const CompartmentEnv* env = nullptr) {
    if (!(duration_s > 0.0)) throw ConfigError("duration must be > 0");
    if (!(rate_hz > 0.0)) throw ConfigError("sample rate must be > 0");
    const CompartmentEnv e = env ? *env : default_env(compartment);

    const double dt_ss = e.thermal_delta_t_c * detail::scenario_thermal_scale(scenario);
    Trace t;
    t.kind = TraceKind::TempPair;
    t.sample_rate_hz = rate_hz;
    t.compartment = compartment;
    t.label = std::string("synth-temps-") + std::string(name(scenario)) + "-" +
              std::string(name(compartment));
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    t.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double time = static_cast<double>(i) / rate_hz;
        const double delta = dt_ss * (1.0 - std::exp(-time / e.thermal_tau_s));
        t.samples.push_back({e.ambient_c + delta, e.ambient_c, 0.0});
    }
    return t;
}

}  // namespace ivwsn
