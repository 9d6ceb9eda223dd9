#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "ivwsn/csv.hpp"
#include "ivwsn/errors.hpp"
#include "ivwsn/trace.hpp"
#include "ivwsn/types.hpp"
#include "ivwsn/units.hpp"

namespace ivwsn {

/// Rectenna efficiency window for one band: zero output below sensitivity,
/// efficiency interpolated linearly in dBm across the window, clamped outside.
struct RfehCurve {
    Technology tech = Technology::Band2_4GHz;
    double sensitivity_dbm = 0.0;
    double window_low_dbm = 0.0;
    double window_high_dbm = 0.0;
    double eta_low = 0.0;
    double eta_high = 0.0;
};

/// Reported state-of-the-art harvester windows per band. mmWave has only a
/// peak figure, modeled as constant efficiency above its sensitivity.
inline std::map<Technology, RfehCurve> default_rfeh_curves() {
    std::map<Technology, RfehCurve> m;
    m[Technology::Band2_4GHz] = {Technology::Band2_4GHz, -20.0, -10.0, 18.0, 0.115, 0.40};
    m[Technology::Uwb] = {Technology::Uwb, -36.0, -36.0, -25.0, 0.05, 0.10};
    m[Technology::MmWave] = {Technology::MmWave, 2.0, 2.0, 2.0, 0.12, 0.12};
    return m;
}

/// Harvested DC power for a given RF input power.
inline double rfeh_power_mw(const RfehCurve& curve, double p_in_dbm) {
    if (p_in_dbm < curve.sensitivity_dbm) return 0.0;
    double eta;
    if (p_in_dbm <= curve.window_low_dbm) {
        eta = curve.eta_low;
    } else if (p_in_dbm >= curve.window_high_dbm) {
        eta = curve.eta_high;
    } else {
        const double frac =
            (p_in_dbm - curve.window_low_dbm) / (curve.window_high_dbm - curve.window_low_dbm);
        eta = curve.eta_low + frac * (curve.eta_high - curve.eta_low);
    }
    return eta * dbm_to_mw(p_in_dbm);
}

enum class EmhMode : std::uint8_t {
    QuadraticTransfer,  ///< raw power proportional to squared input acceleration
    OscillatorOde,      ///< Duffing-type magnet-coil oscillator, integrated per sample
};

/// Magnet-coil vibration harvester parameters.
struct EmhConfig {
    double mass_kg = 0.02;
    double stiffness_linear_n_per_m = 80.0;
    double stiffness_cubic_n_per_m3 = 1.0e6;
    double mech_damping_ns_per_m = 0.05;
    double em_damping_ns_per_m = 0.10;
    double processing_efficiency = 0.50;  ///< power-electronics conversion factor
    EmhMode mode = EmhMode::QuadraticTransfer;
    double k_mw_per_g2 = 5.0;          ///< quadratic-transfer gain
    double excursion_limit_m = 0.05;   ///< ODE trip point
    bool use_magnitude = true;         ///< Euclidean |a| vs. vertical axis only
    bool subtract_gravity = true;      ///< traces are gravity-inclusive by default
};

/// Thermoelectric generator parameters.
struct TegConfig {
    double k_teg_mw_per_k2 = 8.333e-3;  ///< calibrated: 40 degC gradient -> ~4 mW useful
    double min_delta_t_k = 10.0;
    double processing_efficiency = 0.30;
};

struct PowerSummary {
    double mean_mw = 0.0;
    double peak_mw = 0.0;
    double energy_mj = 0.0;
};

/// Uniformly sampled harvested-power series with its summary statistics.
struct PowerSeries {
    std::string source;
    double sample_rate_hz = 0.0;
    double t0_s = 0.0;
    std::vector<double> power_mw;
    PowerSummary summary;

    std::size_t size() const { return power_mw.size(); }
    double dt_s() const { return 1.0 / sample_rate_hz; }
};

/// Mean, peak and trapezoidal energy integral of a series.
inline PowerSummary summarize(const PowerSeries& series) {
    if (series.power_mw.empty()) throw EmptySeries("cannot summarize an empty power series");
    PowerSummary s;
    s.peak_mw = *std::max_element(series.power_mw.begin(), series.power_mw.end());
    const double sum = std::accumulate(series.power_mw.begin(), series.power_mw.end(), 0.0);
    s.mean_mw = sum / static_cast<double>(series.size());
    if (series.size() >= 2) {
        // mW * s == mJ
        s.energy_mj =
            series.dt_s() * (sum - 0.5 * (series.power_mw.front() + series.power_mw.back()));
    }
    return s;
}

inline PowerSeries finalize(PowerSeries series) {
    series.summary = summarize(series);
    return series;
}

/// Constant-power series aligned to a reference trace's grid (used for the
/// static worst-case RF harvest level).
inline PowerSeries constant_series(const std::string& source, double power_mw, double rate_hz,
                                   double t0_s, std::size_t n) {
    PowerSeries s;
    s.source = source;
    s.sample_rate_hz = rate_hz;
    s.t0_s = t0_s;
    s.power_mw.assign(n, power_mw);
    return finalize(std::move(s));
}

namespace detail {

/// Harvester drive acceleration in m/s^2 from one trace sample.
inline double drive_accel(const EmhConfig& cfg, const std::array<double, 3>& s) {
    const double grav = cfg.subtract_gravity ? kGravityMps2 : 0.0;
    if (cfg.use_magnitude)
        return std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]) - grav;
    return s[2] - grav;
}

}  // namespace detail

/// Useful electrical power from the vibration harvester driven by an
/// acceleration trace.
///
/// QuadraticTransfer: raw(t) = k * a(t)^2 with a in g.
/// OscillatorOde: integrates m z'' + (c_m + c_e) z' + k1 z + k3 z^3 = -m a(t)
/// with fixed-step RK4 at the trace rate; raw(t) = c_e * z'(t)^2.
inline PowerSeries emh_power(const EmhConfig& cfg, const Trace& accel) {
    if (accel.kind != TraceKind::Accel3Axis)
        throw NonUniformTrace("vibration harvester needs an acceleration trace");
    validate_trace(accel);
    if (!(cfg.processing_efficiency > 0.0 && cfg.processing_efficiency <= 1.0))
        throw ConfigError("processing efficiency must be in (0, 1]");

    PowerSeries out;
    out.source = "vibration";
    out.sample_rate_hz = accel.sample_rate_hz;
    out.t0_s = accel.t0_s;
    out.power_mw.reserve(accel.size());

    if (cfg.mode == EmhMode::QuadraticTransfer) {
        for (const auto& s : accel.samples) {
            const double a_g = detail::drive_accel(cfg, s) / kGravityMps2;
            out.power_mw.push_back(cfg.processing_efficiency * cfg.k_mw_per_g2 * a_g * a_g);
        }
        return finalize(std::move(out));
    }

    if (!(cfg.mass_kg > 0.0) || !(cfg.stiffness_linear_n_per_m > 0.0) ||
        !(cfg.stiffness_cubic_n_per_m3 > 0.0) || !(cfg.mech_damping_ns_per_m > 0.0))
        throw ConfigError("oscillator constants must be > 0");

    std::vector<double> a(accel.size());
    for (std::size_t i = 0; i < accel.size(); ++i)
        a[i] = detail::drive_accel(cfg, accel.samples[i]);

    const double dt = accel.dt_s();
    const double m = cfg.mass_kg;
    const double c = cfg.mech_damping_ns_per_m + cfg.em_damping_ns_per_m;
    const double k1 = cfg.stiffness_linear_n_per_m;
    const double k3 = cfg.stiffness_cubic_n_per_m3;
    const double ce = cfg.em_damping_ns_per_m;

    double z = 0.0, v = 0.0;
    auto accel_at = [&](std::size_t i, double frac) {
        if (i + 1 >= a.size()) return a.back();
        return (1.0 - frac) * a[i] + frac * a[i + 1];
    };
    auto rhs = [&](double zz, double vv, double drive) {
        return (-c * vv - k1 * zz - k3 * zz * zz * zz - m * drive) / m;
    };
    for (std::size_t i = 0; i < accel.size(); ++i) {
        out.power_mw.push_back(1000.0 * cfg.processing_efficiency * ce * v * v);
        if (i + 1 == accel.size()) break;
        const double a0 = accel_at(i, 0.0);
        const double ah = accel_at(i, 0.5);
        const double a1 = accel_at(i, 1.0);
        const double k1z = v, k1v = rhs(z, v, a0);
        const double k2z = v + 0.5 * dt * k1v, k2v = rhs(z + 0.5 * dt * k1z, v + 0.5 * dt * k1v, ah);
        const double k3z = v + 0.5 * dt * k2v, k3v = rhs(z + 0.5 * dt * k2z, v + 0.5 * dt * k2v, ah);
        const double k4z = v + dt * k3v, k4v = rhs(z + dt * k3z, v + dt * k3v, a1);
        z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!std::isfinite(z) || std::abs(z) > cfg.excursion_limit_m)
            throw UnstableIntegration("oscillator displacement exceeded " +
                                      format_double(cfg.excursion_limit_m) + " m at t=" +
                                      format_double(accel.time_at(i + 1)) + " s");
    }
    return finalize(std::move(out));
}

/// Useful electrical power from the thermoelectric generator driven by a
/// hot/ambient temperature trace. Gradients below the minimum usable
/// difference produce zero output.
inline PowerSeries teg_power(const TegConfig& cfg, const Trace& temps) {
    if (temps.kind != TraceKind::TempPair)
        throw NonUniformTrace("thermal harvester needs a temperature-pair trace");
    validate_trace(temps);

    PowerSeries out;
    out.source = "thermal";
    out.sample_rate_hz = temps.sample_rate_hz;
    out.t0_s = temps.t0_s;
    out.power_mw.reserve(temps.size());
    for (const auto& s : temps.samples) {
        const double delta = s[0] - s[1];
        out.power_mw.push_back(delta >= cfg.min_delta_t_k
                                   ? cfg.processing_efficiency * cfg.k_teg_mw_per_k2 * delta * delta
                                   : 0.0);
    }
    return finalize(std::move(out));
}

/// Pointwise sum of co-sampled series. The result's source joins the input
/// names with '+'.
inline PowerSeries combine_sources(const std::vector<PowerSeries>& series_list) {
    if (series_list.empty()) throw EmptySeries("nothing to combine");
    const PowerSeries& first = series_list.front();
    PowerSeries out;
    out.sample_rate_hz = first.sample_rate_hz;
    out.t0_s = first.t0_s;
    out.power_mw.assign(first.size(), 0.0);
    for (const PowerSeries& s : series_list) {
        if (s.sample_rate_hz != first.sample_rate_hz || s.t0_s != first.t0_s ||
            s.size() != first.size())
            throw TimestampMismatch("power series '" + s.source + "' is not co-sampled with '" +
                                    first.source + "'");
        out.source += (out.source.empty() ? "" : "+") + s.source;
        for (std::size_t i = 0; i < s.size(); ++i) out.power_mw[i] += s.power_mw[i];
    }
    return finalize(std::move(out));
}

inline void write_power_csv(const PowerSeries& series, std::ostream& out) {
    out << "t_s,power_mw\n";
    const double dt = series.dt_s();
    for (std::size_t i = 0; i < series.size(); ++i)
        out << format_double(series.t0_s + static_cast<double>(i) * dt) << ','
            << format_double(series.power_mw[i]) << '\n';
}

}  // namespace ivwsn
