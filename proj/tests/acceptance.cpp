// Acceptance suite: runs every toolkit-level criterion at its stated
// tolerance and prints one [PASS]/[FAIL] line per criterion. Exits nonzero
// if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ivwsn/channel.hpp"
#include "ivwsn/config.hpp"
#include "ivwsn/feasibility.hpp"
#include "ivwsn/harvest.hpp"
#include "ivwsn/pipeline.hpp"
#include "ivwsn/trace.hpp"

namespace fs = std::filesystem;
using namespace ivwsn;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ------------------------------------------------------------- criterion 1

void sinr_identities(Check& c) {
    const auto start = Clock::now();
    const Config cfg;
    PenetrationTable pen0;
    for (Technology t : all_technologies)
        for (Compartment comp : all_compartments) pen0.min_penetration_db[{t, comp}] = 0.0;

    TechnologyProfile p;
    p.tech = Technology::Band2_4GHz;
    p.eirp_dbm = 0.0;
    p.noise_floor_dbm = -84.0;
    p.nb_suppression = true;
    p.max_rate_kbps = 1.0;
    Link link{"l", Compartment::Engine, 1.0, true, {}};
    link.measured_path_loss_db = 50.0;
    const PathLossModel pl{Technology::Band2_4GHz, Compartment::Engine, true, 0.0, 2.0, 0.01};

    // zero interference: SINR == SNR to 1e-9 dB
    const double snr = worst_case_sinr(p, link, pl, {0.0, true, {}}, pen0);
    c.require(std::abs(snr - 34.0) < 1e-9, "zero-interference SINR != SNR");

    // interference equal to noise: penalty is 10*log10(2) +- 1e-9 dB
    const double equal = worst_case_sinr(p, link, pl, {-84.0, false, {}}, pen0);
    c.require(std::abs((snr - equal) - 10.0 * std::log10(2.0)) < 1e-9,
              "equal-power penalty != 10*log10(2)");

    // monotone non-increasing over a 100-point distance sweep
    for (Technology t : all_technologies) {
        for (Compartment comp : all_compartments) {
            for (bool los : {true, false}) {
                const auto& model = cfg.path_loss.at(t, comp, los);
                double prev = 1e300;
                for (int i = 0; i < 100; ++i) {
                    const double d = 0.01 * std::pow(300.0, i / 99.0);
                    Link sweep_link{"x", comp, d, los, {}};
                    const double s = worst_case_sinr(cfg.profiles.at(t), sweep_link, model,
                                                     cfg.interference.at(t), cfg.penetration);
                    if (s > prev + 1e-12) {
                        c.require(false, "SINR not monotone in distance");
                        break;
                    }
                    prev = s;
                }
            }
        }
    }
    c.require(seconds_since(start) < 1.0, "runtime exceeded 1 s");
}

// ------------------------------------------------------------- criterion 2

void fig3_ordering(Check& c) {
    const auto start = Clock::now();
    const Config cfg;
    const auto links = default_link_set();

    auto sinr_of = [&](Technology t, const Link& link, bool force_unsuppressed) {
        InterferenceScenario s = cfg.interference.at(t);
        if (force_unsuppressed) s.suppressed = false;
        return worst_case_sinr(cfg.profiles.at(t), link,
                               cfg.path_loss.at(t, link.compartment, link.los), s,
                               cfg.penetration);
    };

    // (a) engine LoS links at d <= 0.2 m rank mmWave first
    for (const Link& l : links) {
        if (l.compartment != Compartment::Engine || !l.los || l.distance_m > 0.2) continue;
        const double mm = sinr_of(Technology::MmWave, l, false);
        c.require(mm > sinr_of(Technology::Uwb, l, false) &&
                      mm > sinr_of(Technology::Band2_4GHz, l, false),
                  "mmWave not first on engine LoS link " + l.id);
    }

    // (b) NLoS links in every compartment rank UWB first
    for (const Link& l : links) {
        if (l.los) continue;
        const double uwb = sinr_of(Technology::Uwb, l, false);
        c.require(uwb > sinr_of(Technology::MmWave, l, false) &&
                      uwb > sinr_of(Technology::Band2_4GHz, l, false),
                  "UWB not first on NLoS link " + l.id);
    }

    // (c) suppression off: 2.4 GHz lowest for >= 90% of default links
    std::size_t lowest = 0;
    for (const Link& l : links) {
        const double b24 = sinr_of(Technology::Band2_4GHz, l, true);
        if (b24 < sinr_of(Technology::Uwb, l, true) &&
            b24 < sinr_of(Technology::MmWave, l, true))
            ++lowest;
    }
    c.require(static_cast<double>(lowest) >= 0.9 * static_cast<double>(links.size()),
              "2.4 GHz lowest on only " + std::to_string(lowest) + "/" +
                  std::to_string(links.size()) + " links");
    c.require(seconds_since(start) < 5.0, "runtime exceeded 5 s");
}

// ------------------------------------------------------------- criterion 3

void rfeh_windows(Check& c) {
    const auto curves = default_rfeh_curves();
    c.require(rfeh_power_mw(curves.at(Technology::Band2_4GHz), -20.0 - 1e-9) == 0.0,
              "2.4 GHz not zero below -20 dBm");
    c.require(rfeh_power_mw(curves.at(Technology::Uwb), -36.0 - 1e-9) == 0.0,
              "UWB not zero below -36 dBm");
    c.require(rfeh_power_mw(curves.at(Technology::MmWave), 2.0 - 1e-9) == 0.0,
              "mmWave not zero below +2 dBm");

    const double top = rfeh_power_mw(curves.at(Technology::Band2_4GHz), 18.0);
    c.require(std::abs(top - 25.24) / 25.24 < 0.005,
              "2.4 GHz at 18 dBm = " + format_double(top) + " mW, want 25.24 +- 0.5%");

    for (Technology tech : all_technologies) {
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double p_in = -60.0 + 0.09 * static_cast<double>(i);
            const double out = rfeh_power_mw(curves.at(tech), p_in);
            if (out < prev - 1e-15) {
                c.require(false, "rfeh not monotone for " + std::string(name(tech)));
                break;
            }
            prev = out;
        }
    }
}

// ------------------------------------------------------------- criterion 4

void quadratic_laws(Check& c) {
    EmhConfig emh;
    emh.subtract_gravity = false;
    Trace base;
    base.kind = TraceKind::Accel3Axis;
    base.sample_rate_hz = 1000.0;
    Trace twice = base;
    for (int i = 0; i < 4000; ++i) {
        const double a = 3.1 * std::sin(0.21 * i) + 1.2 * std::cos(0.05 * i);
        base.samples.push_back({0.0, 0.0, a});
        twice.samples.push_back({0.0, 0.0, 2.0 * a});
    }
    const double ratio =
        emh_power(emh, twice).summary.mean_mw / emh_power(emh, base).summary.mean_mw;
    c.require(std::abs(ratio - 4.0) < 1e-6,
              "EMH 2x-amplitude ratio = " + format_double(ratio));

    TegConfig teg;
    Trace grads;
    grads.kind = TraceKind::TempPair;
    grads.sample_rate_hz = 1.0;
    grads.samples = {{45.0, 25.0, 0.0}, {65.0, 25.0, 0.0}};  // 20 K and 40 K
    const auto teg_series = teg_power(teg, grads);
    const double teg_ratio = teg_series.power_mw[1] / teg_series.power_mw[0];
    c.require(std::abs(teg_ratio - 4.0) < 1e-9,
              "TEG 2x-gradient ratio = " + format_double(teg_ratio));

    Trace cold;
    cold.kind = TraceKind::TempPair;
    cold.sample_rate_hz = 1.0;
    cold.samples.assign(60, {27.0, 25.0, 0.0});  // constant 2 degC
    const auto cold_series = teg_power(teg, cold);
    c.require(cold_series.summary.peak_mw == 0.0, "TEG not zero at 2 degC gradient");
}

// ------------------------------------------------------------- criterion 5

void calibrated_defaults(Check& c) {
    const Config cfg;
    const auto links = default_link_set();
    const std::uint64_t seed = 42;
    const double duration = 600.0;  // 10 minutes at 1 kHz

    const auto start = Clock::now();
    const std::vector<std::string> all{"rf", "vibration", "thermal"};
    const auto engine = run_synthetic_harvest(cfg, Compartment::Engine, DriveScenario::City,
                                              duration, seed, all, links);
    const auto passenger = run_synthetic_harvest(cfg, Compartment::Passenger, DriveScenario::City,
                                                 duration, seed, all, links);
    const auto rows =
        sweep_links(links, cfg.profiles, cfg.path_loss, cfg.interference, cfg.penetration);
    std::map<Compartment, PowerSeries> supplies;
    supplies.emplace(Compartment::Engine, engine.combined);
    supplies.emplace(Compartment::Passenger, passenger.combined);
    supplies.emplace(Compartment::Chassis,
                     run_synthetic_harvest(cfg, Compartment::Chassis, DriveScenario::City,
                                           duration, seed, all, links)
                         .combined);
    build_report(cfg.requirements, rows, supplies, cfg.profiles, cfg.policy);
    const double elapsed = seconds_since(start);

    double vib_mean = 0.0, thermal_steady = 0.0;
    for (const PowerSeries& s : engine.sources) {
        if (s.source == "vibration") vib_mean = s.summary.mean_mw;
        if (s.source == "thermal") {
            const std::size_t tail = s.size() / 10;
            double acc = 0.0;
            for (std::size_t i = s.size() - tail; i < s.size(); ++i) acc += s.power_mw[i];
            thermal_steady = acc / static_cast<double>(tail);
        }
    }
    c.require(vib_mean >= 1.0 && vib_mean <= 10.0,
              "engine vibration mean = " + format_double(vib_mean) + " mW, want [1, 10]");
    c.require(std::abs(thermal_steady - 4.0) <= 1.0,
              "engine thermal steady state = " + format_double(thermal_steady) +
                  " mW, want 4 +- 1");

    double non_rf = 0.0;
    for (const PowerSeries& s : passenger.sources)
        if (s.source != "rf") non_rf += s.summary.mean_mw;
    c.require(non_rf < 1.0,
              "passenger non-RF supply = " + format_double(non_rf) + " mW, want < 1");
    c.require(elapsed < 10.0,
              "pipeline took " + format_double(elapsed) + " s, want < 10");
}

// ------------------------------------------------------------- criterion 6

void feasibility_engine(Check& c) {
    const Config cfg;
    const auto links = default_link_set();
    const auto rows =
        sweep_links(links, cfg.profiles, cfg.path_loss, cfg.interference, cfg.penetration);
    const auto supplies = synthetic_supplies(cfg, DriveScenario::City, 60.0, 42, links);

    NodeRequirement node;
    node.domain = FunctionalDomain::EngineDomain;
    node.compartment = Compartment::Engine;
    node.rate_kbps = {10.0, 1000.0};
    node.security_reliability = SecurityLevel::High;

    node.power_mw = 5.0;
    const auto ok = build_report({node}, rows, supplies, cfg.profiles, cfg.policy);
    c.require(ok.front().overall, "engine node at 5 mW not feasible");

    node.power_mw = 100.0;
    const auto bad = build_report({node}, rows, supplies, cfg.profiles, cfg.policy);
    c.require(!bad.front().overall && !bad.front().power_verdict.feasible,
              "engine node at 100 mW not infeasible");

    // monotonicity over randomized (supply, demand) pairs
    std::mt19937_64 rng(2024);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < 1000; ++i) {
        const double supply = uniform(0.0, 25.0);
        const double demand = uniform(0.0, 25.0);
        const double bump = uniform(0.0, 10.0);
        const auto mk = [&](double mean) { return constant_series("s", mean, 1.0, 0.0, 4); };
        if (power_feasible(demand, mk(supply), 0.0).feasible) {
            if (!power_feasible(demand, mk(supply + bump), 0.0).feasible ||
                !power_feasible(std::max(0.0, demand - bump), mk(supply), 0.0).feasible) {
                c.require(false, "monotonicity violated at supply=" + format_double(supply) +
                                     " demand=" + format_double(demand));
                break;
            }
        }
    }
}

// ------------------------------------------------------------- criterion 7

namespace ode_oracle {

// independent fine-step integrator, written apart from the library path
double mean_raw_power_w(const EmhConfig& cfg, double freq, double amp, double duration,
                        double dt) {
    const double m = cfg.mass_kg, c = cfg.mech_damping_ns_per_m + cfg.em_damping_ns_per_m;
    const double k1 = cfg.stiffness_linear_n_per_m, k3 = cfg.stiffness_cubic_n_per_m3;
    double z = 0.0, v = 0.0, acc = 0.0;
    const auto n = static_cast<std::size_t>(duration / dt);
    auto drive = [&](double t) { return amp * std::sin(6.283185307179586 * freq * t); };
    auto f = [&](double zz, double vv, double a) {
        return (-c * vv - k1 * zz - k3 * zz * zz * zz - m * a) / m;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        acc += cfg.em_damping_ns_per_m * v * v;
        const double k1z = v, k1v = f(z, v, drive(t));
        const double k2z = v + 0.5 * dt * k1v,
                     k2v = f(z + 0.5 * dt * k1z, v + 0.5 * dt * k1v, drive(t + 0.5 * dt));
        const double k3z = v + 0.5 * dt * k2v,
                     k3v = f(z + 0.5 * dt * k2z, v + 0.5 * dt * k2v, drive(t + 0.5 * dt));
        const double k4z = v + dt * k3v, k4v = f(z + dt * k3z, v + dt * k3v, drive(t + dt));
        z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return acc / static_cast<double>(n);
}

}  // namespace ode_oracle

void ode_sanity(Check& c) {
    EmhConfig cfg;
    cfg.mode = EmhMode::OscillatorOde;
    cfg.subtract_gravity = false;
    cfg.use_magnitude = false;  // signed single-axis drive, matching the oracle
    const double f0 = std::sqrt(cfg.stiffness_linear_n_per_m / cfg.mass_kg) / 6.283185307179586;
    const double amp = 0.5, duration = 30.0, rate = 1000.0;

    auto drive_trace = [&](double freq) {
        Trace t;
        t.kind = TraceKind::Accel3Axis;
        t.sample_rate_hz = rate;
        const auto n = static_cast<std::size_t>(duration * rate);
        for (std::size_t i = 0; i < n; ++i) {
            const double time = static_cast<double>(i) / rate;
            t.samples.push_back({0.0, 0.0, amp * std::sin(6.283185307179586 * freq * time)});
        }
        return t;
    };

    EmhConfig dead = cfg;
    dead.em_damping_ns_per_m = 0.0;
    const auto silent = emh_power(dead, drive_trace(f0));
    c.require(silent.summary.peak_mw == 0.0, "zero-c_e oscillator produced power");

    const auto on = emh_power(cfg, drive_trace(f0));
    const auto off = emh_power(cfg, drive_trace(3.0 * f0));
    c.require(on.summary.mean_mw > off.summary.mean_mw,
              "on-resonance not greater than off-resonance");

    const double oracle_on = 1000.0 * cfg.processing_efficiency *
                             ode_oracle::mean_raw_power_w(cfg, f0, amp, duration, 5e-5);
    const double oracle_off = 1000.0 * cfg.processing_efficiency *
                              ode_oracle::mean_raw_power_w(cfg, 3.0 * f0, amp, duration, 5e-5);
    c.require(std::abs(on.summary.mean_mw - oracle_on) / oracle_on < 0.02,
              "on-resonance power off the fine-step oracle by > 2%");
    c.require(std::abs(off.summary.mean_mw - oracle_off) / oracle_off < 0.02,
              "off-resonance power off the fine-step oracle by > 2%");
}

// ------------------------------------------------------------- criterion 8

int run_cli(const std::string& args) {
    const std::string cmd = std::string(IVWSN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void io_determinism(Check& c) {
    // library-level trace round trip
    const Trace t = synth_accel(DriveScenario::City, Compartment::Engine, 1.0, 9);
    std::ostringstream first;
    write_trace(t, first);
    const fs::path tmp = fs::temp_directory_path() / "ivwsn_accept_trace.csv";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << first.str();
    }
    const Trace parsed = parse_trace(tmp.string(), TraceKind::Accel3Axis);
    std::ostringstream second;
    write_trace(parsed, second);
    c.require(first.str() == second.str(), "trace CSV round trip not byte-identical");

    // CLI-level rerun determinism
    const fs::path root = fs::temp_directory_path() / "ivwsn_accept_cli";
    fs::remove_all(root);
    const fs::path a = root / "a", b = root / "b";
    for (const fs::path& dir : {a, b}) {
        c.require(run_cli("--seed 7 --out-dir " + dir.string() + " linkbudget") == 0,
                  "linkbudget run failed");
        c.require(run_cli("--seed 7 --out-dir " + dir.string() +
                          " harvest --compartment engine --duration 5") == 0,
                  "harvest run failed");
        c.require(run_cli("--seed 7 --out-dir " + dir.string() +
                          " feasibility --duration 5") == 0,
                  "feasibility run failed");
        c.require(run_cli("--seed 7 --out-dir " + dir.string() +
                          " synth --kind accel --compartment engine --duration 1") == 0,
                  "synth run failed");
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const fs::path other = b / entry.path().filename();
        c.require(fs::exists(other), "missing rerun output " + other.string());
        if (fs::exists(other)) {
            ++compared;
            if (slurp(entry.path()) != slurp(other))
                c.require(false, "rerun output differs: " + entry.path().filename().string());
        }
    }
    c.require(compared >= 10, "expected at least 10 output files to compare");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Check&)> fn;
    };
    const std::vector<Criterion> criteria{
        {"SINR identities (1e-9 dB) and distance monotonicity, < 1 s", sinr_identities},
        {"qualitative SINR ordering: engine-LoS mmWave, NLoS UWB, 2.4 GHz lowest", fig3_ordering},
        {"RFEH sensitivity windows and monotone response", rfeh_windows},
        {"quadratic power laws for vibration and thermal harvesters", quadratic_laws},
        {"calibrated synthetic defaults and < 10 s full pipeline", calibrated_defaults},
        {"feasibility verdicts at 5/100 mW and supply/demand monotonicity", feasibility_engine},
        {"oscillator ODE sanity against a fine-step oracle (2%)", ode_sanity},
        {"byte-identical trace round trip and CLI reruns", io_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check check;
        try {
            criterion.fn(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (check.ok ? "[PASS] " : "[FAIL] ") << criterion.name;
        if (!check.ok) {
            std::cout << " -- " << check.detail.str();
            ++failures;
        }
        std::cout << "\n";
    }
    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(failures) + " criteria FAILED")
              << "\n";
    return failures == 0 ? 0 : 1;
}
