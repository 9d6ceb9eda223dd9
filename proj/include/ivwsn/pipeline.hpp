#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivwsn/channel.hpp"
#include "ivwsn/config.hpp"
#include "ivwsn/csv.hpp"
#include "ivwsn/feasibility.hpp"
#include "ivwsn/harvest.hpp"
#include "ivwsn/profiles.hpp"
#include "ivwsn/trace.hpp"
#include "ivwsn/types.hpp"

namespace ivwsn {

using ordered_json = nlohmann::ordered_json;

/// RFEH input power for a compartment, chosen from its link set per the
/// configured policy (median/best/worst path loss at the harvest band).
inline double rf_supply_input_dbm(const Config& cfg, const std::vector<Link>& links,
                                  Compartment compartment) {
    std::vector<double> losses;
    for (const Link& l : links) {
        if (l.compartment != compartment) continue;
        if (l.measured_path_loss_db) {
            losses.push_back(*l.measured_path_loss_db);
        } else {
            losses.push_back(
                path_loss(cfg.path_loss.at(cfg.rf_supply.tech, compartment, l.los), l.distance_m));
        }
    }
    if (losses.empty())
        throw NoLinksForCompartment("no links in compartment '" +
                                    std::string(name(compartment)) + "' for RF harvest");
    std::sort(losses.begin(), losses.end());
    double loss = 0.0;
    switch (cfg.rf_supply.link_policy) {
        case RfLinkPolicy::Best: loss = losses.front(); break;
        case RfLinkPolicy::Worst: loss = losses.back(); break;
        case RfLinkPolicy::Median: {
            const std::size_t n = losses.size();
            loss = (n % 2) ? losses[n / 2] : 0.5 * (losses[n / 2 - 1] + losses[n / 2]);
            break;
        }
    }
    const double src = cfg.rf_supply.source_eirp_dbm ? *cfg.rf_supply.source_eirp_dbm
                                                     : cfg.profiles.at(cfg.rf_supply.tech).eirp_dbm;
    return src - loss;
}

struct HarvestResult {
    std::vector<PowerSeries> sources;
    PowerSeries combined;
    std::vector<std::string> notes;
};

/// Linear-interpolation resample of a power series onto a given grid.
inline PowerSeries resample_power(const PowerSeries& s, double rate_hz, double t0_s,
                                  std::size_t n) {
    if (s.sample_rate_hz == rate_hz && s.t0_s == t0_s && s.size() == n) return s;
    if (s.size() < 2) throw EmptySeries("cannot resample a series with fewer than 2 samples");
    PowerSeries out;
    out.source = s.source;
    out.sample_rate_hz = rate_hz;
    out.t0_s = t0_s;
    out.power_mw.reserve(n);
    const double last = static_cast<double>(s.size() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0_s + static_cast<double>(i) / rate_hz;
        const double pos = std::clamp((t - s.t0_s) * s.sample_rate_hz, 0.0, last);
        std::size_t k = static_cast<std::size_t>(pos);
        if (k >= s.size() - 1) k = s.size() - 2;
        const double frac = pos - static_cast<double>(k);
        out.power_mw.push_back((1.0 - frac) * s.power_mw[k] + frac * s.power_mw[k + 1]);
    }
    return finalize(std::move(out));
}

inline bool wants_source(const std::vector<std::string>& sources, const std::string& s) {
    return std::find(sources.begin(), sources.end(), s) != sources.end();
}

/// Runs the selected harvesters for one compartment on synthetic traces and
/// the given link set, all on the acceleration-trace grid.
inline HarvestResult run_synthetic_harvest(const Config& cfg, Compartment compartment,
                                           DriveScenario scenario, double duration_s,
                                           std::uint64_t seed,
                                           const std::vector<std::string>& sources,
                                           const std::vector<Link>& links) {
    HarvestResult result;
    const double rate = cfg.synth.accel_rate_hz;
    const CompartmentEnv& env = cfg.environments.at(compartment);
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));

    if (wants_source(sources, "vibration")) {
        const Trace accel = synth_accel(scenario, compartment, duration_s, seed, rate, &env);
        result.sources.push_back(emh_power(cfg.emh, accel));
    }
    if (wants_source(sources, "thermal")) {
        const Trace temps = synth_temps(scenario, compartment, duration_s, rate, &env);
        PowerSeries thermal = teg_power(cfg.teg, temps);
        if (thermal.summary.peak_mw == 0.0)
            result.notes.push_back("thermal: gradient stays below the minimum usable "
                                   "difference; thermal harvesting is not feasible in " +
                                   std::string(name(compartment)));
        result.sources.push_back(std::move(thermal));
    }
    if (wants_source(sources, "rf")) {
        const double p_in = rf_supply_input_dbm(cfg, links, compartment);
        const double p_mw = rfeh_power_mw(cfg.rfeh.at(cfg.rf_supply.tech), p_in);
        result.sources.push_back(constant_series("rf", p_mw, rate, 0.0, n));
        if (p_mw == 0.0)
            result.notes.push_back("rf: input power below harvester sensitivity in " +
                                   std::string(name(compartment)));
    }
    if (result.sources.empty()) throw ConfigError("no harvest sources selected");
    result.combined = combine_sources(result.sources);
    return result;
}

/// Combined supply per compartment for the feasibility pipeline.
inline std::map<Compartment, PowerSeries> synthetic_supplies(const Config& cfg,
                                                             DriveScenario scenario,
                                                             double duration_s, std::uint64_t seed,
                                                             const std::vector<Link>& links) {
    std::map<Compartment, PowerSeries> supplies;
    const std::vector<std::string> all{"rf", "vibration", "thermal"};
    for (Compartment c : all_compartments)
        supplies.emplace(
            c, run_synthetic_harvest(cfg, c, scenario, duration_s, seed, all, links).combined);
    return supplies;
}

/// Reads `domain,compartment,power_mw,rate_min_kbps,rate_max_kbps,security`.
inline std::vector<NodeRequirement> nodes_from_csv(const std::string& path) {
    CsvReader reader(path);
    reader.expect_header(
        {"domain", "compartment", "power_mw", "rate_min_kbps", "rate_max_kbps", "security"});
    std::vector<NodeRequirement> nodes;
    std::vector<std::string> f;
    while (reader.next_row(f)) {
        const std::size_t row = reader.row();
        if (f.size() != 6) throw ParseFail("expected 6 fields, got " + std::to_string(f.size()), row);
        try {
            NodeRequirement n;
            n.domain = parse_domain(f[0]);
            n.compartment = parse_compartment(f[1]);
            n.power_mw = parse_double_field(f[2], row);
            n.rate_kbps.min_kbps = parse_double_field(f[3], row);
            n.rate_kbps.max_kbps = parse_double_field(f[4], row);
            n.security_reliability = parse_security(f[5]);
            if (n.rate_kbps.min_kbps > n.rate_kbps.max_kbps)
                throw ParseFail("rate_min_kbps exceeds rate_max_kbps", row);
            nodes.push_back(n);
        } catch (const ParseFail& e) {
            throw e.row() ? e : ParseFail(e.what(), row);
        }
    }
    return nodes;
}

inline ordered_json sweep_to_json(const std::vector<SinrRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const SinrRow& r : rows) {
        arr.push_back({{"link_id", r.link.id},
                       {"compartment", name(r.link.compartment)},
                       {"distance_m", r.link.distance_m},
                       {"los", r.link.los},
                       {"tech", name(r.tech)},
                       {"sinr_db", r.sinr_db}});
    }
    return arr;
}

inline ordered_json summary_to_json(const PowerSummary& s) {
    return {{"mean_mw", s.mean_mw}, {"peak_mw", s.peak_mw}, {"energy_mj", s.energy_mj}};
}

inline ordered_json harvest_to_json(const HarvestResult& r, Compartment compartment,
                                    const std::string& scenario_label) {
    ordered_json doc;
    doc["compartment"] = name(compartment);
    doc["scenario"] = scenario_label;
    ordered_json sources = ordered_json::object();
    for (const PowerSeries& s : r.sources) sources[s.source] = summary_to_json(s.summary);
    doc["sources"] = sources;
    doc["combined"] = summary_to_json(r.combined.summary);
    doc["notes"] = r.notes;
    return doc;
}

/// JSON array of per-node reports. Each element carries the active SINR
/// policy so the thresholds are visible (and flagged as policy) in every
/// exported verdict.
inline ordered_json report_to_json(const std::vector<FeasibilityReport>& reports,
                                   const FeasibilityPolicy& policy) {
    const ordered_json policy_block = {
        {"sinr_threshold_high_db", policy.sinr_threshold_high_db},
        {"sinr_threshold_low_db", policy.sinr_threshold_low_db},
        {"supply_margin", policy.supply_margin},
        {"strict_instantaneous", policy.strict_instantaneous},
        {"note", "SINR thresholds are configurable policy, not measured values"}};
    ordered_json arr = ordered_json::array();
    for (const FeasibilityReport& r : reports) {
        ordered_json per_tech = ordered_json::array();
        for (const TechVerdict& tv : r.comm_verdict.per_tech)
            per_tech.push_back({{"tech", name(tv.tech)},
                                {"worst_sinr_db", tv.worst_sinr_db},
                                {"rate_ok", tv.rate_ok},
                                {"sinr_ok", tv.sinr_ok}});
        ordered_json node = {{"domain", name(r.node.domain)},
                             {"compartment", name(r.node.compartment)},
                             {"power_mw", r.node.power_mw},
                             {"rate_min_kbps", r.node.rate_kbps.min_kbps},
                             {"rate_max_kbps", r.node.rate_kbps.max_kbps},
                             {"security", name(r.node.security_reliability)}};
        ordered_json comm = {{"per_tech", per_tech},
                             {"worst_link_id", r.comm_verdict.worst_link_id}};
        comm["chosen_tech"] =
            r.comm_verdict.chosen_tech ? ordered_json(name(*r.comm_verdict.chosen_tech))
                                       : ordered_json(nullptr);
        arr.push_back({{"node", node},
                       {"power_verdict",
                        {{"supply_mean_mw", r.power_verdict.supply_mean_mw},
                         {"demand_mw", r.power_verdict.demand_mw},
                         {"feasible", r.power_verdict.feasible},
                         {"contributing_sources", r.power_verdict.contributing_sources}}},
                       {"comm_verdict", comm},
                       {"overall", r.overall},
                       {"policy", policy_block}});
    }
    return arr;
}

/// Fixed-width console table of the per-node verdicts.
inline void print_report_table(const std::vector<FeasibilityReport>& reports,
                               const FeasibilityPolicy& policy, std::ostream& out) {
    out << "domain            compartment  demand_mw  supply_mw  power  best_tech  "
           "worst_sinr_db  comm   overall\n";
    for (const FeasibilityReport& r : reports) {
        char line[200];
        std::string best = "-";
        double best_sinr = 0.0;
        bool comm_ok = false;
        for (const TechVerdict& tv : r.comm_verdict.per_tech) {
            comm_ok = comm_ok || (tv.rate_ok && tv.sinr_ok);
            if (r.comm_verdict.chosen_tech && tv.tech == *r.comm_verdict.chosen_tech) {
                best = std::string(display_name(tv.tech));
                best_sinr = tv.worst_sinr_db;
            }
        }
        std::snprintf(line, sizeof line, "%-17s %-12s %9.3f %10.3f  %-5s  %-9s %14.2f  %-5s  %s",
                      std::string(name(r.node.domain)).c_str(),
                      std::string(name(r.compartment)).c_str(), r.node.power_mw,
                      r.power_verdict.supply_mean_mw, r.power_verdict.feasible ? "ok" : "FAIL",
                      best.c_str(), best_sinr, comm_ok ? "ok" : "FAIL",
                      r.overall ? "FEASIBLE" : "infeasible");
        out << line << '\n';
    }
    out << "SINR thresholds (policy, configurable): high=" << format_double(policy.sinr_threshold_high_db)
        << " dB, low=" << format_double(policy.sinr_threshold_low_db) << " dB\n";
}

}  // namespace ivwsn
