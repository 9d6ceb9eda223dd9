#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivwsn/channel.hpp"
#include "ivwsn/errors.hpp"
#include "ivwsn/harvest.hpp"
#include "ivwsn/profiles.hpp"
#include "ivwsn/types.hpp"

namespace ivwsn {

/// Active/sleep alternation of a node.
struct DutyCycleModel {
    double active_power_mw = 0.0;
    double sleep_power_mw = 0.0;
    double duty = 1.0;  ///< fraction of time active, in [0, 1]
};

inline double average_power_mw(const DutyCycleModel& m) {
    if (m.duty < 0.0 || m.duty > 1.0) throw ConfigError("duty must be in [0, 1]");
    return m.duty * m.active_power_mw + (1.0 - m.duty) * m.sleep_power_mw;
}

/// SINR pass/fail policy. There is no standard packet-loss-vs-SINR mapping
/// for these bands; the defaults are conventional detection margins,
/// configurable, and flagged as policy in every report.
struct FeasibilityPolicy {
    double sinr_threshold_high_db = 10.0;
    double sinr_threshold_low_db = 3.0;
    double supply_margin = 0.0;  ///< required fractional headroom of supply over demand
    bool strict_instantaneous = false;  ///< require min power >= demand instead of mean
};

struct PowerVerdict {
    double supply_mean_mw = 0.0;
    double demand_mw = 0.0;
    bool feasible = false;
    std::vector<std::string> contributing_sources;
};

/// Storage smooths harvest peaks, so the default predicate compares the mean
/// supply against demand (plus margin); strict mode compares the minimum.
inline PowerVerdict power_feasible(double demand_mw, const PowerSeries& supply, double margin,
                                   bool strict_instantaneous = false) {
    if (margin < 0.0) throw ConfigError("supply margin must be >= 0");
    PowerVerdict v;
    v.demand_mw = demand_mw;
    v.supply_mean_mw = supply.summary.mean_mw;
    const double available =
        strict_instantaneous
            ? *std::min_element(supply.power_mw.begin(), supply.power_mw.end())
            : supply.summary.mean_mw;
    v.feasible = available >= demand_mw * (1.0 + margin);
    std::string cur;
    for (char ch : supply.source) {
        if (ch == '+') {
            v.contributing_sources.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) v.contributing_sources.push_back(cur);
    return v;
}

struct TechVerdict {
    Technology tech = Technology::Band2_4GHz;
    double worst_sinr_db = 0.0;
    bool rate_ok = false;
    bool sinr_ok = false;
};

struct CommVerdict {
    std::vector<TechVerdict> per_tech;
    std::optional<Technology> chosen_tech;
    std::string worst_link_id;
};

namespace detail {

/// Conservative link choice: the longest NLoS link in the compartment,
/// falling back to the longest link of any kind.
inline const Link* worst_link(const std::vector<SinrRow>& rows, Compartment c,
                              const std::optional<std::string>& pinned_id) {
    const Link* best = nullptr;
    for (const SinrRow& r : rows) {
        if (r.link.compartment != c) continue;
        if (pinned_id) {
            if (r.link.id == *pinned_id) return &r.link;
            continue;
        }
        if (!best) {
            best = &r.link;
            continue;
        }
        const bool cand_nlos = !r.link.los, best_nlos = !best->los;
        if (cand_nlos != best_nlos) {
            if (cand_nlos) best = &r.link;
        } else if (r.link.distance_m > best->distance_m) {
            best = &r.link;
        }
    }
    return best;
}

}  // namespace detail

/// Per-technology communication verdict for one node against a SINR sweep.
/// rate_ok compares the transceiver peak rate with the requirement interval
/// maximum; sinr_ok applies the security-level threshold at the node's worst
/// link.
inline CommVerdict comm_feasible(const NodeRequirement& node, const std::vector<SinrRow>& sinr_table,
                                 const std::map<Technology, TechnologyProfile>& profiles,
                                 const FeasibilityPolicy& policy,
                                 const std::optional<std::string>& pinned_link_id = std::nullopt) {
    const Link* link = detail::worst_link(sinr_table, node.compartment, pinned_link_id);
    if (!link)
        throw NoLinksForCompartment("no links in compartment '" +
                                    std::string(name(node.compartment)) + "'" +
                                    (pinned_link_id ? " matching link id '" + *pinned_link_id + "'"
                                                    : ""));
    const double threshold = node.security_reliability == SecurityLevel::High
                                 ? policy.sinr_threshold_high_db
                                 : policy.sinr_threshold_low_db;
    CommVerdict verdict;
    verdict.worst_link_id = link->id;
    for (Technology tech : all_technologies) {
        TechVerdict tv;
        tv.tech = tech;
        bool found = false;
        for (const SinrRow& r : sinr_table) {
            if (r.tech == tech && r.link.id == link->id) {
                tv.worst_sinr_db = r.sinr_db;
                found = true;
                break;
            }
        }
        if (!found)
            throw MissingModel("sweep table has no entry for link '" + link->id + "' and " +
                               std::string(name(tech)));
        tv.rate_ok = profiles.at(tech).max_rate_kbps >= node.rate_kbps.max_kbps;
        tv.sinr_ok = tv.worst_sinr_db >= threshold;
        verdict.per_tech.push_back(tv);
    }
    const TechVerdict* best = nullptr;
    for (const TechVerdict& tv : verdict.per_tech)
        if (tv.rate_ok && (!best || tv.worst_sinr_db > best->worst_sinr_db)) best = &tv;
    if (best) verdict.chosen_tech = best->tech;
    return verdict;
}

struct FeasibilityReport {
    NodeRequirement node;
    Compartment compartment = Compartment::Engine;
    PowerVerdict power_verdict;
    CommVerdict comm_verdict;
    bool overall = false;
};

/// One report per node, in input order. `supplies` maps each compartment to
/// its combined harvested-power series.
inline std::vector<FeasibilityReport> build_report(
    const std::vector<NodeRequirement>& nodes, const std::vector<SinrRow>& sinr_table,
    const std::map<Compartment, PowerSeries>& supplies,
    const std::map<Technology, TechnologyProfile>& profiles, const FeasibilityPolicy& policy) {
    std::vector<FeasibilityReport> reports;
    reports.reserve(nodes.size());
    for (const NodeRequirement& node : nodes) {
        FeasibilityReport r;
        r.node = node;
        r.compartment = node.compartment;
        auto it = supplies.find(node.compartment);
        if (it == supplies.end())
            throw MissingTableEntry("no supply series for compartment '" +
                                    std::string(name(node.compartment)) + "'");
        r.power_verdict =
            power_feasible(node.power_mw, it->second, policy.supply_margin,
                           policy.strict_instantaneous);
        r.comm_verdict = comm_feasible(node, sinr_table, profiles, policy);
        bool comm_ok = false;
        for (const TechVerdict& tv : r.comm_verdict.per_tech)
            comm_ok = comm_ok || (tv.rate_ok && tv.sinr_ok);
        r.overall = r.power_verdict.feasible && comm_ok;
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace ivwsn
