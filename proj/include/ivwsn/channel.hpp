#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ivwsn/csv.hpp"
#include "ivwsn/errors.hpp"
#include "ivwsn/profiles.hpp"
#include "ivwsn/types.hpp"
#include "ivwsn/units.hpp"

namespace ivwsn {

/// Log-distance path loss relative to a 1 cm reference.
struct PathLossModel {
    Technology tech = Technology::Band2_4GHz;
    Compartment compartment = Compartment::Engine;
    bool los = true;
    double pl0_db = 0.0;    ///< loss at the reference distance
    double exponent = 2.0;  ///< n >= 0
    double reference_distance_m = 0.01;
};

/// Loss at distance d: pl0 + 10 n log10(d / d_r).
inline double path_loss(const PathLossModel& model, double d_m) {
    if (d_m < model.reference_distance_m)
        throw DistanceBelowReference("distance " + format_double(d_m) +
                                     " m below reference distance " +
                                     format_double(model.reference_distance_m) + " m");
    return model.pl0_db + 10.0 * model.exponent * std::log10(d_m / model.reference_distance_m);
}

inline double received_power(const TechnologyProfile& profile, double loss_db) {
    return profile.eirp_dbm - loss_db;
}

/// Path-loss models keyed by (technology, compartment, LoS).
class PathLossTable {
  public:
    void set(const PathLossModel& m) { models_[key(m.tech, m.compartment, m.los)] = m; }

    const PathLossModel* find(Technology t, Compartment c, bool los) const {
        auto it = models_.find(key(t, c, los));
        return it == models_.end() ? nullptr : &it->second;
    }

    const PathLossModel& at(Technology t, Compartment c, bool los) const {
        const PathLossModel* m = find(t, c, los);
        if (!m)
            throw MissingModel("no path-loss model for (" + std::string(name(t)) + ", " +
                               std::string(name(c)) + ", " + (los ? "los" : "nlos") + ")");
        return *m;
    }

    /// Calibration defaults. Intercepts approximate free-space loss at 1 cm
    /// per carrier (2.4 / ~4.5 / 60 GHz); NLoS adds a blockage intercept that
    /// grows with frequency, and exponents keep mmWave the fastest-attenuating
    /// band. Values are config, not measurements.
    static PathLossTable defaults() {
        PathLossTable t;
        struct Row {
            Technology tech;
            Compartment comp;
            bool los;
            double pl0, n;
        };
        const Row rows[] = {
            {Technology::Band2_4GHz, Compartment::Engine, true, 0.5, 2.3},
            {Technology::Band2_4GHz, Compartment::Chassis, true, 0.5, 2.3},
            {Technology::Band2_4GHz, Compartment::Passenger, true, 0.5, 2.2},
            {Technology::Band2_4GHz, Compartment::Engine, false, 12.0, 2.6},
            {Technology::Band2_4GHz, Compartment::Chassis, false, 12.0, 2.6},
            {Technology::Band2_4GHz, Compartment::Passenger, false, 12.0, 2.4},
            {Technology::Uwb, Compartment::Engine, true, 5.5, 2.0},
            {Technology::Uwb, Compartment::Chassis, true, 5.5, 2.0},
            {Technology::Uwb, Compartment::Passenger, true, 5.5, 1.9},
            {Technology::Uwb, Compartment::Engine, false, 18.0, 2.2},
            {Technology::Uwb, Compartment::Chassis, false, 18.0, 1.7},
            {Technology::Uwb, Compartment::Passenger, false, 18.0, 1.9},
            {Technology::MmWave, Compartment::Engine, true, 28.0, 2.7},
            {Technology::MmWave, Compartment::Chassis, true, 28.0, 2.7},
            {Technology::MmWave, Compartment::Passenger, true, 28.0, 2.7},
            {Technology::MmWave, Compartment::Engine, false, 70.0, 3.4},
            {Technology::MmWave, Compartment::Chassis, false, 70.0, 3.4},
            {Technology::MmWave, Compartment::Passenger, false, 70.0, 3.3},
        };
        for (const Row& r : rows) t.set({r.tech, r.comp, r.los, r.pl0, r.n, 0.01});
        return t;
    }

  private:
    static std::tuple<int, int, int> key(Technology t, Compartment c, bool los) {
        return {static_cast<int>(t), static_cast<int>(c), los ? 1 : 0};
    }
    std::map<std::tuple<int, int, int>, PathLossModel> models_;
};

/// Minimum penetration loss an external interferer suffers entering a
/// compartment, per technology.
struct PenetrationTable {
    std::map<std::pair<Technology, Compartment>, double> min_penetration_db;

    double at(Technology t, Compartment c) const {
        auto it = min_penetration_db.find({t, c});
        if (it == min_penetration_db.end())
            throw MissingTableEntry("no penetration entry for (" + std::string(name(t)) +
                                    ", " + std::string(name(c)) + ")");
        return it->second;
    }

    /// Calibration defaults: 2.4 GHz passes through glass almost unattenuated,
    /// UWB slightly less so, mmWave is blocked by the body shell.
    static PenetrationTable defaults() {
        PenetrationTable p;
        p.min_penetration_db = {
            {{Technology::Band2_4GHz, Compartment::Engine}, 1.5},
            {{Technology::Band2_4GHz, Compartment::Chassis}, 1.0},
            {{Technology::Band2_4GHz, Compartment::Passenger}, 2.0},
            {{Technology::Uwb, Compartment::Engine}, 9.5},
            {{Technology::Uwb, Compartment::Chassis}, 9.0},
            {{Technology::Uwb, Compartment::Passenger}, 10.0},
            {{Technology::MmWave, Compartment::Engine}, 130.0},
            {{Technology::MmWave, Compartment::Chassis}, 120.0},
            {{Technology::MmWave, Compartment::Passenger}, 110.0},
        };
        return p;
    }
};

/// Single dominant external interferer; multiple interferers pre-sum into an
/// equivalent EIRP.
struct InterferenceScenario {
    double interferer_eirp_dbm = 0.0;
    bool suppressed = false;  ///< only meaningful for nb_suppression profiles
    /// When set, suppression leaves a residual: interference is attenuated by
    /// this many dB instead of being removed outright.
    std::optional<double> residual_suppression_db;
};

/// Worst-case interference at the receiver, or nullopt when suppression
/// removes the narrowband term entirely.
inline std::optional<double> interference_power(const InterferenceScenario& scenario,
                                                const PenetrationTable& pen, Technology tech,
                                                Compartment compartment) {
    const double base = scenario.interferer_eirp_dbm - pen.at(tech, compartment);
    if (scenario.suppressed) {
        if (scenario.residual_suppression_db)
            return base - *scenario.residual_suppression_db;
        return std::nullopt;
    }
    return base;
}

/// Default worst case per technology: interferer at the band's own EIRP
/// limit; suppression active wherever the profile supports it.
inline std::map<Technology, InterferenceScenario> default_scenarios(
    const std::map<Technology, TechnologyProfile>& profiles) {
    std::map<Technology, InterferenceScenario> s;
    for (const auto& [tech, p] : profiles)
        s[tech] = {p.eirp_dbm, p.nb_suppression, std::nullopt};
    return s;
}

/// Worst-case SINR for one link. A measured path loss on the link overrides
/// the model. Noise and interference are summed in linear milliwatts.
inline double worst_case_sinr(const TechnologyProfile& profile, const Link& link,
                              const PathLossModel& pl_model,
                              const InterferenceScenario& scenario,
                              const PenetrationTable& pen) {
    const double loss_db = link.measured_path_loss_db ? *link.measured_path_loss_db
                                                      : path_loss(pl_model, link.distance_m);
    const double p_rx_dbm = received_power(profile, loss_db);
    const std::optional<double> i_dbm =
        interference_power(scenario, pen, profile.tech, link.compartment);
    if (!i_dbm) return p_rx_dbm - profile.noise_floor_dbm;
    const double total_mw = dbm_to_mw(profile.noise_floor_dbm) + dbm_to_mw(*i_dbm);
    return p_rx_dbm - linear_to_db(total_mw);
}

/// One sweep result row.
struct SinrRow {
    Link link;
    Technology tech = Technology::Band2_4GHz;
    double sinr_db = 0.0;
};

/// Dense (link x technology) worst-case SINR table, ordered by
/// (compartment, distance, link id, technology).
inline std::vector<SinrRow> sweep_links(const std::vector<Link>& links,
                                        const std::map<Technology, TechnologyProfile>& profiles,
                                        const PathLossTable& pl_models,
                                        const std::map<Technology, InterferenceScenario>& scenarios,
                                        const PenetrationTable& pen) {
    std::vector<Link> ordered = links;
    std::sort(ordered.begin(), ordered.end(), [](const Link& a, const Link& b) {
        return std::tuple(static_cast<int>(a.compartment), a.distance_m, a.id) <
               std::tuple(static_cast<int>(b.compartment), b.distance_m, b.id);
    });
    std::vector<SinrRow> rows;
    rows.reserve(ordered.size() * all_technologies.size());
    for (const Link& link : ordered) {
        for (Technology tech : all_technologies) {
            const TechnologyProfile& profile = profiles.at(tech);
            const InterferenceScenario& scenario = scenarios.at(tech);
            const PathLossModel* model = pl_models.find(tech, link.compartment, link.los);
            if (!model && !link.measured_path_loss_db)
                throw MissingModel("no path-loss model for (" + std::string(name(tech)) + ", " +
                                   std::string(name(link.compartment)) + ", " +
                                   (link.los ? "los" : "nlos") + ") required by link '" +
                                   link.id + "'");
            static const PathLossModel kUnused{};
            rows.push_back(
                {link, tech, worst_case_sinr(profile, link, model ? *model : kUnused, scenario, pen)});
        }
    }
    return rows;
}

/// Reads `id,compartment,distance_m,los,path_loss_db` (last column may be empty).
inline std::vector<Link> links_from_csv(const std::string& path) {
    CsvReader reader(path);
    reader.expect_header({"id", "compartment", "distance_m", "los", "path_loss_db"});
    std::vector<Link> links;
    std::vector<std::string> f;
    while (reader.next_row(f)) {
        const std::size_t row = reader.row();
        if (f.size() != 5) throw ParseFail("expected 5 fields, got " + std::to_string(f.size()), row);
        Link link;
        link.id = f[0];
        link.compartment = [&] {
            try {
                return parse_compartment(f[1]);
            } catch (const ParseFail& e) {
                throw ParseFail(e.what(), row);
            }
        }();
        link.distance_m = parse_double_field(f[2], row);
        if (link.distance_m <= 0.0) throw ParseFail("distance_m must be > 0", row);
        if (f[3] == "1" || f[3] == "true")
            link.los = true;
        else if (f[3] == "0" || f[3] == "false")
            link.los = false;
        else
            throw ParseFail("los must be 0/1/true/false, got '" + f[3] + "'", row);
        if (!f[4].empty()) link.measured_path_loss_db = parse_double_field(f[4], row);
        links.push_back(std::move(link));
    }
    return links;
}

inline void write_links_csv(const std::vector<Link>& links, std::ostream& out) {
    out << "id,compartment,distance_m,los,path_loss_db\n";
    for (const Link& l : links) {
        out << l.id << ',' << name(l.compartment) << ',' << format_double(l.distance_m) << ','
            << (l.los ? 1 : 0) << ','
            << (l.measured_path_loss_db ? format_double(*l.measured_path_loss_db) : "") << '\n';
    }
}

inline void write_sweep_csv(const std::vector<SinrRow>& rows, std::ostream& out) {
    out << "link_id,compartment,distance_m,los,tech,sinr_db\n";
    for (const SinrRow& r : rows) {
        out << r.link.id << ',' << name(r.link.compartment) << ','
            << format_double(r.link.distance_m) << ',' << (r.link.los ? 1 : 0) << ','
            << name(r.tech) << ',' << format_double(r.sinr_db) << '\n';
    }
}

/// Representative link geometry per compartment: short, partly-obstructed
/// engine links; longer cabin links; chassis mostly NLoS.
inline std::vector<Link> default_link_set() {
    std::vector<Link> links;
    auto add = [&](Compartment c, const char* prefix, std::initializer_list<double> los_d,
                   std::initializer_list<double> nlos_d) {
        int i = 0;
        for (double d : los_d)
            links.push_back({std::string(prefix) + "-los-" + std::to_string(++i), c, d, true, {}});
        i = 0;
        for (double d : nlos_d)
            links.push_back({std::string(prefix) + "-nlos-" + std::to_string(++i), c, d, false, {}});
    };
    add(Compartment::Engine, "eng", {0.05, 0.08, 0.12, 0.18, 0.3, 0.5},
        {0.15, 0.25, 0.4, 0.6, 0.8, 1.0});
    add(Compartment::Chassis, "cha", {0.3, 0.6, 1.0, 1.5}, {0.5, 0.9, 1.4, 2.0, 2.6, 3.2});
    add(Compartment::Passenger, "pas", {0.5, 0.7, 0.9, 1.2, 1.5}, {0.8, 1.1, 1.4, 1.8});
    return links;
}

}  // namespace ivwsn
