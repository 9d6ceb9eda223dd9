#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivwsn/channel.hpp"
#include "ivwsn/errors.hpp"
#include "ivwsn/feasibility.hpp"
#include "ivwsn/harvest.hpp"
#include "ivwsn/profiles.hpp"
#include "ivwsn/trace.hpp"
#include "ivwsn/types.hpp"

namespace ivwsn {

/// How the per-compartment RF-harvest input power is chosen from the link set.
enum class RfLinkPolicy : std::uint8_t {
    Median,  ///< median path loss over the compartment's links
    Best,    ///< minimum path loss (strongest signal)
    Worst,   ///< maximum path loss
};

struct RfSupplyConfig {
    Technology tech = Technology::Band2_4GHz;
    /// RF source EIRP seen by the harvester; the band's profile EIRP when unset.
    std::optional<double> source_eirp_dbm;
    RfLinkPolicy link_policy = RfLinkPolicy::Median;
};

struct SynthRates {
    double accel_rate_hz = 1000.0;
    double temp_rate_hz = 1.0;
};

/// Whole-toolkit parameter set. Every constant has a built-in default that a
/// partial JSON config can override; omitted fields keep their defaults.
struct Config {
    std::map<Technology, TechnologyProfile> profiles = default_profiles();
    std::vector<NodeRequirement> requirements = requirement_registry();
    std::map<Compartment, CompartmentEnv> environments = {
        {Compartment::Engine, default_env(Compartment::Engine)},
        {Compartment::Chassis, default_env(Compartment::Chassis)},
        {Compartment::Passenger, default_env(Compartment::Passenger)},
    };
    PathLossTable path_loss = PathLossTable::defaults();
    PenetrationTable penetration = PenetrationTable::defaults();
    std::map<Technology, InterferenceScenario> interference =
        default_scenarios(default_profiles());
    std::map<Technology, RfehCurve> rfeh = default_rfeh_curves();
    EmhConfig emh;
    TegConfig teg;
    RfSupplyConfig rf_supply;
    FeasibilityPolicy policy;
    SynthRates synth;

    static Config from_json(const nlohmann::json& doc);
    static Config load(const std::string& path);
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                       const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

inline double get_num(const nlohmann::json& obj, const char* key, double fallback,
                      const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
    return obj.at(key).get<double>();
}

inline bool get_bool(const nlohmann::json& obj, const char* key, bool fallback,
                     const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
    return obj.at(key).get<bool>();
}

inline std::string get_str(const nlohmann::json& obj, const char* key, const std::string& fallback,
                           const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
    return obj.at(key).get<std::string>();
}

inline void parse_technologies(const nlohmann::json& sec, Config& cfg) {
    check_keys(sec, {"band2_4ghz", "uwb", "mmwave"}, "technologies");
    for (const auto& [key, body] : sec.items()) {
        const Technology tech = parse_technology(key);
        const std::string where = "technologies." + key;
        check_keys(body,
                   {"eirp_dbm", "antenna_gain_dbi", "noise_floor_dbm", "max_rate_kbps",
                    "nb_suppression", "transceiver_power_mw"},
                   where);
        TechnologyProfile& p = cfg.profiles.at(tech);
        p.eirp_dbm = get_num(body, "eirp_dbm", p.eirp_dbm, where);
        p.antenna_gain_dbi = get_num(body, "antenna_gain_dbi", p.antenna_gain_dbi, where);
        p.noise_floor_dbm = get_num(body, "noise_floor_dbm", p.noise_floor_dbm, where);
        p.max_rate_kbps = get_num(body, "max_rate_kbps", p.max_rate_kbps, where);
        p.nb_suppression = get_bool(body, "nb_suppression", p.nb_suppression, where);
        p.transceiver_power_mw =
            get_num(body, "transceiver_power_mw", p.transceiver_power_mw, where);
        if (!(p.max_rate_kbps > 0.0)) throw ConfigError(where + ".max_rate_kbps must be > 0");
    }
}

inline void parse_requirements(const nlohmann::json& sec, Config& cfg) {
    if (!sec.is_array()) throw ConfigError("requirements must be an array");
    std::vector<NodeRequirement> reqs;
    std::size_t idx = 0;
    for (const auto& body : sec) {
        const std::string where = "requirements[" + std::to_string(idx++) + "]";
        check_keys(body,
                   {"domain", "compartment", "power_mw", "rate_min_kbps", "rate_max_kbps",
                    "security"},
                   where);
        NodeRequirement r;
        r.domain = parse_domain(get_str(body, "domain", "", where));
        r.compartment = parse_compartment(get_str(body, "compartment", "", where));
        r.power_mw = get_num(body, "power_mw", 0.0, where);
        r.rate_kbps.min_kbps = get_num(body, "rate_min_kbps", 0.0, where);
        r.rate_kbps.max_kbps = get_num(body, "rate_max_kbps", 0.0, where);
        r.security_reliability = parse_security(get_str(body, "security", "", where));
        if (r.rate_kbps.min_kbps > r.rate_kbps.max_kbps)
            throw ConfigError(where + ": rate_min_kbps exceeds rate_max_kbps");
        if (r.power_mw < 0.0) throw ConfigError(where + ": power_mw must be >= 0");
        reqs.push_back(r);
    }
    cfg.requirements = std::move(reqs);
}

inline void parse_compartments(const nlohmann::json& sec, Config& cfg) {
    check_keys(sec, {"engine", "chassis", "passenger"}, "compartments");
    for (const auto& [key, body] : sec.items()) {
        const Compartment comp = parse_compartment(key);
        const std::string where = "compartments." + key;
        check_keys(body, {"vibration_rms_g", "thermal_delta_t_c", "thermal_tau_s", "ambient_c"},
                   where);
        CompartmentEnv& e = cfg.environments.at(comp);
        e.vibration_rms_g = get_num(body, "vibration_rms_g", e.vibration_rms_g, where);
        e.thermal_delta_t_c = get_num(body, "thermal_delta_t_c", e.thermal_delta_t_c, where);
        e.thermal_tau_s = get_num(body, "thermal_tau_s", e.thermal_tau_s, where);
        e.ambient_c = get_num(body, "ambient_c", e.ambient_c, where);
        if (e.vibration_rms_g < 0.0) throw ConfigError(where + ".vibration_rms_g must be >= 0");
        if (!(e.thermal_tau_s > 0.0)) throw ConfigError(where + ".thermal_tau_s must be > 0");
    }
}

inline void parse_channel(const nlohmann::json& sec, Config& cfg) {
    check_keys(sec, {"reference_distance_m", "path_loss", "penetration_db", "interference"},
               "channel");
    const double ref_d = get_num(sec, "reference_distance_m", 0.01, "channel");
    if (!(ref_d > 0.0)) throw ConfigError("channel.reference_distance_m must be > 0");
    if (ref_d != 0.01) {
        PathLossTable rescaled;
        for (Technology t : all_technologies)
            for (Compartment c : all_compartments)
                for (bool los : {true, false}) {
                    PathLossModel m = cfg.path_loss.at(t, c, los);
                    m.reference_distance_m = ref_d;
                    rescaled.set(m);
                }
        cfg.path_loss = rescaled;
    }
    if (sec.contains("path_loss")) {
        const auto& arr = sec.at("path_loss");
        if (!arr.is_array()) throw ConfigError("channel.path_loss must be an array");
        std::size_t idx = 0;
        for (const auto& body : arr) {
            const std::string where = "channel.path_loss[" + std::to_string(idx++) + "]";
            check_keys(body, {"tech", "compartment", "los", "pl0_db", "exponent"}, where);
            PathLossModel m;
            m.tech = parse_technology(get_str(body, "tech", "", where));
            m.compartment = parse_compartment(get_str(body, "compartment", "", where));
            if (!body.contains("los") || !body.at("los").is_boolean())
                throw ConfigError(where + ".los must be a boolean");
            m.los = body.at("los").get<bool>();
            const PathLossModel* prev = cfg.path_loss.find(m.tech, m.compartment, m.los);
            m.pl0_db = get_num(body, "pl0_db", prev ? prev->pl0_db : 0.0, where);
            m.exponent = get_num(body, "exponent", prev ? prev->exponent : 2.0, where);
            m.reference_distance_m = ref_d;
            if (m.exponent < 0.0) throw ConfigError(where + ".exponent must be >= 0");
            cfg.path_loss.set(m);
        }
    }
    if (sec.contains("penetration_db")) {
        const auto& pen = sec.at("penetration_db");
        check_keys(pen, {"band2_4ghz", "uwb", "mmwave"}, "channel.penetration_db");
        for (const auto& [tkey, comps] : pen.items()) {
            const Technology tech = parse_technology(tkey);
            const std::string where = "channel.penetration_db." + tkey;
            check_keys(comps, {"engine", "chassis", "passenger"}, where);
            for (const auto& [ckey, val] : comps.items()) {
                if (!val.is_number()) throw ConfigError(where + "." + ckey + " must be a number");
                const double v = val.get<double>();
                if (v < 0.0) throw ConfigError(where + "." + ckey + " must be >= 0");
                cfg.penetration.min_penetration_db[{tech, parse_compartment(ckey)}] = v;
            }
        }
    }
    if (sec.contains("interference")) {
        const auto& intf = sec.at("interference");
        check_keys(intf, {"band2_4ghz", "uwb", "mmwave"}, "channel.interference");
        for (const auto& [tkey, body] : intf.items()) {
            const Technology tech = parse_technology(tkey);
            const std::string where = "channel.interference." + tkey;
            check_keys(body, {"interferer_eirp_dbm", "suppressed", "residual_suppression_db"},
                       where);
            InterferenceScenario& s = cfg.interference.at(tech);
            s.interferer_eirp_dbm =
                get_num(body, "interferer_eirp_dbm", s.interferer_eirp_dbm, where);
            s.suppressed = get_bool(body, "suppressed", s.suppressed, where);
            if (body.contains("residual_suppression_db")) {
                const auto& r = body.at("residual_suppression_db");
                if (r.is_null())
                    s.residual_suppression_db.reset();
                else if (r.is_number())
                    s.residual_suppression_db = r.get<double>();
                else
                    throw ConfigError(where + ".residual_suppression_db must be a number or null");
            }
        }
    }
}

inline void parse_harvest(const nlohmann::json& sec, Config& cfg) {
    check_keys(sec, {"rfeh", "emh", "teg", "rf_supply"}, "harvest");
    if (sec.contains("rfeh")) {
        const auto& rf = sec.at("rfeh");
        check_keys(rf, {"band2_4ghz", "uwb", "mmwave"}, "harvest.rfeh");
        for (const auto& [tkey, body] : rf.items()) {
            const Technology tech = parse_technology(tkey);
            const std::string where = "harvest.rfeh." + tkey;
            check_keys(body,
                       {"sensitivity_dbm", "window_low_dbm", "window_high_dbm", "eta_low",
                        "eta_high"},
                       where);
            RfehCurve& c = cfg.rfeh.at(tech);
            c.sensitivity_dbm = get_num(body, "sensitivity_dbm", c.sensitivity_dbm, where);
            c.window_low_dbm = get_num(body, "window_low_dbm", c.window_low_dbm, where);
            c.window_high_dbm = get_num(body, "window_high_dbm", c.window_high_dbm, where);
            c.eta_low = get_num(body, "eta_low", c.eta_low, where);
            c.eta_high = get_num(body, "eta_high", c.eta_high, where);
            if (!(0.0 <= c.eta_low && c.eta_low <= c.eta_high && c.eta_high <= 1.0))
                throw ConfigError(where + ": need 0 <= eta_low <= eta_high <= 1");
            if (c.window_low_dbm > c.window_high_dbm)
                throw ConfigError(where + ": window_low_dbm exceeds window_high_dbm");
        }
    }
    if (sec.contains("emh")) {
        const auto& body = sec.at("emh");
        const std::string where = "harvest.emh";
        check_keys(body,
                   {"mass_kg", "stiffness_linear_n_per_m", "stiffness_cubic_n_per_m3",
                    "mech_damping_ns_per_m", "em_damping_ns_per_m", "processing_efficiency",
                    "mode", "k_mw_per_g2", "excursion_limit_m", "use_magnitude",
                    "subtract_gravity"},
                   where);
        EmhConfig& e = cfg.emh;
        e.mass_kg = get_num(body, "mass_kg", e.mass_kg, where);
        e.stiffness_linear_n_per_m =
            get_num(body, "stiffness_linear_n_per_m", e.stiffness_linear_n_per_m, where);
        e.stiffness_cubic_n_per_m3 =
            get_num(body, "stiffness_cubic_n_per_m3", e.stiffness_cubic_n_per_m3, where);
        e.mech_damping_ns_per_m =
            get_num(body, "mech_damping_ns_per_m", e.mech_damping_ns_per_m, where);
        e.em_damping_ns_per_m =
            get_num(body, "em_damping_ns_per_m", e.em_damping_ns_per_m, where);
        e.processing_efficiency =
            get_num(body, "processing_efficiency", e.processing_efficiency, where);
        e.k_mw_per_g2 = get_num(body, "k_mw_per_g2", e.k_mw_per_g2, where);
        e.excursion_limit_m = get_num(body, "excursion_limit_m", e.excursion_limit_m, where);
        e.use_magnitude = get_bool(body, "use_magnitude", e.use_magnitude, where);
        e.subtract_gravity = get_bool(body, "subtract_gravity", e.subtract_gravity, where);
        const std::string mode = get_str(body, "mode", "", where);
        if (mode == "quadratic_transfer")
            e.mode = EmhMode::QuadraticTransfer;
        else if (mode == "oscillator_ode")
            e.mode = EmhMode::OscillatorOde;
        else if (!mode.empty())
            throw ConfigError(where + ".mode must be 'quadratic_transfer' or 'oscillator_ode'");
        if (!(e.processing_efficiency > 0.0 && e.processing_efficiency <= 1.0))
            throw ConfigError(where + ".processing_efficiency must be in (0, 1]");
    }
    if (sec.contains("teg")) {
        const auto& body = sec.at("teg");
        const std::string where = "harvest.teg";
        check_keys(body, {"k_teg_mw_per_k2", "min_delta_t_k", "processing_efficiency"}, where);
        TegConfig& t = cfg.teg;
        t.k_teg_mw_per_k2 = get_num(body, "k_teg_mw_per_k2", t.k_teg_mw_per_k2, where);
        t.min_delta_t_k = get_num(body, "min_delta_t_k", t.min_delta_t_k, where);
        t.processing_efficiency =
            get_num(body, "processing_efficiency", t.processing_efficiency, where);
        if (!(t.processing_efficiency > 0.0 && t.processing_efficiency <= 1.0))
            throw ConfigError(where + ".processing_efficiency must be in (0, 1]");
    }
    if (sec.contains("rf_supply")) {
        const auto& body = sec.at("rf_supply");
        const std::string where = "harvest.rf_supply";
        check_keys(body, {"tech", "source_eirp_dbm", "link_policy"}, where);
        RfSupplyConfig& r = cfg.rf_supply;
        const std::string tech = get_str(body, "tech", "", where);
        if (!tech.empty()) r.tech = parse_technology(tech);
        if (body.contains("source_eirp_dbm")) {
            const auto& v = body.at("source_eirp_dbm");
            if (v.is_null())
                r.source_eirp_dbm.reset();
            else if (v.is_number())
                r.source_eirp_dbm = v.get<double>();
            else
                throw ConfigError(where + ".source_eirp_dbm must be a number or null");
        }
        const std::string policy = get_str(body, "link_policy", "", where);
        if (policy == "median")
            r.link_policy = RfLinkPolicy::Median;
        else if (policy == "best")
            r.link_policy = RfLinkPolicy::Best;
        else if (policy == "worst")
            r.link_policy = RfLinkPolicy::Worst;
        else if (!policy.empty())
            throw ConfigError(where + ".link_policy must be 'median', 'best' or 'worst'");
    }
}

inline void parse_feasibility(const nlohmann::json& sec, Config& cfg) {
    const std::string where = "feasibility";
    check_keys(sec,
               {"sinr_threshold_high_db", "sinr_threshold_low_db", "supply_margin",
                "strict_instantaneous"},
               where);
    FeasibilityPolicy& p = cfg.policy;
    p.sinr_threshold_high_db =
        get_num(sec, "sinr_threshold_high_db", p.sinr_threshold_high_db, where);
    p.sinr_threshold_low_db = get_num(sec, "sinr_threshold_low_db", p.sinr_threshold_low_db, where);
    p.supply_margin = get_num(sec, "supply_margin", p.supply_margin, where);
    p.strict_instantaneous = get_bool(sec, "strict_instantaneous", p.strict_instantaneous, where);
    if (p.supply_margin < 0.0) throw ConfigError(where + ".supply_margin must be >= 0");
}

inline void parse_synth(const nlohmann::json& sec, Config& cfg) {
    check_keys(sec, {"accel_rate_hz", "temp_rate_hz"}, "synth");
    cfg.synth.accel_rate_hz = get_num(sec, "accel_rate_hz", cfg.synth.accel_rate_hz, "synth");
    cfg.synth.temp_rate_hz = get_num(sec, "temp_rate_hz", cfg.synth.temp_rate_hz, "synth");
    if (!(cfg.synth.accel_rate_hz > 0.0) || !(cfg.synth.temp_rate_hz > 0.0))
        throw ConfigError("synth rates must be > 0");
}

}  // namespace detail

inline Config Config::from_json(const nlohmann::json& doc) {
    Config cfg;
    detail::check_keys(doc,
                       {"technologies", "requirements", "compartments", "channel", "harvest",
                        "feasibility", "synth"},
                       "config root");
    if (doc.contains("technologies")) detail::parse_technologies(doc.at("technologies"), cfg);
    // Interference defaults track the (possibly overridden) profile EIRPs.
    cfg.interference = default_scenarios(cfg.profiles);
    if (doc.contains("requirements")) detail::parse_requirements(doc.at("requirements"), cfg);
    if (doc.contains("compartments")) detail::parse_compartments(doc.at("compartments"), cfg);
    if (doc.contains("channel")) detail::parse_channel(doc.at("channel"), cfg);
    if (doc.contains("harvest")) detail::parse_harvest(doc.at("harvest"), cfg);
    if (doc.contains("feasibility")) detail::parse_feasibility(doc.at("feasibility"), cfg);
    if (doc.contains("synth")) detail::parse_synth(doc.at("synth"), cfg);

    for (const auto& [tech, scenario] : cfg.interference)
        if (scenario.suppressed && !cfg.profiles.at(tech).nb_suppression)
            throw ConfigError("channel.interference." + std::string(name(tech)) +
                              ": suppression enabled but the profile has no nb_suppression");
    return cfg;
}

inline Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config JSON parse error in " + path + ": " + e.what());
    }
    return from_json(doc);
}

}  // namespace ivwsn
