#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivwsn/errors.hpp"
#include "ivwsn/types.hpp"

namespace ivwsn {

/// Per-band radio constants of the selected low-power transceiver class.
struct TechnologyProfile {
    Technology tech = Technology::Band2_4GHz;
    double eirp_dbm = 0.0;          ///< max TX power including antenna gain
    double antenna_gain_dbi = 0.0;  ///< portion of EIRP contributed by the antenna
    double noise_floor_dbm = 0.0;
    double max_rate_kbps = 0.0;
    bool nb_suppression = false;    ///< narrowband interferers can be notched out
    double transceiver_power_mw = 0.0;
};

/// Regulatory EIRP limits, transceiver noise floors and peak rates per band.
inline std::map<Technology, TechnologyProfile> default_profiles() {
    std::map<Technology, TechnologyProfile> m;
    m[Technology::Band2_4GHz] = {Technology::Band2_4GHz, 52.0, 30.0, -76.0, 54000.0, false, 10.0};
    m[Technology::Uwb] = {Technology::Uwb, -11.3, 0.0, -84.0, 7000000.0, true, 5.0};
    m[Technology::MmWave] = {Technology::MmWave, 60.0, 50.0, -68.0, 7000000.0, false, 50.0};
    return m;
}

/// Required data rate, stored as an interval; feasibility uses the maximum.
struct RateRange {
    double min_kbps = 0.0;
    double max_kbps = 0.0;
};

/// One functional-domain row of the sensor requirement table.
struct NodeRequirement {
    FunctionalDomain domain = FunctionalDomain::Body;
    Compartment compartment = Compartment::Passenger;
    double power_mw = 0.0;  ///< consumption budget (conservative interval top)
    RateRange rate_kbps;
    SecurityLevel security_reliability = SecurityLevel::Low;
};

/// Default requirement registry, one entry per functional domain.
///
/// Ranged power budgets are stored at their conservative upper bound.
/// Domains whose example sensors span compartments are pinned to one
/// representative compartment (powertrain: chassis, body: passenger);
/// override via config for other placements.
inline std::vector<NodeRequirement> requirement_registry() {
    return {
        {FunctionalDomain::EngineDomain, Compartment::Engine, 100.0, {10.0, 1000.0},
         SecurityLevel::High},
        {FunctionalDomain::Powertrain, Compartment::Chassis, 100.0, {10.0, 1000.0},
         SecurityLevel::High},
        {FunctionalDomain::ChassisDomain, Compartment::Chassis, 100.0, {10.0, 100.0},
         SecurityLevel::High},
        {FunctionalDomain::OccupantSafety, Compartment::Passenger, 100.0, {10.0, 100.0},
         SecurityLevel::High},
        {FunctionalDomain::Body, Compartment::Passenger, 100.0, {0.0, 10.0},
         SecurityLevel::Low},
    };
}

/// One TX->RX pair.
struct Link {
    std::string id;
    Compartment compartment = Compartment::Engine;
    double distance_m = 0.0;
    bool los = true;
    std::optional<double> measured_path_loss_db;  ///< overrides the model when present
};

}  // namespace ivwsn
