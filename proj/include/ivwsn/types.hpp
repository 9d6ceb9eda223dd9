#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "ivwsn/errors.hpp"

namespace ivwsn {

/// Vehicle compartment a node or link lives in.
enum class Compartment : std::uint8_t { Engine, Chassis, Passenger };

/// Radio technology under evaluation.
enum class Technology : std::uint8_t { Band2_4GHz, Uwb, MmWave };

/// Packet-loss criticality class of a sensor's data.
enum class SecurityLevel : std::uint8_t { High, Low };

/// Functional domain of a vehicular sensor.
enum class FunctionalDomain : std::uint8_t {
    EngineDomain,
    Powertrain,
    ChassisDomain,
    OccupantSafety,
    Body,
};

inline constexpr std::array<Compartment, 3> all_compartments{
    Compartment::Engine, Compartment::Chassis, Compartment::Passenger};

inline constexpr std::array<Technology, 3> all_technologies{
    Technology::Band2_4GHz, Technology::Uwb, Technology::MmWave};

inline constexpr std::string_view name(Compartment c) {
    switch (c) {
        case Compartment::Engine: return "engine";
        case Compartment::Chassis: return "chassis";
        case Compartment::Passenger: return "passenger";
    }
    return "?";
}

inline constexpr std::string_view name(Technology t) {
    switch (t) {
        case Technology::Band2_4GHz: return "band2_4ghz";
        case Technology::Uwb: return "uwb";
        case Technology::MmWave: return "mmwave";
    }
    return "?";
}

/// Human-facing label (tables, chart legends).
inline constexpr std::string_view display_name(Technology t) {
    switch (t) {
        case Technology::Band2_4GHz: return "2.4 GHz";
        case Technology::Uwb: return "UWB";
        case Technology::MmWave: return "mmWave";
    }
    return "?";
}

inline constexpr std::string_view name(SecurityLevel s) {
    return s == SecurityLevel::High ? "high" : "low";
}

inline constexpr std::string_view name(FunctionalDomain d) {
    switch (d) {
        case FunctionalDomain::EngineDomain: return "engine";
        case FunctionalDomain::Powertrain: return "powertrain";
        case FunctionalDomain::ChassisDomain: return "chassis";
        case FunctionalDomain::OccupantSafety: return "occupant_safety";
        case FunctionalDomain::Body: return "body";
    }
    return "?";
}

inline Compartment parse_compartment(std::string_view s) {
    for (Compartment c : all_compartments)
        if (s == name(c)) return c;
    throw ParseFail("unknown compartment: '" + std::string(s) + "'");
}

inline Technology parse_technology(std::string_view s) {
    for (Technology t : all_technologies)
        if (s == name(t)) return t;
    throw ParseFail("unknown technology: '" + std::string(s) + "'");
}

inline SecurityLevel parse_security(std::string_view s) {
    if (s == "high") return SecurityLevel::High;
    if (s == "low") return SecurityLevel::Low;
    throw ParseFail("unknown security level: '" + std::string(s) + "'");
}

inline FunctionalDomain parse_domain(std::string_view s) {
    for (FunctionalDomain d :
         {FunctionalDomain::EngineDomain, FunctionalDomain::Powertrain,
          FunctionalDomain::ChassisDomain, FunctionalDomain::OccupantSafety,
          FunctionalDomain::Body})
        if (s == name(d)) return d;
    throw ParseFail("unknown functional domain: '" + std::string(s) + "'");
}

}  // namespace ivwsn
