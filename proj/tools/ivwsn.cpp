// Command-line front end: link-budget sweeps, harvester simulation and
// feasibility reports, with CSV/JSON data and SVG figures per run.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivwsn/channel.hpp"
#include "ivwsn/config.hpp"
#include "ivwsn/feasibility.hpp"
#include "ivwsn/harvest.hpp"
#include "ivwsn/pipeline.hpp"
#include "ivwsn/svg.hpp"
#include "ivwsn/trace.hpp"

namespace fs = std::filesystem;
using namespace ivwsn;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
};

Config load_or_default(const GlobalArgs& g) {
    if (g.config_path.empty()) return Config{};
    if (!fs::exists(g.config_path))
        throw ConfigError("config file not found: " + g.config_path);
    return Config::load(g.config_path);
}

void require_input(const std::string& path, const std::string& what) {
    if (!path.empty() && !fs::exists(path))
        throw ParseFail(what + " not found: " + path);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

void write_json(const fs::path& p, const ordered_json& doc) {
    auto out = open_out(p);
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------- linkbudget

int cmd_linkbudget(const GlobalArgs& g, const std::string& links_path) {
    const Config cfg = load_or_default(g);
    require_input(links_path, "link CSV");
    const std::vector<Link> links =
        links_path.empty() ? default_link_set() : links_from_csv(links_path);

    const auto scenarios = cfg.interference;
    const std::vector<SinrRow> rows =
        sweep_links(links, cfg.profiles, cfg.path_loss, scenarios, cfg.penetration);

    fs::create_directories(g.out_dir);
    {
        auto out = open_out(fs::path(g.out_dir) / "sinr_sweep.csv");
        write_sweep_csv(rows, out);
    }
    write_json(fs::path(g.out_dir) / "sinr_sweep.json", sweep_to_json(rows));

    const double ref_d =
        cfg.path_loss.at(Technology::Band2_4GHz, Compartment::Engine, true).reference_distance_m;
    for (Compartment comp : all_compartments) {
        SvgChart chart("Worst-case SINR, " + std::string(name(comp)) + " compartment",
                       "10*log10(d / " + format_double(ref_d * 100.0) + " cm)", "SINR [dB]");
        for (Technology tech : all_technologies) {
            SvgSeries los_series{std::string(display_name(tech)) + " LoS", tech_color(tech), false, {}};
            SvgSeries nlos_series{std::string(display_name(tech)) + " NLoS", tech_color(tech), true, {}};
            for (const SinrRow& r : rows) {
                if (r.tech != tech || r.link.compartment != comp) continue;
                const double x = 10.0 * std::log10(r.link.distance_m / ref_d);
                (r.link.los ? los_series : nlos_series).points.push_back({x, r.sinr_db});
            }
            chart.add_series(std::move(los_series));
            chart.add_series(std::move(nlos_series));
        }
        auto out = open_out(fs::path(g.out_dir) / ("sinr_" + std::string(name(comp)) + ".svg"));
        chart.render(out);
    }
    std::cout << "linkbudget: " << rows.size() << " rows over " << links.size() << " links -> "
              << g.out_dir << "\n";
    return 0;
}

// ------------------------------------------------------------------- harvest

void write_harvest_outputs(const GlobalArgs& g, const Config& cfg, Compartment comp,
                           const std::string& scenario_label, const HarvestResult& result) {
    fs::create_directories(g.out_dir);
    const std::string stem = "harvest_" + std::string(name(comp));
    for (const PowerSeries& s : result.sources) {
        auto out = open_out(fs::path(g.out_dir) / (stem + "_" + s.source + ".csv"));
        write_power_csv(s, out);
    }
    write_json(fs::path(g.out_dir) / (stem + "_summary.json"),
               harvest_to_json(result, comp, scenario_label));

    SvgChart chart("Harvested power, " + std::string(name(comp)) + " (" + scenario_label + ")",
                   "time [s]", "useful power [mW]");
    const char* palette[] = {"#9467bd", "#ff7f0e", "#8c564b"};
    int color = 0;
    auto add = [&](const PowerSeries& s, const char* c) {
        SvgSeries series{s.source, c, true, {}};
        const std::size_t stride = std::max<std::size_t>(1, s.size() / 2000);
        for (std::size_t i = 0; i < s.size(); i += stride)
            series.points.push_back(
                {s.t0_s + static_cast<double>(i) * s.dt_s(), s.power_mw[i]});
        chart.add_series(std::move(series));
    };
    for (const PowerSeries& s : result.sources) add(s, palette[color++ % 3]);
    add(result.combined, "#17becf");
    auto out = open_out(fs::path(g.out_dir) / (stem + ".svg"));
    chart.render(out);

    for (const std::string& note : result.notes) std::cerr << "warning: " << note << "\n";
    std::cout << "harvest: " << result.sources.size() << " source(s), combined mean "
              << format_double(result.combined.summary.mean_mw) << " mW -> " << g.out_dir << "\n";
}

int cmd_harvest(const GlobalArgs& g, const std::string& compartment, const std::string& scenario,
                double duration_s, const std::string& accel_path, const std::string& temps_path,
                const std::string& links_path, std::vector<std::string> sources) {
    const Config cfg = load_or_default(g);
    const Compartment comp = parse_compartment(compartment);
    require_input(accel_path, "acceleration trace");
    require_input(temps_path, "temperature trace");
    require_input(links_path, "link CSV");

    const bool synthetic = accel_path.empty() && temps_path.empty();
    if (sources.empty()) {
        if (synthetic) {
            sources = {"rf", "vibration", "thermal"};
        } else {
            if (!accel_path.empty()) sources.push_back("vibration");
            if (!temps_path.empty()) sources.push_back("thermal");
        }
    }
    for (const std::string& s : sources)
        if (s != "rf" && s != "vibration" && s != "thermal")
            throw ConfigError("unknown source '" + s + "' (expected rf, vibration, thermal)");

    const std::vector<Link> links =
        links_path.empty() ? default_link_set() : links_from_csv(links_path);
    const DriveScenario scen = parse_scenario(scenario);

    HarvestResult result;
    if (synthetic) {
        result = run_synthetic_harvest(cfg, comp, scen, duration_s, g.seed, sources, links);
    } else {
        if (wants_source(sources, "vibration") && accel_path.empty())
            throw ConfigError("source 'vibration' needs --accel");
        if (wants_source(sources, "thermal") && temps_path.empty())
            throw ConfigError("source 'thermal' needs --temps");
        std::optional<Trace> accel, temps;
        if (!accel_path.empty()) accel = parse_trace(accel_path, TraceKind::Accel3Axis, comp);
        if (!temps_path.empty()) temps = parse_trace(temps_path, TraceKind::TempPair, comp);
        // Align every source onto the grid of the first trace supplied.
        const Trace& grid = accel ? *accel : *temps;
        const double rate = grid.sample_rate_hz;
        const double t0 = grid.t0_s;
        const std::size_t n = grid.size();
        if (wants_source(sources, "vibration"))
            result.sources.push_back(resample_power(emh_power(cfg.emh, *accel), rate, t0, n));
        if (wants_source(sources, "thermal")) {
            PowerSeries thermal = resample_power(teg_power(cfg.teg, *temps), rate, t0, n);
            if (thermal.summary.peak_mw == 0.0)
                result.notes.push_back("thermal: gradient stays below the minimum usable "
                                       "difference; thermal harvesting is not feasible in " +
                                       std::string(name(comp)));
            result.sources.push_back(std::move(thermal));
        }
        if (wants_source(sources, "rf")) {
            const double p_in = rf_supply_input_dbm(cfg, links, comp);
            const double p_mw = rfeh_power_mw(cfg.rfeh.at(cfg.rf_supply.tech), p_in);
            result.sources.push_back(constant_series("rf", p_mw, rate, t0, n));
            if (p_mw == 0.0)
                result.notes.push_back("rf: input power below harvester sensitivity in " +
                                       std::string(name(comp)));
        }
        if (result.sources.empty()) throw ConfigError("no harvest sources selected");
        result.combined = combine_sources(result.sources);
    }
    write_harvest_outputs(g, cfg, comp, std::string(name(scen)), result);
    return 0;
}

// --------------------------------------------------------------- feasibility

int cmd_feasibility(const GlobalArgs& g, const std::string& nodes_path,
                    const std::string& links_path, const std::string& scenario, double duration_s,
                    const std::string& adhoc_compartment, std::optional<double> adhoc_demand,
                    double adhoc_rate_kbps, const std::string& adhoc_security,
                    std::optional<double> duty_active_mw, double duty_sleep_mw, double duty) {
    const Config cfg = load_or_default(g);
    require_input(nodes_path, "node spec CSV");
    require_input(links_path, "link CSV");

    if (duty_active_mw) {
        // demand derived from the duty-cycle model
        adhoc_demand = average_power_mw({*duty_active_mw, duty_sleep_mw, duty});
        std::cout << "duty-cycle demand: " << format_double(*adhoc_demand) << " mW ("
                  << format_double(duty * 100.0) << "% active)\n";
    }

    std::vector<NodeRequirement> nodes;
    if (adhoc_demand) {
        NodeRequirement n;
        n.domain = FunctionalDomain::Body;
        n.compartment = parse_compartment(
            adhoc_compartment.empty() ? "passenger" : adhoc_compartment);
        n.power_mw = *adhoc_demand;
        n.rate_kbps = {0.0, adhoc_rate_kbps};
        n.security_reliability = parse_security(adhoc_security);
        nodes.push_back(n);
    } else if (!nodes_path.empty()) {
        nodes = nodes_from_csv(nodes_path);
    } else {
        nodes = cfg.requirements;
    }

    const std::vector<Link> links =
        links_path.empty() ? default_link_set() : links_from_csv(links_path);
    const DriveScenario scen = parse_scenario(scenario);

    const std::vector<SinrRow> rows =
        sweep_links(links, cfg.profiles, cfg.path_loss, cfg.interference, cfg.penetration);
    const auto supplies = synthetic_supplies(cfg, scen, duration_s, g.seed, links);
    const std::vector<FeasibilityReport> reports =
        build_report(nodes, rows, supplies, cfg.profiles, cfg.policy);

    fs::create_directories(g.out_dir);
    write_json(fs::path(g.out_dir) / "feasibility_report.json",
               report_to_json(reports, cfg.policy));
    print_report_table(reports, cfg.policy, std::cout);
    return 0;
}

// --------------------------------------------------------------------- synth

int cmd_synth(const GlobalArgs& g, const std::string& kind, const std::string& compartment,
              const std::string& scenario, double duration_s, double rate_hz,
              const std::string& out_path) {
    const Config cfg = load_or_default(g);
    const Compartment comp = parse_compartment(compartment);
    const DriveScenario scen = parse_scenario(scenario);
    const CompartmentEnv& env = cfg.environments.at(comp);

    Trace trace;
    if (kind == "accel") {
        trace = synth_accel(scen, comp, duration_s, g.seed,
                            rate_hz > 0.0 ? rate_hz : cfg.synth.accel_rate_hz, &env);
    } else if (kind == "temps") {
        trace = synth_temps(scen, comp, duration_s,
                            rate_hz > 0.0 ? rate_hz : cfg.synth.temp_rate_hz, &env);
    } else {
        throw ConfigError("kind must be 'accel' or 'temps'");
    }

    fs::path path = out_path;
    if (out_path.empty()) {
        fs::create_directories(g.out_dir);
        path = fs::path(g.out_dir) / ("synth_" + kind + "_" + std::string(name(comp)) + "_" +
                                      std::string(name(scen)) + ".csv");
    }
    auto out = open_out(path);
    write_trace(trace, out);
    std::cout << "synth: " << trace.size() << " samples -> " << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feasibility analysis for energy-harvesting in-vehicle wireless sensor nodes"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON config; defaults apply for omitted fields");
    app.add_option("--out-dir", g.out_dir, "output directory (default: out)");
    app.add_option("--seed", g.seed, "seed for synthetic traces (default: 42)");

    std::string links_path, accel_path, temps_path, nodes_path, out_path;
    std::string compartment = "engine", scenario = "city", kind = "accel";
    std::string adhoc_security = "low";
    double duration_s = 600.0, rate_hz = 0.0, adhoc_rate_kbps = 10.0;
    std::optional<double> adhoc_demand, duty_active_mw;
    double duty_sleep_mw = 0.01, duty = 0.1;
    std::vector<std::string> sources;

    CLI::App* lb = app.add_subcommand("linkbudget", "worst-case SINR sweep over a link set");
    lb->add_option("--links", links_path, "link CSV (default: built-in link set)");

    CLI::App* hv = app.add_subcommand("harvest", "simulate harvesters over traces");
    hv->add_option("--compartment", compartment, "engine|chassis|passenger");
    hv->add_option("--scenario", scenario, "idle|city|highway");
    hv->add_option("--duration", duration_s, "synthetic trace length in seconds");
    hv->add_option("--accel", accel_path, "measured acceleration CSV (t_s,ax,ay,az)");
    hv->add_option("--temps", temps_path, "measured temperature CSV (t_s,t_hot_c,t_amb_c)");
    hv->add_option("--links", links_path, "link CSV for the RF source");
    hv->add_option("--sources", sources, "subset of: rf vibration thermal")->delimiter(',');

    CLI::App* fz = app.add_subcommand("feasibility", "per-node feasibility verdicts");
    fz->add_option("--nodes", nodes_path, "node spec CSV (default: built-in registry)");
    fz->add_option("--links", links_path, "link CSV (default: built-in link set)");
    fz->add_option("--scenario", scenario, "idle|city|highway");
    fz->add_option("--duration", duration_s, "synthetic trace length in seconds");
    fz->add_option("--compartment", compartment, "ad-hoc node compartment (with --demand)");
    fz->add_option("--demand", adhoc_demand, "evaluate a single ad-hoc node at this demand [mW]");
    fz->add_option("--rate-kbps", adhoc_rate_kbps, "ad-hoc node rate requirement");
    fz->add_option("--security", adhoc_security, "ad-hoc node security level (high|low)");
    fz->add_option("--active-mw", duty_active_mw,
                   "derive the ad-hoc demand from a duty-cycle model: active power [mW]");
    fz->add_option("--sleep-mw", duty_sleep_mw, "duty-cycle sleep power [mW] (default 0.01)");
    fz->add_option("--duty", duty, "duty-cycle active fraction in [0,1] (default 0.1)");

    CLI::App* sy = app.add_subcommand("synth", "write a synthetic trace CSV");
    sy->add_option("--kind", kind, "accel|temps");
    sy->add_option("--compartment", compartment, "engine|chassis|passenger");
    sy->add_option("--scenario", scenario, "idle|city|highway");
    sy->add_option("--duration", duration_s, "trace length in seconds");
    sy->add_option("--rate", rate_hz, "sample rate in Hz (default from config)");
    sy->add_option("--out", out_path, "output file (default under --out-dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (lb->parsed()) return cmd_linkbudget(g, links_path);
        if (hv->parsed())
            return cmd_harvest(g, compartment, scenario, duration_s, accel_path, temps_path,
                               links_path, sources);
        if (fz->parsed())
            return cmd_feasibility(g, nodes_path, links_path, scenario, duration_s, compartment,
                                   adhoc_demand, adhoc_rate_kbps, adhoc_security, duty_active_mw,
                                   duty_sleep_mw, duty);
        if (sy->parsed())
            return cmd_synth(g, kind, compartment, scenario, duration_s, rate_hz, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const MissingModel& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const MissingTableEntry& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseFail& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const DistanceBelowReference& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const NoLinksForCompartment& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
