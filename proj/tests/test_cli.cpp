#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const char* kCli = IVWSN_CLI_PATH;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    const std::string cmd = std::string(kCli) + " " + args + " > " + out_file.string() + " 2> " +
                            err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

fs::path test_root() {
    static const fs::path root = fs::temp_directory_path() / "ivwsn_cli_tests";
    fs::create_directories(root);
    return root;
}

}  // namespace

TEST_CASE("linkbudget over a small link CSV") {
    const fs::path dir = test_root() / "linkbudget";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path links = dir / "links.csv";
    {
        std::ofstream out(links, std::ios::binary);
        out << "id,compartment,distance_m,los,path_loss_db\n"
               "a,engine,0.1,1,\n"
               "b,chassis,1.0,0,\n"
               "c,passenger,0.8,1,\n";
    }
    const auto r = run_cli("--out-dir " + (dir / "out").string() + " linkbudget --links " +
                               links.string(),
                           dir);
    CHECK(r.code == 0);

    const std::string csv = slurp_file(dir / "out" / "sinr_sweep.csv");
    CHECK(count_lines(csv) == 10);  // header + 3 links x 3 technologies
    CHECK(fs::exists(dir / "out" / "sinr_engine.svg"));
    CHECK(fs::exists(dir / "out" / "sinr_chassis.svg"));
    CHECK(fs::exists(dir / "out" / "sinr_passenger.svg"));
    CHECK(fs::exists(dir / "out" / "sinr_sweep.json"));

    // x axis is dB-distance relative to the 1 cm reference
    const std::string svg = slurp_file(dir / "out" / "sinr_engine.svg");
    CHECK(svg.find("10*log10(d / 1 cm)") != std::string::npos);
}

TEST_CASE("missing config file exits 2") {
    const fs::path dir = test_root() / "missing_config";
    const auto r = run_cli("--config nope_does_not_exist.json linkbudget", dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("config") != std::string::npos);
}

TEST_CASE("malformed node spec exits 3 with the row number") {
    const fs::path dir = test_root() / "bad_nodes";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path nodes = dir / "nodes.csv";
    {
        std::ofstream out(nodes, std::ios::binary);
        out << "domain,compartment,power_mw,rate_min_kbps,rate_max_kbps,security\n"
               "engine,engine,100,10,1000,high\n"
               "body,passenger,not_a_number,0,10,low\n";
    }
    const auto r = run_cli("--out-dir " + (dir / "out").string() +
                               " feasibility --duration 2 --nodes " + nodes.string(),
                           dir);
    CHECK(r.code == 3);
    CHECK(r.err.find("row 3") != std::string::npos);
}

TEST_CASE("harvest restricted to a single source") {
    const fs::path dir = test_root() / "rf_only";
    fs::remove_all(dir);
    const auto r = run_cli("--out-dir " + (dir / "out").string() +
                               " harvest --compartment engine --duration 2 --sources rf",
                           dir);
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp_file(dir / "out" / "harvest_engine_summary.json"));
    CHECK(doc.at("sources").size() == 1);
    CHECK(doc.at("sources").contains("rf"));
    CHECK(fs::exists(dir / "out" / "harvest_engine_rf.csv"));
    CHECK_FALSE(fs::exists(dir / "out" / "harvest_engine_vibration.csv"));
}

TEST_CASE("passenger thermal harvest is infeasible and flagged") {
    const fs::path dir = test_root() / "pass_thermal";
    fs::remove_all(dir);
    const auto r = run_cli("--out-dir " + (dir / "out").string() +
                               " harvest --compartment passenger --duration 5 --sources thermal",
                           dir);
    CHECK(r.code == 0);
    const auto doc =
        nlohmann::json::parse(slurp_file(dir / "out" / "harvest_passenger_summary.json"));
    CHECK(doc.at("sources").at("thermal").at("mean_mw").get<double>() == 0.0);
    REQUIRE(doc.at("notes").size() >= 1);
    CHECK(doc.at("notes")[0].get<std::string>().find("thermal") != std::string::npos);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("feasibility ad-hoc passenger node at 0.5 mW is feasible") {
    const fs::path dir = test_root() / "adhoc";
    fs::remove_all(dir);
    const auto r = run_cli("--out-dir " + (dir / "out").string() +
                               " feasibility --duration 30 --compartment passenger --demand 0.5",
                           dir);
    CHECK(r.code == 0);
    const auto doc =
        nlohmann::json::parse(slurp_file(dir / "out" / "feasibility_report.json"));
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0].at("overall").get<bool>());
    CHECK(doc[0].at("policy").contains("sinr_threshold_high_db"));
}

TEST_CASE("infeasible verdicts still exit 0") {
    const fs::path dir = test_root() / "infeasible";
    fs::remove_all(dir);
    const auto r = run_cli(
        "--out-dir " + (dir / "out").string() +
            " feasibility --duration 30 --compartment engine --demand 100 --security high",
        dir);
    CHECK(r.code == 0);
    const auto doc =
        nlohmann::json::parse(slurp_file(dir / "out" / "feasibility_report.json"));
    REQUIRE(doc.size() == 1);
    CHECK_FALSE(doc[0].at("overall").get<bool>());
}

TEST_CASE("default feasibility run covers every functional domain") {
    const fs::path dir = test_root() / "registry";
    fs::remove_all(dir);
    const auto r =
        run_cli("--out-dir " + (dir / "out").string() + " feasibility --duration 30", dir);
    CHECK(r.code == 0);
    const auto doc =
        nlohmann::json::parse(slurp_file(dir / "out" / "feasibility_report.json"));
    REQUIRE(doc.size() == 5);
    std::set<std::string> domains;
    for (const auto& rep : doc)
        domains.insert(rep.at("node").at("domain").get<std::string>());
    CHECK(domains ==
          std::set<std::string>{"engine", "powertrain", "chassis", "occupant_safety", "body"});
}

TEST_CASE("duty-cycle flags derive the ad-hoc demand") {
    const fs::path dir = test_root() / "duty";
    fs::remove_all(dir);
    // 0.1 * 20 + 0.9 * 0.01 = 2.009 mW, below the engine supply
    const auto r = run_cli("--out-dir " + (dir / "out").string() +
                               " feasibility --duration 30 --compartment engine"
                               " --active-mw 20 --sleep-mw 0.01 --duty 0.1",
                           dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("2.009") != std::string::npos);
    const auto doc =
        nlohmann::json::parse(slurp_file(dir / "out" / "feasibility_report.json"));
    REQUIRE(doc.size() == 1);
    CHECK(doc[0].at("node").at("power_mw").get<double>() == 2.009);
    CHECK(doc[0].at("power_verdict").at("feasible").get<bool>());
}

TEST_CASE("synth command writes a parseable trace and respects the seed") {
    const fs::path dir = test_root() / "synth";
    fs::remove_all(dir);
    const std::string base = "--out-dir " + (dir / "out").string() +
                             " synth --kind accel --compartment chassis --duration 1";
    const auto r1 = run_cli("--seed 5 " + base, dir / "r1");
    const auto r2 = run_cli("--seed 5 " + base, dir / "r2");
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    const fs::path trace = dir / "out" / "synth_accel_chassis_city.csv";
    REQUIRE(fs::exists(trace));
    const std::string bytes = slurp_file(trace);
    CHECK(count_lines(bytes) == 1001);  // header + 1000 samples

    const auto r3 = run_cli("--seed 6 " + base, dir / "r3");
    CHECK(r3.code == 0);
    CHECK(slurp_file(trace) != bytes);  // different seed, different trace

    const auto r4 = run_cli("--seed 5 " + base, dir / "r4");
    CHECK(r4.code == 0);
    CHECK(slurp_file(trace) == bytes);  // same seed, byte-identical
}
