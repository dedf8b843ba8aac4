#pragma once

// CLI front end. Subcommands select suites; all options also come from a flat
// key=value config file with a fixed schema (unknown keys are errors).
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error,
// 3 I/O failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "swrd/snapshot.hpp"
#include "swrd/suites.hpp"

namespace swrd::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Schema of the flat config file; every key maps onto a RunConfig field.
inline const std::map<std::string, std::string>& config_schema() {
    static const std::map<std::string, std::string> schema = {
        {"suites", "comma-separated subset of reduce,patch,liouville,index,symplectic,quillen,infra"},
        {"grid", "torus nodes per side (even, >= 8)"},
        {"seed", "base seed for all randomized checks"},
        {"tol", "solver residual tolerance for liouville-solve"},
        {"out", "ledger output path (JSON lines)"},
        {"snapshot", "directory for field snapshots"},
        {"h_mode", "unit | general"},
    };
    return schema;
}

inline void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "suites") {
        cfg.suites.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) cfg.suites.insert(item);
    } else if (key == "grid") {
        cfg.grid = std::stoi(value);
    } else if (key == "seed") {
        cfg.seed = std::stoull(value);
    } else if (key == "tol") {
        cfg.tol = std::stod(value);
    } else if (key == "out") {
        cfg.out_path = value;
    } else if (key == "snapshot") {
        cfg.snapshot_dir = value;
    } else if (key == "h_mode") {
        if (value != "unit" && value != "general")
            throw std::invalid_argument("config: h_mode must be unit or general");
        cfg.h_mode = value == "unit" ? HMode::unit : HMode::general;
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto notspace = line.find_first_not_of(" \t\r");
        if (notspace == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

inline int run(int argc, const char* const* argv) {
    CLI::App app{"swrd: verification suites for the reduced Seiberg-Witten system with Higgs field"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string config_file;
    int grid_flag = cfg.grid;
    std::uint64_t seed_flag = cfg.seed;
    double tol_flag = cfg.tol;
    std::string out_flag, snapshot_flag, h_mode = "unit";
    app.add_option("--grid", grid_flag, "torus nodes per side");
    app.add_option("--seed", seed_flag, "base seed");
    app.add_option("--tol", tol_flag, "solver residual tolerance");
    app.add_option("--out", out_flag, "ledger output path (JSON lines)");
    app.add_option("--snapshot", snapshot_flag, "snapshot output directory");
    app.add_option("--h-mode", h_mode, "unit | general")->check(CLI::IsMember({"unit", "general"}));
    app.add_option("--config", config_file, "flat key=value config file");

    const std::map<std::string, std::set<std::string>> sub_suites = {
        {"reduce-check", {"reduce"}},
        {"patch-verify", {"patch"}},
        {"liouville-solve", {"liouville"}},
        {"index-check", {"index"}},
        {"symplectic-check", {"symplectic"}},
        {"quillen-check", {"quillen"}},
        {"all", {"reduce", "patch", "liouville", "index", "symplectic", "quillen", "infra"}},
    };
    for (const auto& [name, suites] : sub_suites) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        // config file first, explicit flags on top
        if (!config_file.empty()) load_config_file(cfg, config_file);
        if (app.count("--grid")) cfg.grid = grid_flag;
        if (app.count("--seed")) cfg.seed = seed_flag;
        if (app.count("--tol")) cfg.tol = tol_flag;
        if (app.count("--out")) cfg.out_path = out_flag;
        if (app.count("--snapshot")) cfg.snapshot_dir = snapshot_flag;
        if (app.count("--h-mode")) cfg.h_mode = h_mode == "unit" ? HMode::unit : HMode::general;
        // named subcommands pin their suite; `all` runs the configured set
        for (const auto& [name, suites] : sub_suites)
            if (name != "all" && app.got_subcommand(name)) cfg.suites = suites;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Ledger led;
    try {
        led = run_suite(cfg);
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    int failures = 0;
    for (const auto& r : led.records) {
        if (!r.pass) ++failures;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.check_id << "\n";
    }
    std::cout << led.records.size() << " checks, " << failures << " failures\n";
    return failures == 0 ? kExitPass : kExitCheckFailure;
}

}  // namespace swrd::cli
