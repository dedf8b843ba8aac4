#pragma once

// CheckRecord ledger: one JSON line per executed check, atomic file writes
// (whole ledger to a temp file, then rename).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

namespace swrd {

using json = nlohmann::json;

struct CheckRecord {
    std::string check_id;
    json parameters = json::object();
    json computed;
    json expected;
    double abs_err = 0.0;
    double rel_err = 0.0;
    bool pass = false;
    double wall_ms = 0.0;

    json to_json() const {
        return json{{"check_id", check_id}, {"parameters", parameters}, {"computed", computed},
                    {"expected", expected}, {"abs_err", abs_err},       {"rel_err", rel_err},
                    {"pass", pass},         {"wall_ms", wall_ms}};
    }
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

struct Ledger {
    std::vector<CheckRecord> records;

    void add(CheckRecord rec) { records.push_back(std::move(rec)); }
    void append(const Ledger& other) {
        records.insert(records.end(), other.records.begin(), other.records.end());
    }
    bool all_pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
    int failures() const {
        int n = 0;
        for (const auto& r : records)
            if (!r.pass) ++n;
        return n;
    }

    void write_jsonl(const std::string& path) const {
        namespace fs = std::filesystem;
        const fs::path target(path);
        if (target.has_parent_path() && !target.parent_path().empty() && !fs::exists(target.parent_path()))
            throw std::runtime_error("ledger: output directory does not exist: " + target.parent_path().string());
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw std::runtime_error("ledger: cannot open " + tmp.string());
            for (const auto& r : records) out << r.to_json().dump() << "\n";
            if (!out) throw std::runtime_error("ledger: write failed on " + tmp.string());
        }
        fs::rename(tmp, target);
    }
};

// Convenience builders for the two common record shapes.
inline CheckRecord check_value(const std::string& id, double computed, double expected, double tol,
                               json params = json::object()) {
    CheckRecord r;
    r.check_id = id;
    r.parameters = std::move(params);
    r.computed = computed;
    r.expected = expected;
    r.abs_err = std::abs(computed - expected);
    r.rel_err = r.abs_err / std::max(std::abs(expected), 1e-300);
    r.pass = (expected == 0.0) ? r.abs_err <= tol : r.rel_err <= tol;
    return r;
}

inline CheckRecord check_below(const std::string& id, double value, double bound,
                               json params = json::object()) {
    CheckRecord r;
    r.check_id = id;
    r.parameters = std::move(params);
    r.computed = value;
    r.expected = json{{"upper_bound", bound}};
    r.abs_err = value;
    r.rel_err = bound > 0.0 ? value / bound : value;
    r.pass = value <= bound;
    return r;
}

inline CheckRecord check_int(const std::string& id, long long computed, long long expected,
                             json params = json::object()) {
    CheckRecord r;
    r.check_id = id;
    r.parameters = std::move(params);
    r.computed = computed;
    r.expected = expected;
    r.abs_err = static_cast<double>(std::llabs(computed - expected));
    r.rel_err = r.abs_err;
    r.pass = computed == expected;
    return r;
}

inline CheckRecord check_flag(const std::string& id, bool ok, json params = json::object()) {
    CheckRecord r;
    r.check_id = id;
    r.parameters = std::move(params);
    r.computed = ok;
    r.expected = true;
    r.pass = ok;
    return r;
}

}  // namespace swrd
