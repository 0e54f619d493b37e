#pragma once

#include "seqcomplex/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace seqcomplex {

// One checked relation. Exact quantities are rational strings "p/q"; values
// that pass through sqrt/log/exp are decimal strings. Every inequality row
// carries both sides and the margin rhs - lhs.
struct ReportRecord {
    std::string suite;
    int instance = 0;
    std::string check;
    std::string lhs;
    std::string rhs;
    std::string margin;
    std::string method;  // "exact", "greedy-cover", "monte-carlo", ...
    bool holds = false;
    double runtime_ms = 0;  // volatile; excluded from replay equality
};

// Inputs for one suite run. Zero / empty fields keep suite defaults, so the
// default-constructed config reproduces the shipped acceptance instances.
struct ExperimentConfig {
    std::string suite;
    std::string class_path;  // tail-bound prepends this instance when set
    std::string tree_path;
    int horizon = 0;
    std::string alpha;  // rational literal "p/q"
    int trials = 0;     // Monte Carlo trials for sampled suites
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;  // tree enumeration budget
    std::string output;        // report file path; empty writes no file
    std::string format = "json";  // "json" or "csv"
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Suite registry in fixed order; names are stable CLI identifiers.
std::vector<std::string> suite_names();
std::string suite_summary(const std::string& name);

// Runs one suite deterministically under its config. Unknown names raise
// std::domain_error (CLI usage exit). Records come back sorted by instance.
std::vector<ReportRecord> run_suite(const std::string& name, const ExperimentConfig& cfg);

bool all_hold(const std::vector<ReportRecord>& reports);
std::vector<ReportRecord> failing_rows(const std::vector<ReportRecord>& reports);

nlohmann::json reports_to_json(const std::vector<ReportRecord>& reports);
std::vector<ReportRecord> reports_from_json(const nlohmann::json& j);
std::string reports_to_csv(const std::vector<ReportRecord>& reports);
std::vector<ReportRecord> reports_from_csv(const std::string& text);

// Replay equality: every field except the volatile runtime.
bool same_reports(const std::vector<ReportRecord>& a, const std::vector<ReportRecord>& b);

// Writes cfg.output in cfg.format; no-op when output is empty.
void write_reports(const ExperimentConfig& cfg, const std::vector<ReportRecord>& reports);

}  // namespace seqcomplex
