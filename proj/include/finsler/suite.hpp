#pragma once

// Run configuration, check registry and suite orchestration behind the
// finsler_check tool.
//
// Configuration file (JSON):
//   {
//     "spec": {"entry": "sphere", "dimension": 3}          // catalog entry, or
//     "spec": {"family": "randers", "dimension": 2,
//              "params": {"b": [0.1, 0.0], "conformal_gradient": [0, 0]},
//              "chart": {"radius": 1.0}},
//     "n_points": 100,
//     "seed": 7,
//     "tolerances": {"jet_exact": 1e-8, "bracket": 1e-5},
//     "beta_values": [2.0],
//     "checks": ["flag-fit", "cr"],
//     "output": "reports/sphere"
//   }
// Unknown keys and unknown check ids are rejected.

#include "finsler/geometry.hpp"
#include "finsler/report.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace finsler {

inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_io_error = 3;

struct tolerance_config {
    double jet_exact = 1e-8;
    double bracket = 1e-5;
};

struct run_config {
    finsler_spec spec;
    int n_points = 10;
    std::uint64_t seed = 0;
    tolerance_config tolerances;
    std::vector<double> beta_values;
    std::vector<std::string> checks;
    std::string output = "finsler_report";
};

struct check_info {
    std::string id;
    std::string description;
    bool per_beta = false;
    bool riemannian_only = false;
};

const std::vector<check_info>& check_registry();
const check_info* find_check(const std::string& id);

// Throws config_error. With validate = false only the structure and the spec
// are checked, so command line overrides can be applied before
// validate_config.
finsler_spec parse_spec(const std::string& json_text);
run_config parse_config(const std::string& json_text, bool validate = true);
run_config load_config(const std::filesystem::path& path, bool validate = true);
void validate_config(const run_config& config);

// Samples config.n_points points from config.seed and runs every requested
// check at each of them. Records are normalized by (check_id, point_index).
// Per-beta checks carry the suffix "/beta=<value>" in their ids.
check_report run_suite(const run_config& config);

int exit_status(const check_report& report);

} // namespace finsler
