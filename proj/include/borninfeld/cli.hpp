#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace borninfeld::cli {

inline constexpr const char* kProgramName = "borninfeld-spectra";
inline constexpr const char* kVersion = "0.1.0";
/// Electron rest energy in eV, used only by the --physical annotation.
inline constexpr double kRestEnergyEv = 510998.95;

enum class OutputFormat { Csv, Json };

/// Effective settings for one invocation. Precedence: struct defaults, then
/// the --config JSON file, then explicit flags. Round-trips through JSON.
struct RunConfig {
    std::string subcommand;
    double alpha = 1.0 / 137.036;
    double delta = 0.0;
    double delta_min = 1e-3;
    double delta_max = 10.0;
    int delta_points = 60;
    bool include_zero = true;
    int n = 1;
    int l = 0;
    std::string model = "pair";  // pair | test-particle | coulomb
    double quad_tol = 1e-12;
    double table_tol = 1e-10;
    double ode_tol = 1e-11;
    double eig_tol = 1e-10;
    double u_min = 0.0;
    double u_max = 10.0;
    int u_points = 201;
    std::string output = "-";
    OutputFormat format = OutputFormat::Csv;
    bool physical = false;
    int threads = 0;

    bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const RunConfig& config);
void from_json(const nlohmann::json& j, RunConfig& config);

/// Tabular payload shared by the CSV and JSON writers. Cells are JSON values
/// so numbers stay numbers in JSON output while the CSV writer formats them
/// with 10 significant digits.
struct Dataset {
    std::string subcommand;
    std::string flags;  // canonical effective-settings echo for the header
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    std::vector<std::string> comments;  // trailing annotation lines
};

void emit_csv(const Dataset& dataset, std::ostream& out);
void emit_json(const Dataset& dataset, std::ostream& out);

/// Entry point. The vector form takes arguments without the program name.
/// Returns 0 on success, 1 on usage errors, 2 on numerical non-convergence
/// (partial results are still written, flagged).
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace borninfeld::cli
