#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dgsm/bench.hpp"
#include "dgsm/bounds.hpp"
#include "dgsm/error.hpp"
#include "dgsm/testfns.hpp"

namespace dgsm::app {

/// Seed used when neither --seed nor DGSM_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20130527;
inline constexpr int kReportSchemaVersion = 1;

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_invalid = 1,
  exit_unknown_function = 2,
  exit_constant_model = 3,
  exit_missing_reference = 4,
  exit_numeric = 5,
};

int exit_code_for(ErrorCode code) noexcept;

enum class OutputFormat { json, csv };

struct RunConfig {
  std::string function;
  ParamMap params;
  std::size_t n = 16384;
  std::uint64_t seed = kDefaultSeed;
  std::size_t k = 25;
  double m_lo = 0.1;
  double m_hi = 100.0;
  std::vector<Quantity> quantities{Quantity::s_total};
  std::vector<std::size_t> variables{1};  // 1-based, as typed on the command line
  std::size_t n_lo = 256;
  std::size_t n_hi = 16384;
  bool normal = false;
  std::vector<double> means;
  std::vector<double> sigmas;
  std::string out = "-";
  OutputFormat format = OutputFormat::json;
  unsigned threads = 1;  // 0 = hardware concurrency

  /// Checks every numeric field; throws invalid_argument before any model work.
  void validate() const;
  std::vector<Distribution> inputs() const;
  ReportOptions report_options() const;
};

/// Parses a --params value: inline JSON object, or @path to a JSON file.
/// Values may be numbers or arrays of numbers.
ParamMap parse_params(const std::string& text);
ParamMap params_from_json(const nlohmann::json& j);

/// Parses "lo:hi".
std::pair<double, double> parse_range(const std::string& text);

nlohmann::json report_to_json(const BoundsReport& report);
BoundsReport report_from_json(const nlohmann::json& j);

/// Analytic values side by side with the estimates, plus the list of bounds
/// that coincide with S_i^tot ("tight") in closed form.
nlohmann::json analytic_to_json(const AnalyticReference& ref);

std::string report_to_csv(const BoundsReport& report);

nlohmann::json convergence_to_json(const std::vector<ConvergenceTable>& tables);
std::string convergence_to_csv(const std::vector<ConvergenceTable>& tables);

/// Command bodies. They write data to `out` and throw dgsm::Error on failure.
void cmd_analyze(const RunConfig& config, const Registry& registry, std::ostream& out);
void cmd_convergence(const RunConfig& config, const Registry& registry, std::ostream& out);
void cmd_list_functions(const Registry& registry, std::ostream& out);

/// Full command line entry point; returns the process exit code. Diagnostics
/// go to `err`, data to `out` when --out is "-".
int run(int argc, const char* const* argv, const Registry& registry, std::ostream& out,
        std::ostream& err);

}  // namespace dgsm::app
