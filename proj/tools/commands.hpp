#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "volret/distributions.hpp"

namespace volret::cli {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::filesystem::path input_path;
  std::vector<int> tau_list;
  std::vector<Kind> families;
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 42;
  OutputFormat format = OutputFormat::csv;
  std::string invocation;  // written as the first line of every output file

  std::optional<double> mu;
  std::vector<int> orders;  // moment half-orders n
  int ref_tau = 1;

  // simulate
  std::string model = "heston";
  double gamma = 0.05;
  double theta = 1e-4;
  std::optional<double> kappa;
  std::optional<double> alpha;
  double rho = 0.0;
  double dt = 0.1;
  std::size_t steps = 10000;
  bool ito = true;
  std::optional<std::filesystem::path> prices_path;
  bool ks_check = false;
};

// "1:250", "1:250:5", "1,5,10" or mixtures such as "1:10,20,50".
std::vector<int> parse_taus(const std::string& text);
std::vector<Kind> parse_families(const std::string& text);

int cmd_ingest(const RunConfig& config, std::ostream& out);
int cmd_rv(const RunConfig& config, std::ostream& out);
int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_moments(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);

// Parses argv and dispatches. Returns the process exit code:
// 0 success, 2 I/O, 3 validation or usage, 4 numerical non-convergence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace volret::cli
