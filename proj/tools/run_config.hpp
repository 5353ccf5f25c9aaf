#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "spl/common.hpp"
#include "spl/potentials.hpp"

namespace spl::cli {

// Everything a command reads. Filled from defaults, then a key=value file, then flags.
struct RunConfig {
  std::string setting = "jacobi-pol";
  double alpha = 0.0;
  double beta = 0.0;
  double nu = 0.0;
  double sigma = 0.5;
  std::string variant = "riesz";
  double p = 2.0;  // 0 or inf mean infinity
  double q = 2.0;
  int n = 0;
  double x = 1.0;
  double y = 2.0;
  double t = 1.0;
  int grid = 30;
  double grading = 3.0;
  double tol = 1e-10;
  double t_min = 0.01;
  double t_max = 8.0;
  double T = 2.0;
  double T_sub = 4.0;
  int count = 50;
  std::uint64_t seed = 1;
  std::string kind;  // command specific selector
  std::string probe_case;
  std::string out;
  std::string gnuplot_script;

  void set(const std::string& key, const std::string& value);  // throws ParameterError
  void validate() const;
  SettingId setting_id() const;
  PotentialSpec potential() const;
  nlohmann::json to_json() const;

  // flag names with help text
  static const std::vector<std::pair<std::string, std::string>>& keys();
};

void apply_config_stream(RunConfig& cfg, std::istream& is, const std::string& origin);
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace spl::cli
