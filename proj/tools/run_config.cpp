#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace spl::cli {

namespace {

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParameterError(key + ": '" + v + "' is not a number");
  return d;
}

long long to_int(const std::string& key, const std::string& v) {
  long long r = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), r);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParameterError(key + ": '" + v + "' is not an integer");
  return r;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// json has no infinity; write it as a string
nlohmann::json num(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& RunConfig::keys() {
  static const std::vector<std::pair<std::string, std::string>> k{
      {"setting", "jacobi-pol, jacobi-fun, jacobi-scaled, fb-natural or fb-lebesgue"},
      {"alpha", "Jacobi alpha"},
      {"beta", "Jacobi beta"},
      {"nu", "Bessel order nu"},
      {"sigma", "potential order"},
      {"variant", "riesz or bessel"},
      {"p", "input exponent, 0 or inf for infinity"},
      {"q", "output exponent, 0 or inf for infinity"},
      {"n", "eigen index (zeros count from 1)"},
      {"x", "first point"},
      {"y", "second point"},
      {"t", "Poisson/heat time"},
      {"grid", "grid size (region grids: resolution)"},
      {"grading", "endpoint grading exponent of graded grids"},
      {"tol", "tolerance (absolute for kernels, relative for potential bands)"},
      {"t-min", "smallest t of band sweeps"},
      {"t-max", "largest t of band sweeps"},
      {"T", "short/long time switch of the Poisson envelope"},
      {"T-sub", "subordination cut in heat time"},
      {"count", "number of random samples"},
      {"seed", "random seed"},
      {"kind", "command selector (poisson/heat/potential, resolved/strict)"},
      {"case", "probe id"},
      {"out", "output file"},
      {"gnuplot-script", "also write a gnuplot script for the region grid"}};
  return k;
}

void RunConfig::set(const std::string& key, const std::string& v) {
  if (key == "setting") setting = v;
  else if (key == "alpha") alpha = to_double(key, v);
  else if (key == "beta") beta = to_double(key, v);
  else if (key == "nu") nu = to_double(key, v);
  else if (key == "sigma") sigma = to_double(key, v);
  else if (key == "variant") variant = v;
  else if (key == "p") p = to_double(key, v);
  else if (key == "q") q = to_double(key, v);
  else if (key == "n") n = static_cast<int>(to_int(key, v));
  else if (key == "x") x = to_double(key, v);
  else if (key == "y") y = to_double(key, v);
  else if (key == "t") t = to_double(key, v);
  else if (key == "grid") grid = static_cast<int>(to_int(key, v));
  else if (key == "grading") grading = to_double(key, v);
  else if (key == "tol") tol = to_double(key, v);
  else if (key == "t-min" || key == "t_min") t_min = to_double(key, v);
  else if (key == "t-max" || key == "t_max") t_max = to_double(key, v);
  else if (key == "T") T = to_double(key, v);
  else if (key == "T-sub" || key == "T_sub") T_sub = to_double(key, v);
  else if (key == "count") count = static_cast<int>(to_int(key, v));
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ParameterError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "kind") kind = v;
  else if (key == "case") probe_case = v;
  else if (key == "out") out = v;
  else if (key == "gnuplot-script" || key == "gnuplot_script") gnuplot_script = v;
  else throw ParameterError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  parse_variant(setting);
  if (variant != "riesz" && variant != "bessel") throw ParameterError("variant must be riesz or bessel");
  for (auto [name, v] : {std::pair{"tol", tol}, {"t-min", t_min}, {"t-max", t_max}, {"T", T}, {"T-sub", T_sub},
                         {"grading", grading}})
    if (!(v > 0) || std::isinf(v)) throw ParameterError(std::string(name) + " must be positive and finite");
  if (!(t_max > t_min)) throw ParameterError("t-max must exceed t-min");
  if (grid < 2) throw ParameterError("grid must be at least 2");
  if (count < 1) throw ParameterError("count must be positive");
  if (!(sigma > 0)) throw ParameterError("sigma must be positive");
  setting_id().validate();
}

SettingId RunConfig::setting_id() const {
  SettingId s;
  s.variant = parse_variant(setting);
  if (s.is_jacobi())
    s.jp = {alpha, beta};
  else
    s.bo = {nu};
  return s;
}

PotentialSpec RunConfig::potential() const {
  PotentialSpec ps;
  ps.setting = setting_id();
  ps.sigma = sigma;
  ps.variant = variant == "bessel" ? PotentialVariant::Bessel : PotentialVariant::Riesz;
  return ps;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["setting"] = setting;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["nu"] = nu;
  j["sigma"] = sigma;
  j["variant"] = variant;
  j["p"] = num(p);
  j["q"] = num(q);
  j["n"] = n;
  j["x"] = x;
  j["y"] = y;
  j["t"] = t;
  j["grid"] = grid;
  j["grading"] = grading;
  j["tol"] = tol;
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["T"] = T;
  j["T_sub"] = T_sub;
  j["count"] = count;
  j["seed"] = seed;
  j["kind"] = kind;
  j["case"] = probe_case;
  j["out"] = out;
  j["gnuplot_script"] = gnuplot_script;
  return j;
}

void apply_config_stream(RunConfig& cfg, std::istream& is, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot open config file '" + path + "'");
  apply_config_stream(cfg, is, path);
}

}  // namespace spl::cli
