#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "spl/envelopes.hpp"
#include "spl/kernels.hpp"
#include "spl/mapping.hpp"
#include "spl/measures.hpp"
#include "spl/potentials.hpp"
#include "spl/specfun.hpp"

namespace spl::cli {

using nlohmann::json;

namespace {

struct Context {
  RunConfig cfg;
  std::set<std::string> given;  // keys set by the config file or a flag
  std::vector<std::string> warnings;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::string command;

  bool has(const std::string& k) const { return given.count(k) > 0; }
  void warn(const std::string& w) {
    warnings.push_back(w);
    *err << "warning: " << w << "\n";
  }
};

json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

json kv_json(const KernelValue& kv) { return {{"value", num(kv.value)}, {"error_bound", num(kv.tail_bound)}}; }

double exponent_of(double v) { return v == 0 ? std::numeric_limits<double>::infinity() : v; }

void check_sigma(Context& c) {
  const SettingId s = c.cfg.setting_id();
  if (near_activation(s, c.cfg.sigma))
    c.warn("sigma is within 1e-6 of an indicator threshold but not on it; the envelope switches branch there");
}

// report with the resolved config, to --out or the output stream
void emit(Context& c, json result) {
  json r;
  r["command"] = c.command;
  r["config"] = c.cfg.to_json();
  r["result"] = std::move(result);
  r["warnings"] = c.warnings;
  const std::string text = r.dump(2) + "\n";
  if (c.cfg.out.empty()) {
    *c.out << text;
    return;
  }
  std::ofstream f(c.cfg.out);
  if (!f) throw ParameterError("cannot write '" + c.cfg.out + "'");
  f << text;
}

// CSV goes to --out (or the output stream); the JSON summary goes to the output stream
void emit_csv(Context& c, const std::function<void(std::ostream&)>& body, json summary) {
  if (c.cfg.out.empty()) {
    body(*c.out);
    return;
  }
  {
    std::ofstream f(c.cfg.out);
    if (!f) throw ParameterError("cannot write '" + c.cfg.out + "'");
    body(f);
  }
  summary["csv"] = c.cfg.out;
  json r;
  r["command"] = c.command;
  r["config"] = c.cfg.to_json();
  r["result"] = std::move(summary);
  r["warnings"] = c.warnings;
  *c.out << r.dump(2) << "\n";
}

json band_json(const EnvelopeBand& b) {
  json j;
  j["lower_ratio"] = num(b.lower_ratio);
  j["upper_ratio"] = num(b.upper_ratio);
  j["spread"] = num(b.spread());
  j["sample_count"] = b.sample_count;
  j["bad_count"] = b.bad_count;
  j["argmin"] = b.argmin;
  j["argmax"] = b.argmax;
  j["ok"] = b.ok();
  return j;
}

json pair_json(const ExponentPair& e) { return {{"inv_p", e.inv_p}, {"inv_q", e.inv_q}}; }

// ---- specfun ----

void specfun_bessel_j(Context& c) {
  emit(c, {{"nu", c.cfg.nu}, {"x", c.cfg.x}, {"value", num(bessel_j(c.cfg.nu, c.cfg.x))}});
}

void specfun_bessel_zero(Context& c) {
  if (!c.has("n")) c.cfg.n = 1;
  emit(c, {{"nu", c.cfg.nu}, {"n", c.cfg.n}, {"value", num(bessel_zero(BesselOrder{c.cfg.nu}, c.cfg.n))}});
}

void specfun_eigenvalue(Context& c) {
  const SettingId s = c.cfg.setting_id();
  emit(c, {{"setting", s.describe()}, {"n", c.cfg.n}, {"eigenvalue", num(eigenvalue(s, c.cfg.n))}});
}

void specfun_eigfun(Context& c) {
  const SettingId s = c.cfg.setting_id();
  emit(c, {{"setting", s.describe()}, {"n", c.cfg.n}, {"x", c.cfg.x}, {"value", num(eigfun(s, c.cfg.n, c.cfg.x))}});
}

// ---- kernel ----

KernelOptions kernel_options(const Context& c) {
  KernelOptions o;
  o.T_sub = c.cfg.T_sub;
  return o;
}

void kernel_eval(Context& c, const std::string& which) {
  const SettingId s = c.cfg.setting_id();
  const auto o = kernel_options(c);
  KernelValue kv;
  if (which == "poisson")
    kv = poisson_kernel(s, c.cfg.t, c.cfg.x, c.cfg.y, c.cfg.tol, o);
  else if (which == "heat")
    kv = heat_kernel(s, c.cfg.t, c.cfg.x, c.cfg.y, c.cfg.tol, o);
  else
    kv = subordinated_poisson(s, c.cfg.t, c.cfg.x, c.cfg.y, c.cfg.tol, o);
  json r = kv_json(kv);
  r["kernel"] = which;
  emit(c, r);
}

void kernel_slice(Context& c) {
  if (!c.has("kind")) c.cfg.kind = "poisson";
  if (c.cfg.kind != "poisson" && c.cfg.kind != "heat") throw ParameterError("kind must be poisson or heat");
  const SettingId s = c.cfg.setting_id();
  const auto xs = graded_points(s.length(), c.cfg.grid, c.cfg.grading);
  emit_csv(
      c,
      [&](std::ostream& os) {
        write_kernel_slice_csv(os, s, c.cfg.kind == "heat", {c.cfg.t}, xs, {c.cfg.y}, c.cfg.tol, kernel_options(c));
      },
      {{"rows", xs.size()}});
}

// subordinated form against the direct series at seeded random points
void kernel_subordination_check(Context& c) {
  const SettingId s = c.cfg.setting_id();
  std::mt19937_64 rng(c.cfg.seed);
  std::uniform_real_distribution<double> ut(0.05, 2.0), ux(0.0, 1.0);
  const double L = s.length();
  double worst = 0;
  json rows = json::array();
  for (int i = 0; i < c.cfg.count; ++i) {
    const double t = ut(rng), x = L * (0.001 + 0.998 * ux(rng)), y = L * (0.001 + 0.998 * ux(rng));
    const double a = subordinated_poisson(s, t, x, y, 1e-12, kernel_options(c)).value;
    const double b = poisson_kernel(s, t, x, y, 1e-14, kernel_options(c)).value;
    const double rel = std::fabs(a - b) / std::fabs(b);
    worst = std::max(worst, rel);
    rows.push_back({{"t", t}, {"x", x}, {"y", y}, {"subordinated", num(a)}, {"direct", num(b)}, {"rel", num(rel)}});
  }
  emit(c, {{"max_rel_error", num(worst)}, {"samples", rows}});
}

// ---- potential ----

void potential_kernel_cmd(Context& c) {
  check_sigma(c);
  const PotentialSpec ps = c.cfg.potential();
  const auto kv = potential_kernel(ps, c.cfg.x, c.cfg.y, c.cfg.tol);
  json r = kv_json(kv);
  const double env = potential_envelope(ps.setting, ps.sigma, c.cfg.x, c.cfg.y);
  r["envelope"] = num(env);
  r["ratio"] = num(kv.value / env);
  emit(c, r);
}

void potential_slice(Context& c) {
  check_sigma(c);
  const PotentialSpec ps = c.cfg.potential();
  const auto xs = graded_points(ps.setting.length(), c.cfg.grid, c.cfg.grading);
  emit_csv(
      c,
      [&](std::ostream& os) {
        os.precision(17);
        os << "x,y,value,error_bound,envelope\n";
        for (double x : xs) {
          if (x == c.cfg.y && ps.sigma <= 0.5) continue;
          const auto kv = potential_kernel(ps, x, c.cfg.y, c.cfg.tol);
          os << x << "," << c.cfg.y << "," << kv.value << "," << kv.tail_bound << ","
             << potential_envelope(ps.setting, ps.sigma, x, c.cfg.y) << "\n";
        }
      },
      {{"rows", xs.size()}});
}

// ---- envelope ----

void envelope_compare(Context& c) {
  if (!c.has("kind")) c.cfg.kind = "potential";
  if (c.cfg.kind == "potential") {
    check_sigma(c);
    if (!c.has("tol")) c.cfg.tol = 1e-6;
    PotentialBandSpec b;
    b.potential = c.cfg.potential();
    b.grid = c.cfg.grid;
    b.grading = c.cfg.grading;
    b.rel_tol = c.cfg.tol;
    emit(c, band_json(potential_band(b)));
  } else if (c.cfg.kind == "poisson") {
    if (!c.has("tol")) c.cfg.tol = 1e-30;
    PoissonBandSpec b;
    b.setting = c.cfg.setting_id();
    b.ts = log_space(c.cfg.t_min, c.cfg.t_max, 20);
    b.grid = c.cfg.grid;
    b.grading = c.cfg.grading;
    b.T = c.cfg.T;
    b.tol = c.cfg.tol;
    emit(c, band_json(poisson_band(b)));
  } else {
    throw ParameterError("kind must be potential or poisson");
  }
}

void envelope_eval(Context& c) {
  const SettingId s = c.cfg.setting_id();
  json r;
  if (c.cfg.kind == "poisson") {
    r["envelope"] = num(poisson_envelope(s, c.cfg.t, c.cfg.x, c.cfg.y, c.cfg.T));
  } else {
    check_sigma(c);
    r["envelope"] = num(potential_envelope(s, c.cfg.sigma, c.cfg.x, c.cfg.y));
  }
  emit(c, r);
}

// ---- mapping ----

ClassifierOptions classifier_options(const Context& c) {
  ClassifierOptions o;
  if (c.cfg.kind == "strict")
    o.mode = ClassifyMode::Strict;
  else if (!c.cfg.kind.empty() && c.cfg.kind != "resolved")
    throw ParameterError("kind must be resolved or strict");
  return o;
}

void mapping_classify(Context& c) {
  check_sigma(c);
  const PotentialSpec ps = c.cfg.potential();
  const ExponentPair pq = ExponentPair::from_pq(exponent_of(c.cfg.p), exponent_of(c.cfg.q));
  if (near_boundary(ps, pq)) c.warn("(1/p, 1/q) is within 1e-6 of a region boundary");
  const MappingType t = classify(ps, pq, classifier_options(c));
  // the plain answer always goes to stdout; the full report only with --out
  *c.out << mapping_type_name(t) << "\n";
  if (!c.cfg.out.empty()) {
    json r = pair_json(pq);
    r["type"] = mapping_type_name(t);
    emit(c, r);
  }
}

void mapping_grid(Context& c) {
  check_sigma(c);
  if (!c.has("grid")) c.cfg.grid = 64;
  const PotentialSpec ps = c.cfg.potential();
  const auto opt = classifier_options(c);
  json summary = {{"resolution", c.cfg.grid}};
  if (!c.cfg.gnuplot_script.empty()) {
    if (c.cfg.out.empty()) throw ParameterError("--gnuplot-script needs --out for the CSV it plots");
    std::ofstream g(c.cfg.gnuplot_script);
    if (!g) throw ParameterError("cannot write '" + c.cfg.gnuplot_script + "'");
    write_gnuplot_script(g, c.cfg.out, ps.setting.describe() + " sigma=" + std::to_string(ps.sigma));
    summary["gnuplot_script"] = c.cfg.gnuplot_script;
  }
  emit_csv(c, [&](std::ostream& os) { write_region_grid_csv(os, ps, c.cfg.grid, opt); }, summary);
}

void mapping_audit(Context& c) {
  if (!c.has("grid")) c.cfg.grid = 64;
  const auto v = consistency_audit(c.cfg.potential(), c.cfg.grid, classifier_options(c));
  json rows = json::array();
  for (const auto& a : v)
    rows.push_back({{"rule", a.rule}, {"at", pair_json(a.at)}, {"related", pair_json(a.related)}, {"detail", a.detail}});
  emit(c, {{"resolution", c.cfg.grid}, {"violations", rows}, {"clean", v.empty()}});
}

void mapping_catalog(Context& c) {
  json rows = json::array();
  for (const auto& d : disproof_catalog(c.cfg.potential()))
    rows.push_back({{"id", d.id},
                    {"component", d.component},
                    {"function", d.function_id},
                    {"at", pair_json(d.at)},
                    {"not_of_type", mapping_type_name(d.disproved)},
                    {"note", d.note}});
  emit(c, {{"disproofs", rows}});
}

// ---- probe ----

void probe_list(Context& c) {
  json rows = json::array();
  for (const auto& p : sharpness_probe_suite()) rows.push_back({{"id", p.id}, {"description", p.description}});
  emit(c, {{"probes", rows}});
}

json probe_json(const NamedProbe& p, const ProbeReport& r) {
  json j;
  j["id"] = p.id;
  j["description"] = p.description;
  j["case"] = p.spec.case_id;
  j["component"] = p.spec.op.component;
  j["pq"] = pair_json(p.spec.pq);
  j["ladder"] = r.ladder;
  json in = json::array(), outn = json::array(), ratio = json::array(), law = json::array();
  for (size_t i = 0; i < r.ladder.size(); ++i) {
    in.push_back(num(r.input_norm[i]));
    outn.push_back(num(r.output_norm[i]));
    ratio.push_back(num(r.ratio[i]));
    law.push_back(num(r.law_ratio[i]));
  }
  j["input_norm"] = in;
  j["output_norm"] = outn;
  j["ratio"] = ratio;
  j["law_ratio"] = law;
  j["fitted"] = num(r.fitted);
  j["predicted"] = num(r.predicted);
  j["band"] = num(r.band);
  j["confirmed"] = r.confirmed;
  j["verdict"] = r.verdict;
  return j;
}

void probe_run(Context& c) {
  json rows = json::array();
  bool found = false;
  for (const auto& p : sharpness_probe_suite()) {
    if (!c.cfg.probe_case.empty() && c.cfg.probe_case != p.id) continue;
    found = true;
    rows.push_back(probe_json(p, blowup_probe(p.spec)));
  }
  if (!found) throw ParameterError("no probe with id '" + c.cfg.probe_case + "' (see probe list)");
  emit(c, {{"probes", rows}});
}

using Handler = std::function<void(Context&)>;

struct Leaf {
  std::string name;
  std::string help;
  Handler run;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"spectral potential laboratory: kernels, envelopes, Lp-Lq mapping types", "spl"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override it");

  std::map<std::string, std::string> overrides;
  const std::map<std::string, std::vector<Leaf>> groups{
      {"specfun",
       {{"bessel-j", "J_nu(x)", specfun_bessel_j},
        {"bessel-zero", "n-th positive zero of J_nu", specfun_bessel_zero},
        {"eigenvalue", "n-th eigenvalue of the setting", specfun_eigenvalue},
        {"eigfun", "n-th normalized eigenfunction at x", specfun_eigfun}}},
      {"kernel",
       {{"poisson", "Poisson kernel at (t, x, y)", [](Context& c) { kernel_eval(c, "poisson"); }},
        {"heat", "heat kernel at (t, x, y)", [](Context& c) { kernel_eval(c, "heat"); }},
        {"subordinated", "Poisson kernel through subordination", [](Context& c) { kernel_eval(c, "subordinated"); }},
        {"slice", "CSV slice over a graded x grid at fixed t, y", kernel_slice},
        {"subordination-check", "seeded random comparison of the two Poisson forms", kernel_subordination_check}}},
      {"potential",
       {{"kernel", "potential kernel at (x, y) with its envelope", potential_kernel_cmd},
        {"slice", "CSV slice over a graded x grid at fixed y", potential_slice}}},
      {"envelope",
       {{"compare", "band of kernel/envelope over a graded grid (--kind potential|poisson)", envelope_compare},
        {"eval", "envelope value at (x, y) (or (t, x, y) with --kind poisson)", envelope_eval}}},
      {"mapping",
       {{"classify", "mapping type at (p, q)", mapping_classify},
        {"grid", "region grid CSV over (1/p, 1/q)", mapping_grid},
        {"audit", "consistency audit of the classifier", mapping_audit},
        {"catalog", "known counterexamples for this setting", mapping_catalog}}},
      {"probe",
       {{"list", "list the sharpness probes", probe_list}, {"run", "run all probes or --case ID", probe_run}}},
  };

  std::vector<std::pair<CLI::App*, std::pair<std::string, Handler>>> leaves;
  for (const auto& [gname, items] : groups) {
    CLI::App* g = app.add_subcommand(gname, gname + " commands");
    g->require_subcommand(1);
    g->fallthrough();
    for (const auto& leaf : items) {
      CLI::App* sub = g->add_subcommand(leaf.name, leaf.help);
      for (const auto& [key, help] : RunConfig::keys())
        sub->add_option_function<std::string>(
            "--" + key, [&overrides, key = key](const std::string& v) { overrides[key] = v; }, help);
      leaves.push_back({sub, {gname + " " + leaf.name, leaf.run}});
    }
  }

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  Context c;
  c.out = &out;
  c.err = &err;
  Handler handler;
  for (const auto& [sub, h] : leaves)
    if (sub->parsed()) {
      c.command = h.first;
      handler = h.second;
    }
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ParameterError("cannot open config file '" + config_path + "'");
      std::stringstream buf;
      buf << is.rdbuf();
      // record which keys the file sets
      std::string line;
      std::istringstream lines(buf.str());
      while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        const auto hash = line.find('#');
        if (eq == std::string::npos || (hash != std::string::npos && hash < eq)) continue;
        std::string k = line.substr(0, eq);
        k.erase(0, k.find_first_not_of(" \t"));
        k.erase(k.find_last_not_of(" \t") + 1);
        c.given.insert(k);
      }
      std::istringstream again(buf.str());
      apply_config_stream(c.cfg, again, config_path);
    }
    for (const auto& [k, v] : overrides) {
      c.cfg.set(k, v);
      c.given.insert(k);
    }
    c.cfg.validate();
    handler(c);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kParameterError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace spl::cli
