// Command-line front end over the gradgraph C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gradgraph/gradgraph.h"

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

struct CliError {
  std::string name;
  std::string detail;
};

[[noreturn]] void invalid(const std::string& detail) { throw CliError{"INVALID_ARGUMENT", detail}; }

void check(gg_status s) {
  if (s != GG_OK) throw CliError{"", gg_last_error()};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "1.2", "pi/3", "2pi/3", "3*pi/4", "-pi".
double parse_real(const std::string& text, const std::string& key) {
  static const std::regex pi_form(R"(^\s*([+-]?(?:\d+\.?\d*(?:[eE][+-]?\d+)?)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    std::string c = m[1].str();
    double coef = 1.0;
    if (c == "-") coef = -1.0;
    else if (!c.empty() && c != "+") coef = std::stod(c);
    const double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (den == 0.0) invalid(key + ": zero denominator in '" + text + "'");
    return coef * kPi / den;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  invalid(key + ": cannot read '" + text + "' as a number or multiple of pi");
}

// JSON object with key tracking so typos are reported instead of ignored.
class Config {
 public:
  Config(json j, std::string path) : j_(std::move(j)), path_(std::move(path)) {
    if (!j_.is_object()) invalid((path_.empty() ? std::string("config") : path_) + " must be a JSON object");
  }

  bool has(const std::string& k) {
    used_.insert(k);
    return j_.contains(k) && !j_[k].is_null();
  }

  double real(const std::string& k, double def) {
    if (!has(k)) return def;
    const json& v = j_[k];
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_real(v.get<std::string>(), name(k));
    invalid(name(k) + " must be a number or a string such as \"pi/3\"");
  }

  int integer(const std::string& k, int def) {
    if (!has(k)) return def;
    const json& v = j_[k];
    if (!v.is_number_integer()) invalid(name(k) + " must be an integer");
    return v.get<int>();
  }

  std::string text(const std::string& k, const std::string& def) {
    if (!has(k)) return def;
    if (!j_[k].is_string()) invalid(name(k) + " must be a string");
    return j_[k].get<std::string>();
  }

  Config sub(const std::string& k) {
    if (!has(k)) return Config(json::object(), name(k));
    return Config(j_[k], name(k));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) invalid("unknown config key '" + name(it.key()) + "'");
    }
  }

 private:
  std::string name(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  json j_;
  std::string path_;
  std::set<std::string> used_;
};

struct Options {
  std::string config;
  std::string out = "-";
  std::string format = "csv";
  std::uint64_t seed = 11;
  bool seed_given = false;
  std::string only;
};

Config load_config(const Options& o) {
  if (o.config.empty()) return Config(json::object(), "");
  std::string text;
  if (o.config == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream is(o.config);
    if (!is) throw CliError{"IO_ERROR", "cannot open config " + o.config};
    text.assign(std::istreambuf_iterator<char>(is), {});
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw CliError{"IO_ERROR", "config " + o.config + " is not valid JSON"};
  return Config(std::move(j), "");
}

void emit(const Options& o, const std::string& s) {
  if (o.out == "-") {
    std::cout << s;
    std::cout.flush();
    return;
  }
  std::ofstream os(o.out);
  os << s;
  if (!os) throw CliError{"IO_ERROR", "cannot write " + o.out};
}

// Flat CSV: one header row and one value row.
std::string flat_csv(const json& j) {
  std::string head, row;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!head.empty()) {
      head += ',';
      row += ',';
    }
    head += it.key();
    if (it.value().is_number()) row += num(it.value().get<double>());
    else if (it.value().is_null()) row += "";
    else if (it.value().is_boolean()) row += it.value().get<bool>() ? "true" : "false";
    else row += it.value().get<std::string>();
  }
  return head + "\n" + row + "\n";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

gg_grid read_grid(Config c, gg_grid def) {
  gg_grid g{c.real("r_min", def.r_min), c.real("r_max", def.r_max), c.integer("n_r", def.n_r),
            c.integer("n_theta", def.n_theta)};
  c.finish();
  return g;
}

std::string fit_json(const gg_fit_report& r) {
  std::size_t len = 0;
  check(gg_fit_report_json(&r, nullptr, 0, &len));
  std::string s(len + 1, '\0');
  check(gg_fit_report_json(&r, s.data(), s.size(), &len));
  s.resize(len);
  return s;
}

int run_calibrate(Config cfg, const Options& o) {
  const double tau = cfg.real("tau", 0.0);
  const double f_inf = cfg.real("f_inf", 0.0);
  const bool diag = cfg.has("lam1");
  const double lam1 = cfg.real("lam1", 0.0);
  cfg.finish();
  gg_tau_info info;
  check(gg_tau_info_get(tau, &info));
  gg_calibration c;
  check(diag ? gg_calibrate(tau, f_inf, lam1, &c) : gg_calibrate_isotropic(tau, f_inf, &c));
  json j;
  j["branch"] = info.branch_name;
  j["lam1"] = c.lam1;
  j["lam2"] = c.lam2;
  j["A11"] = c.A[0];
  j["A12"] = c.A[1];
  j["A22"] = c.A[2];
  j["P11"] = c.P[0];
  j["P12"] = c.P[1];
  j["P22"] = c.P[2];
  const bool js = o.format == "json";
  j["range_lo"] = js ? finite_or_null(c.range_lo) : json(c.range_lo);
  j["range_hi"] = js ? finite_or_null(c.range_hi) : json(c.range_hi);
  emit(o, js ? j.dump(2) + "\n" : flat_csv(j));
  return 0;
}

struct Source {
  double amp, exponent, log_power;
  int k;
  double phase;
};

double source_value(double r, double theta, void* user) {
  const Source& s = *static_cast<const Source*>(user);
  double v = s.amp * std::pow(r, -s.exponent) * std::cos(s.k * theta - s.phase);
  if (s.log_power != 0.0) v *= std::pow(std::log(r), s.log_power);
  return v;
}

struct FieldHandle {
  gg_field* f = nullptr;
  ~FieldHandle() { gg_field_destroy(f); }
};

int run_poisson(Config cfg, const Options& o) {
  FieldHandle g;
  if (cfg.has("input")) {
    const std::string path = cfg.text("input", "");
    if (cfg.has("grid") || cfg.has("source")) invalid("give either input or grid/source, not both");
    check(gg_field_read_csv(path.c_str(), &g.f));
  } else {
    const gg_grid grid = read_grid(cfg.sub("grid"), {2.0, 200.0, 256, 32});
    Config sc = cfg.sub("source");
    Source src{sc.real("amp", 1.0), sc.real("exponent", 3.0), sc.real("log_power", 0.0),
               sc.integer("k", 0), sc.real("phase", 0.0)};
    sc.finish();
    check(gg_field_sample(&grid, source_value, &src, &g.f));
  }
  gg_poisson_options po;
  gg_poisson_options_default(&po);
  po.k_max = cfg.integer("k_max", po.k_max);
  po.reference_radius = cfg.real("reference_radius", po.reference_radius);
  if (cfg.has("decay")) {
    Config dc = cfg.sub("decay");
    po.has_decay = 1;
    po.k1 = dc.real("k1", 3.0);
    po.k2 = dc.real("k2", 0.0);
    dc.finish();
  }
  cfg.finish();

  FieldHandle v;
  gg_poisson_info info;
  check(gg_poisson_solve(g.f, &po, &v.f, &info));
  if (o.format == "json") {
    gg_decay d;
    check(gg_field_decay(v.f, &d));
    json j;
    j["source_k1"] = info.source_k1;
    j["source_k2"] = info.source_k2;
    j["modes_solved"] = info.modes_solved;
    j["residual"] = info.residual;
    j["solution_p"] = d.p;
    j["solution_q"] = d.q;
    emit(o, j.dump(2) + "\n");
  } else {
    check(gg_field_write_csv(v.f, o.out.c_str()));
  }
  return 0;
}

int run_radial(Config cfg, const Options& o) {
  gg_radial_problem pr;
  pr.tau = cfg.real("tau", 0.0);
  pr.f_inf = cfg.real("f_inf", 0.0);
  pr.amp = cfg.real("amp", 0.5);
  pr.zeta = cfg.real("zeta", 3.0);
  pr.r0 = cfg.real("r0", 1.0);
  pr.u0 = cfg.real("u0", 0.5);
  pr.du0 = cfg.real("du0", 1.0);
  pr.r_max = cfg.real("r_max", 1e4);
  pr.n_steps = cfg.integer("n_steps", 20000);
  Config fc = cfg.sub("fit");
  gg_fit_options fo;
  gg_fit_options_default(&fo);
  fo.r_lo = fc.real("r_lo", 10.0);
  fo.r_hi = fc.real("r_hi", pr.r_max);
  fc.finish();
  cfg.finish();
  if (pr.n_steps < 1000) invalid("n_steps=" + std::to_string(pr.n_steps) + " below 1000");

  gg_profile* prof = nullptr;
  const gg_status s = gg_radial_integrate(&pr, &prof);
  const std::string err = gg_last_error();
  struct Guard {
    gg_profile* p;
    ~Guard() { gg_profile_destroy(p); }
  } guard{prof};
  if (s != GG_OK) {
    if (prof && o.format == "csv" && o.out != "-") gg_profile_write_csv(prof, o.out.c_str());
    throw CliError{"", err};
  }
  if (o.format == "json") {
    gg_fit_report r;
    check(gg_fit_radial(prof, pr.tau, pr.f_inf, &fo, &r));
    emit(o, fit_json(r) + "\n");
  } else {
    check(gg_profile_write_csv(prof, o.out.c_str()));
  }
  return 0;
}

gg_coefficients read_coefficients(Config c) {
  gg_coefficients cf{};
  cf.A[0] = c.real("A11", 1.0);
  cf.A[1] = c.real("A12", 0.0);
  cf.A[2] = c.real("A22", 1.0);
  cf.b[0] = c.real("b1", 0.0);
  cf.b[1] = c.real("b2", 0.0);
  cf.c = c.real("c", 0.0);
  cf.d = c.real("d", 0.0);
  cf.d1 = c.real("d1", 0.0);
  cf.d2 = c.real("d2", 0.0);
  c.finish();
  return cf;
}

int run_manufacture(Config cfg, const Options& o) {
  const double tau = cfg.real("tau", kPi / 2);
  const gg_coefficients cf = read_coefficients(cfg.sub("coefficients"));
  const gg_grid grid = read_grid(cfg.sub("grid"), {10.0, 1e3, 64, 32});
  const std::string what = cfg.text("output", "rhs");
  const double p_scale = cfg.real("p_scale", 1.0);
  cfg.finish();
  if (what != "rhs" && what != "u") invalid("output must be \"rhs\" or \"u\", got \"" + what + "\"");

  FieldHandle f;
  double f_inf = 0.0;
  gg_decay d;
  check(gg_manufacture(&cf, tau, &grid, &f.f, &f_inf, &d));
  if (o.format == "json") {
    json j;
    j["f_inf"] = f_inf;
    j["k1"] = finite_or_null(d.p);
    j["k2"] = finite_or_null(d.q);
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  if (what == "u") {
    FieldHandle u;
    check(gg_sample_expansion(&cf, tau, &grid, p_scale, &u.f));
    check(gg_field_write_csv(u.f, o.out.c_str()));
  } else {
    check(gg_field_write_csv(f.f, o.out.c_str()));
  }
  return 0;
}

int run_extract(Config cfg, const Options& o) {
  const double tau = cfg.real("tau", kPi / 2);
  const double f_inf = cfg.real("f_inf", kPi / 2);
  if (!cfg.has("input")) invalid("extract needs \"input\": a field CSV with columns r,theta,value");
  const std::string input = cfg.text("input", "");
  gg_fit_options fo;
  gg_fit_options_default(&fo);
  Config wc = cfg.sub("window");
  fo.r_lo = wc.real("r_lo", fo.r_lo);
  fo.r_hi = wc.real("r_hi", fo.r_hi);
  wc.finish();
  fo.p_scale = cfg.real("p_scale", 1.0);
  cfg.finish();

  FieldHandle u;
  check(gg_field_read_csv(input.c_str(), &u.f));
  gg_fit_report r;
  check(gg_fit_expansion(u.f, tau, f_inf, &fo, &r));
  const std::string js = fit_json(r);
  emit(o, o.format == "json" ? js + "\n" : flat_csv(json::parse(js)));
  return 0;
}

int run_verify_suite(Config cfg, const Options& o) {
  std::uint64_t seed = cfg.has("seed") ? static_cast<std::uint64_t>(cfg.integer("seed", 11)) : 11;
  std::string only = cfg.text("only", "");
  cfg.finish();
  if (o.seed_given) seed = o.seed;
  if (!o.only.empty()) only = o.only;

  gg_suite* s = nullptr;
  check(gg_suite_run(seed, only.c_str(), &s));
  struct Guard {
    gg_suite* s;
    ~Guard() { gg_suite_destroy(s); }
  } guard{s};

  const std::size_t n = gg_suite_size(s);
  std::size_t passed = 0;
  json j;
  for (std::size_t i = 0; i < n; ++i) {
    gg_suite_row row;
    check(gg_suite_row_get(s, i, &row));
    passed += row.pass ? 1 : 0;
    j[row.check] = row.pass != 0;
    if (!row.pass) {
      std::cerr << "FAIL " << row.check << ": expected " << num(row.expected) << ", observed "
                << num(row.observed) << ", tolerance " << num(row.tolerance) << "\n";
    }
  }
  j["pass"] = gg_suite_pass(s) != 0;
  emit(o, o.format == "json" ? j.dump(2) + "\n" : std::string(gg_suite_csv(s)));
  std::cerr << passed << "/" << n << " checks passed\n";
  return gg_suite_pass(s) ? 0 : 1;
}

const char* kConfigHelp = R"(Configuration is one JSON object (--config PATH, or - for standard input).
Angles and phases accept numbers or strings like "pi/3". Defaults:

  calibrate     {"tau": 0, "f_inf": 0, "lam1": <absent: isotropic A = lam I>}
  poisson       {"grid": {"r_min": 2, "r_max": 200, "n_r": 256, "n_theta": 32},
                 "source": {"amp": 1, "exponent": 3, "log_power": 0, "k": 0, "phase": 0},
                 "input": <field CSV instead of grid/source>, "k_max": 16,
                 "reference_radius": 1, "decay": <absent: measured; else {"k1", "k2"}>}
                source g = amp r^-exponent (ln r)^log_power cos(k theta - phase)
  radial        {"tau": 0, "f_inf": 0, "amp": 0.5, "zeta": 3, "r0": 1, "u0": 0.5,
                 "du0": 1, "r_max": 10000, "n_steps": 20000 (>= 1000),
                 "fit": {"r_lo": 10, "r_hi": r_max}}
  manufacture   {"tau": "pi/2", "coefficients": {"A11": 1, "A12": 0, "A22": 1,
                 "b1": 0, "b2": 0, "c": 0, "d": 0, "d1": 0, "d2": 0},
                 "grid": {"r_min": 10, "r_max": 1000, "n_r": 64, "n_theta": 32},
                 "output": "rhs" | "u", "p_scale": 1}
  extract       {"tau": "pi/2", "f_inf": "pi/2", "input": <field CSV, required>,
                 "window": {"r_lo": 100, "r_hi": 10000}, "p_scale": 1}
  verify-suite  {"seed": 11, "only": <check group>}

Exit codes: 0 success, 1 failed suite row, 2 input or domain error.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotics of gradient-graph equations F_tau(lambda(D^2 u)) = f in the plane"};
  app.footer(kConfigHelp);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(gg_version()));

  Options o;
  app.add_option("--config", o.config, "JSON config path, or - for standard input");
  app.add_option("--out", o.out, "output path (default: standard output)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { o.seed = s; o.seed_given = true; },
      "suite seed (default 11)");
  std::string groups;
  for (std::size_t i = 0; i < gg_suite_group_count(); ++i) {
    groups += std::string(i ? ", " : "") + gg_suite_group_name(i);
  }
  app.add_option("--only", o.only, "run one suite group: " + groups);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(Config, const Options&);
  };
  const Command commands[] = {
      {"calibrate", "eigenvalues of A, A and P for a limit value f_inf", run_calibrate},
      {"poisson", "exterior Poisson solve on an annulus; CSV field of v", run_poisson},
      {"radial", "radial RK4 profile (CSV) or its expansion fit (JSON)", run_radial},
      {"manufacture", "right-hand side (or samples) of an exact expansion", run_manufacture},
      {"extract", "fit expansion coefficients to a sampled field", run_extract},
      {"verify-suite", "run the verification checks; exit 1 on any failure", run_verify_suite},
  };
  int (*selected)(Config, const Options&) = nullptr;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&selected, run = c.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return selected(load_config(o), o);
  } catch (const CliError& e) {
    std::cerr << "error: " << (e.name.empty() ? "" : e.name + ": ") << e.detail << "\n";
    return 2;
  }
}
