#include "vmsns/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace vmsns {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& where, const std::string& key,
                       const std::string& msg) {
  throw ConfigError(where + ": key '" + key + "': " + msg);
}

double parse_real(const std::string& where, const std::string& key,
                  const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  std::istringstream is(value);
  double v;
  char extra;
  if (!(is >> v) || (is >> extra))
    fail(where, key, "expected a real number (or 'inf'), got '" + value + "'");
  return v;
}

int parse_int(const std::string& where, const std::string& key,
              const std::string& value) {
  std::istringstream is(value);
  int v;
  char extra;
  if (!(is >> v) || (is >> extra))
    fail(where, key, "expected an integer, got '" + value + "'");
  return v;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& where, const std::string& key,
                          const std::string& value, Parse parse) {
  std::vector<T> out;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(where, key, "empty list element");
    out.push_back(parse(where, key, item));
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(N >= 1, "N must be >= 1");
  require(p >= 1, "p must be >= 1");
  require(k >= 0, "k must be >= 0");
  require(Re > 0.0, "Re must be > 0 (use 'inf' for inviscid)");
  require(dt > 0.0, "dt must be > 0");
  require(t_final >= 0.0, "t_final must be >= 0");
  require(picard_tol > 0.0, "picard_tol must be > 0");
  require(picard_max >= 1, "picard_max must be >= 1");
  require(dump_density >= 1, "dump_density must be >= 1");
  require(curv_amplitude >= 0.0 && curv_amplitude < 0.5,
          "curv_amplitude must lie in [0, 0.5)");
  for (int n : sweep_N) require(n >= 1, "sweep_N entries must be >= 1");
  for (int kk : sweep_k) require(kk >= 0, "sweep_k entries must be >= 0");
  for (double t : dump_times)
    require(t >= 0.0 && t <= t_final + 1e-12,
            "dump_times entries must lie in [0, t_final]");
}

void apply_config_override(RunConfig& cfg, const std::string& key,
                           const std::string& value,
                           const std::string& where) {
  const std::string v = trim(value);
  if (key == "case") {
    if (v == "tgv")
      cfg.case_kind = CaseKind::Tgv;
    else if (v == "rollup")
      cfg.case_kind = CaseKind::Rollup;
    else
      fail(where, key, "expected 'tgv' or 'rollup', got '" + v + "'");
  } else if (key == "mode") {
    if (v == "galerkin")
      cfg.mode = RunMode::Galerkin;
    else if (v == "vms")
      cfg.mode = RunMode::Vms;
    else if (v == "project-only")
      cfg.mode = RunMode::ProjectOnly;
    else
      fail(where, key,
           "expected 'galerkin', 'vms' or 'project-only', got '" + v + "'");
  } else if (key == "N") {
    cfg.N = parse_int(where, key, v);
  } else if (key == "p") {
    cfg.p = parse_int(where, key, v);
  } else if (key == "k") {
    cfg.k = parse_int(where, key, v);
  } else if (key == "mapping") {
    if (v == "orthogonal")
      cfg.mapping = Mapping::Orthogonal;
    else if (v == "curvilinear")
      cfg.mapping = Mapping::Curvilinear;
    else
      fail(where, key, "expected 'orthogonal' or 'curvilinear', got '" + v +
                           "'");
  } else if (key == "curv_amplitude") {
    cfg.curv_amplitude = parse_real(where, key, v);
  } else if (key == "Re") {
    cfg.Re = parse_real(where, key, v);
  } else if (key == "dt") {
    cfg.dt = parse_real(where, key, v);
  } else if (key == "t_final") {
    cfg.t_final = parse_real(where, key, v);
  } else if (key == "out_dir") {
    cfg.out_dir = v;
  } else if (key == "picard_tol") {
    cfg.picard_tol = parse_real(where, key, v);
  } else if (key == "picard_max") {
    cfg.picard_max = parse_int(where, key, v);
  } else if (key == "dump_times") {
    cfg.dump_times = parse_list<double>(where, key, v, parse_real);
  } else if (key == "dump_density") {
    cfg.dump_density = parse_int(where, key, v);
  } else if (key == "reference") {
    cfg.reference = v;
  } else if (key == "sweep_N") {
    cfg.sweep_N = parse_list<int>(where, key, v, parse_int);
  } else if (key == "sweep_k") {
    cfg.sweep_k = parse_list<int>(where, key, v, parse_int);
  } else {
    throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    apply_config_override(cfg, key, value,
                          path + ":" + std::to_string(lineno));
  }
  return cfg;
}

}  // namespace vmsns
