#include "wgnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "wgnls/io.hpp"

namespace wgnls {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct BadValue {
  std::string what;
};

double to_double(const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw BadValue{"expected a number, got '" + v + "'"};
  return out;
}

long long to_integer(const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw BadValue{"expected an integer, got '" + v + "'"};
  return out;
}

int to_int(const std::string& v) {
  const long long x = to_integer(v);
  if (x < -2147483647LL || x > 2147483647LL) throw BadValue{"integer out of range: " + v};
  return static_cast<int>(x);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw BadValue{"expected true or false, got '" + v + "'"};
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw BadValue{"expected a comma-separated list of numbers"};
  return out;
}

template <class T>
using Setter = std::function<void(T&, const std::string&)>;

template <class T>
using KeyTable = std::vector<std::pair<std::string, Setter<T>>>;

KeyTable<Grid3> grid_keys() {
  return {
      {"n_x", [](Grid3& g, const std::string& v) { g.n_x = to_int(v); }},
      {"n_y", [](Grid3& g, const std::string& v) { g.n_y = to_int(v); }},
      {"box_length", [](Grid3& g, const std::string& v) { g.box_length = to_double(v); }},
  };
}

void ensure_sponge(EvolveControls& c) {
  if (!c.sponge) c.sponge = Sponge{};
}

KeyTable<EvolveControls> control_keys() {
  return {
      {"dt", [](EvolveControls& c, const std::string& v) { c.dt = to_double(v); }},
      {"t_end", [](EvolveControls& c, const std::string& v) { c.t_end = to_double(v); }},
      {"cfl_safety", [](EvolveControls& c, const std::string& v) { c.cfl_safety = to_double(v); }},
      {"max_substeps", [](EvolveControls& c, const std::string& v) { c.max_substeps = to_int(v); }},
      {"dealias", [](EvolveControls& c, const std::string& v) { c.dealias = to_bool(v); }},
      {"sample_every", [](EvolveControls& c, const std::string& v) { c.sample_every = to_int(v); }},
      {"snapshot_every", [](EvolveControls& c, const std::string& v) { c.snapshot_every = to_int(v); }},
      {"blowup_factor", [](EvolveControls& c, const std::string& v) { c.blowup_factor = to_double(v); }},
      {"scatter_s", [](EvolveControls& c, const std::string& v) { c.scatter_s = to_double(v); }},
      {"scatter_ratio", [](EvolveControls& c, const std::string& v) { c.scatter_ratio = to_double(v); }},
      {"nonlinear", [](EvolveControls& c, const std::string& v) { c.nonlinear = to_bool(v); }},
      {"sponge_inner_radius",
       [](EvolveControls& c, const std::string& v) {
         ensure_sponge(c);
         c.sponge->inner_radius = to_double(v);
       }},
      {"sponge_strength",
       [](EvolveControls& c, const std::string& v) {
         ensure_sponge(c);
         c.sponge->strength = to_double(v);
       }},
  };
}

KeyTable<DatumSpec> datum_keys() {
  return {
      {"kind", [](DatumSpec& d, const std::string& v) { d.kind = v; }},
      {"amplitude", [](DatumSpec& d, const std::string& v) { d.amplitude = to_double(v); }},
      {"width", [](DatumSpec& d, const std::string& v) { d.width = to_double(v); }},
      {"y_modulation", [](DatumSpec& d, const std::string& v) { d.y_modulation = to_double(v); }},
      {"y_mode", [](DatumSpec& d, const std::string& v) { d.y_mode = to_int(v); }},
      {"a0", [](DatumSpec& d, const std::string& v) { d.a0 = to_double(v); }},
      {"a1", [](DatumSpec& d, const std::string& v) { d.a1 = to_double(v); }},
      {"mass_fraction", [](DatumSpec& d, const std::string& v) { d.mass_fraction = to_double(v); }},
      {"energy_fraction", [](DatumSpec& d, const std::string& v) { d.energy_fraction = to_double(v); }},
      {"path", [](DatumSpec& d, const std::string& v) { d.path = v; }},
  };
}

template <class Outer, class Inner>
KeyTable<Outer> lift(const KeyTable<Inner>& table, Inner Outer::*member) {
  KeyTable<Outer> out;
  for (const auto& [key, set] : table) {
    out.emplace_back(key, [set, member](Outer& o, const std::string& v) { set(o.*member, v); });
  }
  return out;
}

std::map<std::string, KeyTable<RunConfig>> top_sections() {
  std::map<std::string, KeyTable<RunConfig>> s;
  s["grid"] = lift(grid_keys(), &RunConfig::grid);
  s["controls"] = lift(control_keys(), &RunConfig::controls);
  s["datum"] = lift(datum_keys(), &RunConfig::datum);
  s["run"] = {
      {"constants_source", [](RunConfig& c, const std::string& v) { c.constants_source = v; }},
      {"c_choice",
       [](RunConfig& c, const std::string& v) {
         try {
           c.c_choice = parse_c_choice(v);
         } catch (const Error& e) {
           throw BadValue{e.what()};
         }
       }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         const long long x = to_integer(v);
         if (x < 0) throw BadValue{"seed must be >= 0"};
         c.seed = static_cast<std::uint64_t>(x);
       }},
      {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"workers", [](RunConfig& c, const std::string& v) { c.workers = to_int(v); }},
  };
  s["constants"] = {
      {"townes_n_x", [](RunConfig& c, const std::string& v) { c.constants.townes_grid.n_x = to_int(v); }},
      {"townes_box_length",
       [](RunConfig& c, const std::string& v) { c.constants.townes_grid.box_length = to_double(v); }},
      {"townes_tol", [](RunConfig& c, const std::string& v) { c.constants.townes_tol = to_double(v); }},
      {"sextic_n_x", [](RunConfig& c, const std::string& v) { c.constants.sextic.grid.n_x = to_int(v); }},
      {"sextic_box_length",
       [](RunConfig& c, const std::string& v) { c.constants.sextic.grid.box_length = to_double(v); }},
      {"sextic_tol", [](RunConfig& c, const std::string& v) { c.constants.sextic_tol = to_double(v); }},
      {"torus_modes", [](RunConfig& c, const std::string& v) { c.constants.torus_modes = to_int(v); }},
      {"c_star_samples", [](RunConfig& c, const std::string& v) { c.constants.c_star_samples = to_int(v); }},
  };
  s["weinstein"] = {
      {"n_max", [](RunConfig& c, const std::string& v) { c.weinstein.n_max = to_int(v); }},
      {"n_x", [](RunConfig& c, const std::string& v) { c.weinstein.grid.n_x = to_int(v); }},
      {"box_length", [](RunConfig& c, const std::string& v) { c.weinstein.grid.box_length = to_double(v); }},
  };
  s["large_scale"] = {
      {"lambdas", [](RunConfig& c, const std::string& v) { c.large_scale.lambdas = to_list(v); }},
      {"t_end", [](RunConfig& c, const std::string& v) { c.large_scale.t_end = to_double(v); }},
      {"dt", [](RunConfig& c, const std::string& v) { c.large_scale.options.dt = to_double(v); }},
      {"full_dt_max", [](RunConfig& c, const std::string& v) { c.large_scale.options.full_dt_max = to_double(v); }},
      {"samples", [](RunConfig& c, const std::string& v) { c.large_scale.options.samples = to_int(v); }},
      {"phase_convention",
       [](RunConfig& c, const std::string& v) {
         try {
           c.large_scale.options.phase = parse_phase_convention(v);
         } catch (const Error& e) {
           throw BadValue{e.what()};
         }
       }},
  };
  s["virial"] = {
      {"radius", [](RunConfig& c, const std::string& v) { c.virial.radius = to_double(v); }},
      {"exterior_mass", [](RunConfig& c, const std::string& v) { c.virial.exterior_mass = to_double(v); }},
  };
  s["gn_test"] = {
      {"samples", [](RunConfig& c, const std::string& v) { c.gn_test.samples = to_int(v); }},
  };
  return s;
}

KeyTable<CampaignRow> row_keys() {
  KeyTable<CampaignRow> t = {
      {"system",
       [](CampaignRow& r, const std::string& v) {
         try {
           r.system = parse_system(v);
         } catch (const Error& e) {
           throw BadValue{e.what()};
         }
       }},
  };
  for (auto& e : lift(grid_keys(), &CampaignRow::grid)) t.push_back(std::move(e));
  for (auto& e : lift(control_keys(), &CampaignRow::controls)) t.push_back(std::move(e));
  for (auto& e : lift(datum_keys(), &CampaignRow::datum)) t.push_back(std::move(e));
  return t;
}

template <class T>
const Setter<T>* find_key(const KeyTable<T>& table, const std::string& key) {
  for (const auto& [k, set] : table)
    if (k == key) return &set;
  return nullptr;
}

std::string suggest(const std::string& word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::string::npos, best_len = 0;
  for (const auto& c : candidates) {
    const std::size_t d = levenshtein(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
      best_len = std::max(word.size(), c.size());
    }
  }
  if (best.empty() || best_d > std::max<std::size_t>(2, best_len / 2)) return "";
  return " (did you mean '" + best + "'?)";
}

template <class T>
std::vector<std::string> key_names(const KeyTable<T>& table) {
  std::vector<std::string> out;
  for (const auto& e : table) out.push_back(e.first);
  return out;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  std::string where;
};

void validate_grid(const Grid3& g, const std::string& where, std::vector<std::string>& errs) {
  if (!is_power_of_two(g.n_x) || g.n_x < 8) errs.push_back(where + "n_x must be a power of two >= 8, got " + std::to_string(g.n_x));
  if (!is_power_of_two(g.n_y) || g.n_y < 8) errs.push_back(where + "n_y must be a power of two >= 8, got " + std::to_string(g.n_y));
  if (!(g.box_length > 0.0)) errs.push_back(where + "box_length must be > 0");
}

void validate_controls(const EvolveControls& c, const Grid3& g, const std::string& where,
                       std::vector<std::string>& errs) {
  try {
    c.validate(g);
  } catch (const Error& e) {
    errs.push_back(where + e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorKind::Config, "invalid configuration: " + join(violations, "; ")), violations_(std::move(violations)) {}

std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::pair<std::string, std::vector<std::string>>> config_schema() {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& [name, table] : top_sections()) out.emplace_back(name, key_names(table));
  out.emplace_back("row.*", key_names(row_keys()));
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  std::vector<std::string> errs;
  std::vector<Entry> entries;

  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    const auto hash = line.find_first_of("#;");
    std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        errs.push_back(where + "unterminated section header");
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      errs.push_back(where + "expected key = value");
      continue;
    }
    entries.push_back({section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), where});
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.rfind('.', eq);
    if (eq == std::string::npos || dot == std::string::npos) {
      errs.push_back("override '" + o + "': expected section.key=value");
      continue;
    }
    entries.push_back({trim(o.substr(0, dot)), trim(o.substr(dot + 1, eq - dot - 1)), trim(o.substr(eq + 1)),
                       "override '" + o + "': "});
  }

  RunConfig cfg;
  const auto sections = top_sections();
  const auto rows = row_keys();
  std::vector<std::string> section_names;
  for (const auto& [name, _] : sections) section_names.push_back(name);

  std::map<std::string, std::string> canonical;
  std::vector<std::string> row_order;
  std::map<std::string, std::vector<const Entry*>> row_entries;

  for (const auto& e : entries) {
    canonical[e.section + "." + e.key] = e.value;
    if (e.section.empty()) {
      errs.push_back(e.where + "key '" + e.key + "' appears before any [section]");
      continue;
    }
    if (e.section.rfind("row.", 0) == 0) {
      const std::string name = e.section.substr(4);
      if (name.empty()) {
        errs.push_back(e.where + "campaign row section needs a name, e.g. [row.subthreshold]");
        continue;
      }
      if (!find_key(rows, e.key)) {
        errs.push_back(e.where + "unknown key '" + e.key + "' in [" + e.section + "]" + suggest(e.key, key_names(rows)));
        continue;
      }
      if (!row_entries.count(name)) row_order.push_back(name);
      row_entries[name].push_back(&e);
      continue;
    }
    const auto it = sections.find(e.section);
    if (it == sections.end()) {
      errs.push_back(e.where + "unknown section [" + e.section + "]" + suggest(e.section, section_names));
      continue;
    }
    const auto* set = find_key(it->second, e.key);
    if (!set) {
      errs.push_back(e.where + "unknown key '" + e.key + "' in [" + e.section + "]" +
                     suggest(e.key, key_names(it->second)));
      continue;
    }
    try {
      (*set)(cfg, e.value);
    } catch (const BadValue& b) {
      errs.push_back(e.where + e.section + "." + e.key + ": " + b.what);
    }
  }

  for (const auto& name : row_order) {
    CampaignRow row;
    row.name = name;
    row.grid = cfg.grid;
    row.controls = cfg.controls;
    row.datum = cfg.datum;
    for (const Entry* e : row_entries[name]) {
      try {
        (*find_key(rows, e->key))(row, e->value);
      } catch (const BadValue& b) {
        errs.push_back(e->where + e->section + "." + e->key + ": " + b.what);
      }
    }
    cfg.rows.push_back(std::move(row));
  }

  validate_grid(cfg.grid, "grid: ", errs);
  validate_controls(cfg.controls, cfg.grid, "controls: ", errs);
  for (const auto& row : cfg.rows) {
    const std::string where = "row." + row.name + ": ";
    validate_grid(row.grid, where, errs);
    validate_controls(row.controls, row.grid, where, errs);
  }
  if (cfg.workers < 0) errs.push_back("run.workers must be >= 0");
  if (cfg.constants_source.empty()) errs.push_back("run.constants_source must be 'compute' or a path");
  if (cfg.output_dir.empty()) errs.push_back("run.output_dir must not be empty");
  if (!is_power_of_two(cfg.constants.townes_grid.n_x) || cfg.constants.townes_grid.n_x < 8)
    errs.push_back("constants.townes_n_x must be a power of two >= 8");
  if (!is_power_of_two(cfg.constants.sextic.grid.n_x) || cfg.constants.sextic.grid.n_x < 8)
    errs.push_back("constants.sextic_n_x must be a power of two >= 8");
  if (cfg.constants.torus_modes < 1) errs.push_back("constants.torus_modes must be >= 1");
  if (cfg.constants.c_star_samples < 1) errs.push_back("constants.c_star_samples must be >= 1");
  if (cfg.weinstein.n_max < 1) errs.push_back("weinstein.n_max must be >= 1");
  if (!is_power_of_two(cfg.weinstein.grid.n_x) || cfg.weinstein.grid.n_x < 8)
    errs.push_back("weinstein.n_x must be a power of two >= 8");
  if (!(cfg.weinstein.grid.box_length > 0.0)) errs.push_back("weinstein.box_length must be > 0");
  const auto& ls = cfg.large_scale;
  for (std::size_t i = 0; i < ls.lambdas.size(); ++i) {
    if (!(ls.lambdas[i] >= 1.0)) errs.push_back("large_scale.lambdas must all be >= 1");
    if (i > 0 && !(ls.lambdas[i] > ls.lambdas[i - 1])) errs.push_back("large_scale.lambdas must be strictly increasing");
  }
  if (!(ls.t_end > 0.0)) errs.push_back("large_scale.t_end must be > 0");
  if (!(ls.options.dt > 0.0)) errs.push_back("large_scale.dt must be > 0");
  if (!(ls.options.full_dt_max > 0.0)) errs.push_back("large_scale.full_dt_max must be > 0");
  if (ls.options.samples < 1) errs.push_back("large_scale.samples must be >= 1");
  if (cfg.virial.radius < 0.0) errs.push_back("virial.radius must be >= 0");
  if (!(cfg.virial.exterior_mass > 0.0 && cfg.virial.exterior_mass < 1.0))
    errs.push_back("virial.exterior_mass must lie in (0, 1)");
  if (cfg.gn_test.samples < 1) errs.push_back("gn_test.samples must be >= 1");

  if (!errs.empty()) throw ConfigError(std::move(errs));

  for (const auto& [k, v] : canonical) cfg.canonical += k + "=" + v + "\n";
  return cfg;
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  return parse_config_text(read_file(path), overrides);
}

}  // namespace wgnls
