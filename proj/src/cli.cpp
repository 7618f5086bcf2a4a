#include "wgnls/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "wgnls/datum.hpp"
#include "wgnls/experiments.hpp"
#include "wgnls/io.hpp"
#include "wgnls/resonant.hpp"
#include "wgnls/thresholds.hpp"
#include "wgnls/townes.hpp"

namespace wgnls {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Collects every file a command writes so the manifest can list them.
class RunDir {
 public:
  explicit RunDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

  const fs::path& root() const { return root_; }

  void write(const std::string& rel, std::string_view contents) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    write_file_atomic(p.string(), contents);
    record(rel, contents);
  }

  void write_snapshot_file(const std::string& rel, const Field3& u, double t) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    write_snapshot(p.string(), u, t);
    record(rel, read_file(p.string()));
  }

  json inventory() const { return files_; }

 private:
  void record(const std::string& rel, std::string_view contents) {
    for (auto& f : files_)
      if (f["path"] == rel) {
        f = entry(rel, contents);
        return;
      }
    files_.push_back(entry(rel, contents));
  }
  static json entry(const std::string& rel, std::string_view contents) {
    return {{"path", rel}, {"bytes", contents.size()}, {"fnv1a64", hex64(fnv1a64(contents))}};
  }

  fs::path root_;
  json files_ = json::array();
};

Field3 load_datum(const CommandRequest& req, const RunConfig& cfg, const GNConstants& consts) {
  if (!req.snapshot.empty()) return read_snapshot(req.snapshot).field;
  return build_datum(cfg.datum, cfg.grid, consts, cfg.c_choice);
}

json outcome_json(const RunOutcome& o) {
  return {{"status", to_string(o.status)},
          {"t_final", o.t_final},
          {"steps", o.steps},
          {"initial_grad", num(o.initial_grad)},
          {"max_grad", num(o.max_grad)},
          {"nan_detected", o.nan_detected},
          {"max_substeps_used", o.max_substeps_used},
          {"scatter_accum", num(o.scatter_accum)},
          {"scatter_windows",
           {{"evaluated", o.windows.evaluated},
            {"decaying", o.windows.decaying},
            {"increments", {num(o.windows.increments[0]), num(o.windows.increments[1]), num(o.windows.increments[2])}}}}};
}

json outcome_json(const RsOutcome& o) {
  return {{"status", to_string(o.status)},     {"t_final", o.t_final},           {"steps", o.steps},
          {"initial_grad", num(o.initial_grad)}, {"max_grad", num(o.max_grad)}, {"nan_detected", o.nan_detected}};
}

json cmd_constants(const RunConfig& cfg, RunDir& dir, std::ostream& out) {
  ConstantsOptions opts = cfg.constants;
  opts.seed = cfg.seed;
  const GNConstants c = compute_constants(opts);
  const std::string text = to_json(c);
  dir.write("constants.json", text);
  const std::string cache = constants_cache_path();
  fs::create_directories(fs::absolute(cache).parent_path());
  save_constants(c, cache);
  out << text << '\n';
  return {{"constants_hash", hex64(fnv1a64(text))}, {"cache", cache}};
}

json cmd_classify(const CommandRequest& req, const RunConfig& cfg, const GNConstants& consts, RunDir& dir,
                  std::ostream& out) {
  const ThresholdReport r = classify(load_datum(req, cfg, consts), consts, cfg.c_choice);
  const std::string text = to_json(r);
  dir.write("classify.json", text);
  out << text << '\n';
  return {{"classification", to_string(r.classification)}};
}

json cmd_evolve(const CommandRequest& req, const RunConfig& cfg, const GNConstants& consts, RunDir& dir,
                std::ostream& out) {
  const Field3 u0 = load_datum(req, cfg, consts);
  cfg.controls.validate(u0.grid);
  const ThresholdReport r = classify(u0, consts, cfg.c_choice);
  dir.write("classify.json", to_json(r));
  SnapshotSink sink;
  if (cfg.controls.snapshot_every > 0) {
    sink = [&dir](const Field3& u, double t, std::size_t step) {
      char name[48];
      std::snprintf(name, sizeof name, "snapshots/step_%08zu.wgs", step);
      dir.write_snapshot_file(name, u, t);
    };
  }
  const RunOutcome o = evolve(u0, cfg.controls, sink);
  dir.write("time_series.csv", o.time_series.to_csv());
  dir.write_snapshot_file("final.wgs", o.final, o.t_final);
  json j = outcome_json(o);
  j["classification"] = to_string(r.classification);
  j["sponge"] = cfg.controls.sponge ? json{{"inner_radius", cfg.controls.sponge->inner_radius},
                                           {"strength", cfg.controls.sponge->strength}}
                                    : json(nullptr);
  dir.write("outcome.json", j.dump(2));
  out << "status " << to_string(o.status) << " t=" << o.t_final << '\n';
  return j;
}

json cmd_resonant(const CommandRequest& req, const RunConfig& cfg, const GNConstants& consts, RunDir& dir,
                  std::ostream& out) {
  const Field3 u0 = load_datum(req, cfg, consts);
  const VecField2 v = embed_from_torus(u0);
  const RsOutcome o = evolve_rs(v, cfg.controls);
  dir.write("resonant.csv", o.to_csv());
  json j = outcome_json(o);
  j["j_max"] = v.j_max;
  j["dropped_nyquist_fraction"] = num(nyquist_mass_fraction(u0));
  dir.write("outcome.json", j.dump(2));
  out << "status " << to_string(o.status) << " t=" << o.t_final << '\n';
  return j;
}

json cmd_weinstein(const RunConfig& cfg, RunDir& dir, std::ostream& out) {
  const TownesResult q = solve_townes_spectral(cfg.weinstein.grid, cfg.constants.townes_tol);
  const double c2d = gn_quotient_cubic(q.q);
  std::ostringstream csv;
  csv.precision(17);
  csv << "n,quotient,predicted,relative_error,ratio_to_half_c_gn_2d\n";
  for (int n = 1; n <= cfg.weinstein.n_max; ++n) {
    const double w = weinstein_quotient(weinstein_test_vector(q.q, n, n));
    const double pred = (4.0 * n * n + 4.0 * n + 1.0) / (8.0 * n * n + 6.0 * n + 1.0) * c2d;
    csv << n << ',' << w << ',' << pred << ',' << (w - pred) / pred << ',' << w / (0.5 * c2d) << '\n';
  }
  dir.write("weinstein.csv", csv.str());
  out << csv.str();
  return {{"c_gn_2d", c2d}, {"townes_iterations", q.iterations}};
}

json cmd_large_scale(const CommandRequest& req, const RunConfig& cfg, const GNConstants& consts, RunDir& dir,
                     std::ostream& out) {
  const Field3 u0 = load_datum(req, cfg, consts);
  const LargeScaleResult r = large_scale_compare(u0, cfg.large_scale.lambdas, cfg.large_scale.t_end,
                                                 cfg.large_scale.options);
  dir.write("large_scale.csv", r.to_csv());
  dir.write("large_scale_gaps.csv", r.gaps_to_csv());
  out << r.to_csv();
  json d = json::array();
  for (double x : r.deltas) d.push_back(num(x));
  return {{"phase_convention", to_string(r.phase)}, {"deltas", d}, {"nyquist_fraction", r.nyquist_fraction}};
}

json cmd_virial(const CommandRequest& req, const RunConfig& cfg, const GNConstants& consts, RunDir& dir,
                std::ostream& out) {
  const Field3 u0 = load_datum(req, cfg, consts);
  cfg.controls.validate(u0.grid);
  const double R = cfg.virial.radius > 0.0 ? cfg.virial.radius : radius_for_exterior_mass(u0, cfg.virial.exterior_mass);
  const VirialTrace tr = virial_trace(u0, R, cfg.controls);
  dir.write("virial.csv", tr.to_csv());
  out << "R=" << R << " exterior_mass=" << tr.exterior_mass << " max_relative_residual=" << tr.max_relative_residual()
      << '\n';
  return {{"R", R},
          {"exterior_mass", num(tr.exterior_mass)},
          {"max_abs_residual", num(tr.max_abs_residual())},
          {"max_relative_residual", num(tr.max_relative_residual())}};
}

json cmd_campaign(const RunConfig& cfg, const GNConstants& consts, const std::string& config_hash, RunDir& dir,
                  std::ostream& out) {
  if (cfg.rows.empty()) throw Error(ErrorKind::Config, "campaign needs at least one [row.NAME] section");
  const CampaignResult res = threshold_campaign(cfg.rows, consts, cfg.c_choice, cfg.workers, config_hash);
  dir.write("campaign.csv", res.to_csv());
  json rows = json::array();
  for (const auto& r : res.rows) {
    if (r.ok) dir.write("rows/" + r.name + ".csv", r.series_csv);
    rows.push_back({{"name", r.name},
                    {"ok", r.ok},
                    {"classification", r.ok ? to_string(r.report.classification) : ""},
                    {"status", r.ok ? to_string(r.status) : "error"},
                    {"error", r.error}});
  }
  out << res.to_csv();
  return {{"rows", rows}};
}

json cmd_gn_test(const RunConfig& cfg, const GNConstants& consts, RunDir& dir, std::ostream& out) {
  const double c = consts.c_star(cfg.c_choice);
  const Field2 q = sample_on_grid(townes_profile(), cfg.grid.xgrid());
  std::ostringstream csv;
  csv.precision(17);
  csv << "sample,lhs,first,second_per_c,residual,required_c\n";
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.gn_test.samples; ++i) {
    const Field3 u = random_test_field(cfg.grid, cfg.seed + static_cast<std::uint64_t>(i), &q);
    const MixedGnParts p = mixed_gn_parts(u, consts.mass_Q);
    const double r = p.residual(c);
    worst = std::min(worst, r);
    csv << i << ',' << p.lhs << ',' << p.first << ',' << p.second_per_c << ',' << r << ',' << p.required_c() << '\n';
  }
  dir.write("gn_test.csv", csv.str());
  out << "samples " << cfg.gn_test.samples << " c=" << c << " min_residual=" << worst << '\n';
  return {{"c", c}, {"samples", cfg.gn_test.samples}, {"min_residual", num(worst)}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"constants", "classify", "evolve",   "resonant-evolve", "weinstein",
                                                 "large-scale", "virial", "campaign", "gn-test"};
  return names;
}

int exit_code_for(ErrorKind kind) noexcept {
  return kind == ErrorKind::Usage || kind == ErrorKind::Config ? 2 : 1;
}

std::string constants_cache_path() {
  if (const char* p = std::getenv("WGNLS_CONSTANTS_CACHE"); p && *p) return p;
  if (const char* p = std::getenv("XDG_CACHE_HOME"); p && *p) return (fs::path(p) / "wgnls" / "constants.json").string();
  if (const char* p = std::getenv("HOME"); p && *p) return (fs::path(p) / ".cache" / "wgnls" / "constants.json").string();
  return "wgnls_constants.json";
}

GNConstants obtain_constants(const RunConfig& cfg) {
  if (cfg.constants_source != "compute") return load_constants(cfg.constants_source);
  const std::string cache = constants_cache_path();
  if (fs::exists(cache)) return load_constants(cache);
  ConstantsOptions opts = cfg.constants;
  opts.seed = cfg.seed;
  const GNConstants c = compute_constants(opts);
  fs::create_directories(fs::absolute(cache).parent_path());
  save_constants(c, cache);
  return c;
}

int run_command(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  const std::string started = utc_now();
  try {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), req.command) == names.end()) {
      throw Error(ErrorKind::Usage, "unknown command '" + req.command + "'");
    }
    const RunConfig cfg = req.config_path.empty() ? parse_config_text("", req.overrides)
                                                  : parse_config(req.config_path, req.overrides);
    const std::string config_hash = hex64(fnv1a64(cfg.canonical));
    RunDir dir(req.output_dir.empty() ? cfg.output_dir : req.output_dir);

    json outcome;
    std::string constants_hash;
    if (req.command == "constants") {
      outcome = cmd_constants(cfg, dir, out);
      constants_hash = outcome["constants_hash"];
    } else if (req.command == "weinstein") {
      outcome = cmd_weinstein(cfg, dir, out);
    } else {
      const GNConstants consts = obtain_constants(cfg);
      constants_hash = hex64(fnv1a64(to_json(consts)));
      if (req.command == "classify") outcome = cmd_classify(req, cfg, consts, dir, out);
      else if (req.command == "evolve") outcome = cmd_evolve(req, cfg, consts, dir, out);
      else if (req.command == "resonant-evolve") outcome = cmd_resonant(req, cfg, consts, dir, out);
      else if (req.command == "large-scale") outcome = cmd_large_scale(req, cfg, consts, dir, out);
      else if (req.command == "virial") outcome = cmd_virial(req, cfg, consts, dir, out);
      else if (req.command == "campaign") outcome = cmd_campaign(cfg, consts, config_hash, dir, out);
      else outcome = cmd_gn_test(cfg, consts, dir, out);
    }

    const json manifest = {{"command", req.command},
                           {"config_hash", config_hash},
                           {"constants_hash", constants_hash},
                           {"code_version", kCodeVersion},
                           {"seed", cfg.seed},
                           {"started_at", started},
                           {"finished_at", utc_now()},
                           {"outcome", outcome},
                           {"files", dir.inventory()}};
    write_file_atomic((dir.root() / "manifest.json").string(), manifest.dump(2));
    return 0;
  } catch (const ConfigError& e) {
    err << json{{"error", to_string(e.kind())}, {"message", e.what()}, {"violations", e.violations()}}.dump() << '\n';
    return exit_code_for(e.kind());
  } catch (const Error& e) {
    err << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << json{{"error", "io"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}

}  // namespace wgnls
