#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "wgnls/error.hpp"
#include "wgnls/experiments.hpp"
#include "wgnls/io.hpp"
#include "wgnls/resonant.hpp"

namespace wgnls {

std::string to_string(System s) { return s == System::Full ? "full" : "resonant"; }

System parse_system(const std::string& text) {
  if (text == "full") return System::Full;
  if (text == "resonant") return System::Resonant;
  throw Error(ErrorKind::Config, "system must be 'full' or 'resonant', got '" + text + "'");
}

namespace {

CampaignRecord run_row(const CampaignRow& row, const GNConstants& consts, CChoice choice) {
  CampaignRecord rec;
  rec.name = row.name;
  rec.system = row.system;
  try {
    const Field3 u0 = build_datum(row.datum, row.grid, consts, choice);
    rec.report = classify(u0, consts, choice);
    if (row.system == System::Full) {
      row.controls.validate(u0.grid);
      const RunOutcome o = evolve(u0, row.controls);
      rec.status = o.status;
      rec.t_final = o.t_final;
      rec.steps = o.steps;
      rec.grad_growth = o.initial_grad > 0.0 ? o.max_grad / o.initial_grad : 0.0;
      rec.series_csv = o.time_series.to_csv();
    } else {
      const RsOutcome o = evolve_rs(embed_from_torus(u0), row.controls);
      rec.status = o.status;
      rec.t_final = o.t_final;
      rec.steps = o.steps;
      rec.grad_growth = o.initial_grad > 0.0 ? o.max_grad / o.initial_grad : 0.0;
      rec.series_csv = o.to_csv();
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

CampaignResult threshold_campaign(const std::vector<CampaignRow>& rows, const GNConstants& consts, CChoice choice,
                                  int workers, const std::string& config_hash) {
  CampaignResult res;
  res.config_hash = config_hash;
  res.constants_hash = hex64(fnv1a64(to_json(consts)));
  res.rows.resize(rows.size());

  int n = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min<int>(n, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) res.rows[i] = run_row(rows[i], consts, choice);
  };
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
  }
  return res;
}

std::string CampaignResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "name,system,classification,status,mass,energy,grad_y_sq,gamma,mei,t_final,steps,grad_growth,"
        "config_hash,constants_hash,error\n";
  for (const auto& r : rows) {
    os << csv_field(r.name) << ',' << to_string(r.system) << ',';
    if (r.ok) {
      const auto& d = r.report.diagnostics;
      os << to_string(r.report.classification) << ',' << to_string(r.status) << ',' << d.mass << ',' << d.energy << ','
         << d.grad_y_sq << ',' << r.report.gamma << ',' << r.report.mei << ',' << r.t_final << ',' << r.steps << ','
         << r.grad_growth;
    } else {
      os << ",error,,,,,,,,";
    }
    os << ',' << config_hash << ',' << constants_hash << ',' << csv_field(r.error) << '\n';
  }
  return os.str();
}

}  // namespace wgnls
