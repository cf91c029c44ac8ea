#include "siglab/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "siglab/errors.hpp"

namespace siglab::report {
namespace {

using experiments::Exp1Config;
using experiments::Exp2Config;
using experiments::Exp3Config;
using experiments::RejectionCell;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("invalid value in config: ") + e.what());
  }
}

void require_object(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
}

std::string cell_columns(const RejectionCell& c) {
  return std::to_string(c.rejections) + "," + std::to_string(c.reps) + "," + format_number(c.frequency()) + "," +
         format_number(c.mc_se());
}

}  // namespace

std::string format_number(double v) {
  if (v == 0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json to_json(const Exp1Config& cfg) {
  json events = json::array();
  for (const auto& e : cfg.events) events.push_back({{"name", e.name()}, {"members", e.members()}});
  return {{"n", cfg.n}, {"alpha", cfg.alpha}, {"reps", cfg.reps}, {"seed", cfg.seed}, {"events", events}};
}

json to_json(const Exp2Config& cfg) {
  return {{"n", cfg.n}, {"k", cfg.k_values}, {"alpha", cfg.alphas}, {"reps", cfg.reps}, {"seed", cfg.seed}};
}

json to_json(const Exp3Config& cfg) {
  return {{"n", cfg.n},
          {"rho", cfg.rhos},
          {"beta_true", cfg.beta_true},
          {"beta0", cfg.beta0},
          {"delta_true", cfg.delta_true},
          {"error_variance", cfg.error_variance},
          {"gamma_min", cfg.gamma_min},
          {"gamma_max", cfg.gamma_max},
          {"gamma_step", cfg.gamma_step},
          {"alpha", cfg.alpha},
          {"alpha_u", cfg.alpha_u_levels},
          {"reps", cfg.reps},
          {"seed", cfg.seed}};
}

Exp1Config exp1_config_from_json(const json& j) {
  require_object(j);
  Exp1Config cfg;
  read_field(j, "n", cfg.n);
  read_field(j, "alpha", cfg.alpha);
  read_field(j, "reps", cfg.reps);
  read_field(j, "seed", cfg.seed);
  if (j.contains("events")) {
    cfg.events.clear();
    try {
      for (const auto& e : j.at("events")) {
        cfg.events.emplace_back(e.at("name").get<std::string>(), e.at("members").get<std::vector<int>>());
      }
    } catch (const json::exception& e) {
      throw ConfigError("events", std::string("invalid value in config: ") + e.what());
    } catch (const DomainError& e) {
      throw ConfigError("events", e.what());
    }
  }
  return cfg;
}

Exp2Config exp2_config_from_json(const json& j) {
  require_object(j);
  Exp2Config cfg;
  read_field(j, "n", cfg.n);
  read_field(j, "k", cfg.k_values);
  read_field(j, "alpha", cfg.alphas);
  read_field(j, "reps", cfg.reps);
  read_field(j, "seed", cfg.seed);
  return cfg;
}

Exp3Config exp3_config_from_json(const json& j) {
  require_object(j);
  Exp3Config cfg;
  read_field(j, "n", cfg.n);
  read_field(j, "rho", cfg.rhos);
  read_field(j, "beta_true", cfg.beta_true);
  read_field(j, "beta0", cfg.beta0);
  read_field(j, "delta_true", cfg.delta_true);
  read_field(j, "error_variance", cfg.error_variance);
  read_field(j, "gamma_min", cfg.gamma_min);
  read_field(j, "gamma_max", cfg.gamma_max);
  read_field(j, "gamma_step", cfg.gamma_step);
  read_field(j, "alpha", cfg.alpha);
  read_field(j, "alpha_u", cfg.alpha_u_levels);
  read_field(j, "reps", cfg.reps);
  read_field(j, "seed", cfg.seed);
  return cfg;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

std::string header_line(std::uint64_t seed, const json& config) {
  return "# seed=" + std::to_string(seed) + " version=" SIGLAB_VERSION " config_hash=" + config_hash(config) + "\n";
}

std::vector<OutputFile> render_exp1(const experiments::Exp1Report& r) {
  const json cfg = to_json(r.config);
  const std::string header = header_line(r.config.seed, cfg);

  std::ostringstream events;
  events << header << "event,members,prob,rejections,reps,frequency,mc_se\n";
  for (std::size_t e = 0; e < r.config.events.size(); ++e) {
    const auto& ev = r.config.events[e];
    std::string members;
    for (int m : ev.members()) members += (members.empty() ? "" : ",") + std::to_string(m);
    events << ev.name() << ",\"" << members << "\"," << fixed(ev.prob(), 2) << "," << cell_columns(r.per_event[e])
           << "\n";
  }

  std::ostringstream fwer;
  fwer << header << "k_events,fwer_freq,sidak,bonferroni\n"
       << r.config.events.size() << "," << format_number(r.familywise.frequency()) << "," << format_number(r.sidak)
       << "," << format_number(r.bonferroni) << "\n";

  std::ostringstream gof;
  gof << header << "cells,df,rejections,reps,frequency,mc_se,ks_uniform\n"
      << hyptests::EventSet::kUniverse << "," << hyptests::EventSet::kUniverse - 1 << "," << cell_columns(r.gof) << ","
      << format_number(hyptests::ks_uniform_distance(r.gof_p_values)) << "\n";

  return {{"exp1_events.csv", events.str()}, {"exp1_fwer.csv", fwer.str()}, {"exp1_gof.csv", gof.str()}};
}

std::vector<OutputFile> render_exp2(const experiments::Exp2Report& r) {
  const json cfg = to_json(r.config);
  const std::string header = header_line(r.config.seed, cfg);

  std::ostringstream csv;
  csv << header << "alpha,k,stat,rejections,reps,frequency,mc_se,analytic_sidak\n";
  for (const auto& c : r.cells) {
    const std::string key = format_number(c.alpha) + "," + std::to_string(c.k) + ",";
    csv << key << "tmax," << cell_columns(c.tmax) << "," << format_number(c.analytic_sidak) << "\n";
    csv << key << "f," << cell_columns(c.f) << ",\n";
  }

  // Percent table: one block of k columns per alpha.
  const auto& ks = r.config.k_values;
  const auto& alphas = r.config.alphas;
  auto row = [&](const std::string& label, auto value) {
    std::string line = label;
    line.resize(8, ' ');
    for (double a : alphas) {
      line += " |";
      for (int k : ks) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %7.2f", 100 * value(r.cell(a, k)));
        line += buf;
      }
    }
    return line + "\n";
  };

  std::ostringstream txt;
  txt << header << "Relative frequency (in %) of rejecting true H0, n=" << r.config.n << ", reps=" << r.config.reps
      << "\n";
  std::string alpha_line(8, ' ');
  std::string k_line(8, ' ');
  for (double a : alphas) {
    std::string block = " | alpha = " + format_number(100 * a) + "%";
    block.resize(2 + 8 * ks.size(), ' ');
    alpha_line += block;
    k_line += " |";
    for (int k : ks) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %7s", ("k=" + std::to_string(k)).c_str());
      k_line += buf;
    }
  }
  txt << alpha_line << "\n" << k_line << "\n";
  txt << std::string(k_line.size(), '-') << "\n";
  txt << row("T_max", [](const experiments::Exp2Cell& c) { return c.tmax.frequency(); });
  txt << row("F_k", [](const experiments::Exp2Cell& c) { return c.f.frequency(); });
  txt << row("Sidak", [](const experiments::Exp2Cell& c) { return c.analytic_sidak; });

  return {{"exp2_size.csv", csv.str()}, {"exp2_table.txt", txt.str()}};
}

std::string pms_column(double alpha_u) {
  const double pct = alpha_u * 100;
  if (std::fabs(pct - std::round(pct)) < 1e-9) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "rej_pms_au%03lld", std::llround(pct));
    return buf;
  }
  std::string s = format_number(alpha_u);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return "rej_pms_au" + s;
}

std::vector<OutputFile> render_exp3(const experiments::Exp3Report& r) {
  const json cfg = to_json(r.config);
  const std::string header = header_line(r.config.seed, cfg);
  std::vector<OutputFile> files;
  for (const auto& curve : r.curves) {
    std::ostringstream csv;
    csv << header << "gamma";
    for (double a : r.config.alpha_u_levels) csv << "," << pms_column(a);
    csv << ",rej_unrestricted,reps\n";
    for (const auto& p : curve.points) {
      csv << format_number(p.gamma);
      for (const auto& cell : p.pms) csv << "," << format_number(cell.frequency());
      csv << "," << format_number(p.unrestricted.frequency()) << "," << r.config.reps << "\n";
    }
    files.push_back({"exp3_rho" + format_number(curve.rho) + ".csv", csv.str()});
  }
  return files;
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir,
                                                 const std::vector<OutputFile>& files) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& f : files) {
    const auto path = dir / f.name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << f.contents;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    paths.push_back(path);
  }
  return paths;
}

json to_json(const RunManifest& m) {
  return {{"version", m.version},       {"subcommand", m.subcommand},   {"config", m.config},
          {"seed", m.seed},             {"started_at", m.started_at}, {"finished_at", m.finished_at},
          {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.version = j.value("version", "");
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config = j.at("config");
    m.seed = j.value("seed", m.config.value("seed", std::uint64_t{0}));
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ConfigError("manifest", e.what());
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("manifest", "cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("manifest", e.what());
  }
  return manifest_from_json(j);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace siglab::report
