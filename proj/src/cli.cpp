#include "siglab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "siglab/distributions.hpp"
#include "siglab/errors.hpp"
#include "siglab/experiments.hpp"
#include "siglab/report.hpp"

namespace siglab::cli {
namespace {

namespace fs = std::filesystem;
using report::json;

struct Common {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string manifest;
  int workers = 0;
  CLI::Option* seed_opt = nullptr;
};

std::string flag_for(const std::string& field) {
  std::string f = field;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("SIGLAB_SEED");
  if (s == nullptr || *s == '\0') return kDefaultSeed;
  std::uint64_t v = 0;
  const char* end = s + std::char_traits<char>::length(s);
  const auto [ptr, ec] = std::from_chars(s, end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("SIGLAB_SEED", std::string("not an unsigned integer: '") + s + "'");
  return v;
}

void add_common(CLI::App* sub, Common& c) {
  c.seed_opt = sub->add_option("--seed", c.seed, "Master seed (default: $SIGLAB_SEED or 2022)");
  sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--manifest", c.manifest, "Start from the config recorded in a run manifest");
  sub->add_option("--workers", c.workers, "Worker threads (0 = OpenMP default); affects runtime only")
      ->capture_default_str();
}

std::optional<json> manifest_config(const Common& c, const std::string& subcommand) {
  if (c.manifest.empty()) return std::nullopt;
  const auto m = report::load_manifest(c.manifest);
  if (m.subcommand != subcommand) {
    throw ConfigError("manifest", "manifest is for '" + m.subcommand + "', not '" + subcommand + "'");
  }
  return m.config;
}

std::uint64_t resolve_seed(const Common& c, std::optional<std::uint64_t> from_manifest) {
  if (c.seed_opt->count() > 0) return c.seed;
  if (from_manifest) return *from_manifest;
  return env_seed();
}

void finish(const std::string& subcommand, const json& config, std::uint64_t seed, const std::string& started,
            const std::vector<report::OutputFile>& files, const Common& c, std::ostream& out) {
  const auto paths = report::write_outputs(c.out_dir, files);
  report::RunManifest m;
  m.version = SIGLAB_VERSION;
  m.subcommand = subcommand;
  m.config = config;
  m.seed = seed;
  m.started_at = started;
  m.finished_at = report::utc_timestamp();
  for (const auto& f : files) m.outputs.push_back(f.name);
  const fs::path manifest_path = fs::path(c.out_dir) / ("manifest_" + subcommand + ".json");
  std::ofstream mf(manifest_path, std::ios::trunc);
  mf << report::to_json(m).dump(2) << "\n";
  if (!mf) throw std::runtime_error("cannot write " + manifest_path.string());
  for (const auto& p : paths) out << p.string() << "\n";
  out << manifest_path.string() << "\n";
}

template <class T>
void override_if(const CLI::Option* opt, T& field, const T& value) {
  if (opt->count() > 0) field = value;
}

double parse_number(const std::string& text, const char* flag) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(flag, "'" + text + "' is not a number");
  }
  return v;
}

int print_error(std::ostream& err, const std::string& what) {
  err << "siglab: error: " << what << "\n";
  return kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo laboratory for significance-testing fallacies", "siglab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SIGLAB_VERSION);

  // exp1
  Common c1;
  experiments::Exp1Config e1;
  std::string events_file;
  bool no_builtin = false;
  auto* exp1 = app.add_subcommand("exp1", "Event-battery p-hacking study");
  add_common(exp1, c1);
  auto* o1_reps = exp1->add_option("--reps", e1.reps, "Replications")->capture_default_str();
  auto* o1_n = exp1->add_option("--n", e1.n, "Draws per replication")->capture_default_str();
  auto* o1_alpha = exp1->add_option("--alpha", e1.alpha, "Test level")->capture_default_str();
  auto* o1_events = exp1->add_option("--events", events_file, "File of extra events, one `name: i1,i2,...` per line");
  auto* o1_nob = exp1->add_flag("--no-builtin", no_builtin, "Use only the events from --events");

  // exp2
  Common c2;
  experiments::Exp2Config e2;
  auto* exp2 = app.add_subcommand("exp2", "Max-|t| snooping vs the joint F test");
  add_common(exp2, c2);
  auto* o2_reps = exp2->add_option("--reps", e2.reps, "Replications")->capture_default_str();
  auto* o2_n = exp2->add_option("--n", e2.n, "Sample size")->capture_default_str();
  auto* o2_k = exp2->add_option("--k", e2.k_values, "Lag counts, comma-separated")->delimiter(',')->capture_default_str();
  auto* o2_alpha = exp2->add_option("--alpha", e2.alphas, "Levels, comma-separated")->delimiter(',')->capture_default_str();

  // exp3
  Common c3;
  experiments::Exp3Config e3;
  auto* exp3 = app.add_subcommand("exp3", "Size of the t test on beta after a pretest on gamma");
  add_common(exp3, c3);
  auto* o3_reps = exp3->add_option("--reps", e3.reps, "Replications per grid point")->capture_default_str();
  auto* o3_n = exp3->add_option("--n", e3.n, "Sample size")->capture_default_str();
  auto* o3_rho = exp3->add_option("--rho", e3.rhos, "Correlations of x and z, comma-separated")
                     ->delimiter(',')
                     ->capture_default_str();
  auto* o3_gmin = exp3->add_option("--gamma-min", e3.gamma_min)->capture_default_str();
  auto* o3_gmax = exp3->add_option("--gamma-max", e3.gamma_max)->capture_default_str();
  auto* o3_gstep = exp3->add_option("--gamma-step", e3.gamma_step)->capture_default_str();
  auto* o3_au = exp3->add_option("--alpha-u", e3.alpha_u_levels, "Pretest levels, comma-separated")
                    ->delimiter(',')
                    ->capture_default_str();
  auto* o3_alpha = exp3->add_option("--alpha", e3.alpha, "Level of the test on beta")->capture_default_str();
  auto* o3_ev = exp3->add_option("--error-variance", e3.error_variance)->capture_default_str();
  auto* o3_delta = exp3->add_option("--delta", e3.delta_true, "Intercept of the data-generating process")
                       ->capture_default_str();

  // dist
  std::string dist_name;
  std::string at_text;
  double df = 0, df2 = 0;
  bool want_cdf = false, want_quantile = false;
  auto* dist = app.add_subcommand("dist", "Evaluate a CDF or quantile");
  dist->add_option("--dist", dist_name, "normal, t, f or chisq")
      ->required()
      ->check(CLI::IsMember({"normal", "t", "f", "chisq"}));
  auto* o_cdf = dist->add_flag("--cdf", want_cdf, "Evaluate the CDF at --at");
  auto* o_q = dist->add_flag("--quantile", want_quantile, "Evaluate the quantile at probability --at");
  o_cdf->excludes(o_q);
  dist->add_option("--at", at_text, "Argument")->required();
  auto* o_df = dist->add_option("--df", df, "Degrees of freedom (numerator for f)");
  auto* o_df2 = dist->add_option("--df2", df2, "Denominator degrees of freedom for f");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string started = report::utc_timestamp();
  try {
    if (exp1->parsed()) {
      experiments::Exp1Config cfg;
      std::optional<std::uint64_t> manifest_seed;
      if (auto j = manifest_config(c1, "exp1")) {
        cfg = report::exp1_config_from_json(*j);
        manifest_seed = cfg.seed;
      }
      override_if(o1_reps, cfg.reps, e1.reps);
      override_if(o1_n, cfg.n, e1.n);
      override_if(o1_alpha, cfg.alpha, e1.alpha);
      if (o1_nob->count() > 0 && no_builtin) cfg.events.clear();
      if (o1_events->count() > 0) {
        try {
          for (auto& e : hyptests::load_event_sets(events_file)) cfg.events.push_back(std::move(e));
        } catch (const DomainError& e) {
          throw ConfigError("events", e.what());
        }
      }
      cfg.seed = resolve_seed(c1, manifest_seed);
      const auto rep = experiments::run_exp1(cfg, c1.workers);
      finish("exp1", report::to_json(cfg), cfg.seed, started, report::render_exp1(rep), c1, out);
    } else if (exp2->parsed()) {
      experiments::Exp2Config cfg;
      std::optional<std::uint64_t> manifest_seed;
      if (auto j = manifest_config(c2, "exp2")) {
        cfg = report::exp2_config_from_json(*j);
        manifest_seed = cfg.seed;
      }
      override_if(o2_reps, cfg.reps, e2.reps);
      override_if(o2_n, cfg.n, e2.n);
      override_if(o2_k, cfg.k_values, e2.k_values);
      override_if(o2_alpha, cfg.alphas, e2.alphas);
      cfg.seed = resolve_seed(c2, manifest_seed);
      const auto rep = experiments::run_exp2(cfg, c2.workers);
      finish("exp2", report::to_json(cfg), cfg.seed, started, report::render_exp2(rep), c2, out);
    } else if (exp3->parsed()) {
      experiments::Exp3Config cfg;
      std::optional<std::uint64_t> manifest_seed;
      if (auto j = manifest_config(c3, "exp3")) {
        cfg = report::exp3_config_from_json(*j);
        manifest_seed = cfg.seed;
      }
      override_if(o3_reps, cfg.reps, e3.reps);
      override_if(o3_n, cfg.n, e3.n);
      override_if(o3_rho, cfg.rhos, e3.rhos);
      override_if(o3_gmin, cfg.gamma_min, e3.gamma_min);
      override_if(o3_gmax, cfg.gamma_max, e3.gamma_max);
      override_if(o3_gstep, cfg.gamma_step, e3.gamma_step);
      override_if(o3_au, cfg.alpha_u_levels, e3.alpha_u_levels);
      override_if(o3_alpha, cfg.alpha, e3.alpha);
      override_if(o3_ev, cfg.error_variance, e3.error_variance);
      override_if(o3_delta, cfg.delta_true, e3.delta_true);
      cfg.seed = resolve_seed(c3, manifest_seed);
      try {
        cfg.validate();
      } catch (const NotPositiveSemidefinite& e) {
        throw ConfigError("rho", std::string("covariance of (x, z, e) is not positive semidefinite: ") + e.what());
      }
      const auto rep = experiments::run_exp3(cfg, c3.workers);
      finish("exp3", report::to_json(cfg), cfg.seed, started, report::render_exp3(rep), c3, out);
    } else if (dist->parsed()) {
      if (want_cdf == want_quantile) throw ConfigError("cdf", "give exactly one of --cdf or --quantile");
      const double x = parse_number(at_text, "at");
      const bool needs_df = dist_name != "normal";
      if (needs_df && o_df->count() == 0) throw ConfigError("df", "required for --dist " + dist_name);
      if (dist_name == "f" && o_df2->count() == 0) throw ConfigError("df2", "required for --dist f");
      auto dof = [](double value, const char* flag) {
        try {
          return dist::DegreesOfFreedom(value);
        } catch (const DomainError& e) {
          throw ConfigError(flag, e.what());
        }
      };
      double v = 0;
      try {
        if (dist_name == "normal") {
          v = want_cdf ? dist::normal_cdf(x) : dist::normal_quantile(x);
        } else if (dist_name == "t") {
          const auto d = dof(df, "df");
          v = want_cdf ? dist::student_t_cdf(x, d) : dist::student_t_quantile(x, d);
        } else if (dist_name == "f") {
          const auto d1 = dof(df, "df");
          const auto d2 = dof(df2, "df2");
          v = want_cdf ? dist::f_cdf(x, d1, d2) : dist::f_quantile(x, d1, d2);
        } else {
          const auto d = dof(df, "df");
          v = want_cdf ? dist::chi_squared_cdf(x, d) : dist::chi_squared_quantile(x, d);
        }
      } catch (const DomainError& e) {
        throw ConfigError("at", e.what());
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << "\n";
    }
  } catch (const ConfigError& e) {
    const std::string flag = flag_for(e.field());
    const std::string what = e.what();
    const std::string detail = what.substr(std::min(what.size(), e.field().size() + 2));
    if (e.field() == "SIGLAB_SEED" || e.field() == "config") return print_error(err, what);
    return print_error(err, flag + ": " + detail);
  } catch (const NotPositiveSemidefinite& e) {
    return print_error(err, std::string("--rho: ") + e.what());
  } catch (const DomainError& e) {
    return print_error(err, e.what());
  } catch (const std::exception& e) {
    err << "siglab: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace siglab::cli
