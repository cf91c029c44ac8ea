#include <gtest/gtest.h>

#include <sstream>

#include "siglab/errors.hpp"
#include "siglab/report.hpp"

using namespace siglab;
using namespace siglab::report;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(0.0961), "0.0961");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-0.475), "-0.475");
  EXPECT_EQ(format_number(1.0 / 3), "0.3333333333333333");
}

TEST(Hash, FnvReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Header, FormatAndSensitivity) {
  experiments::Exp2Config cfg;
  cfg.seed = 12;
  const std::string h = header_line(12, to_json(cfg));
  EXPECT_EQ(h.rfind("# seed=12 version=", 0), 0u);
  EXPECT_NE(h.find(" config_hash="), std::string::npos);
  EXPECT_EQ(h.back(), '\n');
  cfg.reps = 11;
  EXPECT_NE(header_line(12, to_json(cfg)), h);
}

TEST(ConfigJson, RoundTrips) {
  experiments::Exp1Config c1;
  c1.n = 123;
  c1.events = {hyptests::EventSet("sevens", {7, 17, 27})};
  const auto r1 = exp1_config_from_json(to_json(c1));
  EXPECT_EQ(to_json(r1), to_json(c1));
  EXPECT_EQ(r1.events[0].name(), "sevens");

  experiments::Exp2Config c2;
  c2.k_values = {1, 5};
  c2.alphas = {0.01};
  EXPECT_EQ(to_json(exp2_config_from_json(to_json(c2))), to_json(c2));

  experiments::Exp3Config c3;
  c3.rhos = {-0.3};
  c3.gamma_step = 0.05;
  c3.delta_true = 2;
  EXPECT_EQ(to_json(exp3_config_from_json(to_json(c3))), to_json(c3));
}

TEST(ConfigJson, WrongTypeNamesField) {
  try {
    exp2_config_from_json(json{{"reps", "many"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "reps");
  }
  EXPECT_THROW(exp1_config_from_json(json{{"events", {{{"name", "x"}, {"members", {0}}}}}}), ConfigError);
  EXPECT_THROW(exp3_config_from_json(json::array()), ConfigError);
}

TEST(PmsColumn, Names) {
  EXPECT_EQ(pms_column(0.01), "rej_pms_au001");
  EXPECT_EQ(pms_column(0.05), "rej_pms_au005");
  EXPECT_EQ(pms_column(0.10), "rej_pms_au010");
  EXPECT_EQ(pms_column(0.025), "rej_pms_au0p025");
}

TEST(Render, Exp2Layout) {
  experiments::Exp2Report r;
  r.config.k_values = {2};
  r.config.alphas = {0.05};
  r.config.reps = 10;
  r.cells = {{0.05, 2, {1, 10}, {0, 10}, 1.98, 3.09, 0.0975}};
  const auto files = render_exp2(r);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].name, "exp2_size.csv");
  const auto csv = lines(files[0].contents);
  ASSERT_EQ(csv.size(), 4u);
  EXPECT_EQ(csv[1], "alpha,k,stat,rejections,reps,frequency,mc_se,analytic_sidak");
  EXPECT_EQ(csv[2], "0.05,2,tmax,1,10,0.1,0.09486832980505139,0.0975");
  EXPECT_EQ(csv[3], "0.05,2,f,0,10,0,0,");
  const auto& txt = files[1].contents;
  EXPECT_NE(txt.find("T_max    |   10.00"), std::string::npos);
  EXPECT_NE(txt.find("Sidak    |    9.75"), std::string::npos);
}

TEST(Render, Exp1Layout) {
  experiments::Exp1Report r;
  r.config.events = {hyptests::EventSet("sevens", {7, 17, 27, 37, 47, 57, 67, 77, 87, 97})};
  r.config.reps = 4;
  r.per_event = {{1, 4}};
  r.familywise = {1, 4};
  r.gof = {0, 4};
  r.gof_p_values = {0.1, 0.4, 0.6, 0.9};
  r.sidak = 0.05;
  r.bonferroni = 0.05;
  const auto files = render_exp1(r);
  ASSERT_EQ(files.size(), 3u);
  const auto ev = lines(files[0].contents);
  EXPECT_EQ(ev[1], "event,members,prob,rejections,reps,frequency,mc_se");
  EXPECT_EQ(ev[2], "sevens,\"7,17,27,37,47,57,67,77,87,97\",0.10,1,4,0.25,0.21650635094610965");
  const auto fw = lines(files[1].contents);
  EXPECT_EQ(fw[1], "k_events,fwer_freq,sidak,bonferroni");
  EXPECT_EQ(fw[2], "1,0.25,0.05,0.05");
  const auto gof = lines(files[2].contents);
  EXPECT_EQ(gof[2], "100,99,0,4,0,0,0.15000000000000002");
}

TEST(Render, Exp3FilePerCorrelation) {
  experiments::Exp3Report r;
  r.config.rhos = {0.5, 0.9};
  r.config.reps = 2;
  for (double rho : r.config.rhos) {
    experiments::Exp3Curve c;
    c.rho = rho;
    c.points.push_back({-0.5, {{1, 2}, {0, 2}, {2, 2}}, {1, 2}});
    r.curves.push_back(c);
  }
  const auto files = render_exp3(r);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].name, "exp3_rho0.5.csv");
  EXPECT_EQ(files[1].name, "exp3_rho0.9.csv");
  const auto l = lines(files[0].contents);
  EXPECT_EQ(l[1], "gamma,rej_pms_au001,rej_pms_au005,rej_pms_au010,rej_unrestricted,reps");
  EXPECT_EQ(l[2], "-0.5,0.5,0,1,0.5,2");
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m;
  m.version = "1.2.3";
  m.subcommand = "exp2";
  m.config = to_json(experiments::Exp2Config{});
  m.seed = 99;
  m.started_at = "2026-01-01T00:00:00Z";
  m.finished_at = "2026-01-01T00:00:01Z";
  m.outputs = {"exp2_size.csv"};
  const auto back = manifest_from_json(to_json(m));
  EXPECT_EQ(to_json(back), to_json(m));
  EXPECT_THROW(manifest_from_json(json{{"config", json::object()}}), ConfigError);
}
