#include <paircorr/cli.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace paircorr;
using namespace paircorr::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cfg(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig fh_config(std::vector<double> h) {
  RunConfig c;
  c.command = Command::fh;
  c.compute_n = 500;
  c.x = 3.0;
  c.h_list = std::move(h);
  return c;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, ZerosComputeTen) {
  RunConfig c;
  c.command = Command::zeros;
  c.compute_n = 10;
  const auto r = run_cfg(c);
  EXPECT_EQ(r.code, exit_ok);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["count"], 10);
  EXPECT_NEAR(j["first"].get<double>(), 14.134725141734693, 1e-9);
}

TEST(Cli, ZerosMissingFileExitsTwo) {
  RunConfig c;
  c.command = Command::zeros;
  c.zeros_path = "/nonexistent/zeros.txt";
  const auto r = run_cfg(c);
  EXPECT_EQ(r.code, exit_no_data);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, ZerosRoundTripThroughFile) {
  const std::string path = std::string(PAIRCORR_TEST_DATA) + "/cli_zeros.txt";
  RunConfig c;
  c.command = Command::zeros;
  c.compute_n = 50;
  c.out = path;
  ASSERT_EQ(run_cfg(c).code, exit_ok);
  RunConfig l;
  l.command = Command::zeros;
  l.zeros_path = path;
  const auto r = run_cfg(l);
  EXPECT_EQ(r.code, exit_ok);
  EXPECT_EQ(nlohmann::json::parse(r.out)["count"], 50);
}

TEST(Cli, FhCsvSchemaAndSymmetricRows) {
  const auto r = run_cfg(fh_config({2.0, -2.0}));
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], fh_schema);
  EXPECT_EQ(ls[1], "h,x,T,empirical_value,pairs_used,truncation_bound,theorem_id,prediction,rel_dev,error_envelope");
  // Everything after the h column is identical.
  EXPECT_EQ(ls[2].substr(ls[2].find(',')), ls[3].substr(ls[3].find(',')));
  EXPECT_NE(ls[2].find(",T1,"), std::string::npos);
}

TEST(Cli, FhDegenerateShiftAndX) {
  auto c = fh_config({0.0});
  c.x = 1.0;
  RunConfig cj = c;
  cj.format = Format::json;
  const auto r = run_cfg(cj);
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GE(j[0]["empirical"]["value"].get<double>(), 0.0);
}

TEST(Cli, FhOutputIsReproducible) {
  auto c = fh_config({0.0, 0.5, 3.0});
  c.alpha = 1.1;
  c.x.reset();
  const auto a = run_cfg(c), b = run_cfg(c);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find(",T4,"), std::string::npos);
}

TEST(Cli, TheoremSelectionByRange) {
  using theory::TheoremId;
  const double T = 1000.0;
  EXPECT_EQ(select_theorem(10.0, T), TheoremId::T1);
  EXPECT_EQ(select_theorem(T / std::log(T), T), TheoremId::T1);
  EXPECT_EQ(select_theorem(500.0, T), TheoremId::T3);
  EXPECT_EQ(select_theorem(T, T), TheoremId::T3);
  EXPECT_EQ(select_theorem(2 * T, T), TheoremId::T4);
  EXPECT_EQ(select_theorem(T * T * 1.01, T), std::nullopt);
}

TEST(Cli, FhBeyondAllRangesLeavesPredictionEmpty) {
  auto c = fh_config({0.0});
  c.x = 1e12;
  const auto r = run_cfg(c);
  ASSERT_EQ(r.code, exit_ok);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto row = lines(r.out)[2];
  EXPECT_EQ(row.substr(row.size() - 4), ",,,,");
}

TEST(Cli, FhTheoremOverride) {
  auto c = fh_config({0.0});
  c.compute_n = 1000;
  c.alpha = 1.2;
  c.x.reset();
  c.theorem = "T2";
  c.format = Format::json;
  const auto r = run_cfg(c);
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j[0]["theory"]["theorem"], "T2");
  EXPECT_TRUE(j[0]["warnings"].empty());
  c.theorem = "T1";
  const auto w = run_cfg(c);
  EXPECT_NE(w.err.find("outside its x-range"), std::string::npos);
}

TEST(Cli, FhWindowed) {
  auto c = fh_config({0.0});
  c.window = 20.0;
  const auto r = run_cfg(c);
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto row = lines(r.out)[2];
  EXPECT_EQ(row.find(",0,T1"), std::string::npos);  // nonzero truncation bound
}

TEST(Cli, InvalidConfigurations) {
  auto both = fh_config({0.0});
  both.alpha = 0.5;
  EXPECT_EQ(run_cfg(both).code, exit_failed);
  auto none = fh_config({});
  EXPECT_EQ(run_cfg(none).code, exit_failed);
  auto two = fh_config({0.0});
  two.zeros_path = "z.txt";
  EXPECT_EQ(run_cfg(two).code, exit_failed);
  auto badT = fh_config({0.0});
  badT.T = "tall";
  EXPECT_EQ(run_cfg(badT).code, exit_failed);
  auto high = fh_config({0.0});
  high.T = "1e6";
  EXPECT_EQ(run_cfg(high).code, exit_failed);
  auto thm = fh_config({0.0});
  thm.theorem = "T9";
  EXPECT_EQ(run_cfg(thm).code, exit_failed);
}

TEST(Cli, SpacingHistogram) {
  RunConfig c;
  c.command = Command::spacing;
  c.compute_n = 1000;
  c.h_list = {0.0, 5.0};
  c.bins = 4;
  c.bin_width = 0.5;
  const auto r = run_cfg(c);
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u + 8u);
  EXPECT_EQ(ls[0], spacing_schema);
  // h = 0 rows carry a one-sided model value, shifted rows do not.
  EXPECT_NE(ls[2].back(), ',');
  EXPECT_EQ(ls[9].back(), ',');
}

TEST(Cli, SpacingEmptyBand) {
  RunConfig c;
  c.command = Command::spacing;
  c.compute_n = 20;
  c.h_list = {0.0};
  c.bins = 1;
  c.bin_width = 1e-4;
  c.format = Format::json;
  const auto r = run_cfg(c);
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["bins"][0]["empirical"], 0.0);
}

TEST(Cli, VerifySelectionAndForcedFailure) {
  RunConfig c;
  c.command = Command::verify;
  c.checks = {"lemma_6_1"};
  c.format = Format::json;
  const auto ok = run_cfg(c);
  EXPECT_EQ(ok.code, exit_ok);
  const auto j = nlohmann::json::parse(ok.out);
  ASSERT_EQ(j["reports"].size(), 1u);
  EXPECT_TRUE(j["passed"].get<bool>());
  c.tol_scale = 0.0;
  EXPECT_EQ(run_cfg(c).code, exit_failed);
  c.checks = {"nope"};
  EXPECT_EQ(run_cfg(c).code, exit_failed);
}

TEST(Cli, VerifyWindowedUsesComputedTable) {
  RunConfig c;
  c.command = Command::verify;
  c.checks = {"windowed_vs_exact", "lemma_1_7"};
  const auto r = run_cfg(c);
  EXPECT_EQ(r.code, exit_ok) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], verify_schema);
  EXPECT_EQ(ls[2].substr(0, 15), "lemma_1_7,true,");
  EXPECT_EQ(ls[3].substr(0, 23), "windowed_vs_exact,true,");
}
