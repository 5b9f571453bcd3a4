#include <gtest/gtest.h>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zeno/cli.hpp"

namespace cli = zeno::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "zeno-distill");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  return v;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("zeno_cli_test_" + name);
}

}  // namespace

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(cli::format_double(1.0), "1");
  EXPECT_EQ(cli::format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(cli::format_double(2.0 / 3.0), "0.66666666666666663");
  EXPECT_EQ(cli::format_double(std::nan("")), "nan");
  EXPECT_EQ(cli::format_double(-HUGE_VAL), "-inf");
  for (const double x : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -1.7976931348623157e308}) {
    const std::string s = cli::format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, x) << s;
  }
}

TEST(Distill, SchemaAndFirstRow) {
  const Outcome o = invoke({"distill", "--n-max", "10"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto l = lines(o.out);
  ASSERT_EQ(l.size(), 12u);
  EXPECT_EQ(l[0], "# zeno-distill v0.1.0");
  EXPECT_EQ(l[1], "N,P,lnP,F,mean_quanta,alpha_N_re,alpha_N_im,r_N,phi_N");
  const auto first = split(l[2]);
  EXPECT_EQ(first[0], "1");
  EXPECT_NEAR(std::stod(first[1]), 0.63257293831163819, 1e-15);
  // F rises, P falls.
  const auto last = split(l[11]);
  EXPECT_GT(std::stod(last[3]), std::stod(first[3]));
  EXPECT_LT(std::stod(last[1]), std::stod(first[1]));
}

TEST(Distill, VacuumHasNoDisplacement) {
  const Outcome o = invoke({"distill", "--alpha0-re", "0", "--n-max", "5"});
  ASSERT_EQ(o.code, 0);
  const auto l = lines(o.out);
  for (std::size_t i = 2; i < l.size(); ++i) {
    const auto f = split(l[i]);
    EXPECT_EQ(std::stod(f[5]), 0.0);
    EXPECT_EQ(std::stod(f[6]), 0.0);
  }
}

TEST(Distill, ByteIdenticalReruns) {
  const auto a = invoke({"distill", "--state", "thermal:0.5", "--n-max", "4"});
  const auto b = invoke({"distill", "--state", "thermal:0.5", "--n-max", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Distill, MixtureFileAndJson) {
  const auto path = scratch("mix.txt");
  {
    std::ofstream f(path);
    f << "# weight re im\n0.5 1 0\n0.5 -1 0\n";
  }
  const Outcome o = invoke({"distill", "--state", "mixture:" + path.string(), "--n-max", "3", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_EQ(doc["format"], "zeno-distill");
  EXPECT_EQ(doc["version"], "0.1.0");
  EXPECT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["columns"][3], "F");
  // Symmetric mixture: mean amplitude vanishes.
  EXPECT_NEAR(doc["rows"][0][5].get<double>(), 0.0, 1e-15);
  std::filesystem::remove(path);
}

TEST(Distill, WritesToFile) {
  const auto path = scratch("out.csv");
  const Outcome o = invoke({"distill", "--n-max", "2", "--out", path.string()});
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first, "# zeno-distill v0.1.0");
  std::filesystem::remove(path);
}

TEST(Curvature, MatchesDistillAndGrowsWithAmplitude) {
  const Outcome c = invoke({"lnp-curvature", "--alpha0-list", "0,2,4", "--n-max", "20"});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto l = lines(c.out);
  EXPECT_EQ(l[1], "N,lnP@0,d2lnP@0,lnP@2,d2lnP@2,lnP@4,d2lnP@4");
  double worst[3] = {0, 0, 0};
  for (std::size_t i = 2; i < l.size(); ++i) {
    const auto f = split(l[i]);
    for (int k = 0; k < 3; ++k) {
      const double d2 = std::stod(f[2 + 2 * k]);
      if (std::isfinite(d2)) worst[k] = std::max(worst[k], std::abs(d2));
    }
  }
  EXPECT_LT(worst[0], worst[1]);
  EXPECT_LT(worst[1], worst[2]);
  EXPECT_EQ(split(l[2])[2], "nan");

  const Outcome d = invoke({"distill", "--alpha0-re", "2", "--n-max", "20"});
  const auto dl = lines(d.out);
  for (std::size_t i = 2; i < dl.size(); ++i) EXPECT_EQ(split(dl[i])[2], split(l[i])[3]);
}

TEST(Free, RowsAndBounds) {
  const Outcome o = invoke({"free", "--t-max", "12.566370614359172", "--t-steps", "400"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto l = lines(o.out);
  EXPECT_EQ(l[1], "t_bar,P0,mean_quanta0");
  EXPECT_EQ(l[2], "0,1,1");
  for (std::size_t i = 2; i < l.size(); ++i) {
    const double n = std::stod(split(l[i])[2]);
    EXPECT_GE(n, 1.0 - 1e-12);
    EXPECT_LE(n, 1.64 + 1e-12);
  }
  const Outcome p = invoke({"free", "--t-grid", "6.283185307179586"});
  EXPECT_NEAR(std::stod(split(lines(p.out)[2])[2]), 1.0, 1e-14);
}

TEST(Zeno, FrozenAtLargeN) {
  const Outcome o = invoke({"zeno", "--k-min", "4", "--k-max", "12"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto l = lines(o.out);
  EXPECT_EQ(l[1], "N,tau_bar,P,fidelity,regime");
  const auto last = split(l.back());
  EXPECT_EQ(last[0], "4096");
  EXPECT_GE(std::stod(last[2]), 0.999);
  EXPECT_EQ(last[4], "distilling");
}

TEST(ExitCodes, DegenerateRegime) {
  const Outcome z = invoke({"zeno", "--t-bar", "0"});
  EXPECT_EQ(z.code, cli::kBadRegime);
  EXPECT_NE(z.err.find("degenerate"), std::string::npos);
  const Outcome d = invoke({"distill", "--tau-bar", "6.283185307179586"});
  EXPECT_EQ(d.code, cli::kBadRegime);
  EXPECT_NE(d.err.find("degenerate"), std::string::npos);
}

TEST(ExitCodes, IoFailure) {
  EXPECT_EQ(invoke({"distill", "--out", "/nonexistent-dir/x.csv"}).code, cli::kIoError);
  EXPECT_EQ(invoke({"distill", "--state", "mixture:/nonexistent-dir/m.txt"}).code, cli::kIoError);
}

TEST(ExitCodes, InvalidInput) {
  EXPECT_EQ(invoke({"distill", "--dp-bar", "-1"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({"distill", "--n-max", "0"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({"distill", "--fock-dim", "8"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({"distill", "--state", "squeezed"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({"distill", "--state", "thermal:abc"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({"distill", "--format", "xml"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({"no-such-command"}).code, cli::kInvalidInput);
  EXPECT_EQ(invoke({}).code, cli::kInvalidInput);
}

TEST(Config, FlagsOverrideFileOverrideDefaults) {
  const auto path = scratch("cfg.ini");
  {
    std::ofstream f(path);
    f << "g-bar = 0.5\nn-max = 3\n";
  }
  const Outcome file_only = invoke({"--config", path.string(), "distill"});
  ASSERT_EQ(file_only.code, 0) << file_only.err;
  EXPECT_EQ(lines(file_only.out).size(), 5u);
  const Outcome flag = invoke({"--config", path.string(), "distill", "--n-max", "4"});
  EXPECT_EQ(lines(flag.out).size(), 6u);
  const Outcome defaults = invoke({"distill", "--n-max", "3"});
  EXPECT_NE(lines(file_only.out)[2], lines(defaults.out)[2]);
  const Outcome explicit_g = invoke({"distill", "--n-max", "3", "--g-bar", "0.5"});
  EXPECT_EQ(file_only.out, explicit_g.out);
  std::filesystem::remove(path);
}

TEST(Version, Flag) {
  const Outcome o = invoke({"--version"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("0.1.0"), std::string::npos);
}

TEST(OracleCheck, SmallBasisTripsTruncationGate) {
  const Outcome o = invoke({"oracle-check", "--fock-dim", "16"});
  EXPECT_EQ(o.code, cli::kCheckBreach);
  EXPECT_NE(o.err.find("top 10 of 16 levels"), std::string::npos) << o.err;
  EXPECT_NE(o.out.find("FAIL"), std::string::npos);
}

TEST(OracleCheck, CoarseMomentumRuleTripsQuadratureGate) {
  const Outcome o = invoke({"oracle-check", "--p-quad-order", "2"});
  EXPECT_EQ(o.code, cli::kCheckBreach);
  EXPECT_NE(o.err.find("quadrature order 2 -> 4"), std::string::npos) << o.err;
}
