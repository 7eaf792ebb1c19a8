#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rectcft/cli/app.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rectcft");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rectcft::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

rectcft::io::Json parse(const Result& r) { return rectcft::io::Json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rectcft_test_" + name);
}

}  // namespace

TEST(Cli, AmplitudeJson) {
  const auto r = run({"amplitude", "--order", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["eta_check"], "pass");
  EXPECT_EQ(j["series"]["variable"], "qhat");
  EXPECT_EQ(j["series"]["prefactor"]["c_coefficient"], "-1/24");
  EXPECT_EQ(j["series"]["coefficients"][4], (rectcft::io::Json{"0/1", "3/4", "1/8"}));
  EXPECT_TRUE(j["series"]["coefficients"][3].empty());
}

TEST(Cli, AmplitudeAtNumericCentralCharge) {
  const auto r = run({"amplitude", "--order", "4", "--at-c", "1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r)["eta_check"], "pass");
  EXPECT_EQ(run({"amplitude", "--symbolic", "--at-c", "1/2"}).code, 2);
}

TEST(Cli, PnSeriesAndFirstDeviation) {
  const auto r = run({"pn", "--slits-exponent", "3", "--order", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["series"]["coefficients"][8], "245/8");
  EXPECT_EQ(j["first_deviation_from_p_k"]["k"], 8);
  EXPECT_EQ(j["first_deviation_from_p_k"]["sign"], 1);
  const auto plain = run({"pn", "--slits-exponent", "1", "--order", "2", "--format", "plain"});
  EXPECT_NE(plain.out.find("1 + q + 5/2q^2 + O(q^3)"), std::string::npos) << plain.out;
}

TEST(Cli, BoundaryStateAndGluing) {
  const auto b = run({"boundary-state", "--level", "4", "--format", "csv"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("-1/2"), std::string::npos);
  const auto g = run({"gluing-check", "--nmax", "3", "--level", "8"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_TRUE(parse(g)["all_vanish"].get<bool>());
}

TEST(Cli, FreeFieldSubcommands) {
  const auto bo = run({"boson", "--amplitude-order", "8", "--gluing-level", "6", "--compare-virasoro", "--level", "6"});
  EXPECT_EQ(bo.code, 0) << bo.err;
  const auto mj = run({"majorana", "--g-table", "4", "--amplitude-order", "6", "--compare-virasoro", "--level", "6"});
  ASSERT_EQ(mj.code, 0) << mj.err;
  const auto j = parse(mj);
  EXPECT_EQ(j["eta_check"], "pass");
  EXPECT_TRUE(j["virasoro_comparison"]["equal"].get<bool>());
}

TEST(Cli, EverySelftestPasses) {
  for (const char* sub : {"amplitude", "boson", "majorana", "slitmap", "loop", "ising", "fit"}) {
    const auto r = run({sub, "--selftest"});
    EXPECT_EQ(r.code, 0) << sub << "\n" << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << sub;
  }
}

TEST(Cli, FitFromCsvFile) {
  const auto path = temp_file("fit.csv");
  {
    std::ofstream f(path);
    f.precision(17);
    f << "N,y\n";
    for (int N = 8; N <= 40; N += 2) f << N << "," << 0.7 - 0.3 / N + 2.0 / (N * N) << "\n";
  }
  const auto r = run({"fit", "--in", path.string(), "--basis", "1,1/N,1/N^2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_NEAR(j["coefficients"]["1"]["value"].get<double>(), 0.7, 1e-10);
  EXPECT_NEAR(j["coefficients"]["1/N"]["value"].get<double>(), -0.3, 1e-8);
  EXPECT_EQ(j["points"], 17);
  std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"amplitude", "--order", "99"}).code, 2);
  EXPECT_EQ(run({"pn"}).code, 2);
  EXPECT_EQ(run({"loop", "--p", "7"}).code, 2);
  EXPECT_EQ(run({"ising", "--nmax", "5000"}).code, 2);
  EXPECT_EQ(run({"slitmap", "--exponent", "2", "--z", "1.0", "0.1"}).code, 4);
  EXPECT_EQ(run({"--help"}).code, 0);

  rectcft::cli::CheckList failing;
  failing.add("always", false, "by construction");
  std::ostringstream os;
  EXPECT_EQ(rectcft::cli::finish_checks(failing, os), 1);
  EXPECT_NE(os.str().find("FAIL always"), std::string::npos);
}

TEST(Cli, OrderCapFromEnvironment) {
  ::setenv("RECTCFT_MAX_ORDER", "4", 1);
  EXPECT_EQ(run({"amplitude", "--order", "6"}).code, 2);
  ::setenv("RECTCFT_MAX_ORDER", "x", 1);
  EXPECT_EQ(run({"amplitude", "--order", "2"}).code, 2);
  ::unsetenv("RECTCFT_MAX_ORDER");
  EXPECT_EQ(run({"amplitude", "--order", "6"}).code, 0);
}

TEST(Cli, TablesAreIndependentOfJobs) {
  const auto a = run({"ising", "--nmin", "2", "--nmax", "30", "--kmax", "4", "--format", "csv"});
  const auto b = run({"--jobs", "3", "ising", "--nmin", "2", "--nmax", "30", "--kmax", "4", "--format", "csv"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "N,k,h_label,overlap");

  const auto l1 = run({"loop", "--p", "3", "--nmin", "8", "--nmax", "14", "--format", "csv"});
  const auto l2 = run({"loop", "--p", "3", "--nmin", "8", "--nmax", "14", "--format", "csv", "--jobs", "2"});
  ASSERT_EQ(l1.code, 0) << l1.err;
  EXPECT_EQ(l1.out, l2.out);
}

TEST(Cli, TableToFileSummaryToStdout) {
  const auto path = temp_file("ising.csv");
  const auto r = run({"ising", "--nmin", "2", "--nmax", "60", "--kmax", "3", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_NEAR(j["a1"]["value"].get<double>(), -0.0625, 1e-2);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "N,k,h_label,overlap");
  std::filesystem::remove(path);
}

TEST(Cli, InstalledBinaryRuns) {
  const std::string cmd = std::string(RECTCFT_CLI_PATH) + " pn --slits-exponent 2 --order 4 --format plain > " +
                          temp_file("bin.txt").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream f(temp_file("bin.txt"));
  std::stringstream s;
  s << f.rdbuf();
  EXPECT_NE(s.str().find("33/4q^4"), std::string::npos) << s.str();
  std::filesystem::remove(temp_file("bin.txt"));
}
