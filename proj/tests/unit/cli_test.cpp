#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "process.hpp"

namespace {

using polycycle::testing::ProcessResult;
using polycycle::testing::read_file;
using polycycle::testing::run_process;
using polycycle::testing::temp_path;

const std::string kExe = POLYCYCLE_LAB_EXE;
const std::string kData = POLYCYCLE_TEST_DATA;

ProcessResult lab(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {}) {
  return run_process(kExe, args, env);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string write_temp(const std::string& text) {
  const std::string p = temp_path("pc_cfg") + ".json";
  std::ofstream(p) << text;
  return p;
}

TEST(Cli, ThRunFrequencies) {
  const ProcessResult r = lab({"th-run", "--input", kData + "/th_n2.json", "--depth", "100000"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "k,psi,predicted,abs_error");
  EXPECT_NEAR(std::stod(fields(ls[1])[1]), 0.448142, 0.01);
  EXPECT_NEAR(std::stod(fields(ls[2])[1]), 0.551858, 0.01);
  EXPECT_NEAR(std::stod(fields(ls[1])[2]), 0.448142011772455, 1e-12);
}

TEST(Cli, ThRunTableAndJson) {
  const std::string table = temp_path("pc_table") + ".csv";
  const ProcessResult r =
      lab({"th-run", "-i", kData + "/th_n2.json", "--depth", "50", "--table", table, "--format", "json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.front(), '{');
  EXPECT_NE(r.out.find("\"frequencies\""), std::string::npos);
  const auto t = lines(read_file(table));
  ASSERT_GT(t.size(), 51u);
  EXPECT_EQ(t[0], "side,k,n_or_m,xi_value,residual");
  std::remove(table.c_str());
}

TEST(Cli, MissingFieldIsAnError) {
  const ProcessResult r = lab({"th-run", "--input", kData + "/missing_lambda_e.json"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("missing field \"Lambda_e\""), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, InvalidConfigIsAValidationFailure) {
  const std::string p = write_temp(R"({"Lambda_i": 0.5, "Lambda_e": 1.25, "xi_E": [0.1, 0.0], "xi_I": 0.3})");
  const ProcessResult r = lab({"th-run", "--input", p});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("validation failure"), std::string::npos) << r.err;
  std::remove(p.c_str());
}

TEST(Cli, MalformedAndMissingInput) {
  const std::string p = write_temp("{\n\"Lambda_i\": 0.5,\n");
  const ProcessResult r = lab({"th-run", "--input", p});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
  std::remove(p.c_str());
  EXPECT_EQ(lab({"th-run", "--input", "/nonexistent/cfg.json"}).exit_code, 1);
  EXPECT_EQ(lab({"th-run"}).exit_code, 1);
  EXPECT_EQ(lab({}).exit_code, 1);
  EXPECT_EQ(lab({"th-run", "-i", kData + "/th_n2.json", "--depth", "0"}).exit_code, 1);
  EXPECT_EQ(lab({"th-run", "-i", kData + "/th_n2.json", "--format", "xml"}).exit_code, 1);
}

TEST(Cli, Rectify) {
  const ProcessResult r = lab({"rectify", "--input", kData + "/doubling.json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 21u);
  EXPECT_EQ(ls[0], "x,xi,residual");
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_LT(std::fabs(std::stod(fields(ls[i])[2])), 1e-9) << ls[i];
}

TEST(Cli, Sparkle) {
  const ProcessResult r = lab({"sparkle", "--input", kData + "/sqrt_spark.json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 37u);
  EXPECT_EQ(ls[0], "n,xi,eps,residual");
  EXPECT_EQ(fields(ls[1])[0], "5");
  EXPECT_LT(std::fabs(std::stod(fields(ls.back())[3])), 1e-3);
  // ε_40 is far below the double range
  EXPECT_EQ(fields(ls.back())[2], "");
}

TEST(Cli, Rotate) {
  const ProcessResult r = lab({"rotate", "--input", kData + "/golden_rotation.json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[0], "n,count,psi");
  EXPECT_EQ(fields(ls.back())[0], "100000");
  EXPECT_NEAR(std::stod(fields(ls.back())[2]), 0.25, 0.003);
}

TEST(Cli, FreqSingleAndPair) {
  const ProcessResult r = lab({"freq", "--input", kData + "/th_n2.json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("phi,,0.32192809488736"), std::string::npos) << r.out;
  const std::string pair = write_temp(R"({
    "A": {"Lambda_i": 0.5, "Lambda_e": 1.25, "xi_E": [0.0, 0.1], "xi_I": 0.3},
    "B": {"Lambda_i": 0.5, "Lambda_e": 1.25, "xi_E": [0.0, 0.11157178047], "xi_I": 0.3}})");
  const ProcessResult v = lab({"freq", "--input", pair});
  ASSERT_EQ(v.exit_code, 0) << v.err;
  EXPECT_NE(v.out.find("Inequivalent,arc_mismatch,1,"), std::string::npos) << v.out;
  std::remove(pair.c_str());
}

TEST(Cli, CertifyShippedModels) {
  const ProcessResult r = lab({"certify"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("exempt"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find(",fail,"), std::string::npos) << r.out;
}

TEST(Cli, CheckMode) {
  for (const auto& [cmd, file] : std::vector<std::pair<std::string, std::string>>{
           {"rectify", "doubling.json"}, {"sparkle", "sqrt_spark.json"}, {"th-run", "th_n2.json"},
           {"freq", "th_n2.json"}, {"rotate", "golden_rotation.json"}}) {
    const ProcessResult r = lab({cmd, "--input", kData + "/" + file, "--check"});
    EXPECT_EQ(r.exit_code, 0) << cmd << ": " << r.err << r.out;
    EXPECT_EQ(lines(r.out).at(0), "subject,property,status,detail") << cmd;
    EXPECT_EQ(r.out.find(",fail,"), std::string::npos) << cmd << ": " << r.out;
  }
}

TEST(Cli, OutputFileAndDeterminism) {
  const std::string out = temp_path("pc_out") + ".csv";
  const std::vector<std::string> args{"th-run", "-i", kData + "/th_n2.json", "--depth", "20000"};
  const ProcessResult a = lab(args, {{"POLYCYCLE_LAB_THREADS", "1"}});
  const ProcessResult b = lab(args, {{"POLYCYCLE_LAB_THREADS", "4"}});
  std::vector<std::string> with_o = args;
  with_o.insert(with_o.end(), {"-o", out});
  const ProcessResult c = lab(with_o);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(c.out.empty());
  EXPECT_EQ(read_file(out), a.out);
  std::remove(out.c_str());
}

}  // namespace
