#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + BEURLING_CLI + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string preset(const char* name) { return std::string(BEURLING_PRESETS) + "/" + name; }

fs::path scratch(const char* name) {
  const auto d = fs::temp_directory_path() / ("beurling_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ConstructReportsCorrectionOrder) {
  const auto r = cli("construct --spec " + preset("region1.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("M").get<int>(), 0);
  EXPECT_GT(j.at("certificate").at("min_xlogx_dF").get<double>(), 0);
}

TEST(Cli, ConstructReportsOscillatoryBlocks) {
  const auto r = cli("construct --spec " + preset("region2.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_GE(json::parse(r.out).at("full_blocks_below_xmax").get<int>(), 2);
}

TEST(Cli, InvalidSpecIsRejected) {
  const auto dir = scratch("invalid");
  std::ofstream(dir / "bad.json") << R"({"family":"prescription","prescription":{"S":[[0.6,0]],"delta":0.6}})";
  EXPECT_EQ(cli("construct --spec " + (dir / "bad.json").string()).code, 4);
  std::ofstream(dir / "garbled.json") << "{not json";
  EXPECT_EQ(cli("construct --spec " + (dir / "garbled.json").string()).code, 4);
}

TEST(Cli, MissingFile) { EXPECT_EQ(cli("construct --spec /nonexistent/spec.json").code, 2); }

TEST(Cli, TableCsvHeader) {
  const auto r = cli("table --what psi --spec " + preset("region1.json") + " --xmax 1e4 --seed 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x,psi,model,residual");
  EXPECT_NE(cli("table --what nonsense --spec " + preset("region1.json")).code, 0);
}

TEST(Cli, ZetaJson) {
  const auto r = cli("table --what zeta --s 3+0i --spec " + preset("region1.json") + " --xmax 1e4 --seed 1");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  const double v = j.at("value")[0].get<double>(), lv = j.at("log_euler_product").at("value")[0].get<double>();
  EXPECT_NEAR(std::exp(lv), v, j.at("truncation_bound").get<double>() + 1e-3);
}

TEST(Cli, RunIsReproducibleAndExitMatchesManifest) {
  const auto a = scratch("run_a"), b = scratch("run_b");
  const std::string args = "run --spec " + preset("region1.json") + " --xmax 1e5 --seed 1 --seed 2 --out ";
  const auto ra = cli(args + a.string()), rb = cli(args + b.string() + " --threads 2");
  const auto m = json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(ra.code == 0, m.at("passed").get<bool>());
  EXPECT_EQ(ra.code, rb.code);
  for (const auto& f : m.at("files")) {
    const auto name = f.get<std::string>();
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
}

TEST(Cli, PrimeCacheIsWrittenAndReused) {
  const auto cache = scratch("cache");
  const std::string env = "BEURLING_CACHE=" + cache.string();
  const std::string args = "run --spec " + preset("region3.json") + " --xmax 1e5 --seed 1 --out ";
  const auto c1 = scratch("c1"), c2 = scratch("c2");
  ASSERT_EQ(cli(args + c1.string(), env).code, cli(args + c1.string()).code);
  ASSERT_TRUE(fs::exists(cache / "primes_100000.u32"));
  EXPECT_EQ(fs::file_size(cache / "primes_100000.u32"), 9592u * 4);
  cli(args + c2.string(), env);
  EXPECT_EQ(slurp(c1 / "manifest.json"), slurp(c2 / "manifest.json"));
}
