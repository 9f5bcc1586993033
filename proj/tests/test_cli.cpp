#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

std::string cli_path() {
  const char* p = std::getenv("SPTQ_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SPTQ_CLI must point at the built binary");
  return p;
}

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("state subcommand names the prepared state") {
  auto r = run_cli("state --hwp 22.5 --phi 0");
  CHECK(r.status == 0);
  CHECK(r.out.find("state: PsiPlus") != std::string::npos);

  r = run_cli("state --hwp 0");
  CHECK(r.status == 0);
  CHECK(r.out.find("state: a,H") != std::string::npos);

  r = run_cli("state --hwp 22.5 --phi 1.0");
  CHECK(r.status == 0);
  CHECK(r.out.find("state: (no named match)") != std::string::npos);

  r = run_cli("state --hwp 22.5 --theta-a 22.5 --theta-b 67.5 --format json");
  CHECK(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["label"] == "S,+45");
}

TEST_CASE("confusion emits a diagonal table in the ideal case") {
  const auto r = run_cli("confusion --trials 1000 --seed 5");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("prepared,portΨ+,portΨ−,portΦ+,portΦ−,none\n",
                    0) == 0);
  CHECK(r.out.find("PsiPlus,1000,0,0,0,0\n") != std::string::npos);
  CHECK(r.out.find("PsiMinus,0,1000,0,0,0\n") != std::string::npos);
  CHECK(r.out.find("PhiPlus,0,0,1000,0,0\n") != std::string::npos);
  CHECK(r.out.find("PhiMinus,0,0,0,1000,0\n") != std::string::npos);
}

TEST_CASE("a pi phase offset swaps the Psi rows") {
  const auto r = run_cli("confusion --trials 500 --seed 5 --phase-offset 3.14159265358979312");
  CHECK(r.status == 0);
  CHECK(r.out.find("PsiPlus,0,500,0,0,0\n") != std::string::npos);
  CHECK(r.out.find("PsiMinus,500,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("seeded runs are byte-identical across repeats, threads and kernels") {
  const std::string base = "confusion --trials 4000 --seed 99 --phase-sigma 0.5 --eta "
                           "0.9,0.8,0.95,0.85 --dark-rate 1e5";
  const auto a = run_cli(base);
  const auto b = run_cli(base);
  const auto threaded = run_cli(base + " --threads 2");
  const auto scalar = run_cli(base + " --simd scalar");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == threaded.out);
  CHECK(a.out == scalar.out);

  const std::string qkd = "qkd --photons 20000 --seed 7 --eve --phase-sigma 0.2";
  CHECK(run_cli(qkd).out == run_cli(qkd + " --threads 2").out);
}

TEST_CASE("qkd reports zero QBER when ideal and 1/4 under attack") {
  auto r = run_cli("qkd --photons 20000 --seed 11");
  CHECK(r.status == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["qber"] == 0.0);
  CHECK(doc["key_bits"] == 2 * doc["sifted"].get<std::uint64_t>());
  CHECK(doc["bits_per_sifted_photon"] == 2);

  r = run_cli("qkd --photons 20000 --seed 11 --eve");
  doc = nlohmann::json::parse(r.out);
  CHECK(doc["qber"].get<double>() == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("qkd trace dump matches the report") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto trace_path = dir / "sptq_test_trace.csv";
  std::filesystem::remove(trace_path);
  const auto r = run_cli("qkd --photons 500 --seed 3 --trace " + trace_path.string());
  CHECK(r.status == 0);
  const std::string trace = slurp(trace_path);
  CHECK(trace.rfind("round,sender_basis,", 0) == 0);
  // header + one line per round
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 501);
  std::filesystem::remove(trace_path);
}

TEST_CASE("phi sweep emits analytic and empirical columns per grid point") {
  const auto r = run_cli(
      "sweep --phi-grid 0,1.5707963267948966,3.141592653589793 --trials 2000 --seed 2");
  CHECK(r.status == 0);
  // header + 3 rows
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
  CHECK(r.out.find("\n0,1,") != std::string::npos);           // phi=0: analytic Psi+ = 1
  CHECK(r.out.find("\n1.5707963267948966,0.5") != std::string::npos);
}

TEST_CASE("sigma sweep starts error-free at sigma zero") {
  const auto r = run_cli("sweep --sigma-grid 0,0.5 --trials 4000 --seed 2");
  CHECK(r.status == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  const auto line_start = r.out.find('\n') + 1;
  const auto first_row = r.out.substr(line_start, r.out.find('\n', line_start) - line_start);
  CHECK(first_row.rfind("0,4000,", 0) == 0);
  CHECK(first_row.find(",0,0,0,") != std::string::npos);  // qber columns all zero
}

TEST_CASE("invalid invocations fail without leaving output files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / "sptq_test_partial.csv";
  std::filesystem::remove(out_path);

  CHECK(run_cli("confusion --trials 0").status != 0);
  CHECK(run_cli("confusion --format xml").status != 0);
  CHECK(run_cli("sweep --trials 100").status != 0);  // no grid
  CHECK(run_cli("sweep --phi-grid 0 --sigma-grid 0 --trials 10").status != 0);
  CHECK(run_cli("qkd --photons 10 --eta 0.5,0.5").status != 0);
  CHECK(run_cli("nonsense").status != 0);

  CHECK(run_cli("confusion --trials -3 --out " + out_path.string()).status != 0);
  CHECK(run_cli("confusion --format xml --out " + out_path.string()).status != 0);
  CHECK(!std::filesystem::exists(out_path));
}

TEST_CASE("--out writes the same bytes as stdout") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / "sptq_test_out.csv";
  std::filesystem::remove(out_path);
  const std::string base = "confusion --trials 300 --seed 8";
  const auto streamed = run_cli(base);
  const auto filed = run_cli(base + " --out " + out_path.string());
  CHECK(filed.status == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(out_path) == streamed.out);
  std::filesystem::remove(out_path);
}
