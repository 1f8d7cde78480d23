#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "gnf/image.hpp"
#include "gnf/pgm.hpp"
#include "support/test_util.hpp"

namespace {

const std::string cli = GNF_CLI_PATH;

int run_cmd(const std::string& args) {
  const int status = std::system((cli + " " + args).c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("denoise: adaptive at theta 1 writes the same file as mean") {
  testutil::TempDir tmp("gnf_cli_denoise");
  testutil::Rng rng(51);
  const auto input = tmp.path() / "input.pgm";
  gnf::save_pgm_file(input, testutil::random_image_8bit(rng, 32, 24));

  const auto out_mean = tmp.path() / "mean.pgm";
  const auto out_adaptive = tmp.path() / "adaptive.pgm";
  CHECK(run_cmd("denoise --input " + q(input) + " --output " + q(out_mean) +
                " --filter mean") == 0);
  CHECK(run_cmd("denoise --input " + q(input) + " --output " + q(out_adaptive) +
                " --filter adaptive --theta 1.0") == 0);
  CHECK(testutil::slurp(out_mean) == testutil::slurp(out_adaptive));
}

TEST_CASE("denoise: a 0.6 step at theta 0.3 passes through untouched") {
  testutil::TempDir tmp("gnf_cli_step");
  const auto input = tmp.path() / "step.pgm";
  gnf::save_pgm_file(input, testutil::step_image(64, 64, 0.2, 0.8));

  const auto output = tmp.path() / "out.pgm";
  CHECK(run_cmd("denoise --input " + q(input) + " --output " + q(output) +
                " --filter adaptive --theta 0.3") == 0);
  CHECK(testutil::slurp(output) == testutil::slurp(input));
}

TEST_CASE("denoise: --reference prints the quality scores") {
  testutil::TempDir tmp("gnf_cli_ref");
  const auto input = tmp.path() / "in.pgm";
  gnf::save_pgm_file(input, gnf::Image(16, 16, 0.5));
  const auto output = tmp.path() / "out.pgm";
  const auto log = tmp.path() / "stdout.txt";

  CHECK(run_cmd("denoise --input " + q(input) + " --output " + q(output) +
                " --filter mean --reference " + q(input) + " > " + q(log)) == 0);
  const std::string text = read_text(log);
  CHECK(text.find("mse=0 ") != std::string::npos);
  CHECK(text.find("psnr_db=inf") != std::string::npos);
  // a constant image comes back byte-identical under any filter
  CHECK(testutil::slurp(output) == testutil::slurp(input));
}

TEST_CASE("denoise: unreadable input exits nonzero with a diagnostic") {
  testutil::TempDir tmp("gnf_cli_bad");
  const auto garbage = tmp.path() / "garbage.pgm";
  std::ofstream(garbage) << "not a pgm";
  const auto err_log = tmp.path() / "stderr.txt";
  CHECK(run_cmd("denoise --input " + q(garbage) + " --output " +
                q(tmp.path() / "out.pgm") + " --filter mean 2> " + q(err_log)) != 0);
  CHECK(read_text(err_log).find("error:") != std::string::npos);

  CHECK(run_cmd("denoise --input " + q(tmp.path() / "missing.pgm") + " --output " +
                q(tmp.path() / "out.pgm") + " --filter mean 2> /dev/null") != 0);
}

TEST_CASE("simulate-hw: six-of-nine window reports mask and output") {
  testutil::TempDir tmp("gnf_cli_hw");
  const auto trace = tmp.path() / "trace.csv";
  const auto log = tmp.path() / "stdout.txt";
  CHECK(run_cmd("simulate-hw --center 0.5 "
                "--neighbors 0.45,0.48,0.90,0.52,0.10,0.55,0.95,0.50 "
                "--theta 0.1 --trace " + q(trace) + " --trace-stride 500 > " +
                q(log)) == 0);
  const std::string text = read_text(log);
  CHECK(text.find("mask=110110101") != std::string::npos);
  CHECK(text.find("n=6") != std::string::npos);
  CHECK(text.find("output=0.5\n") != std::string::npos);
  CHECK(text.find("pipeline_end_s=0.18") != std::string::npos);

  const std::string csv = read_text(trace);
  CHECK(csv.rfind("time_s,slot,v_diff_v,vco_out,charge_v,neuron_out,clk,avg_out\n", 0) == 0);

  SUBCASE("nine equal intensities keep the whole window") {
    CHECK(run_cmd("simulate-hw --center 0.4 "
                  "--neighbors 0.4,0.4,0.4,0.4,0.4,0.4,0.4,0.4 "
                  "--theta 0.3 --trace " + q(trace) + " --trace-stride 500 > " +
                  q(log)) == 0);
    const std::string all = read_text(log);
    CHECK(all.find("mask=111111111") != std::string::npos);
    CHECK(all.find("output=0.4\n") != std::string::npos);
  }
}

TEST_CASE("simulate-hw: infeasible threshold names the feasible range") {
  testutil::TempDir tmp("gnf_cli_hw_bad");
  const auto err_log = tmp.path() / "stderr.txt";
  CHECK(run_cmd("simulate-hw --center 0.5 "
                "--neighbors 0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5 "
                "--theta 1.0 --trace " + q(tmp.path() / "t.csv") + " 2> " +
                q(err_log)) != 0);
  CHECK(read_text(err_log).find("feasible range") != std::string::npos);
}

TEST_CASE("bench: runs a corpus and writes the CSV report") {
  testutil::TempDir tmp("gnf_cli_bench");
  const auto corpus = tmp.path() / "corpus";
  std::filesystem::create_directory(corpus);
  testutil::Rng rng(52);
  gnf::save_pgm_file(corpus / "one.pgm", testutil::step_image(24, 24, 0.2, 0.8));
  gnf::save_pgm_file(corpus / "two.pgm", testutil::random_image_8bit(rng, 24, 24));

  const auto csv = tmp.path() / "report.csv";
  const auto log = tmp.path() / "stdout.txt";
  CHECK(run_cmd("bench --corpus " + q(corpus) + " --out " + q(csv) +
                " --seed 5 > " + q(log)) == 0);
  CHECK(read_text(log).find("noise_rate") != std::string::npos);
  const std::string report = read_text(csv);
  CHECK(report.rfind("record,image_id,noise_variance,filter,theta,mse,psnr_db\n", 0) == 0);
  CHECK(report.find("# images=2 skipped=0") != std::string::npos);

  SUBCASE("reruns are byte-identical") {
    const auto csv2 = tmp.path() / "report2.csv";
    CHECK(run_cmd("bench --corpus " + q(corpus) + " --out " + q(csv2) +
                  " --seed 5 > /dev/null") == 0);
    CHECK(testutil::slurp(csv) == testutil::slurp(csv2));
  }
}

TEST_CASE("bench: empty corpus exits nonzero") {
  testutil::TempDir tmp("gnf_cli_bench_empty");
  const auto corpus = tmp.path() / "corpus";
  std::filesystem::create_directory(corpus);
  CHECK(run_cmd("bench --corpus " + q(corpus) + " --out " +
                q(tmp.path() / "r.csv") + " 2> /dev/null") != 0);
}
