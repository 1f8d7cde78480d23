// Acceptance suite: end-to-end checks of the filter library, the behavioral
// hardware model and the benchmark tooling. Prints one PASS/FAIL line per
// check; the exit code is the number of failures.
//
// usage: acceptance <corpus_dir> <cli_binary>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gnf/gnf.hpp"
#include "support/test_util.hpp"

namespace {

using gnf::AnalogParams;
using gnf::BenchConfig;
using gnf::BenchReport;
using gnf::FilterKind;
using gnf::Image;
using gnf::Threshold;
using gnf::Window3x3;

struct Context {
  std::filesystem::path corpus_dir;
  std::string cli;
  std::filesystem::path work_dir;
  BenchReport bench;  // shared by the ordering and sweep checks
  bool bench_ready = false;
};

int failures = 0;

void check(int index, const std::string& name, const std::function<void()>& body) {
  try {
    body();
    std::cout << "[PASS] " << index << " " << name << "\n";
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "[FAIL] " << index << " " << name << ": " << e.what() << "\n";
  }
}

void require(bool ok, const std::string& detail) {
  if (!ok) throw std::runtime_error(detail);
}

int run_cmd(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fmt(double v) { return gnf::format_double(v); }

// --- 1 -----------------------------------------------------------------

void degenerate_theta_equals_mean() {
  testutil::Rng rng(0xACCE0001);
  for (int i = 0; i < 100; ++i) {
    const Image img = testutil::random_image(rng, 64, 64);
    const Image mean = gnf::filter_image(img, FilterKind::mean());
    const Image adaptive = gnf::filter_image(img, FilterKind::adaptive(Threshold{1.0}));
    require(testutil::images_identical(mean, adaptive),
            "mismatch on random image " + std::to_string(i));
  }
}

// --- 2 -----------------------------------------------------------------

void edge_preservation() {
  const Image img = testutil::step_image(64, 64, 0.2, 0.8);  // step height 0.6
  const Image adaptive = gnf::filter_image(img, FilterKind::adaptive(Threshold{0.3}));
  require(testutil::images_identical(adaptive, img),
          "adaptive output differs from the clean step input");

  const Image mean = gnf::filter_image(img, FilterKind::mean());
  for (int y = 0; y < img.height(); ++y) {
    const bool changed =
        mean.at(31, y) != img.at(31, y) || mean.at(32, y) != img.at(32, y);
    require(changed, "mean filter left row " + std::to_string(y) +
                         " unchanged next to the step");
  }
}

// --- 3 / 4 ---------------------------------------------------------------

const BenchReport& corpus_bench(Context& ctx) {
  if (!ctx.bench_ready) {
    BenchConfig cfg;
    cfg.corpus_dir = ctx.corpus_dir;
    cfg.noise_variances = {0.02, 0.04};
    cfg.thetas = {0.2, 0.3, 0.4};
    cfg.seed = 42;
    ctx.bench = gnf::run_bench(cfg);
    ctx.bench_ready = true;
  }
  return ctx.bench;
}

void ordering_reproduction(Context& ctx) {
  const BenchReport& report = corpus_bench(ctx);
  require(report.images_used >= 20,
          "corpus has only " + std::to_string(report.images_used) + " images");
  for (double variance : {0.02, 0.04}) {
    const auto* adaptive =
        gnf::find_aggregate(report, variance, FilterKind::adaptive(Threshold{0.3}));
    const auto* mean = gnf::find_aggregate(report, variance, FilterKind::mean());
    require(adaptive && mean, "missing aggregates");
    require(adaptive->mse < mean->mse,
            "variance " + fmt(variance) + ": adaptive mse " + fmt(adaptive->mse) +
                " not below mean mse " + fmt(mean->mse));
    const double reduction = (mean->mse - adaptive->mse) / mean->mse;
    require(reduction >= 0.15,
            "variance " + fmt(variance) + ": mse reduction " + fmt(reduction) +
                " below 15%");
    require(adaptive->psnr_db > mean->psnr_db,
            "variance " + fmt(variance) + ": adaptive psnr " + fmt(adaptive->psnr_db) +
                " not above mean psnr " + fmt(mean->psnr_db));
  }
}

void threshold_sweep_shape(Context& ctx) {
  const BenchReport& report = corpus_bench(ctx);
  double best = -1e300;
  double at_03 = 0.0;
  for (double theta : {0.2, 0.3, 0.4}) {
    const auto* a =
        gnf::find_aggregate(report, 0.02, FilterKind::adaptive(Threshold{theta}));
    require(a != nullptr, "missing adaptive aggregate");
    best = std::max(best, a->psnr_db);
    if (theta == 0.3) at_03 = a->psnr_db;
  }
  require(at_03 >= best - 0.3, "theta 0.3 psnr " + fmt(at_03) +
                                   " more than 0.3 dB below the best " + fmt(best));
}

// --- 5 -----------------------------------------------------------------

void mask_equivalence_sweep() {
  for (double theta : {0.1, 0.3, 0.5}) {
    const AnalogParams params =
        gnf::calibrate(Threshold{theta}, AnalogParams::defaults());
    // the one quantized level closest to the boundary may legitimately differ
    const int boundary_level = static_cast<int>(std::lround(theta * 255.0));
    std::set<int> mismatched;
    for (int level = 0; level < 256; ++level) {
      Window3x3 w;
      w.values.fill(level / 255.0);
      w.values[4] = 0.0;
      const gnf::PipelineResult r = gnf::pipeline_outcome(w, params);
      const gnf::SimilarityMask sw = gnf::similarity_mask(w, Threshold{theta});
      if (r.mask.bits != sw.bits) {
        mismatched.insert(level);
        continue;
      }
      require(std::fabs(r.output - gnf::adaptive_mean(w, sw)) <= 1e-12,
              "theta " + fmt(theta) + " level " + std::to_string(level) +
                  ": outputs differ beyond 1e-12");
    }
    for (int level : mismatched)
      require(level == boundary_level,
              "theta " + fmt(theta) + ": non-boundary level " +
                  std::to_string(level) + " mismatches the software mask");
    require(mismatched.size() <= 1,
            "theta " + fmt(theta) + ": more than one mismatching level");
  }
}

// --- 6 -----------------------------------------------------------------

void timing_reproduction() {
  const AnalogParams params =
      gnf::calibrate(Threshold{0.3}, AnalogParams::defaults());
  Window3x3 w;
  w.values.fill(0.5);

  double last_time = 0.0;
  double first_avg_time = -1.0;
  long long samples = 0;
  const gnf::PipelineResult r =
      gnf::run_window_pipeline(w, params, [&](const gnf::TraceSample& s) {
        last_time = s.time_s;
        if (s.avg_out && first_avg_time < 0.0) first_avg_time = s.time_s;
        ++samples;
      });

  require(samples > 0, "no trace samples");
  require(std::fabs(last_time - 0.180) <= params.dt,
          "pipeline duration " + fmt(last_time) + " not within one dt of 180 ms");
  require(first_avg_time > 0.160 && first_avg_time <= 0.180 + 1e-12,
          "averaging output activates at " + fmt(first_avg_time) +
              ", outside (160 ms, 180 ms]");
  require(r.activation_time_s > 0.160 && r.activation_time_s <= 0.180 + 1e-12,
          "activation timestamp " + fmt(r.activation_time_s) +
              " outside (160 ms, 180 ms]");
}

// --- 7 -----------------------------------------------------------------

void vco_analytic_checks() {
  const AnalogParams p = AnalogParams::defaults();
  require(std::fabs(gnf::vco_duty(0.0, p) - 0.5) <= 1e-12, "duty(0) != 1/2");
  require(std::fabs(gnf::vco_duty(p.v_sine_amp, p) - 0.0) <= 1e-12, "duty(A) != 0");
  require(std::fabs(gnf::vco_duty(p.v_sine_amp / 2.0, p) - 1.0 / 3.0) <= 1e-12,
          "duty(A/2) != 1/3");

  for (int k = 0; k < 20; ++k) {
    const double v = p.v_sine_amp * k / 19.0;
    const int n = 200000;
    int high = 0;
    for (int i = 0; i < n; ++i) {
      const double phase = 2.0 * std::numbers::pi * (i + 0.5) / n;
      if (p.v_sine_amp * std::sin(phase) > v) ++high;
    }
    const double numeric = static_cast<double>(high) / n;
    require(std::fabs(numeric - gnf::vco_duty(v, p)) <= 1e-4,
            "integration disagrees at level " + std::to_string(k));
  }
}

// --- 8 -----------------------------------------------------------------

void median_oracle() {
  testutil::Rng rng(0xACCE0008);
  for (int i = 0; i < 50; ++i) {
    const Image img = testutil::random_image(rng, 32, 32);
    const Image out = gnf::filter_image(img, FilterKind::median());
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) {
        std::array<double, 9> v = gnf::window_at(img, x, y).values;
        std::sort(v.begin(), v.end());
        require(out.at(x, y) == v[4], "median mismatch at image " +
                                          std::to_string(i) + " pixel (" +
                                          std::to_string(x) + "," +
                                          std::to_string(y) + ")");
      }
  }
}

// --- 9 -----------------------------------------------------------------

void cli_determinism(Context& ctx) {
  const auto dir = ctx.work_dir;
  auto q = [](const std::filesystem::path& p) { return "'" + p.string() + "'"; };

  const auto csv1 = dir / "bench1.csv";
  const auto csv2 = dir / "bench2.csv";
  auto bench_cmd = [&](const std::filesystem::path& out) {
    return ctx.cli + " bench --corpus " + q(ctx.corpus_dir) + " --out " + q(out) +
           " --seed 42 > /dev/null";
  };
  require(run_cmd(bench_cmd(csv1)) == 0, "bench run failed");
  require(run_cmd(bench_cmd(csv2)) == 0, "second bench run failed");
  require(testutil::slurp(csv1) == testutil::slurp(csv2),
          "bench CSVs differ between identical runs");

  const auto trace1 = dir / "trace1.csv";
  const auto trace2 = dir / "trace2.csv";
  const std::string sim_args =
      " simulate-hw --center 0.5 --neighbors 0.45,0.48,0.90,0.52,0.10,0.55,0.95,0.50"
      " --theta 0.3 --trace-stride 200 > /dev/null";
  require(run_cmd(ctx.cli + sim_args + " --trace " + q(trace1)) == 0,
          "simulate-hw run failed");
  require(run_cmd(ctx.cli + sim_args + " --trace " + q(trace2)) == 0,
          "second simulate-hw run failed");
  require(testutil::slurp(trace1) == testutil::slurp(trace2),
          "traces differ between identical runs");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <corpus_dir> <cli_binary>\n";
    return 2;
  }
  Context ctx;
  ctx.corpus_dir = argv[1];
  ctx.cli = std::string("'") + argv[2] + "'";
  testutil::TempDir work("gnf_acceptance");
  ctx.work_dir = work.path();

  check(1, "adaptive(theta=1) equals the mean filter bit-exactly on 100 random images",
        degenerate_theta_equals_mean);
  check(2, "a clean 0.6 step at theta 0.3 passes through exactly; the mean filter blurs it",
        edge_preservation);
  check(3, "corpus bench: adaptive theta 0.3 beats the mean filter by >= 15% mse at both variances",
        [&] { ordering_reproduction(ctx); });
  check(4, "threshold sweep: theta 0.3 within 0.3 dB of the best of {0.2, 0.3, 0.4}",
        [&] { threshold_sweep_shape(ctx); });
  check(5, "hardware mask equals the software mask across all 256 quantized levels",
        mask_equivalence_sweep);
  check(6, "averaging output activates inside the final slot; total duration 180 ms",
        timing_reproduction);
  check(7, "vco duty closed forms and comparator integration agree",
        vco_analytic_checks);
  check(8, "median filter matches an independent sort oracle on 50 random images",
        median_oracle);
  check(9, "bench and simulate-hw runs are byte-identical under fixed seeds",
        [&] { cli_determinism(ctx); });

  if (failures == 0)
    std::cout << "all 9 checks passed\n";
  else
    std::cout << failures << " check(s) failed\n";
  return failures;
}
