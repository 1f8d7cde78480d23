// Command-line front end: single-image denoising, corpus benchmark sweeps and
// behavioral hardware simulation of one 3x3 window with trace export.

#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnf/gnf.hpp"

namespace {

gnf::FilterKind make_filter(const std::string& name, double theta) {
  if (name == "mean") return gnf::FilterKind::mean();
  if (name == "median") return gnf::FilterKind::median();
  return gnf::FilterKind::adaptive(gnf::Threshold{theta});
}

int run_denoise(const std::string& input, const std::string& output,
                const std::string& filter_name, double theta,
                gnf::BorderPolicy border, const std::string& reference) {
  const gnf::Image img = gnf::load_pgm_file(input);
  const gnf::Image filtered =
      gnf::filter_image(img, make_filter(filter_name, theta), border);
  gnf::save_pgm_file(output, filtered);
  if (!reference.empty()) {
    const gnf::Image ref = gnf::load_pgm_file(reference);
    const gnf::QualityScore q = gnf::quality(ref, filtered);
    std::cout << "mse=" << gnf::format_double(q.mse)
              << " psnr_db=" << gnf::format_double(q.psnr_db) << "\n";
  }
  return 0;
}

int run_bench(const gnf::BenchConfig& cfg, const std::string& out_csv) {
  const gnf::BenchReport report = gnf::run_bench(cfg);
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::ofstream os(out_csv, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + out_csv + " for writing");
  gnf::write_report_csv(os, report);
  if (!os) throw std::runtime_error("write failed: " + out_csv);
  gnf::print_summary_table(std::cout, report);
  return 0;
}

int run_simulate_hw(double center, const std::vector<double>& neighbors, double theta,
                    const std::string& trace_path, int stride) {
  for (double v : neighbors)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("neighbor intensity outside [0, 1]");
  if (!(center >= 0.0 && center <= 1.0))
    throw std::invalid_argument("center intensity outside [0, 1]");

  const gnf::AnalogParams params =
      gnf::calibrate(gnf::Threshold{theta}, gnf::AnalogParams::defaults());

  gnf::Window3x3 w;
  w.values[4] = center;
  static constexpr int neighbor_slots[8] = {0, 1, 2, 3, 5, 6, 7, 8};
  for (int i = 0; i < 8; ++i) w.values[neighbor_slots[i]] = neighbors[i];

  std::ofstream os(trace_path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + trace_path + " for writing");
  gnf::TraceCsvWriter writer(os, stride);
  const gnf::PipelineResult r = gnf::run_window_pipeline(w, params, std::ref(writer));
  if (!os) throw std::runtime_error("write failed: " + trace_path);

  std::cout << "charge_rate_v_per_s=" << gnf::format_double(params.charge_rate) << "\n";
  std::cout << "firing_duty_threshold="
            << gnf::format_double(gnf::firing_duty_threshold(params)) << "\n";
  for (const gnf::SlotOutcome& s : r.slots) {
    std::cout << "slot=" << (&s - r.slots.data() + 1)
              << " window_index=" << s.window_index
              << " v_diff_v=" << gnf::format_double(s.v_diff_v)
              << " duty=" << gnf::format_double(s.duty) << " bit=" << s.bit
              << " fire_time_s=" << (s.fired ? gnf::format_double(s.fire_time_s) : "-")
              << "\n";
  }
  std::string mask;
  for (int bit : r.mask.bits) mask += bit ? '1' : '0';
  std::cout << "mask=" << mask << "\n";
  std::cout << "n=" << r.mask.n << "\n";
  std::cout << "output=" << gnf::format_double(r.output) << "\n";
  std::cout << "avg_out_active_from_s=" << gnf::format_double(r.activation_time_s)
            << "\n";
  std::cout << "pipeline_end_s=" << gnf::format_double(r.duration_s) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neuron-gated adaptive G-neighbor mean filter toolkit"};
  app.require_subcommand(1);

  const std::map<std::string, gnf::BorderPolicy> border_names{
      {"replicate", gnf::BorderPolicy::replicate},
      {"mirror", gnf::BorderPolicy::mirror},
      {"skip", gnf::BorderPolicy::skip}};

  // denoise
  auto* denoise = app.add_subcommand("denoise", "filter a single PGM image");
  std::string in_path, out_path, reference;
  std::string filter_name = "adaptive";
  double theta = 0.3;
  gnf::BorderPolicy border = gnf::BorderPolicy::replicate;
  denoise->add_option("--input", in_path, "input PGM (P5 or P2)")->required();
  denoise->add_option("--output", out_path, "output PGM (P5)")->required();
  denoise->add_option("--filter", filter_name, "filter kind")
      ->check(CLI::IsMember({"mean", "median", "adaptive"}))
      ->required();
  denoise->add_option("--theta", theta, "similarity threshold for --filter adaptive")
      ->check(CLI::Range(0.0, 1.0));
  denoise->add_option("--border", border, "border policy")
      ->transform(CLI::CheckedTransformer(border_names));
  denoise->add_option("--reference", reference,
                      "clean image; prints mse/psnr of the output against it");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark sweep over an image corpus");
  gnf::BenchConfig cfg;
  std::string corpus, out_csv;
  bench->add_option("--corpus", corpus, "directory of grayscale .pgm images")->required();
  bench->add_option("--out", out_csv, "CSV report path")->required();
  bench->add_option("--noise", cfg.noise_variances, "noise variances")
      ->delimiter(',');
  bench->add_option("--thetas", cfg.thetas, "adaptive thresholds")->delimiter(',');
  bench->add_option("--seed", cfg.seed, "global noise seed");
  bench->add_option("--border", cfg.border, "border policy")
      ->transform(CLI::CheckedTransformer(border_names));

  // simulate-hw
  auto* sim = app.add_subcommand(
      "simulate-hw", "behavioral simulation of the analog pipeline on one window");
  double center = 0.0;
  std::vector<double> neighbors;
  double sim_theta = 0.0;
  std::string trace_path;
  int stride = 1;
  sim->add_option("--center", center, "center pixel intensity")->required();
  sim->add_option("--neighbors", neighbors,
                  "8 neighbor intensities, row-major around the center")
      ->delimiter(',')
      ->expected(8)
      ->required();
  sim->add_option("--theta", sim_theta, "similarity threshold to calibrate for")
      ->required();
  sim->add_option("--trace", trace_path, "trace CSV output path")->required();
  sim->add_option("--trace-stride", stride, "keep every Nth trace sample")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (denoise->parsed())
      return run_denoise(in_path, out_path, filter_name, theta, border, reference);
    if (bench->parsed()) {
      cfg.corpus_dir = corpus;
      return run_bench(cfg, out_csv);
    }
    if (sim->parsed())
      return run_simulate_hw(center, neighbors, sim_theta, trace_path, stride);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
