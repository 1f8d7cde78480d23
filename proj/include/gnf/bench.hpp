#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gnf/csv.hpp"
#include "gnf/filters.hpp"
#include "gnf/metrics.hpp"
#include "gnf/noise.hpp"
#include "gnf/pgm.hpp"

namespace gnf {

class BenchError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BenchConfig {
  std::filesystem::path corpus_dir;
  std::vector<double> noise_variances{0.02, 0.04};
  std::vector<double> thetas{0.2, 0.3, 0.4};
  std::vector<FilterKind> filters;  // empty -> default_bench_filters(thetas)
  std::uint64_t seed = 1;
  BorderPolicy border = BorderPolicy::replicate;
};

// Mean, median, then one adaptive entry per threshold.
inline std::vector<FilterKind> default_bench_filters(const std::vector<double>& thetas) {
  std::vector<FilterKind> filters{FilterKind::mean(), FilterKind::median()};
  for (double t : thetas) filters.push_back(FilterKind::adaptive(Threshold{t}));
  return filters;
}

struct BenchRow {
  std::string image_id;
  double noise_variance = 0.0;
  FilterKind filter;
  double mse = 0.0;
  double psnr_db = 0.0;
};

struct BenchAggregate {
  double noise_variance = 0.0;
  FilterKind filter;
  double mse = 0.0;      // arithmetic mean of the member rows' mse
  double psnr_db = 0.0;  // arithmetic mean of the member rows' psnr
  int images = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchAggregate> aggregates;
  int images_used = 0;
  int images_skipped = 0;
  std::vector<std::string> warnings;
};

inline bool same_filter(const FilterKind& a, const FilterKind& b) noexcept {
  if (a.type != b.type) return false;
  return a.type != FilterKind::Type::adaptive_mean ||
         a.theta.value() == b.theta.value();
}

// Per-image noise seed: FNV-1a over the file name mixed with the global seed.
// Depending only on the name keeps a corpus reproducible wherever it lives.
inline std::uint64_t image_noise_seed(std::uint64_t global_seed, std::string_view filename) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : filename)
    h = (h ^ static_cast<std::uint8_t>(c)) * 1099511628211ULL;
  std::uint64_t state = h ^ (global_seed * 0x9E3779B97F4A7C15ULL);
  return detail::splitmix64(state);
}

// Runs the full sweep: for each corpus image and noise variance, perturbs the
// image once and scores every configured filter against the clean original.
// Images that fail to load are skipped with a warning. Throws BenchError when
// no image can be processed.
inline BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.noise_variances.empty()) throw BenchError("no noise variances configured");
  const std::vector<FilterKind> filters =
      cfg.filters.empty() ? default_bench_filters(cfg.thetas) : cfg.filters;
  if (filters.empty()) throw BenchError("no filters configured");

  std::vector<std::filesystem::path> files;
  {
    std::error_code ec;
    std::filesystem::directory_iterator it(cfg.corpus_dir, ec);
    if (ec)
      throw BenchError("cannot read corpus directory " + cfg.corpus_dir.string() +
                       ": " + ec.message());
    for (const auto& entry : it)
      if (entry.is_regular_file() && entry.path().extension() == ".pgm")
        files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  if (files.empty())
    throw BenchError("corpus directory " + cfg.corpus_dir.string() +
                     " contains no .pgm images");

  BenchReport report;
  for (const auto& path : files) {
    const std::string id = path.filename().string();
    std::optional<Image> img;
    try {
      img = load_pgm_file(path);
    } catch (const std::exception& e) {
      report.warnings.push_back("skipping " + id + ": " + e.what());
      ++report.images_skipped;
      continue;
    }
    ++report.images_used;
    const std::uint64_t seed = image_noise_seed(cfg.seed, id);
    for (const double variance : cfg.noise_variances) {
      const Image noisy = add_gaussian_noise(*img, NoiseSpec{variance, 0.0, seed});
      for (const FilterKind& filter : filters) {
        const Image filtered = filter_image(noisy, filter, cfg.border);
        const QualityScore q = quality(*img, filtered);
        report.rows.push_back({id, variance, filter, q.mse, q.psnr_db});
      }
    }
  }
  if (report.images_used == 0)
    throw BenchError("no readable image in corpus " + cfg.corpus_dir.string());

  for (const double variance : cfg.noise_variances) {
    for (const FilterKind& filter : filters) {
      BenchAggregate agg;
      agg.noise_variance = variance;
      agg.filter = filter;
      for (const BenchRow& row : report.rows) {
        if (row.noise_variance != variance || !same_filter(row.filter, filter)) continue;
        agg.mse += row.mse;
        agg.psnr_db += row.psnr_db;
        ++agg.images;
      }
      agg.mse /= agg.images;
      agg.psnr_db /= agg.images;
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

inline const BenchAggregate* find_aggregate(const BenchReport& report, double variance,
                                            const FilterKind& filter) {
  for (const BenchAggregate& a : report.aggregates)
    if (a.noise_variance == variance && same_filter(a.filter, filter)) return &a;
  return nullptr;
}

inline constexpr std::string_view bench_csv_header =
    "record,image_id,noise_variance,filter,theta,mse,psnr_db";

// Per-image rows first, aggregates second, then a footer comment with the
// image counts. The theta column is empty for non-adaptive filters.
inline void write_report_csv(std::ostream& os, const BenchReport& report) {
  auto theta_field = [](const FilterKind& f) {
    return f.type == FilterKind::Type::adaptive_mean ? format_double(f.theta.value())
                                                     : std::string{};
  };
  os << bench_csv_header << "\n";
  for (const BenchRow& r : report.rows)
    os << "row," << r.image_id << ',' << format_double(r.noise_variance) << ','
       << r.filter.label() << ',' << theta_field(r.filter) << ','
       << format_double(r.mse) << ',' << format_double(r.psnr_db) << "\n";
  for (const BenchAggregate& a : report.aggregates)
    os << "aggregate,," << format_double(a.noise_variance) << ',' << a.filter.label()
       << ',' << theta_field(a.filter) << ',' << format_double(a.mse) << ','
       << format_double(a.psnr_db) << "\n";
  os << "# images=" << report.images_used << " skipped=" << report.images_skipped
     << "\n";
}

// Console summary, one line per (noise variance, threshold): the adaptive
// aggregates next to the plain-mean aggregates at the same variance.
inline void print_summary_table(std::ostream& os, const BenchReport& report) {
  os << "noise_rate  threshold  psnr_adaptive_db  psnr_mean_db  mse_adaptive  mse_mean\n";
  char line[160];
  for (const BenchAggregate& a : report.aggregates) {
    if (a.filter.type != FilterKind::Type::adaptive_mean) continue;
    const BenchAggregate* mean =
        find_aggregate(report, a.noise_variance, FilterKind::mean());
    if (!mean) continue;
    std::snprintf(line, sizeof(line),
                  "%-10s  %-9s  %-16.4f  %-12.4f  %-12.6f  %-8.6f\n",
                  format_double(a.noise_variance).c_str(),
                  format_double(a.filter.theta.value()).c_str(), a.psnr_db,
                  mean->psnr_db, a.mse, mean->mse);
    os << line;
  }
  os << "images=" << report.images_used << " skipped=" << report.images_skipped << "\n";
}

}  // namespace gnf
