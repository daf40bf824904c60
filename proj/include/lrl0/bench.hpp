#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/manifest.hpp"
#include "lrl0/noise.hpp"
#include "lrl0/pgm.hpp"
#include "lrl0/pipeline.hpp"
#include "lrl0/prng.hpp"

namespace lrl0 {

struct BenchRow {
  std::string image;
  double p = 0.0;
  std::string method;
  double psnr_db = 0.0;
  double seconds = 0.0;
};

struct NamedImage {
  std::string name;
  GrayImage image;
};

struct BenchOptions {
  std::vector<double> levels{0.2, 0.3, 0.4, 0.5};
  /// 128x128 centre crops, stride 4, 20 iterations.
  bool desk = false;
  DenoiseOptions denoise;
};

inline constexpr int desk_crop = 128;
inline constexpr int desk_iterations = 20;
inline constexpr int desk_stride = 4;

/// Noise seed of one bench cell: the byte hash of the file name followed by
/// the shortest decimal form of p.
inline std::uint64_t cell_seed(const std::string& image_name, double p) {
  return hash_seed(image_name + format_real(p));
}

/// Every .pgm/.pnm file in `dir`, sorted by file name.
inline std::vector<NamedImage> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::io, "corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".pgm" || ext == ".pnm")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  std::vector<NamedImage> corpus;
  for (const auto& f : files) corpus.push_back({f.filename().string(), read_image(f)});
  if (corpus.empty()) throw Error(ErrorCode::invalid_argument, "empty corpus: " + dir.string());
  return corpus;
}

inline DenoiseOptions bench_denoise_options(const BenchOptions& opts) {
  DenoiseOptions d = opts.denoise;
  if (opts.desk) {
    d.admm.geometry.stride = desk_stride;
    d.admm.iterations = desk_iterations;
  }
  d.emit = Emit::v;
  return d;
}

inline GrayImage bench_clean_image(const GrayImage& img, bool desk) {
  if (!desk || (img.width() <= desk_crop && img.height() <= desk_crop)) return img;
  return img.center_crop(std::min(desk_crop, img.width()), std::min(desk_crop, img.height()));
}

/// Runs pwmf and admm on every (image, p) cell. Rows come back sorted by
/// (image, p, method). The admm cell reuses the cell's pwmf output as its
/// starting image.
inline std::vector<BenchRow> run_bench(const std::vector<NamedImage>& corpus,
                                       const BenchOptions& opts) {
  if (corpus.empty()) throw Error(ErrorCode::invalid_argument, "empty corpus");
  const DenoiseOptions d = bench_denoise_options(opts);
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (const auto& item : corpus) {
    const GrayImage clean = bench_clean_image(item.image, opts.desk);
    for (double p : opts.levels) {
      const GrayImage noisy = add_impulse_noise(clean, NoiseSpec::impulse(p, cell_seed(item.name, p)));

      PwmfParams pp = d.pwmf;
      pp.threads = d.threads;
      const auto t0 = clock::now();
      const GrayImage init = pwmf(noisy, pp);
      const auto t1 = clock::now();
      AdmmConfig cfg = d.admm;
      cfg.threads = d.threads;
      const GrayImage out = run_admm(noisy, cfg, init);
      const auto t2 = clock::now();

      const double init_s = std::chrono::duration<double>(t1 - t0).count();
      rows.push_back({item.name, p, "pwmf", psnr(init, clean), init_s});
      rows.push_back({item.name, p, "admm", psnr(out, clean),
                      init_s + std::chrono::duration<double>(t2 - t1).count()});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.image, a.p, a.method) < std::tie(b.image, b.p, b.method);
  });
  return rows;
}

inline std::string format_psnr(double db) {
  if (is_infinite_psnr(db)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", db);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "image,p,method,psnr_db,seconds\n";
  char secs[32];
  for (const auto& r : rows) {
    std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
    out << r.image << ',' << format_real(r.p) << ',' << r.method << ',' << format_psnr(r.psnr_db)
        << ',' << secs << '\n';
  }
}

}  // namespace lrl0
