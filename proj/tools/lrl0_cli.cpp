// Command-line front end: noise synthesis, denoising, manifest replay and the
// PSNR benchmark.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrl0/lrl0.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts plain decimals or a fraction such as "1/72".
double parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return lrl0::parse_real(text);
    return lrl0::parse_real(text.substr(0, slash)) / lrl0::parse_real(text.substr(slash + 1));
  } catch (const lrl0::Error&) {
    throw UsageError("not a number: '" + text + "'");
  }
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_with_manifest(const lrl0::GrayImage& img, const fs::path& out, lrl0::RunManifest m) {
  lrl0::write_image(img, out);
  m.set("output", out.string());
  m.set("version", lrl0::version);
  m.save(lrl0::manifest_path_for(out));
}

// --- add-noise -------------------------------------------------------------

struct AddNoiseArgs {
  std::string in, out, kind = "impulse";
  double p = -1.0, sigma = -1.0;
  std::uint64_t seed = 0;
};

lrl0::NoiseSpec noise_spec(const AddNoiseArgs& a) {
  lrl0::NoiseSpec s;
  try {
    s.kind = lrl0::parse_noise_kind(a.kind);
  } catch (const lrl0::Error& e) {
    throw UsageError(e.what());
  }
  s.seed = a.seed;
  if (s.kind == lrl0::NoiseKind::impulse_uniform) {
    if (a.sigma >= 0.0) throw UsageError("--sigma is not valid with --kind impulse");
    if (a.p < 0.0) throw UsageError("--kind impulse requires --p");
    if (a.p > 1.0) throw UsageError("--p must lie in [0,1]");
    s.p = a.p;
  } else {
    if (a.p >= 0.0) throw UsageError("--p is not valid with --kind gaussian");
    if (a.sigma < 0.0) throw UsageError("--kind gaussian requires --sigma >= 0");
    s.sigma = a.sigma;
  }
  return s;
}

int run_add_noise(const AddNoiseArgs& a) {
  const lrl0::NoiseSpec spec = noise_spec(a);
  const lrl0::GrayImage clean = lrl0::read_image(a.in);
  lrl0::RunManifest m;
  m.set("command", "add-noise");
  m.set("input", a.in);
  lrl0::record(m, spec);
  write_with_manifest(lrl0::add_noise(clean, spec), a.out, m);
  return exit_ok;
}

// --- denoise ---------------------------------------------------------------

struct DenoiseArgs {
  std::string in, out, method = "admm", emit = "v", ref, alpha = "1/72";
  int d = 7, M = 43, m = 245, iters = 50, stride = 4;
  double t = 7.5;
  unsigned threads = 0;
};

lrl0::DenoiseOptions denoise_options(const DenoiseArgs& a) {
  lrl0::DenoiseOptions o;
  try {
    o.method = lrl0::parse_method(a.method);
  } catch (const lrl0::Error& e) {
    throw UsageError(e.what());
  }
  if (a.emit != "u" && a.emit != "v") throw UsageError("--emit must be u or v");
  o.emit = a.emit == "u" ? lrl0::Emit::u : lrl0::Emit::v;
  o.admm.alpha = parse_fraction(a.alpha);
  o.admm.t = a.t;
  o.admm.iterations = a.iters;
  o.admm.geometry = {a.d, a.M, a.m, a.stride};
  o.threads = a.threads;
  if (!(o.admm.alpha > 0.0)) throw UsageError("--alpha must be positive");
  if (o.admm.t < 0.0) throw UsageError("--t must be >= 0");
  if (o.admm.iterations < 0) throw UsageError("--iters must be >= 0");
  try {
    o.admm.geometry.validate();
  } catch (const lrl0::Error& e) {
    throw UsageError(e.what());
  }
  return o;
}

int run_denoise(const DenoiseArgs& a) {
  const lrl0::DenoiseOptions opts = denoise_options(a);
  const lrl0::GrayImage noisy = lrl0::read_image(a.in);
  const lrl0::GrayImage result = lrl0::denoise(noisy, opts);

  lrl0::RunManifest m;
  const fs::path upstream = lrl0::manifest_path_for(a.in);
  if (fs::exists(upstream)) {
    const lrl0::RunManifest noise_manifest = lrl0::RunManifest::load(upstream);
    for (const auto& [k, v] : noise_manifest.entries())
      if (k.starts_with("noise.") || k == "seed") m.set(k, v);
  }
  m.set("command", "denoise");
  m.set("input", a.in);
  lrl0::record(m, opts);
  write_with_manifest(result, a.out, m);

  if (!a.ref.empty()) {
    const lrl0::GrayImage clean = lrl0::read_image(a.ref);
    const double db = lrl0::psnr(result, clean);
    const double rounded = lrl0::psnr(lrl0::quantized(result), clean);
    std::cout << "psnr_db=" << lrl0::format_psnr(db)
              << " psnr_db_rounded=" << lrl0::format_psnr(rounded) << "\n";
  }
  return exit_ok;
}

// --- replay ----------------------------------------------------------------

int run_replay(const std::string& manifest_file, std::string out, bool check) {
  const auto m = lrl0::RunManifest::load(manifest_file);
  const std::string command = m.get("command");
  if (out.empty()) out = m.get("output");
  const lrl0::GrayImage input = lrl0::read_image(m.get("input"));
  lrl0::GrayImage result;
  if (command == "add-noise")
    result = lrl0::add_noise(input, lrl0::noise_spec_from(m));
  else if (command == "denoise")
    result = lrl0::denoise(input, lrl0::denoise_options_from(m));
  else
    throw UsageError("manifest has unknown command '" + command + "'");

  if (check) {
    const std::string expected = read_bytes(m.get("output"));
    if (expected != lrl0::encode_pgm(result)) {
      std::cerr << "replay mismatch against " << m.get("output") << "\n";
      return exit_runtime;
    }
    std::cout << "replay matches " << m.get("output") << "\n";
    return exit_ok;
  }
  lrl0::write_image(result, out);
  return exit_ok;
}

// --- bench -----------------------------------------------------------------

int run_bench(const std::string& corpus_dir, const std::vector<double>& levels, bool desk,
              int iters, const std::string& csv, unsigned threads) {
  for (double p : levels)
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p values must lie in [0,1]");
  if (desk && iters >= 0) throw UsageError("--iters cannot be combined with --desk");
  lrl0::BenchOptions opts;
  opts.levels = levels;
  opts.desk = desk;
  opts.denoise.threads = threads;
  if (iters >= 0) opts.denoise.admm.iterations = iters;
  const auto rows = lrl0::run_bench(lrl0::load_corpus(corpus_dir), opts);
  if (csv.empty() || csv == "-") {
    lrl0::write_csv(std::cout, rows);
  } else {
    std::ofstream out(csv, std::ios::trunc);
    if (!out) throw lrl0::Error(lrl0::ErrorCode::io, "cannot write " + csv);
    lrl0::write_csv(out, rows);
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-valued impulse noise removal with a low-rank patch prior and l0 fidelity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lrl0::version);

  AddNoiseArgs noise_args;
  auto* add_noise = app.add_subcommand("add-noise", "Synthesize impulse or Gaussian noise");
  add_noise->add_option("--in", noise_args.in, "Clean input PGM")->required();
  add_noise->add_option("--out", noise_args.out, "Noisy output PGM")->required();
  add_noise->add_option("--kind", noise_args.kind, "impulse | gaussian");
  add_noise->add_option("--p", noise_args.p, "Impulse proportion in [0,1]");
  add_noise->add_option("--sigma", noise_args.sigma, "Gaussian standard deviation");
  add_noise->add_option("--seed", noise_args.seed, "PRNG seed");

  DenoiseArgs dn;
  auto* denoise = app.add_subcommand("denoise", "Remove noise with pwmf, plr or admm");
  denoise->add_option("--in", dn.in, "Noisy input PGM")->required();
  denoise->add_option("--out", dn.out, "Output PGM")->required();
  denoise->add_option("--method", dn.method, "pwmf | plr | admm")->capture_default_str();
  denoise->add_option("--d", dn.d, "Patch side")->capture_default_str();
  denoise->add_option("--M", dn.M, "Search window side")->capture_default_str();
  denoise->add_option("--m", dn.m, "Patches per group")->capture_default_str();
  denoise->add_option("--t", dn.t, "PLR threshold")->capture_default_str();
  denoise->add_option("--alpha", dn.alpha, "ADMM alpha, decimal or fraction")->capture_default_str();
  denoise->add_option("--iters", dn.iters, "ADMM iterations")->capture_default_str();
  denoise->add_option("--stride", dn.stride, "Reference grid step")->capture_default_str();
  denoise->add_option("--emit", dn.emit, "ADMM iterate to output: u | v")->capture_default_str();
  denoise->add_option("--ref", dn.ref, "Clean reference; prints PSNR");
  denoise->add_option("--threads", dn.threads, "Worker threads (0 = all cores)");

  std::string manifest_file, replay_out;
  bool replay_check = false;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("--manifest", manifest_file, "Manifest file")->required();
  replay->add_option("--out", replay_out, "Output path (default: recorded output)");
  replay->add_flag("--check", replay_check, "Compare against the recorded output bytes");

  std::string corpus, csv;
  std::vector<double> levels{0.2, 0.3, 0.4, 0.5};
  bool desk = false;
  unsigned bench_threads = 0;
  int bench_iters = -1;
  auto* bench = app.add_subcommand("bench", "PSNR table of pwmf and admm over a corpus");
  bench->add_option("--corpus", corpus, "Directory of clean PGM images")->required();
  bench->add_option("--p", levels, "Impulse levels")->delimiter(',')->capture_default_str();
  bench->add_flag("--desk", desk, "128x128 centre crops, stride 4, 20 iterations");
  bench->add_option("--iters", bench_iters, "Override the iteration count (not with --desk)");
  bench->add_option("--csv", csv, "CSV output path (default stdout)");
  bench->add_option("--threads", bench_threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*add_noise) return run_add_noise(noise_args);
    if (*denoise) return run_denoise(dn);
    if (*replay) return run_replay(manifest_file, replay_out, replay_check);
    if (*bench) return run_bench(corpus, levels, desk, bench_iters, csv, bench_threads);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const lrl0::Error& e) {
    std::cerr << "error (" << lrl0::to_string(e.code()) << "): " << e.what() << "\n";
    return exit_runtime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
  return exit_usage;
}
