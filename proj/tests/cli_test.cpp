#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lrl0/manifest.hpp"
#include "lrl0/noise.hpp"
#include "lrl0/pgm.hpp"
#include "test_support.hpp"

namespace lrl0 {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lrl0_cli_" + std::string(
        ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    clean_ = path("clean.pgm");
    write_image(testing::load_crop("camera.pgm", 64), clean_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args, std::string* stdout_text = nullptr) const {
    const std::string out = path("stdout.txt");
    const std::string cmd =
        std::string(LRL0_CLI_PATH) + " " + args + " > " + out + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    if (stdout_text) *stdout_text = slurp(out);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::string clean_;
};

TEST_F(Cli, AddNoiseIsDeterministic) {
  const std::string a = path("a.pgm"), b = path("b.pgm");
  ASSERT_EQ(run("add-noise --in " + clean_ + " --out " + a + " --kind impulse --p 0.2 --seed 1"), 0);
  ASSERT_EQ(run("add-noise --in " + clean_ + " --out " + b + " --kind impulse --p 0.2 --seed 1"), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const RunManifest m = RunManifest::load(a + ".manifest");
  EXPECT_EQ(m.get("noise.kind"), "impulse");
  EXPECT_EQ(m.get_real("noise.p"), 0.2);
  EXPECT_EQ(m.get_uint("seed"), 1u);
  EXPECT_EQ(m.get("command"), "add-noise");
}

TEST_F(Cli, AddNoiseUsageErrors) {
  const std::string out = path("n.pgm");
  EXPECT_EQ(run("add-noise --in " + clean_ + " --out " + out + " --kind impulse --p 1.5"), 1);
  EXPECT_EQ(run("add-noise --in " + clean_ + " --out " + out + " --kind gaussian --p 0.2"), 1);
  EXPECT_EQ(run("add-noise --in " + clean_ + " --out " + out + " --kind impulse --sigma 3 --p 0.1"), 1);
  EXPECT_EQ(run("add-noise --in " + clean_ + " --out " + out + " --kind salt --p 0.1"), 1);
  EXPECT_EQ(run("add-noise --in " + clean_), 1);
  EXPECT_EQ(run("add-noise --in " + path("missing.pgm") + " --out " + out + " --p 0.1"), 2);
}

TEST_F(Cli, GaussianNoiseMoments) {
  const std::string big = path("big.pgm"), noisy = path("noisy.pgm");
  write_image(testing::load_crop("moon.pgm", 256), big);
  ASSERT_EQ(run("add-noise --in " + big + " --out " + noisy + " --kind gaussian --sigma 5 --seed 7"), 0);
  // The written file is quantized; the manifest lets us regenerate the exact
  // real-valued field and check its moments.
  const RunManifest m = RunManifest::load(noisy + ".manifest");
  const GrayImage clean = read_image(big);
  const GrayImage field = add_noise(clean, NoiseSpec::gaussian(m.get_real("noise.sigma"), m.get_uint("noise.seed")));
  EXPECT_EQ(encode_pgm(field), slurp(noisy));
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double e = field[i] - clean[i];
    sum += e;
    sq += e * e;
  }
  const double n = static_cast<double>(clean.size());
  EXPECT_NEAR(sum / n, 0.0, 0.08);
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  EXPECT_GE(sd, 4.89);
  EXPECT_LE(sd, 5.11);
}

TEST_F(Cli, DenoisePlrZeroThresholdIsIdentity) {
  const std::string noisy = path("noisy.pgm"), out = path("out.pgm");
  ASSERT_EQ(run("add-noise --in " + clean_ + " --out " + noisy + " --p 0.3 --seed 4"), 0);
  ASSERT_EQ(run("denoise --in " + noisy + " --out " + out + " --method plr --t 0"), 0);
  EXPECT_EQ(slurp(out), slurp(noisy));
}

TEST_F(Cli, DenoiseZeroItersEqualsInitializer) {
  const std::string noisy = path("noisy.pgm"), a = path("admm.pgm"), p = path("pwmf.pgm");
  ASSERT_EQ(run("add-noise --in " + clean_ + " --out " + noisy + " --p 0.3 --seed 4"), 0);
  ASSERT_EQ(run("denoise --in " + noisy + " --out " + a + " --method admm --iters 0"), 0);
  ASSERT_EQ(run("denoise --in " + noisy + " --out " + p + " --method pwmf"), 0);
  EXPECT_EQ(slurp(a), slurp(p));
}

TEST_F(Cli, DenoiseAdmmWritesManifestAndPsnr) {
  const std::string noisy = path("noisy.pgm"), out = path("out.pgm");
  ASSERT_EQ(run("add-noise --in " + clean_ + " --out " + noisy + " --p 0.2 --seed 9"), 0);
  std::string text;
  ASSERT_EQ(run("denoise --in " + noisy + " --out " + out + " --method admm --iters 2 --alpha 1/72 --ref " +
                    clean_,
                &text),
            0);
  EXPECT_NE(text.find("psnr_db="), std::string::npos);
  const RunManifest m = RunManifest::load(out + ".manifest");
  EXPECT_EQ(m.get("method"), "admm");
  EXPECT_EQ(m.get_real("admm.alpha"), 1.0 / 72);
  EXPECT_EQ(m.get_real("admm.mu"), 95.703125);
  EXPECT_EQ(m.get_uint("noise.seed"), 9u);  // carried over from the noisy image
  EXPECT_TRUE(m.has("version"));

  // Replaying the manifest reproduces the bytes.
  EXPECT_EQ(run("replay --manifest " + out + ".manifest --check"), 0);
  EXPECT_EQ(run("replay --manifest " + noisy + ".manifest --check"), 0);
  const std::string again = path("again.pgm");
  ASSERT_EQ(run("replay --manifest " + out + ".manifest --out " + again), 0);
  EXPECT_EQ(slurp(again), slurp(out));
}

TEST_F(Cli, DenoiseErrors) {
  const std::string out = path("out.pgm");
  EXPECT_EQ(run("denoise --in " + clean_ + " --out " + out + " --method median"), 1);
  EXPECT_EQ(run("denoise --in " + clean_ + " --out " + out + " --M 5"), 1);
  EXPECT_EQ(run("denoise --in " + clean_ + " --out " + out + " --emit w"), 1);
  const std::string tiny = path("tiny.pgm");
  write_image(GrayImage(20, 20, 3.0), tiny);
  std::string text;
  EXPECT_EQ(run("denoise --in " + tiny + " --out " + out + " --method plr"), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("group size m=245"), std::string::npos);
}

TEST_F(Cli, BenchWritesCsv) {
  const fs::path corpus = dir_ / "corpus";
  fs::create_directories(corpus);
  write_image(testing::load_crop("coffee.pgm", 20), corpus / "coffee.pgm");
  const std::string csv = path("bench.csv");
  ASSERT_EQ(run("bench --corpus " + corpus.string() + " --p 0.2,0.4 --csv " + csv), 2)
      << "default geometry cannot fit a 20x20 image";
  write_image(testing::load_crop("camera.pgm", 80), corpus / "camera.pgm");
  fs::remove(corpus / "coffee.pgm");
  ASSERT_EQ(run("bench --corpus " + corpus.string() + " --p 0.2,0.4 --iters 1 --csv " + csv), 0);
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "image,p,method,psnr_db,seconds");
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(line.rfind("camera.pgm,0.", 0), 0u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  const fs::path empty = dir_ / "empty";
  fs::create_directories(empty);
  EXPECT_EQ(run("bench --corpus " + empty.string()), 2);
  EXPECT_EQ(run("bench --corpus " + corpus.string() + " --p 1.2"), 1);
  EXPECT_EQ(run("bench --corpus " + corpus.string() + " --desk --iters 3"), 1);
}

TEST_F(Cli, HelpAndMissingSubcommand) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 1);
}

}  // namespace
}  // namespace lrl0
