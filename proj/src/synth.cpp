#include "scanpath/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "scanpath/image.hpp"
#include "scanpath/io_util.hpp"
#include "scanpath/rng.hpp"
#include "scanpath/version.hpp"

namespace scanpath {
namespace synth {

namespace {

constexpr int kImageSide = 32;
constexpr int kFixationsPerPath = 12;
constexpr double kJitterRadius = 5.0;
constexpr double kSampleDtMs = 4.0;

// Images are built directly in the low-frequency cosine (DCT) domain: one
// coefficient per hashed spectral bin, magnitudes in [10, 40], signs exactly
// balanced (32 positive, 32 negative) and shared across channels.  Balance
// pins the median coefficient near zero, so every hash bit keeps a margin of
// several units against resampling attenuation and 8-bit re-quantization.
ImageFrame make_image(Rng& rng) {
  constexpr int n = kImageSide;
  // orthonormal cosine basis rows for the 9 lowest frequencies
  double basis[9][n];
  for (int u = 0; u < 9; ++u) {
    const double a = (u == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int x = 0; x < n; ++x)
      basis[u][x] = a * std::cos(M_PI * (2.0 * x + 1.0) * u / (2.0 * n));
  }

  // the 64 hashed bins: u,v in [0,8)^2 minus DC, plus (8,0)
  std::vector<std::pair<int, int>> bins;
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v)
      if (u != 0 || v != 0) bins.emplace_back(u, v);
  bins.emplace_back(8, 0);

  std::vector<double> signs(bins.size());
  for (std::size_t k = 0; k < signs.size(); ++k) signs[k] = k < signs.size() / 2 ? 1.0 : -1.0;
  rng.shuffle(signs);

  ImageFrame img;
  img.width = n;
  img.height = n;
  img.channels = 3;
  img.pixels.resize(static_cast<std::size_t>(n) * n * 3);
  for (int ch = 0; ch < 3; ++ch) {
    double coef[9][8] = {};
    for (std::size_t k = 0; k < bins.size(); ++k)
      coef[bins[k].first][bins[k].second] = signs[k] * rng.uniform(10.0, 40.0);
    // separable inverse transform: collapse v first, then u
    double partial[9][n];
    for (int u = 0; u < 9; ++u)
      for (int y = 0; y < n; ++y) {
        double s = 0.0;
        for (int v = 0; v < 8; ++v) s += coef[u][v] * basis[v][y];
        partial[u][y] = s;
      }
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double v = 127.5;
        for (int u = 0; u < 9; ++u) v += partial[u][r] * basis[u][c];
        img.pixels[(static_cast<std::size_t>(r) * n + c) * 3 + ch] =
            static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
  }
  return img;
}

// 4x3 lattice over the 224 frame, jittered +-8 px per axis: spacing 56/72
// minus twice the jitter keeps every pair at least 40 px apart.
std::vector<Fixation> plant_fixations(Rng& rng) {
  std::vector<Fixation> pts;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) {
      const double x = 28.0 + 56.0 * i + rng.uniform(-8.0, 8.0);
      const double y = 40.0 + 72.0 * j + rng.uniform(-8.0, 8.0);
      pts.push_back(Fixation{x, y, std::nullopt});
    }
  rng.shuffle(pts);
  pts.resize(kFixationsPerPath);
  return pts;
}

std::pair<double, double> disc_jitter(Rng& rng, double radius) {
  while (true) {
    const double dx = rng.uniform(-radius, radius);
    const double dy = rng.uniform(-radius, radius);
    if (dx * dx + dy * dy <= radius * radius) return {dx, dy};
  }
}

}  // namespace

std::vector<std::string> synth_corpus(std::uint64_t seed, int n_images,
                                      const std::string& out_dir) {
  if (n_images < 1) throw std::invalid_argument("synth_corpus: need at least 1 image");
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "images");
  fs::create_directories(fs::path(out_dir) / "traces");

  const ReferenceFrame frame{224, 224};
  std::vector<std::string> ids;
  std::vector<Scanpath> truth, model;
  std::string manifest = "trace_file,image_file\n";
  std::string labels = "image_id,label\n";

  for (int i = 0; i < n_images; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "img%03d", i);
    const std::string id(buf);
    ids.push_back(id);
    Rng rng(hash_seed(seed, "corpus", static_cast<std::uint64_t>(i)));

    const ImageFrame img = make_image(rng);
    write_pnm((fs::path(out_dir) / "images" / (id + ".ppm")).string(), img);

    const std::vector<Fixation> planted = plant_fixations(rng);

    std::string trace = "x,y,t\n";
    double t = 0.0;
    Scanpath sp;
    sp.image_id = id;
    sp.source = Source::human;
    sp.frame = frame;
    for (const auto& f : planted) {
      const int samples = 18 + static_cast<int>(rng.uniform_below(5));
      for (int s = 0; s < samples; ++s) {
        const auto [dx, dy] = disc_jitter(rng, kJitterRadius);
        trace += fmt_double(f.x + dx) + "," + fmt_double(f.y + dy) + "," + fmt_double(t) + "\n";
        t += kSampleDtMs;
      }
      Fixation planted_f = f;
      planted_f.duration = kSampleDtMs * (samples - 1);
      sp.fixations.push_back(planted_f);
    }
    atomic_write_file((fs::path(out_dir) / "traces" / (id + ".csv")).string(), trace);
    truth.push_back(sp);

    Scanpath noisy = sp;
    noisy.source = Source::model;
    for (auto& f : noisy.fixations) {
      f.x += rng.normal(0.0, 6.0);
      f.y += rng.normal(0.0, 6.0);
      f.duration = std::nullopt;
    }
    model.push_back(clamp_to_frame(noisy, frame));

    manifest += "traces/" + id + ".csv,images/" + id + ".ppm\n";
    labels += id + "," + std::to_string(rng.uniform_below(10)) + "\n";
  }

  const std::string meta = std::string("{\"version\":\"") + version() +
                           "\",\"seed\":" + std::to_string(seed) +
                           ",\"n_images\":" + std::to_string(n_images) + "}";
  atomic_write_file((fs::path(out_dir) / "manifest.csv").string(), manifest);
  atomic_write_file((fs::path(out_dir) / "labels.csv").string(), labels);
  write_scanpaths_jsonl((fs::path(out_dir) / "scanpaths.jsonl").string(), truth, meta);
  write_scanpaths_jsonl((fs::path(out_dir) / "model.jsonl").string(), model, meta);
  return ids;
}

}  // namespace synth
}  // namespace scanpath
