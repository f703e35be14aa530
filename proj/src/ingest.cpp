#include "scanpath/ingest.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "scanpath/io_util.hpp"

namespace scanpath {

std::string PerceptualHash::hex() const {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i)
    out[i] = digits[(bits >> (60 - 4 * i)) & 0xf];
  return out;
}

PerceptualHash PerceptualHash::from_hex(const std::string& hex) {
  if (hex.size() != 16) throw std::invalid_argument("hash hex must be 16 digits: " + hex);
  std::uint64_t v = 0;
  const auto res = std::from_chars(hex.data(), hex.data() + 16, v, 16);
  if (res.ec != std::errc() || res.ptr != hex.data() + 16)
    throw std::invalid_argument("malformed hash hex: " + hex);
  return PerceptualHash{v};
}

namespace {

constexpr int kHashSize = 32;  // DCT input side length

// Orthonormal 2D DCT-II of a 32x32 block, evaluated only for the low
// frequencies the hash needs (u in [0,9), v in [0,8)).
void dct_low_freq(const std::array<double, kHashSize * kHashSize>& p,
                  double coef[9][8]) {
  constexpr int n = kHashSize;
  static const auto cos_table = [] {
    std::array<std::array<double, n>, 9> t{};
    for (int u = 0; u < 9; ++u)
      for (int x = 0; x < n; ++x)
        t[u][x] = std::cos(M_PI * (2.0 * x + 1.0) * u / (2.0 * n));
    return t;
  }();
  const double a0 = std::sqrt(1.0 / n);
  const double a = std::sqrt(2.0 / n);
  // separable pass: rows first (over x for each needed u), then columns
  double row_pass[9][kHashSize];  // row_pass[u][y]
  for (int u = 0; u < 9; ++u) {
    for (int y = 0; y < n; ++y) {
      double s = 0.0;
      for (int x = 0; x < n; ++x) s += p[static_cast<std::size_t>(y) * n + x] * cos_table[u][x];
      row_pass[u][y] = s;
    }
  }
  for (int u = 0; u < 9; ++u) {
    const double au = u == 0 ? a0 : a;
    for (int v = 0; v < 8; ++v) {
      const double av = v == 0 ? a0 : a;
      double s = 0.0;
      for (int y = 0; y < n; ++y) s += row_pass[u][y] * cos_table[v][y];
      coef[u][v] = au * av * s;
    }
  }
}

}  // namespace

PerceptualHash phash(const ImageFrame& img) {
  if (img.empty()) throw std::invalid_argument("phash: empty image");
  const ImageFrame small = resize_bilinear(to_gray(img), kHashSize, kHashSize);
  std::array<double, kHashSize * kHashSize> p{};
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = small.pixels[i];
  double coef[9][8];
  dct_low_freq(p, coef);

  // 64 values: (u,v) over [0,8)^2 minus DC, plus (8,0); row-major in u.
  // Coefficients below 1e-6 are floating-point residue of the transform
  // (real 8-bit structure sits at 1e-2 and above); snapping them to zero
  // keeps flat regions deterministic and the tie rule exact.
  std::array<double, 64> vals{};
  int k = 0;
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      if (u == 0 && v == 0) continue;
      vals[k++] = coef[u][v];
    }
  vals[k++] = coef[8][0];
  for (double& v : vals)
    if (std::abs(v) < 1e-6) v = 0.0;

  std::array<double, 64> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[31] + sorted[32]);

  PerceptualHash h;
  for (int i = 0; i < 64; ++i)
    if (vals[i] > median) h.bits |= (1ULL << i);
  return h;
}

int hamming(PerceptualHash a, PerceptualHash b) {
  return std::popcount(a.bits ^ b.bits);
}

MatchResult match_hash(PerceptualHash query, const HashIndex& index) {
  if (index.entries.empty()) throw std::invalid_argument("match_image: empty index");
  const HashIndexEntry* best = nullptr;
  int best_dist = 65;
  for (const auto& e : index.entries) {
    const int d = hamming(query, e.hash);
    if (d < best_dist || (d == best_dist && e.image_id < best->image_id)) {
      best = &e;
      best_dist = d;
    }
  }
  return MatchResult{best->image_id, best_dist, best_dist == 0};
}

MatchResult match_image(const ImageFrame& query, const HashIndex& index) {
  return match_hash(phash(query), index);
}

std::vector<Fixation> idt_fixations(const GazeTrace& trace, double radius) {
  if (trace.samples.empty()) throw std::invalid_argument("idt_fixations: empty trace");
  if (!(radius > 0.0)) throw std::invalid_argument("idt_fixations: radius must be > 0");
  std::vector<Fixation> out;
  std::size_t i = 0;
  while (i < trace.samples.size()) {
    double cx = trace.samples[i].x;
    double cy = trace.samples[i].y;
    const std::optional<double> t0 = trace.samples[i].t;
    std::optional<double> t1 = t0;
    std::size_t n = 1;
    ++i;
    while (i < trace.samples.size()) {
      const auto& s = trace.samples[i];
      if (std::hypot(s.x - cx, s.y - cy) > radius) break;
      cx = (cx * static_cast<double>(n) + s.x) / static_cast<double>(n + 1);
      cy = (cy * static_cast<double>(n) + s.y) / static_cast<double>(n + 1);
      t1 = s.t;
      ++n;
      ++i;
    }
    Fixation f{cx, cy, std::nullopt};
    if (t0 && t1) f.duration = *t1 - *t0;
    out.push_back(f);
  }
  return out;
}

FitLengthResult fit_length(const std::vector<Fixation>& fixations, int n) {
  if (fixations.empty()) throw std::invalid_argument("fit_length: empty fixation list");
  if (n <= 0) throw std::invalid_argument("fit_length: n must be > 0");
  FitLengthResult res;
  if (fixations.size() >= static_cast<std::size_t>(n)) {
    res.fixations.assign(fixations.begin(), fixations.begin() + n);
    return res;
  }
  res.fixations = fixations;
  res.fixations.resize(static_cast<std::size_t>(n), fixations.back());
  res.padded = true;
  return res;
}

GazeTrace read_gaze_trace(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw std::invalid_argument("gaze trace: empty file " + path);
  const auto header = split(trim(lines[0]), ',');
  if (header.size() < 2 || trim(header[0]) != "x" || trim(header[1]) != "y" ||
      (header.size() == 3 && trim(header[2]) != "t") || header.size() > 3)
    throw std::invalid_argument("gaze trace: header must be x,y[,t] in " + path);
  const bool has_t = header.size() == 3;
  GazeTrace trace;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string row = trim(lines[i]);
    if (row.empty()) continue;
    const auto cols = split(row, ',');
    if (cols.size() != header.size())
      throw std::invalid_argument("gaze trace: bad row " + std::to_string(i + 1) + " in " + path);
    GazeSample s;
    s.x = std::stod(cols[0]);
    s.y = std::stod(cols[1]);
    if (!std::isfinite(s.x) || !std::isfinite(s.y))
      throw std::invalid_argument("gaze trace: non-finite sample in " + path);
    if (has_t) s.t = std::stod(cols[2]);
    trace.samples.push_back(s);
  }
  if (trace.samples.empty()) throw std::invalid_argument("gaze trace: no samples in " + path);
  return trace;
}

void write_hash_index(const std::string& path, const HashIndex& index,
                      const std::vector<std::string>& meta) {
  std::string content;
  for (const auto& m : meta) content += "# " + m + "\n";
  content += "hash_hex,image_id,label\n";
  for (const auto& e : index.entries)
    content += e.hash.hex() + "," + e.image_id + "," + e.label + "\n";
  atomic_write_file(path, content);
}

HashIndex read_hash_index(const std::string& path) {
  HashIndex index;
  bool header_seen = false;
  for (const auto& raw : read_lines(path)) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "hash_hex,image_id,label")
        throw std::invalid_argument("hash index: bad header in " + path);
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw std::invalid_argument("hash index: bad row in " + path);
    index.entries.push_back({PerceptualHash::from_hex(cols[0]), cols[1], cols[2]});
  }
  if (!header_seen) throw std::invalid_argument("hash index: missing header in " + path);
  return index;
}

}  // namespace scanpath
