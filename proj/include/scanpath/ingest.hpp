#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scanpath/core.hpp"
#include "scanpath/image.hpp"

namespace scanpath {

struct GazeSample {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> t;  // milliseconds
};

struct GazeTrace {
  std::string image_ref;
  std::vector<GazeSample> samples;
};

struct PerceptualHash {
  std::uint64_t bits = 0;

  bool operator==(const PerceptualHash&) const = default;
  std::string hex() const;
  static PerceptualHash from_hex(const std::string& hex);
};

struct HashIndexEntry {
  PerceptualHash hash;
  std::string image_id;
  std::string label;
};

struct HashIndex {
  std::vector<HashIndexEntry> entries;
};

struct MatchResult {
  std::string image_id;
  int distance = 0;
  bool exact = false;
};

// 64-bit DCT hash: luma grayscale, bilinear resize to 32x32, orthonormal 2D
// DCT-II, coefficients (u,v) in [0,8)^2 minus the DC term plus (8,0), each
// thresholded against the median of those 64 values (ties map to 0).
// Coefficients with magnitude below 1e-6 snap to zero first: genuine 8-bit
// structure sits at 1e-2 and above, so the snap only removes transform
// round-off and makes a constant image hash to all-zero bits exactly.
PerceptualHash phash(const ImageFrame& img);

int hamming(PerceptualHash a, PerceptualHash b);

// Nearest entry by Hamming distance; ties broken by lexicographically
// smallest image_id.
MatchResult match_image(const ImageFrame& query, const HashIndex& index);
MatchResult match_hash(PerceptualHash query, const HashIndex& index);

// Greedy sequential dispersion clustering: a cluster grows while the next
// sample stays within `radius` of the running centroid; the final centroid
// is emitted as one fixation. Radius-only, no minimum duration. Fixation
// duration is filled from first/last sample timestamps when present.
std::vector<Fixation> idt_fixations(const GazeTrace& trace, double radius);

struct FitLengthResult {
  std::vector<Fixation> fixations;
  bool padded = false;  // input was shorter than n; last fixation repeated
};

// First n fixations, or repeat-last padding up to n when the input is short.
FitLengthResult fit_length(const std::vector<Fixation>& fixations, int n);

// CSV with header "x,y,t" or "x,y", one sample per row.
GazeTrace read_gaze_trace(const std::string& path);

// CSV with header "hash_hex,image_id,label"; label may be empty.
void write_hash_index(const std::string& path, const HashIndex& index,
                      const std::vector<std::string>& meta = {});
HashIndex read_hash_index(const std::string& path);

}  // namespace scanpath
