#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scanpath {

// Coordinate convention throughout: origin at the top-left corner, x grows
// rightward, y grows downward, continuous pixel coordinates.
struct ReferenceFrame {
  int width = 224;
  int height = 224;

  bool valid() const { return width > 0 && height > 0; }
  bool operator==(const ReferenceFrame&) const = default;
};

struct Fixation {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> duration;  // milliseconds; carried, never used by metrics

  bool operator==(const Fixation&) const = default;
};

enum class Source { human, model, reference };

const char* source_name(Source s);
Source source_from_name(const std::string& name);

struct Scanpath {
  std::string image_id;
  Source source = Source::model;
  ReferenceFrame frame;
  std::vector<Fixation> fixations;
  bool clamped = false;  // set by clamp_to_frame when any coordinate moved

  std::size_t size() const { return fixations.size(); }
  bool empty() const { return fixations.empty(); }
  bool operator==(const Scanpath&) const = default;
};

// Rescales fixations from src to dst frame. Exactly invertible by swapping
// the frames (up to double rounding).
Scanpath normalize_scanpath(const Scanpath& sp, const ReferenceFrame& src,
                            const ReferenceFrame& dst);

// Clamps every coordinate into [0,width]x[0,height]; idempotent.
Scanpath clamp_to_frame(const Scanpath& sp, const ReferenceFrame& frame);

// 2D scalar field over a reference frame, one cell per pixel, row-major.
struct DensityGrid {
  enum Flags : std::uint32_t {
    none = 0,
    probability = 1,  // cells sum to 1
    zscored = 2,      // mean 0, unit variance; cells may be negative
  };

  ReferenceFrame frame;
  std::uint32_t flags = none;
  std::vector<double> values;  // frame.height * frame.width

  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * frame.width + col]; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * frame.width + col]; }

  // Bilinear sample at a continuous point; cell (r,c) has its center at
  // pixel (c+0.5, r+0.5); out-of-frame points are edge-clamped.
  double sample(double x, double y) const;

  static DensityGrid zeros(const ReferenceFrame& frame, std::uint32_t flags = none);
};

// 8-bit raster image, row-major, interleaved channels (1 = gray, 3 = RGB).
struct ImageFrame {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  bool empty() const { return width <= 0 || height <= 0 || pixels.empty(); }
  std::uint8_t at(int row, int col, int ch) const {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
};

// JSON-lines interchange: one scanpath object per line. A line whose object
// carries a "meta" key is a file header (version/config echo) and is skipped
// on read. Coordinates survive a write/read round trip bit-exactly.
std::string scanpath_to_json(const Scanpath& sp);
Scanpath scanpath_from_json(const std::string& line);
std::vector<Scanpath> read_scanpaths_jsonl(const std::string& path);
void write_scanpaths_jsonl(const std::string& path, const std::vector<Scanpath>& paths,
                           const std::string& meta_json = "");

// DGRID file format: one ASCII header line "DGRID <w> <h> <flags>" where
// <flags> is ';'-joined tokens (flag names plus key=value metadata), then
// h*w little-endian float32 cells, row-major.
void write_density_grid(const std::string& path, const DensityGrid& g,
                        const std::vector<std::string>& meta = {});
DensityGrid read_density_grid(const std::string& path);

}  // namespace scanpath
