#include "scanpath/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "scanpath/io_util.hpp"

namespace scanpath {

const char* source_name(Source s) {
  switch (s) {
    case Source::human: return "human";
    case Source::model: return "model";
    case Source::reference: return "reference";
  }
  throw std::logic_error("unknown source enum value");
}

Source source_from_name(const std::string& name) {
  if (name == "human") return Source::human;
  if (name == "model") return Source::model;
  if (name == "reference") return Source::reference;
  throw std::invalid_argument("unknown scanpath source: " + name);
}

Scanpath normalize_scanpath(const Scanpath& sp, const ReferenceFrame& src,
                            const ReferenceFrame& dst) {
  if (!src.valid() || !dst.valid())
    throw std::invalid_argument("normalize_scanpath: zero-sized reference frame");
  const double sx = static_cast<double>(dst.width) / src.width;
  const double sy = static_cast<double>(dst.height) / src.height;
  Scanpath out = sp;
  out.frame = dst;
  for (auto& f : out.fixations) {
    if (!std::isfinite(f.x) || !std::isfinite(f.y))
      throw std::invalid_argument("normalize_scanpath: non-finite fixation");
    f.x *= sx;
    f.y *= sy;
  }
  return out;
}

Scanpath clamp_to_frame(const Scanpath& sp, const ReferenceFrame& frame) {
  if (!frame.valid()) throw std::invalid_argument("clamp_to_frame: invalid frame");
  Scanpath out = sp;
  out.frame = frame;
  bool moved = false;
  for (auto& f : out.fixations) {
    const double cx = std::clamp(f.x, 0.0, static_cast<double>(frame.width));
    const double cy = std::clamp(f.y, 0.0, static_cast<double>(frame.height));
    moved |= (cx != f.x) || (cy != f.y);
    f.x = cx;
    f.y = cy;
  }
  out.clamped = sp.clamped || moved;
  return out;
}

DensityGrid DensityGrid::zeros(const ReferenceFrame& frame, std::uint32_t flags) {
  if (!frame.valid()) throw std::invalid_argument("DensityGrid: invalid frame");
  DensityGrid g;
  g.frame = frame;
  g.flags = flags;
  g.values.assign(static_cast<std::size_t>(frame.width) * frame.height, 0.0);
  return g;
}

double DensityGrid::sample(double x, double y) const {
  const int w = frame.width;
  const int h = frame.height;
  const double u = x - 0.5;
  const double v = y - 0.5;
  const int c0 = static_cast<int>(std::floor(u));
  const int r0 = static_cast<int>(std::floor(v));
  const double fx = u - c0;
  const double fy = v - r0;
  const int c0c = std::clamp(c0, 0, w - 1);
  const int c1c = std::clamp(c0 + 1, 0, w - 1);
  const int r0c = std::clamp(r0, 0, h - 1);
  const int r1c = std::clamp(r0 + 1, 0, h - 1);
  const double top = at(r0c, c0c) * (1.0 - fx) + at(r0c, c1c) * fx;
  const double bot = at(r1c, c0c) * (1.0 - fx) + at(r1c, c1c) * fx;
  return top * (1.0 - fy) + bot * fy;
}

namespace {

nlohmann::json fixation_to_json(const Fixation& f) {
  nlohmann::json arr = nlohmann::json::array({f.x, f.y});
  if (f.duration) arr.push_back(*f.duration);
  return arr;
}

Fixation fixation_from_json(const nlohmann::json& arr) {
  if (!arr.is_array() || arr.size() < 2 || arr.size() > 3)
    throw std::invalid_argument("fixation must be [x,y] or [x,y,duration]");
  Fixation f;
  f.x = arr[0].get<double>();
  f.y = arr[1].get<double>();
  if (arr.size() == 3) f.duration = arr[2].get<double>();
  return f;
}

}  // namespace

std::string scanpath_to_json(const Scanpath& sp) {
  nlohmann::json j;
  j["image_id"] = sp.image_id;
  j["source"] = source_name(sp.source);
  j["frame"] = {sp.frame.width, sp.frame.height};
  nlohmann::json fx = nlohmann::json::array();
  for (const auto& f : sp.fixations) fx.push_back(fixation_to_json(f));
  j["fixations"] = std::move(fx);
  if (sp.clamped) j["clamped"] = true;
  return j.dump();
}

Scanpath scanpath_from_json(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  Scanpath sp;
  sp.image_id = j.at("image_id").get<std::string>();
  sp.source = source_from_name(j.at("source").get<std::string>());
  const auto& fr = j.at("frame");
  if (!fr.is_array() || fr.size() != 2)
    throw std::invalid_argument("frame must be [width,height]");
  sp.frame.width = fr[0].get<int>();
  sp.frame.height = fr[1].get<int>();
  if (!sp.frame.valid()) throw std::invalid_argument("invalid frame in scanpath");
  for (const auto& f : j.at("fixations")) sp.fixations.push_back(fixation_from_json(f));
  if (j.contains("clamped")) sp.clamped = j["clamped"].get<bool>();
  return sp;
}

std::vector<Scanpath> read_scanpaths_jsonl(const std::string& path) {
  std::vector<Scanpath> out;
  for (const auto& line : read_lines(path)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(t);
    if (j.contains("meta")) continue;  // file header line
    out.push_back(scanpath_from_json(t));
  }
  return out;
}

void write_scanpaths_jsonl(const std::string& path, const std::vector<Scanpath>& paths,
                           const std::string& meta_json) {
  std::string content;
  if (!meta_json.empty()) {
    content += "{\"meta\":" + meta_json + "}\n";
  }
  for (const auto& sp : paths) {
    content += scanpath_to_json(sp);
    content += '\n';
  }
  atomic_write_file(path, content);
}

namespace {

void put_f32_le(std::string& out, float f) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(f);
  out.push_back(static_cast<char>(u & 0xff));
  out.push_back(static_cast<char>((u >> 8) & 0xff));
  out.push_back(static_cast<char>((u >> 16) & 0xff));
  out.push_back(static_cast<char>((u >> 24) & 0xff));
}

float get_f32_le(const char* p) {
  const auto b = [&](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])); };
  const std::uint32_t u = b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
  return std::bit_cast<float>(u);
}

}  // namespace

void write_density_grid(const std::string& path, const DensityGrid& g,
                        const std::vector<std::string>& meta) {
  std::vector<std::string> tokens;
  if (g.flags & DensityGrid::probability) tokens.push_back("probability");
  if (g.flags & DensityGrid::zscored) tokens.push_back("zscored");
  if (tokens.empty()) tokens.push_back("none");
  for (const auto& m : meta) tokens.push_back(m);
  std::string content = "DGRID " + std::to_string(g.frame.width) + " " +
                        std::to_string(g.frame.height) + " ";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) content += ';';
    content += tokens[i];
  }
  content += '\n';
  content.reserve(content.size() + g.values.size() * 4);
  for (const double v : g.values) put_f32_le(content, static_cast<float>(v));
  atomic_write_file(path, content);
}

DensityGrid read_density_grid(const std::string& path) {
  const std::string data = read_file(path);
  const std::size_t eol = data.find('\n');
  if (eol == std::string::npos) throw std::invalid_argument("DGRID: missing header line");
  std::istringstream hdr(data.substr(0, eol));
  std::string magic, flags_field;
  int w = 0, h = 0;
  hdr >> magic >> w >> h >> flags_field;
  if (magic != "DGRID" || w <= 0 || h <= 0)
    throw std::invalid_argument("DGRID: malformed header in " + path);
  DensityGrid g = DensityGrid::zeros({w, h});
  for (const auto& tok : split(flags_field, ';')) {
    if (tok == "probability") g.flags |= DensityGrid::probability;
    else if (tok == "zscored") g.flags |= DensityGrid::zscored;
    // "none" and key=value metadata tokens carry no semantics on read
  }
  const std::size_t need = g.values.size() * 4;
  if (data.size() - eol - 1 < need)
    throw std::invalid_argument("DGRID: truncated cell data in " + path);
  const char* p = data.data() + eol + 1;
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = get_f32_le(p + i * 4);
  return g;
}

}  // namespace scanpath
