#include "scanpath/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "scanpath/io_util.hpp"

namespace scanpath {

namespace {

std::uint8_t round_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

ImageFrame to_gray(const ImageFrame& img) {
  if (img.empty()) throw std::invalid_argument("to_gray: empty image");
  if (img.channels == 1) return img;
  if (img.channels != 3) throw std::invalid_argument("to_gray: expected 1 or 3 channels");
  ImageFrame out;
  out.width = img.width;
  out.height = img.height;
  out.channels = 1;
  out.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double r = img.pixels[i * 3 + 0];
    const double g = img.pixels[i * 3 + 1];
    const double b = img.pixels[i * 3 + 2];
    out.pixels[i] = round_u8(0.299 * r + 0.587 * g + 0.114 * b);
  }
  return out;
}

ImageFrame resize_bilinear(const ImageFrame& img, int w, int h) {
  if (img.empty()) throw std::invalid_argument("resize_bilinear: empty image");
  if (w <= 0 || h <= 0) throw std::invalid_argument("resize_bilinear: non-positive size");
  if (w == img.width && h == img.height) return img;
  ImageFrame out;
  out.width = w;
  out.height = h;
  out.channels = img.channels;
  out.pixels.resize(static_cast<std::size_t>(w) * h * img.channels);
  const double sx = static_cast<double>(img.width) / w;
  const double sy = static_cast<double>(img.height) / h;
  for (int r = 0; r < h; ++r) {
    const double v = (r + 0.5) * sy - 0.5;
    const int r0 = static_cast<int>(std::floor(v));
    const double fy = v - r0;
    const int r0c = std::clamp(r0, 0, img.height - 1);
    const int r1c = std::clamp(r0 + 1, 0, img.height - 1);
    for (int c = 0; c < w; ++c) {
      const double u = (c + 0.5) * sx - 0.5;
      const int c0 = static_cast<int>(std::floor(u));
      const double fx = u - c0;
      const int c0c = std::clamp(c0, 0, img.width - 1);
      const int c1c = std::clamp(c0 + 1, 0, img.width - 1);
      for (int ch = 0; ch < img.channels; ++ch) {
        const double top = img.at(r0c, c0c, ch) * (1.0 - fx) + img.at(r0c, c1c, ch) * fx;
        const double bot = img.at(r1c, c0c, ch) * (1.0 - fx) + img.at(r1c, c1c, ch) * fx;
        out.pixels[(static_cast<std::size_t>(r) * w + c) * img.channels + ch] =
            round_u8(top * (1.0 - fy) + bot * fy);
      }
    }
  }
  return out;
}

ImageFrame read_png(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw std::runtime_error("png read failed: " + path + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  ImageFrame out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.channels = 3;
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw std::runtime_error("png decode failed: " + path + ": " + image.message);
  }
  return out;
}

void write_png(const std::string& path, const ImageFrame& img) {
  if (img.empty()) throw std::invalid_argument("write_png: empty image");
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("write_png: expected 1 or 3 channels");
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr))
    throw std::runtime_error("png encode sizing failed: " + std::string(image.message));
  std::string buf(size, '\0');
  if (!png_image_write_to_memory(&image, buf.data(), &size, 0, img.pixels.data(), 0, nullptr))
    throw std::runtime_error("png encode failed: " + std::string(image.message));
  buf.resize(size);
  atomic_write_file(path, buf);
}

ImageFrame read_pnm(const std::string& path) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < data.size()) {
      if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(start, pos - start);
  };
  const std::string magic = next_token();
  if (magic != "P5" && magic != "P6")
    throw std::invalid_argument("pnm: expected binary P5/P6 in " + path);
  ImageFrame out;
  out.channels = magic == "P6" ? 3 : 1;
  out.width = std::stoi(next_token());
  out.height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (out.width <= 0 || out.height <= 0 || maxval != 255)
    throw std::invalid_argument("pnm: unsupported header in " + path);
  ++pos;  // single whitespace byte after maxval
  const std::size_t need = static_cast<std::size_t>(out.width) * out.height * out.channels;
  if (data.size() - pos < need) throw std::invalid_argument("pnm: truncated data in " + path);
  out.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                    data.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return out;
}

void write_pnm(const std::string& path, const ImageFrame& img) {
  if (img.empty()) throw std::invalid_argument("write_pnm: empty image");
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("write_pnm: expected 1 or 3 channels");
  std::string content = (img.channels == 3 ? "P6\n" : "P5\n");
  content += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  content.append(img.pixels.begin(), img.pixels.end());
  atomic_write_file(path, content);
}

ImageFrame read_image(const std::string& path) {
  const std::string head = [&] {
    std::string d = read_file(path);
    return d.substr(0, std::min<std::size_t>(d.size(), 8));
  }();
  if (head.size() >= 2 && head[0] == 'P' && (head[1] == '5' || head[1] == '6'))
    return read_pnm(path);
  static const unsigned char png_magic[4] = {0x89, 'P', 'N', 'G'};
  if (head.size() >= 4 && std::memcmp(head.data(), png_magic, 4) == 0) return read_png(path);
  throw std::invalid_argument("unsupported image format: " + path);
}

}  // namespace scanpath
