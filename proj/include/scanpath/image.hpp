#pragma once

#include <string>

#include "scanpath/core.hpp"

namespace scanpath {

// Luma grayscale conversion (weights 0.299/0.587/0.114, round half up).
// 1-channel input is returned unchanged.
ImageFrame to_gray(const ImageFrame& img);

// Bilinear resampling with half-pixel-centered alignment, per channel,
// rounded half up to 8 bits. Handles both up- and downscaling.
ImageFrame resize_bilinear(const ImageFrame& img, int w, int h);

// Decoders for PNG and binary PPM/PGM, dispatched on file magic. PNG always
// decodes to 3 channels; PNM keeps its native channel count.
ImageFrame read_image(const std::string& path);
ImageFrame read_png(const std::string& path);
ImageFrame read_pnm(const std::string& path);

void write_png(const std::string& path, const ImageFrame& img);
void write_pnm(const std::string& path, const ImageFrame& img);

}  // namespace scanpath
