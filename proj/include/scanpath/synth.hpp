#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scanpath/core.hpp"

namespace scanpath {
namespace synth {

// Desk-scale fixture: smooth random images, planted ground-truth scanpaths,
// and dense gaze traces jittered around the planted fixations.
//
// Layout under out_dir:
//   images/<id>.ppm       32x32 color cosine-mixture images
//   traces/<id>.csv       gaze samples (x,y,t) in the 224x224 frame
//   manifest.csv          trace_file,image_file
//   labels.csv            image_id,label (10 classes)
//   scanpaths.jsonl       planted fixations (source human)
//   model.jsonl           jittered copy of the planted paths (source model)
//
// Images carry a balanced-sign low-frequency spectrum, so their perceptual
// hashes survive up/down resampling round trips essentially unchanged.
// Planted fixations sit on a jittered 4x3 lattice, pairwise at least 40 px
// apart; every gaze sample lies within 5 px of its fixation, so dispersion
// clustering at radius 15 separates the clusters by construction. Output
// bytes are a pure function of (seed, n_images).
std::vector<std::string> synth_corpus(std::uint64_t seed, int n_images,
                                      const std::string& out_dir);

}  // namespace synth
}  // namespace scanpath
