#pragma once

#include <cstdint>
#include <string>

#include "scanpath/core.hpp"
#include "scanpath/rng.hpp"

namespace scanpath {
namespace policies {

enum class Corner { TL, TR, BL, BR };

struct PolicyKind {
  enum class Variant {
    predicted,
    center_fixed,
    corner_fixed,
    random_uniform,
    shuffled,
  };
  Variant variant = Variant::predicted;
  Corner corner = Corner::TR;  // used by corner_fixed only

  // Parses "predicted", "center", "corner:tr|tl|br|bl", "random", "shuffled".
  static PolicyKind parse(const std::string& text);
  std::string name() const;
};

// n identical fixations at the frame center.
Scanpath center_fixed(const ReferenceFrame& frame, int n);

// n identical fixations at the chosen corner, inset so a fovea-sized crop
// stays mostly in frame. Default inset is half the 8 px fovea.
Scanpath corner_fixed(const ReferenceFrame& frame, int n, Corner corner, double inset = 4.0);

// n independent draws, x ~ U[0,width), y ~ U[0,height).
Scanpath random_uniform(const ReferenceFrame& frame, int n, std::uint64_t seed);

// Uniformly random permutation of the fixation order; multiset unchanged.
Scanpath shuffled(const Scanpath& sp, std::uint64_t seed);

// Isotropic Gaussian draw around mu; sigma 0 returns mu exactly without
// consuming generator state.
std::pair<double, double> sample_fixation(std::pair<double, double> mu, double sigma, Rng& rng);

}  // namespace policies
}  // namespace scanpath
