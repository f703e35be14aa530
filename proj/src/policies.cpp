#include "scanpath/policies.hpp"

#include <stdexcept>

namespace scanpath {
namespace policies {

PolicyKind PolicyKind::parse(const std::string& text) {
  PolicyKind pk;
  if (text == "predicted") {
    pk.variant = Variant::predicted;
  } else if (text == "center") {
    pk.variant = Variant::center_fixed;
  } else if (text == "random") {
    pk.variant = Variant::random_uniform;
  } else if (text == "shuffled") {
    pk.variant = Variant::shuffled;
  } else if (text.rfind("corner", 0) == 0) {
    pk.variant = Variant::corner_fixed;
    const std::string which = text == "corner" ? "tr" : text.substr(7);
    if (text != "corner" && text[6] != ':')
      throw std::invalid_argument("unknown policy: " + text);
    if (which == "tl") pk.corner = Corner::TL;
    else if (which == "tr") pk.corner = Corner::TR;
    else if (which == "bl") pk.corner = Corner::BL;
    else if (which == "br") pk.corner = Corner::BR;
    else throw std::invalid_argument("unknown corner: " + which);
  } else {
    throw std::invalid_argument("unknown policy: " + text);
  }
  return pk;
}

std::string PolicyKind::name() const {
  switch (variant) {
    case Variant::predicted: return "predicted";
    case Variant::center_fixed: return "center";
    case Variant::random_uniform: return "random";
    case Variant::shuffled: return "shuffled";
    case Variant::corner_fixed:
      switch (corner) {
        case Corner::TL: return "corner:tl";
        case Corner::TR: return "corner:tr";
        case Corner::BL: return "corner:bl";
        case Corner::BR: return "corner:br";
      }
  }
  throw std::logic_error("unknown policy variant");
}

namespace {

Scanpath repeated(const ReferenceFrame& frame, int n, double x, double y) {
  if (n < 1) throw std::invalid_argument("policy: n must be >= 1");
  Scanpath sp;
  sp.source = Source::reference;
  sp.frame = frame;
  sp.fixations.assign(static_cast<std::size_t>(n), Fixation{x, y, std::nullopt});
  return sp;
}

}  // namespace

Scanpath center_fixed(const ReferenceFrame& frame, int n) {
  return repeated(frame, n, frame.width / 2.0, frame.height / 2.0);
}

Scanpath corner_fixed(const ReferenceFrame& frame, int n, Corner corner, double inset) {
  const double w = frame.width;
  const double h = frame.height;
  double x = inset, y = inset;
  switch (corner) {
    case Corner::TL: break;
    case Corner::TR: x = w - inset; break;
    case Corner::BL: y = h - inset; break;
    case Corner::BR: x = w - inset; y = h - inset; break;
  }
  return repeated(frame, n, x, y);
}

Scanpath random_uniform(const ReferenceFrame& frame, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("policy: n must be >= 1");
  Rng rng(seed);
  Scanpath sp;
  sp.source = Source::reference;
  sp.frame = frame;
  sp.fixations.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, frame.width);
    const double y = rng.uniform(0.0, frame.height);
    sp.fixations.push_back(Fixation{x, y, std::nullopt});
  }
  return sp;
}

Scanpath shuffled(const Scanpath& sp, std::uint64_t seed) {
  if (sp.empty()) throw std::invalid_argument("shuffled: empty scanpath");
  Rng rng(seed);
  Scanpath out = sp;
  out.source = Source::reference;
  rng.shuffle(out.fixations);
  return out;
}

std::pair<double, double> sample_fixation(std::pair<double, double> mu, double sigma, Rng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("sample_fixation: sigma must be >= 0");
  if (sigma == 0.0) return mu;
  const double x = mu.first + sigma * rng.normal();
  const double y = mu.second + sigma * rng.normal();
  return {x, y};
}

}  // namespace policies
}  // namespace scanpath
