#include "scanpath/eva/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scanpath/image.hpp"

namespace scanpath {
namespace eva {

namespace {

// Square crop of side `size` centered at (cx, cy), zero-padded outside.
ImageFrame crop_padded(const ImageFrame& img, double cx, double cy, int size) {
  ImageFrame out;
  out.width = size;
  out.height = size;
  out.channels = img.channels;
  out.pixels.assign(static_cast<std::size_t>(size) * size * img.channels, 0);
  const int left = static_cast<int>(std::floor(cx - size / 2.0));
  const int top = static_cast<int>(std::floor(cy - size / 2.0));
  for (int r = 0; r < size; ++r) {
    const int src_r = top + r;
    if (src_r < 0 || src_r >= img.height) continue;
    for (int c = 0; c < size; ++c) {
      const int src_c = left + c;
      if (src_c < 0 || src_c >= img.width) continue;
      for (int ch = 0; ch < img.channels; ++ch)
        out.pixels[(static_cast<std::size_t>(r) * size + c) * img.channels + ch] =
            img.at(src_r, src_c, ch);
    }
  }
  return out;
}

struct Tensor3 {
  int c = 0, h = 0, w = 0;
  std::vector<double> v;

  double at(int ch, int r, int col) const {
    return v[(static_cast<std::size_t>(ch) * h + r) * w + col];
  }
  double& at(int ch, int r, int col) {
    return v[(static_cast<std::size_t>(ch) * h + r) * w + col];
  }
  static Tensor3 zeros(int c, int h, int w) {
    return Tensor3{c, h, w, std::vector<double>(static_cast<std::size_t>(c) * h * w, 0.0)};
  }
};

Tensor3 from_image(const ImageFrame& img) {
  Tensor3 t = Tensor3::zeros(img.channels, img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < img.channels; ++ch)
        t.at(ch, r, c) = img.at(r, c, ch) / 255.0;
  return t;
}

// 3x3 convolution, stride 1, zero padding 1, fused ReLU.
Tensor3 conv3x3_relu(const Tensor3& in, const ConvLayer& layer) {
  if (in.c != layer.in_c) throw std::logic_error("conv: channel mismatch");
  Tensor3 out = Tensor3::zeros(layer.out_c, in.h, in.w);
  for (int o = 0; o < layer.out_c; ++o) {
    for (int r = 0; r < in.h; ++r) {
      for (int col = 0; col < in.w; ++col) {
        double acc = layer.b[static_cast<std::size_t>(o)];
        for (int i = 0; i < in.c; ++i) {
          const std::size_t wbase = (static_cast<std::size_t>(o) * in.c + i) * 9;
          for (int ky = 0; ky < 3; ++ky) {
            const int rr = r + ky - 1;
            if (rr < 0 || rr >= in.h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int cc = col + kx - 1;
              if (cc < 0 || cc >= in.w) continue;
              acc += layer.w[wbase + static_cast<std::size_t>(ky) * 3 + kx] * in.at(i, rr, cc);
            }
          }
        }
        out.at(o, r, col) = acc > 0.0 ? acc : 0.0;
      }
    }
  }
  return out;
}

// 2x2 max pooling, stride 2; odd trailing rows/cols pool a clamped window.
Tensor3 maxpool2(const Tensor3& in) {
  const int oh = std::max(1, (in.h + 1) / 2);
  const int ow = std::max(1, (in.w + 1) / 2);
  Tensor3 out = Tensor3::zeros(in.c, oh, ow);
  for (int ch = 0; ch < in.c; ++ch)
    for (int r = 0; r < oh; ++r)
      for (int c = 0; c < ow; ++c) {
        double m = -1e300;
        for (int dr = 0; dr < 2; ++dr)
          for (int dc = 0; dc < 2; ++dc) {
            const int rr = std::min(2 * r + dr, in.h - 1);
            const int cc = std::min(2 * c + dc, in.w - 1);
            m = std::max(m, in.at(ch, rr, cc));
          }
        out.at(ch, r, c) = m;
      }
  return out;
}

Eigen::VectorXd global_avg_pool(const Tensor3& in) {
  Eigen::VectorXd out(in.c);
  const double scale = 1.0 / (static_cast<double>(in.h) * in.w);
  for (int ch = 0; ch < in.c; ++ch) {
    double acc = 0.0;
    for (int r = 0; r < in.h; ++r)
      for (int c = 0; c < in.w; ++c) acc += in.at(ch, r, c);
    out(ch) = acc * scale;
  }
  return out;
}

Eigen::VectorXd relu(Eigen::VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::max(0.0, v(i));
  return v;
}

Eigen::VectorXd sigmoid(Eigen::VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 1.0 / (1.0 + std::exp(-v(i)));
  return v;
}

}  // namespace

GlimpseObservation extract_glimpse(const ImageFrame& img, std::pair<double, double> loc_px,
                                   const GlimpseConfig& cfg) {
  if (img.empty()) throw std::invalid_argument("extract_glimpse: empty image");
  GlimpseObservation obs;
  obs.fovea = crop_padded(img, loc_px.first, loc_px.second, cfg.fovea_size);
  const ImageFrame peri_full = crop_padded(img, loc_px.first, loc_px.second, cfg.periphery_size);
  obs.periphery = resize_bilinear(peri_full, cfg.fovea_size, cfg.fovea_size);
  obs.location = {2.0 * loc_px.first / img.width - 1.0, 2.0 * loc_px.second / img.height - 1.0};
  return obs;
}

EncodedGlimpse encode_glimpse(const GlimpseObservation& obs, const WeightBundle& w) {
  if (obs.fovea.channels != w.dims.channels)
    throw std::invalid_argument("encode_glimpse: channel count does not match weights");
  if (obs.fovea.width != w.dims.fovea_size || obs.periphery.width != w.dims.fovea_size)
    throw std::invalid_argument("encode_glimpse: patch size does not match weights");

  Tensor3 t = from_image(obs.fovea);
  for (std::size_t stage = 0; stage < w.fovea.size(); ++stage) {
    t = conv3x3_relu(t, w.fovea[stage]);
    if (stage + 1 < w.fovea.size()) t = maxpool2(t);
  }
  EncodedGlimpse enc;
  enc.fovea_feat = global_avg_pool(t);

  const std::size_t flat = obs.periphery.pixels.size();
  Eigen::VectorXd px(static_cast<Eigen::Index>(flat) + 2);
  for (std::size_t i = 0; i < flat; ++i)
    px(static_cast<Eigen::Index>(i)) = obs.periphery.pixels[i] / 255.0;
  px(static_cast<Eigen::Index>(flat)) = obs.location.first;
  px(static_cast<Eigen::Index>(flat) + 1) = obs.location.second;
  const Eigen::VectorXd peri_feat = relu(w.peri_w * px + w.peri_b);

  enc.s.resize(enc.fovea_feat.size() + peri_feat.size());
  enc.s << enc.fovea_feat, peri_feat;
  return enc;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> cell_step(const CellParams& cell,
                                                      const Eigen::VectorXd& x,
                                                      const Eigen::VectorXd& h,
                                                      const Eigen::VectorXd& c) {
  const Eigen::VectorXd f = sigmoid(cell.wf * x + cell.uf * h + cell.bf);
  const Eigen::VectorXd o = sigmoid(cell.wo * x + cell.uo * h + cell.bo);
  Eigen::VectorXd z = cell.wz * x + cell.uz * h + cell.bz;
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = std::tanh(z(i));
  Eigen::VectorXd c_new =
      f.cwiseProduct(c) + (Eigen::VectorXd::Ones(f.size()) - f).cwiseProduct(z);
  Eigen::VectorXd h_new = c_new;
  for (Eigen::Index i = 0; i < h_new.size(); ++i) h_new(i) = std::tanh(h_new(i));
  h_new = o.cwiseProduct(h_new);
  return {std::move(h_new), std::move(c_new)};
}

GateState GateState::init(int h2, double gamma) {
  GateState gs;
  gs.gamma = gamma;
  gs.beta = Eigen::VectorXd::Zero(h2);
  gs.beta_bar = Eigen::VectorXd::Constant(h2, 0.5);
  gs.beta_bar_b = Eigen::VectorXd::Constant(h2, 0.5);
  return gs;
}

void gate_step(GateState& gs, const Eigen::VectorXd& h1_prev, const Eigen::VectorXd& h2_prev,
               double sigma, const WeightBundle& w) {
  if (!std::isfinite(sigma)) throw std::invalid_argument("gate_step: non-finite sigma");
  const Eigen::VectorXd td = relu(w.gate_td_w * h2_prev + w.gate_td_b);
  const Eigen::VectorXd bu = relu(w.gate_bu_w * h1_prev + w.gate_bu_b);
  gs.beta.resize(td.size());
  Eigen::VectorXd bu_gate(td.size());
  for (Eigen::Index i = 0; i < td.size(); ++i) {
    gs.beta(i) = std::clamp((td(i) - sigma) * (bu(i) + sigma), 0.0, 1.0);
    bu_gate(i) = std::clamp(bu(i) + sigma, 0.0, 1.0);
  }
  gs.beta_bar = gs.gamma * gs.beta_bar + (1.0 - gs.gamma) * gs.beta;
  gs.beta_bar_b = gs.gamma * gs.beta_bar_b + (1.0 - gs.gamma) * bu_gate;
}

Eigen::VectorXd relay(const Eigen::VectorXd& h1, const Eigen::VectorXd& fovea_feat,
                      const Eigen::VectorXd& h2_prev, const Eigen::VectorXd& beta_bar,
                      const WeightBundle& w, double eps) {
  Eigen::VectorXd m(h1.size() + fovea_feat.size());
  m << h1, fovea_feat;
  const Eigen::VectorXd q = w.attn_q * h2_prev;
  const Eigen::VectorXd k = w.attn_k * m;
  const Eigen::VectorXd v = w.attn_v * m;
  const double alpha = 1.0 / (1.0 + std::exp(-q.dot(k) / std::sqrt(static_cast<double>(q.size()))));
  Eigen::VectorXd u(2 * v.size());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(v.size());
  u << (ones - beta_bar).cwiseProduct(alpha * v + eps * v), beta_bar.cwiseProduct(h2_prev);
  return u;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = logits;
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = std::exp(e(i) - m);
  return e / e.sum();
}

}  // namespace eva
}  // namespace scanpath
