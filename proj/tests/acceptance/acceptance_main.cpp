// Release gate: every published numerical guarantee checked end to end
// against independent oracles and closed forms. One PASS/FAIL line per
// check; the exit status is the number of failures. Checks that carry a
// wall-clock budget enforce it on their own timing.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "../oracles.hpp"
#include "scanpath/analysis.hpp"
#include "scanpath/core.hpp"
#include "scanpath/eva/config.hpp"
#include "scanpath/eva/losses.hpp"
#include "scanpath/eva/network.hpp"
#include "scanpath/eva/rollout.hpp"
#include "scanpath/eva/variance.hpp"
#include "scanpath/eva/weights.hpp"
#include "scanpath/gcs.hpp"
#include "scanpath/image.hpp"
#include "scanpath/ingest.hpp"
#include "scanpath/metrics.hpp"
#include "scanpath/policies.hpp"
#include "scanpath/rng.hpp"
#include "scanpath/synth.hpp"

namespace fs = std::filesystem;
using namespace scanpath;

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Ten synthetic images with planted human paths and a jittered model copy,
// built once and shared by the score checks.
struct CorpusFixture {
  std::string dir;
  std::vector<std::string> ids;
  std::map<std::string, Scanpath> human;
  std::map<std::string, Scanpath> model;
};

const CorpusFixture& corpus10() {
  static const CorpusFixture fixture = [] {
    CorpusFixture c;
    c.dir = (fs::temp_directory_path() / "scanpath_acceptance" / "corpus10").string();
    fs::remove_all(c.dir);
    fs::create_directories(c.dir);
    c.ids = synth::synth_corpus(86001, 10, c.dir);
    for (const auto& sp : read_scanpaths_jsonl(c.dir + "/scanpaths.jsonl"))
      c.human[sp.image_id] = sp;
    for (const auto& sp : read_scanpaths_jsonl(c.dir + "/model.jsonl"))
      c.model[sp.image_id] = sp;
    return c;
  }();
  return fixture;
}

gcs::GcsRefInputs make_refs(const Scanpath& human) {
  gcs::GcsRefInputs refs;
  refs.human_ref = human;
  refs.corner_ref =
      policies::corner_fixed(human.frame, static_cast<int>(human.size()), policies::Corner::TR);
  refs.center_ref = policies::center_fixed(human.frame, static_cast<int>(human.size()));
  return refs;
}

// An always-center model must pick up zero debiased credit on every metric,
// leaving only the movement-similarity bonus.
std::string check_center_policy_zero_bias() {
  const CorpusFixture& fx = corpus10();
  gcs::GcsConfig cfg;
  if (cfg.lambda != 0.1) return "default lambda is " + num(cfg.lambda) + ", expected 0.1";
  for (const std::string& id : fx.ids) {
    const Scanpath& human = fx.human.at(id);
    const Scanpath center = policies::center_fixed(human.frame, static_cast<int>(human.size()));
    const DensityGrid den = metrics::density_grid({human}, human.frame, cfg.metric.nss_sigma);
    const gcs::GcsReport rep = gcs::compute_gcs(center, human, den, make_refs(human), cfg);
    const std::pair<const char*, double> terms[] = {{"dtw", rep.debiased.dtw},
                                                    {"scanmatch", rep.debiased.scanmatch},
                                                    {"nss", rep.debiased.nss},
                                                    {"auc", rep.debiased.auc}};
    for (const auto& [name, v] : terms)
      if (!(std::abs(v) <= 1e-12))
        return id + ": debiased " + name + " = " + num(v) + ", expected 0";
    const double resid = rep.gcs - cfg.lambda * rep.movement_similarity;
    if (!(std::abs(resid) <= 1e-12))
      return id + ": gcs - lambda*similarity = " + num(resid);
  }
  return "";
}

// gcs must always decompose into the mean debiased quad plus the weighted
// movement similarity, whatever the model policy.
std::string check_score_decomposition() {
  const CorpusFixture& fx = corpus10();
  const gcs::GcsConfig cfg;
  int i = 0;
  for (const std::string& id : fx.ids) {
    const Scanpath& human = fx.human.at(id);
    const int n = static_cast<int>(human.size());
    const DensityGrid den = metrics::density_grid({human}, human.frame, cfg.metric.nss_sigma);
    const gcs::GcsRefInputs refs = make_refs(human);
    const std::vector<Scanpath> models = {
        policies::center_fixed(human.frame, n),
        policies::corner_fixed(human.frame, n, policies::Corner::BL),
        policies::random_uniform(human.frame, n, 7000 + static_cast<std::uint64_t>(i)),
        policies::shuffled(human, 7100 + static_cast<std::uint64_t>(i)),
        fx.model.at(id),
    };
    for (std::size_t m = 0; m < models.size(); ++m) {
      const gcs::GcsReport rep = gcs::compute_gcs(models[m], human, den, refs, cfg);
      if (rep.lambda != cfg.lambda) return id + ": report lambda drifted from config";
      const double resid =
          rep.gcs - (rep.debiased.mean() + rep.lambda * rep.movement_similarity);
      if (!(std::abs(resid) <= 1e-12))
        return id + " model " + std::to_string(m) + ": residual " + num(resid);
    }
    ++i;
  }
  return "";
}

// Dynamic-programming alignment distance against an exhaustive walk over
// every monotone warping path.
std::string check_dtw_exhaustive_oracle() {
  Rng rng(31007);
  const ReferenceFrame frame{224, 224};
  for (int k = 0; k < 1000; ++k) {
    const int na = 1 + static_cast<int>(rng.uniform_below(5));
    const int nb = 1 + static_cast<int>(rng.uniform_below(5));
    Scanpath a, b;
    a.frame = b.frame = frame;
    std::vector<oracles::Pt> pa, pb;
    for (int i = 0; i < na; ++i) {
      const double x = rng.uniform(0.0, 224.0), y = rng.uniform(0.0, 224.0);
      a.fixations.push_back(Fixation{x, y, std::nullopt});
      pa.push_back(oracles::Pt{x, y});
    }
    for (int i = 0; i < nb; ++i) {
      const double x = rng.uniform(0.0, 224.0), y = rng.uniform(0.0, 224.0);
      b.fixations.push_back(Fixation{x, y, std::nullopt});
      pb.push_back(oracles::Pt{x, y});
    }
    const double got = metrics::dtw(a, b);
    const double want = oracles::brute_dtw(pa, pb);
    if (!(std::abs(got - want) <= 1e-9))
      return "pair " + std::to_string(k) + ": got " + num(got) + " want " + num(want);
  }
  return "";
}

// Grid-quantized alignment similarity against an exhaustive global
// alignment, plus the exact self-match identity.
std::string check_scanmatch_exhaustive_oracle() {
  const metrics::MetricConfig mcfg;
  const ReferenceFrame frame{224, 224};
  const double dmax = std::hypot(mcfg.scanmatch_cols - 1, mcfg.scanmatch_rows - 1);
  Rng rng(41013);
  auto random_path = [&](int n) {
    Scanpath p;
    p.frame = frame;
    for (int i = 0; i < n; ++i)
      p.fixations.push_back(Fixation{rng.uniform(0.0, 224.0), rng.uniform(0.0, 224.0)});
    return p;
  };
  for (int k = 0; k < 500; ++k) {
    const Scanpath a = random_path(1 + static_cast<int>(rng.uniform_below(4)));
    const Scanpath b = random_path(1 + static_cast<int>(rng.uniform_below(4)));
    std::vector<std::pair<int, int>> ca, cb;
    for (const auto& f : a.fixations)
      ca.push_back(metrics::quantize_cell(f, frame, mcfg.scanmatch_cols, mcfg.scanmatch_rows));
    for (const auto& f : b.fixations)
      cb.push_back(metrics::quantize_cell(f, frame, mcfg.scanmatch_cols, mcfg.scanmatch_rows));
    auto sub = [&](std::size_t i, std::size_t j) {
      const double d = std::hypot(ca[i].first - cb[j].first, ca[i].second - cb[j].second);
      return mcfg.scanmatch_sub_scale * (1.0 - d / dmax);
    };
    const double raw = oracles::brute_global_alignment(
        a.size(), b.size(), sub, mcfg.scanmatch_gap * mcfg.scanmatch_sub_scale);
    const double want =
        raw / (mcfg.scanmatch_sub_scale * static_cast<double>(std::max(a.size(), b.size())));
    const double got = metrics::scanmatch(a, b, mcfg);
    if (!(std::abs(got - want) <= 1e-9))
      return "pair " + std::to_string(k) + ": got " + num(got) + " want " + num(want);
  }
  for (int k = 0; k < 100; ++k) {
    const Scanpath p = random_path(1 + static_cast<int>(rng.uniform_below(12)));
    const double s = metrics::scanmatch(p, p, mcfg);
    if (s != 1.0) return "self-match " + std::to_string(k) + " scored " + num(s);
  }
  return "";
}

// A constant saliency grid ranks every point equal (all ties, 0.5 exactly);
// a grid that is bright only under the fixations must rank them above
// essentially every sampled negative.
std::string check_auc_tie_and_separation() {
  const ReferenceFrame frame{224, 224};
  metrics::MetricConfig mcfg;
  mcfg.auc_negatives = 10000;
  mcfg.rng_seed = 51001;

  DensityGrid flat = DensityGrid::zeros(frame);
  std::fill(flat.values.begin(), flat.values.end(), 0.25);
  Rng rng(51002);
  std::vector<Fixation> fix;
  for (int i = 0; i < 10; ++i)
    fix.push_back(Fixation{rng.uniform(0.0, 224.0), rng.uniform(0.0, 224.0)});
  const double tie = metrics::auc(flat, fix, mcfg);
  if (tie != 0.5) return "constant grid scored " + num(tie) + ", expected exactly 0.5";

  DensityGrid bright = DensityGrid::zeros(frame);
  for (int r = 100; r <= 102; ++r)
    for (int c = 100; c <= 102; ++c) bright.at(r, c) = 1.0;
  const std::vector<Fixation> on_peak(10, Fixation{101.5, 101.5, std::nullopt});
  const double sep = metrics::auc(bright, on_peak, mcfg);
  if (!(sep >= 0.99)) return "separating grid scored " + num(sep) + ", expected >= 0.99";
  return "";
}

// The z-scoring inside nss must cancel any positive rescale and any shift of
// the saliency values.
std::string check_nss_affine_invariance() {
  Rng rng(61007);
  const ReferenceFrame frame{64, 64};
  for (int k = 0; k < 100; ++k) {
    DensityGrid g = DensityGrid::zeros(frame);
    for (double& v : g.values) v = rng.uniform(0.0, 1.0);
    std::vector<Fixation> fix;
    for (int i = 0; i < 5; ++i)
      fix.push_back(Fixation{rng.uniform(0.0, 64.0), rng.uniform(0.0, 64.0)});
    const double base = metrics::nss(g, fix);
    for (const double alpha : {0.5, 3.0})
      for (const double beta : {-1.0, 10.0}) {
        DensityGrid t = g;
        for (double& v : t.values) v = alpha * v + beta;
        const double got = metrics::nss(t, fix);
        if (!(std::abs(got - base) < 1e-9))
          return "case " + std::to_string(k) + " alpha " + num(alpha) + " beta " + num(beta) +
                 ": " + num(got) + " vs " + num(base);
      }
  }
  return "";
}

// One hand-computed update at the defaults, then convergence of sigma to its
// floor under a constant error stream from random starting states.
std::string check_variance_controller() {
  {
    eva::VarianceController vc = eva::VarianceController::from_config(eva::EvaConfig{});
    vc.validate();
    vc.update(1.0);
    const double want_long = 0.99 * 0.0 + (1.0 - 0.99) * 1.0;
    const double want_short = 0.9 * 0.0 + (1.0 - 0.9) * 1.0;
    const double want_u = std::abs(want_short - want_long);
    const double ex = std::exp(2.0 * 5.0 * want_u);
    const double want_sigma = 0.05 + (0.5 - 0.05) * ((ex - 1.0) / (ex + 1.0));
    if (!(std::abs(vc.ema_long - want_long) <= 1e-12)) return "ema_long " + num(vc.ema_long);
    if (!(std::abs(vc.ema_short - want_short) <= 1e-12)) return "ema_short " + num(vc.ema_short);
    if (!(std::abs(vc.uncertainty - want_u) <= 1e-12)) return "uncertainty " + num(vc.uncertainty);
    if (!(std::abs(vc.sigma - want_sigma) <= 1e-12))
      return "sigma " + num(vc.sigma) + " want " + num(want_sigma);

    vc.update(0.25);
    const double want_long2 = 0.99 * want_long + 0.01 * 0.25;
    const double want_short2 = 0.9 * want_short + 0.1 * 0.25;
    if (!(std::abs(vc.ema_long - want_long2) <= 1e-12)) return "second ema_long " + num(vc.ema_long);
    if (!(std::abs(vc.ema_short - want_short2) <= 1e-12))
      return "second ema_short " + num(vc.ema_short);
  }

  Rng rng(71003);
  for (int trial = 0; trial < 20; ++trial) {
    eva::VarianceController vc;
    vc.tau_long = 0.98;
    vc.tau_short = 0.8;
    vc.alpha_gain = 5.0;
    vc.sigma_min = 0.05;
    vc.sigma_max = 0.5;
    vc.ema_long = rng.uniform(0.0, 2.0);
    vc.ema_short = rng.uniform(0.0, 2.0);
    vc.sigma = rng.uniform(0.05, 0.5);
    vc.validate();
    const double e = rng.uniform(0.0, 2.0);
    for (int step = 0; step < 1000; ++step) vc.update(e);
    if (!(std::abs(vc.sigma - vc.sigma_min) < 1e-6))
      return "trial " + std::to_string(trial) + ": sigma " + num(vc.sigma) +
             " did not reach the floor";
  }
  return "";
}

// Gate activations and both running means must stay inside the unit
// interval under adversarially scaled weights, and a unit EMA factor must
// freeze the running means at their initial value exactly.
std::string check_gate_unit_interval() {
  eva::EvaDims d;
  d.periphery_feat = 8;
  d.h1 = 8;
  d.h2 = 8;
  d.attn = 8;
  d.classes = 4;
  eva::WeightBundle w = eva::init_weights(d, 88001);
  w.gate_td_w *= 100.0;
  w.gate_td_b *= 100.0;
  w.gate_bu_w *= 100.0;
  w.gate_bu_b *= 100.0;

  Rng rng(88002);
  auto random_vec = [&](int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
    return v;
  };

  eva::GateState gs = eva::GateState::init(d.h2, 0.9);
  for (int k = 0; k < 100000; ++k) {
    const Eigen::VectorXd h1 = random_vec(d.h1, -3.0, 3.0);
    const Eigen::VectorXd h2 = random_vec(d.h2, -3.0, 3.0);
    const double sigma = rng.uniform(0.0, 1.0);
    eva::gate_step(gs, h1, h2, sigma, w);
    for (int i = 0; i < d.h2; ++i) {
      if (!(gs.beta(i) >= 0.0 && gs.beta(i) <= 1.0))
        return "beta[" + std::to_string(i) + "] = " + num(gs.beta(i)) + " at step " +
               std::to_string(k);
      if (!(gs.beta_bar(i) >= 0.0 && gs.beta_bar(i) <= 1.0))
        return "beta_bar[" + std::to_string(i) + "] = " + num(gs.beta_bar(i)) + " at step " +
               std::to_string(k);
      if (!(gs.beta_bar_b(i) >= 0.0 && gs.beta_bar_b(i) <= 1.0))
        return "beta_bar_b[" + std::to_string(i) + "] = " + num(gs.beta_bar_b(i)) + " at step " +
               std::to_string(k);
    }
  }

  eva::GateState frozen = eva::GateState::init(d.h2, 1.0);
  for (int k = 0; k < 50; ++k) {
    eva::gate_step(frozen, random_vec(d.h1, -3.0, 3.0), random_vec(d.h2, -3.0, 3.0),
                   rng.uniform(0.0, 0.5), w);
    for (int i = 0; i < d.h2; ++i) {
      if (frozen.beta_bar(i) != 0.5 || frozen.beta_bar_b(i) != 0.5)
        return "unit EMA factor let the running mean move to " + num(frozen.beta_bar(i));
    }
  }
  return "";
}

// Fixed-length episodes: exactly one fixation and one prediction per step,
// bit-identical reruns under the same seed, and a shuffled replay that keeps
// the fixation multiset unchanged.
std::string check_rollout_determinism_and_budget() {
  ImageFrame img;
  img.width = 32;
  img.height = 32;
  img.channels = 3;
  img.pixels.resize(32 * 32 * 3);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c)
      for (int ch = 0; ch < 3; ++ch)
        img.pixels[(static_cast<std::size_t>(r) * 32 + c) * 3 + ch] =
            static_cast<std::uint8_t>((c * 13 + r * 31 + ch * 57) % 256);

  eva::EvaDims d;
  d.periphery_feat = 16;
  d.h1 = 32;
  d.h2 = 32;
  d.attn = 16;
  d.classes = 10;
  const eva::WeightBundle w = eva::init_weights(d, 99001);
  const eva::GlimpseConfig gcfg;  // 8 px fovea, 16 px periphery, 12 steps
  if (gcfg.fovea_size != 8 || gcfg.periphery_size != 16 || gcfg.steps != 12)
    return "default glimpse geometry changed";
  const eva::EvaConfig ecfg;

  const eva::RolloutTrace t1 =
      eva::rollout(img, w, gcfg, ecfg, 42, 3, nullptr, nullptr, "img", "predicted");
  const eva::RolloutTrace t2 =
      eva::rollout(img, w, gcfg, ecfg, 42, 3, nullptr, nullptr, "img", "predicted");
  if (t1.steps.size() != 12) return "trace has " + std::to_string(t1.steps.size()) + " steps";
  for (std::size_t i = 0; i < t1.steps.size(); ++i) {
    const auto& s = t1.steps[i];
    if (s.probs.size() != d.classes || s.predicted < 0 || s.predicted >= d.classes)
      return "step " + std::to_string(i) + " lacks a class prediction";
  }
  if (eva::trace_to_json(t1) != eva::trace_to_json(t2))
    return "same seed produced different traces";
  const eva::RolloutTrace t3 =
      eva::rollout(img, w, gcfg, ecfg, 43, 3, nullptr, nullptr, "img", "predicted");
  if (eva::trace_to_json(t1) == eva::trace_to_json(t3))
    return "different seeds produced identical traces";

  const Scanpath sp = t1.scanpath();
  if (sp.size() != 12) return "scanpath view has " + std::to_string(sp.size()) + " fixations";
  const Scanpath shuf = policies::shuffled(sp, 99);
  const eva::RolloutTrace replay =
      eva::rollout(img, w, gcfg, ecfg, 42, 3, &shuf, nullptr, "img", "shuffled");
  const Scanpath replayed = replay.scanpath();
  if (replayed.size() != sp.size()) return "replay changed the fixation count";
  auto key = [](const Scanpath& p) {
    std::vector<std::pair<double, double>> k;
    for (const auto& f : p.fixations) k.emplace_back(f.x, f.y);
    std::sort(k.begin(), k.end());
    return k;
  };
  if (key(replayed) != key(sp)) return "replay changed the fixation multiset";
  return "";
}

// Closed-form values of the objective terms: a baseline equal to the reward
// zeroes the movement term, a correct one-hot prediction zeroes the
// cross-entropy, uniform predictions score T*ln(C), and a half-open gate
// contributes exactly the entropy weight times ln 2.
std::string check_loss_identities() {
  const int classes = 10;
  auto make_trace = [&](int steps) {
    eva::RolloutTrace t;
    t.frame = ReferenceFrame{32, 32};
    for (int i = 0; i < steps; ++i) {
      eva::StepRecord s;
      s.probs = Eigen::VectorXd::Constant(classes, 1.0 / classes);
      s.predicted = 0;
      s.log_density = -0.5 - 0.1 * i;
      t.steps.push_back(std::move(s));
    }
    return t;
  };

  {
    eva::RolloutTrace t = make_trace(5);
    t.label = 2;
    t.predicted = 2;  // reward 1
    for (auto& s : t.steps) s.baseline = 1.0;
    const double r = eva::reinforce_loss(t, 2);
    if (r != 0.0) return "reward-matched baseline left " + num(r);
    t.predicted = 1;  // reward 0
    for (auto& s : t.steps) s.baseline = 0.0;
    const double r0 = eva::reinforce_loss(t, 2);
    if (r0 != 0.0) return "zero-advantage case left " + num(r0);
  }

  {
    eva::RolloutTrace t = make_trace(6);
    for (auto& s : t.steps) {
      s.probs = Eigen::VectorXd::Zero(classes);
      s.probs(7) = 1.0;
    }
    bool floored = true;
    const double ce = eva::ce_loss(t, 7, &floored);
    if (ce != 0.0 || floored) return "one-hot correct prediction scored " + num(ce);
  }

  {
    eva::RolloutTrace t = make_trace(6);
    const double ce = eva::ce_loss(t, 4, nullptr);
    const double want = 6.0 * std::log(static_cast<double>(classes));
    if (!(std::abs(ce - want) <= 1e-9))
      return "uniform predictions scored " + num(ce) + " want " + num(want);
  }

  {
    eva::RolloutTrace t;
    t.frame = ReferenceFrame{32, 32};
    for (int i = 0; i < 3; ++i) {
      eva::StepRecord s;
      s.probs = Eigen::VectorXd::Constant(4, 0.25);
      s.beta_bar = Eigen::VectorXd::Constant(4, 0.5);
      s.beta_bar_b = Eigen::VectorXd::Constant(4, 0.5);
      t.steps.push_back(std::move(s));
    }
    const eva::RegLambdas lambdas;
    const eva::GateRegularizers reg = eva::gate_regularizers(t, lambdas, 1e-12);
    const double want = lambdas.entropy * std::log(2.0);
    if (!(std::abs(reg.entropy - want) <= 1e-9))
      return "half-open gate entropy " + num(reg.entropy) + " want " + num(want);
    const double total_resid = reg.total - (reg.cost + reg.l1 + reg.entropy);
    if (!(std::abs(total_resid) <= 1e-12)) return "regularizer total residual " + num(total_resid);
  }
  return "";
}

// Hash lookup, resample round trips, dispersion clustering and length
// fitting over a hundred-image corpus.
std::string check_ingest_end_to_end() {
  const std::string dir =
      (fs::temp_directory_path() / "scanpath_acceptance" / "corpus100").string();
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::string> ids = synth::synth_corpus(20260816, 100, dir);

  std::vector<ImageFrame> images;
  HashIndex index;
  for (const std::string& id : ids) {
    images.push_back(read_image(dir + "/images/" + id + ".ppm"));
    index.entries.push_back(HashIndexEntry{phash(images.back()), id, ""});
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const MatchResult m = match_image(images[i], index);
    if (m.distance != 0 || m.image_id != ids[i])
      return "self-match of " + ids[i] + " hit " + m.image_id + " at distance " +
             std::to_string(m.distance);
  }

  int close = 0, total = 0, worst = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const PerceptualHash h = index.entries[i].hash;
    const ImageFrame up = resize_bilinear(resize_bilinear(images[i], 64, 64), 32, 32);
    const ImageFrame down = resize_bilinear(resize_bilinear(images[i], 16, 16), 32, 32);
    for (const ImageFrame* round : {&up, &down}) {
      const int d = hamming(h, phash(*round));
      worst = std::max(worst, d);
      if (d <= 4) ++close;
      ++total;
    }
  }
  if (close * 100 < total * 99)
    return "only " + std::to_string(close) + "/" + std::to_string(total) +
           " resample round trips stayed within distance 4 (worst " + std::to_string(worst) + ")";

  std::map<std::string, Scanpath> planted;
  for (const auto& sp : read_scanpaths_jsonl(dir + "/scanpaths.jsonl")) planted[sp.image_id] = sp;
  for (const std::string& id : ids) {
    const GazeTrace trace = read_gaze_trace(dir + "/traces/" + id + ".csv");
    const std::vector<Fixation> rec = idt_fixations(trace, 15.0);
    for (const Fixation& want : planted.at(id).fixations) {
      double best = 1e18;
      for (const Fixation& got : rec) best = std::min(best, std::hypot(got.x - want.x, got.y - want.y));
      // every gaze sample sits within 5 px of its planted fixation, so the
      // cluster centroid cannot drift further than that
      if (!(best <= 5.000001))
        return id + ": a planted fixation was only recovered to within " + num(best) + " px";
    }
    const FitLengthResult fit = fit_length(rec, 12);
    if (fit.fixations.size() != 12 || fit.padded)
      return id + ": fit_length returned " + std::to_string(fit.fixations.size()) +
             " fixations (padded=" + std::to_string(fit.padded) + ")";
    const std::vector<Fixation> head(rec.begin(), rec.begin() + 5);
    const FitLengthResult padded = fit_length(head, 12);
    if (padded.fixations.size() != 12 || !padded.padded)
      return id + ": short input was not padded to 12";
    std::vector<Fixation> lengthened = rec;
    lengthened.insert(lengthened.end(), rec.begin(), rec.begin() + 3);
    if (fit_length(lengthened, 12).fixations.size() != 12)
      return id + ": long input was not truncated to 12";
  }
  return "";
}

// Top-2 component extraction on anisotropic 2-D data against the closed-form
// eigendecomposition of the hand-accumulated covariance.
std::string check_pca_closed_form() {
  Rng rng(121001);
  const int n = 500;
  std::vector<std::vector<Eigen::VectorXd>> states;
  std::vector<int> labels;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) {
    const double x = 3.0 * rng.normal();
    const double y = 0.8 * x + rng.normal();
    Eigen::VectorXd v(2);
    v << x, y;
    states.push_back({v});
    labels.push_back(i % 4);
    pts.emplace_back(x, y);
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double a = 0.0, b = 0.0, c = 0.0;
  for (const auto& [x, y] : pts) {
    a += (x - mx) * (x - mx);
    b += (x - mx) * (y - my);
    c += (y - my) * (y - my);
  }
  a /= n;
  b /= n;
  c /= n;

  oracles::Eig2 want = oracles::closed_form_eig2(a, b, c);
  auto fix_sign = [](std::array<double, 2>& v) {
    const int idx = std::abs(v[1]) > std::abs(v[0]) ? 1 : 0;
    if (v[idx] < 0.0) {
      v[0] = -v[0];
      v[1] = -v[1];
    }
  };
  fix_sign(want.v1);
  fix_sign(want.v2);

  const analysis::PcaResult res = analysis::pca_trajectories(states, labels);
  if (!(res.ev1 >= res.ev2)) return "explained variances out of order";
  if (!(std::abs(res.ev1 - want.l1) <= 1e-9))
    return "ev1 " + num(res.ev1) + " want " + num(want.l1);
  if (!(std::abs(res.ev2 - want.l2) <= 1e-9))
    return "ev2 " + num(res.ev2) + " want " + num(want.l2);
  for (int i = 0; i < 2; ++i) {
    if (!(std::abs(res.pc1(i) - want.v1[static_cast<std::size_t>(i)]) <= 1e-9))
      return "pc1[" + std::to_string(i) + "] = " + num(res.pc1(i)) + " want " +
             num(want.v1[static_cast<std::size_t>(i)]);
    if (!(std::abs(res.pc2(i) - want.v2[static_cast<std::size_t>(i)]) <= 1e-9))
      return "pc2[" + std::to_string(i) + "] = " + num(res.pc2(i)) + " want " +
             num(want.v2[static_cast<std::size_t>(i)]);
  }
  return "";
}

// The whole scoring pipeline, density estimation included, over a thousand
// random pairs on one thread.
std::string check_pipeline_runtime() {
  const ReferenceFrame frame{224, 224};
  const gcs::GcsConfig cfg;
  double acc = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Scanpath human =
        policies::random_uniform(frame, 12, 131000 + static_cast<std::uint64_t>(k));
    const Scanpath model =
        policies::random_uniform(frame, 12, 931000 + static_cast<std::uint64_t>(k));
    const DensityGrid den = metrics::density_grid({human}, frame, cfg.metric.nss_sigma);
    const gcs::GcsReport rep = gcs::compute_gcs(model, human, den, make_refs(human), cfg);
    acc += rep.gcs;
    if (!std::isfinite(rep.gcs)) return "pair " + std::to_string(k) + " produced a non-finite score";
  }
  if (!std::isfinite(acc)) return "accumulated score is non-finite";
  return "";
}

int run_check(const std::string& name, double budget_ms,
              const std::function<std::string()>& body) {
  const auto t0 = Clock::now();
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() - t0)
          .count();
  if (detail.empty() && budget_ms > 0.0 && ms >= budget_ms) {
    std::ostringstream os;
    os << "took " << ms << " ms, budget " << budget_ms << " ms";
    detail = os.str();
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(1);
  if (detail.empty()) {
    line << "PASS " << name << " (" << ms << " ms)";
  } else {
    line << "FAIL " << name << " (" << ms << " ms): " << detail;
  }
  std::cout << line.str() << "\n" << std::flush;
  return detail.empty() ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  failures += run_check("center_policy_zero_bias", 1000.0, check_center_policy_zero_bias);
  failures += run_check("score_decomposition", 0.0, check_score_decomposition);
  failures += run_check("dtw_exhaustive_oracle", 5000.0, check_dtw_exhaustive_oracle);
  failures += run_check("scanmatch_exhaustive_oracle", 0.0, check_scanmatch_exhaustive_oracle);
  failures += run_check("auc_tie_and_separation", 0.0, check_auc_tie_and_separation);
  failures += run_check("nss_affine_invariance", 0.0, check_nss_affine_invariance);
  failures += run_check("variance_controller", 0.0, check_variance_controller);
  failures += run_check("gate_unit_interval", 0.0, check_gate_unit_interval);
  failures += run_check("rollout_determinism_and_budget", 0.0,
                        check_rollout_determinism_and_budget);
  failures += run_check("loss_identities", 0.0, check_loss_identities);
  failures += run_check("ingest_end_to_end", 0.0, check_ingest_end_to_end);
  failures += run_check("pca_closed_form", 0.0, check_pca_closed_form);
  failures += run_check("pipeline_runtime", 10000.0, check_pipeline_runtime);
  std::cout << (13 - failures) << " of 13 checks passed\n";
  return failures == 0 ? 0 : 1;
}
