#include "scanpath/eva/rollout.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "scanpath/eva/losses.hpp"
#include "scanpath/policies.hpp"
#include "scanpath/rng.hpp"

namespace scanpath {
namespace eva {

Scanpath RolloutTrace::scanpath() const {
  Scanpath sp;
  sp.image_id = image_id;
  sp.source = Source::model;
  sp.frame = frame;
  sp.fixations.reserve(steps.size());
  for (const auto& s : steps) sp.fixations.push_back(Fixation{s.x, s.y, std::nullopt});
  return clamp_to_frame(sp, frame);
}

RolloutTrace rollout(const ImageFrame& img, const WeightBundle& w, const GlimpseConfig& gcfg,
                     const EvaConfig& ecfg, std::uint64_t seed, std::optional<int> label,
                     const Scanpath* override_path, const RolloutInit* init,
                     const std::string& image_id, const std::string& policy_name) {
  if (img.empty()) throw std::invalid_argument("rollout: empty image");
  if (gcfg.steps < 1) throw std::invalid_argument("rollout: need at least 1 step");
  if (gcfg.fovea_size != w.dims.fovea_size || gcfg.periphery_size != w.dims.periphery_size)
    throw std::invalid_argument("rollout: glimpse sizes do not match weights");
  if (label && (*label < 0 || *label >= w.dims.classes))
    throw std::invalid_argument("rollout: label out of range");
  if (override_path &&
      override_path->fixations.size() != static_cast<std::size_t>(gcfg.steps))
    throw std::invalid_argument("rollout: override path must supply exactly one fixation per step");

  const int T = gcfg.steps;
  RolloutTrace trace;
  trace.image_id = image_id;
  trace.policy = policy_name;
  trace.frame = ReferenceFrame{img.width, img.height};
  trace.seed = seed;
  trace.label = label;
  trace.steps.reserve(static_cast<std::size_t>(T));

  const double wpx = img.width;
  const double hpx = img.height;
  auto to_norm = [&](double px, double py) {
    return std::pair<double, double>{2.0 * px / wpx - 1.0, 2.0 * py / hpx - 1.0};
  };
  auto to_px = [&](double nx, double ny) {
    return std::pair<double, double>{(nx + 1.0) * 0.5 * wpx, (ny + 1.0) * 0.5 * hpx};
  };

  Eigen::VectorXd h1 = Eigen::VectorXd::Constant(w.dims.h1, init ? init->state_fill : 0.0);
  Eigen::VectorXd c1 = h1;
  Eigen::VectorXd h2 = Eigen::VectorXd::Constant(w.dims.h2, init ? init->state_fill : 0.0);
  Eigen::VectorXd c2 = h2;
  GateState gs = GateState::init(w.dims.h2, ecfg.gamma);
  VarianceController vc = VarianceController::from_config(ecfg);
  vc.validate();
  if (init && init->sigma1) {
    if (*init->sigma1 < 0.0) throw std::invalid_argument("rollout: negative initial sigma");
    vc.sigma = *init->sigma1;
  }
  Eigen::VectorXd y_prev =
      Eigen::VectorXd::Constant(w.dims.classes, 1.0 / static_cast<double>(w.dims.classes));
  Rng rng(hash_seed(seed, "rollout"));

  std::pair<double, double> loc_px{wpx / 2.0, hpx / 2.0};
  if (override_path) {
    loc_px = {override_path->fixations[0].x, override_path->fixations[0].y};
  } else if (init && init->loc0_px) {
    loc_px = *init->loc0_px;
  }

  for (int t = 1; t <= T; ++t) {
    const GlimpseObservation obs = extract_glimpse(img, loc_px, gcfg);
    const EncodedGlimpse enc = encode_glimpse(obs, w);

    const Eigen::VectorXd h1_prev = h1;
    auto [h1_new, c1_new] = cell_step(w.lower, enc.s, h1, c1);
    h1 = std::move(h1_new);
    c1 = std::move(c1_new);

    const double sigma_t = vc.sigma;
    gate_step(gs, h1_prev, h2, sigma_t, w);
    const Eigen::VectorXd u = relay(h1, enc.fovea_feat, h2, gs.beta_bar, w, ecfg.eps_relay);
    auto [h2_new, c2_new] = cell_step(w.upper, u, h2, c2);
    h2 = std::move(h2_new);
    c2 = std::move(c2_new);

    StepRecord rec;
    rec.x = loc_px.first;
    rec.y = loc_px.second;
    rec.sigma = sigma_t;
    rec.uncertainty = vc.uncertainty;
    rec.probs = softmax(w.act_w * h2 + w.act_b);
    rec.baseline = (w.base_w * h2)(0) + w.base_b(0);
    Eigen::Index argmax = 0;
    rec.probs.maxCoeff(&argmax);
    rec.predicted = static_cast<int>(argmax);
    rec.gate_mean = gs.beta_bar.mean();
    rec.gate_bu_mean = gs.beta_bar_b.mean();
    rec.h1 = h1;
    rec.h2 = h2;
    rec.beta_bar = gs.beta_bar;
    rec.beta_bar_b = gs.beta_bar_b;

    if (t < T) {
      const Eigen::VectorXd mu = w.loc_w * h1 + w.loc_b;
      std::pair<double, double> next_norm;
      if (override_path) {
        next_norm = to_norm(override_path->fixations[static_cast<std::size_t>(t)].x,
                            override_path->fixations[static_cast<std::size_t>(t)].y);
      } else {
        next_norm = policies::sample_fixation({mu(0), mu(1)}, sigma_t, rng);
      }
      if (sigma_t > 0.0) {
        const double dx = next_norm.first - mu(0);
        const double dy = next_norm.second - mu(1);
        const double s2 = sigma_t * sigma_t;
        rec.log_density = -(dx * dx + dy * dy) / (2.0 * s2) - std::log(2.0 * M_PI * s2);
      }
      loc_px = to_px(next_norm.first, next_norm.second);
    }

    const double e_t = label ? label_error(rec.probs, *label) : self_error(y_prev, rec.probs);
    y_prev = rec.probs;
    vc.update(e_t);

    trace.steps.push_back(std::move(rec));
  }

  trace.predicted = trace.steps.back().predicted;
  return trace;
}

namespace {

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

std::string trace_to_json(const RolloutTrace& trace, const std::string& meta_json) {
  nlohmann::json j;
  if (!meta_json.empty()) j["meta"] = nlohmann::json::parse(meta_json);
  j["image_id"] = trace.image_id;
  j["policy"] = trace.policy;
  j["frame"] = {trace.frame.width, trace.frame.height};
  j["seed"] = trace.seed;
  if (trace.label) j["label"] = *trace.label;
  j["predicted"] = trace.predicted;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) {
    nlohmann::json js;
    js["x"] = s.x;
    js["y"] = s.y;
    js["sigma"] = s.sigma;
    js["uncertainty"] = s.uncertainty;
    js["gate_mean"] = s.gate_mean;
    js["gate_bu_mean"] = s.gate_bu_mean;
    js["baseline"] = s.baseline;
    js["predicted"] = s.predicted;
    if (s.log_density) js["log_density"] = *s.log_density;
    js["probs"] = vec_json(s.probs);
    js["h1"] = vec_json(s.h1);
    js["h2"] = vec_json(s.h2);
    js["beta_bar"] = vec_json(s.beta_bar);
    js["beta_bar_b"] = vec_json(s.beta_bar_b);
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  return j.dump();
}

RolloutTrace trace_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  RolloutTrace trace;
  trace.image_id = j.at("image_id").get<std::string>();
  trace.policy = j.at("policy").get<std::string>();
  trace.frame.width = j.at("frame")[0].get<int>();
  trace.frame.height = j.at("frame")[1].get<int>();
  trace.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("label")) trace.label = j["label"].get<int>();
  trace.predicted = j.at("predicted").get<int>();
  for (const auto& js : j.at("steps")) {
    StepRecord s;
    s.x = js.at("x").get<double>();
    s.y = js.at("y").get<double>();
    s.sigma = js.at("sigma").get<double>();
    s.uncertainty = js.at("uncertainty").get<double>();
    s.gate_mean = js.at("gate_mean").get<double>();
    s.gate_bu_mean = js.at("gate_bu_mean").get<double>();
    s.baseline = js.at("baseline").get<double>();
    s.predicted = js.at("predicted").get<int>();
    if (js.contains("log_density")) s.log_density = js["log_density"].get<double>();
    s.probs = vec_from_json(js.at("probs"));
    s.h1 = vec_from_json(js.at("h1"));
    s.h2 = vec_from_json(js.at("h2"));
    s.beta_bar = vec_from_json(js.at("beta_bar"));
    s.beta_bar_b = vec_from_json(js.at("beta_bar_b"));
    trace.steps.push_back(std::move(s));
  }
  if (trace.steps.empty()) throw std::invalid_argument("trace: no steps");
  return trace;
}

}  // namespace eva
}  // namespace scanpath
