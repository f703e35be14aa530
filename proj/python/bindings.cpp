// Python bindings for the scanpath toolkit: interchange types, the metric
// and scoring pipeline, ingest utilities, rollout and analysis entry points.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scanpath/analysis.hpp"
#include "scanpath/core.hpp"
#include "scanpath/eva/config.hpp"
#include "scanpath/eva/losses.hpp"
#include "scanpath/eva/rollout.hpp"
#include "scanpath/eva/variance.hpp"
#include "scanpath/eva/weights.hpp"
#include "scanpath/gcs.hpp"
#include "scanpath/image.hpp"
#include "scanpath/ingest.hpp"
#include "scanpath/metrics.hpp"
#include "scanpath/policies.hpp"
#include "scanpath/synth.hpp"
#include "scanpath/version.hpp"

namespace py = pybind11;
using namespace scanpath;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scanpath comparison, calibrated scoring and active-vision rollouts";
  m.attr("__version__") = version();

  // interchange types
  py::class_<ReferenceFrame>(m, "ReferenceFrame")
      .def(py::init<>())
      .def(py::init([](int w, int h) { return ReferenceFrame{w, h}; }), py::arg("width"),
           py::arg("height"))
      .def_readwrite("width", &ReferenceFrame::width)
      .def_readwrite("height", &ReferenceFrame::height)
      .def("__eq__", [](const ReferenceFrame& a, const ReferenceFrame& b) { return a == b; })
      .def("__repr__", [](const ReferenceFrame& f) {
        return "ReferenceFrame(" + std::to_string(f.width) + ", " + std::to_string(f.height) + ")";
      });

  py::class_<Fixation>(m, "Fixation")
      .def(py::init([](double x, double y, std::optional<double> duration) {
             return Fixation{x, y, duration};
           }),
           py::arg("x"), py::arg("y"), py::arg("duration") = std::nullopt)
      .def_readwrite("x", &Fixation::x)
      .def_readwrite("y", &Fixation::y)
      .def_readwrite("duration", &Fixation::duration)
      .def("__eq__", [](const Fixation& a, const Fixation& b) { return a == b; })
      .def("__repr__", [](const Fixation& f) {
        return "Fixation(" + std::to_string(f.x) + ", " + std::to_string(f.y) + ")";
      });

  py::enum_<Source>(m, "Source")
      .value("human", Source::human)
      .value("model", Source::model)
      .value("reference", Source::reference);

  py::class_<Scanpath>(m, "Scanpath")
      .def(py::init<>())
      .def_readwrite("image_id", &Scanpath::image_id)
      .def_readwrite("source", &Scanpath::source)
      .def_readwrite("frame", &Scanpath::frame)
      .def_readwrite("fixations", &Scanpath::fixations)
      .def_readwrite("clamped", &Scanpath::clamped)
      .def("__len__", &Scanpath::size)
      .def("__eq__", [](const Scanpath& a, const Scanpath& b) { return a == b; });

  m.def("clamp_to_frame", &clamp_to_frame, py::arg("scanpath"), py::arg("frame"));
  m.def("normalize_scanpath", &normalize_scanpath, py::arg("scanpath"), py::arg("src"),
        py::arg("dst"));
  m.def("scanpath_to_json", &scanpath_to_json, py::arg("scanpath"));
  m.def("scanpath_from_json", &scanpath_from_json, py::arg("line"));
  m.def("read_scanpaths_jsonl", &read_scanpaths_jsonl, py::arg("path"));
  m.def("write_scanpaths_jsonl", &write_scanpaths_jsonl, py::arg("path"), py::arg("paths"),
        py::arg("meta_json") = "");

  py::class_<DensityGrid> dg(m, "DensityGrid");
  dg.def(py::init<>())
      .def_readwrite("frame", &DensityGrid::frame)
      .def_readwrite("flags", &DensityGrid::flags)
      .def_readwrite("values", &DensityGrid::values)
      .def("at", [](const DensityGrid& g, int row, int col) { return g.at(row, col); },
           py::arg("row"), py::arg("col"))
      .def("sample", &DensityGrid::sample, py::arg("x"), py::arg("y"))
      .def_static("zeros", &DensityGrid::zeros, py::arg("frame"),
                  py::arg("flags") = static_cast<std::uint32_t>(DensityGrid::none));
  dg.attr("PROBABILITY") = static_cast<std::uint32_t>(DensityGrid::probability);
  dg.attr("ZSCORED") = static_cast<std::uint32_t>(DensityGrid::zscored);
  m.def("write_density_grid", &write_density_grid, py::arg("path"), py::arg("grid"),
        py::arg("meta") = std::vector<std::string>{});
  m.def("read_density_grid", &read_density_grid, py::arg("path"));

  py::class_<ImageFrame>(m, "ImageFrame")
      .def(py::init<>())
      .def_readonly("width", &ImageFrame::width)
      .def_readonly("height", &ImageFrame::height)
      .def_readonly("channels", &ImageFrame::channels)
      .def_property_readonly(
          "pixels", [](const ImageFrame& img) { return py::bytes(
              reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size()); })
      .def("at", [](const ImageFrame& img, int row, int col, int ch) { return img.at(row, col, ch); },
           py::arg("row"), py::arg("col"), py::arg("channel") = 0);
  m.def("read_image", &read_image, py::arg("path"));
  m.def("resize_bilinear", &resize_bilinear, py::arg("image"), py::arg("width"),
        py::arg("height"));
  m.def("to_gray", &to_gray, py::arg("image"));

  // ingest
  py::class_<PerceptualHash>(m, "PerceptualHash")
      .def(py::init<>())
      .def_readwrite("bits", &PerceptualHash::bits)
      .def("hex", &PerceptualHash::hex)
      .def_static("from_hex", &PerceptualHash::from_hex, py::arg("hex"))
      .def("__eq__", [](const PerceptualHash& a, const PerceptualHash& b) { return a == b; });
  m.def("phash", &phash, py::arg("image"));
  m.def("hamming", &hamming, py::arg("a"), py::arg("b"));

  py::class_<GazeSample>(m, "GazeSample")
      .def(py::init([](double x, double y, std::optional<double> t) {
             return GazeSample{x, y, t};
           }),
           py::arg("x"), py::arg("y"), py::arg("t") = std::nullopt)
      .def_readwrite("x", &GazeSample::x)
      .def_readwrite("y", &GazeSample::y)
      .def_readwrite("t", &GazeSample::t);
  py::class_<GazeTrace>(m, "GazeTrace")
      .def(py::init<>())
      .def_readwrite("image_ref", &GazeTrace::image_ref)
      .def_readwrite("samples", &GazeTrace::samples);
  m.def("read_gaze_trace", &read_gaze_trace, py::arg("path"));
  m.def("idt_fixations", &idt_fixations, py::arg("trace"), py::arg("radius"));

  py::class_<FitLengthResult>(m, "FitLengthResult")
      .def_readonly("fixations", &FitLengthResult::fixations)
      .def_readonly("padded", &FitLengthResult::padded);
  m.def("fit_length", &fit_length, py::arg("fixations"), py::arg("n"));

  py::class_<HashIndexEntry>(m, "HashIndexEntry")
      .def(py::init([](PerceptualHash h, std::string id, std::string label) {
             return HashIndexEntry{h, std::move(id), std::move(label)};
           }),
           py::arg("hash"), py::arg("image_id"), py::arg("label") = "")
      .def_readwrite("hash", &HashIndexEntry::hash)
      .def_readwrite("image_id", &HashIndexEntry::image_id)
      .def_readwrite("label", &HashIndexEntry::label);
  py::class_<HashIndex>(m, "HashIndex")
      .def(py::init<>())
      .def_readwrite("entries", &HashIndex::entries);
  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("image_id", &MatchResult::image_id)
      .def_readonly("distance", &MatchResult::distance)
      .def_readonly("exact", &MatchResult::exact);
  m.def("match_image", &match_image, py::arg("query"), py::arg("index"));
  m.def("match_hash", &match_hash, py::arg("query"), py::arg("index"));
  m.def("write_hash_index", &write_hash_index, py::arg("path"), py::arg("index"),
        py::arg("meta") = std::vector<std::string>{});
  m.def("read_hash_index", &read_hash_index, py::arg("path"));

  // metrics
  py::class_<metrics::MetricConfig>(m, "MetricConfig")
      .def(py::init<>())
      .def_readwrite("scanmatch_cols", &metrics::MetricConfig::scanmatch_cols)
      .def_readwrite("scanmatch_rows", &metrics::MetricConfig::scanmatch_rows)
      .def_readwrite("scanmatch_gap", &metrics::MetricConfig::scanmatch_gap)
      .def_readwrite("scanmatch_sub_scale", &metrics::MetricConfig::scanmatch_sub_scale)
      .def_readwrite("nss_sigma", &metrics::MetricConfig::nss_sigma)
      .def_readwrite("auc_negatives", &metrics::MetricConfig::auc_negatives)
      .def_readwrite("rng_seed", &metrics::MetricConfig::rng_seed);
  py::class_<metrics::RawMetrics>(m, "RawMetrics")
      .def(py::init<>())
      .def_readwrite("dtw", &metrics::RawMetrics::dtw)
      .def_readwrite("scanmatch", &metrics::RawMetrics::scanmatch)
      .def_readwrite("nss", &metrics::RawMetrics::nss)
      .def_readwrite("auc", &metrics::RawMetrics::auc);
  m.def("dtw", &metrics::dtw, py::arg("a"), py::arg("b"));
  m.def("scanmatch", &metrics::scanmatch, py::arg("a"), py::arg("b"),
        py::arg("config") = metrics::MetricConfig{});
  m.def("density_grid", &metrics::density_grid, py::arg("paths"), py::arg("frame"),
        py::arg("sigma") = metrics::MetricConfig{}.nss_sigma);
  m.def("nss", &metrics::nss, py::arg("density"), py::arg("fixations"));
  m.def("auc", &metrics::auc, py::arg("density"), py::arg("fixations"),
        py::arg("config") = metrics::MetricConfig{});
  m.def("raw_metrics", &metrics::raw_metrics, py::arg("model"), py::arg("human"),
        py::arg("human_density"), py::arg("config") = metrics::MetricConfig{});

  // calibrated scoring
  py::class_<gcs::GcsConfig>(m, "GcsConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &gcs::GcsConfig::lambda)
      .def_readwrite("tau", &gcs::GcsConfig::tau)
      .def_readwrite("eps", &gcs::GcsConfig::eps)
      .def_readwrite("coverage_cols", &gcs::GcsConfig::coverage_cols)
      .def_readwrite("coverage_rows", &gcs::GcsConfig::coverage_rows)
      .def_readwrite("collapse_radius", &gcs::GcsConfig::collapse_radius)
      .def_readwrite("metric", &gcs::GcsConfig::metric);
  py::class_<gcs::MetricQuad>(m, "MetricQuad")
      .def(py::init<>())
      .def_readwrite("dtw", &gcs::MetricQuad::dtw)
      .def_readwrite("scanmatch", &gcs::MetricQuad::scanmatch)
      .def_readwrite("nss", &gcs::MetricQuad::nss)
      .def_readwrite("auc", &gcs::MetricQuad::auc)
      .def("mean", &gcs::MetricQuad::mean);
  py::class_<gcs::CalibrationRefs>(m, "CalibrationRefs")
      .def_readwrite("upper", &gcs::CalibrationRefs::upper)
      .def_readwrite("lower", &gcs::CalibrationRefs::lower)
      .def_readwrite("center", &gcs::CalibrationRefs::center);
  py::class_<gcs::MovementStats>(m, "MovementStats")
      .def(py::init<>())
      .def_readwrite("path_length", &gcs::MovementStats::path_length)
      .def_readwrite("mean_saccade_amplitude", &gcs::MovementStats::mean_saccade_amplitude)
      .def_readwrite("mean_dist_to_center", &gcs::MovementStats::mean_dist_to_center)
      .def_readwrite("spatial_coverage", &gcs::MovementStats::spatial_coverage)
      .def_readwrite("direction_entropy", &gcs::MovementStats::direction_entropy)
      .def_readwrite("collapse_rate", &gcs::MovementStats::collapse_rate)
      .def_readwrite("degenerate", &gcs::MovementStats::degenerate);
  py::class_<gcs::GcsRefInputs>(m, "GcsRefInputs")
      .def(py::init<>())
      .def(py::init([](Scanpath human_ref, Scanpath corner_ref, Scanpath center_ref) {
             return gcs::GcsRefInputs{std::move(human_ref), std::move(corner_ref),
                                      std::move(center_ref)};
           }),
           py::arg("human_ref"), py::arg("corner_ref"), py::arg("center_ref"))
      .def_readwrite("human_ref", &gcs::GcsRefInputs::human_ref)
      .def_readwrite("corner_ref", &gcs::GcsRefInputs::corner_ref)
      .def_readwrite("center_ref", &gcs::GcsRefInputs::center_ref);
  py::class_<gcs::GcsReport>(m, "GcsReport")
      .def_readonly("raw", &gcs::GcsReport::raw)
      .def_readonly("refs", &gcs::GcsReport::refs)
      .def_readonly("normalized", &gcs::GcsReport::normalized)
      .def_readonly("normalized_center", &gcs::GcsReport::normalized_center)
      .def_readonly("debiased", &gcs::GcsReport::debiased)
      .def_readonly("movement_model", &gcs::GcsReport::movement_model)
      .def_readonly("movement_human", &gcs::GcsReport::movement_human)
      .def_readonly("movement_distance", &gcs::GcsReport::movement_distance)
      .def_readonly("movement_similarity", &gcs::GcsReport::movement_similarity)
      .def_readonly("gcs", &gcs::GcsReport::gcs)
      .def_readonly("lambda_", &gcs::GcsReport::lambda)
      .def_readonly("sim_temperature", &gcs::GcsReport::sim_temperature)
      .def_readonly("upper_mode", &gcs::GcsReport::upper_mode)
      .def_readonly("warnings", &gcs::GcsReport::warnings);
  m.def("movement_stats", &gcs::movement_stats, py::arg("scanpath"), py::arg("frame"),
        py::arg("coverage_cols") = 7, py::arg("coverage_rows") = 7,
        py::arg("collapse_radius") = 8.0);
  m.def("movement_distance", &gcs::movement_distance, py::arg("model"), py::arg("human"),
        py::arg("eps") = 1e-6);
  m.def("movement_similarity", &gcs::movement_similarity, py::arg("distance"), py::arg("tau"));
  m.def("compute_gcs", &gcs::compute_gcs, py::arg("model"), py::arg("human"),
        py::arg("human_density"), py::arg("refs"), py::arg("config") = gcs::GcsConfig{});

  // reference policies
  m.def("center_fixed", &policies::center_fixed, py::arg("frame"), py::arg("n"));
  m.def("corner_fixed",
        [](const ReferenceFrame& frame, int n, const std::string& corner, double inset) {
          const policies::PolicyKind kind = policies::PolicyKind::parse("corner:" + corner);
          return policies::corner_fixed(frame, n, kind.corner, inset);
        },
        py::arg("frame"), py::arg("n"), py::arg("corner") = "tr", py::arg("inset") = 4.0);
  m.def("random_uniform", &policies::random_uniform, py::arg("frame"), py::arg("n"),
        py::arg("seed"));
  m.def("shuffled", &policies::shuffled, py::arg("scanpath"), py::arg("seed"));

  // active-vision rollouts
  py::class_<eva::EvaDims>(m, "EvaDims")
      .def(py::init<>())
      .def_readwrite("channels", &eva::EvaDims::channels)
      .def_readwrite("fovea_size", &eva::EvaDims::fovea_size)
      .def_readwrite("periphery_size", &eva::EvaDims::periphery_size)
      .def_readwrite("periphery_feat", &eva::EvaDims::periphery_feat)
      .def_readwrite("h1", &eva::EvaDims::h1)
      .def_readwrite("h2", &eva::EvaDims::h2)
      .def_readwrite("attn", &eva::EvaDims::attn)
      .def_readwrite("classes", &eva::EvaDims::classes)
      .def("__eq__", [](const eva::EvaDims& a, const eva::EvaDims& b) { return a == b; });
  py::class_<eva::GlimpseConfig>(m, "GlimpseConfig")
      .def(py::init<>())
      .def_readwrite("fovea_size", &eva::GlimpseConfig::fovea_size)
      .def_readwrite("periphery_size", &eva::GlimpseConfig::periphery_size)
      .def_readwrite("steps", &eva::GlimpseConfig::steps);
  py::class_<eva::EvaConfig>(m, "EvaConfig")
      .def(py::init<>())
      .def_readwrite("sigma_min", &eva::EvaConfig::sigma_min)
      .def_readwrite("sigma_max", &eva::EvaConfig::sigma_max)
      .def_readwrite("alpha_gain", &eva::EvaConfig::alpha_gain)
      .def_readwrite("tau_long", &eva::EvaConfig::tau_long)
      .def_readwrite("tau_short", &eva::EvaConfig::tau_short)
      .def_readwrite("gamma", &eva::EvaConfig::gamma)
      .def_readwrite("eps_relay", &eva::EvaConfig::eps_relay)
      .def_readwrite("lambda_cost", &eva::EvaConfig::lambda_cost)
      .def_readwrite("lambda_l1", &eva::EvaConfig::lambda_l1)
      .def_readwrite("lambda_entropy", &eva::EvaConfig::lambda_entropy)
      .def_readwrite("reg_eps", &eva::EvaConfig::reg_eps);
  py::class_<eva::WeightBundle>(m, "WeightBundle")
      .def_readonly("dims", &eva::WeightBundle::dims);
  m.def("init_weights", &eva::init_weights, py::arg("dims"), py::arg("seed"));
  m.def("save_weights", &eva::save_weights, py::arg("weights"), py::arg("path"));
  m.def("load_weights", &eva::load_weights, py::arg("path"));
  m.def("weights_equal", &eva::weights_equal, py::arg("a"), py::arg("b"));

  py::class_<eva::VarianceController>(m, "VarianceController")
      .def(py::init<>())
      .def_readwrite("tau_long", &eva::VarianceController::tau_long)
      .def_readwrite("tau_short", &eva::VarianceController::tau_short)
      .def_readwrite("alpha_gain", &eva::VarianceController::alpha_gain)
      .def_readwrite("sigma_min", &eva::VarianceController::sigma_min)
      .def_readwrite("sigma_max", &eva::VarianceController::sigma_max)
      .def_readwrite("ema_long", &eva::VarianceController::ema_long)
      .def_readwrite("ema_short", &eva::VarianceController::ema_short)
      .def_readwrite("uncertainty", &eva::VarianceController::uncertainty)
      .def_readwrite("sigma", &eva::VarianceController::sigma)
      .def_static("from_config", &eva::VarianceController::from_config, py::arg("config"))
      .def("validate", &eva::VarianceController::validate)
      .def("update", &eva::VarianceController::update, py::arg("error"));

  py::class_<eva::StepRecord>(m, "StepRecord")
      .def_readonly("x", &eva::StepRecord::x)
      .def_readonly("y", &eva::StepRecord::y)
      .def_readonly("sigma", &eva::StepRecord::sigma)
      .def_readonly("uncertainty", &eva::StepRecord::uncertainty)
      .def_readonly("gate_mean", &eva::StepRecord::gate_mean)
      .def_readonly("gate_bu_mean", &eva::StepRecord::gate_bu_mean)
      .def_readonly("probs", &eva::StepRecord::probs)
      .def_readonly("baseline", &eva::StepRecord::baseline)
      .def_readonly("predicted", &eva::StepRecord::predicted)
      .def_readonly("log_density", &eva::StepRecord::log_density)
      .def_readonly("h1", &eva::StepRecord::h1)
      .def_readonly("h2", &eva::StepRecord::h2)
      .def_readonly("beta_bar", &eva::StepRecord::beta_bar)
      .def_readonly("beta_bar_b", &eva::StepRecord::beta_bar_b);
  py::class_<eva::RolloutInit>(m, "RolloutInit")
      .def(py::init<>())
      .def_readwrite("loc0_px", &eva::RolloutInit::loc0_px)
      .def_readwrite("sigma1", &eva::RolloutInit::sigma1)
      .def_readwrite("state_fill", &eva::RolloutInit::state_fill);
  py::class_<eva::RolloutTrace>(m, "RolloutTrace")
      .def_readonly("image_id", &eva::RolloutTrace::image_id)
      .def_readonly("policy", &eva::RolloutTrace::policy)
      .def_readonly("frame", &eva::RolloutTrace::frame)
      .def_readonly("seed", &eva::RolloutTrace::seed)
      .def_readonly("label", &eva::RolloutTrace::label)
      .def_readonly("predicted", &eva::RolloutTrace::predicted)
      .def_readonly("steps", &eva::RolloutTrace::steps)
      .def("scanpath", &eva::RolloutTrace::scanpath);
  m.def("rollout",
        [](const ImageFrame& img, const eva::WeightBundle& w, const eva::GlimpseConfig& gcfg,
           const eva::EvaConfig& ecfg, std::uint64_t seed, std::optional<int> label,
           std::optional<Scanpath> override_path, std::optional<eva::RolloutInit> init,
           const std::string& image_id, const std::string& policy) {
          return eva::rollout(img, w, gcfg, ecfg, seed, label,
                              override_path ? &*override_path : nullptr,
                              init ? &*init : nullptr, image_id, policy);
        },
        py::arg("image"), py::arg("weights"), py::arg("glimpse") = eva::GlimpseConfig{},
        py::arg("config") = eva::EvaConfig{}, py::arg("seed") = 0,
        py::arg("label") = std::nullopt, py::arg("override_path") = std::nullopt,
        py::arg("init") = std::nullopt, py::arg("image_id") = "",
        py::arg("policy") = "predicted");
  m.def("trace_to_json", &eva::trace_to_json, py::arg("trace"), py::arg("meta_json") = "");
  m.def("trace_from_json", &eva::trace_from_json, py::arg("text"));

  // objective terms
  py::class_<eva::RegLambdas>(m, "RegLambdas")
      .def(py::init<>())
      .def_readwrite("cost", &eva::RegLambdas::cost)
      .def_readwrite("l1", &eva::RegLambdas::l1)
      .def_readwrite("entropy", &eva::RegLambdas::entropy);
  py::class_<eva::GateRegularizers>(m, "GateRegularizers")
      .def_readonly("cost", &eva::GateRegularizers::cost)
      .def_readonly("l1", &eva::GateRegularizers::l1)
      .def_readonly("entropy", &eva::GateRegularizers::entropy)
      .def_readonly("total", &eva::GateRegularizers::total);
  m.def("self_error", &eva::self_error, py::arg("y_prev"), py::arg("y_cur"));
  m.def("label_error", &eva::label_error, py::arg("y"), py::arg("label"));
  m.def("reinforce_loss", &eva::reinforce_loss, py::arg("trace"), py::arg("label"));
  m.def("ce_loss",
        [](const eva::RolloutTrace& trace, int label) {
          bool floored = false;
          const double v = eva::ce_loss(trace, label, &floored);
          return py::make_tuple(v, floored);
        },
        py::arg("trace"), py::arg("label"));
  m.def("gate_regularizers", &eva::gate_regularizers, py::arg("trace"),
        py::arg("lambdas") = eva::RegLambdas{}, py::arg("eps") = 1e-8);
  m.def("total_objective", &eva::total_objective, py::arg("trace"), py::arg("label"),
        py::arg("lambdas") = eva::RegLambdas{}, py::arg("eps") = 1e-8);

  // analysis
  py::class_<analysis::LabeledImage>(m, "LabeledImage")
      .def(py::init([](std::string image_id, ImageFrame image, int label) {
             return analysis::LabeledImage{std::move(image_id), std::move(image), label};
           }),
           py::arg("image_id"), py::arg("image"), py::arg("label"))
      .def_readwrite("image_id", &analysis::LabeledImage::image_id)
      .def_readwrite("image", &analysis::LabeledImage::image)
      .def_readwrite("label", &analysis::LabeledImage::label);
  py::class_<analysis::ImageOutcome>(m, "ImageOutcome")
      .def_readonly("image_id", &analysis::ImageOutcome::image_id)
      .def_readonly("predicted", &analysis::ImageOutcome::predicted)
      .def_readonly("correct", &analysis::ImageOutcome::correct);
  py::class_<analysis::PolicyRow>(m, "PolicyRow")
      .def_readonly("policy", &analysis::PolicyRow::policy)
      .def_readonly("accuracy", &analysis::PolicyRow::accuracy)
      .def_readonly("delta", &analysis::PolicyRow::delta)
      .def_readonly("outcomes", &analysis::PolicyRow::outcomes);
  py::class_<analysis::PerturbationReport>(m, "PerturbationReport")
      .def_readonly("rows", &analysis::PerturbationReport::rows);
  m.def("run_perturbation_study",
        [](const std::vector<analysis::LabeledImage>& items, const eva::WeightBundle& w,
           const eva::GlimpseConfig& gcfg, const eva::EvaConfig& ecfg,
           const std::vector<std::string>& policies_text, std::uint64_t seed, int jobs) {
          std::vector<policies::PolicyKind> kinds;
          for (const std::string& t : policies_text) kinds.push_back(policies::PolicyKind::parse(t));
          return analysis::run_perturbation_study(items, w, gcfg, ecfg, kinds, seed, jobs);
        },
        py::arg("items"), py::arg("weights"), py::arg("glimpse") = eva::GlimpseConfig{},
        py::arg("config") = eva::EvaConfig{},
        py::arg("policies") = std::vector<std::string>{"predicted", "center", "corner:tr",
                                                       "random", "shuffled"},
        py::arg("seed") = 0, py::arg("jobs") = 1);

  py::class_<analysis::PcaResult::Point>(m, "PcaPoint")
      .def_readonly("label", &analysis::PcaResult::Point::label)
      .def_readonly("step", &analysis::PcaResult::Point::step)
      .def_readonly("p1", &analysis::PcaResult::Point::p1)
      .def_readonly("p2", &analysis::PcaResult::Point::p2);
  py::class_<analysis::PcaResult>(m, "PcaResult")
      .def_readonly("pc1", &analysis::PcaResult::pc1)
      .def_readonly("pc2", &analysis::PcaResult::pc2)
      .def_readonly("ev1", &analysis::PcaResult::ev1)
      .def_readonly("ev2", &analysis::PcaResult::ev2)
      .def_readonly("projected", &analysis::PcaResult::projected);
  m.def("pca_trajectories", &analysis::pca_trajectories, py::arg("states"), py::arg("labels"));

  py::class_<analysis::InitCondition>(m, "InitCondition")
      .def(py::init([](std::string name, std::optional<std::pair<double, double>> loc0_px,
                       std::optional<double> sigma1, double state_fill) {
             return analysis::InitCondition{std::move(name), loc0_px, sigma1, state_fill};
           }),
           py::arg("name"), py::arg("loc0_px") = std::nullopt, py::arg("sigma1") = std::nullopt,
           py::arg("state_fill") = 0.0)
      .def_readwrite("name", &analysis::InitCondition::name)
      .def_readwrite("loc0_px", &analysis::InitCondition::loc0_px)
      .def_readwrite("sigma1", &analysis::InitCondition::sigma1)
      .def_readwrite("state_fill", &analysis::InitCondition::state_fill);
  py::class_<analysis::InitSweepRow>(m, "InitSweepRow")
      .def_readonly("name", &analysis::InitSweepRow::name)
      .def_readonly("first_step_amplitude", &analysis::InitSweepRow::first_step_amplitude)
      .def_readonly("spatial_coverage", &analysis::InitSweepRow::spatial_coverage)
      .def_readonly("accuracy", &analysis::InitSweepRow::accuracy)
      .def("__repr__", [](const analysis::InitSweepRow& r) {
        return "InitSweepRow(" + r.name + ")";
      });
  py::class_<analysis::InitSweepReport>(m, "InitSweepReport")
      .def_readonly("rows", &analysis::InitSweepReport::rows);
  m.def("init_sweep", &analysis::init_sweep, py::arg("items"), py::arg("weights"),
        py::arg("glimpse") = eva::GlimpseConfig{}, py::arg("config") = eva::EvaConfig{},
        py::arg("conditions") = std::vector<analysis::InitCondition>{},
        py::arg("seed") = 0, py::arg("jobs") = 1);

  // fixtures
  m.def("synth_corpus", &synth::synth_corpus, py::arg("seed"), py::arg("n_images"),
        py::arg("out_dir"));
}
