#include "scanpath/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scanpath/analysis.hpp"
#include "scanpath/core.hpp"
#include "scanpath/eva/losses.hpp"
#include "scanpath/eva/rollout.hpp"
#include "scanpath/eva/weights.hpp"
#include "scanpath/gcs.hpp"
#include "scanpath/image.hpp"
#include "scanpath/ingest.hpp"
#include "scanpath/io_util.hpp"
#include "scanpath/metrics.hpp"
#include "scanpath/policies.hpp"
#include "scanpath/rng.hpp"
#include "scanpath/synth.hpp"
#include "scanpath/toolconfig.hpp"
#include "scanpath/version.hpp"

namespace fs = std::filesystem;

namespace scanpath {
namespace cli {
namespace {

// Flags shared by every subcommand. Precedence over config file and env is
// resolved in make_config.
struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string frame_text;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* frame_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Config file of [section] headers and key = value lines");
  c.seed_opt = sub->add_option("--seed", c.seed, "Root seed (overrides config file and SCANPATH_SEED)");
  c.jobs_opt = sub->add_option("--jobs", c.jobs, "Worker threads; results keep input order regardless");
  c.frame_opt = sub->add_option("--frame", c.frame_text, "Reference frame as WxH (default 224x224)");
}

ReferenceFrame parse_frame(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= text.size())
    throw std::invalid_argument("frame must be WxH, got: " + text);
  ReferenceFrame f;
  try {
    f.width = std::stoi(text.substr(0, x));
    f.height = std::stoi(text.substr(x + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("frame must be WxH, got: " + text);
  }
  if (!f.valid()) throw std::invalid_argument("frame sides must be positive: " + text);
  return f;
}

ToolConfig make_config(const Common& c) {
  ToolConfig cfg;
  cfg.apply_env();
  if (!c.config_path.empty()) cfg.load_file(c.config_path);
  if (c.seed_opt && c.seed_opt->count() > 0) cfg.seed = c.seed;
  if (c.jobs_opt && c.jobs_opt->count() > 0) cfg.jobs = c.jobs;
  if (c.frame_opt && c.frame_opt->count() > 0) cfg.frame = parse_frame(c.frame_text);
  cfg.finalize();
  return cfg;
}

// CSV reading for the tool's own outputs and fixture files: '#' comment
// lines are skipped, the first remaining line must equal `header`.
std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& header) {
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  for (const auto& raw : read_lines(path)) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != header)
        throw std::invalid_argument(path + ": expected header '" + header + "', got '" + line + "'");
      seen_header = true;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  if (!seen_header) throw std::invalid_argument(path + ": missing header '" + header + "'");
  return rows;
}

std::map<std::string, int> read_labels(const std::string& path) {
  std::map<std::string, int> labels;
  for (const auto& row : read_csv(path, "image_id,label")) {
    if (row.size() != 2) throw std::invalid_argument(path + ": label rows need 2 fields");
    labels[row[0]] = std::stoi(row[1]);
  }
  return labels;
}

bool has_image_extension(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

// All image files directly inside dir, sorted by filename so every run
// enumerates them in the same order.
std::vector<fs::path> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && has_image_extension(entry.path())) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

fs::path find_image(const std::string& dir, const std::string& id) {
  for (const char* ext : {".ppm", ".png", ".pgm"}) {
    fs::path p = fs::path(dir) / (id + ext);
    if (fs::exists(p)) return p;
  }
  throw std::invalid_argument("no image named " + id + ".{ppm,png,pgm} in " + dir);
}

std::vector<analysis::LabeledImage> load_labeled_images(const std::string& image_dir,
                                                        const std::string& labels_path) {
  std::vector<analysis::LabeledImage> items;
  for (const auto& [id, label] : read_labels(labels_path)) {
    analysis::LabeledImage item;
    item.image_id = id;
    item.image = read_image(find_image(image_dir, id).string());
    item.label = label;
    items.push_back(std::move(item));
  }
  if (items.empty()) throw std::invalid_argument(labels_path + ": no labeled images");
  return items;
}

// Keyed scanpath lookup; the first path per image_id wins.
std::map<std::string, Scanpath> index_by_id(const std::vector<Scanpath>& paths) {
  std::map<std::string, Scanpath> by_id;
  for (const auto& sp : paths) by_id.emplace(sp.image_id, sp);
  return by_id;
}

Scanpath to_frame(const Scanpath& sp, const ReferenceFrame& frame) {
  if (sp.frame == frame) return sp;
  return normalize_scanpath(sp, sp.frame, frame);
}

eva::WeightBundle resolve_weights(const std::string& weights_path,
                                  const CLI::Option* init_seed_opt, std::uint64_t init_seed,
                                  const ToolConfig& cfg) {
  if (!weights_path.empty()) {
    if (init_seed_opt && init_seed_opt->count() > 0)
      throw std::invalid_argument("--weights and --init-seed are mutually exclusive");
    return eva::load_weights(weights_path);
  }
  const std::uint64_t s = (init_seed_opt && init_seed_opt->count() > 0) ? init_seed : cfg.seed;
  return eva::init_weights(cfg.dims, s);
}

// Override path for a rollout driven by a fixed policy instead of the
// location head. `predicted` supplies the fixations that `shuffled` permutes.
Scanpath policy_override(const policies::PolicyKind& kind, const ReferenceFrame& frame,
                         int steps, const Scanpath& predicted, std::uint64_t seed,
                         int fovea_size) {
  using V = policies::PolicyKind::Variant;
  switch (kind.variant) {
    case V::center_fixed: return policies::center_fixed(frame, steps);
    case V::corner_fixed:
      return policies::corner_fixed(frame, steps, kind.corner, fovea_size / 2.0);
    case V::random_uniform: return policies::random_uniform(frame, steps, hash_seed(seed, "random"));
    case V::shuffled: return policies::shuffled(predicted, hash_seed(seed, "shuffle"));
    case V::predicted: break;
  }
  throw std::logic_error("policy_override: predicted has no override path");
}

std::string quad_csv(const gcs::MetricQuad& q) {
  return fmt_double(q.dtw) + "," + fmt_double(q.scanmatch) + "," + fmt_double(q.nss) + "," +
         fmt_double(q.auc);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// ---- subcommand bodies ----

struct ExtractOpts {
  Common common;
  std::string manifest, trace, id, out, trace_frame_text;
  double radius = 15.0;
  int length = 12;
};

void cmd_extract(const ExtractOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  if (o.manifest.empty() == o.trace.empty())
    throw std::invalid_argument("exactly one of --manifest or --trace is required");
  const ReferenceFrame trace_frame =
      o.trace_frame_text.empty() ? cfg.frame : parse_frame(o.trace_frame_text);

  std::vector<std::pair<std::string, std::string>> jobs_list;  // (trace path, image_id)
  if (!o.manifest.empty()) {
    const fs::path base = fs::path(o.manifest).parent_path();
    for (const auto& row : read_csv(o.manifest, "trace_file,image_file")) {
      if (row.size() != 2) throw std::invalid_argument(o.manifest + ": manifest rows need 2 fields");
      jobs_list.emplace_back((base / row[0]).string(), fs::path(row[1]).stem().string());
    }
  } else {
    jobs_list.emplace_back(o.trace, o.id.empty() ? fs::path(o.trace).stem().string() : o.id);
  }

  std::vector<Scanpath> out(jobs_list.size());
  std::vector<int> padded(jobs_list.size(), 0);
  parallel_for(jobs_list.size(), cfg.jobs, [&](std::size_t i) {
    const GazeTrace trace = read_gaze_trace(jobs_list[i].first);
    std::vector<Fixation> fx = idt_fixations(trace, o.radius);
    if (o.length > 0) {
      auto fit = fit_length(fx, o.length);
      fx = std::move(fit.fixations);
      padded[i] = fit.padded ? 1 : 0;
    }
    Scanpath sp;
    sp.image_id = jobs_list[i].second;
    sp.source = Source::human;
    sp.frame = trace_frame;
    sp.fixations = std::move(fx);
    out[i] = clamp_to_frame(to_frame(sp, cfg.frame), cfg.frame);
  });

  write_scanpaths_jsonl(o.out, out, cfg.echo_json());
  int n_padded = 0;
  for (int p : padded) n_padded += p;
  std::cout << "wrote " << out.size() << " scanpaths to " << o.out;
  if (n_padded > 0) std::cout << " (" << n_padded << " padded to length " << o.length << ")";
  std::cout << "\n";
}

struct AlignOpts {
  Common common;
  std::string index, queries, labels, out, save_index;
};

void cmd_align(const AlignOpts& o) {
  const ToolConfig cfg = make_config(o.common);

  HashIndex index;
  if (fs::is_directory(o.index)) {
    std::map<std::string, int> labels;
    if (!o.labels.empty()) labels = read_labels(o.labels);
    for (const auto& file : list_images(o.index)) {
      HashIndexEntry entry;
      entry.hash = phash(read_image(file.string()));
      entry.image_id = file.stem().string();
      if (auto it = labels.find(entry.image_id); it != labels.end())
        entry.label = std::to_string(it->second);
      index.entries.push_back(std::move(entry));
    }
    if (index.entries.empty()) throw std::invalid_argument(o.index + ": no images to index");
  } else {
    index = read_hash_index(o.index);
  }
  if (!o.save_index.empty()) {
    std::vector<std::string> meta;
    meta.push_back("scanpath_toolkit " + std::string(SCANPATH_VERSION));
    meta.push_back("seed=" + std::to_string(cfg.seed));
    write_hash_index(o.save_index, index, meta);
  }

  std::vector<fs::path> queries;
  if (fs::is_directory(o.queries)) queries = list_images(o.queries);
  else queries.push_back(o.queries);
  if (queries.empty()) throw std::invalid_argument(o.queries + ": no query images");

  std::vector<MatchResult> results(queries.size());
  parallel_for(queries.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = match_image(read_image(queries[i].string()), index);
  });

  std::string csv = cfg.echo_comments();
  csv += "query,image_id,distance,exact\n";
  int exact = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    csv += queries[i].stem().string() + "," + results[i].image_id + "," +
           std::to_string(results[i].distance) + "," + (results[i].exact ? "1" : "0") + "\n";
    exact += results[i].exact ? 1 : 0;
  }
  atomic_write_file(o.out, csv);
  std::cout << "matched " << queries.size() << " queries against " << index.entries.size()
            << " entries (" << exact << " exact) -> " << o.out << "\n";
}

struct MetricsOpts {
  Common common;
  std::string model, human, out;
};

void cmd_metrics(const MetricsOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  const std::vector<Scanpath> model_paths = read_scanpaths_jsonl(o.model);
  const auto humans = index_by_id(read_scanpaths_jsonl(o.human));
  if (model_paths.empty()) throw std::invalid_argument(o.model + ": no scanpaths");

  std::vector<std::string> rows(model_paths.size());
  parallel_for(model_paths.size(), cfg.jobs, [&](std::size_t i) {
    const Scanpath model = to_frame(model_paths[i], cfg.frame);
    const auto it = humans.find(model.image_id);
    if (it == humans.end())
      throw std::invalid_argument("no human scanpath for image_id " + model.image_id);
    const Scanpath human = to_frame(it->second, cfg.frame);
    const DensityGrid density = metrics::density_grid({human}, cfg.frame, cfg.metric.nss_sigma);
    const metrics::RawMetrics m = metrics::raw_metrics(model, human, density, cfg.metric);
    rows[i] = model.image_id + "," + fmt_double(m.dtw) + "," + fmt_double(m.scanmatch) + "," +
              fmt_double(m.nss) + "," + fmt_double(m.auc) + "\n";
  });

  std::string csv = cfg.echo_comments();
  csv += "image_id,dtw,scanmatch,nss,auc\n";
  for (const auto& r : rows) csv += r;
  atomic_write_file(o.out, csv);
  std::cout << "wrote " << rows.size() << " metric rows to " << o.out << "\n";
}

struct GcsOpts {
  Common common;
  std::string model, human, upper_ref, out;
  double lambda = 0.0, tau = 0.0;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
};

void cmd_gcs(const GcsOpts& o) {
  ToolConfig cfg = make_config(o.common);
  if (o.lambda_opt->count() > 0) cfg.gcs.lambda = o.lambda;
  if (o.tau_opt->count() > 0) cfg.gcs.tau = o.tau;

  const std::vector<Scanpath> model_paths = read_scanpaths_jsonl(o.model);
  const auto humans = index_by_id(read_scanpaths_jsonl(o.human));
  std::map<std::string, Scanpath> uppers;
  const bool external_upper = !o.upper_ref.empty();
  if (external_upper) uppers = index_by_id(read_scanpaths_jsonl(o.upper_ref));
  if (model_paths.empty()) throw std::invalid_argument(o.model + ": no scanpaths");

  std::vector<std::string> rows(model_paths.size());
  parallel_for(model_paths.size(), cfg.jobs, [&](std::size_t i) {
    const Scanpath model = to_frame(model_paths[i], cfg.frame);
    const auto it = humans.find(model.image_id);
    if (it == humans.end())
      throw std::invalid_argument("no human scanpath for image_id " + model.image_id);
    const Scanpath human = to_frame(it->second, cfg.frame);
    const int n = static_cast<int>(model.size());

    gcs::GcsRefInputs refs;
    if (external_upper) {
      const auto up = uppers.find(model.image_id);
      if (up == uppers.end())
        throw std::invalid_argument("no upper reference for image_id " + model.image_id);
      refs.human_ref = to_frame(up->second, cfg.frame);
    } else {
      refs.human_ref = human;
    }
    refs.corner_ref = policies::corner_fixed(cfg.frame, n, policies::Corner::TR,
                                             cfg.glimpse.fovea_size / 2.0);
    refs.center_ref = policies::center_fixed(cfg.frame, n);

    const DensityGrid density = metrics::density_grid({human}, cfg.frame, cfg.metric.nss_sigma);
    gcs::GcsReport r = gcs::compute_gcs(model, human, density, refs, cfg.gcs);
    r.upper_mode = external_upper ? "external" : "self";

    rows[i] = model.image_id + "," + fmt_double(r.gcs) + "," + fmt_double(r.raw.dtw) + "," +
              fmt_double(r.raw.scanmatch) + "," + fmt_double(r.raw.nss) + "," +
              fmt_double(r.raw.auc) + "," + quad_csv(r.normalized) + "," +
              quad_csv(r.normalized_center) + "," + quad_csv(r.debiased) + "," +
              fmt_double(r.movement_distance) + "," + fmt_double(r.movement_similarity) + "," +
              r.upper_mode + "," + join(r.warnings, "|") + "\n";
  });

  std::string csv = cfg.echo_comments();
  csv +=
      "image_id,gcs,dtw,scanmatch,nss,auc,"
      "norm_dtw,norm_scanmatch,norm_nss,norm_auc,"
      "center_dtw,center_scanmatch,center_nss,center_auc,"
      "deb_dtw,deb_scanmatch,deb_nss,deb_auc,"
      "movement_distance,movement_similarity,upper_mode,warnings\n";
  for (const auto& r : rows) csv += r;
  atomic_write_file(o.out, csv);
  std::cout << "wrote " << rows.size() << " calibrated score rows to " << o.out << "\n";
}

struct DensityOpts {
  Common common;
  std::string in, out, image_id;
  double sigma = 0.0;
  bool zscore = false;
  CLI::Option* sigma_opt = nullptr;
};

void cmd_density(const DensityOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  const double sigma = o.sigma_opt->count() > 0 ? o.sigma : cfg.metric.nss_sigma;

  std::vector<Scanpath> paths;
  for (const auto& sp : read_scanpaths_jsonl(o.in))
    if (o.image_id.empty() || sp.image_id == o.image_id) paths.push_back(to_frame(sp, cfg.frame));
  if (paths.empty()) throw std::invalid_argument(o.in + ": no scanpaths selected");

  DensityGrid g = metrics::density_grid(paths, cfg.frame, sigma);
  if (o.zscore) {
    double mean = 0.0;
    for (double v : g.values) mean += v;
    mean /= static_cast<double>(g.values.size());
    double var = 0.0;
    for (double v : g.values) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(g.values.size()));
    if (sd == 0.0) throw std::invalid_argument("density: zero-variance grid cannot be z-scored");
    for (double& v : g.values) v = (v - mean) / sd;
    g.flags = DensityGrid::zscored;
  }

  write_density_grid(o.out, g,
                     {"version=" SCANPATH_VERSION, "seed=" + std::to_string(cfg.seed),
                      "sigma=" + fmt_double(sigma), "paths=" + std::to_string(paths.size())});
  std::cout << "wrote " << g.frame.width << "x" << g.frame.height << " density grid ("
            << paths.size() << " scanpaths) to " << o.out << "\n";
}

struct RolloutOpts {
  Common common;
  std::string image, weights, out, scanpath_out, policy = "predicted";
  std::uint64_t init_seed = 0;
  int label = -1;
  int steps = 0;
  CLI::Option* init_seed_opt = nullptr;
  CLI::Option* label_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
};

void cmd_rollout(const RolloutOpts& o) {
  ToolConfig cfg = make_config(o.common);
  if (o.steps_opt->count() > 0) cfg.glimpse.steps = o.steps;
  const eva::WeightBundle w = resolve_weights(o.weights, o.init_seed_opt, o.init_seed, cfg);
  const ImageFrame img = read_image(o.image);
  const std::string image_id = fs::path(o.image).stem().string();
  const std::optional<int> label =
      o.label_opt->count() > 0 ? std::optional<int>(o.label) : std::nullopt;

  const policies::PolicyKind kind = policies::PolicyKind::parse(o.policy);
  eva::RolloutTrace trace;
  if (kind.variant == policies::PolicyKind::Variant::predicted) {
    trace = eva::rollout(img, w, cfg.glimpse, cfg.eva, cfg.seed, label, nullptr, nullptr, image_id,
                         kind.name());
  } else {
    const ReferenceFrame img_frame{img.width, img.height};
    const eva::RolloutTrace predicted = eva::rollout(img, w, cfg.glimpse, cfg.eva, cfg.seed, label,
                                                     nullptr, nullptr, image_id, "predicted");
    const Scanpath ov = policy_override(kind, img_frame, cfg.glimpse.steps, predicted.scanpath(),
                                        cfg.seed, cfg.glimpse.fovea_size);
    trace = eva::rollout(img, w, cfg.glimpse, cfg.eva, cfg.seed, label, &ov, nullptr, image_id,
                         kind.name());
  }

  atomic_write_file(o.out, eva::trace_to_json(trace, cfg.echo_json()) + "\n");
  if (!o.scanpath_out.empty())
    write_scanpaths_jsonl(o.scanpath_out, {trace.scanpath()}, cfg.echo_json());
  std::cout << "policy " << trace.policy << " predicted class " << trace.predicted;
  if (label) std::cout << (trace.predicted == *label ? " (correct)" : " (wrong)");
  std::cout << " after " << trace.steps.size() << " glimpses -> " << o.out << "\n";
}

struct PerturbOpts {
  Common common;
  std::string in, out, policy;
};

void cmd_perturb(const PerturbOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  const policies::PolicyKind kind = policies::PolicyKind::parse(o.policy);

  std::vector<Scanpath> out;
  for (const auto& sp : read_scanpaths_jsonl(o.in)) {
    const std::uint64_t path_seed = hash_seed(cfg.seed, "perturb/" + sp.image_id);
    Scanpath replaced;
    if (kind.variant == policies::PolicyKind::Variant::predicted) {
      replaced = sp;
    } else {
      replaced = policy_override(kind, sp.frame, static_cast<int>(sp.size()), sp, path_seed,
                                 cfg.glimpse.fovea_size);
    }
    replaced.image_id = sp.image_id;
    out.push_back(std::move(replaced));
  }
  if (out.empty()) throw std::invalid_argument(o.in + ": no scanpaths");

  write_scanpaths_jsonl(o.out, out, cfg.echo_json());
  std::cout << "rewrote " << out.size() << " scanpaths under policy " << kind.name() << " -> "
            << o.out << "\n";
}

struct StudyOpts {
  Common common;
  std::string images, labels, weights, out, per_image;
  std::string policies_list = "predicted,center,corner:tr,random,shuffled";
  std::uint64_t init_seed = 0;
  CLI::Option* init_seed_opt = nullptr;
};

void cmd_perturb_study(const StudyOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  const eva::WeightBundle w = resolve_weights(o.weights, o.init_seed_opt, o.init_seed, cfg);
  const auto items = load_labeled_images(o.images, o.labels);

  std::vector<policies::PolicyKind> kinds;
  bool has_predicted = false;
  for (const auto& name : split(o.policies_list, ',')) {
    kinds.push_back(policies::PolicyKind::parse(trim(name)));
    has_predicted |= kinds.back().variant == policies::PolicyKind::Variant::predicted;
  }
  if (!has_predicted)
    kinds.insert(kinds.begin(), policies::PolicyKind{});  // deltas are relative to predicted

  const analysis::PerturbationReport report =
      analysis::run_perturbation_study(items, w, cfg.glimpse, cfg.eva, kinds, cfg.seed, cfg.jobs);

  std::string csv = cfg.echo_comments();
  csv += "policy,accuracy,delta,n\n";
  for (const auto& row : report.rows)
    csv += row.policy + "," + fmt_double(row.accuracy) + "," + fmt_double(row.delta) + "," +
           std::to_string(row.outcomes.size()) + "\n";
  atomic_write_file(o.out, csv);

  if (!o.per_image.empty()) {
    std::string detail = cfg.echo_comments();
    detail += "policy,image_id,predicted,correct\n";
    for (const auto& row : report.rows)
      for (const auto& oc : row.outcomes)
        detail += row.policy + "," + oc.image_id + "," + std::to_string(oc.predicted) + "," +
                  (oc.correct ? "1" : "0") + "\n";
    atomic_write_file(o.per_image, detail);
  }

  std::cout << "policy accuracies over " << items.size() << " images:\n";
  for (const auto& row : report.rows)
    std::cout << "  " << row.policy << ": " << fmt_double(row.accuracy) << " (delta "
              << fmt_double(row.delta) << ")\n";
  std::cout << "wrote " << o.out << "\n";
}

struct PcaOpts {
  Common common;
  std::string traces, out, layer = "upper";
};

void cmd_pca(const PcaOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  if (o.layer != "lower" && o.layer != "upper")
    throw std::invalid_argument("--layer must be lower or upper, got: " + o.layer);

  std::vector<fs::path> files;
  if (!fs::is_directory(o.traces)) throw std::invalid_argument("not a directory: " + o.traces);
  for (const auto& entry : fs::directory_iterator(o.traces))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::invalid_argument(o.traces + ": no trace .json files");

  std::vector<std::vector<Eigen::VectorXd>> states;
  std::vector<int> labels;
  for (const auto& file : files) {
    const eva::RolloutTrace trace = eva::trace_from_json(read_file(file.string()));
    if (!trace.label)
      throw std::invalid_argument(file.string() + ": trace has no label; class-wise "
                                  "trajectories need labeled traces");
    std::vector<Eigen::VectorXd> per_step;
    for (const auto& step : trace.steps) per_step.push_back(o.layer == "lower" ? step.h1 : step.h2);
    states.push_back(std::move(per_step));
    labels.push_back(*trace.label);
  }

  const analysis::PcaResult pca = analysis::pca_trajectories(states, labels);

  std::string csv = cfg.echo_comments();
  csv += "# layer=" + o.layer + "\n";
  csv += "# ev1=" + fmt_double(pca.ev1) + "\n";
  csv += "# ev2=" + fmt_double(pca.ev2) + "\n";
  csv += "label,step,p1,p2\n";
  for (const auto& p : pca.projected)
    csv += std::to_string(p.label) + "," + std::to_string(p.step) + "," + fmt_double(p.p1) + "," +
           fmt_double(p.p2) + "\n";
  atomic_write_file(o.out, csv);
  std::cout << "projected " << states.size() << " " << o.layer << "-layer trajectories (ev1 "
            << fmt_double(pca.ev1) << ", ev2 " << fmt_double(pca.ev2) << ") -> " << o.out << "\n";
}

struct SweepOpts {
  Common common;
  std::string images, labels, weights, conditions, out;
  std::uint64_t init_seed = 0;
  CLI::Option* init_seed_opt = nullptr;
};

std::vector<analysis::InitCondition> default_conditions(const ToolConfig& cfg) {
  std::vector<analysis::InitCondition> conds;
  conds.push_back({"default", std::nullopt, std::nullopt, 0.0});
  const double inset = cfg.glimpse.fovea_size / 2.0;
  conds.push_back({"corner-start", std::make_pair(inset, inset), std::nullopt, 0.0});
  conds.push_back({"low-sigma", std::nullopt, cfg.eva.sigma_min, 0.0});
  conds.push_back({"filled-state", std::nullopt, std::nullopt, 1.0});
  return conds;
}

std::vector<analysis::InitCondition> read_conditions(const std::string& path) {
  std::vector<analysis::InitCondition> conds;
  for (const auto& row : read_csv(path, "name,loc0_x,loc0_y,sigma1,state_fill")) {
    if (row.size() != 5) throw std::invalid_argument(path + ": condition rows need 5 fields");
    analysis::InitCondition c;
    c.name = row[0];
    if (row[1].empty() != row[2].empty())
      throw std::invalid_argument(path + ": loc0_x and loc0_y must be set together");
    if (!row[1].empty()) c.loc0_px = std::make_pair(std::stod(row[1]), std::stod(row[2]));
    if (!row[3].empty()) c.sigma1 = std::stod(row[3]);
    if (!row[4].empty()) c.state_fill = std::stod(row[4]);
    conds.push_back(std::move(c));
  }
  if (conds.empty()) throw std::invalid_argument(path + ": no conditions");
  return conds;
}

void cmd_init_sweep(const SweepOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  const eva::WeightBundle w = resolve_weights(o.weights, o.init_seed_opt, o.init_seed, cfg);
  const auto items = load_labeled_images(o.images, o.labels);
  const auto conds = o.conditions.empty() ? default_conditions(cfg) : read_conditions(o.conditions);

  const analysis::InitSweepReport report =
      analysis::init_sweep(items, w, cfg.glimpse, cfg.eva, conds, cfg.seed, cfg.jobs);

  std::string csv = cfg.echo_comments();
  csv += "condition,first_step_amplitude,spatial_coverage,accuracy\n";
  for (const auto& row : report.rows)
    csv += row.name + "," + fmt_double(row.first_step_amplitude) + "," +
           fmt_double(row.spatial_coverage) + "," + fmt_double(row.accuracy) + "\n";
  atomic_write_file(o.out, csv);

  std::cout << "swept " << conds.size() << " initial conditions over " << items.size()
            << " images -> " << o.out << "\n";
}

struct WeightsOpts {
  Common common;
  std::string out;
};

void cmd_init_weights(const WeightsOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  eva::WeightBundle w = eva::init_weights(cfg.dims, cfg.seed);
  save_weights(w, o.out);
  std::size_t params = 0;
  for (const auto& block : eva::weight_blocks(w)) params += block.count;
  std::cout << "wrote " << params << " parameters (seed " << cfg.seed << ") to " << o.out << "\n";
}

struct CorpusOpts {
  Common common;
  std::string out;
  int n = 10;
};

void cmd_synth_corpus(const CorpusOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  const auto ids = synth::synth_corpus(cfg.seed, o.n, o.out);
  std::cout << "wrote " << ids.size() << " synthetic images, traces and scanpaths under " << o.out
            << "\n";
}

struct ConfigOpts {
  Common common;
  bool as_json = false;
};

void cmd_config(const ConfigOpts& o) {
  const ToolConfig cfg = make_config(o.common);
  if (o.as_json) std::cout << cfg.echo_json() << "\n";
  else std::cout << cfg.echo_comments();
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Scanpath metrics, calibrated gaze scoring and glimpse-model analysis"};
  app.set_version_flag("--version", std::string("scanpath_toolkit ") + SCANPATH_VERSION);
  app.require_subcommand(1);

  auto ex = std::make_shared<ExtractOpts>();
  {
    CLI::App* sub = app.add_subcommand("extract-fixations",
                                       "Cluster raw gaze traces into fixation scanpaths");
    add_common(sub, ex->common);
    sub->add_option("--manifest", ex->manifest, "CSV of trace_file,image_file (paths relative to it)");
    sub->add_option("--trace", ex->trace, "Single gaze trace CSV (x,y[,t])");
    sub->add_option("--id", ex->id, "image_id for --trace (default: file stem)");
    sub->add_option("--out", ex->out, "Output scanpath JSONL")->required();
    sub->add_option("--radius", ex->radius, "Dispersion radius in trace px (default 15)");
    sub->add_option("--length", ex->length, "Truncate/pad to this many fixations; 0 keeps all");
    sub->add_option("--trace-frame", ex->trace_frame_text,
                    "Frame the trace coordinates live in, WxH (default: --frame)");
    sub->callback([ex]() { cmd_extract(*ex); });
  }

  auto al = std::make_shared<AlignOpts>();
  {
    CLI::App* sub = app.add_subcommand("align", "Match query images to an index by perceptual hash");
    add_common(sub, al->common);
    sub->add_option("--index", al->index, "Image directory to index, or a saved index CSV")
        ->required();
    sub->add_option("--queries", al->queries, "Query image file or directory")->required();
    sub->add_option("--labels", al->labels, "Optional image_id,label CSV folded into the index");
    sub->add_option("--out", al->out, "Output match CSV")->required();
    sub->add_option("--save-index", al->save_index, "Also write the hash index to this CSV");
    sub->callback([al]() { cmd_align(*al); });
  }

  auto me = std::make_shared<MetricsOpts>();
  {
    CLI::App* sub = app.add_subcommand("metrics", "Raw scanpath metrics of model vs human paths");
    add_common(sub, me->common);
    sub->add_option("--model", me->model, "Model scanpath JSONL")->required();
    sub->add_option("--human", me->human, "Human scanpath JSONL")->required();
    sub->add_option("--out", me->out, "Output CSV")->required();
    sub->callback([me]() { cmd_metrics(*me); });
  }

  auto gc = std::make_shared<GcsOpts>();
  {
    CLI::App* sub = app.add_subcommand("gcs", "Calibrated, center-debiased gaze comparison score");
    add_common(sub, gc->common);
    sub->add_option("--model", gc->model, "Model scanpath JSONL")->required();
    sub->add_option("--human", gc->human, "Human scanpath JSONL")->required();
    sub->add_option("--upper-ref", gc->upper_ref,
                    "External upper-reference JSONL (default: the human path itself)");
    sub->add_option("--out", gc->out, "Output CSV")->required();
    gc->lambda_opt = sub->add_option("--lambda", gc->lambda, "Movement-similarity bonus weight");
    gc->tau_opt = sub->add_option("--tau", gc->tau, "Movement-similarity temperature");
    sub->callback([gc]() { cmd_gcs(*gc); });
  }

  auto de = std::make_shared<DensityOpts>();
  {
    CLI::App* sub = app.add_subcommand("density", "Fixation density grid over the reference frame");
    add_common(sub, de->common);
    sub->add_option("--in", de->in, "Scanpath JSONL")->required();
    sub->add_option("--out", de->out, "Output density grid file")->required();
    sub->add_option("--image", de->image_id, "Only pool scanpaths with this image_id");
    de->sigma_opt = sub->add_option("--sigma", de->sigma, "Gaussian kernel sigma in px");
    sub->add_flag("--zscore", de->zscore, "Write a z-scored grid instead of a probability grid");
    sub->callback([de]() { cmd_density(*de); });
  }

  auto ro = std::make_shared<RolloutOpts>();
  {
    CLI::App* sub = app.add_subcommand("rollout", "Run the glimpse model on one image");
    add_common(sub, ro->common);
    sub->add_option("--image", ro->image, "Input image (png/ppm/pgm)")->required();
    sub->add_option("--weights", ro->weights, "Weight file (default: fresh seeded weights)");
    ro->init_seed_opt =
        sub->add_option("--init-seed", ro->init_seed, "Seed for fresh weights (default: --seed)");
    sub->add_option("--out", ro->out, "Output trace JSON")->required();
    sub->add_option("--scanpath", ro->scanpath_out, "Also write the fixation view as JSONL");
    sub->add_option("--policy", ro->policy,
                    "predicted|center|corner[:tr|tl|br|bl]|random|shuffled (default predicted)");
    ro->label_opt = sub->add_option("--label", ro->label, "True class for the error signal");
    ro->steps_opt = sub->add_option("--steps", ro->steps, "Glimpses per episode");
    sub->callback([ro]() { cmd_rollout(*ro); });
  }

  auto pe = std::make_shared<PerturbOpts>();
  {
    CLI::App* sub = app.add_subcommand("perturb", "Replace scanpaths with a fixed policy's paths");
    add_common(sub, pe->common);
    sub->add_option("--in", pe->in, "Input scanpath JSONL")->required();
    sub->add_option("--policy", pe->policy,
                    "center|corner[:tr|tl|br|bl]|random|shuffled|predicted")
        ->required();
    sub->add_option("--out", pe->out, "Output scanpath JSONL")->required();
    sub->callback([pe]() { cmd_perturb(*pe); });
  }

  auto st = std::make_shared<StudyOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "perturb-study", "Accuracy of the glimpse model under replaced fixation policies");
    add_common(sub, st->common);
    sub->add_option("--images", st->images, "Directory of <image_id>.{ppm,png,pgm}")->required();
    sub->add_option("--labels", st->labels, "image_id,label CSV")->required();
    sub->add_option("--weights", st->weights, "Weight file (default: fresh seeded weights)");
    st->init_seed_opt =
        sub->add_option("--init-seed", st->init_seed, "Seed for fresh weights (default: --seed)");
    sub->add_option("--policies", st->policies_list,
                    "Comma-separated policy list (predicted is always included)");
    sub->add_option("--out", st->out, "Summary CSV (policy,accuracy,delta,n)")->required();
    sub->add_option("--per-image", st->per_image, "Optional per-image outcome CSV");
    sub->callback([st]() { cmd_perturb_study(*st); });
  }

  auto pc = std::make_shared<PcaOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "pca", "Project class-wise hidden-state trajectories onto their top-2 components");
    add_common(sub, pc->common);
    sub->add_option("--traces", pc->traces, "Directory of labeled rollout trace .json files")
        ->required();
    sub->add_option("--layer", pc->layer, "lower|upper recurrent layer (default upper)");
    sub->add_option("--out", pc->out, "Output CSV (label,step,p1,p2)")->required();
    sub->callback([pc]() { cmd_pca(*pc); });
  }

  auto sw = std::make_shared<SweepOpts>();
  {
    CLI::App* sub = app.add_subcommand(
        "init-sweep", "Sensitivity of rollouts to initial location, sigma and state");
    add_common(sub, sw->common);
    sub->add_option("--images", sw->images, "Directory of <image_id>.{ppm,png,pgm}")->required();
    sub->add_option("--labels", sw->labels, "image_id,label CSV")->required();
    sub->add_option("--weights", sw->weights, "Weight file (default: fresh seeded weights)");
    sw->init_seed_opt =
        sub->add_option("--init-seed", sw->init_seed, "Seed for fresh weights (default: --seed)");
    sub->add_option("--conditions", sw->conditions,
                    "CSV name,loc0_x,loc0_y,sigma1,state_fill (default: built-in set)");
    sub->add_option("--out", sw->out, "Output CSV")->required();
    sub->callback([sw]() { cmd_init_sweep(*sw); });
  }

  auto iw = std::make_shared<WeightsOpts>();
  {
    CLI::App* sub = app.add_subcommand("init-weights", "Write a fresh seeded weight file");
    add_common(sub, iw->common);
    sub->add_option("--out", iw->out, "Output weight file")->required();
    sub->callback([iw]() { cmd_init_weights(*iw); });
  }

  auto sc = std::make_shared<CorpusOpts>();
  {
    CLI::App* sub = app.add_subcommand("synth-corpus",
                                       "Generate a deterministic synthetic gaze corpus");
    add_common(sub, sc->common);
    sub->add_option("--out", sc->out, "Output directory")->required();
    sub->add_option("--n", sc->n, "Number of images (default 10)");
    sub->callback([sc]() { cmd_synth_corpus(*sc); });
  }

  auto co = std::make_shared<ConfigOpts>();
  {
    CLI::App* sub = app.add_subcommand("config", "Print the resolved configuration");
    add_common(sub, co->common);
    sub->add_flag("--json", co->as_json, "Print as a JSON object instead of comment lines");
    sub->callback([co]() { cmd_config(*co); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace cli
}  // namespace scanpath
