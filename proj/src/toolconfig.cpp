#include "scanpath/toolconfig.hpp"

#include <cstdlib>
#include <stdexcept>

#include "json.hpp"
#include "scanpath/io_util.hpp"
#include "scanpath/version.hpp"

namespace scanpath {

void ToolConfig::apply_env() {
  if (const char* env = std::getenv("SCANPATH_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("SCANPATH_SEED must be an unsigned integer");
    }
  }
}

void ToolConfig::load_file(const std::string& path) {
  std::string section;
  std::size_t lineno = 0;
  for (const auto& raw : read_lines(path)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    apply(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  finalize();
}

namespace {

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": " + value);
  }
}

}  // namespace

void ToolConfig::apply(const std::string& section, const std::string& key,
                       const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;
  if (full == "core.frame_width") frame.width = to_int(full, value);
  else if (full == "core.frame_height") frame.height = to_int(full, value);
  else if (full == "metrics.scanmatch_cols") metric.scanmatch_cols = to_int(full, value);
  else if (full == "metrics.scanmatch_rows") metric.scanmatch_rows = to_int(full, value);
  else if (full == "metrics.scanmatch_gap") metric.scanmatch_gap = to_double(full, value);
  else if (full == "metrics.scanmatch_sub_scale") metric.scanmatch_sub_scale = to_double(full, value);
  else if (full == "metrics.nss_sigma") metric.nss_sigma = to_double(full, value);
  else if (full == "metrics.auc_negatives") metric.auc_negatives = to_int(full, value);
  else if (full == "gcs.lambda") gcs.lambda = to_double(full, value);
  else if (full == "gcs.tau") gcs.tau = to_double(full, value);
  else if (full == "gcs.eps") gcs.eps = to_double(full, value);
  else if (full == "gcs.coverage_cols") gcs.coverage_cols = to_int(full, value);
  else if (full == "gcs.coverage_rows") gcs.coverage_rows = to_int(full, value);
  else if (full == "gcs.collapse_radius") gcs.collapse_radius = to_double(full, value);
  else if (full == "eva.fovea_size") glimpse.fovea_size = to_int(full, value);
  else if (full == "eva.periphery_size") glimpse.periphery_size = to_int(full, value);
  else if (full == "eva.steps") glimpse.steps = to_int(full, value);
  else if (full == "eva.sigma_min") eva.sigma_min = to_double(full, value);
  else if (full == "eva.sigma_max") eva.sigma_max = to_double(full, value);
  else if (full == "eva.alpha_gain") eva.alpha_gain = to_double(full, value);
  else if (full == "eva.tau_long") eva.tau_long = to_double(full, value);
  else if (full == "eva.tau_short") eva.tau_short = to_double(full, value);
  else if (full == "eva.gamma") eva.gamma = to_double(full, value);
  else if (full == "eva.eps_relay") eva.eps_relay = to_double(full, value);
  else if (full == "eva.lambda_cost") eva.lambda_cost = to_double(full, value);
  else if (full == "eva.lambda_l1") eva.lambda_l1 = to_double(full, value);
  else if (full == "eva.lambda_entropy") eva.lambda_entropy = to_double(full, value);
  else if (full == "eva.reg_eps") eva.reg_eps = to_double(full, value);
  else if (full == "eva.channels") dims.channels = to_int(full, value);
  else if (full == "eva.periphery_feat") dims.periphery_feat = to_int(full, value);
  else if (full == "eva.h1") dims.h1 = to_int(full, value);
  else if (full == "eva.h2") dims.h2 = to_int(full, value);
  else if (full == "eva.attn") dims.attn = to_int(full, value);
  else if (full == "eva.classes") dims.classes = to_int(full, value);
  else if (full == "cli.seed") seed = std::stoull(value);
  else if (full == "cli.jobs") jobs = to_int(full, value);
  else throw std::invalid_argument("config: unknown key " + full);
}

void ToolConfig::finalize() {
  if (!frame.valid()) throw std::invalid_argument("config: invalid reference frame");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  metric.rng_seed = seed;
  gcs.metric = metric;
  dims.fovea_size = glimpse.fovea_size;
  dims.periphery_size = glimpse.periphery_size;
}

std::vector<std::pair<std::string, std::string>> ToolConfig::resolved() const {
  auto d = [](double v) { return fmt_double(v); };
  return {
      {"version", SCANPATH_VERSION},
      {"core.frame_width", std::to_string(frame.width)},
      {"core.frame_height", std::to_string(frame.height)},
      {"metrics.scanmatch_cols", std::to_string(metric.scanmatch_cols)},
      {"metrics.scanmatch_rows", std::to_string(metric.scanmatch_rows)},
      {"metrics.scanmatch_gap", d(metric.scanmatch_gap)},
      {"metrics.scanmatch_sub_scale", d(metric.scanmatch_sub_scale)},
      {"metrics.nss_sigma", d(metric.nss_sigma)},
      {"metrics.auc_negatives", std::to_string(metric.auc_negatives)},
      {"gcs.lambda", d(gcs.lambda)},
      {"gcs.tau", d(gcs.tau)},
      {"gcs.eps", d(gcs.eps)},
      {"gcs.coverage_cols", std::to_string(gcs.coverage_cols)},
      {"gcs.coverage_rows", std::to_string(gcs.coverage_rows)},
      {"gcs.collapse_radius", d(gcs.collapse_radius)},
      {"eva.fovea_size", std::to_string(glimpse.fovea_size)},
      {"eva.periphery_size", std::to_string(glimpse.periphery_size)},
      {"eva.steps", std::to_string(glimpse.steps)},
      {"eva.sigma_min", d(eva.sigma_min)},
      {"eva.sigma_max", d(eva.sigma_max)},
      {"eva.alpha_gain", d(eva.alpha_gain)},
      {"eva.tau_long", d(eva.tau_long)},
      {"eva.tau_short", d(eva.tau_short)},
      {"eva.gamma", d(eva.gamma)},
      {"eva.eps_relay", d(eva.eps_relay)},
      {"eva.lambda_cost", d(eva.lambda_cost)},
      {"eva.lambda_l1", d(eva.lambda_l1)},
      {"eva.lambda_entropy", d(eva.lambda_entropy)},
      {"eva.reg_eps", d(eva.reg_eps)},
      {"eva.channels", std::to_string(dims.channels)},
      {"eva.periphery_feat", std::to_string(dims.periphery_feat)},
      {"eva.h1", std::to_string(dims.h1)},
      {"eva.h2", std::to_string(dims.h2)},
      {"eva.attn", std::to_string(dims.attn)},
      {"eva.classes", std::to_string(dims.classes)},
      {"cli.seed", std::to_string(seed)},
      {"cli.jobs", std::to_string(jobs)},
  };
}

std::string ToolConfig::echo_comments() const {
  std::string out = "# scanpath_toolkit " SCANPATH_VERSION "\n";
  for (const auto& [k, v] : resolved()) {
    if (k == "version") continue;
    out += "# " + k + "=" + v + "\n";
  }
  return out;
}

std::string ToolConfig::echo_json() const {
  nlohmann::json j;
  for (const auto& [k, v] : resolved()) j[k] = v;
  return j.dump();
}

}  // namespace scanpath
