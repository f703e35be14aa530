#include "scanpath/eva/weights.hpp"

#include <cstring>
#include <stdexcept>

#include "scanpath/io_util.hpp"
#include "scanpath/rng.hpp"

namespace scanpath {
namespace eva {

namespace {

void shape_cell(CellParams& cell, int state, int input) {
  cell.wf = Eigen::MatrixXd::Zero(state, input);
  cell.uf = Eigen::MatrixXd::Zero(state, state);
  cell.bf = Eigen::VectorXd::Zero(state);
  cell.wo = Eigen::MatrixXd::Zero(state, input);
  cell.uo = Eigen::MatrixXd::Zero(state, state);
  cell.bo = Eigen::VectorXd::Zero(state);
  cell.wz = Eigen::MatrixXd::Zero(state, input);
  cell.uz = Eigen::MatrixXd::Zero(state, state);
  cell.bz = Eigen::VectorXd::Zero(state);
}

void validate_dims(const EvaDims& d) {
  if (d.channels != 1 && d.channels != 3)
    throw std::invalid_argument("weights: channels must be 1 or 3");
  if (d.fovea_size < 1 || d.periphery_size < d.fovea_size)
    throw std::invalid_argument("weights: need 1 <= fovea_size <= periphery_size");
  if (d.periphery_feat < 1 || d.h1 < 1 || d.h2 < 1 || d.attn < 1 || d.classes < 2)
    throw std::invalid_argument("weights: non-positive dimension");
}

}  // namespace

WeightBundle allocate_weights(const EvaDims& dims) {
  validate_dims(dims);
  WeightBundle w;
  w.dims = dims;
  int in_c = dims.channels;
  for (std::size_t i = 0; i < w.fovea.size(); ++i) {
    ConvLayer& layer = w.fovea[i];
    layer.in_c = in_c;
    layer.out_c = kFoveaWidths[i];
    layer.w.assign(static_cast<std::size_t>(layer.out_c) * layer.in_c * 9, 0.0);
    layer.b.assign(static_cast<std::size_t>(layer.out_c), 0.0);
    in_c = layer.out_c;
  }
  const int peri_in = dims.fovea_size * dims.fovea_size * dims.channels + 2;
  w.peri_w = Eigen::MatrixXd::Zero(dims.periphery_feat, peri_in);
  w.peri_b = Eigen::VectorXd::Zero(dims.periphery_feat);
  shape_cell(w.lower, dims.h1, EvaDims::fovea_feat + dims.periphery_feat);
  shape_cell(w.upper, dims.h2, 2 * dims.h2);
  w.loc_w = Eigen::MatrixXd::Zero(2, dims.h1);
  w.loc_b = Eigen::VectorXd::Zero(2);
  w.act_w = Eigen::MatrixXd::Zero(dims.classes, dims.h2);
  w.act_b = Eigen::VectorXd::Zero(dims.classes);
  w.base_w = Eigen::MatrixXd::Zero(1, dims.h2);
  w.base_b = Eigen::VectorXd::Zero(1);
  w.gate_td_w = Eigen::MatrixXd::Zero(dims.h2, dims.h2);
  w.gate_td_b = Eigen::VectorXd::Zero(dims.h2);
  w.gate_bu_w = Eigen::MatrixXd::Zero(dims.h2, dims.h1);
  w.gate_bu_b = Eigen::VectorXd::Zero(dims.h2);
  w.attn_q = Eigen::MatrixXd::Zero(dims.attn, dims.h2);
  w.attn_k = Eigen::MatrixXd::Zero(dims.attn, dims.h1 + EvaDims::fovea_feat);
  w.attn_v = Eigen::MatrixXd::Zero(dims.h2, dims.h1 + EvaDims::fovea_feat);
  return w;
}

namespace {

BlockRef vec_block(const std::string& name, std::vector<double>& v,
                   std::vector<std::uint64_t> shape) {
  std::size_t count = 1;
  for (const auto s : shape) count *= s;
  return BlockRef{name, std::move(shape), count,
                  [&v](std::size_t i) { return v[i]; },
                  [&v](std::size_t i, double x) { v[i] = x; }};
}

BlockRef mat_block(const std::string& name, Eigen::MatrixXd& m) {
  const auto cols = static_cast<std::size_t>(m.cols());
  return BlockRef{name,
                  {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())},
                  static_cast<std::size_t>(m.size()),
                  [&m, cols](std::size_t i) {
                    return m(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols));
                  },
                  [&m, cols](std::size_t i, double x) {
                    m(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols)) = x;
                  }};
}

BlockRef evec_block(const std::string& name, Eigen::VectorXd& v) {
  return BlockRef{name,
                  {static_cast<std::uint64_t>(v.size())},
                  static_cast<std::size_t>(v.size()),
                  [&v](std::size_t i) { return v(static_cast<Eigen::Index>(i)); },
                  [&v](std::size_t i, double x) { v(static_cast<Eigen::Index>(i)) = x; }};
}

void cell_blocks(std::vector<BlockRef>& out, const std::string& prefix, CellParams& c) {
  out.push_back(mat_block(prefix + ".wf", c.wf));
  out.push_back(mat_block(prefix + ".uf", c.uf));
  out.push_back(evec_block(prefix + ".bf", c.bf));
  out.push_back(mat_block(prefix + ".wo", c.wo));
  out.push_back(mat_block(prefix + ".uo", c.uo));
  out.push_back(evec_block(prefix + ".bo", c.bo));
  out.push_back(mat_block(prefix + ".wz", c.wz));
  out.push_back(mat_block(prefix + ".uz", c.uz));
  out.push_back(evec_block(prefix + ".bz", c.bz));
}

}  // namespace

std::vector<BlockRef> weight_blocks(WeightBundle& w) {
  std::vector<BlockRef> out;
  for (std::size_t i = 0; i < w.fovea.size(); ++i) {
    ConvLayer& layer = w.fovea[i];
    const std::string base = "fovea.conv" + std::to_string(i + 1);
    out.push_back(vec_block(base + ".w", layer.w,
                            {static_cast<std::uint64_t>(layer.out_c),
                             static_cast<std::uint64_t>(layer.in_c), 3, 3}));
    out.push_back(vec_block(base + ".b", layer.b, {static_cast<std::uint64_t>(layer.out_c)}));
  }
  out.push_back(mat_block("peri.w", w.peri_w));
  out.push_back(evec_block("peri.b", w.peri_b));
  cell_blocks(out, "lower", w.lower);
  cell_blocks(out, "upper", w.upper);
  out.push_back(mat_block("loc.w", w.loc_w));
  out.push_back(evec_block("loc.b", w.loc_b));
  out.push_back(mat_block("act.w", w.act_w));
  out.push_back(evec_block("act.b", w.act_b));
  out.push_back(mat_block("base.w", w.base_w));
  out.push_back(evec_block("base.b", w.base_b));
  out.push_back(mat_block("gate.td.w", w.gate_td_w));
  out.push_back(evec_block("gate.td.b", w.gate_td_b));
  out.push_back(mat_block("gate.bu.w", w.gate_bu_w));
  out.push_back(evec_block("gate.bu.b", w.gate_bu_b));
  out.push_back(mat_block("attn.q", w.attn_q));
  out.push_back(mat_block("attn.k", w.attn_k));
  out.push_back(mat_block("attn.v", w.attn_v));
  return out;
}

WeightBundle init_weights(const EvaDims& dims, std::uint64_t seed) {
  WeightBundle w = allocate_weights(dims);
  Rng rng(hash_seed(seed, "weights"));
  for (auto& block : weight_blocks(w)) {
    for (std::size_t i = 0; i < block.count; ++i) {
      const double v = rng.uniform(-0.05, 0.05);
      block.set(i, static_cast<double>(static_cast<float>(v)));
    }
  }
  return w;
}

namespace {

constexpr char kMagic[5] = {'E', 'V', 'A', 'W', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  put_u32(out, u);
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("weight file parse error at offset " + std::to_string(pos) +
                                ": " + what);
  }
  void need(std::size_t n) const {
    if (data.size() - pos < n) fail("unexpected end of file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  float f32() {
    const std::uint32_t u = u32();
    float f;
    std::memcpy(&f, &u, 4);
    return f;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s = data.substr(pos, n);
    pos += n;
    return s;
  }
};

const std::vector<std::pair<std::string, std::int64_t>> dims_meta(const EvaDims& d) {
  return {{"channels", d.channels},       {"fovea_size", d.fovea_size},
          {"periphery_size", d.periphery_size}, {"periphery_feat", d.periphery_feat},
          {"h1", d.h1},                   {"h2", d.h2},
          {"attn", d.attn},               {"classes", d.classes}};
}

}  // namespace

void save_weights(const WeightBundle& w, const std::string& path) {
  std::string out(kMagic, sizeof(kMagic));
  const auto meta = dims_meta(w.dims);
  put_u32(out, static_cast<std::uint32_t>(meta.size()));
  for (const auto& [key, value] : meta) {
    put_u32(out, static_cast<std::uint32_t>(key.size()));
    out += key;
    put_u64(out, static_cast<std::uint64_t>(value));
  }
  auto& mutable_w = const_cast<WeightBundle&>(w);  // blocks only read here
  auto blocks = weight_blocks(mutable_w);
  put_u32(out, static_cast<std::uint32_t>(blocks.size()));
  for (const auto& block : blocks) {
    put_u32(out, static_cast<std::uint32_t>(block.name.size()));
    out += block.name;
    put_u32(out, static_cast<std::uint32_t>(block.shape.size()));
    for (const auto s : block.shape) put_u64(out, s);
    for (std::size_t i = 0; i < block.count; ++i)
      put_f32(out, static_cast<float>(block.get(i)));
  }
  atomic_write_file(path, out);
}

WeightBundle load_weights(const std::string& path) {
  const std::string data = read_file(path);
  Reader r{data};
  if (r.str(5) != std::string(kMagic, sizeof(kMagic)))
    throw std::invalid_argument("weight file: bad magic in " + path);

  EvaDims dims;
  const std::uint32_t n_meta = r.u32();
  std::vector<std::pair<std::string, std::int64_t>> meta;
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    const std::string key = r.str(r.u32());
    const auto value = static_cast<std::int64_t>(r.u64());
    meta.emplace_back(key, value);
  }
  auto meta_int = [&](const std::string& key) -> int {
    for (const auto& [k, v] : meta)
      if (k == key) return static_cast<int>(v);
    throw std::invalid_argument("weight file: missing dimension '" + key + "' in " + path);
  };
  dims.channels = meta_int("channels");
  dims.fovea_size = meta_int("fovea_size");
  dims.periphery_size = meta_int("periphery_size");
  dims.periphery_feat = meta_int("periphery_feat");
  dims.h1 = meta_int("h1");
  dims.h2 = meta_int("h2");
  dims.attn = meta_int("attn");
  dims.classes = meta_int("classes");

  WeightBundle w = allocate_weights(dims);
  auto blocks = weight_blocks(w);
  const std::uint32_t n_blocks = r.u32();
  if (n_blocks != blocks.size())
    throw std::invalid_argument("weight file: expected " + std::to_string(blocks.size()) +
                                " blocks, found " + std::to_string(n_blocks) + " in " + path);
  for (auto& block : blocks) {
    const std::string name = r.str(r.u32());
    if (name != block.name)
      throw std::invalid_argument("weight file: expected block '" + block.name + "', found '" +
                                  name + "' in " + path);
    const std::uint32_t ndims = r.u32();
    std::vector<std::uint64_t> shape(ndims);
    for (auto& s : shape) s = r.u64();
    if (shape != block.shape)
      throw std::invalid_argument("weight file: dimension mismatch in block '" + name + "' of " +
                                  path);
    for (std::size_t i = 0; i < block.count; ++i) {
      const float f = r.f32();
      if (!std::isfinite(f))
        throw std::invalid_argument("weight file: non-finite value in block '" + name + "' of " +
                                    path);
      block.set(i, static_cast<double>(f));
    }
  }
  if (r.pos != data.size())
    throw std::invalid_argument("weight file: trailing bytes after blocks in " + path);
  return w;
}

bool weights_equal(const WeightBundle& a, const WeightBundle& b) {
  if (!(a.dims == b.dims)) return false;
  auto& ma = const_cast<WeightBundle&>(a);
  auto& mb = const_cast<WeightBundle&>(b);
  auto ba = weight_blocks(ma);
  auto bb = weight_blocks(mb);
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (ba[i].count != bb[i].count) return false;
    for (std::size_t j = 0; j < ba[i].count; ++j)
      if (ba[i].get(j) != bb[i].get(j)) return false;
  }
  return true;
}

}  // namespace eva
}  // namespace scanpath
