#include "hagmn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hagmn {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr char kHex[] = "0123456789abcdef";

std::string encode_doubles(const std::vector<double>& v) {
  std::string out;
  out.reserve(v.size() * 16);
  for (double d : v) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int s = 60; s >= 0; s -= 4) out.push_back(kHex[(bits >> s) & 0xf]);
  }
  return out;
}

std::vector<double> decode_doubles(const std::string& hex) {
  if (hex.size() % 16 != 0) throw std::runtime_error("checkpoint: bad hex payload");
  std::vector<double> out(hex.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < 16; ++k) {
      const char c = hex[i * 16 + k];
      std::uint64_t nib;
      if (c >= '0' && c <= '9') nib = static_cast<std::uint64_t>(c - '0');
      else if (c >= 'a' && c <= 'f') nib = static_cast<std::uint64_t>(c - 'a' + 10);
      else throw std::runtime_error("checkpoint: bad hex digit");
      bits = (bits << 4) | nib;
    }
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

ordered_json dump_tensor(const DenseMatrix& m) {
  ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["hex"] = encode_doubles(m.data);
  return j;
}

DenseMatrix parse_tensor(const json& j) {
  DenseMatrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = decode_doubles(j.at("hex").get<std::string>());
  if (m.data.size() != m.rows * m.cols)
    throw std::runtime_error("checkpoint: tensor payload does not match shape");
  return m;
}

ordered_json dump_config(const ModelConfig& c) {
  ordered_json j;
  j["d"] = c.d;
  j["hidden"] = c.hidden;
  j["n_mp"] = c.n_mp;
  j["heads"] = c.heads;
  j["tied_rounds"] = c.tied_rounds;
  j["literal_attention"] = c.literal_attention;
  j["use_egt"] = c.use_egt;
  j["use_vgt"] = c.use_vgt;
  j["use_rowcol"] = c.use_rowcol;
  j["rowcol_in_vgt"] = c.rowcol_in_vgt;
  j["seed"] = c.seed;
  return j;
}

ModelConfig parse_config(const json& j) {
  ModelConfig c;
  c.d = j.at("d").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.n_mp = j.at("n_mp").get<int>();
  c.heads = j.at("heads").get<int>();
  c.tied_rounds = j.at("tied_rounds").get<bool>();
  c.literal_attention = j.at("literal_attention").get<bool>();
  c.use_egt = j.at("use_egt").get<bool>();
  c.use_vgt = j.at("use_vgt").get<bool>();
  c.use_rowcol = j.at("use_rowcol").get<bool>();
  c.rowcol_in_vgt = j.at("rowcol_in_vgt").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  ordered_json j;
  j["schema"] = "hagmn-ckpt/1";
  j["config"] = dump_config(ckpt.params.cfg);
  j["epoch"] = ckpt.epoch;
  ordered_json tensors;  // preserves the named_tensors order
  auto& mutable_params = const_cast<ModelParams&>(ckpt.params);
  for (const NamedTensor& t : mutable_params.named_tensors())
    tensors[t.name] = dump_tensor(*t.tensor);
  j["tensors"] = std::move(tensors);
  if (ckpt.adam_config) {
    ordered_json a;
    a["lr"] = ckpt.adam_config->lr;
    a["beta1"] = ckpt.adam_config->beta1;
    a["beta2"] = ckpt.adam_config->beta2;
    a["epsilon"] = ckpt.adam_config->epsilon;
    a["step_count"] = ckpt.adam_step_count;
    ordered_json moments;
    for (const auto& [name, mv] : ckpt.adam_moments) {
      moments[name + ".m"] = dump_tensor(mv.first);
      moments[name + ".v"] = dump_tensor(mv.second);
    }
    a["moments"] = std::move(moments);
    j["adam"] = std::move(a);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(1) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  json j;
  in >> j;
  if (!j.contains("schema") || j["schema"] != "hagmn-ckpt/1")
    throw std::runtime_error(path.string() + ": not a hagmn-ckpt/1 file");
  Checkpoint ckpt;
  ckpt.params = ModelParams::init(parse_config(j.at("config")));
  ckpt.epoch = j.value("epoch", 0);
  const auto& tensors = j.at("tensors");
  for (const NamedTensor& t : ckpt.params.named_tensors()) {
    if (!tensors.contains(t.name))
      throw std::runtime_error("checkpoint: missing tensor " + t.name);
    DenseMatrix loaded = parse_tensor(tensors.at(t.name));
    if (!loaded.same_shape(*t.tensor))
      throw std::runtime_error("checkpoint: shape mismatch for " + t.name);
    *t.tensor = std::move(loaded);
  }
  if (j.contains("adam")) {
    const auto& a = j.at("adam");
    AdamConfig ac;
    ac.lr = a.at("lr").get<double>();
    ac.beta1 = a.at("beta1").get<double>();
    ac.beta2 = a.at("beta2").get<double>();
    ac.epsilon = a.at("epsilon").get<double>();
    ckpt.adam_config = ac;
    ckpt.adam_step_count = a.at("step_count").get<std::size_t>();
    for (const NamedTensor& t : ckpt.params.named_tensors()) {
      const auto& moments = a.at("moments");
      if (moments.contains(t.name + ".m"))
        ckpt.adam_moments[t.name] = {parse_tensor(moments.at(t.name + ".m")),
                                     parse_tensor(moments.at(t.name + ".v"))};
    }
  }
  return ckpt;
}

}  // namespace hagmn
