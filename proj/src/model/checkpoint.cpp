#include "prexsyn/model/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "prexsyn/util/mix.hpp"

namespace prexsyn::model {

namespace {

using nlohmann::json;

json config_to_json(const ModelConfig& cfg) {
  return json{{"layers", cfg.layers},       {"dim", cfg.dim},
              {"ff_dim", cfg.ff_dim},       {"heads", cfg.heads},
              {"max_seq", cfg.max_seq},     {"n_bb", cfg.n_bb},
              {"n_rxn", cfg.n_rxn},         {"fp_bits", cfg.fp_bits},
              {"frag_table", cfg.frag_table},
              {"sinusoidal_pos", cfg.sinusoidal_pos}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig cfg;
  cfg.layers = j.at("layers");
  cfg.dim = j.at("dim");
  cfg.ff_dim = j.at("ff_dim");
  cfg.heads = j.at("heads");
  cfg.max_seq = j.at("max_seq");
  cfg.n_bb = j.at("n_bb");
  cfg.n_rxn = j.at("n_rxn");
  cfg.fp_bits = j.at("fp_bits");
  cfg.frag_table = j.at("frag_table");
  cfg.sinusoidal_pos = j.at("sinusoidal_pos");
  return cfg;
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32_array(std::string& out, const float* data, std::size_t n) {
  static_assert(sizeof(float) == 4);
  std::size_t bytes = n * 4;
  std::size_t at = out.size();
  out.resize(at + bytes);
  std::memcpy(out.data() + at, data, bytes);
}

void put_f64_array(std::string& out, const double* data, std::size_t n) {
  std::size_t bytes = n * 8;
  std::size_t at = out.size();
  out.resize(at + bytes);
  std::memcpy(out.data() + at, data, bytes);
}

void put_section(std::string& out, const std::string& name,
                 const std::string& payload) {
  put_u32(out, static_cast<std::uint32_t>(name.size()));
  out += name;
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out += payload;
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > data.size()) throw IoError("checkpoint truncated");
  }
  std::uint16_t u16() {
    need(2);
    auto v = static_cast<std::uint16_t>(
        static_cast<unsigned char>(data[pos]) |
        (static_cast<unsigned char>(data[pos + 1]) << 8));
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i]))
           << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i]))
           << (8 * i);
    pos += 8;
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const Transformer<float>& model, const TrainState* state) {
  std::string out;
  out.append(kCheckpointMagic, 4);
  put_u16(out, kCheckpointVersion);
  std::string cfg = config_to_json(model.config()).dump();
  put_u32(out, static_cast<std::uint32_t>(cfg.size()));
  out += cfg;

  {
    std::string params;
    put_f32_array(params, model.store().data().data(),
                  model.store().size());
    put_section(out, "params", params);
  }
  if (state) {
    std::string meta;
    put_u64(meta, state->step);
    put_u64(meta, state->samples_seen);
    put_section(out, "train_meta", meta);
    std::string m;
    put_f64_array(m, state->adam_m.data(), state->adam_m.size());
    put_section(out, "adam_m", m);
    std::string v;
    put_f64_array(v, state->adam_v.data(), state->adam_v.size());
    put_section(out, "adam_v", v);
    put_section(out, "rng", state->rng_state);
  }
  put_u64(out, hash_bytes(out.data(), out.size()));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write checkpoint " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for checkpoint " + path.string());
}

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint " + path.string());
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

ModelConfig parse_header(Reader& r) {
  if (r.data.size() < 14 || std::memcmp(r.data.data(), kCheckpointMagic, 4) != 0)
    throw IoError("not a checkpoint file");
  r.pos = 4;
  std::uint16_t version = r.u16();
  if (version != kCheckpointVersion)
    throw IoError("checkpoint version mismatch: " + std::to_string(version));
  std::uint32_t cfg_len = r.u32();
  std::string cfg_json = r.bytes(cfg_len);
  return config_from_json(json::parse(cfg_json));
}

}  // namespace

ModelConfig peek_config(const std::filesystem::path& path) {
  std::string data = read_all(path);
  Reader r{data};
  return parse_header(r);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 Transformer<float>& model) {
  std::string data = read_all(path);
  if (data.size() < 8) throw IoError("checkpoint truncated");
  std::uint64_t stored_sum = 0;
  {
    Reader tail{data};
    tail.pos = data.size() - 8;
    stored_sum = tail.u64();
  }
  if (hash_bytes(data.data(), data.size() - 8) != stored_sum)
    throw IoError("checkpoint checksum mismatch");

  Reader r{data};
  LoadedCheckpoint loaded;
  loaded.config = parse_header(r);

  TrainState state;
  bool have_params = false, have_meta = false;
  const std::size_t end = data.size() - 8;
  while (r.pos < end) {
    std::uint32_t name_len = r.u32();
    std::string name = r.bytes(name_len);
    std::uint32_t payload_len = r.u32();
    std::string payload = r.bytes(payload_len);
    if (name == "params") {
      if (payload.size() != model.store().size() * 4)
        throw IoError("checkpoint parameter size mismatch");
      std::memcpy(model.store().data().data(), payload.data(),
                  payload.size());
      have_params = true;
    } else if (name == "train_meta") {
      Reader mr{payload};
      state.step = mr.u64();
      state.samples_seen = mr.u64();
      have_meta = true;
    } else if (name == "adam_m") {
      state.adam_m.resize(payload.size() / 8);
      std::memcpy(state.adam_m.data(), payload.data(), payload.size());
    } else if (name == "adam_v") {
      state.adam_v.resize(payload.size() / 8);
      std::memcpy(state.adam_v.data(), payload.data(), payload.size());
    } else if (name == "rng") {
      state.rng_state = payload;
    }
  }
  if (!have_params) throw IoError("checkpoint has no parameter section");
  if (have_meta) loaded.state = std::move(state);
  return loaded;
}

}  // namespace prexsyn::model
