#include "prexsyn/engine/shard.hpp"

#include <cstring>
#include <fstream>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::engine {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > data.size()) throw IoError("shard truncated");
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<unsigned char>(data[pos]) |
                      (static_cast<unsigned char>(data[pos + 1]) << 8);
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
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i]))
              << (8 * i);
    pos += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data.substr(pos, n);
    pos += n;
    return s;
  }
};

std::string encode_record(const TrainingSample& s) {
  using props::PropertyType;
  std::string out;
  out.push_back(static_cast<char>(s.prompt.type));
  switch (s.prompt.type) {
    case PropertyType::FpStruct:
    case PropertyType::FpPharm: {
      put_u32(out, static_cast<std::uint32_t>(s.prompt.fp.bits()));
      for (auto w : s.prompt.fp.words())
        for (int i = 0; i < 8; ++i)
          out.push_back(static_cast<char>((w >> (8 * i)) & 0xff));
      break;
    }
    case PropertyType::Fragments:
    case PropertyType::Substruct: {
      put_u32(out, static_cast<std::uint32_t>(s.prompt.frags.ids.size()));
      for (auto id : s.prompt.frags.ids) put_u32(out, id);
      break;
    }
    case PropertyType::Descriptors: {
      for (double v : s.prompt.desc.as_array()) put_f64(out, v);
      break;
    }
  }
  put_u32(out, static_cast<std::uint32_t>(s.program.tokens.size()));
  for (const auto& t : s.program.tokens) {
    out.push_back(static_cast<char>(t.type));
    put_u32(out, static_cast<std::uint32_t>(t.id));
  }
  put_u32(out, static_cast<std::uint32_t>(s.product.size()));
  out += s.product;
  return out;
}

TrainingSample decode_record(Reader& r) {
  using props::PropertyType;
  TrainingSample s;
  r.need(1);
  auto type = static_cast<PropertyType>(r.data[r.pos++]);
  s.prompt.type = type;
  switch (type) {
    case PropertyType::FpStruct:
    case PropertyType::FpPharm: {
      int bits = static_cast<int>(r.u32());
      props::Fingerprint fp(type == PropertyType::FpStruct
                                ? props::FpKind::Struct
                                : props::FpKind::Pharm,
                            bits);
      for (auto& w : fp.words()) {
        r.need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
          v |= static_cast<std::uint64_t>(
                   static_cast<unsigned char>(r.data[r.pos + i]))
               << (8 * i);
        r.pos += 8;
        w = v;
      }
      s.prompt.fp = std::move(fp);
      break;
    }
    case PropertyType::Fragments:
    case PropertyType::Substruct: {
      std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i)
        s.prompt.frags.ids.push_back(r.u32());
      break;
    }
    case PropertyType::Descriptors: {
      auto& d = s.prompt.desc;
      d.mw = r.f64();
      d.hac = static_cast<int>(r.f64());
      d.hbd = static_cast<int>(r.f64());
      d.hba = static_cast<int>(r.f64());
      d.rotb = static_cast<int>(r.f64());
      d.tpsa = r.f64();
      d.clogp = r.f64();
      d.rings = static_cast<int>(r.f64());
      d.arom_rings = static_cast<int>(r.f64());
      break;
    }
    default:
      throw IoError("shard record has unknown prompt type");
  }
  std::uint32_t n_tokens = r.u32();
  for (std::uint32_t i = 0; i < n_tokens; ++i) {
    r.need(1);
    auto tt = static_cast<synth::TokenType>(r.data[r.pos++]);
    auto id = static_cast<int>(r.u32());
    if (tt != synth::TokenType::BB && tt != synth::TokenType::RXN)
      throw IoError("shard record has invalid token type");
    s.program.tokens.push_back({tt, id});
  }
  std::uint32_t len = r.u32();
  s.product = r.bytes(len);
  return s;
}

}  // namespace

void write_shard(const std::vector<TrainingSample>& samples,
                 const std::filesystem::path& path) {
  std::string out;
  out.append(kShardMagic, 4);
  put_u16(out, kShardVersion);
  for (const auto& s : samples) {
    std::string record = encode_record(s);
    put_u32(out, static_cast<std::uint32_t>(record.size()));
    out += record;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write shard " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for shard " + path.string());
}

std::vector<TrainingSample> read_shard(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open shard " + path.string());
  std::string data((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  Reader r{data};
  if (data.size() < 6 || std::memcmp(data.data(), kShardMagic, 4) != 0)
    throw IoError("not a shard file: " + path.string());
  r.pos = 4;
  std::uint16_t version = r.u16();
  if (version != kShardVersion)
    throw IoError("shard version mismatch: got " + std::to_string(version));
  std::vector<TrainingSample> samples;
  while (r.pos < data.size()) {
    std::uint32_t len = r.u32();
    std::size_t end = r.pos + len;
    if (end > data.size()) throw IoError("shard truncated");
    samples.push_back(decode_record(r));
    if (r.pos != end) throw IoError("shard record size mismatch");
  }
  return samples;
}

}  // namespace prexsyn::engine
