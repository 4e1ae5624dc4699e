#include "relwalk/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

namespace relwalk {

namespace {

constexpr char kMagic[4] = {'R', 'W', 'L', 'K'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
  std::ofstream out;

  explicit Writer(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw std::runtime_error("cannot open checkpoint \"" + path + "\" for writing");
  }
  void bytes(const void* p, std::size_t n) { out.write(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void str_list(const std::vector<std::string>& v) {
    u64(v.size());
    for (const auto& s : v) str(s);
  }
  void doubles(const std::vector<double>& v) {
    u64(v.size());
    bytes(v.data(), v.size() * sizeof(double));
  }
};

struct Reader {
  std::ifstream in;
  std::string path;

  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw std::runtime_error("cannot open checkpoint \"" + p + "\"");
  }
  void fail(const std::string& what) {
    throw std::runtime_error("checkpoint \"" + path + "\": " + what);
  }
  void bytes(void* p, std::size_t n) {
    in.read(static_cast<char*>(p), n);
    if (std::size_t(in.gcount()) != n) fail("truncated file");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, sizeof v);
    return v;
  }
  std::string str() {
    std::string s(u64(), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  std::vector<std::string> str_list() {
    std::vector<std::string> v(u64());
    for (auto& s : v) s = str();
    return v;
  }
  std::vector<double> doubles() {
    std::vector<double> v(u64());
    bytes(v.data(), v.size() * sizeof(double));
    return v;
  }
};

}  // namespace

void save_checkpoint(const std::string& path, ModelParams& params) {
  Writer w(path);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.str(params.config.serialize());
  w.str_list(params.vocab.raw_words());
  w.str_list(params.vocab.types());
  w.str_list(params.vocab.relation_types());
  w.u64(params.vocab.position_clip());

  const auto named = params.named_parameters();
  w.u64(named.size());
  for (const auto& [name, tensor] : named) {
    w.str(name);
    w.u64(tensor->shape.size());
    for (std::size_t d : tensor->shape) w.u64(d);
    w.doubles(tensor->values);
  }
  if (!w.out) throw std::runtime_error("checkpoint \"" + path + "\": write failed");
}

ModelParams load_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) r.fail("not a model checkpoint");
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    r.fail("unsupported version " + std::to_string(version));

  const TrainConfig config = TrainConfig::parse(r.str());
  auto words = r.str_list();
  auto types = r.str_list();
  auto relations = r.str_list();
  const std::size_t clip = r.u64();
  Vocabulary vocab = Vocabulary::from_parts(std::move(words), std::move(types),
                                            std::move(relations), clip);

  // Allocate with the right shapes, then overwrite every value from the file.
  Rng scratch(0);
  ModelParams params = ModelParams::init(config, std::move(vocab), scratch);

  std::map<std::string, Tensor*> by_name;
  for (auto& [name, tensor] : params.named_parameters()) by_name[name] = tensor;

  const std::uint64_t count = r.u64();
  if (count != by_name.size())
    r.fail("expected " + std::to_string(by_name.size()) + " tensors, found " +
           std::to_string(count));
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::string name = r.str();
    auto it = by_name.find(name);
    if (it == by_name.end()) r.fail("unexpected tensor \"" + name + "\"");
    std::vector<std::size_t> shape(r.u64());
    for (auto& d : shape) d = r.u64();
    if (shape != it->second->shape) r.fail("tensor \"" + name + "\" has the wrong shape");
    auto values = r.doubles();
    if (values.size() != it->second->values.size())
      r.fail("tensor \"" + name + "\" has the wrong element count");
    it->second->values = std::move(values);
  }
  return params;
}

}  // namespace relwalk
