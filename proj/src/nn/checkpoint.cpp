#include "walkplan/nn/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "walkplan/dfpg_io.hpp"
#include "walkplan/floorplan.hpp"

namespace walkplan::nn {

namespace {

constexpr char kMagic[8] = {'W', 'P', 'C', 'K', 'P', 'T', '0', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  std::string str(std::size_t n) { return std::string(take(n), n); }
  bool done() const { return pos_ == bytes_.size(); }

private:
  const char* take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw CheckpointError("checkpoint truncated");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const nlohmann::json& header, const ParamStore& params) {
  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  const std::string h = header.dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(h.size()));
  out += h;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.entries().size()));
  for (const auto& e : params.entries()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out += e.name;
    put<std::uint8_t>(out, e.trainable ? 1 : 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.tensor.shape().size()));
    for (int d : e.tensor.shape()) put<std::int32_t>(out, d);
    for (double v : e.tensor.values()) put<double>(out, v);
  }
  return out;
}

Checkpoint parse_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.str(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) throw CheckpointError("not a checkpoint file");
  if (const auto v = in.get<std::uint32_t>(); v != kVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(v));
  Checkpoint ckpt;
  ckpt.header = nlohmann::json::parse(in.str(in.get<std::uint32_t>()));
  const auto count = in.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name = in.str(in.get<std::uint32_t>());
    const bool trainable = in.get<std::uint8_t>() != 0;
    Shape shape(in.get<std::uint32_t>());
    for (int& d : shape) d = in.get<std::int32_t>();
    std::vector<double> values(numel(shape));
    for (double& v : values) v = in.get<double>();
    ckpt.params.add(std::move(name), std::move(shape), std::move(values), trainable);
  }
  if (!in.done()) throw CheckpointError("trailing bytes after checkpoint");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const nlohmann::json& header, const ParamStore& params) {
  write_text_file(path, serialize_checkpoint(header, params));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return parse_checkpoint(read_text_file(path)); }

nlohmann::json checkpoint_header(const EncDec& model) { return {{"kind", "encdec"}, {"config", to_json(model.config())}}; }
nlohmann::json checkpoint_header(const EccNet& model) { return {{"kind", "ecc"}, {"config", to_json(model.config())}}; }

EncDec encdec_from_checkpoint(Checkpoint ckpt) {
  if (ckpt.header.value("kind", "") != "encdec") throw CheckpointError("checkpoint does not hold an encoder-decoder");
  return EncDec(encdec_config_from_json(ckpt.header.at("config")), std::move(ckpt.params));
}

EccNet ecc_from_checkpoint(Checkpoint ckpt) {
  if (ckpt.header.value("kind", "") != "ecc") throw CheckpointError("checkpoint does not hold a graph network");
  return EccNet(ecc_config_from_json(ckpt.header.at("config")), std::move(ckpt.params));
}

std::string checkpoint_id(const std::string& bytes) { return fnv1a_hex(bytes); }

}  // namespace walkplan::nn
