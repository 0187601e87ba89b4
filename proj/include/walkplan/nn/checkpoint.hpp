#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "walkplan/nn/ecc.hpp"
#include "walkplan/nn/encdec.hpp"
#include "walkplan/nn/params.hpp"

namespace walkplan::nn {

/// Binary checkpoint: magic "WPCKPT01", u32 version, u32-length JSON header
/// ({"kind", "config", ...}), u32 tensor count, then per tensor: name,
/// trainable flag, dims and little-endian float64 values.
struct Checkpoint {
  nlohmann::json header;
  ParamStore params;
};

class CheckpointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string serialize_checkpoint(const nlohmann::json& header, const ParamStore& params);
Checkpoint parse_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const nlohmann::json& header, const ParamStore& params);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Header carries kind "encdec" or "ecc" plus the model config.
nlohmann::json checkpoint_header(const EncDec& model);
nlohmann::json checkpoint_header(const EccNet& model);
EncDec encdec_from_checkpoint(Checkpoint ckpt);
EccNet ecc_from_checkpoint(Checkpoint ckpt);

/// Content id (FNV-1a of the serialized bytes) used in provenance records.
std::string checkpoint_id(const std::string& bytes);

}  // namespace walkplan::nn
