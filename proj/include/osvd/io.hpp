#pragma once

#include "osvd/decomposition.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace osvd {

// OT3 binary tensor format:
//   bytes 0..3   magic "OT3\0"
//   bytes 4..15  I1, I2, I3 as little-endian uint32
//   then         I1*I2*I3 little-endian IEEE-754 doubles in storage order
// (mode-1 fastest).
std::vector<std::uint8_t> encode_ot3(const Tensor3& t);
Tensor3 decode_ot3(std::span<const std::uint8_t> bytes);

void write_ot3(const Tensor3& t, const std::filesystem::path& path);
Tensor3 read_ot3(const std::filesystem::path& path);

// Writes bytes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Factor directory layout:
//   manifest.json  {"format": "osvd-factors", "version": 1, "dims": [I1,I2,I3],
//                   "k1": k1, "k2": [...], "sigma3": [...], "files": {...},
//                   "extra": <caller JSON>}
//   u3.ot3         U3 stored as an I3 x k1 x 1 tensor
//   ufaces.ot3, sfaces.ot3, vfaces.ot3
// `extra_json` must be a JSON document (or empty for null); it is stored verbatim
// under "extra" so callers can record how the factors were produced.
inline constexpr const char* kFactorManifestName = "manifest.json";
void save_factors(const OsvdFactors& f, const std::filesystem::path& dir, const std::string& extra_json = {});
OsvdFactors load_factors(const std::filesystem::path& dir);
// The "extra" member of a saved manifest, serialized (or "null").
std::string load_factor_extra(const std::filesystem::path& dir);

} // namespace osvd
