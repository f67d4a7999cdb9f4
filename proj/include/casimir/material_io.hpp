#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "casimir/dispersion.hpp"

namespace casimir {

// One material as parsed from disk, with the provenance that run outputs
// stamp next to every result column.
struct MaterialFile {
    MaterialModel model = MaterialModel::vacuum();
    std::string name;          // file stem, also installed as the model label
    std::string path;          // as handed to the loader
    std::uint64_t digest = 0;  // fnv1a_64 over the raw file bytes
};

// FNV-1a, 64 bit. Stable across platforms and runs, which is all the
// provenance stamp needs; this is not a cryptographic digest.
std::uint64_t fnv1a_64(std::string_view bytes);

// Parse the key = value material format (see README.md): a header of
// `key = value` lines selecting and parameterizing the model, '#' comments,
// and for tabulated data a CSV body introduced by a line reading `data:`.
// Unknown keys, keys invalid for the declared kind, duplicates and malformed
// numbers are all rejected with line-precise ConfigError messages; `origin`
// names the source in those messages.
MaterialModel parse_material(std::string_view text, const std::string& origin);

// Read, digest and parse one material file.
MaterialFile load_material_file(const std::string& path);

}  // namespace casimir
