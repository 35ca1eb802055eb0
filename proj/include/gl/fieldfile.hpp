#pragma once

#include "gl/field.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace gl {

/// Binary field container: magic "GLF1", version u32, mesh level u32,
/// vertex count u64, metadata length u32 + UTF-8 JSON, then little-endian
/// f64 payload (re block, im block). Round trips bitwise.
struct FieldFile {
  std::uint32_t version = 1;
  std::uint32_t mesh_level = 0;
  nlohmann::json metadata;  // kappa, beta, ell, space, seed, energy
  ComplexField field;
};

void write_field_file(const std::string& path, const FieldFile& f);
FieldFile read_field_file(const std::string& path);

}  // namespace gl
