#pragma once

#include <string>
#include <vector>

#include "sdelab/cli/config.hpp"

namespace sdelab {

struct Preset {
  std::string name;
  std::string description;
  ModelBlock model;
};

const std::vector<Preset>& builtin_presets();
/// nullptr when unknown.
const Preset* find_preset(const std::string& name);
/// One line per preset: "name  description".
std::string list_presets();

/// The model block with its preset (if any) filled in under the explicit
/// keys. Throws ValidationError for an unknown preset, listing known ones.
ModelBlock resolve_model(const ModelBlock& model);

}  // namespace sdelab
