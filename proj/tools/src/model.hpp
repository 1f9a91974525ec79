#pragma once

#include <map>
#include <optional>
#include <string>

#include <symtherm/symtherm.hpp>

namespace symtherm::cli {

/// Parsed model file. Potentials keep their file names.
struct Model {
  Sft sft;
  std::map<std::string, Potential> potentials;
  std::optional<AffineIfs> ifs;
  std::optional<std::string> gibbs;
  std::string hash;  // FNV-1a of the file bytes
};

Model load_model(const std::string& path);
Model parse_model(const std::string& text);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace symtherm::cli
