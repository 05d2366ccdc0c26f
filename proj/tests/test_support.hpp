#pragma once

#include "lexc/parser.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lexc::testing {

inline std::filesystem::path source_dir() { return LEXC_SOURCE_DIR; }
inline std::filesystem::path corpus_dir() { return source_dir() / "corpus"; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline ContractAst parse_file(const std::filesystem::path& path) { return parse(read_text(path)); }

inline Scenario scenario_file(const std::filesystem::path& path) { return parse_scenario(read_text(path)); }

}  // namespace lexc::testing
