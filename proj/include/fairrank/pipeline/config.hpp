#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fairrank::pipeline {

// Configuration documents are YAML restricted to one level of nesting:
// a top-level key maps to a scalar, a list of scalars, or a section whose
// keys map to scalars or lists.

using ConfigScalar = std::string;
using ConfigList = std::vector<std::string>;
using SectionValue = std::variant<ConfigScalar, ConfigList>;
using ConfigSection = std::map<std::string, SectionValue>;
using ConfigValue = std::variant<ConfigScalar, ConfigList, ConfigSection>;
using ConfigMap = std::map<std::string, ConfigValue>;

/// Throws ConfigError naming `origin` on malformed YAML or deeper nesting.
ConfigMap parse_config(std::string_view text, std::string_view origin = "<config>");

/// Throws IoError when the file cannot be read.
ConfigMap load_config(const std::filesystem::path& path);

/// `over` wins key by key. Sections present on both sides merge key by key;
/// everything else, lists included, is replaced whole.
ConfigMap merge(const ConfigMap& base, const ConfigMap& over);

/// Deterministic YAML rendering (keys in sorted order) that parses back to
/// the same map.
std::string dump_config(const ConfigMap& config);

}  // namespace fairrank::pipeline
