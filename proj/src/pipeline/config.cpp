#include "fairrank/pipeline/config.hpp"

#include <yaml-cpp/yaml.h>

#include "fairrank/errors.hpp"
#include "fairrank/ingest/text_table.hpp"

namespace fairrank::pipeline {

namespace {

std::string where(std::string_view origin, const YAML::Node& node) {
  const auto mark = node.Mark();
  std::string out(origin);
  if (mark.line >= 0) out += ":" + std::to_string(mark.line + 1);
  return out;
}

std::string scalar(const YAML::Node& node, std::string_view origin) {
  if (!node.IsScalar()) throw ConfigError(where(origin, node) + ": expected a scalar");
  return node.Scalar();
}

ConfigList list(const YAML::Node& node, std::string_view origin) {
  ConfigList out;
  for (const auto& item : node) out.push_back(scalar(item, origin));
  return out;
}

}  // namespace

ConfigMap parse_config(std::string_view text, std::string_view origin) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  ConfigMap out;
  if (root.IsNull()) return out;
  if (!root.IsMap()) throw ConfigError(std::string(origin) + ": top level must be a mapping");
  for (const auto& kv : root) {
    const std::string key = scalar(kv.first, origin);
    const YAML::Node& value = kv.second;
    if (value.IsNull()) {
      out[key] = ConfigScalar{};
    } else if (value.IsScalar()) {
      out[key] = value.Scalar();
    } else if (value.IsSequence()) {
      out[key] = list(value, origin);
    } else {
      ConfigSection section;
      for (const auto& inner : value) {
        const std::string name = scalar(inner.first, origin);
        const YAML::Node& v = inner.second;
        if (v.IsSequence()) {
          section[name] = list(v, origin);
        } else if (v.IsMap()) {
          throw ConfigError(where(origin, v) + ": '" + key + "." + name + "' nests too deeply");
        } else {
          section[name] = v.IsNull() ? std::string() : v.Scalar();
        }
      }
      out[key] = std::move(section);
    }
  }
  return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::string text;
  for (const auto& line : ingest::read_lines(path)) text += line + "\n";
  return parse_config(text, path.string());
}

ConfigMap merge(const ConfigMap& base, const ConfigMap& over) {
  ConfigMap out = base;
  for (const auto& [key, value] : over) {
    auto it = out.find(key);
    const auto* incoming = std::get_if<ConfigSection>(&value);
    auto* existing = it == out.end() ? nullptr : std::get_if<ConfigSection>(&it->second);
    if (incoming && existing) {
      for (const auto& [k, v] : *incoming) (*existing)[k] = v;
    } else {
      out[key] = value;
    }
  }
  return out;
}

namespace {

void emit(YAML::Emitter& out, const SectionValue& v) {
  if (const auto* s = std::get_if<ConfigScalar>(&v)) {
    out << YAML::DoubleQuoted << *s;
  } else {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& x : std::get<ConfigList>(v)) out << YAML::DoubleQuoted << x;
    out << YAML::EndSeq;
  }
}

}  // namespace

std::string dump_config(const ConfigMap& config) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  for (const auto& [key, value] : config) {
    out << YAML::Key << key << YAML::Value;
    if (const auto* section = std::get_if<ConfigSection>(&value)) {
      out << YAML::BeginMap;
      for (const auto& [k, v] : *section) {
        out << YAML::Key << k << YAML::Value;
        emit(out, v);
      }
      out << YAML::EndMap;
    } else if (const auto* s = std::get_if<ConfigScalar>(&value)) {
      emit(out, *s);
    } else {
      emit(out, std::get<ConfigList>(value));
    }
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fairrank::pipeline
