// src/core/config_file.cc

// Copyright 2026  PMU Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pmu/core/config_file.h"

#include <charconv>
#include <fstream>

#include "pmu/core/error.h"

namespace pmu {

namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string &where, const std::string &text) {
  T v{};
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InputError("config: " + where + ": cannot parse '" + text + "'");
  return v;
}

}  // namespace

ConfigFile ConfigFile::Parse(std::istream &is) {
  ConfigFile cfg;
  std::string line, section;
  long long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw FormatError("config: bad section header '" + line + "'", lineno);
      section = Trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("config: expected 'key = value'", lineno);
    if (section.empty()) throw FormatError("config: key outside of a section", lineno);
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("config: empty key", lineno);
    auto [it, fresh] = cfg.sections_[section].try_emplace(key);
    if (!fresh) throw FormatError("config: duplicate key '" + section + "." + key + "'", lineno);
    it->second.value = Trim(line.substr(eq + 1));
    it->second.line = lineno;
  }
  return cfg;
}

ConfigFile ConfigFile::Load(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open config '" + path + "'");
  return Parse(is);
}

const ConfigFile::Entry *ConfigFile::Find(const std::string &section,
                                          const std::string &key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.consumed = true;
  return &k->second;
}

bool ConfigFile::Has(const std::string &section, const std::string &key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::vector<std::string> ConfigFile::Sections() const {
  std::vector<std::string> out;
  for (const auto &kv : sections_) out.push_back(kv.first);
  return out;
}

bool ConfigFile::Read(const std::string &section, const std::string &key, std::string *out) const {
  const Entry *e = Find(section, key);
  if (e) *out = e->value;
  return e != nullptr;
}

bool ConfigFile::Read(const std::string &section, const std::string &key, double *out) const {
  const Entry *e = Find(section, key);
  if (e) *out = ParseNumber<double>(section + "." + key, e->value);
  return e != nullptr;
}

bool ConfigFile::Read(const std::string &section, const std::string &key, int *out) const {
  const Entry *e = Find(section, key);
  if (e) *out = ParseNumber<int>(section + "." + key, e->value);
  return e != nullptr;
}

bool ConfigFile::Read(const std::string &section, const std::string &key,
                      std::uint64_t *out) const {
  const Entry *e = Find(section, key);
  if (e) *out = ParseNumber<std::uint64_t>(section + "." + key, e->value);
  return e != nullptr;
}

bool ConfigFile::Read(const std::string &section, const std::string &key, bool *out) const {
  const Entry *e = Find(section, key);
  if (!e) return false;
  if (e->value == "true" || e->value == "1") {
    *out = true;
  } else if (e->value == "false" || e->value == "0") {
    *out = false;
  } else {
    throw InputError("config: " + section + "." + key + ": expected true/false, got '" +
                     e->value + "'");
  }
  return true;
}

std::vector<std::string> ConfigFile::Unconsumed() const {
  std::vector<std::string> out;
  for (const auto &[section, keys] : sections_)
    for (const auto &[key, e] : keys)
      if (!e.consumed)
        out.push_back(section + "." + key + " (line " + std::to_string(e.line) + ")");
  return out;
}

void ConfigFile::Set(const std::string &section, const std::string &key,
                     const std::string &value) {
  Entry &e = sections_[section][key];
  e.value = value;
  e.consumed = false;
}

}  // namespace pmu
