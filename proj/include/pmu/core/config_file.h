// pmu/core/config_file.h

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

#ifndef PMU_CORE_CONFIG_FILE_H_
#define PMU_CORE_CONFIG_FILE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace pmu {

// Line-oriented "key = value" text grouped under "[section]" headers.
// '#' starts a comment. Typed readers mark keys as consumed so that unknown
// keys can be reported after all readers ran.
class ConfigFile {
 public:
  // Throws FormatError (offset = line number) on malformed lines,
  // duplicate keys or keys outside a section.
  static ConfigFile Parse(std::istream &is);
  static ConfigFile Load(const std::string &path);

  bool Has(const std::string &section, const std::string &key) const;
  std::vector<std::string> Sections() const;

  // Each reader leaves *out untouched when the key is absent and returns
  // whether it was present. Malformed values throw InputError.
  bool Read(const std::string &section, const std::string &key, std::string *out) const;
  bool Read(const std::string &section, const std::string &key, double *out) const;
  bool Read(const std::string &section, const std::string &key, int *out) const;
  bool Read(const std::string &section, const std::string &key, std::uint64_t *out) const;
  bool Read(const std::string &section, const std::string &key, bool *out) const;

  // "section.key (line N)" for every entry no reader consumed.
  std::vector<std::string> Unconsumed() const;
  // Sets an entry, overriding any existing one.
  void Set(const std::string &section, const std::string &key, const std::string &value);

 private:
  struct Entry {
    std::string value;
    long long line = 0;
    mutable bool consumed = false;
  };
  const Entry *Find(const std::string &section, const std::string &key) const;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace pmu

#endif  // PMU_CORE_CONFIG_FILE_H_
