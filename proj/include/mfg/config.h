// Copyright 2026 The MFG-OMD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reader for the experiment config files: a TOML subset with [sections],
// `key = value` lines and # comments. Values are booleans, integers, floats,
// double-quoted strings, or bracketed arrays of those (may span lines).

#ifndef MFG_CONFIG_H_
#define MFG_CONFIG_H_

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mfg {

struct ConfigValue {
  enum class Kind { kBool, kInt, kFloat, kString, kArray };

  Kind kind = Kind::kInt;
  bool boolean = false;
  std::int64_t integer = 0;
  double number = 0.0;
  std::string text;
  std::vector<ConfigValue> items;
};

class ConfigDocument {
 public:
  using Section = std::vector<std::pair<std::string, ConfigValue>>;

  // Throws kConfig with the offending line number.
  static ConfigDocument Parse(const std::string& text);
  static ConfigDocument Load(const std::string& path);

  bool Has(const std::string& section, const std::string& key) const;
  const ConfigValue* Find(const std::string& section,
                          const std::string& key) const;

  // Typed getters; a present value of the wrong type is a kConfig error.
  bool GetBool(const std::string& section, const std::string& key,
               bool fallback) const;
  std::int64_t GetInt(const std::string& section, const std::string& key,
                      std::int64_t fallback) const;
  double GetDouble(const std::string& section, const std::string& key,
                   double fallback) const;
  std::string GetString(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  std::vector<std::int64_t> GetIntList(const std::string& section,
                                       const std::string& key) const;
  std::vector<double> GetDoubleList(const std::string& section,
                                    const std::string& key) const;

  void Set(const std::string& section, const std::string& key,
           ConfigValue value);
  void Erase(const std::string& section, const std::string& key);

  // Keys never read through a getter; used to reject typos.
  std::vector<std::string> UnreadKeys() const;

  const std::vector<std::pair<std::string, Section>>& sections() const {
    return sections_;
  }

 private:
  Section* MutableSection(const std::string& name);

  std::vector<std::pair<std::string, Section>> sections_;
  mutable std::set<std::string> read_;
};

ConfigValue MakeInt(std::int64_t v);
ConfigValue MakeFloat(double v);
ConfigValue MakeString(std::string v);
ConfigValue MakeBool(bool v);

}  // namespace mfg

#endif  // MFG_CONFIG_H_
