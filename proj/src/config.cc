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

#include "mfg/config.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mfg/errors.h"

namespace mfg {
namespace {

class ValueParser {
 public:
  ValueParser(const std::string& text, int line) : text_(text), line_(line) {}

  ConfigValue ParseAll() {
    ConfigValue v = ParseValue();
    SkipSpace();
    if (pos_ != text_.size()) Error("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void Error(const std::string& what) const {
    std::ostringstream msg;
    msg << "config line " << line_ << ": " << what;
    Fail(ErrorCode::kConfig, msg.str());
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(
                                      static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  ConfigValue ParseValue() {
    SkipSpace();
    if (pos_ >= text_.size()) Error("missing value");
    const char c = text_[pos_];
    if (c == '"') return ParseString();
    if (c == '[') return ParseArray();
    return ParseBare();
  }

  ConfigValue ParseString() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) Error("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: Error(std::string("unknown escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (pos_ >= text_.size()) Error("unterminated string");
    ++pos_;
    return MakeString(std::move(out));
  }

  ConfigValue ParseArray() {
    ++pos_;
    ConfigValue v;
    v.kind = ConfigValue::Kind::kArray;
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(ParseValue());
      SkipSpace();
      if (pos_ >= text_.size()) Error("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        SkipSpace();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      Error("expected ',' or ']' in array");
    }
  }

  ConfigValue ParseBare() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    std::string token = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (token == "true") return MakeBool(true);
    if (token == "false") return MakeBool(false);
    std::string digits;
    for (char c : token) {
      if (c != '_') digits.push_back(c);
    }
    const char* first = digits.data();
    const char* last = first + digits.size();
    if (!digits.empty() && *first == '+') ++first;
    std::int64_t i = 0;
    auto ri = std::from_chars(first, last, i);
    if (ri.ec == std::errc() && ri.ptr == last) return MakeInt(i);
    double d = 0.0;
    auto rd = std::from_chars(first, last, d);
    if (rd.ec == std::errc() && rd.ptr == last) return MakeFloat(d);
    Error("cannot parse value '" + token + "'");
  }

  const std::string& text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string StripComment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string Trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int BracketBalance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (in_string) continue;
    if (s[i] == '[') ++depth;
    if (s[i] == ']') --depth;
  }
  return depth;
}

bool ValidKey(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

std::string Qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

[[noreturn]] void TypeError(const std::string& section, const std::string& key,
                            const char* expected) {
  Fail(ErrorCode::kConfig,
       "config key '" + Qualified(section, key) + "' must be " + expected);
}

}  // namespace

ConfigValue MakeInt(std::int64_t v) {
  ConfigValue c;
  c.kind = ConfigValue::Kind::kInt;
  c.integer = v;
  return c;
}

ConfigValue MakeFloat(double v) {
  ConfigValue c;
  c.kind = ConfigValue::Kind::kFloat;
  c.number = v;
  return c;
}

ConfigValue MakeString(std::string v) {
  ConfigValue c;
  c.kind = ConfigValue::Kind::kString;
  c.text = std::move(v);
  return c;
}

ConfigValue MakeBool(bool v) {
  ConfigValue c;
  c.kind = ConfigValue::Kind::kBool;
  c.boolean = v;
  return c;
}

ConfigDocument ConfigDocument::Parse(const std::string& text) {
  ConfigDocument doc;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const int start_line = line_no;
    std::string line = Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') {
        Fail(ErrorCode::kConfig,
             "config line " + std::to_string(line_no) + ": bad section header");
      }
      current = Trim(line.substr(1, line.size() - 2));
      if (!ValidKey(current)) {
        Fail(ErrorCode::kConfig, "config line " + std::to_string(line_no) +
                                     ": bad section name '" + current + "'");
      }
      for (const auto& [name, _] : doc.sections_) {
        if (name == current) {
          Fail(ErrorCode::kConfig, "config line " + std::to_string(line_no) +
                                       ": duplicate section [" + current + "]");
        }
      }
      doc.sections_.emplace_back(current, Section{});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kConfig,
           "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    if (!ValidKey(key)) {
      Fail(ErrorCode::kConfig, "config line " + std::to_string(line_no) +
                                   ": bad key '" + key + "'");
    }
    std::string value_text = Trim(line.substr(eq + 1));
    while (BracketBalance(value_text) > 0 && std::getline(in, raw)) {
      ++line_no;
      value_text += " " + Trim(StripComment(raw));
    }
    if (doc.Has(current, key)) {
      Fail(ErrorCode::kConfig, "config line " + std::to_string(start_line) +
                                   ": duplicate key '" + key + "'");
    }
    doc.Set(current, key, ValueParser(value_text, start_line).ParseAll());
  }
  doc.read_.clear();
  return doc;
}

ConfigDocument ConfigDocument::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kConfig, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const ConfigValue* ConfigDocument::Find(const std::string& section,
                                        const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries) {
      if (k == key) {
        read_.insert(Qualified(section, key));
        return &v;
      }
    }
  }
  return nullptr;
}

bool ConfigDocument::Has(const std::string& section,
                         const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& entry : entries) {
      if (entry.first == key) return true;
    }
  }
  return false;
}

bool ConfigDocument::GetBool(const std::string& section,
                             const std::string& key, bool fallback) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kBool) TypeError(section, key, "a boolean");
  return v->boolean;
}

std::int64_t ConfigDocument::GetInt(const std::string& section,
                                    const std::string& key,
                                    std::int64_t fallback) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kInt) TypeError(section, key, "an integer");
  return v->integer;
}

double ConfigDocument::GetDouble(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return fallback;
  if (v->kind == ConfigValue::Kind::kInt) {
    return static_cast<double>(v->integer);
  }
  if (v->kind != ConfigValue::Kind::kFloat) TypeError(section, key, "a number");
  return v->number;
}

std::string ConfigDocument::GetString(const std::string& section,
                                      const std::string& key,
                                      const std::string& fallback) const {
  const ConfigValue* v = Find(section, key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kString) TypeError(section, key, "a string");
  return v->text;
}

std::vector<std::int64_t> ConfigDocument::GetIntList(
    const std::string& section, const std::string& key) const {
  const ConfigValue* v = Find(section, key);
  std::vector<std::int64_t> out;
  if (v == nullptr) return out;
  if (v->kind == ConfigValue::Kind::kInt) return {v->integer};
  if (v->kind != ConfigValue::Kind::kArray) {
    TypeError(section, key, "an integer array");
  }
  for (const ConfigValue& item : v->items) {
    if (item.kind != ConfigValue::Kind::kInt) {
      TypeError(section, key, "an integer array");
    }
    out.push_back(item.integer);
  }
  return out;
}

std::vector<double> ConfigDocument::GetDoubleList(
    const std::string& section, const std::string& key) const {
  const ConfigValue* v = Find(section, key);
  std::vector<double> out;
  if (v == nullptr) return out;
  if (v->kind != ConfigValue::Kind::kArray) {
    TypeError(section, key, "a number array");
  }
  for (const ConfigValue& item : v->items) {
    if (item.kind == ConfigValue::Kind::kInt) {
      out.push_back(static_cast<double>(item.integer));
    } else if (item.kind == ConfigValue::Kind::kFloat) {
      out.push_back(item.number);
    } else {
      TypeError(section, key, "a number array");
    }
  }
  return out;
}

ConfigDocument::Section* ConfigDocument::MutableSection(
    const std::string& name) {
  for (auto& [n, entries] : sections_) {
    if (n == name) return &entries;
  }
  sections_.emplace_back(name, Section{});
  return &sections_.back().second;
}

void ConfigDocument::Set(const std::string& section, const std::string& key,
                         ConfigValue value) {
  Section* entries = MutableSection(section);
  for (auto& [k, v] : *entries) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries->emplace_back(key, std::move(value));
}

void ConfigDocument::Erase(const std::string& section, const std::string& key) {
  Section* entries = MutableSection(section);
  std::erase_if(*entries, [&](const auto& e) { return e.first == key; });
}

std::vector<std::string> ConfigDocument::UnreadKeys() const {
  std::vector<std::string> unread;
  for (const auto& [name, entries] : sections_) {
    for (const auto& entry : entries) {
      const std::string q = Qualified(name, entry.first);
      if (!read_.contains(q)) unread.push_back(q);
    }
  }
  return unread;
}

}  // namespace mfg
