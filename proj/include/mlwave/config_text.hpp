#pragma once

// Reader for the small TOML subset used by scenario files:
//   # comments, [table], [[array.of.tables]], key = value
//   values: "strings", numbers, true/false, [arrays, possibly, [nested]] (may span lines)
// Every value remembers the line it came from so validation errors can point at it.

#include <string>
#include <vector>

namespace mlwave::config {

struct Value {
  enum class Kind { kNumber, kBool, kString, kArray };

  Kind kind = Kind::kNumber;
  double number = 0.0;
  bool is_integer = false;
  bool boolean = false;
  std::string text;
  std::vector<Value> items;
  int line = 0;
};

struct Entry {
  std::string key;
  Value value;
  int line = 0;
};

struct Section {
  std::string name;  // empty for the root table
  bool is_array = false;
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(const std::string& key) const;
};

struct Document {
  std::string source;  // file name used in diagnostics
  std::vector<Section> sections;
};

/// Throws ParseError with "source:line: message".
Document parse(const std::string& text, const std::string& source);

const char* kind_name(Value::Kind kind);

}  // namespace mlwave::config
