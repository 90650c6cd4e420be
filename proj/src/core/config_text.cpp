#include "mlwave/config_text.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <set>

#include "mlwave/common.hpp"

namespace mlwave::config {

namespace {

class Reader {
 public:
  Reader(const std::string& text, const std::string& source) : text_(text), source_(source) {}

  Document run() {
    Document doc;
    doc.source = source_;
    doc.sections.push_back(Section{"", false, 1, {}});
    std::set<std::string> tables;
    for (;;) {
      skip_blank(true);
      if (eof()) break;
      if (peek() == '[') {
        const int line = line_;
        get();
        const bool is_array = peek() == '[';
        if (is_array) get();
        skip_blank(false);
        const std::string name = read_name();
        if (name.empty()) fail("expected a table name");
        skip_blank(false);
        expect(']');
        if (is_array) expect(']');
        end_of_line();
        if (!is_array && !tables.insert(name).second) fail_at(line, "duplicate table [" + name + "]");
        doc.sections.push_back(Section{name, is_array, line, {}});
        continue;
      }
      const int line = line_;
      const std::string key = read_name();
      if (key.empty()) fail(std::string("unexpected character '") + peek() + "'");
      skip_blank(false);
      expect('=');
      skip_blank(false);
      Value v = read_value();
      end_of_line();
      Section& sec = doc.sections.back();
      if (sec.find(key) != nullptr) fail_at(line, "duplicate key '" + key + "'");
      sec.entries.push_back(Entry{key, std::move(v), line});
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_, line_, msg); }
  [[noreturn]] void fail_at(int line, const std::string& msg) const {
    throw ParseError(source_, line, msg);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') get();
  }

  // Skips spaces, tabs and comments; newlines too when `newlines` is set.
  void skip_blank(bool newlines) {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        get();
      } else if (c == '#') {
        skip_comment();
      } else if (c == '\n' && newlines) {
        get();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_blank(false);
    if (eof()) return;
    if (peek() != '\n') fail(std::string("unexpected trailing '") + peek() + "'");
    get();
  }

  std::string read_name() {
    std::string out;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        out.push_back(get());
      } else {
        break;
      }
    }
    return out;
  }

  Value read_value() {
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.kind = Value::Kind::kString;
      v.text = read_string();
    } else if (c == '[') {
      v.kind = Value::Kind::kArray;
      get();
      for (;;) {
        skip_blank(true);
        if (peek() == ']') {
          get();
          break;
        }
        v.items.push_back(read_value());
        skip_blank(true);
        if (peek() == ',') {
          get();
        } else if (peek() == ']') {
          get();
          break;
        } else {
          fail("expected ',' or ']' in array");
        }
      }
    } else if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      v.kind = Value::Kind::kBool;
      v.boolean = true;
    } else if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      v.kind = Value::Kind::kBool;
      v.boolean = false;
    } else {
      read_number(v);
    }
    return v;
  }

  std::string read_string() {
    expect('"');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        const char e = get();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  void read_number(Value& v) {
    std::string token;
    while (!eof()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
          c == 'e' || c == 'E' || c == '_') {
        get();
        if (c != '_') token.push_back(c);
      } else {
        break;
      }
    }
    if (token.empty()) fail("expected a value");
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE)
      fail("malformed number '" + token + "'");
    v.kind = Value::Kind::kNumber;
    v.number = x;
    v.is_integer = token.find_first_of(".eE") == std::string::npos;
  }

  const std::string& text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

const Entry* Section::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

Document parse(const std::string& text, const std::string& source) {
  return Reader(text, source).run();
}

const char* kind_name(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::kNumber: return "number";
    case Value::Kind::kBool: return "boolean";
    case Value::Kind::kString: return "string";
    case Value::Kind::kArray: return "array";
  }
  return "value";
}

}  // namespace mlwave::config
