#pragma once

// Reader and writer for the TOML-style config grammar documented in the
// README: `#` comments, bare dotted [table] and [[array-of-tables]]
// headers, and `key = value` pairs whose values are basic strings,
// integers, floats, booleans, or single-line arrays of those scalars.
// The reader is strict — anything outside the grammar is a ConfigError
// carrying the offending line number.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metabalance/errors.hpp"

namespace metabalance::toml {

struct Value {
  enum class Kind { String, Integer, Float, Boolean, Array };

  Kind kind = Kind::String;
  std::string str;
  std::int64_t integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::vector<Value> items;
  int line = 0;

  // Numeric accessor shared by schema readers: integers promote to double.
  double as_double() const {
    return kind == Kind::Integer ? static_cast<double>(integer) : real;
  }
  bool is_number() const {
    return kind == Kind::Integer || kind == Kind::Float;
  }
};

struct Table {
  int line = 0;
  std::vector<std::pair<std::string, Value>> entries;

  const Value* find(const std::string& key) const {
    for (const auto& [k, v] : entries) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

/// A parsed document: the headerless root table, one table per [path]
/// header, and one table list per [[path]] header. A path is either a
/// plain table or an array of tables, never both.
struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> arrays;
};

namespace detail {

[[noreturn]] inline void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

inline bool is_bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Removes a trailing comment, honoring quotes so '#' may appear in strings.
inline std::string strip_comment(const std::string& s, int line) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quoted) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  if (quoted) fail(line, "unterminated string");
  return s;
}

inline std::string parse_basic_string(const std::string& s, std::size_t& pos,
                                      int line) {
  if (pos >= s.size() || s[pos] != '"') fail(line, "expected '\"'");
  ++pos;
  std::string out;
  while (pos < s.size()) {
    const char c = s[pos++];
    if (c == '"') return out;
    if (c == '\\') {
      if (pos >= s.size()) fail(line, "dangling escape");
      const char e = s[pos++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: fail(line, std::string("unsupported escape \\") + e);
      }
    } else {
      out += c;
    }
  }
  fail(line, "unterminated string");
}

inline Value parse_scalar(const std::string& text, int line) {
  Value v;
  v.line = line;
  if (!text.empty() && text.front() == '"') {
    std::size_t pos = 0;
    v.kind = Value::Kind::String;
    v.str = parse_basic_string(text, pos, line);
    if (pos != text.size()) fail(line, "trailing characters after string");
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = Value::Kind::Boolean;
    v.boolean = text == "true";
    return v;
  }
  // Integer: optional sign, digits only. Everything else numeric must be a
  // well-formed float (decimal point and/or exponent).
  bool integral = !text.empty();
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (i == 0 && (c == '+' || c == '-')) {
      integral = text.size() > 1;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      integral = false;
      break;
    }
  }
  if (integral) {
    try {
      v.integer = std::stoll(text);
    } catch (const std::exception&) {
      fail(line, "integer out of range: " + text);
    }
    v.kind = Value::Kind::Integer;
    return v;
  }
  std::size_t used = 0;
  double real = 0.0;
  try {
    real = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(line, "unrecognized value: " + text);
  }
  if (used != text.size()) fail(line, "unrecognized value: " + text);
  v.kind = Value::Kind::Float;
  v.real = real;
  return v;
}

inline Value parse_value(const std::string& text, int line) {
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') fail(line, "array must close on the same line");
    Value arr;
    arr.kind = Value::Kind::Array;
    arr.line = line;
    const std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return arr;
    // Split on commas outside quotes.
    std::vector<std::string> parts;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      const char c = body[i];
      if (quoted) {
        cur += c;
        if (c == '\\' && i + 1 < body.size()) {
          cur += body[++i];
        } else if (c == '"') {
          quoted = false;
        }
      } else if (c == '"') {
        quoted = true;
        cur += c;
      } else if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    for (const std::string& part : parts) {
      const std::string elem = trim(part);
      if (elem.empty()) fail(line, "empty array element");
      if (!elem.empty() && elem.front() == '[') {
        fail(line, "nested arrays are not supported");
      }
      arr.items.push_back(parse_scalar(elem, line));
    }
    return arr;
  }
  return parse_scalar(text, line);
}

inline std::string parse_header_path(const std::string& inner, int line) {
  const std::string path = trim(inner);
  if (path.empty()) fail(line, "empty table name");
  bool prev_dot = true;
  for (char c : path) {
    if (c == '.') {
      if (prev_dot) fail(line, "malformed table name: " + path);
      prev_dot = true;
    } else if (is_bare_char(c)) {
      prev_dot = false;
    } else {
      fail(line, std::string("bad character '") + c + "' in table name");
    }
  }
  if (prev_dot) fail(line, "malformed table name: " + path);
  return path;
}

}  // namespace detail

inline Document parse(const std::string& text) {
  Document doc;
  Table* current = &doc.root;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string raw = nl == std::string::npos
                          ? text.substr(start)
                          : text.substr(start, nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = detail::trim(detail::strip_comment(raw, line_no));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() >= 2 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      if (line.size() < closer.size() + (is_array ? 2 : 1) ||
          line.substr(line.size() - closer.size()) != closer) {
        detail::fail(line_no, "malformed table header: " + line);
      }
      const std::string inner = line.substr(
          is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1));
      const std::string path = detail::parse_header_path(inner, line_no);
      if (is_array) {
        if (doc.tables.count(path)) {
          detail::fail(line_no, "'" + path + "' is already a plain table");
        }
        doc.arrays[path].push_back(Table{line_no, {}});
        current = &doc.arrays[path].back();
      } else {
        if (doc.arrays.count(path)) {
          detail::fail(line_no, "'" + path + "' is already an array of tables");
        }
        if (doc.tables.count(path)) {
          detail::fail(line_no, "duplicate table [" + path + "]");
        }
        doc.tables[path] = Table{line_no, {}};
        current = &doc.tables[path];
      }
      continue;
    }

    const std::size_t eq = [&] {
      bool quoted = false;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (quoted) {
          if (line[i] == '\\') {
            ++i;
          } else if (line[i] == '"') {
            quoted = false;
          }
        } else if (line[i] == '"') {
          quoted = true;
        } else if (line[i] == '=') {
          return i;
        }
      }
      return std::string::npos;
    }();
    if (eq == std::string::npos) {
      detail::fail(line_no, "expected 'key = value': " + line);
    }
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) detail::fail(line_no, "empty key");
    for (char c : key) {
      if (!detail::is_bare_char(c)) {
        detail::fail(line_no, "bad character '" + std::string(1, c) +
                                  "' in key '" + key + "'");
      }
    }
    if (current->find(key)) {
      detail::fail(line_no, "duplicate key '" + key + "'");
    }
    const std::string rhs = detail::trim(line.substr(eq + 1));
    if (rhs.empty()) detail::fail(line_no, "missing value for key '" + key + "'");
    current->entries.emplace_back(key, detail::parse_value(rhs, line_no));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Writing

inline std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

/// Shortest decimal form that parses back to the same double; always
/// contains a '.' or exponent so the reader keeps it a float.
inline std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Prefer a shorter representation when it round-trips exactly.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    if (std::stod(probe) == v) {
      s = probe;
      break;
    }
  }
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_of("0123456789") != std::string::npos) {
    s += ".0";
  }
  return s;
}

inline std::string format_integer(std::int64_t v) { return std::to_string(v); }

inline std::string format_bool(bool v) { return v ? "true" : "false"; }

}  // namespace metabalance::toml
