#include "fatigue/tomlite.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <sstream>

#include "fatigue/util.hpp"

namespace fatigue::toml {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Strip a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (c == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unescape(const std::string& s, const std::string& where) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      if (i + 1 >= s.size()) throw Error(where + ": dangling escape");
      char n = s[++i];
      switch (n) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: throw Error(where + ": unsupported escape \\" + std::string(1, n));
      }
    } else {
      out += s[i];
    }
  }
  return out;
}

Value parse_scalar(const std::string& raw, const std::string& where) {
  Value v;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    v.kind = Value::Kind::String;
    v.str = unescape(raw.substr(1, raw.size() - 2), where);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = Value::Kind::Boolean;
    v.flag = (raw == "true");
    return v;
  }
  if (raw == "inf" || raw == "+inf") {
    v.kind = Value::Kind::Number;
    v.num = std::numeric_limits<double>::infinity();
    return v;
  }
  if (raw == "-inf") {
    v.kind = Value::Kind::Number;
    v.num = -std::numeric_limits<double>::infinity();
    return v;
  }
  double num = 0.0;
  auto res = std::from_chars(raw.data(), raw.data() + raw.size(), num);
  if (res.ec != std::errc() || res.ptr != raw.data() + raw.size())
    throw Error(where + ": cannot parse value '" + raw + "'");
  v.kind = Value::Kind::Number;
  v.num = num;
  return v;
}

Value parse_value(const std::string& raw, const std::string& where) {
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw Error(where + ": unterminated array");
    Value v;
    v.kind = Value::Kind::Array;
    std::string body = raw.substr(1, raw.size() - 2);
    std::string item;
    bool quoted = false;
    auto flush = [&] {
      std::string t = trim(item);
      if (!t.empty()) v.items.push_back(parse_scalar(t, where));
      item.clear();
    };
    for (char c : body) {
      if (c == '"') quoted = !quoted;
      if (c == ',' && !quoted) {
        flush();
      } else {
        item += c;
      }
    }
    flush();
    return v;
  }
  return parse_scalar(raw, where);
}

std::string serialize_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::String: {
      std::string out = "\"";
      for (char c : v.str) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case Value::Kind::Number:
      return format_double(v.num);
    case Value::Kind::Boolean:
      return v.flag ? "true" : "false";
    case Value::Kind::Array: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += serialize_value(v.items[i]);
      }
      return out + "]";
    }
  }
  return "";
}

void serialize_table(const Table& t, std::string& out) {
  for (const auto& [k, v] : t.entries) out += k + " = " + serialize_value(v) + "\n";
}

}  // namespace

Value Value::of(const std::string& s) {
  Value v;
  v.kind = Kind::String;
  v.str = s;
  return v;
}
Value Value::of(double x) {
  Value v;
  v.kind = Kind::Number;
  v.num = x;
  return v;
}
Value Value::of(bool b) {
  Value v;
  v.kind = Kind::Boolean;
  v.flag = b;
  return v;
}
Value Value::of(const std::vector<double>& vs) {
  Value v;
  v.kind = Kind::Array;
  for (double x : vs) v.items.push_back(Value::of(x));
  return v;
}

double Value::as_number(const std::string& context) const {
  if (kind != Kind::Number) throw Error(context + ": expected a number");
  return num;
}
const std::string& Value::as_string(const std::string& context) const {
  if (kind != Kind::String) throw Error(context + ": expected a string");
  return str;
}
bool Value::as_bool(const std::string& context) const {
  if (kind != Kind::Boolean) throw Error(context + ": expected a boolean");
  return flag;
}

bool Table::has(const std::string& key) const { return find(key) != nullptr; }

const Value* Table::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

void Table::set(const std::string& key, Value v) {
  for (auto& [k, existing] : entries) {
    if (k == key) {
      existing = std::move(v);
      return;
    }
  }
  entries.emplace_back(key, std::move(v));
}

std::string Table::require_string(const std::string& key) const {
  const Value* v = find(key);
  if (!v) throw Error("missing required key '" + key + "'");
  return v->as_string(key);
}
double Table::require_number(const std::string& key) const {
  const Value* v = find(key);
  if (!v) throw Error("missing required key '" + key + "'");
  return v->as_number(key);
}
std::string Table::get_string(const std::string& key, const std::string& fallback) const {
  const Value* v = find(key);
  return v ? v->as_string(key) : fallback;
}
double Table::get_number(const std::string& key, double fallback) const {
  const Value* v = find(key);
  return v ? v->as_number(key) : fallback;
}
long Table::get_integer(const std::string& key, long fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  double d = v->as_number(key);
  long l = static_cast<long>(d);
  if (static_cast<double>(l) != d) throw Error(key + ": expected an integer");
  return l;
}
bool Table::get_bool(const std::string& key, bool fallback) const {
  const Value* v = find(key);
  return v ? v->as_bool(key) : fallback;
}
std::optional<double> Table::get_optional_number(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_number(key);
}
std::vector<double> Table::get_number_array(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return {};
  if (v->kind != Value::Kind::Array) return {v->as_number(key)};
  std::vector<double> out;
  for (const auto& item : v->items) out.push_back(item.as_number(key));
  return out;
}

Table* Document::find_table(const std::string& name) {
  for (auto& [n, t] : tables)
    if (n == name) return &t;
  return nullptr;
}
const Table* Document::find_table(const std::string& name) const {
  for (const auto& [n, t] : tables)
    if (n == name) return &t;
  return nullptr;
}
const std::vector<Table>* Document::find_array(const std::string& name) const {
  for (const auto& [n, a] : arrays)
    if (n == name) return &a;
  return nullptr;
}
Table& Document::table(const std::string& name) {
  if (Table* t = find_table(name)) return *t;
  tables.emplace_back(name, Table{});
  return tables.back().second;
}
std::vector<Table>& Document::array(const std::string& name) {
  for (auto& [n, a] : arrays)
    if (n == name) return a;
  arrays.emplace_back(name, std::vector<Table>{});
  return arrays.back().second;
}

Document parse(const std::string& text, const std::string& source) {
  Document doc;
  Table* current = &doc.root;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = source + ":" + std::to_string(lineno);
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.size() >= 4 && s.substr(0, 2) == "[[" && s.substr(s.size() - 2) == "]]") {
      std::string name = trim(s.substr(2, s.size() - 4));
      if (name.empty()) throw Error(where + ": empty table-array name");
      auto& arr = doc.array(name);
      arr.emplace_back();
      current = &arr.back();
      continue;
    }
    if (s.front() == '[' && s.back() == ']') {
      std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) throw Error(where + ": empty table name");
      current = &doc.table(name);
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw Error(where + ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string raw = trim(s.substr(eq + 1));
    if (key.empty()) throw Error(where + ": empty key");
    if (current->has(key)) throw Error(where + ": duplicate key '" + key + "'");
    current->set(key, parse_value(raw, where));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string serialize(const Document& doc) {
  std::string out;
  serialize_table(doc.root, out);
  for (const auto& [name, t] : doc.tables) {
    if (!out.empty()) out += "\n";
    out += "[" + name + "]\n";
    serialize_table(t, out);
  }
  for (const auto& [name, arr] : doc.arrays) {
    for (const auto& t : arr) {
      if (!out.empty()) out += "\n";
      out += "[[" + name + "]]\n";
      serialize_table(t, out);
    }
  }
  return out;
}

void write_file(const Document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize(doc);
}

}  // namespace fatigue::toml
