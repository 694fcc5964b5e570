#pragma once

// Minimal TOML-subset document support: comments, [table] and [[table]]
// headers, and key = value pairs where a value is a quoted string, a number,
// a boolean, or a flat array of those. Covers schema files and run configs;
// not a general TOML implementation (no dotted keys, no inline tables, no
// datetimes).

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fatigue::toml {

struct Value {
  enum class Kind { String, Number, Boolean, Array };
  Kind kind = Kind::String;
  std::string str;
  double num = 0.0;
  bool flag = false;
  std::vector<Value> items;

  static Value of(const std::string& s);
  static Value of(double v);
  static Value of(bool v);
  static Value of(const std::vector<double>& vs);

  double as_number(const std::string& context) const;
  const std::string& as_string(const std::string& context) const;
  bool as_bool(const std::string& context) const;
};

struct Table {
  std::vector<std::pair<std::string, Value>> entries;  // insertion order

  bool has(const std::string& key) const;
  const Value* find(const std::string& key) const;
  void set(const std::string& key, Value v);

  std::string require_string(const std::string& key) const;
  double require_number(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_number(const std::string& key, double fallback) const;
  long get_integer(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::optional<double> get_optional_number(const std::string& key) const;
  std::vector<double> get_number_array(const std::string& key) const;
};

struct Document {
  Table root;
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::pair<std::string, std::vector<Table>>> arrays;

  Table* find_table(const std::string& name);
  const Table* find_table(const std::string& name) const;
  const std::vector<Table>* find_array(const std::string& name) const;
  Table& table(const std::string& name);  // creates on demand
  std::vector<Table>& array(const std::string& name);
};

Document parse(const std::string& text, const std::string& source);
Document parse_file(const std::string& path);
std::string serialize(const Document& doc);
void write_file(const Document& doc, const std::string& path);

}  // namespace fatigue::toml
