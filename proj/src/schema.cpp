#include "fatigue/schema.hpp"

#include <cmath>
#include <set>

#include "fatigue/tomlite.hpp"
#include "fatigue/util.hpp"

namespace fatigue {

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::OneHot: return "onehot";
    case FeatureKind::Flag: return "flag";
  }
  return "?";
}

std::string to_string(RoleTag role) {
  switch (role) {
    case RoleTag::None: return "none";
    case RoleTag::StrainAmplitude: return "strain_amplitude";
    case RoleTag::TestTemperature: return "test_temperature";
    case RoleTag::Dose: return "dose";
  }
  return "?";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "numeric") return FeatureKind::Numeric;
  if (s == "onehot") return FeatureKind::OneHot;
  if (s == "flag") return FeatureKind::Flag;
  throw Error("unknown feature kind '" + s + "'");
}

RoleTag role_tag_from_string(const std::string& s) {
  if (s == "none" || s.empty()) return RoleTag::None;
  if (s == "strain_amplitude") return RoleTag::StrainAmplitude;
  if (s == "test_temperature") return RoleTag::TestTemperature;
  if (s == "dose") return RoleTag::Dose;
  throw Error("unknown role tag '" + s + "'");
}

void FeatureSchema::validate() const {
  if (features.empty()) throw Error("schema has no features");
  if (target_name.empty()) throw Error("schema has no target name");

  std::set<std::string> names;
  int role_counts[3] = {0, 0, 0};
  for (const auto& f : features) {
    if (f.name.empty()) throw Error("schema feature with empty name");
    if (!names.insert(f.name).second)
      throw Error("duplicate feature name '" + f.name + "'");
    if (f.name == target_name)
      throw Error("feature '" + f.name + "' collides with the target name");
    switch (f.kind) {
      case FeatureKind::Numeric:
        if (std::isfinite(f.min) && std::isfinite(f.max) && !(f.min < f.max))
          throw Error("feature '" + f.name + "': min must be < max");
        break;
      case FeatureKind::OneHot:
        if (f.group.empty() || f.category.empty())
          throw Error("onehot feature '" + f.name + "' needs group and category");
        if (f.role != RoleTag::None)
          throw Error("role tags are only valid on numeric features ('" + f.name + "')");
        break;
      case FeatureKind::Flag:
        if (f.role != RoleTag::None)
          throw Error("role tags are only valid on numeric features ('" + f.name + "')");
        break;
    }
    if (f.role != RoleTag::None) ++role_counts[static_cast<int>(f.role) - 1];
  }
  // A group name must not collide with a feature name and categories must be
  // unique within their group.
  std::set<std::pair<std::string, std::string>> group_categories;
  for (const auto& f : features) {
    if (f.kind != FeatureKind::OneHot) continue;
    if (names.count(f.group))
      throw Error("onehot group '" + f.group + "' collides with a feature name");
    if (f.group == target_name)
      throw Error("onehot group '" + f.group + "' collides with the target name");
    if (!group_categories.insert({f.group, f.category}).second)
      throw Error("duplicate category '" + f.category + "' in group '" + f.group + "'");
  }
  const char* role_names[3] = {"strain_amplitude", "test_temperature", "dose"};
  for (int i = 0; i < 3; ++i) {
    if (role_counts[i] != 1)
      throw Error(std::string("schema must tag exactly one feature with role '") +
                  role_names[i] + "', found " + std::to_string(role_counts[i]));
  }
}

std::vector<std::string> FeatureSchema::csv_columns() const {
  std::vector<std::string> cols;
  std::set<std::string> seen;
  for (const auto& f : features) {
    const std::string& col = (f.kind == FeatureKind::OneHot) ? f.group : f.name;
    if (seen.insert(col).second) cols.push_back(col);
  }
  return cols;
}

int FeatureSchema::feature_index(const std::string& name) const {
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i].name == name) return static_cast<int>(i);
  return -1;
}

int FeatureSchema::role_column(RoleTag role) const {
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i].role == role) return static_cast<int>(i);
  return -1;
}

namespace {

toml::Document to_document(const FeatureSchema& schema) {
  toml::Document doc;
  doc.root.set("target", toml::Value::of(schema.target_name));
  auto& arr = doc.array("feature");
  for (const auto& f : schema.features) {
    toml::Table t;
    t.set("name", toml::Value::of(f.name));
    t.set("kind", toml::Value::of(to_string(f.kind)));
    if (!f.unit.empty()) t.set("unit", toml::Value::of(f.unit));
    if (f.kind == FeatureKind::Numeric) {
      if (std::isfinite(f.min) || std::isfinite(f.max)) {
        t.set("min", toml::Value::of(f.min));
        t.set("max", toml::Value::of(f.max));
      }
      if (f.role != RoleTag::None) t.set("role", toml::Value::of(to_string(f.role)));
    } else if (f.kind == FeatureKind::OneHot) {
      t.set("group", toml::Value::of(f.group));
      t.set("category", toml::Value::of(f.category));
    }
    arr.push_back(std::move(t));
  }
  return doc;
}

}  // namespace

std::uint64_t FeatureSchema::hash() const {
  return fnv1a64(toml::serialize(to_document(*this)));
}

FeatureSchema FeatureSchema::load(const std::string& path) {
  toml::Document doc = toml::parse_file(path);
  FeatureSchema schema;
  schema.target_name = doc.root.require_string("target");
  const auto* arr = doc.find_array("feature");
  if (!arr) throw Error(path + ": schema defines no [[feature]] entries");
  for (const auto& t : *arr) {
    FeatureSpec f;
    f.name = t.require_string("name");
    f.kind = feature_kind_from_string(t.get_string("kind", "numeric"));
    f.unit = t.get_string("unit", "");
    if (f.kind == FeatureKind::Numeric) {
      f.min = t.get_number("min", std::numeric_limits<double>::quiet_NaN());
      f.max = t.get_number("max", std::numeric_limits<double>::quiet_NaN());
      f.role = role_tag_from_string(t.get_string("role", "none"));
    } else if (f.kind == FeatureKind::OneHot) {
      f.group = t.require_string("group");
      f.category = t.require_string("category");
    }
    schema.features.push_back(std::move(f));
  }
  schema.validate();
  return schema;
}

void FeatureSchema::save(const std::string& path) const {
  toml::write_file(to_document(*this), path);
}

}  // namespace fatigue
