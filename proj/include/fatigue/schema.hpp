#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace fatigue {

enum class FeatureKind { Numeric, OneHot, Flag };

/// Physically constrained inputs: strain amplitude, test temperature, dose.
enum class RoleTag { None, StrainAmplitude, TestTemperature, Dose };

/// One encoded design-matrix column. Numeric and flag features read a CSV
/// column of the same name; a OneHot spec is one category column of a group
/// whose CSV column is named after the group and holds category labels.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::string unit;
  double min = std::numeric_limits<double>::quiet_NaN();  // numeric only, declarative
  double max = std::numeric_limits<double>::quiet_NaN();
  RoleTag role = RoleTag::None;
  std::string group;     // OneHot only
  std::string category;  // OneHot only
};

struct FeatureSchema {
  std::vector<FeatureSpec> features;  // order defines design-matrix columns
  std::string target_name;

  /// Enforces the schema invariants: unique names, min < max where both are
  /// finite, OneHot group/category consistency, and exactly one feature per
  /// role tag. Throws Error on violation.
  void validate() const;

  /// CSV columns this schema reads, in first-appearance order (group columns
  /// deduplicated), excluding the target.
  std::vector<std::string> csv_columns() const;

  int feature_index(const std::string& name) const;  // -1 when absent
  int role_column(RoleTag role) const;               // encoded column, -1 when absent

  /// Fingerprint of the canonical serialization; stored in preprocessor and
  /// model files to detect schema drift.
  std::uint64_t hash() const;

  static FeatureSchema load(const std::string& path);
  void save(const std::string& path) const;
};

std::string to_string(FeatureKind kind);
std::string to_string(RoleTag role);
FeatureKind feature_kind_from_string(const std::string& s);
RoleTag role_tag_from_string(const std::string& s);

}  // namespace fatigue
