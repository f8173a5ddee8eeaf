#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/field.hpp"

namespace ldp::config {

/// A configuration value that failed validation. where() is "file:line" or
/// "--set KEY=VALUE"; field() is "section.key".
class ValidationError : public ParameterError {
 public:
  ValidationError(std::string where, std::string field, const std::string& message)
      : ParameterError(where + ": " + field + ": " + message),
        where_(std::move(where)),
        field_(std::move(field)) {}
  const std::string& where() const noexcept { return where_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string where_;
  std::string field_;
};

struct Entry {
  std::string value;
  std::string origin;
};

/// Sections as written; the top level is the section "".
struct RawConfig {
  std::string source = "config";
  std::map<std::string, std::map<std::string, Entry>> sections;
};

/// Parses `key = value` lines grouped under `[section]` headers. `#` starts
/// a comment; blank lines are ignored.
RawConfig parse_text(std::string_view text, const std::string& source);
RawConfig parse_file(const std::string& path);

/// Applies `KEY=VALUE` or `section.KEY=VALUE`. A bare key goes to the only
/// section whose schema has it, or to [experiment] when several do.
void apply_override(RawConfig& raw, std::string_view assignment);

enum class Type { Int, Seed, Real, Bool, Text, Reals, Ints, Points };

using Value = std::variant<long long, std::uint64_t, double, bool, std::string,
                           std::vector<double>, std::vector<long long>, std::vector<Vec>>;

struct KeySpec {
  std::string key;
  Type type;
  /// Default in config syntax; empty text with `required` means no default.
  std::string fallback;
  bool required = false;
  /// Numeric bounds; applied to every element of list types.
  double lo = -1e308;
  bool lo_strict = false;
  double hi = 1e308;
  bool hi_strict = false;
  std::vector<std::string> choices;
};

/// Keys accepted in `section` for the given model name and experiment kind.
std::vector<KeySpec> schema(const std::string& section, const std::string& model_name,
                            const std::string& kind);

/// The experiment kinds and model names known to the schema.
const std::vector<std::string>& experiment_kinds();
const std::vector<std::string>& model_names();

/// A fully typed configuration with every default filled in.
class Resolved {
 public:
  const Value& get(const std::string& section, const std::string& key) const;
  bool has(const std::string& section, const std::string& key) const;

  long long integer(const std::string& section, const std::string& key) const;
  std::uint64_t seed() const;
  double real(const std::string& section, const std::string& key) const;
  bool flag(const std::string& section, const std::string& key) const;
  const std::string& text(const std::string& section, const std::string& key) const;
  const std::vector<double>& reals(const std::string& section, const std::string& key) const;
  const std::vector<long long>& integers(const std::string& section, const std::string& key) const;
  const std::vector<Vec>& points(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, Value v);

  /// Canonical text (doubles as %.17g); parses back to an equal Resolved.
  std::string to_text() const;

 private:
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, Value>>>> sections_;
};

/// Type-checks every key against the schema, fills defaults, and checks
/// cross-field constraints. Throws ValidationError.
Resolved resolve(const RawConfig& raw);

std::string format_value(const Value& v);

}  // namespace ldp::config
