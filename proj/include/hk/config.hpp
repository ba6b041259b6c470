#pragma once

// Run configuration: "key = value" lines with dotted keys, optional "[section]" headers
// that prefix the keys below them, and "#" comments. Every key has a default; unknown keys
// are rejected.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hk/field.hpp"
#include "hk/kirchhoff.hpp"
#include "hk/psi.hpp"
#include "json.hpp"

namespace hk {

class RunConfig {
 public:
  /// All keys at their defaults (the demo instance on a 32×32 grid).
  RunConfig();

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  /// "key=value"; throws ConfigError for unknown keys or a missing '='.
  void set_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::string& str(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated numbers; empty value gives an empty list.
  std::vector<double> numbers(const std::string& key) const;

  Domain domain() const;
  PsiMap psi() const;
  KirchhoffInstance instance() const;
  AuxiliaryOptions auxiliary_options() const;
  SubMode sub_mode() const;
  std::uint64_t seed() const;

  /// Builds every typed object once; throws ConfigError naming the offending key.
  void validate() const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace hk
