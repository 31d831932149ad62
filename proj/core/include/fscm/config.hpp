#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "fscm/convergence.hpp"

namespace fscm {

/// Flat `key = value` settings. Blank lines and text after '#' are ignored.
class Config {
 public:
  static Config parse(std::istream& in);
  /// Throws InvalidArgument if the file cannot be opened.
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Recognised keys: c_star, alpha0, tolerance, iteration_cap_factor, r0, mu,
/// length, seed, threads, graded_levels. Unknown keys throw InvalidArgument.
void apply_config(const Config& config, ConvergenceSettings& settings);

}  // namespace fscm
