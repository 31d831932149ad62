#include "fscm/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "fscm/errors.hpp"

namespace fscm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw InvalidArgument("config: bad value for '" + key + "': " + text);
  return v;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config: line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config: line " + std::to_string(lineno) + " has an empty key");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path);
  return parse(in);
}

double Config::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_value<double>(key, it->second);
}

int Config::integer(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_value<int>(key, it->second);
}

void apply_config(const Config& config, ConvergenceSettings& s) {
  static const std::set<std::string> known{"c_star", "alpha0", "tolerance", "iteration_cap_factor", "r0",
                                           "mu",     "length", "seed",      "threads",         "graded_levels"};
  for (const auto& [key, value] : config.values()) {
    if (!known.contains(key)) throw InvalidArgument("config: unknown key '" + key + "'");
  }
  s.scm.c_star = config.number("c_star", s.scm.c_star);
  s.scm.alpha0 = config.number("alpha0", s.scm.alpha0);
  s.scm.solver.tolerance = config.number("tolerance", s.scm.solver.tolerance);
  s.scm.solver.iteration_cap_factor = config.integer("iteration_cap_factor", s.scm.solver.iteration_cap_factor);
  s.basis.solver = s.scm.solver;
  s.r0 = config.number("r0", s.r0);
  s.mu = config.number("mu", s.mu);
  s.length = config.number("length", s.length);
  s.seed = static_cast<unsigned>(config.integer("seed", static_cast<int>(s.seed)));
  s.threads = config.integer("threads", s.threads);
  s.basis.graded.levels = config.integer("graded_levels", s.basis.graded.levels);
  s.scm.validate(make_l_section().alpha());
}

}  // namespace fscm
