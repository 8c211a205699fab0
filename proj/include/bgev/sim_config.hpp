#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sim.hpp"

// Suite configuration files.
//
//   # comment
//   [defaults]            m, seed, sigma, fix_sigma, max_failure_fraction
//   m = 100
//   seed = 2020
//
//   [cell]                one cell: xi, mu, delta, n (sigma, m, seed, start optional)
//   xi = 1
//   mu = -1
//   delta = 0
//   n = 250
//   start = 1.5, -0.5, 1, 0.5     (optional custom start xi, mu, sigma, delta)
//
//   [grid]                cross product of comma-separated lists
//   xi = 1, 0.5
//   mu = -1, 0, 1
//   delta = 0, 2, 4
//   n = 50, 100, 250, 1000
//
// Grid cells expand with xi outermost, then n, mu and delta. Cells without an
// explicit seed get derive_seed(defaults.seed, cell index).

namespace bgev::sim {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'", line);
    }
  }
  if (out.empty()) throw ConfigError("empty value", line);
  return out;
}

struct Section {
  std::string kind;
  int line = 0;
  std::map<std::string, std::pair<std::string, int>> kv;

  [[nodiscard]] bool has(const std::string& k) const { return kv.count(k) != 0; }
  [[nodiscard]] std::vector<double> list(const std::string& k) const {
    const auto& [v, l] = kv.at(k);
    return parse_list(v, l);
  }
  [[nodiscard]] double scalar(const std::string& k) const {
    const auto vals = list(k);
    if (vals.size() != 1) throw ConfigError("expected a single value for " + k, kv.at(k).second);
    return vals.front();
  }
  [[nodiscard]] std::vector<double> list_or(const std::string& k, double fallback) const {
    return has(k) ? list(k) : std::vector<double>{fallback};
  }
};

inline bool parse_bool(const std::string& v, int line) {
  const auto t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("expected true/false, got '" + t + "'", line);
}

}  // namespace detail

/// `seed_override`, when given, replaces the [defaults] seed.
[[nodiscard]] inline std::vector<SimConfig> parse_suite(
    std::istream& in, std::optional<std::uint64_t> seed_override = std::nullopt) {
  std::vector<detail::Section> sections;
  detail::Section defaults{"defaults", 0, {}};
  detail::Section* current = nullptr;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      const std::string kind = detail::trim(line.substr(1, line.size() - 2));
      if (kind == "defaults") {
        current = &defaults;
      } else if (kind == "cell" || kind == "grid") {
        sections.push_back({kind, line_no, {}});
        current = &sections.back();
      } else {
        throw ConfigError("unknown section [" + kind + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
    if (current == nullptr) throw ConfigError("key outside of a section", line_no);
    const std::string key = detail::trim(line.substr(0, eq));
    current->kv[key] = {detail::trim(line.substr(eq + 1)), line_no};
  }

  static const std::vector<std::string> cell_keys = {"xi", "mu", "sigma", "delta", "n",
                                                     "m",  "seed", "start", "fix_sigma"};
  for (const auto& [k, v] : defaults.kv) {
    if (k != "m" && k != "seed" && k != "sigma" && k != "fix_sigma" &&
        k != "max_failure_fraction") {
      throw ConfigError("unknown key '" + k + "' in [defaults]", v.second);
    }
  }

  const int def_m = defaults.has("m") ? static_cast<int>(defaults.scalar("m")) : 100;
  const auto def_seed = seed_override ? *seed_override
                       : defaults.has("seed") ? static_cast<std::uint64_t>(defaults.scalar("seed"))
                                              : 1ULL;
  const double def_sigma = defaults.has("sigma") ? defaults.scalar("sigma") : 1.0;
  const bool def_fix_sigma =
      defaults.has("fix_sigma")
          ? detail::parse_bool(defaults.kv.at("fix_sigma").first, defaults.kv.at("fix_sigma").second)
          : true;
  const double def_fail =
      defaults.has("max_failure_fraction") ? defaults.scalar("max_failure_fraction") : 0.2;

  std::vector<SimConfig> cells;
  for (const auto& sec : sections) {
    for (const auto& [k, v] : sec.kv) {
      if (std::find(cell_keys.begin(), cell_keys.end(), k) == cell_keys.end()) {
        throw ConfigError("unknown key '" + k + "' in [" + sec.kind + "]", v.second);
      }
    }
    for (const char* req : {"xi", "mu", "delta", "n"}) {
      if (!sec.has(req)) throw ConfigError(std::string("missing key '") + req + "'", sec.line);
    }
    const auto xis = sec.list("xi");
    const auto mus = sec.list("mu");
    const auto deltas = sec.list("delta");
    const auto ns = sec.list("n");
    const auto sigmas = sec.list_or("sigma", def_sigma);
    if (sec.kind == "cell" &&
        (xis.size() > 1 || mus.size() > 1 || deltas.size() > 1 || ns.size() > 1)) {
      throw ConfigError("[cell] takes single values; use [grid] for lists", sec.line);
    }
    std::optional<BgevParams> start;
    if (sec.has("start")) {
      const auto s = sec.list("start");
      if (s.size() != 4) throw ConfigError("start needs xi, mu, sigma, delta", sec.kv.at("start").second);
      try {
        start = BgevParams(s[0], s[1], s[2], s[3]);
      } catch (const std::exception& e) {
        throw ConfigError(e.what(), sec.kv.at("start").second);
      }
    }
    const int m = sec.has("m") ? static_cast<int>(sec.scalar("m")) : def_m;
    const bool fix_sigma = sec.has("fix_sigma") ? detail::parse_bool(sec.kv.at("fix_sigma").first,
                                                                     sec.kv.at("fix_sigma").second)
                                                : def_fix_sigma;
    for (double xi : xis) {
      for (double n : ns) {
        for (double mu : mus) {
          for (double delta : deltas) {
            for (double sigma : sigmas) {
              SimConfig c;
              try {
                c.truth = BgevParams(xi, mu, sigma, delta);
              } catch (const std::exception& e) {
                throw ConfigError(e.what(), sec.line);
              }
              if (n < static_cast<double>(kMinFitSize) || n != std::floor(n)) {
                throw ConfigError("n must be an integer >= 8", sec.line);
              }
              if (m < 1) throw ConfigError("m must be >= 1", sec.line);
              c.n = static_cast<std::size_t>(n);
              c.m = m;
              c.seed = sec.has("seed") ? static_cast<std::uint64_t>(sec.scalar("seed"))
                                       : derive_seed(def_seed, cells.size());
              if (start) {
                c.start_rule = StartRule::Custom;
                c.custom_start = start;
              }
              c.fix_sigma = fix_sigma;
              c.max_failure_fraction = def_fail;
              cells.push_back(c);
            }
          }
        }
      }
    }
  }
  if (cells.empty()) throw ConfigError("no [cell] or [grid] sections", line_no);
  return cells;
}

[[nodiscard]] inline std::vector<SimConfig> load_suite(
    const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open suite config '" + path + "'", 0);
  return parse_suite(in, seed_override);
}

}  // namespace bgev::sim
