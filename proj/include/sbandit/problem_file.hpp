#pragma once

// Text description of a custom problem. One `key = value` per line, `#`
// starts a comment:
//
//   name = my-problem
//   kind = interval            # or: finite
//   sigma2 = 1
//   theta_min = -1             # interval only
//   theta_max = 1
//   resolution = 2001          # optional grid size
//   arm.0 = -1:0, 0:0, 1:1     # breakpoints theta:value
//   arm.1 = -1:1, 0:-1|0@left, 1:0
//   ambiguous = -1:0           # optional, comma-separated closed intervals
//
// A breakpoint `theta:l|r` is a jump with left limit l and right limit r that
// takes r at theta; the suffix `@left` makes it take l. Finite problems list
// `points = A, B, C` and give each arm one value per point: `arm.0 = 1, 0, 0.5`.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sbandit/bandit.hpp"
#include "sbandit/harness.hpp"

namespace sbandit {

namespace problem_file_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double number(const std::string& token, const std::string& where) {
  try {
    return parse_number(token);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(where + ": bad number '" + token + "'");
  }
}

inline Breakpoint breakpoint(const std::string& token, const std::string& where) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) throw std::invalid_argument(where + ": expected theta:value, got '" + token + "'");
  const double theta = number(trim(token.substr(0, colon)), where);
  std::string rest = trim(token.substr(colon + 1));
  JumpSide side = JumpSide::kRight;
  if (const auto at = rest.find('@'); at != std::string::npos) {
    const std::string tag = trim(rest.substr(at + 1));
    if (tag == "left") {
      side = JumpSide::kLeft;
    } else if (tag != "right") {
      throw std::invalid_argument(where + ": unknown side '" + tag + "'");
    }
    rest = trim(rest.substr(0, at));
  }
  const auto bar = rest.find('|');
  if (bar == std::string::npos) return Breakpoint::continuous(theta, number(rest, where));
  return Breakpoint::jump(theta, number(trim(rest.substr(0, bar)), where), number(trim(rest.substr(bar + 1)), where),
                          side);
}

}  // namespace problem_file_detail

inline StructuredBandit parse_problem(std::istream& is) {
  using namespace problem_file_detail;
  std::map<std::string, std::string> kv;
  std::map<std::size_t, std::string> arms;
  std::string line;
  for (std::size_t lineno = 1; std::getline(is, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("arm.", 0) == 0) {
      const std::string idx = key.substr(4);
      if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad arm key '" + key + "'");
      }
      arms[std::stoul(idx)] = value;
      continue;
    }
    static const std::vector<std::string> known{"name",      "kind",       "sigma2", "theta_min",
                                                "theta_max", "resolution", "points", "ambiguous"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    kv[key] = value;
  }
  if (arms.empty()) throw std::invalid_argument("problem file defines no arms");
  for (std::size_t k = 0; k < arms.size(); ++k) {
    if (!arms.count(k)) throw std::invalid_argument("arms must be numbered 0.." + std::to_string(arms.size() - 1));
  }

  const auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  const std::string kind = get("kind", "interval");
  const double sigma2 = number(get("sigma2", "1"), "sigma2");
  std::vector<MeanFunction> means;
  ParameterSpace space = ParameterSpace::interval(0.0, 1.0);

  if (kind == "interval") {
    if (!kv.count("theta_min") || !kv.count("theta_max")) {
      throw std::invalid_argument("interval problems need theta_min and theta_max");
    }
    const double lo = number(kv["theta_min"], "theta_min");
    const double hi = number(kv["theta_max"], "theta_max");
    const auto res = static_cast<std::size_t>(
        number(get("resolution", std::to_string(ParameterSpace::kDefaultResolution)), "resolution"));
    space = ParameterSpace::interval(lo, hi, res);
    for (const auto& [k, spec] : arms) {
      std::vector<Breakpoint> pts;
      for (const auto& tok : split(spec, ',')) pts.push_back(breakpoint(tok, "arm." + std::to_string(k)));
      means.emplace_back(PiecewiseLinear(std::move(pts)));
    }
  } else if (kind == "finite") {
    if (!kv.count("points")) throw std::invalid_argument("finite problems need a points list");
    space = ParameterSpace::finite(split(kv["points"], ','));
    for (const auto& [k, spec] : arms) {
      Tabulated tab;
      for (const auto& tok : split(spec, ',')) tab.values.push_back(number(tok, "arm." + std::to_string(k)));
      means.emplace_back(std::move(tab));
    }
  } else {
    throw std::invalid_argument("unknown problem kind '" + kind + "'");
  }

  StructuredBandit bandit(std::move(space), std::move(means), sigma2, get("name", "custom"));
  if (kv.count("ambiguous")) {
    for (const auto& tok : split(kv["ambiguous"], ',')) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("ambiguous: expected lo:hi, got '" + tok + "'");
      bandit.mark_ambiguous({number(trim(tok.substr(0, colon)), "ambiguous"),
                             number(trim(tok.substr(colon + 1)), "ambiguous")});
    }
  }
  return bandit;
}

inline StructuredBandit parse_problem_text(const std::string& text) {
  std::istringstream is(text);
  return parse_problem(is);
}

inline StructuredBandit load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open problem file '" + path + "'");
  return parse_problem(is);
}

}  // namespace sbandit
