#pragma once

#include <string>
#include <vector>

#include "triad/core/types.hpp"

namespace triad::minilang {

// Canonical value rendering: decimal integers; arrays as bracketed,
// comma-separated decimals, e.g. [1, 2, 3]. Multiple outputs join with ", ".
inline std::string render_value(const Value& v) {
  if (const Int* i = std::get_if<Int>(&v)) return std::to_string(*i);
  const auto& xs = std::get<std::vector<Int>>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(xs[i]);
  }
  out += "]";
  return out;
}

inline std::string render_outputs(const std::vector<Value>& outs) {
  std::string s;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    if (i) s += ", ";
    s += render_value(outs[i]);
  }
  return s;
}

}  // namespace triad::minilang
