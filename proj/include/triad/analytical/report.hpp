#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "triad/core/types.hpp"

namespace triad::analytical {

// Per-edge, per-category acceptance counts in the shape of the empirical A/R
// table, plus the aggregate acceptance rate and the product of the per-edge
// rates. Aggregate and product are reported side by side because the edges
// are not independent and the two genuinely differ.
struct EdgeRateTable {
  struct Cell {
    int accepted = 0;
    int total = 0;
    double rate() const { return total == 0 ? 0.0 : double(accepted) / double(total); }
  };
  struct Column {
    std::array<Cell, 6> edges;  // indexed by CheckKind
    Cell overall;
    double edge_product() const {
      double p = 1.0;
      for (const Cell& c : edges) {
        if (c.total == 0) return 0.0;
        p *= c.rate();
      }
      return p;
    }
  };
  std::map<VariantLabel, Column> columns;
};

inline EdgeRateTable edge_rate_table(std::span<const ConsistencyVerdict> verdicts) {
  if (verdicts.empty()) throw StructuralError("edge_rate_table: no verdicts");
  EdgeRateTable t;
  for (const ConsistencyVerdict& v : verdicts) {
    EdgeRateTable::Column& col = t.columns[v.variant];
    for (CheckKind k : kAllCheckKinds) {
      EdgeRateTable::Cell& c = col.edges[static_cast<int>(k)];
      c.total += 1;
      c.accepted += v.result(k).accepted ? 1 : 0;
    }
    col.overall.total += 1;
    col.overall.accepted += v.overall_accept ? 1 : 0;
  }
  return t;
}

// Plain-text rendering; categories without verdicts render as "-".
inline std::string render_edge_rates(const EdgeRateTable& t) {
  auto fmt = [](double r) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    return std::string(buf);
  };
  const std::array<VariantLabel, 5> order = {VariantLabel::C0_GroundTruth, VariantLabel::C1,
                                             VariantLabel::C2, VariantLabel::C3,
                                             VariantLabel::C6};
  std::string out = "edge";
  for (VariantLabel v : order) out += std::string("\t") + to_string(v);
  out += "\n";
  for (CheckKind k : kAllCheckKinds) {
    out += to_string(k);
    for (VariantLabel v : order) {
      auto it = t.columns.find(v);
      out += "\t";
      out += it == t.columns.end() ? "-" : fmt(it->second.edges[static_cast<int>(k)].rate());
    }
    out += "\n";
  }
  out += "overall";
  for (VariantLabel v : order) {
    auto it = t.columns.find(v);
    out += "\t";
    out += it == t.columns.end() ? "-" : fmt(it->second.overall.rate());
  }
  out += "\nedge-product";
  for (VariantLabel v : order) {
    auto it = t.columns.find(v);
    out += "\t";
    out += it == t.columns.end() ? "-" : fmt(it->second.edge_product());
  }
  out += "\n";
  return out;
}

}  // namespace triad::analytical
