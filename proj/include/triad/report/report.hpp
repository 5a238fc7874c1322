#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "triad/core/types.hpp"

namespace triad::report {

inline constexpr int kVerdictSchemaVersion = 1;

// One verdict as persisted: the run parameters plus the per-edge outcomes.
struct VerdictRecord {
  ConsistencyVerdict verdict;
  int k = 1;
  int m = 3;
  std::uint64_t seed = 0;
};

inline nlohmann::json verdict_to_json(const VerdictRecord& r, bool include_transcripts = true) {
  nlohmann::json j;
  j["schema_version"] = kVerdictSchemaVersion;
  j["instance"] = r.verdict.instance_name;
  j["variant"] = to_string(r.verdict.variant);
  j["k"] = r.k;
  j["m"] = r.m;
  j["seed"] = r.seed;
  j["overall_accept"] = r.verdict.overall_accept;
  nlohmann::json results;
  for (CheckKind kind : kAllCheckKinds) {
    const CheckResult& c = r.verdict.result(kind);
    nlohmann::json rc;
    rc["accepted"] = c.accepted;
    rc["attempts_used"] = c.attempts_used;
    if (c.failure_reason) rc["failure_reason"] = to_string(*c.failure_reason);
    if (include_transcripts) {
      nlohmann::json ts = nlohmann::json::array();
      for (const Transcript& t : c.transcripts)
        ts.push_back({{"task", t.task}, {"generated", t.generated}, {"feedback", t.feedback}});
      rc["transcripts"] = ts;
    }
    results[to_string(kind)] = rc;
  }
  j["results"] = results;
  return j;
}

inline VerdictRecord verdict_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kVerdictSchemaVersion)
    throw StructuralError("verdict line: unsupported schema_version");
  VerdictRecord r;
  r.verdict.instance_name = j.at("instance").get<std::string>();
  r.verdict.variant = parse_variant_label(j.at("variant").get<std::string>());
  r.k = j.at("k").get<int>();
  r.m = j.value("m", 3);
  r.seed = j.value("seed", 0ULL);
  r.verdict.overall_accept = j.at("overall_accept").get<bool>();
  for (CheckKind kind : kAllCheckKinds) {
    const nlohmann::json& rc = j.at("results").at(to_string(kind));
    CheckResult c;
    c.kind = kind;
    c.accepted = rc.at("accepted").get<bool>();
    c.attempts_used = rc.at("attempts_used").get<int>();
    if (rc.contains("failure_reason"))
      c.failure_reason = parse_failure_reason(rc.at("failure_reason").get<std::string>());
    if (rc.contains("transcripts"))
      for (const auto& t : rc.at("transcripts"))
        c.transcripts.push_back({t.at("task").get<std::string>(),
                                 t.at("generated").get<std::string>(),
                                 t.at("feedback").get<std::string>()});
    r.verdict.results[static_cast<int>(kind)] = std::move(c);
  }
  return r;
}

inline std::string to_jsonl(std::span<const VerdictRecord> records,
                            bool include_transcripts = true) {
  std::string out;
  for (const VerdictRecord& r : records)
    out += verdict_to_json(r, include_transcripts).dump() + "\n";
  return out;
}

inline std::vector<VerdictRecord> from_jsonl(const std::string& text) {
  std::vector<VerdictRecord> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(verdict_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct CellCount {
  int accepted = 0;
  int total = 0;
};

// "45/60 (75%)", with the percentage rounded to the nearest integer.
inline std::string render_cell(const CellCount& c) {
  if (c.total == 0) return "-";
  long pct = std::lround(100.0 * double(c.accepted) / double(c.total));
  return std::to_string(c.accepted) + "/" + std::to_string(c.total) + " (" +
         std::to_string(pct) + "%)";
}

inline const std::array<VariantLabel, 5> kCategoryOrder = {
    VariantLabel::C0_GroundTruth, VariantLabel::C1, VariantLabel::C2, VariantLabel::C3,
    VariantLabel::C6};

// Acceptance counts per edge (plus the overall conjunction row), per
// (category, k) column. Cells with no verdicts render as "-". Everything
// here is recomputable from the verdict lines alone.
struct ReportMatrix {
  std::vector<int> k_values;  // sorted, unique
  // cells[(category, k)][row]; rows 0..5 = edges, 6 = overall
  std::map<std::pair<VariantLabel, int>, std::array<CellCount, 7>> cells;

  static ReportMatrix build(std::span<const VerdictRecord> records) {
    ReportMatrix mat;
    std::set<int> ks;
    for (const VerdictRecord& r : records) {
      ks.insert(r.k);
      auto& col = mat.cells[{r.verdict.variant, r.k}];
      for (CheckKind kind : kAllCheckKinds) {
        CellCount& c = col[static_cast<int>(kind)];
        c.total += 1;
        c.accepted += r.verdict.result(kind).accepted ? 1 : 0;
      }
      col[6].total += 1;
      col[6].accepted += r.verdict.overall_accept ? 1 : 0;
    }
    mat.k_values.assign(ks.begin(), ks.end());
    return mat;
  }

  CellCount cell(VariantLabel v, int k, int row) const {
    auto it = cells.find({v, k});
    return it == cells.end() ? CellCount{} : it->second[static_cast<std::size_t>(row)];
  }

  std::string render_table() const {
    std::string out = "edge";
    for (VariantLabel v : kCategoryOrder)
      for (int k : k_values)
        out += std::string("\t") + to_string(v) + " k=" + std::to_string(k);
    out += "\n";
    auto row_line = [&](const std::string& label, int row) {
      std::string line = label;
      for (VariantLabel v : kCategoryOrder)
        for (int k : k_values) line += "\t" + render_cell(cell(v, k, row));
      return line + "\n";
    };
    for (CheckKind kind : kAllCheckKinds)
      out += row_line(to_string(kind), static_cast<int>(kind));
    out += row_line("overall", 6);
    return out;
  }

  std::string render_csv() const {
    std::string out = "edge";
    for (VariantLabel v : kCategoryOrder)
      for (int k : k_values) {
        out += std::string(",") + to_string(v) + " k=" + std::to_string(k) + " accepted," +
               to_string(v) + " k=" + std::to_string(k) + " total";
      }
    out += "\n";
    auto row_line = [&](const std::string& label, int row) {
      std::string line = label;
      for (VariantLabel v : kCategoryOrder)
        for (int k : k_values) {
          CellCount c = cell(v, k, row);
          line += "," + std::to_string(c.accepted) + "," + std::to_string(c.total);
        }
      return line + "\n";
    };
    for (CheckKind kind : kAllCheckKinds)
      out += row_line(to_string(kind), static_cast<int>(kind));
    out += row_line("overall", 6);
    return out;
  }

  nlohmann::json render_json() const {
    nlohmann::json j;
    j["k_values"] = k_values;
    nlohmann::json cols = nlohmann::json::array();
    for (VariantLabel v : kCategoryOrder)
      for (int k : k_values) {
        nlohmann::json col;
        col["category"] = to_string(v);
        col["k"] = k;
        for (CheckKind kind : kAllCheckKinds) {
          CellCount c = cell(v, k, static_cast<int>(kind));
          col[to_string(kind)] = {{"accepted", c.accepted}, {"total", c.total}};
        }
        CellCount o = cell(v, k, 6);
        col["overall"] = {{"accepted", o.accepted}, {"total", o.total}};
        cols.push_back(col);
      }
    j["columns"] = cols;
    return j;
  }
};

// The run summary: one row per category, one acceptance column per k.
inline std::string render_summary(std::span<const VerdictRecord> records) {
  ReportMatrix mat = ReportMatrix::build(records);
  std::string out = "category";
  for (int k : mat.k_values) out += "\tAccept (k=" + std::to_string(k) + ")";
  out += "\n";
  for (VariantLabel v : kCategoryOrder) {
    bool any = false;
    for (int k : mat.k_values)
      if (mat.cell(v, k, 6).total > 0) any = true;
    if (!any) continue;
    out += v == VariantLabel::C0_GroundTruth ? "Ground-Truth"
                                             : std::string("Adversarial-") + to_string(v);
    for (int k : mat.k_values) out += "\t" + render_cell(mat.cell(v, k, 6));
    out += "\n";
  }
  return out;
}

}  // namespace triad::report
