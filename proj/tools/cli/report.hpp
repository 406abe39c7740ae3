#pragma once

// Structure reports for Weyl modules and their text / JSON renderings.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylkit/schur_blocks.hpp"
#include "weylkit/weyl_modules.hpp"

namespace weylkit::cli {

inline constexpr int kReportFormatVersion = 1;

struct ReportOptions {
  bool socle = false;
  bool maximal_vectors = false;
  bool decompose = false;
};

struct StructureReport {
  std::string system;
  std::uint32_t p = 0;
  Weight highest_weight;
  std::size_t dimension = 0;
  Character character;
  bool ambiguous = false;
  std::vector<std::pair<Weight, std::size_t>> maximal_vectors;  // highest weight first
  std::optional<std::vector<Layer>> socle_layers;               // bottom-up
  std::vector<std::pair<Weight, std::int64_t>> decomposition;   // highest weight first
  std::string convention;
  std::vector<Weight> positive_roots;
};

StructureReport module_report(const Weight& lam, const Workspace& ws, const ReportOptions& opts);
std::string render_text(const StructureReport& r, const ReportOptions& opts);
nlohmann::json to_json(const StructureReport& r, const ReportOptions& opts);

/// Weights of a hom table with table[r][c] = dim Hom(Delta(weights[c]), Delta(weights[r])).
struct HomTable {
  std::string system;
  std::uint32_t p = 0;
  std::vector<Weight> weights;  // ascending in the linear order
  std::vector<std::vector<std::size_t>> table;
};

HomTable hom_table(const std::vector<Weight>& weights, const Workspace& ws);
std::string render_text(const HomTable& t);
nlohmann::json to_json(const HomTable& t);

std::string render_text(const BlockPartition& b);
nlohmann::json to_json(const BlockPartition& b, const Workspace& ws);

/// "22" when every coordinate is a single digit, otherwise "(a,b)".
std::string short_label(const Weight& w);
std::string layer_text(const Layer& l);
nlohmann::json weight_json(const Weight& w);

/// Builds the Weyl modules for weights on several threads so later queries hit the memo.
void prefetch_modules(const std::vector<Weight>& weights, const Workspace& ws);

}  // namespace weylkit::cli
