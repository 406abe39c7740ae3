#pragma once

// Line-oriented expectation files and the runner that rechecks them.
//
//   format_version 1
//   system G2
//   prime 2
//   <kind> <weights...> [key=value ...] : <expected>
//
// See docs/formats.md for every kind.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylkit/weyl_modules.hpp"

namespace weylkit::cli {

inline constexpr int kFixtureFormatVersion = 1;

class FixtureParseError : public std::runtime_error {
 public:
  FixtureParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Picks maximal vectors of one weight: the whole space ("a,b@*"), the unique
/// vector ("a,b"), or the point whose generated submodule has the listed
/// composition factors ("a,b@c,d+e,f+...").
struct Selector {
  Weight weight;
  bool all = false;
  std::optional<Layer> factors;
  std::string text;
};

struct FixtureRecord {
  int line = 0;
  std::string source;
  std::string kind;
  std::string system;
  std::uint32_t p = 0;

  std::vector<Weight> weights;    // positional arguments
  std::vector<Selector> kill;     // kill=...; the module is Delta / <selected vectors>
  std::optional<Selector> gen;    // gen=... for image-factors
  std::string block = "all";      // block=... for hom-table

  std::vector<Layer> layers;                              // socle-layers, blocks
  std::vector<std::pair<Weight, std::int64_t>> values;    // max-vector-weights, simple-dims
  std::vector<std::pair<Weight, std::vector<std::int64_t>>> rows;  // hom-table
  Layer factors;                                          // image-factors
  bool flag = false;                                      // ambiguity, ext
};

struct Fixture {
  std::vector<FixtureRecord> records;
};

Fixture parse_fixture(std::istream& in);
Fixture parse_fixture_file(const std::string& path);

struct CheckResult {
  int line = 0;
  std::string source;
  bool pass = false;
  std::vector<std::string> diffs;  // one line per mismatch
};

/// Recomputes every record. Records for the same (system, p) share a workspace,
/// and with it the simple-character cache.
std::vector<CheckResult> run_fixture(const Fixture& f, std::shared_ptr<SimpleCharacterCache> cache);

std::string render_text(const std::vector<CheckResult>& results);

}  // namespace weylkit::cli
