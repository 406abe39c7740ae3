#include "cli/fixture.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cli/report.hpp"
#include "weylkit/schur_blocks.hpp"

namespace weylkit::cli {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

struct Context {
  int line = 0;
  std::string system;
  std::uint32_t p = 0;
  std::size_t rank = 0;
};

Weight parse_weight(const std::string& text, const Context& ctx) {
  Weight w;
  try {
    w = Weight::parse(text);
  } catch (const std::exception&) {
    throw FixtureParseError(ctx.line, "bad weight '" + text + "'");
  }
  if (w.rank() != ctx.rank)
    throw FixtureParseError(ctx.line, "weight '" + text + "' does not have rank " + std::to_string(ctx.rank));
  return w;
}

std::int64_t parse_int(const std::string& text, const Context& ctx) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FixtureParseError(ctx.line, "bad integer '" + text + "'");
  }
}

// "a,b" or "a,bxN"
void parse_multiset_token(const std::string& tok, const Context& ctx, Layer& out) {
  auto x = tok.find('x');
  Weight w = parse_weight(tok.substr(0, x), ctx);
  std::int64_t n = x == std::string::npos ? 1 : parse_int(tok.substr(x + 1), ctx);
  if (n < 1) throw FixtureParseError(ctx.line, "multiplicity must be positive in '" + tok + "'");
  for (std::int64_t k = 0; k < n; ++k) out.push_back(w);
}

Layer parse_multiset(const std::string& text, const Context& ctx, char sep = ' ') {
  Layer out;
  auto parts = sep == ' ' ? tokens(text) : split(text, sep);
  for (const auto& t : parts) {
    if (t.empty()) throw FixtureParseError(ctx.line, "empty entry in '" + text + "'");
    parse_multiset_token(t, ctx, out);
  }
  return out;
}

std::vector<Layer> parse_layers(const std::string& text, const Context& ctx) {
  std::vector<Layer> out;
  for (const auto& part : split(text, '|')) {
    Layer l = parse_multiset(part, ctx);
    if (l.empty()) throw FixtureParseError(ctx.line, "empty layer");
    out.push_back(std::move(l));
  }
  return out;
}

bool parse_flag(const std::string& text, const Context& ctx) {
  if (text == "true" || text == "yes") return true;
  if (text == "false" || text == "no") return false;
  throw FixtureParseError(ctx.line, "expected true or false, got '" + text + "'");
}

Selector parse_selector(const std::string& text, const Context& ctx) {
  Selector s;
  s.text = text;
  auto at = text.find('@');
  s.weight = parse_weight(text.substr(0, at), ctx);
  if (at != std::string::npos) {
    std::string rest = text.substr(at + 1);
    if (rest == "*")
      s.all = true;
    else
      s.factors = parse_multiset(rest, ctx, '+');
  }
  return s;
}

struct KindInfo {
  std::size_t positional;
  bool payload;
};

const std::map<std::string, KindInfo>& kinds() {
  static const std::map<std::string, KindInfo> k = {
      {"socle-layers", {1, true}}, {"max-vector-weights", {1, true}}, {"simple-dims", {0, true}},
      {"blocks", {1, true}},       {"ambiguity", {1, true}},          {"hom-table", {1, true}},
      {"image-factors", {1, true}}, {"ext", {2, true}}};
  return k;
}

FixtureRecord parse_record(const std::string& body, const Context& ctx) {
  auto colon = body.find(':');
  if (colon == std::string::npos) throw FixtureParseError(ctx.line, "missing ':' before the expected value");
  auto head = tokens(body.substr(0, colon));
  std::string payload = trim(body.substr(colon + 1));
  FixtureRecord r;
  r.line = ctx.line;
  r.source = trim(body);
  r.system = ctx.system;
  r.p = ctx.p;
  r.kind = head.at(0);
  auto kit = kinds().find(r.kind);
  if (kit == kinds().end()) throw FixtureParseError(ctx.line, "unknown kind '" + r.kind + "'");
  if (ctx.system.empty() || ctx.p == 0) throw FixtureParseError(ctx.line, "'system' and 'prime' must come before records");
  for (std::size_t k = 1; k < head.size(); ++k) {
    const auto& t = head[k];
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      r.weights.push_back(parse_weight(t, ctx));
      continue;
    }
    std::string key = t.substr(0, eq), value = t.substr(eq + 1);
    if (key == "kill" && (r.kind == "socle-layers" || r.kind == "max-vector-weights" || r.kind == "ambiguity"))
      r.kill.push_back(parse_selector(value, ctx));
    else if (key == "gen" && r.kind == "image-factors")
      r.gen = parse_selector(value, ctx);
    else if (key == "block" && r.kind == "hom-table") {
      if (value != "trivial" && value != "steinberg" && value != "all")
        throw FixtureParseError(ctx.line, "block must be trivial, steinberg or all");
      r.block = value;
    } else
      throw FixtureParseError(ctx.line, "option '" + key + "' does not apply to " + r.kind);
  }
  if (r.weights.size() != kit->second.positional)
    throw FixtureParseError(ctx.line, r.kind + " takes " + std::to_string(kit->second.positional) + " weight argument(s)");
  for (const auto& w : r.weights)
    if (!w.is_dominant()) throw FixtureParseError(ctx.line, w.to_string() + " is not dominant");
  if (r.kind == "image-factors" && !r.gen) throw FixtureParseError(ctx.line, "image-factors needs gen=...");
  if (payload.empty()) throw FixtureParseError(ctx.line, "missing expected value");

  if (r.kind == "socle-layers" || r.kind == "blocks") {
    r.layers = parse_layers(payload, ctx);
  } else if (r.kind == "max-vector-weights" || r.kind == "simple-dims") {
    for (const auto& t : tokens(payload)) {
      auto eq = t.find('=');
      if (eq == std::string::npos) throw FixtureParseError(ctx.line, "expected weight=value, got '" + t + "'");
      r.values.emplace_back(parse_weight(t.substr(0, eq), ctx), parse_int(t.substr(eq + 1), ctx));
    }
  } else if (r.kind == "hom-table") {
    for (const auto& row : split(payload, '|')) {
      auto eq = row.find('=');
      if (eq == std::string::npos) throw FixtureParseError(ctx.line, "hom-table rows look like 'a,b = n n ...'");
      std::vector<std::int64_t> entries;
      for (const auto& t : tokens(row.substr(eq + 1))) entries.push_back(parse_int(t, ctx));
      r.rows.emplace_back(parse_weight(trim(row.substr(0, eq)), ctx), std::move(entries));
    }
  } else if (r.kind == "image-factors") {
    r.factors = parse_multiset(payload, ctx);
  } else {
    r.flag = parse_flag(payload, ctx);
  }
  return r;
}

Layer sorted(Layer l) {
  std::sort(l.begin(), l.end());
  return l;
}

std::string layer_braces(const Layer& l) { return "{" + layer_text(l) + "}"; }

struct Evaluator {
  std::shared_ptr<SimpleCharacterCache> cache;
  std::mutex mutex;
  std::map<std::pair<std::string, std::uint32_t>, std::unique_ptr<Workspace>> spaces;

  const Workspace& workspace(const FixtureRecord& r) {
    std::lock_guard lock(mutex);
    auto& slot = spaces[{r.system, r.p}];
    if (!slot) slot = std::make_unique<Workspace>(root_system(r.system), r.p, cache);
    return *slot;
  }
};

std::vector<ModuleElement> resolve(const Selector& s, const WeightModule& m, const Workspace& ws) {
  auto mv = maximal_vectors(m);
  auto it = mv.find(s.weight);
  if (it == mv.end()) throw std::runtime_error("no maximal vector of weight " + s.weight.to_string());
  std::vector<ModuleElement> out;
  if (s.all) {
    for (const auto& v : it->second) out.push_back({s.weight, v});
    return out;
  }
  if (!s.factors) {
    if (it->second.size() != 1)
      throw std::runtime_error("maximal vectors of weight " + s.weight.to_string() + " form a space of dimension " +
                               std::to_string(it->second.size()) + "; name the image factors with @");
    return {{s.weight, it->second[0]}};
  }
  // Projective points of a small space: pick the one with the requested image.
  const auto& basis = it->second;
  const std::uint32_t p = m.p();
  const Layer want = sorted(*s.factors);
  std::vector<std::uint32_t> c(basis.size(), 0);
  while (true) {
    std::size_t k = 0;
    while (k < c.size() && c[k] == p - 1) c[k++] = 0;
    if (k == c.size()) break;
    ++c[k];
    std::size_t lead = 0;
    while (c[lead] == 0) ++lead;
    if (c[lead] != 1) continue;
    FpVector v(basis[0].size(), 0);
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t t = 0; t < v.size(); ++t) v[t] = static_cast<std::uint32_t>((v[t] + std::uint64_t{c[j]} * basis[j][t]) % p);
    ModuleElement e{s.weight, v};
    if (sorted(simple_factors(submodule_generated(m, {e}).character(), ws)) == want) out.push_back(e);
  }
  if (out.size() != 1)
    throw std::runtime_error(std::to_string(out.size()) + " maximal vectors match selector " + s.text);
  return out;
}

std::shared_ptr<const WeightModule> target_module(const FixtureRecord& r, const Workspace& ws) {
  auto delta = ws.weyl_module(r.weights.at(0));
  if (r.kill.empty()) return delta->module_ptr();
  std::vector<ModuleElement> gens;
  for (const auto& s : r.kill)
    for (auto& e : resolve(s, delta->module(), ws)) gens.push_back(std::move(e));
  return quotient(delta->module_ptr(), submodule_generated(delta->module(), gens)).module_ptr();
}

void check_values(const std::map<Weight, std::int64_t>& got, const FixtureRecord& r, const std::string& what,
                  std::vector<std::string>& diffs) {
  std::map<Weight, std::int64_t> want(r.values.begin(), r.values.end());
  for (const auto& [w, v] : want) {
    auto it = got.find(w);
    std::int64_t g = it == got.end() ? 0 : it->second;
    if (g != v) diffs.push_back(what + " " + w.to_string() + ": expected " + std::to_string(v) + ", got " + std::to_string(g));
  }
  if (r.kind == "max-vector-weights")
    for (const auto& [w, v] : got)
      if (!want.count(w)) diffs.push_back(what + " " + w.to_string() + ": not expected, got " + std::to_string(v));
}

std::vector<std::string> evaluate(const FixtureRecord& r, Evaluator& ev) {
  const Workspace& ws = ev.workspace(r);
  const auto& rs = ws.root_system();
  std::vector<std::string> diffs;
  if (r.kind == "socle-layers") {
    auto got = socle_series(target_module(r, ws), ws).layers;
    if (got.size() != r.layers.size())
      diffs.push_back("expected " + std::to_string(r.layers.size()) + " layers, got " + std::to_string(got.size()));
    for (std::size_t k = 0; k < std::max(got.size(), r.layers.size()); ++k) {
      Layer g = k < got.size() ? got[k] : Layer{};
      Layer e = k < r.layers.size() ? r.layers[k] : Layer{};
      if (sorted(g) != sorted(e))
        diffs.push_back("layer " + std::to_string(k + 1) + ": expected " + layer_braces(e) + ", got " + layer_braces(g));
    }
  } else if (r.kind == "max-vector-weights") {
    std::map<Weight, std::int64_t> got;
    for (const auto& [w, b] : maximal_vectors(*target_module(r, ws))) got[w] = static_cast<std::int64_t>(b.size());
    check_values(got, r, "maximal vectors of weight", diffs);
  } else if (r.kind == "simple-dims") {
    std::map<Weight, std::int64_t> got;
    for (const auto& [w, v] : r.values) got[w] = simple_character(w, ws).total();
    check_values(got, r, "dim L", diffs);
  } else if (r.kind == "ambiguity") {
    bool got = is_ambiguous(*target_module(r, ws));
    if (got != r.flag) diffs.push_back(std::string("expected ambiguous = ") + (r.flag ? "true" : "false"));
  } else if (r.kind == "blocks") {
    auto b = blocks(r.weights[0], ws);
    std::set<Layer> got, want;
    for (const auto& c : b.classes) got.insert(sorted(c));
    for (const auto& c : r.layers) want.insert(sorted(c));
    for (const auto& c : want)
      if (!got.count(c)) diffs.push_back("missing block " + layer_braces(c));
    for (const auto& c : got)
      if (!want.count(c)) diffs.push_back("unexpected block " + layer_braces(c));
  } else if (r.kind == "hom-table") {
    auto b = blocks(r.weights[0], ws);
    std::vector<Weight> chosen = b.weights;
    if (r.block != "all") {
      Weight anchor = Weight::zero(rs.rank());
      if (r.block == "steinberg")
        for (std::size_t i = 0; i < rs.rank(); ++i) anchor[i] = static_cast<int>(ws.p()) - 1;
      chosen = b.classes.at(b.class_of(anchor));
    }
    auto t = hom_table(chosen, ws);
    if (t.weights.size() != r.rows.size())
      diffs.push_back("expected " + std::to_string(r.rows.size()) + " rows, got " + std::to_string(t.weights.size()));
    for (std::size_t k = 0; k < std::min(t.weights.size(), r.rows.size()); ++k) {
      const auto& [w, want] = r.rows[k];
      if (w != t.weights[k]) {
        diffs.push_back("row " + std::to_string(k + 1) + ": expected weight " + w.to_string() + ", got " +
                        t.weights[k].to_string());
        continue;
      }
      std::vector<std::int64_t> got(t.table[k].begin(), t.table[k].end());
      if (got != want) {
        std::string g, e;
        for (auto x : got) g += " " + std::to_string(x);
        for (auto x : want) e += " " + std::to_string(x);
        diffs.push_back("row " + w.to_string() + ": expected" + e + ", got" + g);
      }
    }
  } else if (r.kind == "image-factors") {
    auto delta = ws.weyl_module(r.weights[0]);
    auto gens = resolve(*r.gen, delta->module(), ws);
    Layer got = simple_factors(submodule_generated(delta->module(), gens).character(), ws);
    if (sorted(got) != sorted(r.factors))
      diffs.push_back("expected factors " + layer_braces(r.factors) + ", got " + layer_braces(got));
  } else if (r.kind == "ext") {
    bool got = ext1_witness(r.weights[0], r.weights[1], ws).has_value();
    if (got != r.flag) diffs.push_back(std::string("expected witness = ") + (r.flag ? "true" : "false"));
  }
  return diffs;
}

}  // namespace

Fixture parse_fixture(std::istream& in) {
  Fixture f;
  Context ctx;
  bool version_seen = false;
  for (std::string raw; std::getline(in, raw);) {
    ++ctx.line;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto words = tokens(line);
    if (words[0] == "format_version") {
      if (words.size() != 2 || parse_int(words[1], ctx) != kFixtureFormatVersion)
        throw FixtureParseError(ctx.line, "unsupported format_version");
      version_seen = true;
    } else if (words[0] == "system") {
      if (words.size() != 2) throw FixtureParseError(ctx.line, "usage: system <label>");
      try {
        ctx.rank = root_system(words[1]).rank();
      } catch (const std::exception& ex) {
        throw FixtureParseError(ctx.line, ex.what());
      }
      ctx.system = words[1];
    } else if (words[0] == "prime") {
      if (words.size() != 2) throw FixtureParseError(ctx.line, "usage: prime <p>");
      auto p = parse_int(words[1], ctx);
      if (p < 2 || p > 65535 || !is_prime(static_cast<std::uint32_t>(p)))
        throw FixtureParseError(ctx.line, words[1] + " is not a supported prime");
      ctx.p = static_cast<std::uint32_t>(p);
    } else {
      if (!version_seen) throw FixtureParseError(ctx.line, "records must follow 'format_version 1'");
      f.records.push_back(parse_record(line, ctx));
    }
  }
  return f;
}

Fixture parse_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureParseError(0, "cannot open " + path);
  return parse_fixture(in);
}

std::vector<CheckResult> run_fixture(const Fixture& f, std::shared_ptr<SimpleCharacterCache> cache) {
  Evaluator ev;
  ev.cache = std::move(cache);
  std::vector<CheckResult> results(f.records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < f.records.size(); k = next++) {
      const auto& r = f.records[k];
      CheckResult& out = results[k];
      out.line = r.line;
      out.source = r.source;
      try {
        out.diffs = evaluate(r, ev);
      } catch (const std::exception& ex) {
        out.diffs = {std::string("error: ") + ex.what()};
      }
      out.pass = out.diffs.empty();
    }
  };
  const std::size_t n = std::min<std::size_t>(f.records.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

std::string render_text(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << " line " << r.line << ": " << r.source << "\n";
    for (const auto& d : r.diffs) os << "    " << d << "\n";
    failed += !r.pass;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed";
  if (failed) os << ", " << failed << " failed";
  os << "\n";
  return os.str();
}

}  // namespace weylkit::cli
