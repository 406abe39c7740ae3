#include "cli/commands.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "cli/cache_io.hpp"
#include "cli/fixture.hpp"
#include "cli/report.hpp"
#include "weylkit/schur_blocks.hpp"

namespace weylkit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string type = "G2";
  std::size_t rank = 0;
  std::uint32_t p = 2;
  bool json = false;
  std::string cache;
  bool verbose = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--type", c.type, "root system type, e.g. G2, or G together with --rank")->capture_default_str();
  sub->add_option("--rank", c.rank, "rank, when --type is a bare letter");
  sub->add_option("-p", c.p, "characteristic (a prime)")->capture_default_str();
  sub->add_flag("--json", c.json, "structured output");
  sub->add_option("--cache", c.cache, "simple-character cache file (read, then rewritten)");
  sub->add_flag("-v,--verbose", c.verbose, "log cache activity to stderr");
}

RootSystem resolve_system(const Common& c) {
  try {
    bool has_digit = c.type.find_first_of("0123456789") != std::string::npos;
    if (has_digit) {
      auto rs = root_system(c.type);
      if (c.rank && c.rank != rs.rank()) throw UsageError("--rank disagrees with --type " + c.type);
      return rs;
    }
    if (!c.rank) throw UsageError("--type " + c.type + " needs --rank");
    return root_system(c.type, c.rank);
  } catch (const UnknownType& ex) {
    throw UsageError(ex.what());
  }
}

Weight parse_dominant(const std::string& text, const RootSystem& rs, const std::string& flag) {
  Weight w;
  try {
    w = Weight::parse(text);
  } catch (const std::exception&) {
    throw UsageError(flag + ": cannot parse weight '" + text + "' (expected comma-separated integers)");
  }
  if (w.rank() != rs.rank())
    throw UsageError(flag + ": " + rs.label() + " weights have " + std::to_string(rs.rank()) + " coordinates");
  if (!w.is_dominant()) throw UsageError(flag + ": negative coordinates are not allowed");
  return w;
}

// Workspace plus the cache file around one command.
class Session {
 public:
  Session(const Common& c, std::ostream& err) : c_(c), err_(err) {
    rs_ = resolve_system(c);
    if (c.p < 2 || c.p > 65535 || !is_prime(c.p)) throw UsageError("-p: " + std::to_string(c.p) + " is not a supported prime");
    auto cache = std::make_shared<SimpleCharacterCache>();
    if (!c.cache.empty()) {
      std::size_t n = load_cache(c.cache, *cache, err);
      if (c.verbose) err << "[weylkit] cache: loaded " << n << " entries from " << c.cache << "\n";
    }
    ws_ = std::make_unique<Workspace>(*rs_, c.p, cache);
  }

  const RootSystem& rs() const { return *rs_; }
  const Workspace& ws() const { return *ws_; }

  void finish() {
    if (c_.verbose)
      err_ << "[weylkit] simple characters: " << ws_->simple_character_computations() << " computed, "
           << ws_->cache().hits() << " cache hits\n";
    if (!c_.cache.empty()) {
      save_cache(c_.cache, ws_->cache());
      if (c_.verbose) err_ << "[weylkit] cache: wrote " << ws_->cache().size() << " entries to " << c_.cache << "\n";
    }
  }

 private:
  const Common& c_;
  std::ostream& err_;
  std::optional<RootSystem> rs_;
  std::unique_ptr<Workspace> ws_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weyl modules over F_p via the minimal admissible lattice", "weylkit"};
  app.require_subcommand(1);

  Common common;
  std::string weight, below, mu, block = "all", fixture;
  ReportOptions opts;

  auto* module = app.add_subcommand("module", "structure of Delta(lambda)");
  add_common(module, common);
  module->add_option("--weight", weight, "highest weight a,b,...")->required();
  module->add_flag("--socle", opts.socle, "socle series layers");
  module->add_flag("--maximal-vectors", opts.maximal_vectors, "dimensions of the maximal-vector spaces");
  module->add_flag("--decompose", opts.decompose, "decomposition numbers");

  auto* hom = app.add_subcommand("hom", "dim Hom(Delta(mu), Delta(lambda)) over a saturated set");
  add_common(hom, common);
  hom->add_option("--below", below, "top of the saturated set")->required();
  hom->add_option("--block", block, "trivial, steinberg or all")
      ->check(CLI::IsMember({"trivial", "steinberg", "all"}))
      ->capture_default_str();

  auto* blk = app.add_subcommand("blocks", "linkage classes of a saturated set");
  add_common(blk, common);
  blk->add_option("--below", below, "top of the saturated set")->required();

  auto* ext = app.add_subcommand("ext", "length-two quotient of Delta(lambda) certifying Ext^1(L(lambda), L(mu)) != 0");
  add_common(ext, common);
  ext->add_option("--weight", weight, "lambda")->required();
  ext->add_option("--mu", mu, "mu")->required();

  auto* verify = app.add_subcommand("verify", "recheck an expectation fixture");
  verify->add_option("--fixture", fixture, "fixture file")->required();
  verify->add_option("--cache", common.cache, "simple-character cache file");
  verify->add_flag("-v,--verbose", common.verbose, "log cache activity to stderr");
  verify->add_flag("--json", common.json, "structured output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*verify) {
      Fixture f;
      try {
        f = parse_fixture_file(fixture);
      } catch (const FixtureParseError& ex) {
        err << "weylkit: " << fixture << ": " << ex.what() << "\n";
        return kUsage;
      }
      auto cache = std::make_shared<SimpleCharacterCache>();
      if (!common.cache.empty()) {
        std::size_t n = load_cache(common.cache, *cache, err);
        if (common.verbose) err << "[weylkit] cache: loaded " << n << " entries from " << common.cache << "\n";
      }
      auto results = run_fixture(f, cache);
      if (common.verbose)
        err << "[weylkit] simple characters: " << cache->misses() << " computed, " << cache->hits() << " cache hits\n";
      if (!common.cache.empty()) save_cache(common.cache, *cache);
      bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
      if (common.json) {
        nlohmann::json j = {{"format_version", kReportFormatVersion}, {"fixture", fixture}, {"passed", ok}};
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& r : results)
          checks.push_back({{"line", r.line}, {"record", r.source}, {"pass", r.pass}, {"diffs", r.diffs}});
        j["checks"] = checks;
        out << j.dump(2) << "\n";
      } else {
        out << render_text(results);
      }
      return ok ? kSuccess : kVerificationFailed;
    }

    Session s(common, err);
    if (*module) {
      auto lam = parse_dominant(weight, s.rs(), "--weight");
      auto r = module_report(lam, s.ws(), opts);
      if (common.json)
        out << to_json(r, opts).dump(2) << "\n";
      else
        out << render_text(r, opts);
    } else if (*hom) {
      auto top = parse_dominant(below, s.rs(), "--below");
      auto b = blocks(top, s.ws());
      std::vector<Weight> chosen = b.weights;
      if (block != "all") {
        Weight anchor = Weight::zero(s.rs().rank());
        if (block == "steinberg")
          for (std::size_t i = 0; i < anchor.rank(); ++i) anchor[i] = static_cast<int>(common.p) - 1;
        if (std::find(b.weights.begin(), b.weights.end(), anchor) == b.weights.end())
          throw UsageError("--block " + block + ": " + anchor.to_string() + " is not below " + top.to_string());
        chosen = b.classes[b.class_of(anchor)];
      }
      auto t = hom_table(chosen, s.ws());
      out << (common.json ? to_json(t).dump(2) + "\n" : render_text(t));
    } else if (*blk) {
      auto top = parse_dominant(below, s.rs(), "--below");
      auto b = blocks(top, s.ws());
      out << (common.json ? to_json(b, s.ws()).dump(2) + "\n" : render_text(b));
    } else if (*ext) {
      auto lam = parse_dominant(weight, s.rs(), "--weight");
      auto m = parse_dominant(mu, s.rs(), "--mu");
      auto wit = ext1_witness(lam, m, s.ws());
      if (common.json) {
        nlohmann::json j = {{"format_version", kReportFormatVersion}, {"system", s.rs().label()}, {"p", common.p},
                            {"lambda", weight_json(lam)}, {"mu", weight_json(m)}, {"witness", wit.has_value()}};
        if (wit) {
          j["kernel_dimension"] = wit->kernel.total_dim();
          j["quotient_dimension"] = wit->quotient_character.total();
        }
        out << j.dump(2) << "\n";
      } else if (wit) {
        out << wit->report;
      } else {
        out << "no witness: L" << m.to_string() << " does not occur in the second radical layer of Delta"
            << lam.to_string() << "\n";
      }
    }
    s.finish();
    return kSuccess;
  } catch (const UsageError& ex) {
    err << "weylkit: " << ex.what() << "\n";
    return kUsage;
  } catch (const std::exception& ex) {
    err << "weylkit: error: " << ex.what() << "\n";
    return kComputation;
  }
}

}  // namespace weylkit::cli
