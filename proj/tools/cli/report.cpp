#include "cli/report.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace weylkit::cli {

using nlohmann::json;

namespace {

json header(const std::string& system, std::uint32_t p) {
  return {{"format_version", kReportFormatVersion}, {"system", system}, {"p", p}};
}

}  // namespace

std::string short_label(const Weight& w) {
  std::string s;
  for (int c : w.coords()) {
    if (c < 0 || c > 9) return w.to_string();
    s += static_cast<char>('0' + c);
  }
  return s;
}

std::string layer_text(const Layer& l) {
  std::string s;
  for (std::size_t k = 0; k < l.size(); ++k) s += (k ? ", " : "") + l[k].to_string();
  return s;
}

json weight_json(const Weight& w) { return w.coords(); }

void prefetch_modules(const std::vector<Weight>& weights, const Workspace& ws) {
  std::atomic<std::size_t> next{0};
  const std::size_t n = std::min<std::size_t>(weights.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < weights.size(); k = next++) {
        try {
          ws.simple_character(weights[k]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

StructureReport module_report(const Weight& lam, const Workspace& ws, const ReportOptions& opts) {
  const auto& rs = ws.root_system();
  auto delta = ws.weyl_module(lam);
  StructureReport r;
  r.system = rs.label();
  r.p = ws.p();
  r.highest_weight = lam;
  r.dimension = delta->module().total_dim();
  r.character = delta->module().character();
  auto mv = maximal_vectors(delta->module());
  for (const auto& [mu, basis] : mv) {
    r.maximal_vectors.emplace_back(mu, basis.size());
    if (basis.size() >= 2) r.ambiguous = true;
  }
  auto desc = [&](const auto& a, const auto& b) { return linear_order_less(b.first, a.first, rs); };
  std::sort(r.maximal_vectors.begin(), r.maximal_vectors.end(), desc);
  if (opts.socle) r.socle_layers = socle_series(delta->module_ptr(), ws).layers;
  if (opts.decompose) {
    for (const auto& [mu, d] : decomposition_numbers(lam, ws)) r.decomposition.emplace_back(mu, d);
    std::sort(r.decomposition.begin(), r.decomposition.end(), desc);
  }
  r.convention = ws.constants().convention();
  for (const auto& root : rs.positive_roots()) r.positive_roots.push_back(root.weight);
  return r;
}

std::string render_text(const StructureReport& r, const ReportOptions& opts) {
  std::ostringstream os;
  os << "Delta" << r.highest_weight.to_string() << " for " << r.system << " over F_" << r.p << "\n";
  os << "dimension: " << r.dimension << "\n";
  os << "weights: " << r.character.terms().size() << " (dominant:";
  for (const auto& [w, m] : r.character.terms())
    if (w.is_dominant()) os << " " << w.to_string() << (m > 1 ? "x" + std::to_string(m) : "");
  os << ")\n";
  os << "ambiguous: " << (r.ambiguous ? "yes" : "no") << "\n";
  if (opts.maximal_vectors) {
    os << "\nmaximal vectors (" << r.maximal_vectors.size() << " weights)\n";
    os << "  weight     dim\n";
    for (const auto& [w, d] : r.maximal_vectors) os << "  " << std::left << std::setw(10) << w.to_string() << " " << d << "\n";
  }
  if (opts.socle && r.socle_layers) {
    const auto& layers = *r.socle_layers;
    os << "\nsocle series (" << layers.size() << " layers)\n";
    os << "  layer | highest weights\n";
    for (std::size_t k = layers.size(); k-- > 0;)
      os << "  " << std::right << std::setw(5) << k + 1 << " | " << layer_text(layers[k]) << "\n";
  }
  if (opts.decompose) {
    os << "\ndecomposition numbers [Delta" << r.highest_weight.to_string() << " : L(mu)]\n";
    for (const auto& [w, d] : r.decomposition) os << "  " << std::left << std::setw(10) << w.to_string() << " " << d << "\n";
  }
  return os.str();
}

json to_json(const StructureReport& r, const ReportOptions& opts) {
  json j = header(r.system, r.p);
  j["highest_weight"] = weight_json(r.highest_weight);
  j["dimension"] = r.dimension;
  json ch = json::array();
  for (const auto& [w, m] : r.character.terms()) ch.push_back(json::array({weight_json(w), m}));
  j["character"] = ch;
  j["ambiguous"] = r.ambiguous;
  json mv = json::array();
  for (const auto& [w, d] : r.maximal_vectors) mv.push_back({{"weight", weight_json(w)}, {"dim", d}});
  j["maximal_vectors"] = mv;
  if (opts.socle && r.socle_layers) {
    json layers = json::array();
    for (const auto& l : *r.socle_layers) {
      json layer = json::array();
      for (const auto& w : l) layer.push_back(weight_json(w));
      layers.push_back(layer);
    }
    j["socle_layers"] = layers;
  }
  if (opts.decompose) {
    json d = json::array();
    for (const auto& [w, m] : r.decomposition) d.push_back({{"weight", weight_json(w)}, {"multiplicity", m}});
    j["decomposition_numbers"] = d;
  }
  j["convention"] = r.convention;
  json roots = json::array();
  for (const auto& w : r.positive_roots) roots.push_back(weight_json(w));
  j["positive_roots"] = roots;
  return j;
}

HomTable hom_table(const std::vector<Weight>& weights, const Workspace& ws) {
  HomTable t;
  t.system = ws.root_system().label();
  t.p = ws.p();
  t.weights = weights;
  std::sort(t.weights.begin(), t.weights.end(),
            [&](const Weight& a, const Weight& b) { return linear_order_less(a, b, ws.root_system()); });
  prefetch_modules(t.weights, ws);
  for (std::size_t r = 0; r < t.weights.size(); ++r) {
    auto mv = maximal_vectors(ws.weyl_module(t.weights[r])->module());
    std::vector<std::size_t> row;
    for (std::size_t c = 0; c <= r; ++c) {
      auto it = mv.find(t.weights[c]);
      row.push_back(it == mv.end() ? 0 : it->second.size());
    }
    t.table.push_back(std::move(row));
  }
  return t;
}

std::string render_text(const HomTable& t) {
  std::size_t width = 2;
  for (const auto& w : t.weights) width = std::max(width, short_label(w).size());
  std::ostringstream os;
  os << "dim Hom(Delta(mu), Delta(lambda)) for " << t.system << " over F_" << t.p << " (rows lambda, columns mu)\n";
  os << std::setw(static_cast<int>(width)) << "";
  for (const auto& w : t.weights) os << " " << std::setw(static_cast<int>(width)) << short_label(w);
  os << "\n";
  for (std::size_t r = 0; r < t.weights.size(); ++r) {
    os << std::setw(static_cast<int>(width)) << short_label(t.weights[r]);
    for (std::size_t c = 0; c <= r; ++c) os << " " << std::setw(static_cast<int>(width)) << t.table[r][c];
    os << "\n";
  }
  return os.str();
}

json to_json(const HomTable& t) {
  json j = header(t.system, t.p);
  json ws = json::array();
  for (const auto& w : t.weights) ws.push_back(weight_json(w));
  j["weights"] = ws;
  j["table"] = t.table;
  return j;
}

std::string render_text(const BlockPartition& b) {
  std::ostringstream os;
  os << b.weights.size() << " weights, " << b.classes.size() << (b.classes.size() == 1 ? " block\n" : " blocks\n");
  for (std::size_t k = 0; k < b.classes.size(); ++k) os << "  block " << k + 1 << ": " << layer_text(b.classes[k]) << "\n";
  return os.str();
}

json to_json(const BlockPartition& b, const Workspace& ws) {
  json j = header(ws.root_system().label(), ws.p());
  json all = json::array();
  for (const auto& w : b.weights) all.push_back(weight_json(w));
  j["weights"] = all;
  json classes = json::array();
  for (const auto& c : b.classes) {
    json cls = json::array();
    for (const auto& w : c) cls.push_back(weight_json(w));
    classes.push_back(cls);
  }
  j["blocks"] = classes;
  return j;
}

}  // namespace weylkit::cli
