// One line per acceptance criterion for G2 over F_2; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "weylkit/schur_blocks.hpp"
#include "weylkit/weyl_modules.hpp"

using namespace weylkit;

namespace {

Weight w(int a, int b) { return Weight{a, b}; }

const RootSystem& g2() {
  static const RootSystem rs = root_system("G2");
  return rs;
}

const Workspace& ws() {
  static const Workspace space(g2(), 2);
  return space;
}

// "01 10 | 00 | 20" -> layers, bottom first. Single-digit coordinates only.
std::vector<Layer> parse_layers(const std::string& text) {
  std::vector<Layer> out(1);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "|") {
      out.emplace_back();
      continue;
    }
    out.back().push_back(w(tok[0] - '0', tok[1] - '0'));
  }
  return out;
}

std::multiset<Weight> as_set(const Layer& l) { return {l.begin(), l.end()}; }

std::string show(const Layer& l) {
  std::string s = "{";
  for (std::size_t i = 0; i < l.size(); ++i) s += (i ? " " : "") + l[i].to_compact();
  return s + "}";
}

// Empty string means the layers agree.
std::string compare_series(const SocleSeries& got, const std::string& expected) {
  auto want = parse_layers(expected);
  if (got.layers.size() != want.size())
    return std::to_string(got.layers.size()) + " layers, expected " + std::to_string(want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    if (as_set(got.layers[i]) != as_set(want[i]))
      return "layer " + std::to_string(i + 1) + " is " + show(got.layers[i]) + ", expected " + show(want[i]);
  return {};
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// Head of Delta(lam) by repeatedly factoring out every maximal vector below lam.
Character simple_by_quotients(const Weight& lam) {
  std::shared_ptr<const WeightModule> m = ws().weyl_module(lam)->module_ptr();
  while (true) {
    std::vector<ModuleElement> gens;
    for (auto& [mu, basis] : maximal_vectors(*m))
      if (mu != lam)
        for (auto& v : basis) gens.push_back(ModuleElement{mu, v});
    if (gens.empty()) return m->character();
    m = quotient(m, submodule_generated(*m, gens)).module_ptr();
  }
}

Character ell(int a, int b) { return simple_character(w(a, b), ws()); }

const std::map<Weight, std::string> kSeries = {
    {w(2, 0), "01 10 | 00 | 20"},
    {w(3, 0), "01 10 00 | 20 00 | 20 | 00 | 10 | 30"},
    {w(0, 2), "01 | 20 | 00 | 10 | 30 | 02"},
    {w(2, 1), "01 | 20 | 00 | 10 | 30 | 02 10 | 00 | 20 | 01 00 | 21"},
    {w(4, 0), "10 00 | 00 | 20 | 01 00 | 21 10 | 30 | 02 20 | 00 | 40"},
    {w(1, 2), "10 | 00 | 20 | 01 00 | 21 10 | 30 | 02 20 | 00 | 40 | 02 00 | 20 | 12"},
    {w(3, 1), "11 | 31"},
    {w(0, 3), "00 | 10 | 30 | 02 20 | 00 | 40 | 00 | 20 | 03"},
    {w(5, 0), "01 00 | 21 20 10 | 02 30 00 | 40 02 20 | 00 | 40 | 02 00 | 20 | 12 30 | 10 | 50"},
    {w(2, 2),
     "01 00 | 21 20 10 | 02 30 00 | 40 02 20 | 00 00 | 40 20 | 02 00 | 20 | 03 12 30 | 10 | 50 | 12 | 22"},
};

// Maximal-vector weights, one entry per listed vector.
const std::map<Weight, std::string> kMaximal = {
    {w(2, 0), "20 01 10"},
    {w(3, 0), "30 20 20 01 10 00"},
    {w(0, 2), "02 30 20 01"},
    {w(2, 1), "21 02 30 20 01"},
    {w(4, 0), "40 21 30 20 10 00"},
    {w(1, 2), "12 40 21 30 20 10"},
    {w(3, 1), "31 11"},
    {w(0, 3), "03 40 02 30 10 00"},
    {w(5, 0), "50 12 40 40 21 02 30 20 01 10 00"},
    {w(2, 2), "22 03 50 12 40 40 21 02 30 20 01 10 00"},
};

Outcome criterion1() {
  Outcome o;
  const std::map<Weight, std::int64_t> dims{{w(0, 0), 1}, {w(1, 0), 6}, {w(0, 1), 14}, {w(1, 1), 64}};
  for (const auto& [lam, d] : dims) {
    auto got = simple_character(lam, ws()).total();
    if (got != d) o.fail("dim L" + lam.to_string() + " = " + std::to_string(got));
  }
  if (ell(1, 0) != weyl_character(w(1, 0), g2()) - weyl_character(w(0, 0), g2())) o.fail("l(1,0) != chi(1,0) - chi(0,0)");
  if (o.pass) o.detail = "dims 1, 6, 14, 64; l(1,0) = chi(1,0) - chi(0,0)";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const std::vector<Weight> order = {w(0, 0), w(1, 0), w(0, 1), w(2, 0), w(3, 0), w(0, 2),
                                     w(2, 1), w(4, 0), w(1, 2), w(5, 0), w(0, 3), w(2, 2)};
  const std::vector<std::vector<int>> trivial = {
      {1},
      {1, 1},
      {0, 0, 1},
      {0, 1, 1, 1},
      {1, 1, 1, 2, 1},
      {0, 0, 1, 1, 1, 1},
      {0, 0, 1, 1, 1, 1, 1},
      {1, 1, 0, 1, 1, 0, 1, 1},
      {0, 1, 0, 1, 1, 0, 1, 1, 1},
      {1, 1, 1, 1, 1, 1, 1, 2, 1, 1},
      {1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1},
      {1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1},
  };
  auto check = [&](const std::vector<Weight>& ws_, const std::vector<std::vector<int>>& table) {
    for (std::size_t r = 0; r < ws_.size(); ++r)
      for (std::size_t c = 0; c < ws_.size(); ++c) {
        std::size_t want = c <= r ? static_cast<std::size_t>(table[r][c]) : 0;
        std::size_t got = hom_dimension(ws_[c], ws_[r], ws());
        if (got != want)
          o.fail("Hom(Delta" + ws_[c].to_string() + ", Delta" + ws_[r].to_string() + ") = " + std::to_string(got));
      }
  };
  check(order, trivial);
  check({w(1, 1), w(3, 1)}, {{1}, {1, 1}});
  if (o.pass) o.detail = "12x12 trivial block and 2x2 Steinberg block, cell for cell";
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (const auto& [lam, expected] : kSeries) {
    auto diff = compare_series(socle_series(ws().weyl_module(lam)->module_ptr(), ws()), expected);
    if (!diff.empty()) o.fail("Delta" + lam.to_string() + ": " + diff);
  }
  if (o.pass) o.detail = "10 Weyl modules, layer for layer";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const auto& [lam, expected] : kMaximal) {
    std::map<Weight, std::size_t> want;
    for (const auto& l : parse_layers(expected))
      for (const auto& mu : l) ++want[mu];
    std::map<Weight, std::size_t> got;
    for (const auto& [mu, basis] : maximal_vectors(ws().weyl_module(lam)->module())) got[mu] = basis.size();
    if (got != want) o.fail("Delta" + lam.to_string() + " maximal-vector spaces differ");
  }
  auto top = maximal_vectors(ws().weyl_module(w(2, 2))->module());
  std::size_t vectors = 0;
  for (const auto& [mu, basis] : top) vectors += basis.size();
  if (o.pass)
    o.detail = "10 inventories; Delta(2,2): " + std::to_string(vectors) + " vectors over " + std::to_string(top.size()) +
               " weights, (4,0) of dim " + std::to_string(top.at(w(4, 0)).size());
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::set<Weight> ambiguous;
  for (const auto& lam : saturated_below(w(2, 2), g2()))
    if (is_ambiguous(ws().weyl_module(lam)->module())) ambiguous.insert(lam);
  if (ambiguous != std::set<Weight>{w(3, 0), w(5, 0), w(2, 2)}) o.fail("ambiguous set differs");
  std::string names;
  for (const auto& lam : ambiguous) names += (names.empty() ? "" : " ") + lam.to_string();
  o.detail = (o.pass ? "" : o.detail + ": ") + "ambiguous exactly " + names;
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto b = blocks(w(2, 2), ws());
  std::set<std::set<Weight>> got;
  for (const auto& c : b.classes) got.insert({c.begin(), c.end()});
  std::set<Weight> steinberg{w(1, 1), w(3, 1)};
  std::set<Weight> rest;
  for (const auto& lam : saturated_below(w(2, 2), g2()))
    if (!steinberg.count(lam)) rest.insert(lam);
  if (got != std::set<std::set<Weight>>{steinberg, rest}) o.fail(std::to_string(got.size()) + " classes, not the expected two");
  if (o.pass) o.detail = "{(1,1),(3,1)} and the other 12 weights";
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto s = socle(ws().weyl_module(w(2, 2))->module(), ws());
  if (as_set(s.layer) != std::multiset<Weight>{w(0, 1), w(0, 0)}) o.fail("soc Delta(2,2) = " + show(s.layer));
  for (auto mu : {w(0, 1), w(0, 0)})
    if (hom_dimension(mu, w(2, 2), ws()) != 1) o.fail("Hom(Delta" + mu.to_string() + ", Delta(2,2)) != 1");
  if (o.pass) o.detail = "soc Delta(2,2) = L(0,1) + L(0,0), both Hom dimensions 1";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const std::vector<std::pair<Weight, Weight>> pairs = {
      {w(1, 0), w(0, 0)}, {w(2, 0), w(0, 1)}, {w(2, 0), w(0, 0)}, {w(3, 0), w(2, 0)}, {w(3, 0), w(1, 0)},
      {w(2, 1), w(0, 2)}, {w(2, 1), w(0, 1)}, {w(2, 1), w(0, 0)}, {w(4, 0), w(0, 2)}, {w(4, 0), w(0, 0)},
      {w(5, 0), w(4, 0)}, {w(5, 0), w(1, 0)}, {w(0, 3), w(2, 0)}};
  for (const auto& [lam, mu] : pairs) {
    auto wit = ext1_witness(lam, mu, ws());
    if (!wit) {
      o.fail("no witness for (" + lam.to_string() + ", " + mu.to_string() + ")");
      continue;
    }
    if (wit->quotient_character != simple_character(lam, ws()) + simple_character(mu, ws()))
      o.fail("witness quotient for (" + lam.to_string() + ", " + mu.to_string() + ") has the wrong character");
  }
  if (o.pass) o.detail = std::to_string(pairs.size()) + " witnesses, each quotient of character l(lam) + l(mu)";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto pi = saturated_below(w(2, 2), g2());
  for (const auto& lam : pi) {
    auto delta = ws().weyl_module(lam);
    const auto& m = delta->module();
    if (m.character() != weyl_character(lam, g2())) o.fail("dimension conservation fails for " + lam.to_string());

    // contravariance on the lattice: <x v, u> = <v, y u>
    const auto& lat = delta->lattice();
    for (const auto& s : lat.spaces()) {
      if (!(s.gram == s.gram.transpose())) o.fail("Gram of " + s.weight.to_string() + " not symmetric");
      for (std::size_t i = 0; i < g2().rank(); ++i)
        for (int k = 1;; ++k) {
          auto x = lat.x_power(i, k, s.weight);
          if (x.rows() == 0) break;
          Weight up = s.weight;
          for (std::size_t j = 0; j < up.rank(); ++j) up[j] += k * g2().simple_root(i)[j];
          auto y = lat.y_power(i, k, up);
          if (!(x.transpose() * lat.space(up).gram == s.gram * y))
            o.fail("x/y not adjoint at " + s.weight.to_string() + " in Delta" + lam.to_string());
        }
    }

    Character sum;
    for (const auto& layer : socle_series(delta->module_ptr(), ws()).layers)
      for (const auto& mu : layer) sum += simple_character(mu, ws());
    if (sum != m.character()) o.fail("layer characters of Delta" + lam.to_string() + " do not sum to chi");
  }

  // Steinberg: L(l0 + 2 l1) = L(l0) x L(l1)^[2] with l0 restricted
  if (ell(2, 0) != ell(1, 0).dilate(2)) o.fail("l(2,0) != l(1,0)^[2]");
  if (ell(0, 2) != ell(0, 1).dilate(2)) o.fail("l(0,2) != l(0,1)^[2]");
  if (ell(2, 2) != ell(1, 1).dilate(2)) o.fail("l(2,2) != l(1,1)^[2]");
  if (ell(3, 1) != ell(1, 1) * ell(1, 0).dilate(2)) o.fail("l(3,1) != l(1,1) l(1,0)^[2]");
  if (weyl_character(w(3, 1), g2()) != ell(1, 1) * weyl_character(w(1, 0), g2()).dilate(2))
    o.fail("chi(3,1) != l(1,1) chi(1,0)^[2]");

  for (auto lam : {w(1, 0), w(2, 0), w(0, 2)})
    if (simple_by_quotients(lam) != simple_character(lam, ws()))
      o.fail("Gram rank and iterated quotients disagree on " + lam.to_string());

  if (o.pass)
    o.detail = "dimensions, contravariance, layer sums over all 14 weights; Steinberg and (3,1) identities; two simple-character algorithms agree";
  return o;
}

Outcome criterion10() {
  Outcome o;
  // image of Delta(0,2) -> Delta(2,1) and its cokernel
  auto d21 = ws().weyl_module(w(2, 1));
  auto mv21 = maximal_vectors(d21->module());
  auto image = submodule_generated(d21->module(), {ModuleElement{w(0, 2), mv21.at(w(0, 2)).at(0)}});
  if (image.character() != weyl_character(w(0, 2), g2())) o.fail("image of Delta(0,2) -> Delta(2,1) is not chi(0,2)");
  auto coker = quotient(d21->module_ptr(), image);
  auto diff = compare_series(socle_series(coker.module_ptr(), ws()), "10 | 00 | 20 | 01 00 | 21");
  if (!diff.empty()) o.fail("cokernel of Delta(0,2) -> Delta(2,1): " + diff);

  // Q3: the point of the (2,0) maximal-vector plane in Delta(3,0) whose image has four factors
  auto d30 = ws().weyl_module(w(3, 0));
  const auto mv30 = maximal_vectors(d30->module());
  const auto& plane = mv30.at(w(2, 0));
  const Character target = ell(2, 0) + ell(1, 0) + ell(0, 1) + ell(0, 0);
  int found = 0;
  for (int c = 1; c < 4; ++c) {
    FpVector v(plane[0].size(), 0);
    for (std::size_t k = 0; k < 2; ++k)
      if (c >> k & 1)
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = (v[j] + plane[k][j]) % 2;
    auto s = submodule_generated(d30->module(), {ModuleElement{w(2, 0), v}});
    if (s.character() != target) continue;
    ++found;
    auto q3 = quotient(d30->module_ptr(), s);
    auto mv = maximal_vectors(q3.module());
    std::size_t hom = mv.count(w(0, 0)) ? mv.at(w(0, 0)).size() : 0;
    if (hom != 2) o.fail("dim Hom(Delta(0,0), Q3) = " + std::to_string(hom));
  }
  if (found != 1) o.fail(std::to_string(found) + " candidates for Q3");
  if (o.pass) o.detail = "ch im = chi(0,2); cokernel series 10|00|20|{01,00}|21; dim Hom(Delta(0,0), Q3) = 2";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"restricted simple dimensions", criterion1},
      {"intertwining Hom tables", criterion2},
      {"socle series of ten Weyl modules", criterion3},
      {"maximal-vector inventories", criterion4},
      {"ambiguity flags", criterion5},
      {"blocks of pi", criterion6},
      {"socle of Delta(2,2)", criterion7},
      {"Ext^1 witnesses", criterion8},
      {"property suite", criterion9},
      {"cokernel spot-checks", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o.fail(std::string("exception: ") + ex.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << o.detail
              << " [" << std::fixed << std::setprecision(2) << secs << "s]" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
