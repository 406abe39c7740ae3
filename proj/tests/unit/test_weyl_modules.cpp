#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "weylkit/weyl_modules.hpp"

using namespace weylkit;

namespace {

const RootSystem& g2() {
  static const RootSystem rs = root_system("G2");
  return rs;
}

Workspace& g2_ws() {
  static Workspace ws(g2(), 2);
  return ws;
}

Weight w(int a, int b) { return Weight{a, b}; }

// Head of Delta(lam) by repeatedly factoring out every maximal vector below lam.
Character simple_by_quotients(const Weight& lam, const Workspace& ws) {
  std::shared_ptr<const WeightModule> m = ws.weyl_module(lam)->module_ptr();
  while (true) {
    std::vector<ModuleElement> gens;
    for (auto& [mu, basis] : maximal_vectors(*m))
      if (mu != lam)
        for (auto& v : basis) gens.push_back(ModuleElement{mu, v});
    if (gens.empty()) return m->character();
    m = quotient(m, submodule_generated(*m, gens)).module_ptr();
  }
}

std::vector<Layer> layers(std::initializer_list<std::initializer_list<std::pair<int, int>>> rows) {
  std::vector<Layer> out;
  for (auto row : rows) {
    Layer l;
    for (auto [a, b] : row) l.push_back(w(a, b));
    out.push_back(l);
  }
  return out;
}

// Published socle layers of Delta(lam) over G2, p = 2 (bottom first).
const std::map<Weight, std::vector<Layer>>& known_series() {
  static const std::map<Weight, std::vector<Layer>> table = {
      {w(2, 0), layers({{{0, 1}, {1, 0}}, {{0, 0}}, {{2, 0}}})},
      {w(3, 0), layers({{{0, 1}, {1, 0}, {0, 0}}, {{2, 0}, {0, 0}}, {{2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}})},
      {w(0, 2), layers({{{0, 1}}, {{2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}, {{0, 2}}})},
      {w(2, 1), layers({{{0, 1}}, {{2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}, {{0, 2}, {1, 0}}, {{0, 0}}, {{2, 0}},
                        {{0, 1}, {0, 0}}, {{2, 1}}})},
      {w(4, 0), layers({{{1, 0}, {0, 0}}, {{0, 0}}, {{2, 0}}, {{0, 1}, {0, 0}}, {{2, 1}, {1, 0}}, {{3, 0}},
                        {{0, 2}, {2, 0}}, {{0, 0}}, {{4, 0}}})},
      {w(3, 1), layers({{{1, 1}}, {{3, 1}}})},
      {w(0, 3), layers({{{0, 0}}, {{1, 0}}, {{3, 0}}, {{0, 2}, {2, 0}}, {{0, 0}}, {{4, 0}}, {{0, 0}}, {{2, 0}},
                        {{0, 3}}})},
  };
  return table;
}

}  // namespace

TEST(WeylModule, DimensionsMatchWeylCharacter) {
  for (const auto& lam : saturated_below(w(2, 2), g2())) {
    auto m = g2_ws().weyl_module(lam);
    EXPECT_EQ(m->module().character(), weyl_character(lam, g2())) << lam;
  }
}

TEST(WeylModule, VermaRouteGivesSameStructure) {
  Straightener st(g2_ws().constants());
  for (auto lam : {w(1, 0), w(2, 0), w(0, 1), w(1, 1)}) {
    auto a = build_weyl_module_verma(lam, 2, st);
    auto b = g2_ws().weyl_module(lam);
    EXPECT_EQ(a.module().character(), b->module().character());
    auto ma = maximal_vectors(a.module());
    auto mb = maximal_vectors(b->module());
    ASSERT_EQ(ma.size(), mb.size()) << lam;
    for (auto& [mu, basis] : ma) EXPECT_EQ(basis.size(), mb[mu].size()) << lam << mu;
  }
}

TEST(SimpleCharacters, GramRankAgreesWithIteratedQuotients) {
  for (const auto& lam : saturated_below(w(2, 2), g2()))
    EXPECT_EQ(simple_character(lam, g2_ws()), simple_by_quotients(lam, g2_ws())) << lam;
}

TEST(SimpleCharacters, SmallDimensions) {
  const std::map<Weight, std::int64_t> dims{{w(0, 0), 1}, {w(1, 0), 6}, {w(0, 1), 14}, {w(1, 1), 64}};
  for (const auto& [lam, d] : dims) EXPECT_EQ(simple_character(lam, g2_ws()).total(), d) << lam;
}

TEST(SimpleCharacters, OtherTypesSmallPrimes) {
  for (auto [label, p] : {std::pair{"A2", 2u}, {"A2", 3u}, {"B2", 2u}, {"B2", 3u}, {"C3", 2u}, {"G2", 3u}}) {
    auto rs = root_system(label);
    Workspace ws(rs, p);
    Weight lam = Weight::zero(rs.rank());
    lam[0] = 2;
    lam[1] = 1;
    for (const auto& mu : saturated_below(lam, rs))
      EXPECT_EQ(simple_character(mu, ws), simple_by_quotients(mu, ws)) << label << " p=" << p << " " << mu;
  }
}

TEST(SimpleCharacters, SteinbergTensorProduct) {
  // L(lam0 + 2 lam1) = L(lam0) x L(lam1)^[2] with lam0 restricted.
  auto& ws = g2_ws();
  for (auto [r, q] : {std::pair{w(1, 1), w(1, 0)}, {w(1, 0), w(1, 0)}, {w(0, 1), w(1, 0)}, {w(0, 0), w(0, 1)},
                      {w(1, 0), w(0, 1)}}) {
    Weight lam = r + 2 * q;
    EXPECT_EQ(simple_character(lam, ws), simple_character(r, ws) * simple_character(q, ws).dilate(2)) << lam;
  }
}

TEST(SimpleCharacters, SteinbergWeylModuleFactorizes) {
  // Delta(3,1) = St x Delta(1,0)^[2], and St = L(1,1) = Delta(1,1).
  auto& ws = g2_ws();
  EXPECT_EQ(simple_character(w(1, 1), ws), weyl_character(w(1, 1), g2()));
  EXPECT_EQ(weyl_character(w(3, 1), g2()), weyl_character(w(1, 1), g2()) * weyl_character(w(1, 0), g2()).dilate(2));
}

TEST(MaximalVectors, DeltaOneZero) {
  auto& ws = g2_ws();
  auto delta = ws.weyl_module(w(1, 0));
  auto mv = maximal_vectors(delta->module());
  ASSERT_EQ(mv.size(), 2u);
  EXPECT_EQ(mv.at(w(1, 0)).size(), 1u);
  ASSERT_EQ(mv.at(w(0, 0)).size(), 1u);
  auto y4 = delta->element(VermaElement::parse("y4", w(1, 0), g2()), ws.constants());
  EXPECT_EQ(y4.weight, w(0, 0));
  EXPECT_FALSE(y4.is_zero());
  EXPECT_EQ(rank_fp(FpMatrix(2, {{static_cast<long>(y4.coords[0]), static_cast<long>(mv.at(w(0, 0))[0][0])}})), 1u);
}

TEST(MaximalVectors, ListedVectorsAreMaximal) {
  auto& ws = g2_ws();
  const std::vector<std::tuple<Weight, std::string>> listed = {
      {w(2, 1), "y1"},
      {w(2, 1), "y1y2 + y3"},
      {w(2, 1), "y1y2y4 + y2y5 + y3y4"},
      {w(2, 1), "y1y2y5 + y1y3y4"},
      {w(4, 0), "y1y4y6 + y3y4y5"},
      {w(4, 0), "y1y3y5y6 + y1^(2)y3y4y6 + y4y5y6"},
      {w(0, 3), "y2y3^(2)y4y5"},
      {w(0, 3), "y2y3y4y5y6"},
      {w(3, 1), "y1y2y5 + y1y3y4 + y1y6 + y3y5 + y4^(2)"},
      {w(5, 0), "y1^(2)"},
      {w(5, 0), "y1y3y4^(3) + y1y3y5y6 + y1y4^(2)y6 + y3y4^(2)y5 + y4y5y6"},
      {w(2, 2), "y1y2y3y4y5y6"},
  };
  for (const auto& [lam, text] : listed) {
    auto delta = ws.weyl_module(lam);
    auto e = delta->element(VermaElement::parse(text, lam, g2()), ws.constants());
    ASSERT_FALSE(e.is_zero()) << lam << " " << text;
    auto mv = maximal_vectors(delta->module());
    ASSERT_TRUE(mv.count(e.weight)) << lam << " " << text;
    Submodule span;
    span.set_space(e.weight, FpMatrix(2, 0, e.coords.size()));
    FpMatrix rows(2, mv[e.weight].size(), e.coords.size());
    for (std::size_t r = 0; r < rows.rows(); ++r)
      for (std::size_t c = 0; c < rows.cols(); ++c) rows(r, c) = mv[e.weight][r][c];
    span.set_space(e.weight, rows);
    EXPECT_TRUE(span.contains(e)) << lam << " " << text;
  }
}

TEST(MaximalVectors, KnownWeights) {
  auto& ws = g2_ws();
  const std::map<Weight, std::vector<std::pair<Weight, std::size_t>>> table = {
      {w(2, 0), {{w(2, 0), 1}, {w(1, 0), 1}, {w(0, 1), 1}}},
      {w(3, 0), {{w(3, 0), 1}, {w(2, 0), 2}, {w(0, 1), 1}, {w(1, 0), 1}, {w(0, 0), 1}}},
      {w(0, 2), {{w(0, 2), 1}, {w(3, 0), 1}, {w(2, 0), 1}, {w(0, 1), 1}}},
      {w(5, 0),
       {{w(5, 0), 1}, {w(1, 2), 1}, {w(4, 0), 2}, {w(2, 1), 1}, {w(0, 2), 1}, {w(3, 0), 1}, {w(2, 0), 1},
        {w(0, 1), 1}, {w(1, 0), 1}, {w(0, 0), 1}}},
  };
  for (const auto& [lam, expect] : table) {
    auto mv = maximal_vectors(ws.weyl_module(lam)->module());
    std::map<Weight, std::size_t> got;
    for (auto& [mu, b] : mv) got[mu] = b.size();
    EXPECT_EQ(got, (std::map<Weight, std::size_t>(expect.begin(), expect.end()))) << lam;
    EXPECT_EQ(hom_dimension(w(0, 0), lam, ws), got.count(w(0, 0)) ? got[w(0, 0)] : 0u);
  }
}

TEST(Socle, KnownSeries) {
  for (const auto& [lam, expect] : known_series()) {
    auto s = socle_series(g2_ws().weyl_module(lam)->module_ptr(), g2_ws());
    EXPECT_EQ(s.layers, expect) << lam;
  }
}

TEST(Socle, LayersConserveTheCharacter) {
  auto& ws = g2_ws();
  for (const auto& lam : saturated_below(w(1, 2), g2())) {
    auto s = socle_series(ws.weyl_module(lam)->module_ptr(), ws);
    Character sum;
    for (const auto& layer : s.layers)
      for (const auto& mu : layer) sum += simple_character(mu, ws);
    EXPECT_EQ(sum, weyl_character(lam, g2())) << lam;
    ASSERT_FALSE(s.layers.empty());
    EXPECT_EQ(s.layers.back(), Layer{lam}) << lam;
  }
}

TEST(Socle, DecompositionNumbersAgreeWithLayers) {
  auto& ws = g2_ws();
  for (auto lam : {w(3, 0), w(2, 1), w(0, 3)}) {
    auto d = decomposition_numbers(lam, ws);
    std::map<Weight, std::int64_t> counted;
    for (const auto& layer : socle_series(ws.weyl_module(lam)->module_ptr(), ws).layers)
      for (const auto& mu : layer) ++counted[mu];
    EXPECT_EQ(d, counted) << lam;
  }
}

TEST(Quotient, CokernelsOfDeltaThreeZero) {
  auto& ws = g2_ws();
  auto delta = ws.weyl_module(w(3, 0));
  auto mv = maximal_vectors(delta->module());
  auto series_mod = [&](std::vector<ModuleElement> gens) {
    auto sub = submodule_generated(delta->module(), gens);
    return socle_series(quotient(delta->module_ptr(), sub).module_ptr(), ws).layers;
  };
  EXPECT_EQ(series_mod({{w(0, 1), mv.at(w(0, 1))[0]}}),
            layers({{{1, 0}, {0, 0}}, {{2, 0}, {0, 0}}, {{2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}}));
  EXPECT_EQ(series_mod({{w(1, 0), mv.at(w(1, 0))[0]}}),
            layers({{{0, 1}, {0, 0}, {0, 0}}, {{2, 0}, {2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}}));
  EXPECT_EQ(series_mod({{w(0, 0), mv.at(w(0, 0))[0]}}),
            layers({{{0, 1}, {1, 0}}, {{2, 0}, {0, 0}}, {{2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}}));
  EXPECT_EQ(series_mod({{w(0, 1), mv.at(w(0, 1))[0]}, {w(1, 0), mv.at(w(1, 0))[0]}}),
            layers({{{0, 0}, {0, 0}}, {{2, 0}, {2, 0}}, {{0, 0}}, {{1, 0}}, {{3, 0}}}));
}

TEST(Quotient, ProjectAndLiftRoundTrip) {
  auto& ws = g2_ws();
  auto delta = ws.weyl_module(w(2, 0));
  auto mv = maximal_vectors(delta->module());
  auto sub = submodule_generated(delta->module(), {{w(0, 1), mv.at(w(0, 1))[0]}});
  auto q = quotient(delta->module_ptr(), sub);
  EXPECT_EQ(q.module().total_dim() + sub.total_dim(), delta->module().total_dim());
  std::mt19937 rng(7);
  for (const auto& sp : q.module().spaces()) {
    FpVector v(sp.dim);
    for (auto& x : v) x = rng() % 2;
    ModuleElement e{sp.weight, v};
    auto back = q.project(q.lift(e));
    EXPECT_EQ(back.coords, v);
  }
  EXPECT_EQ(q.preimage(Submodule{}), sub);
}

TEST(Quotient, RejectsNonSubmodule) {
  auto& ws = g2_ws();
  auto delta = ws.weyl_module(w(1, 0));
  Submodule bogus;
  bogus.set_space(w(2, -1), FpMatrix(2, {{1}}));
  EXPECT_THROW(quotient(delta->module_ptr(), bogus), NotASubmodule);
}

TEST(Submodule, GeneratedIsClosedAndCanonical) {
  auto& ws = g2_ws();
  auto delta = ws.weyl_module(w(2, 1));
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto& sp = delta->module().spaces()[rng() % delta->module().spaces().size()];
    FpVector v(sp.dim);
    for (auto& x : v) x = rng() % 2;
    auto s = submodule_generated(delta->module(), {{sp.weight, v}});
    EXPECT_NO_THROW(check_submodule(delta->module(), s));
    EXPECT_EQ(submodule_sum(s, s), s);
    EXPECT_TRUE(s.contains({sp.weight, v}));
  }
}

TEST(Ambiguity, KnownModules) {
  auto& ws = g2_ws();
  for (auto lam : {w(3, 0), w(5, 0), w(2, 2)}) EXPECT_TRUE(is_ambiguous(ws.weyl_module(lam)->module())) << lam;
  for (auto lam : {w(2, 0), w(0, 2), w(2, 1), w(4, 0), w(1, 2), w(3, 1), w(0, 3)})
    EXPECT_FALSE(is_ambiguous(ws.weyl_module(lam)->module())) << lam;
}

TEST(Ext, KnownWitnesses) {
  auto& ws = g2_ws();
  const std::vector<std::pair<Weight, Weight>> nonsplit = {
      {w(1, 0), w(0, 0)}, {w(2, 0), w(0, 1)}, {w(2, 0), w(0, 0)}, {w(3, 0), w(2, 0)}, {w(3, 0), w(1, 0)},
      {w(2, 1), w(0, 2)}, {w(2, 1), w(0, 0)}, {w(2, 1), w(0, 1)}, {w(4, 0), w(0, 2)}, {w(4, 0), w(0, 0)},
      {w(1, 2), w(0, 2)}, {w(1, 2), w(2, 0)}, {w(0, 3), w(2, 0)}, {w(5, 0), w(4, 0)}, {w(5, 0), w(1, 0)}};
  for (const auto& [lam, mu] : nonsplit) {
    auto wit = ext1_witness(lam, mu, ws);
    ASSERT_TRUE(wit.has_value()) << lam << " " << mu;
    EXPECT_EQ(wit->quotient_character, simple_character(lam, ws) + simple_character(mu, ws));
    EXPECT_NO_THROW(check_submodule(ws.weyl_module(lam)->module(), wit->kernel));
  }
}

TEST(Ext, OnlyOneExtensionOfLZeroThree) {
  auto& ws = g2_ws();
  for (const auto& mu : saturated_below(w(0, 3), g2())) {
    if (mu == w(0, 3)) continue;
    EXPECT_EQ(ext1_witness(w(0, 3), mu, ws).has_value(), mu == w(2, 0)) << mu;
  }
  EXPECT_FALSE(ext1_witness(w(0, 3), w(0, 3), ws).has_value());
  EXPECT_FALSE(ext1_witness(w(1, 0), w(2, 0), ws).has_value());
}

TEST(Nabla, HeadIsTheWeylSocle) {
  auto& ws = g2_ws();
  auto rad = nabla_radical_layers(w(0, 2), ws);
  ASSERT_EQ(rad.size(), 6u);
  EXPECT_EQ(rad.back(), Layer{w(0, 1)});
  EXPECT_EQ(rad.front(), Layer{w(0, 2)});
}

TEST(Nabla, DualSocleSeriesIsReversed) {
  // soc^i of nabla is dual to Delta / rad^i, so the socle series of nabla has
  // lam at the bottom and the same number of layers.
  auto& ws = g2_ws();
  for (auto lam : {w(2, 0), w(0, 2), w(2, 1)}) {
    auto nabla = std::make_shared<const WeightModule>(contravariant_dual(ws.weyl_module(lam)->module()));
    auto s = socle_series(nabla, ws);
    auto d = socle_series(ws.weyl_module(lam)->module_ptr(), ws);
    EXPECT_EQ(s.layers.front(), Layer{lam});
    EXPECT_EQ(s.length(), d.length());
    EXPECT_EQ(contravariant_dual(*nabla).character(), nabla->character());
  }
}

TEST(Cache, CountsHitsAndSharesAcrossWorkspaces) {
  auto cache = std::make_shared<SimpleCharacterCache>();
  Workspace a(g2(), 2, cache);
  auto ch = simple_character(w(2, 0), a);
  EXPECT_EQ(a.simple_character_computations(), 1u);
  Workspace b(g2(), 2, cache);
  EXPECT_EQ(simple_character(w(2, 0), b), ch);
  EXPECT_EQ(b.simple_character_computations(), 0u);
  EXPECT_GE(cache->hits(), 1u);
  Workspace c(g2(), 3, cache);
  simple_character(w(2, 0), c);
  EXPECT_EQ(c.simple_character_computations(), 1u);
  EXPECT_EQ(cache->size(), 2u);
}

TEST(Cache, ConcurrentQueriesAgree) {
  Workspace ws(g2(), 2);
  auto weights = saturated_below(w(2, 1), g2());
  std::vector<std::map<Weight, Character>> results(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t)
    threads.emplace_back([&, t] {
      for (std::size_t k = 0; k < weights.size(); ++k) {
        const auto& mu = weights[(k + t) % weights.size()];
        results[t][mu] = simple_character(mu, ws);
      }
    });
  for (auto& th : threads) th.join();
  for (std::size_t t = 1; t < results.size(); ++t) EXPECT_EQ(results[t], results[0]);
  EXPECT_EQ(ws.cache().size(), weights.size());
}

TEST(Socle, EnumerationLimit) {
  // A direct sum of many trivial modules has a huge space of maximal vectors.
  auto rs = root_system("A1");
  WeightModule m(rs, 2);
  WeightModule::Space s;
  s.weight = Weight{0};
  s.dim = 13;
  s.x.resize(1);
  s.y.resize(1);
  m.add_space(s);
  Workspace ws(rs, 2);
  EXPECT_THROW(socle(m, ws), EnumerationTooLarge);
}
