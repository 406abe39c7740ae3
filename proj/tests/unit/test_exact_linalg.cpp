#include <gtest/gtest.h>

#include <random>

#include "weylkit/exact_linalg.hpp"

using namespace weylkit;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int range) {
  std::uniform_int_distribution<int> dist(-range, range);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

// Naive rank over Q: fraction-free elimination on a copy, no pivoting tricks.
std::size_t naive_rank(IntMatrix m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(piv, k), m(rank, k));
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      Integer a = m(rank, c), b = m(r, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) = a * m(r, k) - b * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

Integer det(IntMatrix m) {
  const std::size_t n = m.rows();
  Rational d = 1;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d.get_num();
}

}  // namespace

TEST(Fp, InverseAndReduce) {
  EXPECT_EQ(inverse_mod(3, 7), 5u);
  EXPECT_EQ(reduce_mod(Integer(-1), 5), 4u);
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(65521));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
  EXPECT_THROW(FpMatrix(4, 1, 1), std::invalid_argument);
}

TEST(Fp, RrefAndNullspace) {
  FpMatrix m(2, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  auto r = rref_fp(m);
  EXPECT_EQ(r.rank, 2u);
  auto ns = nullspace_fp(m);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0], (FpVector{1, 1, 1}));
  FpMatrix q(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  EXPECT_EQ(rank_fp(q), 3u);
}

TEST(Fp, NullspaceIsKernelRandom) {
  std::mt19937 rng(7);
  for (std::uint32_t p : {2u, 3u, 5u, 101u}) {
    for (int t = 0; t < 20; ++t) {
      auto im = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 7, 4);
      auto m = FpMatrix::reduce(im, p);
      auto ns = nullspace_fp(m);
      EXPECT_EQ(ns.size() + rank_fp(m), m.cols());
      for (const auto& v : ns) {
        auto img = m * v;
        for (auto x : img) EXPECT_EQ(x, 0u);
      }
    }
  }
}

TEST(Hnf, SmallExample) {
  IntMatrix m{{2, 4}, {3, 6}, {1, 5}};
  auto h = hnf_columns(m);
  EXPECT_EQ(h.rank, 2u);
  auto mt = m * h.transform;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(mt(r, c), h.hnf(r, c));
}

TEST(Hnf, PropertiesRandom) {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 8;
    auto m = random_matrix(rng, r, c, 5);
    if (t % 3 == 0)  // force dependent columns
      for (std::size_t i = 0; i < r; ++i) m(i, c - 1) = 2 * m(i, 0);
    auto h = hnf_columns(m);
    EXPECT_EQ(h.rank, naive_rank(m));
    EXPECT_EQ(h.rank, rank_q(m));
    auto mt = m * h.transform;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) EXPECT_EQ(mt(i, j), j < h.rank ? h.hnf(i, j) : Integer(0));
    EXPECT_EQ(abs(det(h.transform)), 1);
    for (std::size_t k = 0; k < h.rank; ++k) {
      std::size_t pr = h.pivot_rows[k];
      EXPECT_GT(h.hnf(pr, k), 0);
      for (std::size_t i = 0; i < pr; ++i) EXPECT_EQ(h.hnf(i, k), 0);
      for (std::size_t j = 0; j < k; ++j) {
        EXPECT_GE(h.hnf(pr, j), 0);
        EXPECT_LT(h.hnf(pr, j), h.hnf(pr, k));
      }
    }
    // Every original column lies in the lattice.
    for (std::size_t j = 0; j < c; ++j) {
      auto col = m.column(j);
      auto x = solve_in_hnf(h, col);
      std::vector<Integer> back(r, 0);
      for (std::size_t k = 0; k < h.rank; ++k)
        for (std::size_t i = 0; i < r; ++i) back[i] += h.hnf(i, k) * x[k];
      EXPECT_EQ(back, col);
    }
  }
}

TEST(Hnf, NotInLattice) {
  IntMatrix m{{2}, {0}};
  auto h = hnf_columns(m);
  std::vector<Integer> odd{Integer(1), Integer(0)};
  EXPECT_THROW(solve_in_hnf(h, odd), NotInLattice);
  std::vector<Integer> off{Integer(2), Integer(1)};
  EXPECT_THROW(solve_in_hnf(h, off), NotInLattice);
  EXPECT_THROW(solve_integral(m, odd), NotInLattice);
  std::vector<Integer> ok{Integer(-4), Integer(0)};
  EXPECT_EQ(solve_integral(m, ok), std::vector<Integer>{Integer(-2)});
}
