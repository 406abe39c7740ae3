#include "weylkit/exact_linalg.hpp"

#include <algorithm>
#include <utility>

namespace weylkit {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw std::invalid_argument("IntMatrix::from_columns: length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

std::vector<Integer> IntMatrix::column(std::size_t c) const {
  std::vector<Integer> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

bool IntMatrix::operator==(const IntMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  Integer t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (sgn(b(k, j)) == 0) continue;
        mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
      }
    }
  return c;
}

std::vector<Integer> operator*(const IntMatrix& a, std::span<const Integer> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("IntMatrix-vector product: shape mismatch");
  std::vector<Integer> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (sgn(x[k]) != 0) mpz_addmul(y[i].get_mpz_t(), a(i, k).get_mpz_t(), x[k].get_mpz_t());
  return y;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
  if (!is_prime(p) || p >= (1u << 16)) throw std::invalid_argument("FpMatrix: modulus must be a prime below 65536");
}

FpMatrix::FpMatrix(std::uint32_t p, std::initializer_list<std::initializer_list<long>> rows)
    : FpMatrix(p, rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t r = 0;
  for (const auto& row_values : rows) {
    if (row_values.size() != cols_) throw std::invalid_argument("FpMatrix: ragged initializer");
    std::size_t c = 0;
    for (long v : row_values) {
      long m = v % static_cast<long>(p);
      (*this)(r, c++) = static_cast<std::uint32_t>(m < 0 ? m + p : m);
    }
    ++r;
  }
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::uint32_t reduce_mod(const Integer& x, std::uint32_t p) {
  return static_cast<std::uint32_t>(mpz_fdiv_ui(x.get_mpz_t(), p));
}

FpMatrix FpMatrix::reduce(const IntMatrix& m, std::uint32_t p) {
  FpMatrix out(p, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = reduce_mod(m(r, c), p);
  return out;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool FpMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint32_t x) { return x == 0; });
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  if (a.cols() != b.rows() || a.modulus() != b.modulus())
    throw std::invalid_argument("FpMatrix product: shape or modulus mismatch");
  const std::uint64_t p = a.modulus();
  FpMatrix c(a.modulus(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += aik * b(k, j);
    }
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = static_cast<std::uint32_t>(acc[j] % p);
  }
  return c;
}

FpVector operator*(const FpMatrix& a, std::span<const std::uint32_t> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("FpMatrix-vector product: shape mismatch");
  FpVector y(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<std::uint64_t>(a(i, k)) * x[k];
    y[i] = static_cast<std::uint32_t>(acc % a.modulus());
  }
  return y;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw std::domain_error("inverse_mod: not invertible");
  return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

RrefResult rref_fp(FpMatrix m) {
  const std::uint64_t p = m.modulus();
  RrefResult out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    const std::uint64_t inv = inverse_mod(m(row, col), m.modulus());
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = static_cast<std::uint32_t>(m(row, c) * inv % p);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const std::uint64_t f = p - m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        m(r, c) = static_cast<std::uint32_t>((m(r, c) + f * m(row, c)) % p);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  out.reduced = std::move(m);
  return out;
}

std::vector<FpVector> nullspace_fp(const FpMatrix& m) {
  const std::uint32_t p = m.modulus();
  RrefResult r = rref_fp(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : r.pivots) is_pivot[c] = true;
  std::vector<FpVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    FpVector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t k = 0; k < r.rank; ++k) {
      std::uint32_t a = r.reduced(k, free);
      v[r.pivots[k]] = a == 0 ? 0 : p - a;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank_fp(const FpMatrix& m) { return rref_fp(m).rank; }

namespace {

// Row operations on (a, v) simultaneously: rows i, j replaced by
// (s*Ri + t*Rj, u*Ri + w*Rj).
void combine_rows(IntMatrix& a, IntMatrix& v, std::size_t i, std::size_t j, const Integer& s, const Integer& t,
                  const Integer& u, const Integer& w) {
  Integer x, y;
  auto apply = [&](IntMatrix& m) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      x = s * m(i, c) + t * m(j, c);
      y = u * m(i, c) + w * m(j, c);
      m(i, c) = x;
      m(j, c) = y;
    }
  };
  apply(a);
  apply(v);
}

void subtract_row_multiple(IntMatrix& m, std::size_t target, std::size_t source, const Integer& q) {
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (sgn(m(source, c)) != 0) mpz_submul(m(target, c).get_mpz_t(), q.get_mpz_t(), m(source, c).get_mpz_t());
}

}  // namespace

HnfResult hnf_columns(const IntMatrix& m) {
  // Row-style HNF of the transpose, tracking the left transform.
  IntMatrix a = m.transpose();
  IntMatrix v = IntMatrix::identity(a.rows());
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  HnfResult out;
  std::size_t row = 0;
  Integer g, s, t, q;
  for (std::size_t col = 0; col < d && row < n; ++col) {
    for (std::size_t i = row + 1; i < n; ++i) {
      if (sgn(a(i, col)) == 0) continue;
      if (sgn(a(row, col)) == 0) {
        combine_rows(a, v, row, i, 0, 1, 1, 0);
        continue;
      }
      Integer x = a(row, col), y = a(i, col);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      Integer u = -y / g, w = x / g;
      combine_rows(a, v, row, i, s, t, u, w);
    }
    if (sgn(a(row, col)) == 0) continue;
    if (sgn(a(row, col)) < 0) {
      for (std::size_t c = 0; c < d; ++c) a(row, c) = -a(row, c);
      for (std::size_t c = 0; c < n; ++c) v(row, c) = -v(row, c);
    }
    for (std::size_t k = 0; k < row; ++k) {
      if (sgn(a(k, col)) == 0) continue;
      mpz_fdiv_q(q.get_mpz_t(), a(k, col).get_mpz_t(), a(row, col).get_mpz_t());
      if (sgn(q) == 0) continue;
      subtract_row_multiple(a, k, row, q);
      subtract_row_multiple(v, k, row, q);
    }
    out.pivot_rows.push_back(col);
    ++row;
  }
  out.rank = row;
  out.hnf = IntMatrix(d, row);
  for (std::size_t k = 0; k < row; ++k)
    for (std::size_t r = 0; r < d; ++r) out.hnf(r, k) = a(k, r);
  out.transform = v.transpose();
  return out;
}

std::vector<Integer> solve_in_hnf(const HnfResult& h, std::span<const Integer> target) {
  if (target.size() != h.hnf.rows()) throw std::invalid_argument("solve_in_hnf: length mismatch");
  std::vector<Integer> residual(target.begin(), target.end());
  std::vector<Integer> x(h.rank);
  Integer rem;
  for (std::size_t k = 0; k < h.rank; ++k) {
    const std::size_t pr = h.pivot_rows[k];
    const Integer& piv = h.hnf(pr, k);
    mpz_tdiv_qr(x[k].get_mpz_t(), rem.get_mpz_t(), residual[pr].get_mpz_t(), piv.get_mpz_t());
    if (sgn(rem) != 0) throw NotInLattice("solve_in_hnf: non-integral coordinate");
    if (sgn(x[k]) == 0) continue;
    for (std::size_t r = pr; r < h.hnf.rows(); ++r)
      if (sgn(h.hnf(r, k)) != 0) mpz_submul(residual[r].get_mpz_t(), x[k].get_mpz_t(), h.hnf(r, k).get_mpz_t());
  }
  for (const auto& r : residual)
    if (sgn(r) != 0) throw NotInLattice("solve_in_hnf: target outside the span");
  return x;
}

std::vector<Integer> solve_integral(const IntMatrix& basis, std::span<const Integer> target) {
  if (target.size() != basis.rows()) throw std::invalid_argument("solve_integral: length mismatch");
  const std::size_t rows = basis.rows(), cols = basis.cols();
  // Gaussian elimination over Q on the augmented system.
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = basis(r, c);
    a[r][cols] = target[r];
  }
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = row;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[row][c];
      for (std::size_t k = c; k <= cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  if (pivots.size() != cols) throw std::invalid_argument("solve_integral: basis columns are dependent");
  for (std::size_t r = row; r < rows; ++r)
    if (sgn(a[r][cols]) != 0) throw NotInLattice("solve_integral: no rational solution");
  std::vector<Integer> x(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    Rational v = a[k][cols] / a[k][pivots[k]];
    if (v.get_den() != 1) throw NotInLattice("solve_integral: solution is not integral");
    x[pivots[k]] = v.get_num();
  }
  return x;
}

std::size_t rank_q(const IntMatrix& m) {
  // Fraction-free (Bareiss) elimination.
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t row = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = row;
    while (piv < rows && sgn(a(piv, c)) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != row)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(piv, k), a(row, k));
    for (std::size_t r = row + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        a(r, k) = a(row, c) * a(r, k) - a(r, c) * a(row, k);
        mpz_divexact(a(r, k).get_mpz_t(), a(r, k).get_mpz_t(), prev.get_mpz_t());
      }
      a(r, c) = 0;
    }
    prev = a(row, c);
    ++row;
  }
  return row;
}

}  // namespace weylkit
