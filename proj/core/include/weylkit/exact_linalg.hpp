#pragma once

// Exact linear algebra over Z, Q and prime fields F_p.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace weylkit {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised by solve_integral when the target has no integral coordinates.
class NotInLattice : public std::runtime_error {
 public:
  explicit NotInLattice(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Integer> column(std::size_t c) const;
  IntMatrix transpose() const;
  bool is_zero() const;
  bool operator==(const IntMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
std::vector<Integer> operator*(const IntMatrix& a, std::span<const Integer> x);

bool is_prime(std::uint32_t p);

/// Dense matrix over F_p, entries kept in [0, p).
class FpMatrix {
 public:
  FpMatrix() = default;
  /// Throws std::invalid_argument unless p is prime and below 2^16.
  FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);
  FpMatrix(std::uint32_t p, std::initializer_list<std::initializer_list<long>> rows);

  static FpMatrix identity(std::uint32_t p, std::size_t n);
  static FpMatrix reduce(const IntMatrix& m, std::uint32_t p);

  std::uint32_t modulus() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<std::uint32_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const std::uint32_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  FpMatrix transpose() const;
  bool is_zero() const;
  bool operator==(const FpMatrix& other) const = default;

 private:
  std::uint32_t p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

using FpVector = std::vector<std::uint32_t>;

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
FpVector operator*(const FpMatrix& a, std::span<const std::uint32_t> x);

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);
std::uint32_t reduce_mod(const Integer& x, std::uint32_t p);

struct RrefResult {
  FpMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank = 0;
};

/// Reduced row echelon form over F_p. Row space is preserved.
RrefResult rref_fp(FpMatrix m);

/// Basis of {x : m x = 0}, one vector per free column, in increasing free-column order.
std::vector<FpVector> nullspace_fp(const FpMatrix& m);

std::size_t rank_fp(const FpMatrix& m);

struct HnfResult {
  /// rows x rank, lower echelon: column k vanishes above pivot_rows[k], pivot positive,
  /// entries left of each pivot reduced into [0, pivot).
  IntMatrix hnf;
  /// cols x cols unimodular, with m * transform = [hnf | 0].
  IntMatrix transform;
  std::vector<std::size_t> pivot_rows;
  std::size_t rank = 0;
};

/// Column Hermite normal form. The column lattice of m equals that of hnf.
HnfResult hnf_columns(const IntMatrix& m);

/// Coordinates of target in the lattice basis given by an HNF (fast forward substitution).
/// Throws NotInLattice.
std::vector<Integer> solve_in_hnf(const HnfResult& h, std::span<const Integer> target);

/// Solve basis * x = target with x integral. basis columns must be linearly independent.
/// Throws NotInLattice if there is no rational solution or it is not integral.
std::vector<Integer> solve_integral(const IntMatrix& basis, std::span<const Integer> target);

/// Rank over Q.
std::size_t rank_q(const IntMatrix& m);

}  // namespace weylkit
