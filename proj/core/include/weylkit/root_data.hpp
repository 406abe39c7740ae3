#pragma once

// Root systems of finite type, weights in the fundamental-weight basis,
// dominance order and characters.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weylkit/exact_linalg.hpp"

namespace weylkit {

class UnknownType : public std::invalid_argument {
 public:
  explicit UnknownType(const std::string& what) : std::invalid_argument(what) {}
};

/// Integral weight, coordinates in the basis of fundamental weights.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<int> coords) : coords_(std::move(coords)) {}
  Weight(std::initializer_list<int> coords) : coords_(coords) {}

  static Weight zero(std::size_t rank) { return Weight(std::vector<int>(rank, 0)); }
  /// Parses "a,b,..." (whitespace tolerated). Throws std::invalid_argument.
  static Weight parse(std::string_view text);

  std::size_t rank() const { return coords_.size(); }
  int operator[](std::size_t i) const { return coords_[i]; }
  int& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<int>& coords() const { return coords_; }

  bool is_dominant() const;
  bool is_zero() const;

  Weight& operator+=(const Weight& o);
  Weight& operator-=(const Weight& o);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(int k, Weight a) {
    for (auto& c : a.coords_) c *= k;
    return a;
  }

  auto operator<=>(const Weight&) const = default;
  bool operator==(const Weight&) const = default;

  /// "(a,b)"
  std::string to_string() const;
  /// "a,b"
  std::string to_compact() const;

 private:
  std::vector<int> coords_;
};

std::ostream& operator<<(std::ostream& os, const Weight& w);

struct Root {
  std::vector<int> simple_coords;  // coefficients on the simple roots
  Weight weight;                   // fundamental-weight coordinates
  int height = 0;
};

class RootSystem {
 public:
  /// Cartan matrix convention: cartan[i][j] = <alpha_j, alpha_i^vee>.
  RootSystem(std::string type, std::vector<std::vector<int>> cartan);

  const std::string& type() const { return type_; }
  std::size_t rank() const { return cartan_.size(); }
  /// "G2", "A3", ...
  std::string label() const { return type_ + std::to_string(rank()); }
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }

  /// Positive roots in the fixed order: by height, then simple coordinates
  /// lexicographically descending. Simple roots come first.
  const std::vector<Root>& positive_roots() const { return positive_; }
  std::size_t num_positive_roots() const { return positive_.size(); }
  const Weight& simple_root(std::size_t i) const { return positive_[i].weight; }
  const Weight& rho() const { return rho_; }
  /// (alpha_i, alpha_i)/2, normalized so short roots have 1.
  const std::vector<int>& symmetrizer() const { return sym_; }

  /// Index of a positive root with the given simple coordinates, or -1.
  int root_index(const std::vector<int>& simple_coords) const;
  /// Index of the positive root with this weight, or -1.
  int root_index_of_weight(const Weight& w) const;

  /// <mu, beta^vee> for positive root index k.
  int coroot_pairing(const Weight& mu, std::size_t k) const;
  /// Symmetric form normalized so that short roots have squared length 2.
  Rational inner_product(const Weight& a, const Weight& b) const;
  /// Coordinates of a weight in the simple-root basis (rational in general).
  std::vector<Rational> to_root_coords(const Weight& w) const;
  /// Height of a weight (sum of its simple-root coordinates).
  Rational height(const Weight& w) const;

  Weight reflect(std::size_t simple, const Weight& w) const;
  Weight dominant_conjugate(const Weight& w) const;
  /// Orbit of w under the Weyl group, sorted.
  std::vector<Weight> orbit(const Weight& w) const;

 private:
  std::string type_;
  std::vector<std::vector<int>> cartan_;
  std::vector<int> sym_;
  std::vector<Root> positive_;
  std::map<std::vector<int>, int> index_;
  std::map<Weight, int> weight_index_;
  Weight rho_;
  std::vector<std::vector<Rational>> cartan_inverse_;
};

/// Finite types A1-A4, B2-B4, C2-C4, D4, F4, G2. Throws UnknownType.
RootSystem root_system(std::string_view type, std::size_t rank);
/// Accepts "G2", "A3", ... Throws UnknownType.
RootSystem root_system(std::string_view label);

/// mu <= lam iff lam - mu is a non-negative integer combination of simple roots.
bool dominance_le(const Weight& mu, const Weight& lam, const RootSystem& rs);

/// Strict total order refining dominance: height ascending, then coordinates
/// lexicographically descending.
bool linear_order_less(const Weight& a, const Weight& b, const RootSystem& rs);

/// All dominant mu <= lam, ascending in the linear order.
std::vector<Weight> saturated_below(const Weight& lam, const RootSystem& rs);

/// Covering relations (lower, upper) among the given weights.
std::vector<std::pair<Weight, Weight>> hasse_diagram(const std::vector<Weight>& weights, const RootSystem& rs);

Integer weyl_dimension(const Weight& lam, const RootSystem& rs);

/// Formal character: weight -> multiplicity. Zero multiplicities are never stored.
class Character {
 public:
  using Map = std::map<Weight, std::int64_t>;

  Character() = default;
  explicit Character(Map m);
  static Character of_weight(const Weight& w, std::int64_t mult = 1);

  std::int64_t operator[](const Weight& w) const;
  void add(const Weight& w, std::int64_t mult);
  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::int64_t total() const;
  /// True iff every multiplicity is non-negative.
  bool is_effective() const;

  Character& operator+=(const Character& o);
  Character& operator-=(const Character& o);
  friend Character operator+(Character a, const Character& b) { return a += b; }
  friend Character operator-(Character a, const Character& b) { return a -= b; }
  friend Character operator*(std::int64_t k, const Character& c);
  /// Character of the tensor product.
  friend Character operator*(const Character& a, const Character& b);
  /// Frobenius twist: every weight multiplied by q.
  Character dilate(int q) const;

  bool operator==(const Character&) const = default;

 private:
  Map terms_;
};

/// chi(lam) via Freudenthal's recursion.
Character weyl_character(const Weight& lam, const RootSystem& rs);

/// Multiplicities of the dominant weights of chi(lam).
std::map<Weight, std::int64_t> dominant_multiplicities(const Weight& lam, const RootSystem& rs);

/// Writes ch = sum d_mu basis(mu) by peeling off highest weights in the linear
/// order. basis(mu) must have mu as its unique highest weight with multiplicity 1.
/// Throws std::domain_error if ch is not such a combination.
std::map<Weight, std::int64_t> decompose_character(const Character& ch, const RootSystem& rs,
                                                   const std::function<Character(const Weight&)>& basis);

}  // namespace weylkit
