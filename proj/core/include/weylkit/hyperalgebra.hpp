#pragma once

// Chevalley basis data, divided-power PBW monomials, straightening on Verma
// modules, and the integral lattice U_Z v0 inside the simple module V(lam).

#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "weylkit/exact_linalg.hpp"
#include "weylkit/root_data.hpp"

namespace weylkit {

/// A lattice computation produced a non-integral coordinate. Always a bug.
class LatticeIntegralityViolation : public std::logic_error {
 public:
  explicit LatticeIntegralityViolation(const std::string& what) : std::logic_error(what) {}
};

class WeightNotInModule : public std::invalid_argument {
 public:
  explicit WeightNotInModule(const std::string& what) : std::invalid_argument(what) {}
};

struct GeneratorSymbol {
  enum class Kind { x, y };
  Kind kind = Kind::y;
  std::size_t root = 0;  // index into the positive roots
  int power = 1;

  /// "x3^(2)", "y1"
  std::string to_string() const;
  auto operator<=>(const GeneratorSymbol&) const = default;
};

/// y_1^(a_1) ... y_N^(a_N), factors in positive-root order.
class PbwMonomial {
 public:
  PbwMonomial() = default;
  explicit PbwMonomial(std::vector<int> exponents);
  static PbwMonomial identity(std::size_t num_roots) { return PbwMonomial(std::vector<int>(num_roots, 0)); }

  const std::vector<int>& exponents() const { return exps_; }
  int operator[](std::size_t k) const { return exps_[k]; }
  int degree() const;
  bool is_identity() const { return degree() == 0; }
  /// Sum of a_k beta_k; the monomial lowers weights by this amount.
  Weight weight_offset(const RootSystem& rs) const;

  /// "y1y6^(2)", or "1" for the identity. Roots are numbered from 1.
  std::string to_string() const;

  auto operator<=>(const PbwMonomial&) const = default;

 private:
  std::vector<int> exps_;
};

/// Element of the Verma module M(lam): a rational combination of divided-power monomials applied to v0.
class VermaElement {
 public:
  VermaElement() = default;
  VermaElement(Weight highest, std::size_t num_roots) : highest_(std::move(highest)), num_roots_(num_roots) {}
  static VermaElement highest_weight_vector(const Weight& lam, std::size_t num_roots);

  /// Parses e.g. "y1y6 + y3y5 - 2 y4^(2)" (a trailing "v0" is accepted) in M(lam).
  static VermaElement parse(std::string_view text, const Weight& lam, const RootSystem& rs);

  const Weight& highest_weight() const { return highest_; }
  std::size_t num_roots() const { return num_roots_; }
  const std::map<PbwMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True iff every coefficient is an integer.
  bool is_integral() const;
  Rational coefficient(const PbwMonomial& m) const;
  /// Coefficient of v0.
  Rational constant_term() const;

  void add(const PbwMonomial& m, const Rational& c);
  VermaElement& operator+=(const VermaElement& o);
  friend VermaElement operator*(const Rational& c, const VermaElement& v);

  std::string to_string() const;
  bool operator==(const VermaElement&) const = default;

 private:
  Weight highest_;
  std::size_t num_roots_ = 0;
  std::map<PbwMonomial, Rational> terms_;
};

/// Structure constants of a Chevalley basis. Roots are addressed by signed
/// index: s < N is the positive root s, s >= N is the negative of root s - N.
/// Signs follow the extraspecial-pair convention: for each non-simple positive
/// root gamma, with alpha_i the first simple root such that gamma - alpha_i is a
/// root, N_{alpha_i, gamma - alpha_i} > 0.
class ChevalleyConstants {
 public:
  explicit ChevalleyConstants(const RootSystem& rs);

  const RootSystem& root_system() const { return rs_; }
  std::size_t num_positive() const { return rs_.num_positive_roots(); }
  Weight root_weight(std::size_t s) const;
  static std::size_t negative(std::size_t k, std::size_t n) { return k + n; }
  /// Signed index of alpha_s + alpha_t, or -1.
  int root_sum(std::size_t s, std::size_t t) const;
  /// N_{s,t} with [x_s, x_t] = N_{s,t} x_{s+t}; 0 when the sum is not a root.
  int structure_constant(std::size_t s, std::size_t t) const;
  /// <beta, alpha^vee> for signed roots.
  int cartan_integer(std::size_t beta, std::size_t alpha) const;

  /// How a non-simple positive root vector is built: x_gamma = [x_simple, x_rest] / divisor,
  /// y_gamma = [y_rest, y_simple] / divisor.
  struct Ladder {
    std::size_t simple = 0;
    std::size_t rest = 0;
    int divisor = 1;
  };
  const Ladder& ladder(std::size_t k) const { return ladders_.at(k); }

  /// Human-readable description of the sign convention and root order, for reports.
  std::string convention() const;

 private:
  RootSystem rs_;
  std::vector<Ladder> ladders_;
  std::vector<std::vector<int>> n_;
  std::vector<std::vector<int>> sums_;
};

ChevalleyConstants chevalley_constants(const RootSystem& rs);

/// All divided-power monomials whose weight offset equals the given root-coordinate vector.
std::vector<PbwMonomial> pbw_monomials(const std::vector<int>& root_coords, const RootSystem& rs);

/// Straightens hyperalgebra actions on Verma modules over Q. Products of a root
/// vector with an ordinary PBW monomial are memoized; the memo is safe to share
/// between threads.
class Straightener {
 public:
  explicit Straightener(const ChevalleyConstants& cc);

  const ChevalleyConstants& constants() const { return cc_; }

  /// Acts by x_k^(m) or y_k^(m). Throws LatticeIntegralityViolation if v is
  /// integral and the result is not.
  VermaElement apply(const GeneratorSymbol& g, const VermaElement& v) const;

  std::size_t memo_size() const;

 private:
  using Mono = std::vector<int>;
  using Terms = std::map<Mono, Rational>;
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& k) const noexcept;
  };

  const Terms& lower(std::size_t b, const Mono& m) const;
  const Terms& raise(const Weight& lam, std::size_t b, const Mono& m) const;
  Terms lower_terms(std::size_t b, const Terms& t) const;

  ChevalleyConstants cc_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::vector<int>, std::shared_ptr<const Terms>, KeyHash> memo_;
};

VermaElement apply_generator(const GeneratorSymbol& g, const VermaElement& v, const ChevalleyConstants& cc);

/// Contravariant form on the Verma weight space mu of M(lam), in the basis
/// returned by pbw_monomials. Throws WeightNotInModule.
IntMatrix contravariant_gram(const Weight& lam, const Weight& mu, const Straightener& st);
IntMatrix contravariant_gram(const Weight& lam, const Weight& mu, const RootSystem& rs, const ChevalleyConstants& cc);

/// The lattice V(lam)_Z = U_Z v0 with Z-bases on every weight space, the
/// simple divided-power actions and the contravariant form.
class IntegralModule {
 public:
  struct Space {
    Weight weight;
    int depth = 0;  // height of lam - weight
    std::size_t dim = 0;
    IntMatrix gram;
    /// e[i]: V_mu -> V_{mu + alpha_i}; 0 x dim when the target is not a weight.
    std::vector<IntMatrix> e;
    /// f[i][m-1]: V_{mu + m alpha_i} -> V_mu, for every m with mu + m alpha_i a weight.
    std::vector<std::vector<IntMatrix>> f;
  };

  IntegralModule(const RootSystem& rs, Weight lam) : rs_(rs), lam_(std::move(lam)) {}

  const RootSystem& root_system() const { return rs_; }
  const Weight& highest_weight() const { return lam_; }
  /// Weight spaces by increasing depth.
  const std::vector<Space>& spaces() const { return spaces_; }
  int index_of(const Weight& mu) const;
  const Space& space(const Weight& mu) const;
  std::size_t dim(const Weight& mu) const;
  std::size_t total_dim() const;

  /// x_i^(m): V_mu -> V_{mu + m alpha_i}. Zero-row matrix when the target is not a weight.
  IntMatrix x_power(std::size_t i, int m, const Weight& mu) const;
  /// y_i^(m): V_mu -> V_{mu - m alpha_i}.
  IntMatrix y_power(std::size_t i, int m, const Weight& mu) const;

  /// Acts by the root vector of a signed root on a vector of V_mu.
  std::vector<Integer> apply_root_vector(std::size_t signed_root, const Weight& mu, std::span<const Integer> v,
                                         const ChevalleyConstants& cc) const;
  /// Lattice coordinates of mono v0; the result lies in weight lam - offset.
  std::vector<Integer> pbw_image(const PbwMonomial& mono, const ChevalleyConstants& cc) const;
  /// Lattice coordinates of an integral Verma element (its image in V(lam)).
  std::vector<Integer> verma_image(const VermaElement& v, const ChevalleyConstants& cc) const;
  Weight weight_of(const VermaElement& v) const;

  // Used by the builders.
  void add_space(Space s);
  void set_gram(const Weight& mu, IntMatrix g);

 private:
  RootSystem rs_;
  Weight lam_;
  std::vector<Space> spaces_;
  std::map<Weight, int> index_;
};

/// Builds V(lam)_Z weight space by weight space: V_Z,mu is spanned by the
/// f_i^(m) V_Z,mu+m alpha_i, and each vector is recorded through its images
/// under the e_j, which determine it.
IntegralModule build_integral_module(const Weight& lam, const RootSystem& rs);

/// Same lattice obtained from the Verma module: the Z-basis of each weight space
/// is the column Hermite form of the contravariant Gram matrix. Much slower;
/// kept as an independent route.
IntegralModule build_integral_module_verma(const Weight& lam, const Straightener& st);

}  // namespace weylkit
