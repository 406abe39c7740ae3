#pragma once

// Weyl modules over F_p and their submodule structure.

#include <atomic>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "weylkit/exact_linalg.hpp"
#include "weylkit/hyperalgebra.hpp"
#include "weylkit/root_data.hpp"

namespace weylkit {

class EnumerationTooLarge : public std::runtime_error {
 public:
  explicit EnumerationTooLarge(const std::string& what) : std::runtime_error(what) {}
};

class NotASubmodule : public std::invalid_argument {
 public:
  explicit NotASubmodule(const std::string& what) : std::invalid_argument(what) {}
};

/// Projective enumeration of a maximal-vector space stops beyond this many points.
inline constexpr std::size_t kMaxProjectivePoints = 4096;

/// Weight-graded module over F_p with the actions of x_i^(m), y_i^(m) for the
/// simple roots. Weight spaces of dimension 0 are never stored.
class WeightModule {
 public:
  struct Space {
    Weight weight;
    std::size_t dim = 0;
    /// x[i][m-1]: V_mu -> V_{mu + m alpha_i}; 0 x dim when that weight is absent.
    std::vector<std::vector<FpMatrix>> x;
    /// y[i][m-1]: V_mu -> V_{mu - m alpha_i}.
    std::vector<std::vector<FpMatrix>> y;
  };

  WeightModule(RootSystem rs, std::uint32_t p) : rs_(std::move(rs)), p_(p) {}

  const RootSystem& root_system() const { return rs_; }
  std::uint32_t p() const { return p_; }
  /// Spaces from the top down (depth, then linear order).
  const std::vector<Space>& spaces() const { return spaces_; }
  int index_of(const Weight& mu) const;
  const Space* find(const Weight& mu) const;
  std::size_t dim(const Weight& mu) const;
  std::size_t total_dim() const;
  Character character() const;

  /// Acts by x_i^(m) (raise) or y_i^(m) on a vector of V_mu. Returns an empty
  /// vector when the target weight space is zero.
  FpVector act(GeneratorSymbol::Kind kind, std::size_t i, int m, const Weight& mu, std::span<const std::uint32_t> v) const;

  void add_space(Space s);

 private:
  RootSystem rs_;
  std::uint32_t p_;
  std::vector<Space> spaces_;
  std::map<Weight, int> index_;
};

struct ModuleElement {
  Weight weight;
  FpVector coords;
  bool is_zero() const;
};

/// Subspace of a WeightModule spanned per weight by rows in reduced echelon form.
class Submodule {
 public:
  Submodule() = default;

  const std::map<Weight, FpMatrix>& spaces() const { return spaces_; }
  /// Reduced echelon basis of the mu-space, or nullptr if it is zero.
  const FpMatrix* basis(const Weight& mu) const;
  std::size_t dim(const Weight& mu) const;
  std::size_t total_dim() const;
  Character character() const;
  bool contains(const ModuleElement& v) const;
  bool operator==(const Submodule&) const = default;

  /// Sets the mu-space from arbitrary spanning rows (canonicalized here).
  void set_space(const Weight& mu, FpMatrix rows);

 private:
  std::map<Weight, FpMatrix> spaces_;
};

/// Smallest submodule containing gens.
Submodule submodule_generated(const WeightModule& m, const std::vector<ModuleElement>& gens);
Submodule submodule_sum(const Submodule& a, const Submodule& b);
/// Throws NotASubmodule unless every generator maps s into s.
void check_submodule(const WeightModule& m, const Submodule& s);

class QuotientModule {
 public:
  QuotientModule(std::shared_ptr<const WeightModule> parent, Submodule denominator);

  const WeightModule& module() const { return *quotient_; }
  std::shared_ptr<const WeightModule> module_ptr() const { return quotient_; }
  const WeightModule& parent() const { return *parent_; }
  const Submodule& denominator() const { return sub_; }

  /// Image of a parent vector in the quotient coordinates.
  ModuleElement project(const ModuleElement& v) const;
  /// Representative in the parent (zero on the pivot columns of the denominator).
  ModuleElement lift(const ModuleElement& v) const;
  /// Preimage of a submodule of the quotient.
  Submodule preimage(const Submodule& s) const;

 private:
  std::shared_ptr<const WeightModule> parent_;
  Submodule sub_;
  std::map<Weight, std::vector<std::size_t>> complement_;
  std::shared_ptr<const WeightModule> quotient_;
};

QuotientModule quotient(std::shared_ptr<const WeightModule> m, const Submodule& s);

/// Delta(lam) over F_p: the lattice U_Z v0 reduced mod p.
class WeylModule {
 public:
  WeylModule(std::shared_ptr<const IntegralModule> lattice, std::uint32_t p);

  const Weight& highest_weight() const { return lattice_->highest_weight(); }
  std::uint32_t p() const { return module_->p(); }
  const WeightModule& module() const { return *module_; }
  std::shared_ptr<const WeightModule> module_ptr() const { return module_; }
  const IntegralModule& lattice() const { return *lattice_; }
  /// Contravariant form on the mu-space, reduced mod p.
  const FpMatrix& gram(const Weight& mu) const;

  ModuleElement highest_weight_vector() const;
  /// Image of an integral Verma element, e.g. "y1y6 + y3y5 + y4^(2)".
  ModuleElement element(const VermaElement& v, const ChevalleyConstants& cc) const;

 private:
  std::shared_ptr<const IntegralModule> lattice_;
  std::shared_ptr<const WeightModule> module_;
  std::map<Weight, FpMatrix> gram_;
};

WeylModule build_weyl_module(const Weight& lam, std::uint32_t p, const RootSystem& rs);
/// Same module through Verma Gram matrices; only practical for small lam.
WeylModule build_weyl_module_verma(const Weight& lam, std::uint32_t p, const Straightener& st);

/// The contravariant dual: same weight spaces, x acting by the transpose of y and vice versa.
WeightModule contravariant_dual(const WeightModule& m);

/// Simple characters keyed by (root system label, p, highest weight). Safe for concurrent use.
class SimpleCharacterCache {
 public:
  struct Key {
    std::string system;
    std::uint32_t p = 0;
    Weight weight;
    auto operator<=>(const Key&) const = default;
  };

  std::optional<Character> find(const Key& k) const;
  /// Keeps the existing entry if one is present.
  void insert(const Key& k, Character ch);
  std::map<Key, Character> snapshot() const;
  std::size_t size() const;
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, Character> map_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

/// Root system, prime and the caches that the structural computations share.
class Workspace {
 public:
  Workspace(const RootSystem& rs, std::uint32_t p, std::shared_ptr<SimpleCharacterCache> cache = nullptr);

  const RootSystem& root_system() const { return rs_; }
  std::uint32_t p() const { return p_; }
  const ChevalleyConstants& constants() const;
  SimpleCharacterCache& cache() const { return *cache_; }
  std::shared_ptr<SimpleCharacterCache> cache_ptr() const { return cache_; }

  std::shared_ptr<const WeylModule> weyl_module(const Weight& lam) const;
  Character simple_character(const Weight& lam) const;
  /// Number of simple characters computed from scratch (cache misses) so far.
  std::size_t simple_character_computations() const { return computed_; }

 private:
  RootSystem rs_;
  std::uint32_t p_;
  std::shared_ptr<SimpleCharacterCache> cache_;
  mutable std::once_flag cc_once_;
  mutable std::unique_ptr<ChevalleyConstants> cc_;
  mutable std::mutex modules_mutex_;
  mutable std::map<Weight, std::shared_ptr<const WeylModule>> modules_;
  mutable std::map<Weight, std::shared_future<std::shared_ptr<const WeylModule>>> pending_;
  mutable std::atomic<std::size_t> computed_{0};
};

/// Basis of the maximal vectors of each dominant weight (weights with none are omitted).
std::map<Weight, std::vector<FpVector>> maximal_vectors(const WeightModule& m);

/// dim Hom(Delta(mu), Delta(lam)): the maximal vectors of weight mu in Delta(lam).
std::size_t hom_dimension(const Weight& mu, const Weight& lam, const Workspace& ws);

/// ch L(lam) from the rank of the contravariant form on each weight space.
Character simple_character(const Weight& lam, const Workspace& ws);

/// d_{lam,mu} = [Delta(lam) : L(mu)].
std::map<Weight, std::int64_t> decomposition_numbers(const Weight& lam, const Workspace& ws);

/// Multiset of highest weights, listed highest first.
using Layer = std::vector<Weight>;

/// Writes a character as a sum of simple characters.
Layer simple_factors(const Character& ch, const Workspace& ws);

struct SocleResult {
  Submodule socle;
  Layer layer;
};

/// Throws EnumerationTooLarge if a maximal-vector space has too many projective points.
SocleResult socle(const WeightModule& m, const Workspace& ws);

struct SocleSeries {
  std::vector<Layer> layers;  // layers[0] is the socle
  std::size_t length() const;
  bool operator==(const SocleSeries&) const = default;
};

SocleSeries socle_series(std::shared_ptr<const WeightModule> m, const Workspace& ws);

bool is_ambiguous(const WeightModule& m);

struct Ext1Witness {
  /// S with Delta(lam)/S uniserial of length two, head L(lam), socle L(mu).
  Submodule kernel;
  Character quotient_character;
  std::string report;
};

/// Certifies Ext^1(L(lam), L(mu)) != 0 when L(mu) lies in the second radical
/// layer of Delta(lam). Returns nullopt when it does not.
std::optional<Ext1Witness> ext1_witness(const Weight& lam, const Weight& mu, const Workspace& ws);

/// Radical layers of nabla(lam), listed bottom-up: the reverse of the socle
/// series of Delta(lam), so the last layer is the head.
std::vector<Layer> nabla_radical_layers(const Weight& lam, const Workspace& ws);

}  // namespace weylkit
