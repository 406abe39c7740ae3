#include "weylkit/weyl_modules.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <sstream>

namespace weylkit {

namespace {

std::size_t first_nonzero(std::span<const std::uint32_t> v) {
  for (std::size_t c = 0; c < v.size(); ++c)
    if (v[c]) return c;
  return v.size();
}

bool all_zero(std::span<const std::uint32_t> v) { return first_nonzero(v) == v.size(); }

// v -= a * row, over F_p.
void axpy(FpVector& v, std::uint64_t a, std::span<const std::uint32_t> row, std::uint32_t p) {
  if (a == 0) return;
  const std::uint64_t f = p - a;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (row[c]) v[c] = static_cast<std::uint32_t>((v[c] + f * row[c]) % p);
}

// Reduces v against rows in reduced echelon form.
void reduce_against(FpVector& v, const FpMatrix& rows, std::uint32_t p) {
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    auto row = rows.row(r);
    std::size_t c = first_nonzero(row);
    axpy(v, v[c], row, p);
  }
}

FpMatrix canonical_rows(const FpMatrix& m) {
  RrefResult r = rref_fp(m);
  FpMatrix out(m.modulus(), r.rank, m.cols());
  for (std::size_t i = 0; i < r.rank; ++i)
    for (std::size_t c = 0; c < m.cols(); ++c) out(i, c) = r.reduced(i, c);
  return out;
}

FpMatrix stack_rows(std::uint32_t p, std::size_t cols, const std::vector<FpVector>& rows) {
  FpMatrix m(p, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  return m;
}

// Incrementally grown subspace, kept in reduced echelon form.
class Echelon {
 public:
  Echelon(std::uint32_t p, std::size_t n) : p_(p), n_(n) {}

  std::size_t dim() const { return rows_.size(); }

  // Adds v to the span; returns false if it was already there.
  bool insert(FpVector v) {
    reduce(v);
    std::size_t c = first_nonzero(v);
    if (c == n_) return false;
    const std::uint64_t inv = inverse_mod(v[c], p_);
    for (auto& x : v) x = static_cast<std::uint32_t>(x * inv % p_);
    for (auto& row : rows_) axpy(row, row[c], v, p_);
    rows_.push_back(std::move(v));
    pivots_.push_back(c);
    return true;
  }

  bool contains(FpVector v) const {
    reduce(v);
    return all_zero(v);
  }

  FpMatrix matrix() const { return canonical_rows(stack_rows(p_, n_, rows_)); }

 private:
  void reduce(FpVector& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) axpy(v, v[pivots_[k]], rows_[k], p_);
  }

  std::uint32_t p_;
  std::size_t n_;
  std::vector<FpVector> rows_;
  std::vector<std::size_t> pivots_;
};

// Closure of gens under all simple divided powers. With a bound, gives up
// (nullopt) as soon as some weight space exceeds it.
std::optional<Submodule> generate(const WeightModule& m, const std::vector<ModuleElement>& gens,
                                  const Character* bound) {
  std::map<Weight, Echelon> spans;
  std::deque<std::pair<Weight, FpVector>> work;
  auto add = [&](const Weight& mu, FpVector v) {
    auto it = spans.find(mu);
    if (it == spans.end()) it = spans.emplace(mu, Echelon(m.p(), v.size())).first;
    if (!it->second.insert(v)) return true;
    if (bound && static_cast<std::int64_t>(it->second.dim()) > (*bound)[mu]) return false;
    work.emplace_back(mu, std::move(v));
    return true;
  };
  for (const auto& g : gens) {
    if (m.dim(g.weight) != g.coords.size())
      throw std::invalid_argument("element of weight " + g.weight.to_string() + " has the wrong length");
    if (!g.is_zero() && !add(g.weight, g.coords)) return std::nullopt;
  }
  const auto& rs = m.root_system();
  while (!work.empty()) {
    auto [mu, v] = std::move(work.front());
    work.pop_front();
    const auto* sp = m.find(mu);
    for (std::size_t i = 0; i < rs.rank(); ++i) {
      const Weight& a = rs.simple_root(i);
      for (std::size_t k = 0; k < sp->x[i].size(); ++k) {
        if (sp->x[i][k].rows() == 0) continue;
        FpVector w = sp->x[i][k] * std::span<const std::uint32_t>(v);
        if (!all_zero(w) && !add(mu + static_cast<int>(k + 1) * a, std::move(w))) return std::nullopt;
      }
      for (std::size_t k = 0; k < sp->y[i].size(); ++k) {
        if (sp->y[i][k].rows() == 0) continue;
        FpVector w = sp->y[i][k] * std::span<const std::uint32_t>(v);
        if (!all_zero(w) && !add(mu - static_cast<int>(k + 1) * a, std::move(w))) return std::nullopt;
      }
    }
  }
  Submodule out;
  for (const auto& [mu, e] : spans)
    if (e.dim()) out.set_space(mu, e.matrix());
  return out;
}

// Points of P(span(basis)): coefficient vectors whose first nonzero entry is 1.
std::vector<FpVector> projective_points(const std::vector<FpVector>& basis, std::uint32_t p) {
  const std::size_t d = basis.size();
  long double count = 0;
  for (std::size_t j = 0; j < d; ++j) count = count * p + 1;
  if (count > static_cast<long double>(kMaxProjectivePoints))
    throw EnumerationTooLarge("maximal-vector space of dimension " + std::to_string(d) + " has more than " +
                              std::to_string(kMaxProjectivePoints) + " projective points");
  std::vector<FpVector> out;
  if (d == 0) return out;
  const std::size_t n = basis[0].size();
  for (std::size_t lead = 0; lead < d; ++lead) {
    std::vector<std::uint32_t> c(d, 0);
    c[lead] = 1;
    while (true) {
      FpVector v(n, 0);
      for (std::size_t k = lead; k < d; ++k)
        if (c[k])
          for (std::size_t t = 0; t < n; ++t)
            v[t] = static_cast<std::uint32_t>((v[t] + static_cast<std::uint64_t>(c[k]) * basis[k][t]) % p);
      out.push_back(std::move(v));
      std::size_t k = lead + 1;
      while (k < d && c[k] == p - 1) c[k++] = 0;
      if (k >= d) break;
      ++c[k];
    }
  }
  return out;
}

void sort_layer(Layer& layer, const RootSystem& rs) {
  std::sort(layer.begin(), layer.end(), [&](const Weight& a, const Weight& b) { return linear_order_less(b, a, rs); });
}

}  // namespace

// WeightModule

int WeightModule::index_of(const Weight& mu) const {
  auto it = index_.find(mu);
  return it == index_.end() ? -1 : it->second;
}

const WeightModule::Space* WeightModule::find(const Weight& mu) const {
  int k = index_of(mu);
  return k < 0 ? nullptr : &spaces_[static_cast<std::size_t>(k)];
}

std::size_t WeightModule::dim(const Weight& mu) const {
  const auto* s = find(mu);
  return s ? s->dim : 0;
}

std::size_t WeightModule::total_dim() const {
  std::size_t n = 0;
  for (const auto& s : spaces_) n += s.dim;
  return n;
}

Character WeightModule::character() const {
  Character ch;
  for (const auto& s : spaces_) ch.add(s.weight, static_cast<std::int64_t>(s.dim));
  return ch;
}

FpVector WeightModule::act(GeneratorSymbol::Kind kind, std::size_t i, int m, const Weight& mu,
                           std::span<const std::uint32_t> v) const {
  const auto* s = find(mu);
  if (!s) throw WeightNotInModule(mu.to_string() + " is not a weight of the module");
  if (v.size() != s->dim) throw std::invalid_argument("vector length does not match the weight space");
  const auto& mats = kind == GeneratorSymbol::Kind::x ? s->x.at(i) : s->y.at(i);
  if (m < 1) throw std::invalid_argument("divided power exponent must be positive");
  if (static_cast<std::size_t>(m) > mats.size() || mats[m - 1].rows() == 0) return {};
  return mats[m - 1] * v;
}

void WeightModule::add_space(Space s) {
  if (s.dim == 0) return;
  index_[s.weight] = static_cast<int>(spaces_.size());
  spaces_.push_back(std::move(s));
}

bool ModuleElement::is_zero() const { return all_zero(coords); }

// Submodule

const FpMatrix* Submodule::basis(const Weight& mu) const {
  auto it = spaces_.find(mu);
  return it == spaces_.end() ? nullptr : &it->second;
}

std::size_t Submodule::dim(const Weight& mu) const {
  const auto* b = basis(mu);
  return b ? b->rows() : 0;
}

std::size_t Submodule::total_dim() const {
  std::size_t n = 0;
  for (const auto& [mu, b] : spaces_) n += b.rows();
  return n;
}

Character Submodule::character() const {
  Character ch;
  for (const auto& [mu, b] : spaces_) ch.add(mu, static_cast<std::int64_t>(b.rows()));
  return ch;
}

bool Submodule::contains(const ModuleElement& v) const {
  if (v.is_zero()) return true;
  const auto* b = basis(v.weight);
  if (!b) return false;
  FpVector w = v.coords;
  reduce_against(w, *b, b->modulus());
  return all_zero(w);
}

void Submodule::set_space(const Weight& mu, FpMatrix rows) {
  FpMatrix c = canonical_rows(rows);
  if (c.rows() == 0)
    spaces_.erase(mu);
  else
    spaces_[mu] = std::move(c);
}

Submodule submodule_generated(const WeightModule& m, const std::vector<ModuleElement>& gens) {
  return *generate(m, gens, nullptr);
}

Submodule submodule_sum(const Submodule& a, const Submodule& b) {
  Submodule out = a;
  for (const auto& [mu, rows] : b.spaces()) {
    const auto* mine = a.basis(mu);
    if (!mine) {
      out.set_space(mu, rows);
      continue;
    }
    FpMatrix both(rows.modulus(), mine->rows() + rows.rows(), rows.cols());
    for (std::size_t r = 0; r < mine->rows(); ++r)
      for (std::size_t c = 0; c < rows.cols(); ++c) both(r, c) = (*mine)(r, c);
    for (std::size_t r = 0; r < rows.rows(); ++r)
      for (std::size_t c = 0; c < rows.cols(); ++c) both(mine->rows() + r, c) = rows(r, c);
    out.set_space(mu, both);
  }
  return out;
}

void check_submodule(const WeightModule& m, const Submodule& s) {
  const auto& rs = m.root_system();
  for (const auto& [mu, rows] : s.spaces()) {
    const auto* sp = m.find(mu);
    if (!sp || sp->dim != rows.cols()) throw NotASubmodule("weight " + mu.to_string() + " does not match the module");
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      auto v = rows.row(r);
      for (std::size_t i = 0; i < rs.rank(); ++i)
        for (auto kind : {GeneratorSymbol::Kind::x, GeneratorSymbol::Kind::y}) {
          const auto& mats = kind == GeneratorSymbol::Kind::x ? sp->x[i] : sp->y[i];
          for (std::size_t k = 0; k < mats.size(); ++k) {
            if (mats[k].rows() == 0) continue;
            int sign = kind == GeneratorSymbol::Kind::x ? 1 : -1;
            ModuleElement w{mu + (sign * static_cast<int>(k + 1)) * rs.simple_root(i), mats[k] * v};
            if (!s.contains(w)) {
              GeneratorSymbol g{kind, i, static_cast<int>(k + 1)};
              throw NotASubmodule(g.to_string() + " maps a vector of weight " + mu.to_string() + " outside the subspace");
            }
          }
        }
    }
  }
}

// QuotientModule

QuotientModule::QuotientModule(std::shared_ptr<const WeightModule> parent, Submodule denominator)
    : parent_(std::move(parent)), sub_(std::move(denominator)) {
  check_submodule(*parent_, sub_);
  const std::uint32_t p = parent_->p();
  for (const auto& sp : parent_->spaces()) {
    std::vector<bool> pivot(sp.dim, false);
    if (const auto* b = sub_.basis(sp.weight))
      for (std::size_t r = 0; r < b->rows(); ++r) pivot[first_nonzero(b->row(r))] = true;
    std::vector<std::size_t> comp;
    for (std::size_t c = 0; c < sp.dim; ++c)
      if (!pivot[c]) comp.push_back(c);
    if (!comp.empty()) complement_[sp.weight] = std::move(comp);
  }
  auto q = std::make_shared<WeightModule>(parent_->root_system(), p);
  const auto& rs = parent_->root_system();
  for (const auto& sp : parent_->spaces()) {
    auto it = complement_.find(sp.weight);
    if (it == complement_.end()) continue;
    const auto& comp = it->second;
    WeightModule::Space out;
    out.weight = sp.weight;
    out.dim = comp.size();
    out.x.resize(rs.rank());
    out.y.resize(rs.rank());
    for (std::size_t i = 0; i < rs.rank(); ++i)
      for (auto kind : {GeneratorSymbol::Kind::x, GeneratorSymbol::Kind::y}) {
        const auto& src = kind == GeneratorSymbol::Kind::x ? sp.x[i] : sp.y[i];
        auto& dst = kind == GeneratorSymbol::Kind::x ? out.x[i] : out.y[i];
        int sign = kind == GeneratorSymbol::Kind::x ? 1 : -1;
        for (std::size_t k = 0; k < src.size(); ++k) {
          Weight target = sp.weight + (sign * static_cast<int>(k + 1)) * rs.simple_root(i);
          auto tc = complement_.find(target);
          if (src[k].rows() == 0 || tc == complement_.end()) {
            dst.emplace_back(p, 0, comp.size());
            continue;
          }
          FpMatrix mat(p, tc->second.size(), comp.size());
          for (std::size_t j = 0; j < comp.size(); ++j) {
            FpVector e(sp.dim, 0);
            e[comp[j]] = 1;
            ModuleElement img = project(ModuleElement{target, src[k] * std::span<const std::uint32_t>(e)});
            for (std::size_t r = 0; r < img.coords.size(); ++r) mat(r, j) = img.coords[r];
          }
          dst.push_back(std::move(mat));
        }
        while (!dst.empty() && dst.back().rows() == 0) dst.pop_back();
      }
    q->add_space(std::move(out));
  }
  quotient_ = std::move(q);
}

ModuleElement QuotientModule::project(const ModuleElement& v) const {
  auto it = complement_.find(v.weight);
  if (it == complement_.end()) return ModuleElement{v.weight, {}};
  FpVector w = v.coords;
  if (const auto* b = sub_.basis(v.weight)) reduce_against(w, *b, parent_->p());
  FpVector out;
  out.reserve(it->second.size());
  for (std::size_t c : it->second) out.push_back(w[c]);
  return ModuleElement{v.weight, std::move(out)};
}

ModuleElement QuotientModule::lift(const ModuleElement& v) const {
  auto it = complement_.find(v.weight);
  if (it == complement_.end() || it->second.size() != v.coords.size())
    throw std::invalid_argument("element of weight " + v.weight.to_string() + " does not belong to the quotient");
  FpVector out(parent_->dim(v.weight), 0);
  for (std::size_t j = 0; j < v.coords.size(); ++j) out[it->second[j]] = v.coords[j];
  return ModuleElement{v.weight, std::move(out)};
}

Submodule QuotientModule::preimage(const Submodule& s) const {
  Submodule out = sub_;
  Submodule lifted;
  for (const auto& [mu, rows] : s.spaces()) {
    FpMatrix m(parent_->p(), rows.rows(), parent_->dim(mu));
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      FpVector q(rows.row(r).begin(), rows.row(r).end());
      auto l = lift(ModuleElement{mu, q});
      for (std::size_t c = 0; c < l.coords.size(); ++c) m(r, c) = l.coords[c];
    }
    lifted.set_space(mu, m);
  }
  return submodule_sum(out, lifted);
}

QuotientModule quotient(std::shared_ptr<const WeightModule> m, const Submodule& s) {
  return QuotientModule(std::move(m), s);
}

// WeylModule

WeylModule::WeylModule(std::shared_ptr<const IntegralModule> lattice, std::uint32_t p) : lattice_(std::move(lattice)) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not a prime");
  const auto& rs = lattice_->root_system();
  auto m = std::make_shared<WeightModule>(rs, p);
  for (const auto& s : lattice_->spaces()) {
    WeightModule::Space out;
    out.weight = s.weight;
    out.dim = s.dim;
    out.x.resize(rs.rank());
    out.y.resize(rs.rank());
    for (std::size_t i = 0; i < rs.rank(); ++i) {
      const Weight& a = rs.simple_root(i);
      for (int k = 1; lattice_->index_of(s.weight + k * a) >= 0; ++k)
        out.x[i].push_back(FpMatrix::reduce(lattice_->x_power(i, k, s.weight), p));
      for (int k = 1; lattice_->index_of(s.weight - k * a) >= 0; ++k)
        out.y[i].push_back(FpMatrix::reduce(lattice_->y_power(i, k, s.weight), p));
    }
    gram_[s.weight] = FpMatrix::reduce(s.gram, p);
    m->add_space(std::move(out));
  }
  module_ = std::move(m);
}

const FpMatrix& WeylModule::gram(const Weight& mu) const {
  auto it = gram_.find(mu);
  if (it == gram_.end()) throw WeightNotInModule(mu.to_string() + " is not a weight of Delta" + highest_weight().to_string());
  return it->second;
}

ModuleElement WeylModule::highest_weight_vector() const { return ModuleElement{highest_weight(), FpVector{1}}; }

ModuleElement WeylModule::element(const VermaElement& v, const ChevalleyConstants& cc) const {
  Weight mu = lattice_->weight_of(v);
  auto coords = lattice_->verma_image(v, cc);
  FpVector out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(reduce_mod(c, p()));
  return ModuleElement{mu, std::move(out)};
}

WeylModule build_weyl_module(const Weight& lam, std::uint32_t p, const RootSystem& rs) {
  return WeylModule(std::make_shared<IntegralModule>(build_integral_module(lam, rs)), p);
}

WeylModule build_weyl_module_verma(const Weight& lam, std::uint32_t p, const Straightener& st) {
  return WeylModule(std::make_shared<IntegralModule>(build_integral_module_verma(lam, st)), p);
}

WeightModule contravariant_dual(const WeightModule& m) {
  const auto& rs = m.root_system();
  WeightModule out(rs, m.p());
  for (const auto& s : m.spaces()) {
    WeightModule::Space d;
    d.weight = s.weight;
    d.dim = s.dim;
    d.x.resize(rs.rank());
    d.y.resize(rs.rank());
    for (std::size_t i = 0; i < rs.rank(); ++i) {
      const Weight& a = rs.simple_root(i);
      // x on the dual at mu is the transpose of y at mu + k alpha, and vice versa.
      for (int k = 1;; ++k) {
        const auto* t = m.find(s.weight + k * a);
        if (!t) break;
        if (static_cast<std::size_t>(k) <= t->y[i].size() && t->y[i][k - 1].rows())
          d.x[i].push_back(t->y[i][k - 1].transpose());
        else
          d.x[i].emplace_back(m.p(), 0, s.dim);
      }
      for (int k = 1;; ++k) {
        const auto* t = m.find(s.weight - k * a);
        if (!t) break;
        if (static_cast<std::size_t>(k) <= t->x[i].size() && t->x[i][k - 1].rows())
          d.y[i].push_back(t->x[i][k - 1].transpose());
        else
          d.y[i].emplace_back(m.p(), 0, s.dim);
      }
    }
    out.add_space(std::move(d));
  }
  return out;
}

// Caches

std::optional<Character> SimpleCharacterCache::find(const Key& k) const {
  std::shared_lock lock(mutex_);
  auto it = map_.find(k);
  if (it == map_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void SimpleCharacterCache::insert(const Key& k, Character ch) {
  std::unique_lock lock(mutex_);
  map_.emplace(k, std::move(ch));
}

std::map<SimpleCharacterCache::Key, Character> SimpleCharacterCache::snapshot() const {
  std::shared_lock lock(mutex_);
  return map_;
}

std::size_t SimpleCharacterCache::size() const {
  std::shared_lock lock(mutex_);
  return map_.size();
}

Workspace::Workspace(const RootSystem& rs, std::uint32_t p, std::shared_ptr<SimpleCharacterCache> cache)
    : rs_(rs), p_(p), cache_(cache ? std::move(cache) : std::make_shared<SimpleCharacterCache>()) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not a prime");
}

const ChevalleyConstants& Workspace::constants() const {
  std::call_once(cc_once_, [this] { cc_ = std::make_unique<ChevalleyConstants>(rs_); });
  return *cc_;
}

std::shared_ptr<const WeylModule> Workspace::weyl_module(const Weight& lam) const {
  if (lam.rank() != rs_.rank() || !lam.is_dominant())
    throw std::invalid_argument(lam.to_string() + " is not a dominant weight of " + rs_.label());
  std::promise<std::shared_ptr<const WeylModule>> promise;
  std::shared_future<std::shared_ptr<const WeylModule>> fut;
  bool build = false;
  {
    std::lock_guard lock(modules_mutex_);
    auto it = modules_.find(lam);
    if (it != modules_.end()) return it->second;
    auto pit = pending_.find(lam);
    if (pit == pending_.end()) {
      fut = promise.get_future().share();
      pending_.emplace(lam, fut);
      build = true;
    } else {
      fut = pit->second;
    }
  }
  if (!build) return fut.get();
  try {
    auto m = std::make_shared<const WeylModule>(build_weyl_module(lam, p_, rs_));
    {
      std::lock_guard lock(modules_mutex_);
      modules_[lam] = m;
      pending_.erase(lam);
    }
    promise.set_value(m);
    return m;
  } catch (...) {
    {
      std::lock_guard lock(modules_mutex_);
      pending_.erase(lam);
    }
    promise.set_exception(std::current_exception());
    throw;
  }
}

Character Workspace::simple_character(const Weight& lam) const {
  SimpleCharacterCache::Key key{rs_.label(), p_, lam};
  if (auto hit = cache_->find(key)) return *hit;
  auto delta = weyl_module(lam);
  Character ch;
  for (const auto& s : delta->module().spaces())
    ch.add(s.weight, static_cast<std::int64_t>(rank_fp(delta->gram(s.weight))));
  ++computed_;
  cache_->insert(key, ch);
  return ch;
}

// Structure

std::map<Weight, std::vector<FpVector>> maximal_vectors(const WeightModule& m) {
  std::map<Weight, std::vector<FpVector>> out;
  for (const auto& s : m.spaces()) {
    if (!s.weight.is_dominant()) continue;
    std::size_t rows = 0;
    for (const auto& per_root : s.x)
      for (const auto& mat : per_root) rows += mat.rows();
    FpMatrix stacked(m.p(), rows, s.dim);
    std::size_t r0 = 0;
    for (const auto& per_root : s.x)
      for (const auto& mat : per_root) {
        for (std::size_t r = 0; r < mat.rows(); ++r)
          for (std::size_t c = 0; c < s.dim; ++c) stacked(r0 + r, c) = mat(r, c);
        r0 += mat.rows();
      }
    auto basis = nullspace_fp(stacked);
    if (!basis.empty()) out[s.weight] = std::move(basis);
  }
  return out;
}

std::size_t hom_dimension(const Weight& mu, const Weight& lam, const Workspace& ws) {
  auto delta = ws.weyl_module(lam);
  if (delta->module().dim(mu) == 0) return 0;
  auto mv = maximal_vectors(delta->module());
  auto it = mv.find(mu);
  return it == mv.end() ? 0 : it->second.size();
}

Character simple_character(const Weight& lam, const Workspace& ws) { return ws.simple_character(lam); }

std::map<Weight, std::int64_t> decomposition_numbers(const Weight& lam, const Workspace& ws) {
  auto chi = ws.weyl_module(lam)->module().character();
  return decompose_character(chi, ws.root_system(), [&](const Weight& w) { return ws.simple_character(w); });
}

Layer simple_factors(const Character& ch, const Workspace& ws) {
  auto d = decompose_character(ch, ws.root_system(), [&](const Weight& w) { return ws.simple_character(w); });
  Layer out;
  for (const auto& [w, k] : d) {
    if (k < 0) throw std::domain_error("character is not a sum of simple characters");
    for (std::int64_t j = 0; j < k; ++j) out.push_back(w);
  }
  sort_layer(out, ws.root_system());
  return out;
}

SocleResult socle(const WeightModule& m, const Workspace& ws) {
  Submodule acc;
  for (const auto& [mu, basis] : maximal_vectors(m)) {
    auto points = projective_points(basis, m.p());
    const Character ell = ws.simple_character(mu);
    for (auto& w : points) {
      ModuleElement e{mu, std::move(w)};
      if (acc.contains(e)) continue;
      auto sub = generate(m, {e}, &ell);
      if (sub && sub->character() == ell) acc = submodule_sum(acc, *sub);
    }
  }
  SocleResult out;
  out.layer = simple_factors(acc.character(), ws);
  out.socle = std::move(acc);
  return out;
}

std::size_t SocleSeries::length() const { return layers.size(); }

SocleSeries socle_series(std::shared_ptr<const WeightModule> m, const Workspace& ws) {
  SocleSeries out;
  while (m->total_dim() > 0) {
    auto s = socle(*m, ws);
    if (s.socle.total_dim() == 0) throw std::logic_error("nonzero module with zero socle");
    out.layers.push_back(s.layer);
    if (s.socle.total_dim() == m->total_dim()) break;
    m = quotient(m, s.socle).module_ptr();
  }
  return out;
}

bool is_ambiguous(const WeightModule& m) {
  for (const auto& [mu, basis] : maximal_vectors(m))
    if (basis.size() >= 2) return true;
  return false;
}

std::optional<Ext1Witness> ext1_witness(const Weight& lam, const Weight& mu, const Workspace& ws) {
  const auto& rs = ws.root_system();
  if (mu == lam || !dominance_le(mu, lam, rs)) return std::nullopt;
  auto delta = ws.weyl_module(lam);
  auto nabla = std::make_shared<const WeightModule>(contravariant_dual(delta->module()));
  auto soc = socle(*nabla, ws);
  if (soc.socle.total_dim() == nabla->total_dim()) return std::nullopt;
  auto q = quotient(nabla, soc.socle);
  auto mv = maximal_vectors(q.module());
  auto it = mv.find(mu);
  if (it == mv.end()) return std::nullopt;
  const Character ell_mu = ws.simple_character(mu);
  const Character ell_lam = ws.simple_character(lam);
  for (auto& w : projective_points(it->second, ws.p())) {
    ModuleElement e{mu, std::move(w)};
    auto sub = generate(q.module(), {e}, &ell_mu);
    if (!sub || sub->character() != ell_mu) continue;
    // N = <lift w> + soc nabla has factors L(lam), L(mu); its annihilator in Delta is S.
    Submodule n = submodule_sum(submodule_generated(*nabla, {q.lift(e)}), soc.socle);
    Submodule s;
    for (const auto& sp : delta->module().spaces()) {
      const auto* rows = n.basis(sp.weight);
      if (!rows) {
        s.set_space(sp.weight, FpMatrix::identity(ws.p(), sp.dim));
        continue;
      }
      auto null = nullspace_fp(*rows);
      if (!null.empty()) s.set_space(sp.weight, stack_rows(ws.p(), sp.dim, null));
    }
    check_submodule(delta->module(), s);
    Character qch = delta->module().character() - s.character();
    if (qch != ell_lam + ell_mu) throw std::logic_error("ext witness has the wrong composition factors");
    std::ostringstream report;
    report << "Delta" << lam.to_string() << " / S is uniserial with head L" << lam.to_string() << " and socle L"
           << mu.to_string() << "\n"
           << "dim Delta = " << delta->module().total_dim() << ", dim S = " << s.total_dim()
           << ", dim quotient = " << qch.total() << " = " << ell_lam.total() << " + " << ell_mu.total() << "\n";
    return Ext1Witness{std::move(s), std::move(qch), report.str()};
  }
  return std::nullopt;
}

std::vector<Layer> nabla_radical_layers(const Weight& lam, const Workspace& ws) {
  auto series = socle_series(ws.weyl_module(lam)->module_ptr(), ws);
  std::vector<Layer> out(series.layers.rbegin(), series.layers.rend());
  return out;
}

}  // namespace weylkit
