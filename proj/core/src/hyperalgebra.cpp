#include "weylkit/hyperalgebra.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <mutex>
#include <optional>
#include <sstream>

namespace weylkit {

namespace {

Integer factorial(int m) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
  return f;
}

std::vector<int> integral_root_coords(const Weight& w, const RootSystem& rs) {
  std::vector<int> out;
  for (const auto& c : rs.to_root_coords(w)) {
    if (c.get_den() != 1 || sgn(c) < 0) return {};
    out.push_back(static_cast<int>(c.get_num().get_si()));
  }
  return out;
}

IntMatrix commutator(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix ab = a * b, ba = b * a;
  for (std::size_t r = 0; r < ab.rows(); ++r)
    for (std::size_t c = 0; c < ab.cols(); ++c) ab(r, c) -= ba(r, c);
  return ab;
}

IntMatrix divide_exact(IntMatrix m, const Integer& d, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!mpz_divisible_p(m(r, c).get_mpz_t(), d.get_mpz_t()))
        throw LatticeIntegralityViolation(std::string(what) + ": entry not divisible by " + d.get_str());
      mpz_divexact(m(r, c).get_mpz_t(), m(r, c).get_mpz_t(), d.get_mpz_t());
    }
  return m;
}

std::vector<Integer> matvec(const IntMatrix& m, std::span<const Integer> v) {
  if (m.rows() == 0) return {};
  return m * v;
}

}  // namespace

// --------------------------------------------------------- monomials

std::string GeneratorSymbol::to_string() const {
  std::string s = (kind == Kind::x ? "x" : "y") + std::to_string(root + 1);
  if (power != 1) s += "^(" + std::to_string(power) + ")";
  return s;
}

PbwMonomial::PbwMonomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int a : exps_)
    if (a < 0) throw std::invalid_argument("PBW exponents must be non-negative");
}

int PbwMonomial::degree() const {
  int d = 0;
  for (int a : exps_) d += a;
  return d;
}

Weight PbwMonomial::weight_offset(const RootSystem& rs) const {
  Weight w = Weight::zero(rs.rank());
  for (std::size_t k = 0; k < exps_.size(); ++k)
    if (exps_[k]) w += exps_[k] * rs.positive_roots()[k].weight;
  return w;
}

std::string PbwMonomial::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < exps_.size(); ++k) {
    if (!exps_[k]) continue;
    s += "y" + std::to_string(k + 1);
    if (exps_[k] > 1) s += "^(" + std::to_string(exps_[k]) + ")";
  }
  return s.empty() ? "1" : s;
}

VermaElement VermaElement::highest_weight_vector(const Weight& lam, std::size_t num_roots) {
  VermaElement v(lam, num_roots);
  v.add(PbwMonomial::identity(num_roots), 1);
  return v;
}

bool VermaElement::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.get_den() == 1; });
}

Rational VermaElement::coefficient(const PbwMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational VermaElement::constant_term() const { return coefficient(PbwMonomial::identity(num_roots_)); }

void VermaElement::add(const PbwMonomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

VermaElement& VermaElement::operator+=(const VermaElement& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

VermaElement operator*(const Rational& c, const VermaElement& v) {
  VermaElement out(v.highest_, v.num_roots_);
  for (const auto& [m, x] : v.terms_) out.add(m, c * x);
  return out;
}

std::string VermaElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = abs(c);
    if (!first) s += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) s += "-";
    first = false;
    if (a != 1) s += a.get_str() + " ";
    s += m.is_identity() ? "v0" : m.to_string() + "v0";
  }
  return s;
}

VermaElement VermaElement::parse(std::string_view text, const Weight& lam, const RootSystem& rs) {
  const std::size_t n = rs.num_positive_roots();
  VermaElement out(lam, n);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("cannot parse Verma element '" + std::string(text) + "': " + why);
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&]() -> int {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  };
  std::optional<Weight> weight;
  skip();
  if (pos == text.size()) fail("empty");
  while (pos < text.size()) {
    int sign = 1;
    skip();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip();
    }
    Integer coeff = 1;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      coeff = read_int();
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      }
    }
    std::vector<int> exps(n, 0);
    bool any = false;
    while (pos < text.size() && (text[pos] == 'y' || text[pos] == 'v')) {
      if (text[pos] == 'v') {
        if (text.substr(pos, 2) != "v0") fail("unexpected 'v'");
        pos += 2;
        any = true;
        break;
      }
      ++pos;
      int k = read_int();
      if (k < 1 || static_cast<std::size_t>(k) > n) fail("root index out of range");
      int power = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        bool paren = pos < text.size() && text[pos] == '(';
        if (paren) ++pos;
        power = read_int();
        if (paren) {
          if (pos >= text.size() || text[pos] != ')') fail("missing ')'");
          ++pos;
        }
      }
      exps[static_cast<std::size_t>(k - 1)] += power;
      any = true;
      skip();
    }
    if (!any) fail("expected a monomial");
    PbwMonomial mono(exps);
    Weight w = lam - mono.weight_offset(rs);
    if (weight && *weight != w) fail("terms of different weights");
    weight = w;
    out.add(mono, Rational(sign * coeff));
    skip();
  }
  return out;
}

// ------------------------------------------------------ structure constants

ChevalleyConstants::ChevalleyConstants(const RootSystem& rs) : rs_(rs) {
  const std::size_t n = rs.num_positive_roots();
  const std::size_t rank = rs.rank();

  // The adjoint module: its weight spaces for the roots are one-dimensional,
  // and the root vectors are determined by the simple ones through commutators.
  const Weight theta = rs.positive_roots().back().weight;
  IntegralModule adj = build_integral_module(theta, rs);
  std::map<Weight, std::size_t> offset;
  std::size_t total = 0;
  for (const auto& s : adj.spaces()) {
    offset[s.weight] = total;
    total += s.dim;
  }
  std::vector<IntMatrix> X(n, IntMatrix(total, total)), Y(n, IntMatrix(total, total));
  for (std::size_t i = 0; i < rank; ++i) {
    for (const auto& s : adj.spaces()) {
      const IntMatrix up = adj.x_power(i, 1, s.weight);
      for (std::size_t r = 0; r < up.rows(); ++r)
        for (std::size_t c = 0; c < up.cols(); ++c) X[i](offset[s.weight + rs.simple_root(i)] + r, offset[s.weight] + c) = up(r, c);
      const IntMatrix down = adj.y_power(i, 1, s.weight);
      for (std::size_t r = 0; r < down.rows(); ++r)
        for (std::size_t c = 0; c < down.cols(); ++c)
          Y[i](offset[s.weight - rs.simple_root(i)] + r, offset[s.weight] + c) = down(r, c);
    }
  }

  ladders_.resize(n);
  for (std::size_t i = 0; i < rank; ++i) ladders_[i] = Ladder{i, i, 1};
  for (std::size_t k = rank; k < n; ++k) {
    const auto& c = rs.positive_roots()[k].simple_coords;
    for (std::size_t i = 0; i < rank; ++i) {
      auto rest = c;
      if (rest[i] == 0) continue;
      rest[i] -= 1;
      int r = rs.root_index(rest);
      if (r < 0) continue;
      int p = 0;
      for (auto down = rest;;) {
        if (down[i] == 0) break;
        down[i] -= 1;
        if (rs.root_index(down) < 0) break;
        ++p;
      }
      ladders_[k] = Ladder{i, static_cast<std::size_t>(r), p + 1};
      Integer d = p + 1;
      X[k] = divide_exact(commutator(X[i], X[r]), d, "root vector");
      Y[k] = divide_exact(commutator(Y[r], Y[i]), d, "root vector");
      break;
    }
  }

  // [x_k, y_k] must act on each weight vector by <weight, beta_k^vee>.
  for (std::size_t k = 0; k < n; ++k) {
    IntMatrix h = commutator(X[k], Y[k]);
    for (const auto& s : adj.spaces())
      for (std::size_t a = 0; a < s.dim; ++a)
        for (std::size_t b = 0; b < total; ++b) {
          const std::size_t row = offset[s.weight] + a;
          Integer expect = b == row ? Integer(rs.coroot_pairing(s.weight, k)) : Integer(0);
          if (h(b, row) != expect) throw std::logic_error("Chevalley basis normalization failed");
        }
  }

  const std::size_t m = 2 * n;
  sums_.assign(m, std::vector<int>(m, -1));
  n_.assign(m, std::vector<int>(m, 0));
  auto matrix_of = [&](std::size_t s) -> const IntMatrix& { return s < n ? X[s] : Y[s - n]; };
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      Weight w = root_weight(s) + root_weight(t);
      int u = rs.root_index_of_weight(w);
      if (u < 0) {
        int neg = rs.root_index_of_weight(Weight::zero(rank) - w);
        if (neg >= 0) u = static_cast<int>(n) + neg;
      }
      if (u < 0) continue;
      sums_[s][t] = u;
      IntMatrix br = commutator(matrix_of(s), matrix_of(t));
      const IntMatrix& target = matrix_of(static_cast<std::size_t>(u));
      Rational ratio = 0;
      bool found = false;
      for (std::size_t r = 0; r < total && !found; ++r)
        for (std::size_t c = 0; c < total && !found; ++c)
          if (target(r, c) != 0) {
            ratio = Rational(br(r, c), target(r, c));
            ratio.canonicalize();
            found = true;
          }
      if (!found || ratio.get_den() != 1) throw std::logic_error("structure constant extraction failed ");
      for (std::size_t r = 0; r < total; ++r)
        for (std::size_t c = 0; c < total; ++c)
          if (br(r, c) != ratio.get_num() * target(r, c)) throw std::logic_error("structure constant extraction failed");
      n_[s][t] = static_cast<int>(ratio.get_num().get_si());
    }
}

Weight ChevalleyConstants::root_weight(std::size_t s) const {
  const std::size_t n = num_positive();
  if (s < n) return rs_.positive_roots()[s].weight;
  return Weight::zero(rs_.rank()) - rs_.positive_roots().at(s - n).weight;
}

int ChevalleyConstants::root_sum(std::size_t s, std::size_t t) const { return sums_.at(s).at(t); }

int ChevalleyConstants::structure_constant(std::size_t s, std::size_t t) const { return n_.at(s).at(t); }

int ChevalleyConstants::cartan_integer(std::size_t beta, std::size_t alpha) const {
  const std::size_t n = num_positive();
  int v = rs_.coroot_pairing(root_weight(beta), alpha % n);
  return alpha < n ? v : -v;
}

std::string ChevalleyConstants::convention() const {
  std::ostringstream os;
  os << "extraspecial: N(alpha_i, gamma - alpha_i) > 0 for the first simple alpha_i with gamma - alpha_i a root; "
     << "y_gamma = [y_(gamma - alpha_i), y_i] / N; positive roots";
  for (std::size_t k = 0; k < num_positive(); ++k) os << (k ? ", " : " ") << k + 1 << "=" << root_weight(k);
  return os.str();
}

ChevalleyConstants chevalley_constants(const RootSystem& rs) { return ChevalleyConstants(rs); }

// -------------------------------------------------------------- monomials

std::vector<PbwMonomial> pbw_monomials(const std::vector<int>& root_coords, const RootSystem& rs) {
  const std::size_t n = rs.num_positive_roots();
  std::vector<PbwMonomial> out;
  std::vector<int> exps(n, 0);
  std::vector<int> rest = root_coords;
  for (int x : rest)
    if (x < 0) return out;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      if (std::all_of(rest.begin(), rest.end(), [](int x) { return x == 0; })) out.emplace_back(exps);
      return;
    }
    const auto& c = rs.positive_roots()[k].simple_coords;
    int a = 0;
    while (true) {
      exps[k] = a;
      self(self, k + 1);
      bool ok = true;
      for (std::size_t i = 0; i < rest.size(); ++i) ok &= rest[i] >= c[i];
      if (!ok) break;
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= c[i];
      ++a;
    }
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] += a * c[i];
    exps[k] = 0;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// ----------------------------------------------------------- straightening

std::size_t Straightener::KeyHash::operator()(const std::vector<int>& k) const noexcept {
  std::size_t h = k.size();
  for (int x : k) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Straightener::Straightener(const ChevalleyConstants& cc) : cc_(cc) {}

std::size_t Straightener::memo_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

Straightener::Terms Straightener::lower_terms(std::size_t b, const Terms& t) const {
  Terms out;
  for (const auto& [m, c] : t)
    for (const auto& [m2, c2] : lower(b, m)) {
      auto& slot = out[m2];
      slot += c * c2;
      if (sgn(slot) == 0) out.erase(m2);
    }
  return out;
}

namespace {

void accumulate(std::map<std::vector<int>, Rational>& into, const std::map<std::vector<int>, Rational>& t, const Rational& k) {
  for (const auto& [m, c] : t) {
    auto& slot = into[m];
    slot += k * c;
    if (sgn(slot) == 0) into.erase(m);
  }
}

}  // namespace

const Straightener::Terms& Straightener::lower(std::size_t b, const Mono& m) const {
  std::vector<int> key;
  key.reserve(m.size() + 2);
  key.push_back(0);
  key.push_back(static_cast<int>(b));
  key.insert(key.end(), m.begin(), m.end());
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return *it->second;
  }
  const std::size_t n = cc_.num_positive();
  std::size_t k = 0;
  while (k < n && m[k] == 0) ++k;
  Terms result;
  if (k == n || b <= k) {
    Mono up = m;
    up[b] += 1;
    result[up] = 1;
  } else {
    Mono rest = m;
    rest[k] -= 1;
    result = lower_terms(k, lower(b, rest));
    int u = cc_.root_sum(b + n, k + n);
    if (u >= 0) accumulate(result, lower(static_cast<std::size_t>(u) - n, rest), cc_.structure_constant(b + n, k + n));
  }
  auto ptr = std::make_shared<const Terms>(std::move(result));
  std::unique_lock lock(mutex_);
  return *memo_.emplace(std::move(key), std::move(ptr)).first->second;
}

const Straightener::Terms& Straightener::raise(const Weight& lam, std::size_t b, const Mono& m) const {
  std::vector<int> key;
  key.reserve(m.size() + lam.rank() + 2);
  key.push_back(1);
  key.push_back(static_cast<int>(b));
  key.insert(key.end(), lam.coords().begin(), lam.coords().end());
  key.insert(key.end(), m.begin(), m.end());
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return *it->second;
  }
  const std::size_t n = cc_.num_positive();
  const RootSystem& rs = cc_.root_system();
  std::size_t k = 0;
  while (k < n && m[k] == 0) ++k;
  Terms result;
  if (k < n) {
    Mono rest = m;
    rest[k] -= 1;
    result = lower_terms(k, raise(lam, b, rest));
    if (b == k) {
      Weight w = lam;
      for (std::size_t j = 0; j < n; ++j)
        if (rest[j]) w -= rest[j] * rs.positive_roots()[j].weight;
      accumulate(result, Terms{{rest, 1}}, rs.coroot_pairing(w, b));
    } else if (int u = cc_.root_sum(b, k + n); u >= 0) {
      const int coeff = cc_.structure_constant(b, k + n);
      const std::size_t us = static_cast<std::size_t>(u);
      if (us < n)
        accumulate(result, raise(lam, us, rest), coeff);
      else
        accumulate(result, lower(us - n, rest), coeff);
    }
  }
  auto ptr = std::make_shared<const Terms>(std::move(result));
  std::unique_lock lock(mutex_);
  return *memo_.emplace(std::move(key), std::move(ptr)).first->second;
}

VermaElement Straightener::apply(const GeneratorSymbol& g, const VermaElement& v) const {
  const std::size_t n = cc_.num_positive();
  if (g.root >= n) throw std::invalid_argument("generator root index out of range");
  if (g.power < 1) throw std::invalid_argument("generator power must be positive");
  if (v.num_roots() != n) throw std::invalid_argument("Verma element does not match the root system");
  Terms cur;
  for (const auto& [mono, c] : v.terms()) {
    Integer denom = 1;
    for (int a : mono.exponents()) denom *= factorial(a);
    cur[mono.exponents()] = c / denom;
  }
  for (int step = 0; step < g.power; ++step) {
    Terms next;
    for (const auto& [mono, c] : cur)
      accumulate(next, g.kind == GeneratorSymbol::Kind::y ? lower(g.root, mono) : raise(v.highest_weight(), g.root, mono), c);
    cur = std::move(next);
  }
  const Integer mf = factorial(g.power);
  VermaElement out(v.highest_weight(), n);
  for (const auto& [mono, c] : cur) {
    Integer scale = 1;
    for (int a : mono) scale *= factorial(a);
    out.add(PbwMonomial(mono), c * scale / mf);
  }
  if (v.is_integral() && !out.is_integral())
    throw LatticeIntegralityViolation("divided power " + g.to_string() + " left the Z-form on " + v.to_string());
  return out;
}

VermaElement apply_generator(const GeneratorSymbol& g, const VermaElement& v, const ChevalleyConstants& cc) {
  return Straightener(cc).apply(g, v);
}

IntMatrix contravariant_gram(const Weight& lam, const Weight& mu, const Straightener& st) {
  const RootSystem& rs = st.constants().root_system();
  auto coords = integral_root_coords(lam - mu, rs);
  if (coords.empty()) throw WeightNotInModule(mu.to_string() + " is not a weight of the Verma module " + lam.to_string());
  const auto monos = pbw_monomials(coords, rs);
  const std::size_t n = rs.num_positive_roots();
  IntMatrix f(monos.size(), monos.size());
  for (std::size_t j = 0; j < monos.size(); ++j) {
    VermaElement start(lam, n);
    start.add(monos[j], 1);
    for (std::size_t i = 0; i < monos.size(); ++i) {
      VermaElement v = start;
      for (std::size_t k = 0; k < n && !v.is_zero(); ++k)
        if (monos[i][k]) v = st.apply(GeneratorSymbol{GeneratorSymbol::Kind::x, k, monos[i][k]}, v);
      Rational c = v.constant_term();
      if (c.get_den() != 1) throw LatticeIntegralityViolation("non-integral Gram entry");
      f(i, j) = c.get_num();
    }
  }
  return f;
}

IntMatrix contravariant_gram(const Weight& lam, const Weight& mu, const RootSystem& rs, const ChevalleyConstants& cc) {
  if (cc.root_system().label() != rs.label()) throw std::invalid_argument("root system mismatch");
  return contravariant_gram(lam, mu, Straightener(cc));
}

// -------------------------------------------------------- IntegralModule

int IntegralModule::index_of(const Weight& mu) const {
  auto it = index_.find(mu);
  return it == index_.end() ? -1 : it->second;
}

const IntegralModule::Space& IntegralModule::space(const Weight& mu) const {
  int i = index_of(mu);
  if (i < 0) throw WeightNotInModule(mu.to_string() + " is not a weight of V" + lam_.to_string());
  return spaces_[static_cast<std::size_t>(i)];
}

std::size_t IntegralModule::dim(const Weight& mu) const {
  int i = index_of(mu);
  return i < 0 ? 0 : spaces_[static_cast<std::size_t>(i)].dim;
}

std::size_t IntegralModule::total_dim() const {
  std::size_t t = 0;
  for (const auto& s : spaces_) t += s.dim;
  return t;
}

void IntegralModule::set_gram(const Weight& mu, IntMatrix g) {
  int i = index_of(mu);
  if (i < 0) throw WeightNotInModule(mu.to_string());
  spaces_[static_cast<std::size_t>(i)].gram = std::move(g);
}

void IntegralModule::add_space(Space s) {
  index_[s.weight] = static_cast<int>(spaces_.size());
  spaces_.push_back(std::move(s));
}

IntMatrix IntegralModule::x_power(std::size_t i, int m, const Weight& mu) const {
  const std::size_t d = dim(mu);
  IntMatrix acc = IntMatrix::identity(d);
  Weight w = mu;
  for (int step = 0; step < m; ++step) {
    const Weight next = w + rs_.simple_root(i);
    if (index_of(next) < 0) return IntMatrix(0, d);
    acc = space(w).e[i] * acc;
    w = next;
  }
  return m == 1 ? acc : divide_exact(std::move(acc), factorial(m), "x divided power");
}

IntMatrix IntegralModule::y_power(std::size_t i, int m, const Weight& mu) const {
  const std::size_t d = dim(mu);
  const Weight target = mu - m * rs_.simple_root(i);
  int t = index_of(target);
  if (t < 0 || d == 0) return IntMatrix(0, d);
  return spaces_[static_cast<std::size_t>(t)].f[i].at(static_cast<std::size_t>(m - 1));
}

std::vector<Integer> IntegralModule::apply_root_vector(std::size_t s, const Weight& mu, std::span<const Integer> v,
                                                       const ChevalleyConstants& cc) const {
  if (v.empty()) return {};
  const std::size_t n = cc.num_positive();
  const bool up = s < n;
  const std::size_t k = up ? s : s - n;
  const Weight target = mu + cc.root_weight(s);
  if (index_of(target) < 0) return {};
  if (k < rs_.rank()) return matvec(up ? x_power(k, 1, mu) : y_power(k, 1, mu), v);
  const auto& lad = cc.ladder(k);
  const std::size_t simple = up ? lad.simple : lad.simple + n;
  const std::size_t rest = up ? lad.rest : lad.rest + n;
  // x_k = [x_i, x_rest] / d and y_k = [y_rest, y_i] / d.
  std::vector<Integer> a, b;
  if (up) {
    a = apply_root_vector(simple, mu + cc.root_weight(rest), apply_root_vector(rest, mu, v, cc), cc);
    b = apply_root_vector(rest, mu + cc.root_weight(simple), apply_root_vector(simple, mu, v, cc), cc);
  } else {
    a = apply_root_vector(rest, mu + cc.root_weight(simple), apply_root_vector(simple, mu, v, cc), cc);
    b = apply_root_vector(simple, mu + cc.root_weight(rest), apply_root_vector(rest, mu, v, cc), cc);
  }
  std::vector<Integer> out(dim(target), 0);
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (!a.empty()) out[r] += a[r];
    if (!b.empty()) out[r] -= b[r];
    if (!mpz_divisible_ui_p(out[r].get_mpz_t(), static_cast<unsigned long>(lad.divisor)))
      throw LatticeIntegralityViolation("root vector left the lattice");
    out[r] /= lad.divisor;
  }
  return out;
}

std::vector<Integer> IntegralModule::pbw_image(const PbwMonomial& mono, const ChevalleyConstants& cc) const {
  const std::size_t n = cc.num_positive();
  std::vector<Integer> v{Integer(1)};
  Weight w = lam_;
  for (std::size_t k = n; k-- > 0;) {
    for (int step = 0; step < mono[k]; ++step) {
      v = apply_root_vector(k + n, w, v, cc);
      w -= rs_.positive_roots()[k].weight;
      if (v.empty()) return {};
    }
    if (mono[k] > 1) {
      Integer f = factorial(mono[k]);
      for (auto& x : v) {
        if (!mpz_divisible_p(x.get_mpz_t(), f.get_mpz_t())) throw LatticeIntegralityViolation("PBW divided power");
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), f.get_mpz_t());
      }
    }
  }
  return v;
}

Weight IntegralModule::weight_of(const VermaElement& v) const {
  if (v.is_zero()) throw std::invalid_argument("zero Verma element has no weight");
  return lam_ - v.terms().begin()->first.weight_offset(rs_);
}

std::vector<Integer> IntegralModule::verma_image(const VermaElement& v, const ChevalleyConstants& cc) const {
  if (!v.is_integral()) throw std::invalid_argument("Verma element is not integral");
  const Weight w = weight_of(v);
  std::vector<Integer> out(dim(w), 0);
  for (const auto& [mono, c] : v.terms()) {
    auto img = pbw_image(mono, cc);
    for (std::size_t r = 0; r < img.size(); ++r) out[r] += c.get_num() * img[r];
  }
  return out;
}

// ---------------------------------------------------------------- builders

namespace {

struct WeightPlan {
  std::vector<std::pair<Weight, std::int64_t>> order;  // by depth
  std::map<Weight, int> depth;
};

WeightPlan plan_weights(const Weight& lam, const RootSystem& rs) {
  if (lam.rank() != rs.rank()) throw std::invalid_argument("weight rank does not match root system");
  if (!lam.is_dominant()) throw std::invalid_argument("highest weight must be dominant");
  WeightPlan plan;
  Character ch = weyl_character(lam, rs);
  for (const auto& [w, m] : ch.terms()) {
    plan.order.emplace_back(w, m);
    plan.depth[w] = static_cast<int>(rs.height(lam - w).get_num().get_si());
  }
  std::sort(plan.order.begin(), plan.order.end(), [&](const auto& a, const auto& b) {
    int da = plan.depth[a.first], db = plan.depth[b.first];
    if (da != db) return da < db;
    return linear_order_less(b.first, a.first, rs);
  });
  return plan;
}

}  // namespace

IntegralModule build_integral_module(const Weight& lam, const RootSystem& rs) {
  const WeightPlan plan = plan_weights(lam, rs);
  const std::size_t rank = rs.rank();
  IntegralModule mod(rs, lam);

  for (const auto& [mu, mult] : plan.order) {
    IntegralModule::Space sp;
    sp.weight = mu;
    sp.depth = plan.depth.at(mu);
    sp.e.resize(rank);
    sp.f.resize(rank);
    if (mu == lam) {
      sp.dim = 1;
      sp.gram = IntMatrix{{1}};
      for (std::size_t j = 0; j < rank; ++j) sp.e[j] = IntMatrix(0, 1);
      mod.add_space(std::move(sp));
      continue;
    }

    // Layout of the e-image coordinates.
    std::vector<std::size_t> block_off(rank + 1, 0);
    for (std::size_t j = 0; j < rank; ++j) block_off[j + 1] = block_off[j] + mod.dim(mu + rs.simple_root(j));
    const std::size_t D = block_off[rank];

    struct Cand {
      std::size_t i;
      int m;
      std::size_t l;
    };
    std::vector<Cand> cands;
    std::vector<std::vector<Integer>> cols;
    for (std::size_t i = 0; i < rank; ++i) {
      for (int m = 1;; ++m) {
        const Weight nu = mu + m * rs.simple_root(i);
        if (mod.index_of(nu) < 0) break;
        const auto& snu = mod.space(nu);
        for (std::size_t l = 0; l < snu.dim; ++l) {
          std::vector<Integer> col(D, 0);
          std::vector<Integer> unit(snu.dim, 0);
          unit[l] = 1;
          for (std::size_t j = 0; j < rank; ++j) {
            const Weight above = mu + rs.simple_root(j);
            if (mod.index_of(above) < 0) continue;
            std::vector<Integer> img(mod.dim(above), 0);
            // f_i^(m) e_j b
            if (mod.index_of(nu + rs.simple_root(j)) >= 0) {
              auto eb = matvec(snu.e[j], unit);
              auto t = matvec(mod.space(above).f[i].at(static_cast<std::size_t>(m - 1)), eb);
              for (std::size_t r = 0; r < img.size(); ++r) img[r] += t[r];
            }
            if (j == i) {
              // e_i f_i^(m) = f_i^(m) e_i + (h_i - m + 1) f_i^(m-1)
              const long k = static_cast<long>(nu[i]) - m + 1;
              if (k != 0) {
                std::vector<Integer> t =
                    m == 1 ? unit : matvec(mod.space(above).f[i].at(static_cast<std::size_t>(m - 2)), unit);
                for (std::size_t r = 0; r < img.size(); ++r) img[r] += k * t[r];
              }
            }
            for (std::size_t r = 0; r < img.size(); ++r) col[block_off[j] + r] = img[r];
          }
          cands.push_back({i, m, l});
          cols.push_back(std::move(col));
        }
      }
    }

    const IntMatrix cand = IntMatrix::from_columns(D, cols);
    const HnfResult h = hnf_columns(cand);
    if (static_cast<std::int64_t>(h.rank) != mult)
      throw LatticeIntegralityViolation("weight space " + mu.to_string() + " has rank " + std::to_string(h.rank) +
                                        ", expected " + std::to_string(mult));
    const std::size_t r = h.rank;
    sp.dim = r;
    for (std::size_t j = 0; j < rank; ++j) {
      const std::size_t dj = block_off[j + 1] - block_off[j];
      sp.e[j] = IntMatrix(dj, r);
      for (std::size_t a = 0; a < dj; ++a)
        for (std::size_t b = 0; b < r; ++b) sp.e[j](a, b) = h.hnf(block_off[j] + a, b);
    }
    // f_i^(m) in the new basis.
    for (std::size_t i = 0; i < rank; ++i)
      for (int m = 1; mod.index_of(mu + m * rs.simple_root(i)) >= 0; ++m)
        sp.f[i].emplace_back(r, mod.dim(mu + m * rs.simple_root(i)));
    for (std::size_t c = 0; c < cands.size(); ++c) {
      auto x = solve_in_hnf(h, cols[c]);
      auto& target = sp.f[cands[c].i][static_cast<std::size_t>(cands[c].m - 1)];
      for (std::size_t a = 0; a < r; ++a) target(a, cands[c].l) = x[a];
    }
    mod.add_space(std::move(sp));

    // Contravariant form: <f_i^(m) b, w> = <b, e_i^(m) w>.
    IntMatrix P(cands.size(), r);
    std::map<std::pair<std::size_t, int>, IntMatrix> gx;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const auto key = std::make_pair(cands[c].i, cands[c].m);
      auto it = gx.find(key);
      if (it == gx.end()) {
        const Weight nu = mu + cands[c].m * rs.simple_root(cands[c].i);
        it = gx.emplace(key, mod.space(nu).gram * mod.x_power(cands[c].i, cands[c].m, mu)).first;
      }
      for (std::size_t t = 0; t < r; ++t) P(c, t) = it->second(cands[c].l, t);
    }
    IntMatrix Ur(cands.size(), r);
    for (std::size_t a = 0; a < cands.size(); ++a)
      for (std::size_t b = 0; b < r; ++b) Ur(a, b) = h.transform(a, b);
    mod.set_gram(mu, Ur.transpose() * P);
  }
  return mod;
}

IntegralModule build_integral_module_verma(const Weight& lam, const Straightener& st) {
  const RootSystem& rs = st.constants().root_system();
  const WeightPlan plan = plan_weights(lam, rs);
  const std::size_t rank = rs.rank();
  const std::size_t n = rs.num_positive_roots();

  struct Data {
    std::vector<PbwMonomial> monos;
    IntMatrix gram;
    HnfResult h;
    std::vector<VermaElement> basis;
  };
  std::map<Weight, Data> data;
  for (const auto& [mu, mult] : plan.order) {
    Data d;
    d.monos = pbw_monomials(integral_root_coords(lam - mu, rs), rs);
    d.gram = contravariant_gram(lam, mu, st);
    d.h = hnf_columns(d.gram);
    if (static_cast<std::int64_t>(d.h.rank) != mult)
      throw LatticeIntegralityViolation("Gram rank at " + mu.to_string() + " differs from the multiplicity");
    for (std::size_t s = 0; s < d.h.rank; ++s) {
      VermaElement v(lam, n);
      for (std::size_t j = 0; j < d.monos.size(); ++j) v.add(d.monos[j], Rational(d.h.transform(j, s)));
      d.basis.push_back(std::move(v));
    }
    data.emplace(mu, std::move(d));
  }
  auto coords = [&](const Weight& mu, const VermaElement& v) {
    const Data& d = data.at(mu);
    std::vector<Integer> g(d.monos.size(), 0);
    for (std::size_t i = 0; i < d.monos.size(); ++i)
      for (std::size_t j = 0; j < d.monos.size(); ++j) {
        Rational c = v.coefficient(d.monos[j]);
        if (sgn(c) == 0) continue;
        if (c.get_den() != 1) throw LatticeIntegralityViolation("non-integral Verma coordinates");
        g[i] += d.gram(i, j) * c.get_num();
      }
    return solve_in_hnf(d.h, g);
  };

  IntegralModule mod(rs, lam);
  for (const auto& [mu, mult] : plan.order) {
    const Data& d = data.at(mu);
    IntegralModule::Space sp;
    sp.weight = mu;
    sp.depth = plan.depth.at(mu);
    sp.dim = d.h.rank;
    IntMatrix ur(d.monos.size(), sp.dim);
    for (std::size_t a = 0; a < d.monos.size(); ++a)
      for (std::size_t b = 0; b < sp.dim; ++b) ur(a, b) = d.h.transform(a, b);
    sp.gram = ur.transpose() * d.gram * ur;
    sp.e.resize(rank);
    sp.f.resize(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      const Weight up = mu + rs.simple_root(i);
      if (!data.count(up)) {
        sp.e[i] = IntMatrix(0, sp.dim);
      } else {
        std::vector<std::vector<Integer>> cols;
        for (const auto& b : d.basis) cols.push_back(coords(up, st.apply(GeneratorSymbol{GeneratorSymbol::Kind::x, i, 1}, b)));
        sp.e[i] = IntMatrix::from_columns(data.at(up).h.rank, cols);
      }
      for (int m = 1; data.count(mu + m * rs.simple_root(i)); ++m) {
        std::vector<std::vector<Integer>> cols;
        for (const auto& b : data.at(mu + m * rs.simple_root(i)).basis)
          cols.push_back(coords(mu, st.apply(GeneratorSymbol{GeneratorSymbol::Kind::y, i, m}, b)));
        sp.f[i].push_back(IntMatrix::from_columns(sp.dim, cols));
      }
    }
    mod.add_space(std::move(sp));
  }
  return mod;
}

}  // namespace weylkit
