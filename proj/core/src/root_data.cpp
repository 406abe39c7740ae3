#include "weylkit/root_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>

namespace weylkit {

// ---------------------------------------------------------------- Weight

Weight Weight::parse(std::string_view text) {
  const std::string original(text);
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
  std::vector<int> coords;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  while (true) {
    skip_space();
    int value = 0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) throw std::invalid_argument("malformed weight: '" + original + "'");
    coords.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    skip_space();
    if (pos == text.size()) break;
    if (text[pos] != ',') throw std::invalid_argument("malformed weight: '" + original + "'");
    ++pos;
  }
  return Weight(std::move(coords));
}

bool Weight::is_dominant() const {
  return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c >= 0; });
}

bool Weight::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
}

Weight& Weight::operator+=(const Weight& o) {
  if (o.rank() != rank()) throw std::invalid_argument("weight rank mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

Weight& Weight::operator-=(const Weight& o) {
  if (o.rank() != rank()) throw std::invalid_argument("weight rank mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

std::string Weight::to_string() const { return "(" + to_compact() + ")"; }

std::string Weight::to_compact() const {
  std::string s;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.to_string(); }

// ------------------------------------------------------------ RootSystem

namespace {

std::vector<std::vector<Rational>> invert(const std::vector<std::vector<int>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(a[piv][c]) == 0) ++piv;
    if (piv == n) throw std::invalid_argument("Cartan matrix is singular");
    std::swap(a[piv], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
  return out;
}

bool lex_descending(const std::vector<int>& a, const std::vector<int>& b) { return a > b; }

}  // namespace

RootSystem::RootSystem(std::string type, std::vector<std::vector<int>> cartan)
    : type_(std::move(type)), cartan_(std::move(cartan)) {
  const std::size_t n = cartan_.size();
  for (const auto& row : cartan_)
    if (row.size() != n) throw std::invalid_argument("Cartan matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (cartan_[i][i] != 2) throw std::invalid_argument("Cartan matrix diagonal must be 2");
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (cartan_[i][j] > 0 || ((cartan_[i][j] == 0) != (cartan_[j][i] == 0))))
        throw std::invalid_argument("not a generalized Cartan matrix");
  }
  cartan_inverse_ = invert(cartan_);

  // Symmetrizer: d_i a_ij = d_j a_ji, connected diagrams only.
  std::vector<Rational> d(n, 0);
  d[0] = 1;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || cartan_[i][j] == 0 || sgn(d[j]) != 0) continue;
      d[j] = d[i] * cartan_[i][j] / cartan_[j][i];
      queue.push_back(j);
    }
  }
  Rational dmin = d[0];
  for (const auto& x : d) {
    if (sgn(x) == 0) throw std::invalid_argument("Dynkin diagram must be connected");
    dmin = std::min(dmin, x);
  }
  for (const auto& x : d) {
    Rational s = x / dmin;
    if (s.get_den() != 1) throw std::invalid_argument("symmetrizer not integral");
    sym_.push_back(static_cast<int>(s.get_num().get_si()));
  }

  // Positive roots by height, using root strings.
  std::set<std::vector<int>> known;
  std::vector<std::vector<int>> level;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> c(n, 0);
    c[i] = 1;
    level.push_back(c);
    known.insert(c);
  }
  std::vector<std::vector<int>> all;
  while (!level.empty()) {
    std::sort(level.begin(), level.end(), lex_descending);
    all.insert(all.end(), level.begin(), level.end());
    std::set<std::vector<int>> next;
    for (const auto& beta : level) {
      for (std::size_t i = 0; i < n; ++i) {
        int p = 0;
        std::vector<int> down = beta;
        while (true) {
          down[i] -= 1;
          if (!known.count(down)) break;
          ++p;
        }
        int pairing = 0;
        for (std::size_t j = 0; j < n; ++j) pairing += beta[j] * cartan_[i][j];
        if (p - pairing >= 1) {
          std::vector<int> up = beta;
          up[i] += 1;
          next.insert(up);
        }
      }
    }
    for (const auto& c : next) known.insert(c);
    level.assign(next.begin(), next.end());
  }
  for (const auto& c : all) {
    Root r;
    r.simple_coords = c;
    std::vector<int> w(n, 0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) w[k] += cartan_[k][j] * c[j];
    r.weight = Weight(std::move(w));
    for (int x : c) r.height += x;
    index_[c] = static_cast<int>(positive_.size());
    weight_index_[r.weight] = static_cast<int>(positive_.size());
    positive_.push_back(std::move(r));
  }
  rho_ = Weight(std::vector<int>(n, 1));
}

int RootSystem::root_index(const std::vector<int>& simple_coords) const {
  auto it = index_.find(simple_coords);
  return it == index_.end() ? -1 : it->second;
}

int RootSystem::root_index_of_weight(const Weight& w) const {
  auto it = weight_index_.find(w);
  return it == weight_index_.end() ? -1 : it->second;
}

std::vector<Rational> RootSystem::to_root_coords(const Weight& w) const {
  const std::size_t n = rank();
  std::vector<Rational> c(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i] += cartan_inverse_[i][j] * w[j];
  return c;
}

Rational RootSystem::height(const Weight& w) const {
  Rational h = 0;
  for (const auto& c : to_root_coords(w)) h += c;
  return h;
}

Rational RootSystem::inner_product(const Weight& a, const Weight& b) const {
  auto cb = to_root_coords(b);
  Rational s = 0;
  for (std::size_t i = 0; i < rank(); ++i) s += cb[i] * sym_[i] * a[i];
  return s;
}

int RootSystem::coroot_pairing(const Weight& mu, std::size_t k) const {
  const Root& beta = positive_.at(k);
  long num = 0, norm = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    num += static_cast<long>(beta.simple_coords[j]) * sym_[j] * mu[j];
    norm += static_cast<long>(beta.simple_coords[j]) * sym_[j] * beta.weight[j];
  }
  // norm = (beta, beta) = 2 d_beta
  return static_cast<int>(2 * num / norm);
}

Weight RootSystem::reflect(std::size_t simple, const Weight& w) const {
  return w - w[simple] * simple_root(simple);
}

Weight RootSystem::dominant_conjugate(const Weight& w) const {
  Weight v = w;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rank(); ++i)
      if (v[i] < 0) {
        v = reflect(i, v);
        changed = true;
      }
  }
  return v;
}

std::vector<Weight> RootSystem::orbit(const Weight& w) const {
  std::set<Weight> seen{w};
  std::vector<Weight> frontier{w};
  while (!frontier.empty()) {
    Weight v = frontier.back();
    frontier.pop_back();
    for (std::size_t i = 0; i < rank(); ++i) {
      Weight r = reflect(i, v);
      if (seen.insert(r).second) frontier.push_back(r);
    }
  }
  return {seen.begin(), seen.end()};
}

// --------------------------------------------------------- constructors

namespace {

std::vector<std::vector<int>> cartan_for(std::string_view type, std::size_t n) {
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 2;
  auto link = [&](std::size_t i, std::size_t j) {
    a[i][j] = -1;
    a[j][i] = -1;
  };
  if (type == "A" && n >= 1 && n <= 4) {
    for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
  } else if (type == "B" && n >= 2 && n <= 4) {
    for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
    a[n - 1][n - 2] = -2;  // alpha_n short
  } else if (type == "C" && n >= 2 && n <= 4) {
    for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
    a[n - 2][n - 1] = -2;  // alpha_n long
  } else if (type == "D" && n == 4) {
    link(0, 1);
    link(1, 2);
    link(1, 3);
  } else if (type == "F" && n == 4) {
    link(0, 1);
    link(1, 2);
    link(2, 3);
    a[2][1] = -2;  // alpha_1, alpha_2 long
  } else if (type == "G" && n == 2) {
    a[0][1] = -3;  // alpha_1 short
    a[1][0] = -1;
  } else {
    throw UnknownType("unsupported root system type " + std::string(type) + std::to_string(n));
  }
  return a;
}

}  // namespace

RootSystem root_system(std::string_view type, std::size_t rank) {
  std::string t(type);
  for (auto& ch : t) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return RootSystem(t, cartan_for(t, rank));
}

RootSystem root_system(std::string_view label) {
  if (label.size() < 2) throw UnknownType("malformed root system label '" + std::string(label) + "'");
  int rank = 0;
  auto [ptr, ec] = std::from_chars(label.data() + 1, label.data() + label.size(), rank);
  if (ec != std::errc() || ptr != label.data() + label.size() || rank <= 0)
    throw UnknownType("malformed root system label '" + std::string(label) + "'");
  return root_system(label.substr(0, 1), static_cast<std::size_t>(rank));
}

// ------------------------------------------------------------- ordering

bool dominance_le(const Weight& mu, const Weight& lam, const RootSystem& rs) {
  for (const auto& c : rs.to_root_coords(lam - mu))
    if (c.get_den() != 1 || sgn(c) < 0) return false;
  return true;
}

bool linear_order_less(const Weight& a, const Weight& b, const RootSystem& rs) {
  const int order = cmp(rs.height(a), rs.height(b));
  if (order != 0) return order < 0;
  return a.coords() > b.coords();
}

std::vector<Weight> saturated_below(const Weight& lam, const RootSystem& rs) {
  if (lam.rank() != rs.rank()) throw std::invalid_argument("weight rank does not match root system");
  if (!lam.is_dominant()) throw std::invalid_argument("saturated_below: weight must be dominant");
  // Dominant weights have non-negative root coordinates, which bounds the search box.
  auto top = rs.to_root_coords(lam);
  std::vector<int> bound;
  for (const auto& c : top) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
    bound.push_back(static_cast<int>(f.get_si()));
  }
  std::vector<Weight> out;
  std::vector<int> c(rs.rank(), 0);
  while (true) {
    Weight mu = lam;
    for (std::size_t i = 0; i < rs.rank(); ++i) mu -= c[i] * rs.simple_root(i);
    if (mu.is_dominant()) out.push_back(mu);
    std::size_t i = 0;
    while (i < c.size() && c[i] == bound[i]) c[i++] = 0;
    if (i == c.size()) break;
    ++c[i];
  }
  std::sort(out.begin(), out.end(), [&](const Weight& a, const Weight& b) { return linear_order_less(a, b, rs); });
  return out;
}

std::vector<std::pair<Weight, Weight>> hasse_diagram(const std::vector<Weight>& weights, const RootSystem& rs) {
  std::vector<std::pair<Weight, Weight>> edges;
  const std::size_t n = weights.size();
  auto lt = [&](std::size_t a, std::size_t b) { return a != b && dominance_le(weights[a], weights[b], rs); };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!lt(a, b)) continue;
      bool covered = true;
      for (std::size_t c = 0; c < n && covered; ++c)
        if (c != a && c != b && lt(a, c) && lt(c, b)) covered = false;
      if (covered) edges.emplace_back(weights[a], weights[b]);
    }
  std::sort(edges.begin(), edges.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return linear_order_less(x.first, y.first, rs);
    return linear_order_less(x.second, y.second, rs);
  });
  return edges;
}

Integer weyl_dimension(const Weight& lam, const RootSystem& rs) {
  Integer num = 1, den = 1;
  const Weight shifted = lam + rs.rho();
  for (std::size_t k = 0; k < rs.num_positive_roots(); ++k) {
    num *= rs.coroot_pairing(shifted, k);
    den *= rs.coroot_pairing(rs.rho(), k);
  }
  return num / den;
}

// ------------------------------------------------------------ Character

Character::Character(Map m) {
  for (auto& [w, k] : m)
    if (k != 0) terms_.emplace(w, k);
}

Character Character::of_weight(const Weight& w, std::int64_t mult) {
  Character c;
  c.add(w, mult);
  return c;
}

std::int64_t Character::operator[](const Weight& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

void Character::add(const Weight& w, std::int64_t mult) {
  if (mult == 0) return;
  auto [it, inserted] = terms_.emplace(w, mult);
  if (!inserted) {
    it->second += mult;
    if (it->second == 0) terms_.erase(it);
  }
}

std::int64_t Character::total() const {
  std::int64_t t = 0;
  for (const auto& [w, k] : terms_) t += k;
  return t;
}

bool Character::is_effective() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

Character& Character::operator+=(const Character& o) {
  for (const auto& [w, k] : o.terms_) add(w, k);
  return *this;
}

Character& Character::operator-=(const Character& o) {
  for (const auto& [w, k] : o.terms_) add(w, -k);
  return *this;
}

Character operator*(std::int64_t k, const Character& c) {
  Character out;
  for (const auto& [w, m] : c.terms_) out.add(w, k * m);
  return out;
}

Character operator*(const Character& a, const Character& b) {
  Character out;
  for (const auto& [wa, ka] : a.terms_)
    for (const auto& [wb, kb] : b.terms_) out.add(wa + wb, ka * kb);
  return out;
}

Character Character::dilate(int q) const {
  Character out;
  for (const auto& [w, k] : terms_) out.add(q * w, k);
  return out;
}

std::map<Weight, std::int64_t> dominant_multiplicities(const Weight& lam, const RootSystem& rs) {
  std::vector<Weight> doms = saturated_below(lam, rs);
  std::reverse(doms.begin(), doms.end());  // highest first
  std::map<Weight, std::int64_t> mult;
  const Weight lr = lam + rs.rho();
  const Rational top = rs.inner_product(lr, lr);
  for (const auto& mu : doms) {
    if (mu == lam) {
      mult[mu] = 1;
      continue;
    }
    Rational sum = 0;
    for (const auto& beta : rs.positive_roots()) {
      for (int k = 1;; ++k) {
        Weight nu = mu + k * beta.weight;
        auto it = mult.find(rs.dominant_conjugate(nu));
        if (it == mult.end()) break;
        sum += it->second * rs.inner_product(nu, beta.weight);
      }
    }
    const Weight mr = mu + rs.rho();
    Rational m = 2 * sum / (top - rs.inner_product(mr, mr));
    if (m.get_den() != 1) throw std::logic_error("Freudenthal recursion produced a non-integer multiplicity");
    mult[mu] = m.get_num().get_si();
  }
  for (auto it = mult.begin(); it != mult.end();) {
    if (it->second == 0)
      it = mult.erase(it);
    else
      ++it;
  }
  return mult;
}

Character weyl_character(const Weight& lam, const RootSystem& rs) {
  Character ch;
  for (const auto& [mu, m] : dominant_multiplicities(lam, rs))
    for (const auto& w : rs.orbit(mu)) ch.add(w, m);
  return ch;
}

std::map<Weight, std::int64_t> decompose_character(const Character& ch, const RootSystem& rs,
                                                   const std::function<Character(const Weight&)>& basis) {
  std::map<Weight, std::int64_t> coeffs;
  Character rest = ch;
  while (!rest.empty()) {
    const Weight* top = nullptr;
    for (const auto& [w, k] : rest.terms())
      if (!top || linear_order_less(*top, w, rs)) top = &w;
    const Weight mu = *top;
    if (!mu.is_dominant()) throw std::domain_error("decompose_character: highest term " + mu.to_string() + " is not dominant");
    const std::int64_t d = rest[mu];
    Character b = basis(mu);
    if (b[mu] != 1) throw std::domain_error("decompose_character: basis element lacks its highest weight");
    rest -= d * b;
    coeffs[mu] += d;
  }
  return coeffs;
}

}  // namespace weylkit
