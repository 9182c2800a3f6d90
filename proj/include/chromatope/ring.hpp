#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "chromatope/characteristic.hpp"
#include "chromatope/errors.hpp"
#include "chromatope/lattice.hpp"
#include "chromatope/polytope.hpp"

namespace chromatope {

/// Exponent vector over the facet variables v_1..v_m.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& mono) {
  int d = 0;
  for (int e : mono) d += e;
  return d;
}

inline bool is_square_free(const Monomial& mono) {
  for (int e : mono)
    if (e > 1) return false;
  return true;
}

/// Integer polynomial in the facet variables. Cohomological degree of a
/// monomial is twice its total degree; `degree()` reports the total degree.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(std::size_t num_vars) : num_vars_(num_vars) {}

  static RingElement constant(std::size_t num_vars, std::int64_t c) {
    RingElement r(num_vars);
    r.add_term(Monomial(num_vars, 0), c);
    return r;
  }
  static RingElement variable(std::size_t num_vars, int j) {
    RingElement r(num_vars);
    Monomial mono(num_vars, 0);
    mono[static_cast<std::size_t>(j)] = 1;
    r.add_term(mono, 1);
    return r;
  }
  static RingElement monomial(Monomial mono, std::int64_t c = 1) {
    RingElement r(mono.size());
    r.add_term(std::move(mono), c);
    return r;
  }

  std::size_t num_vars() const { return num_vars_; }
  const std::map<Monomial, std::int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Monomial& mono, std::int64_t c) {
    if (c == 0) return;
    auto [it, _] = terms_.try_emplace(mono, 0);
    it->second = detail::checked_add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }

  std::int64_t coefficient(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Total degree if homogeneous (0 for the zero element).
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [mono, _] : terms_) {
      const int td = total_degree(mono);
      if (d && *d != td) return std::nullopt;
      d = td;
    }
    return d.value_or(0);
  }

  RingElement& operator+=(const RingElement& o) {
    adopt(o);
    for (const auto& [mono, c] : o.terms_) add_term(mono, c);
    return *this;
  }
  RingElement& operator-=(const RingElement& o) {
    adopt(o);
    for (const auto& [mono, c] : o.terms_) add_term(mono, detail::checked_mul(c, -1));
    return *this;
  }
  RingElement& operator*=(std::int64_t s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [_, c] : terms_) c = detail::checked_mul(c, s);
    return *this;
  }

  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator-(RingElement a) { return a *= -1; }
  friend RingElement operator*(RingElement a, std::int64_t s) { return a *= s; }
  friend RingElement operator*(std::int64_t s, RingElement a) { return a *= s; }

  /// Plain polynomial product (no quotient applied).
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    RingElement r(std::max(a.num_vars_, b.num_vars_));
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial mono(r.num_vars_, 0);
        for (std::size_t i = 0; i < ma.size(); ++i) mono[i] += ma[i];
        for (std::size_t i = 0; i < mb.size(); ++i) mono[i] += mb[i];
        r.add_term(mono, detail::checked_mul(ca, cb));
      }
    return r;
  }

  bool operator==(const RingElement& o) const { return terms_ == o.terms_; }

 private:
  void adopt(const RingElement& o) {
    if (num_vars_ == 0) num_vars_ = o.num_vars_;
  }

  std::size_t num_vars_ = 0;
  std::map<Monomial, std::int64_t> terms_;
};

/// Variable names: v<j> for facet j-1, and t<k> for the k-th facet of the
/// distinguished color (when a special coloring is supplied).
class VariableNames {
 public:
  explicit VariableNames(std::size_t num_vars) : names_(num_vars) {
    for (std::size_t j = 0; j < num_vars; ++j) {
      names_[j] = "v" + std::to_string(j + 1);
      lookup_[names_[j]] = static_cast<int>(j);
    }
  }

  VariableNames(std::size_t num_vars, const std::vector<int>& simplex_facets) : VariableNames(num_vars) {
    for (std::size_t k = 0; k < simplex_facets.size(); ++k) {
      const std::string t = "t" + std::to_string(k + 1);
      names_[static_cast<std::size_t>(simplex_facets[k])] = t;
      lookup_[t] = simplex_facets[k];
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(int j) const { return names_[static_cast<std::size_t>(j)]; }
  std::optional<int> find(const std::string& nm) const {
    auto it = lookup_.find(nm);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::string format(const RingElement& x) const {
    if (x.is_zero()) return "0";
    std::string out;
    for (const auto& [mono, c] : x.terms()) {
      std::string factors;
      for (std::size_t j = 0; j < mono.size(); ++j) {
        if (mono[j] == 0) continue;
        if (!factors.empty()) factors += "*";
        factors += names_[j];
        if (mono[j] > 1) factors += "^" + std::to_string(mono[j]);
      }
      const std::int64_t a = c < 0 ? -c : c;
      std::string term;
      if (factors.empty())
        term = std::to_string(a);
      else if (a == 1)
        term = factors;
      else
        term = std::to_string(a) + "*" + factors;
      if (out.empty())
        out = c < 0 ? "-" + term : term;
      else
        out += (c < 0 ? " - " : " + ") + term;
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> lookup_;
};

namespace detail {

class RingLiteralParser {
 public:
  RingLiteralParser(std::string_view text, const VariableNames& names) : s_(text), names_(names) {}

  RingElement parse() {
    auto r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("ring literal '" + std::string(s_) + "': " + msg + " at offset " + std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::int64_t number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }
  RingElement expr() {
    RingElement r(names_.size());
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    r = term();
    if (neg) r = -r;
    while (true) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }
  RingElement term() {
    RingElement r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }
  RingElement factor() {
    RingElement base = atom();
    if (eat('^')) {
      const auto k = number();
      RingElement r = RingElement::constant(names_.size(), 1);
      for (std::int64_t i = 0; i < k; ++i) r = r * base;
      return r;
    }
    return base;
  }
  RingElement atom() {
    skip_ws();
    if (eat('(')) {
      auto r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      return RingElement::constant(names_.size(), number());
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a variable, number or '('");
    const std::string nm(s_.substr(start, pos_ - start));
    const auto j = names_.find(nm);
    if (!j) fail("unknown variable '" + nm + "'");
    return RingElement::variable(names_.size(), *j);
  }

  std::string_view s_;
  const VariableNames& names_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses literals such as "3*v1*v2 - t1^2" or "(v1+v2+v3)^3".
inline RingElement parse_ring_element(std::string_view text, const VariableNames& names) {
  return detail::RingLiteralParser(text, names).parse();
}

/// One graded piece of the face ring modulo the linear relations. Columns
/// are the monomials of the given total degree whose support is a face;
/// monomials with a repeated variable come first so that they are the
/// pivots eliminated by the echelon basis.
struct GradedBasis {
  int degree = 0;
  std::vector<Monomial> columns;
  std::map<Monomial, int> index;
  std::size_t first_square_free = 0;
  IntegerEchelon relations;

  /// Rank of the quotient (the free part).
  std::size_t quotient_rank() const { return columns.size() - relations.rank(); }
};

/// Cohomology ring Z[v_1..v_m] / (I + J) of the quasitoric manifold over a
/// simple polytope with characteristic matrix lambda: I is the face ideal
/// of non-faces and J is generated by the rows of lambda.
///
/// Reduction works for coloring-induced matrices (entries in {0, +-1},
/// each column with a unit entry): repeated variables are rewritten through
/// a unit row of lambda, then the square-free remainder is put in canonical
/// form against the graded relation lattice. Graded pieces are built lazily
/// and cached; concurrent readers are safe.
class CohomologyRing {
 public:
  struct Reduction {
    RingElement value;
    int max_depth = 0;  // longest chain of square substitutions used
  };

  CohomologyRing(CombinatorialPolytope p, CharacteristicMatrix lambda)
      : p_(std::move(p)), lambda_(std::move(lambda)) {
    require_simple(p_, "CohomologyRing");
    if (lambda_.n != p_.dim || lambda_.m() != p_.num_facets())
      throw InvalidInput("characteristic matrix shape does not match the polytope");
    const auto fv = p_.facet_vertices();
    facet_vertex_mask_.resize(p_.num_facets());
    for (std::size_t f = 0; f < fv.size(); ++f) {
      facet_vertex_mask_[f].assign(p_.num_vertices(), false);
      for (int v : fv[f]) facet_vertex_mask_[f][static_cast<std::size_t>(v)] = true;
    }
    unit_pivots_ = true;
    for (std::size_t j = 0; j < lambda_.m(); ++j) {
      bool has_unit = false;
      for (auto e : lambda_.columns[j]) {
        if (e < -1 || e > 1) unit_pivots_ = false;
        if (e == 1 || e == -1) has_unit = true;
      }
      if (!has_unit) unit_pivots_ = false;
    }
  }

  const CombinatorialPolytope& polytope() const { return p_; }
  const CharacteristicMatrix& matrix() const { return lambda_; }
  std::size_t num_vars() const { return p_.num_facets(); }
  int dim() const { return p_.dim; }
  /// Substitutions allowed per monomial before giving up.
  int depth_cap() const { return 4 * p_.dim; }

  /// True iff the facets in the support of `mono` share a vertex.
  bool is_face(const Monomial& mono) const {
    std::vector<bool> common(p_.num_vertices(), true);
    for (std::size_t j = 0; j < mono.size(); ++j) {
      if (mono[j] == 0) continue;
      for (std::size_t v = 0; v < common.size(); ++v) common[v] = common[v] && facet_vertex_mask_[j][v];
    }
    for (bool b : common)
      if (b) return true;
    return false;
  }

  /// Drops monomials in the face ideal.
  RingElement kill_non_faces(const RingElement& x) const {
    RingElement r(num_vars());
    for (const auto& [mono, c] : x.terms())
      if (is_face(mono)) r.add_term(mono, c);
    return r;
  }

  RingElement multiply(const RingElement& a, const RingElement& b) const { return kill_non_faces(a * b); }

  RingElement power(const RingElement& a, int k) const {
    RingElement r = RingElement::constant(num_vars(), 1);
    for (int i = 0; i < k; ++i) r = multiply(r, a);
    return r;
  }

  RingElement variable(int j) const { return RingElement::variable(num_vars(), j); }

  Monomial vertex_monomial(int v) const {
    Monomial mono(num_vars(), 0);
    for (int f : p_.vertex_facets.at(static_cast<std::size_t>(v))) mono[static_cast<std::size_t>(f)] = 1;
    return mono;
  }

  Reduction reduce(const RingElement& x) const {
    require_unit_pivots();
    Reduction out{RingElement(num_vars()), 0};
    std::map<Monomial, std::pair<RingElement, int>> memo;
    RingElement square_free(num_vars());
    for (const auto& [mono, c] : x.terms()) {
      const auto& [val, depth] = rewrite(mono, 0, memo);
      out.max_depth = std::max(out.max_depth, depth);
      square_free += val * c;
    }
    out.value = reduce_by_degree(square_free);
    return out;
  }

  /// Canonical square-free representative.
  RingElement normal_form(const RingElement& x) const { return reduce(x).value; }

  /// Same quotient map computed only through the full graded relation
  /// lattice (no rewriting); agrees with normal_form.
  RingElement normal_form_by_lattice(const RingElement& x) const {
    require_unit_pivots();
    return reduce_by_degree(kill_non_faces(x));
  }

  bool is_zero_in_degree(const RingElement& x) const {
    if (!x.degree()) throw InvalidInput("is_zero_in_degree: element is not homogeneous");
    return normal_form(x).is_zero();
  }

  bool equal_in_ring(const RingElement& a, const RingElement& b) const { return normal_form(a - b).is_zero(); }

  std::shared_ptr<const GradedBasis> basis(int degree) const {
    {
      std::shared_lock lock(mu_);
      auto it = cache_.find(degree);
      if (it != cache_.end()) return it->second;
    }
    auto built = std::make_shared<const GradedBasis>(build_basis(degree));
    std::unique_lock lock(mu_);
    return cache_.try_emplace(degree, std::move(built)).first->second;
  }

  std::size_t rank_in_degree(int degree) const { return basis(degree)->quotient_rank(); }

  /// Coefficient of x against the top class, normalized so that the
  /// square-free monomial of `ref_vertex` integrates to +1.
  std::int64_t integrate(const RingElement& x, int ref_vertex) const {
    require_unit_pivots();
    if (ref_vertex < 0 || static_cast<std::size_t>(ref_vertex) >= p_.num_vertices())
      throw InvalidInput("integrate: reference vertex out of range");
    if (!x.is_zero() && x.degree() != p_.dim)
      throw InvalidInput("integrate: element is not homogeneous of top degree " + std::to_string(2 * p_.dim));
    const auto& w = top_functional(ref_vertex);
    const auto top = basis(p_.dim);
    const auto killed = kill_non_faces(x);
    std::int64_t total = 0;
    for (const auto& [mono, c] : killed.terms())
      total = detail::checked_add(total, detail::checked_mul(c, w[static_cast<std::size_t>(top->index.at(mono))]));
    return total;
  }

 private:
  void require_unit_pivots() const {
    if (!unit_pivots_)
      throw UnsupportedMatrix("ring reduction needs a coloring-induced characteristic matrix "
                              "(entries in {0,+-1} with a unit entry in every column)");
  }

  std::vector<Monomial> sr_monomials(int degree) const {
    std::vector<Monomial> out;
    const std::size_t m = num_vars();
    if (degree == 0) {
      out.emplace_back(m, 0);
      return out;
    }
    std::set<std::vector<int>> faces;
    for (const auto& fs : p_.vertex_facets)
      for (std::size_t s = 1; s <= fs.size() && s <= static_cast<std::size_t>(degree); ++s)
        detail::for_each_subset(fs, s, [&](const std::vector<int>& sub) { faces.insert(sub); });
    for (const auto& face : faces) {
      // compositions of `degree` into |face| positive parts
      std::vector<int> parts(face.size(), 1);
      const int extra = degree - static_cast<int>(face.size());
      auto rec = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 == parts.size()) {
          parts[i] = 1 + left;
          Monomial mono(m, 0);
          for (std::size_t k = 0; k < face.size(); ++k) mono[static_cast<std::size_t>(face[k])] = parts[k];
          out.push_back(std::move(mono));
          return;
        }
        for (int a = 0; a <= left; ++a) {
          parts[i] = 1 + a;
          self(self, i + 1, left - a);
        }
      };
      rec(rec, 0, extra);
    }
    return out;
  }

  GradedBasis build_basis(int degree) const {
    GradedBasis b;
    b.degree = degree;
    auto cols = sr_monomials(degree);
    std::sort(cols.begin(), cols.end(), [](const Monomial& a, const Monomial& c) {
      const bool sa = is_square_free(a), sc = is_square_free(c);
      if (sa != sc) return !sa;
      return a < c;
    });
    b.columns = std::move(cols);
    b.first_square_free = b.columns.size();
    for (std::size_t i = 0; i < b.columns.size(); ++i) {
      b.index.emplace(b.columns[i], static_cast<int>(i));
      if (b.first_square_free == b.columns.size() && is_square_free(b.columns[i])) b.first_square_free = i;
    }
    b.relations = IntegerEchelon(b.columns.size());
    if (degree == 0) return b;
    for (const auto& w : sr_monomials(degree - 1))
      for (int i = 0; i < lambda_.n; ++i) {
        SparseVector row;
        for (std::size_t l = 0; l < num_vars(); ++l) {
          const std::int64_t a = lambda_.at(i, static_cast<int>(l));
          if (a == 0) continue;
          Monomial mono = w;
          ++mono[l];
          auto it = b.index.find(mono);
          if (it == b.index.end()) continue;  // not a face
          auto& slot = row[it->second];
          slot = detail::checked_add(slot, a);
        }
        b.relations.add(std::move(row));
      }
    for (std::size_t c = 0; c < b.first_square_free; ++c)
      if (b.relations.pivot(static_cast<int>(c)) != 1)
        throw UnsupportedMatrix("no unit pivot eliminates a repeated-variable monomial in degree " +
                                std::to_string(degree));
    return b;
  }

  std::string describe(const Monomial& mono) const { return VariableNames(num_vars()).format(RingElement::monomial(mono)); }

  // Total degree minus support size: zero iff square-free.
  static int excess(const Monomial& mono) {
    int e = 0;
    for (int x : mono)
      if (x > 1) e += x - 1;
    return e;
  }

  // Rewrites one monomial into square-free form, preferring the unit row
  // whose expansion has the least total excess. Returns (value, depth).
  const std::pair<RingElement, int>& rewrite(const Monomial& mono, int depth,
                                             std::map<Monomial, std::pair<RingElement, int>>& memo) const {
    if (auto it = memo.find(mono); it != memo.end()) return it->second;
    if (!is_face(mono)) return memo.emplace(mono, std::make_pair(RingElement(num_vars()), 0)).first->second;
    std::size_t j = mono.size();
    for (std::size_t k = 0; k < mono.size(); ++k)
      if (mono[k] > 1) {
        j = k;
        break;
      }
    if (j == mono.size()) return memo.emplace(mono, std::make_pair(RingElement::monomial(mono), 0)).first->second;
    if (depth >= depth_cap())
      throw RewriteDepthExceeded("square elimination exceeded " + std::to_string(depth_cap()) +
                                 " substitutions at monomial " + describe(mono));

    // Substitute one copy of v_j using a unit row: v_j = -a_ij * sum_{l != j} a_il v_l.
    int best_row = -1, best_score = 0;
    std::vector<std::pair<Monomial, std::int64_t>> best_terms;
    for (int i = 0; i < lambda_.n; ++i) {
      const std::int64_t aij = lambda_.at(i, static_cast<int>(j));
      if (aij != 1 && aij != -1) continue;
      std::vector<std::pair<Monomial, std::int64_t>> terms;
      int score = 0;
      for (std::size_t l = 0; l < mono.size(); ++l) {
        const std::int64_t ail = lambda_.at(i, static_cast<int>(l));
        if (l == j || ail == 0) continue;
        Monomial next = mono;
        --next[j];
        ++next[l];
        if (!is_face(next)) continue;
        score += excess(next);
        terms.emplace_back(std::move(next), -aij * ail);
      }
      if (best_row < 0 || score < best_score) {
        best_row = i;
        best_score = score;
        best_terms = std::move(terms);
      }
    }
    RingElement value(num_vars());
    int height = 1;
    for (const auto& [next, c] : best_terms) {
      const auto& [sub, d] = rewrite(next, depth + 1, memo);
      value += sub * c;
      height = std::max(height, d + 1);
    }
    if (height > depth_cap())
      throw RewriteDepthExceeded("square elimination exceeded " + std::to_string(depth_cap()) +
                                 " substitutions at monomial " + describe(mono));
    return memo.emplace(mono, std::make_pair(std::move(value), height)).first->second;
  }

  RingElement reduce_by_degree(const RingElement& x) const {
    std::map<int, SparseVector> by_degree;
    for (const auto& [mono, c] : x.terms()) {
      const int d = total_degree(mono);
      const auto b = basis(d);
      auto it = b->index.find(mono);
      if (it == b->index.end()) continue;  // non-face
      by_degree[d][it->second] += c;
    }
    RingElement out(num_vars());
    for (auto& [d, vec] : by_degree) {
      const auto b = basis(d);
      for (const auto& [col, c] : b->relations.reduce(std::move(vec)))
        out.add_term(b->columns[static_cast<std::size_t>(col)], c);
    }
    return out;
  }

  const std::vector<std::int64_t>& top_functional(int ref_vertex) const {
    {
      std::shared_lock lock(mu_);
      auto it = functionals_.find(ref_vertex);
      if (it != functionals_.end()) return it->second;
    }
    const auto top = basis(p_.dim);
    const auto free_cols = top->relations.free_columns();
    if (free_cols.size() != 1)
      throw InvalidInput("top-degree quotient has rank " + std::to_string(free_cols.size()) +
                         " (expected 1); the characteristic pair is invalid");
    const auto phi = top->relations.kernel_functional(free_cols.front());
    const auto ref = top->index.find(vertex_monomial(ref_vertex));
    if (ref == top->index.end()) throw InvalidInput("integrate: reference vertex monomial is not a face");
    const auto scale = phi[static_cast<std::size_t>(ref->second)];
    if (scale.numerator() == 0) throw InvalidInput("integrate: reference vertex monomial vanishes in top degree");
    std::vector<std::int64_t> w(phi.size());
    for (std::size_t c = 0; c < phi.size(); ++c) {
      const auto q = phi[c] / scale;
      if (q.denominator() != 1)
        throw InvalidInput("integrate: reference vertex monomial does not generate the top degree");
      w[c] = q.numerator();
    }
    std::unique_lock lock(mu_);
    return functionals_.try_emplace(ref_vertex, std::move(w)).first->second;
  }

  CombinatorialPolytope p_;
  CharacteristicMatrix lambda_;
  std::vector<std::vector<bool>> facet_vertex_mask_;
  bool unit_pivots_ = false;
  mutable std::shared_mutex mu_;
  mutable std::map<int, std::shared_ptr<const GradedBasis>> cache_;
  mutable std::map<int, std::vector<std::int64_t>> functionals_;
};

/// Sum of the variables of the facets at vertex v.
inline RingElement vertex_class(const CombinatorialPolytope& p, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= p.num_vertices()) throw InvalidInput("vertex_class: vertex out of range");
  RingElement r(p.num_facets());
  for (int f : p.vertex_facets[static_cast<std::size_t>(v)]) r += RingElement::variable(p.num_facets(), f);
  return r;
}

/// Sum of the variables of the facets carrying the distinguished color n.
inline RingElement simplicial_class(const CombinatorialPolytope& p, const Coloring& h) {
  require_special_coloring(p, h);
  RingElement r(p.num_facets());
  for (int f : h.facets_of_color(p.dim)) r += RingElement::variable(p.num_facets(), f);
  return r;
}

/// Facets of the distinguished color (in index order) and, for each of
/// them, its unique neighbour of every other color.
struct SimplexBookkeeping {
  std::vector<int> simplices;
  std::vector<std::vector<int>> neighbour;  // neighbour[k][i]: facet of color i touching simplices[k]

  /// The vertex of simplices[k] missing color n-1 (its facets are the
  /// neighbours of colors 0..n-2 and the simplex itself).
  std::vector<int> anchor_vertex;
};

inline SimplexBookkeeping simplex_bookkeeping(const CombinatorialPolytope& p, const Coloring& h) {
  require_special_coloring(p, h);
  SimplexBookkeeping b;
  b.simplices = h.facets_of_color(p.dim);
  const auto adj = facet_adjacency(p);
  for (int t : b.simplices) {
    std::vector<int> nb(static_cast<std::size_t>(p.dim), -1);
    for (int g : adj[static_cast<std::size_t>(t)]) nb[static_cast<std::size_t>(h.color[static_cast<std::size_t>(g)])] = g;
    std::vector<int> fs(nb.begin(), nb.end() - 1);
    fs.push_back(t);
    std::sort(fs.begin(), fs.end());
    const auto vs = common_vertices(p, fs);
    if (vs.size() != 1) throw InvalidInput("simplex_bookkeeping: anchor vertex not unique");
    b.anchor_vertex.push_back(vs.front());
    b.neighbour.push_back(std::move(nb));
  }
  return b;
}

}  // namespace chromatope
