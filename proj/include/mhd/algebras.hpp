#pragma once

// Group-graded algebras with lazily built, memoized components.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mhd/exact.hpp"
#include "mhd/groups.hpp"
#include "mhd/report.hpp"

namespace mhd {

class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class Key, class Value>
class MemoCache {
 public:
  template <class Make>
  const Value& get(const Key& key, Make&& make) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return *it->second;
    }
    auto value = std::make_shared<const Value>(make());
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = map_.emplace(key, std::move(value));
    return *it->second;
  }

 private:
  mutable std::mutex mu_;
  mutable std::map<Key, std::shared_ptr<const Value>> map_;
};

// x -> matrix * conj(x) when antilinear, matrix * x otherwise.
struct Star {
  Matrix matrix;
  bool antilinear = true;

  Vec apply(const Vec& x) const { return matrix * (antilinear ? x.conj() : x); }
};

struct StarBlock {
  Elem target;
  Star star;
};

inline Vec star_tensor(const Star& left, const Star& right, const Vec& v, std::size_t right_dim_in) {
  // (x (x) y)* = x* (x) y* extended additively; the scalar rule follows the
  // left factor, which matches both factors when their kinds agree.
  std::vector<Vec::Entry> acc;
  std::size_t rd = right.matrix.rows();
  for (const auto& [idx, c] : v.entries()) {
    std::size_t i = idx / right_dim_in;
    std::size_t j = idx % right_dim_in;
    Scalar coef = left.antilinear ? c.conj() : c;
    const Vec& li = left.matrix.col(i);
    const Vec& rj = right.matrix.col(j);
    for (const auto& [a, x] : li.entries()) {
      for (const auto& [b, y] : rj.entries()) acc.emplace_back(a * rd + b, coef * x * y);
    }
  }
  return Vec::from_entries(left.matrix.rows() * rd, std::move(acc));
}

enum class Mode { Cograded, Graded };

inline std::string mode_name(Mode m) { return m == Mode::Cograded ? "cograded" : "graded"; }

// Finite-dimensional algebra B_p of a cograded family.
struct ComponentAlgebra {
  std::size_t dim = 0;
  Matrix product;  // dim x dim^2
  std::optional<Vec> unit;
  std::optional<Star> star;
};

class GradedAlgebra {
 public:
  struct Definition {
    Group group;
    Mode mode = Mode::Cograded;
    std::function<std::size_t(Elem)> dim;
    // Block H_p (x) H_q -> H_{product_target(p,q)}; only called for typed pairs.
    std::function<Matrix(Elem, Elem)> product;
    std::function<std::optional<Vec>(Elem)> unit;
    // Empty when the algebra carries no involution.
    std::function<StarBlock(Elem)> star;
  };

  GradedAlgebra() = default;
  explicit GradedAlgebra(Definition def) : impl_(std::make_shared<Impl>()) {
    if (!def.dim || !def.product || !def.unit) throw StructureError("graded algebra definition incomplete");
    impl_->def = std::move(def);
  }

  const Group& group() const { return impl_->def.group; }
  Mode mode() const { return impl_->def.mode; }
  bool has_star() const { return static_cast<bool>(impl_->def.star); }
  const void* id() const { return impl_.get(); }

  std::size_t dim(Elem p) const {
    return impl_->dims.get(p, [&] { return impl_->def.dim(p); });
  }

  std::optional<Elem> product_target(Elem p, Elem q) const {
    if (mode() == Mode::Cograded) return p == q ? std::optional<Elem>(p) : std::nullopt;
    return group().mul(p, q);
  }

  const Matrix& product(Elem p, Elem q) const {
    auto t = product_target(p, q);
    if (!t) throw StructureError("product of components " + group().name(p) + ", " + group().name(q) + " is zero");
    return impl_->products.get({p, q}, [&] {
      Matrix m = impl_->def.product(p, q);
      if (m.rows() != dim(*t) || m.cols() != dim(p) * dim(q)) {
        throw DimensionMismatch("product block (" + group().name(p) + ", " + group().name(q) + ") has shape " +
                                m.shape());
      }
      return m;
    });
  }

  const std::optional<Vec>& unit(Elem p) const {
    return impl_->units.get(p, [&] { return impl_->def.unit(p); });
  }

  const StarBlock& star(Elem p) const {
    if (!has_star()) throw StructureError("algebra has no involution");
    return impl_->stars.get(p, [&] {
      StarBlock s = impl_->def.star(p);
      if (s.star.matrix.rows() != dim(s.target) || s.star.matrix.cols() != dim(p)) {
        throw DimensionMismatch("star block at " + group().name(p) + " has shape " + s.star.matrix.shape());
      }
      return s;
    });
  }

  ComponentAlgebra component(Elem p) const {
    if (mode() != Mode::Cograded) throw StructureError("components are algebras only in cograded mode");
    ComponentAlgebra c;
    c.dim = dim(p);
    c.product = product(p, p);
    c.unit = unit(p);
    if (has_star()) c.star = star(p).star;
    return c;
  }

  // Product of single-component vectors, with the target component.
  std::pair<Elem, Vec> multiply(Elem p, const Vec& x, Elem q, const Vec& y) const {
    auto t = product_target(p, q);
    if (!t) return {p, Vec(dim(p))};
    return {*t, product(p, q) * x.kron(y)};
  }

 private:
  struct Impl {
    Definition def;
    MemoCache<Elem, std::size_t> dims;
    MemoCache<std::pair<Elem, Elem>, Matrix> products;
    MemoCache<Elem, std::optional<Vec>> units;
    MemoCache<Elem, StarBlock> stars;
  };
  std::shared_ptr<Impl> impl_;
};

// Finitely supported element of a graded algebra.
class GradedElement {
 public:
  GradedElement() = default;
  explicit GradedElement(const GradedAlgebra& alg) : parent_(alg.id()) {}

  static GradedElement basis(const GradedAlgebra& alg, Elem p, std::size_t k) {
    GradedElement x(alg);
    x.set(p, Vec::unit(alg.dim(p), k));
    return x;
  }

  const void* parent() const { return parent_; }
  const std::map<Elem, Vec>& components() const { return parts_; }

  void set(Elem p, Vec v) {
    if (v.is_zero()) {
      parts_.erase(p);
    } else {
      parts_[p] = std::move(v);
    }
  }
  void add(Elem p, const Vec& v) {
    auto it = parts_.find(p);
    if (it == parts_.end()) {
      set(p, v);
      return;
    }
    it->second.axpy(1, v);
    if (it->second.is_zero()) parts_.erase(it);
  }
  Vec component(Elem p, std::size_t dim) const {
    auto it = parts_.find(p);
    return it == parts_.end() ? Vec(dim) : it->second;
  }
  bool is_zero() const { return parts_.empty(); }

  friend bool operator==(const GradedElement& a, const GradedElement& b) { return a.parts_ == b.parts_; }

 private:
  const void* parent_ = nullptr;
  std::map<Elem, Vec> parts_;
};

inline GradedElement multiply(const GradedAlgebra& alg, const GradedElement& x, const GradedElement& y) {
  if (x.parent() != alg.id() || y.parent() != alg.id()) throw StructureError("element from another algebra");
  GradedElement out(alg);
  for (const auto& [p, u] : x.components()) {
    for (const auto& [q, v] : y.components()) {
      auto t = alg.product_target(p, q);
      if (t) out.add(*t, alg.product(p, q) * u.kron(v));
    }
  }
  return out;
}

// A multiplier given componentwise; in cograded mode it acts on B_p through
// its p-component.
struct GradedMultiplier {
  std::function<Vec(Elem)> component;
};

inline GradedElement multiplier_times_element(const GradedAlgebra& alg, const GradedMultiplier& m,
                                              const GradedElement& x) {
  if (x.parent() != alg.id()) throw StructureError("element from another algebra");
  if (alg.mode() != Mode::Cograded) throw StructureError("componentwise multipliers need cograded mode");
  GradedElement out(alg);
  for (const auto& [p, v] : x.components()) out.add(p, alg.product(p, p) * m.component(p).kron(v));
  return out;
}

// Component and cross-block algebra invariants over a window.
inline Report check_graded_algebra(const GradedAlgebra& alg, const Window& w) {
  const Group& g = alg.group();
  Report rep;
  Tally assoc("associativity", "(xy)z = x(yz)");
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      auto pq = alg.product_target(p, q);
      if (!pq) continue;
      for (Elem r : w.elements()) {
        auto qr = alg.product_target(q, r);
        auto left_t = alg.product_target(*pq, r);
        if (!qr || !left_t) continue;
        Matrix left = alg.product(*pq, r) * kron(alg.product(p, q), Matrix::identity(alg.dim(r)));
        Matrix right = alg.product(p, *qr) * kron(Matrix::identity(alg.dim(p)), alg.product(q, r));
        assoc.expect(left == right, "(" + g.name(p) + ", " + g.name(q) + ", " + g.name(r) + ")");
      }
    }
  }
  assoc.into(rep);

  Tally unit("unit", alg.mode() == Mode::Cograded ? "1_p x = x 1_p = x on every component" : "1 x = x 1 = x");
  for (Elem p : w.elements()) {
    std::size_t d = alg.dim(p);
    if (alg.mode() == Mode::Cograded) {
      const auto& u = alg.unit(p);
      if (!u) {
        unit.fail("component " + g.name(p) + " has no unit");
        continue;
      }
      Matrix m = alg.product(p, p);
      Matrix lu = m * kron(Matrix::column(*u), Matrix::identity(d));
      Matrix ru = m * kron(Matrix::identity(d), Matrix::column(*u));
      unit.expect(lu == Matrix::identity(d) && ru == Matrix::identity(d), "component " + g.name(p));
    } else {
      Elem e = g.identity();
      const auto& u = alg.unit(e);
      if (!u) {
        unit.fail("no unit in the identity component");
        continue;
      }
      Matrix lu = alg.product(e, p) * kron(Matrix::column(*u), Matrix::identity(d));
      Matrix ru = alg.product(p, e) * kron(Matrix::identity(d), Matrix::column(*u));
      unit.expect(lu == Matrix::identity(d) && ru == Matrix::identity(d), "component " + g.name(p));
    }
  }
  unit.into(rep);

  Tally nondeg("nondegeneracy", "xA = 0 or Ax = 0 implies x = 0");
  for (Elem p : w.elements()) {
    std::size_t d = alg.dim(p);
    if (d == 0) {
      nondeg.ok();
      continue;
    }
    // Stack right and left multiplication maps into one tall map on H_p.
    std::vector<Vec> cols(d);
    std::vector<std::vector<Vec::Entry>> right_rows(d);
    std::vector<std::vector<Vec::Entry>> left_rows(d);
    std::size_t offset_r = 0;
    std::size_t offset_l = 0;
    for (Elem q : w.elements()) {
      std::size_t dq = alg.dim(q);
      if (auto t = alg.product_target(p, q)) {
        const Matrix& m = alg.product(p, q);
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < dq; ++j) {
            for (const auto& [k, v] : m.col(i * dq + j).entries()) {
              right_rows[i].emplace_back(offset_r + j * alg.dim(*t) + k, v);
            }
          }
        }
        offset_r += dq * alg.dim(*t);
      }
      if (auto t = alg.product_target(q, p)) {
        const Matrix& m = alg.product(q, p);
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < dq; ++j) {
            for (const auto& [k, v] : m.col(j * d + i).entries()) {
              left_rows[i].emplace_back(offset_l + j * alg.dim(*t) + k, v);
            }
          }
        }
        offset_l += dq * alg.dim(*t);
      }
    }
    std::vector<Vec> rc;
    std::vector<Vec> lc;
    for (std::size_t i = 0; i < d; ++i) {
      rc.push_back(Vec::from_entries(offset_r, right_rows[i]));
      lc.push_back(Vec::from_entries(offset_l, left_rows[i]));
    }
    bool ok = rank(Matrix::from_columns(offset_r, rc)) == d && rank(Matrix::from_columns(offset_l, lc)) == d;
    nondeg.expect(ok, "component " + g.name(p));
  }
  nondeg.into(rep);

  if (alg.has_star()) {
    Tally invol("star involutive", "(x*)* = x");
    Tally anti("star antimultiplicative", "(xy)* = y* x*");
    Tally antilin("star antilinear", "(c x)* = conj(c) x*");
    for (Elem p : w.elements()) {
      const StarBlock& s = alg.star(p);
      if (!w.contains(s.target)) continue;
      const StarBlock& back = alg.star(s.target);
      bool inv_ok = back.target == p;
      for (std::size_t k = 0; k < alg.dim(p) && inv_ok; ++k) {
        Vec x = Vec::unit(alg.dim(p), k, Scalar(1, 1));
        inv_ok = back.star.apply(s.star.apply(x)) == x;
      }
      invol.expect(inv_ok, "component " + g.name(p));
      bool lin_ok = true;
      for (std::size_t k = 0; k < alg.dim(p) && lin_ok; ++k) {
        Vec x = Vec::unit(alg.dim(p), k);
        lin_ok = s.star.apply(x.scaled(Scalar::i())) == s.star.apply(x).scaled(-Scalar::i());
      }
      antilin.expect(lin_ok, "component " + g.name(p) + " with coefficient i");
      for (Elem q : w.elements()) {
        auto t = alg.product_target(p, q);
        if (!t) continue;
        const StarBlock& sq = alg.star(q);
        const StarBlock& st = alg.star(*t);
        auto rev = alg.product_target(sq.target, s.target);
        bool ok = true;
        for (std::size_t i = 0; i < alg.dim(p) && ok; ++i) {
          for (std::size_t j = 0; j < alg.dim(q) && ok; ++j) {
            Vec x = Vec::unit(alg.dim(p), i);
            Vec y = Vec::unit(alg.dim(q), j);
            Vec lhs = st.star.apply(alg.product(p, q) * x.kron(y));
            if (!rev || *rev != st.target) {
              ok = lhs.is_zero();
              continue;
            }
            Vec rhs = alg.product(sq.target, s.target) * sq.star.apply(y).kron(s.star.apply(x));
            ok = lhs == rhs;
          }
        }
        anti.expect(ok, "(" + g.name(p) + ", " + g.name(q) + ")");
      }
    }
    invol.into(rep);
    anti.into(rep);
    antilin.into(rep);
  }
  return rep;
}

}  // namespace mhd
