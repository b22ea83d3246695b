#pragma once

// Block-typed multiplier Hopf structures: coproduct blocks, counit, antipode,
// the axiom suite, and integrals.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mhd/algebras.hpp"
#include "mhd/exact.hpp"
#include "mhd/groups.hpp"
#include "mhd/report.hpp"

namespace mhd {

class InconsistentSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFaithful : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which coproduct blocks exist: Delta_{p,q} maps H_source(p,q) into H_p (x) H_q.
struct CoproductTyping {
  std::string name;
  std::function<std::optional<Elem>(Elem, Elem)> source;
  std::function<std::optional<Elem>(Elem, Elem)> left_partner;   // (s, q) -> p
  std::function<std::optional<Elem>(Elem, Elem)> right_partner;  // (s, p) -> q

  static CoproductTyping standard(const Group& g) {
    return {"standard",
            [g](Elem p, Elem q) -> std::optional<Elem> { return g.mul(p, q); },
            [g](Elem s, Elem q) -> std::optional<Elem> { return g.mul(s, g.inv(q)); },
            [g](Elem s, Elem p) -> std::optional<Elem> { return g.mul(g.inv(p), s); }};
  }
  static CoproductTyping diagonal(const Group&) {
    auto same = [](Elem a, Elem b) -> std::optional<Elem> {
      if (a == b) return a;
      return std::nullopt;
    };
    return {"diagonal", same, same, same};
  }
};

struct Cut {
  Elem left;
  Elem right;
  Matrix map;
};

class MhaStructure {
 public:
  struct Definition {
    std::string name;
    GradedAlgebra algebra;
    CoproductTyping typing;
    std::function<Matrix(Elem, Elem)> delta;  // d(p)d(q) x d(source)
    std::function<Vec(Elem)> counit;           // row of length d(p)
    std::function<Elem(Elem)> antipode_target;
    std::function<Elem(Elem)> antipode_source;  // inverse of antipode_target
    std::function<Matrix(Elem)> antipode;       // d(target) x d(p)
  };

  MhaStructure() = default;
  explicit MhaStructure(Definition def) : impl_(std::make_shared<Impl>()) {
    if (!def.delta || !def.counit || !def.antipode || !def.antipode_target || !def.antipode_source ||
        !def.typing.source) {
      throw StructureError("structure definition incomplete");
    }
    impl_->def = std::move(def);
  }

  const std::string& name() const { return impl_->def.name; }
  const GradedAlgebra& algebra() const { return impl_->def.algebra; }
  const Group& group() const { return algebra().group(); }
  Mode mode() const { return algebra().mode(); }
  std::size_t dim(Elem p) const { return algebra().dim(p); }
  bool has_star() const { return algebra().has_star(); }
  const CoproductTyping& typing() const { return impl_->def.typing; }
  std::optional<Elem> source(Elem p, Elem q) const { return typing().source(p, q); }

  const Matrix& delta(Elem p, Elem q) const {
    auto s = source(p, q);
    if (!s) throw StructureError("no coproduct block at (" + group().name(p) + ", " + group().name(q) + ")");
    return impl_->deltas.get({p, q}, [&] {
      Matrix m = impl_->def.delta(p, q);
      if (m.rows() != dim(p) * dim(q) || m.cols() != dim(*s)) {
        throw DimensionMismatch("coproduct block (" + group().name(p) + ", " + group().name(q) + ") has shape " +
                                m.shape());
      }
      return m;
    });
  }

  const Vec& counit(Elem p) const {
    return impl_->counits.get(p, [&] {
      Vec v = impl_->def.counit(p);
      if (v.size() != dim(p)) throw DimensionMismatch("counit row has wrong length");
      return v;
    });
  }

  Elem antipode_target(Elem p) const { return impl_->def.antipode_target(p); }
  Elem antipode_source(Elem t) const { return impl_->def.antipode_source(t); }

  const Matrix& antipode(Elem p) const {
    return impl_->antipodes.get(p, [&] {
      Matrix m = impl_->def.antipode(p);
      if (m.rows() != dim(antipode_target(p)) || m.cols() != dim(p)) {
        throw DimensionMismatch("antipode block at " + group().name(p) + " has shape " + m.shape());
      }
      return m;
    });
  }

  // Inverse of the antipode block landing in H_t.
  const Matrix& antipode_inverse(Elem t) const {
    return impl_->antipode_inverses.get(t, [&] {
      Elem p = antipode_source(t);
      if (antipode_target(p) != t) throw StructureError("antipode typing is not invertible at " + group().name(t));
      auto inv = inverse(antipode(p));
      if (!inv) throw StructureError("antipode block at " + group().name(p) + " is not invertible");
      return *inv;
    });
  }

  // Delta(a)(1 (x) b) for a in H_s, b in H_q.
  const std::optional<Cut>& cut1(Elem s, Elem q) const {
    return impl_->cuts.get({1, s, q}, [&]() -> std::optional<Cut> {
      if (mode() == Mode::Graded) {
        Elem t = group().mul(s, q);
        return Cut{s, t, kron(ident(s), algebra().product(s, q)) * kron(delta(s, s), ident(q))};
      }
      auto p = typing().left_partner(s, q);
      if (!p || source(*p, q) != s) return std::nullopt;
      return Cut{*p, q, kron(ident(*p), algebra().product(q, q)) * kron(delta(*p, q), ident(q))};
    });
  }

  // (a (x) 1)Delta(b) for a in H_p, b in H_s.
  const std::optional<Cut>& cut2(Elem p, Elem s) const {
    return impl_->cuts.get({2, p, s}, [&]() -> std::optional<Cut> {
      if (mode() == Mode::Graded) {
        Elem t = group().mul(p, s);
        return Cut{t, s, kron(algebra().product(p, s), ident(s)) * kron(ident(p), delta(s, s))};
      }
      auto q = typing().right_partner(s, p);
      if (!q || source(p, *q) != s) return std::nullopt;
      return Cut{p, *q, kron(algebra().product(p, p), ident(*q)) * kron(ident(p), delta(p, *q))};
    });
  }

  // Delta(a)(b (x) 1) for a in H_s, b in H_p.
  const std::optional<Cut>& cut3(Elem s, Elem p) const {
    return impl_->cuts.get({3, s, p}, [&]() -> std::optional<Cut> {
      if (mode() == Mode::Graded) {
        Elem t = group().mul(s, p);
        Matrix perm = permute_legs({dim(s), dim(s), dim(p)}, {0, 2, 1});
        return Cut{t, s, kron(algebra().product(s, p), ident(s)) * perm * kron(delta(s, s), ident(p))};
      }
      auto q = typing().right_partner(s, p);
      if (!q || source(p, *q) != s) return std::nullopt;
      Matrix perm = permute_legs({dim(p), dim(*q), dim(p)}, {0, 2, 1});
      return Cut{p, *q, kron(algebra().product(p, p), ident(*q)) * perm * kron(delta(p, *q), ident(p))};
    });
  }

  // (1 (x) b)Delta(a) for a in H_s, b in H_q.
  const std::optional<Cut>& cut4(Elem s, Elem q) const {
    return impl_->cuts.get({4, s, q}, [&]() -> std::optional<Cut> {
      if (mode() == Mode::Graded) {
        Elem t = group().mul(q, s);
        Matrix perm = permute_legs({dim(s), dim(s), dim(q)}, {0, 2, 1});
        return Cut{s, t, kron(ident(s), algebra().product(q, s)) * perm * kron(delta(s, s), ident(q))};
      }
      auto p = typing().left_partner(s, q);
      if (!p || source(*p, q) != s) return std::nullopt;
      Matrix perm = permute_legs({dim(*p), dim(q), dim(q)}, {0, 2, 1});
      return Cut{*p, q, kron(ident(*p), algebra().product(q, q)) * perm * kron(delta(*p, q), ident(q))};
    });
  }

  Matrix ident(Elem p) const { return Matrix::identity(dim(p)); }

 private:
  struct Impl {
    Definition def;
    MemoCache<std::pair<Elem, Elem>, Matrix> deltas;
    MemoCache<Elem, Vec> counits;
    MemoCache<Elem, Matrix> antipodes;
    MemoCache<Elem, Matrix> antipode_inverses;
    MemoCache<std::tuple<int, Elem, Elem>, std::optional<Cut>> cuts;
  };
  std::shared_ptr<Impl> impl_;
};

namespace detail {

inline std::string pair_name(const Group& g, Elem a, Elem b) { return "(" + g.name(a) + ", " + g.name(b) + ")"; }
inline std::string triple_name(const Group& g, Elem a, Elem b, Elem c) {
  return "(" + g.name(a) + ", " + g.name(b) + ", " + g.name(c) + ")";
}

// Matrices into several components, compared up to zero blocks.
class BlockSum {
 public:
  void add(Elem target, const Matrix& m) {
    auto it = parts_.find(target);
    if (it == parts_.end()) {
      parts_.emplace(target, m);
    } else {
      it->second = it->second + m;
    }
  }
  bool operator==(const BlockSum& o) const { return includes(o) && o.includes(*this); }

 private:
  bool includes(const BlockSum& o) const {
    for (const auto& [t, m] : parts_) {
      auto it = o.parts_.find(t);
      if (it == o.parts_.end()) {
        if (!m.is_zero()) return false;
      } else if (it->second != m) {
        return false;
      }
    }
    return true;
  }
  std::map<Elem, Matrix> parts_;
};

}  // namespace detail

inline Report check_t1_t2(const MhaStructure& h, const Window& w) {
  const Group& g = h.group();
  Tally t1("T1 bijective", "a (x) b -> Delta(a)(1 (x) b) is bijective on every block");
  Tally t2("T2 bijective", "a (x) b -> (a (x) 1)Delta(b) is bijective on every block");
  Tally t3("T3 bijective", "a (x) b -> Delta(a)(b (x) 1) is bijective on every block");
  Tally t4("T4 bijective", "a (x) b -> (1 (x) b)Delta(a) is bijective on every block");
  Tally tiling("block tiling", "left and right partners invert the coproduct typing");
  auto judge = [&](Tally& t, const std::optional<Cut>& c, Elem el, Elem er, const std::string& where) {
    if (!c) {
      t.fail(where + ": block missing");
    } else if (c->left != el || c->right != er) {
      t.fail(where + ": lands in wrong block");
    } else if (!is_bijective(c->map)) {
      t.fail(where + ": rank " + std::to_string(rank(c->map)) + " of " + std::to_string(c->map.cols()));
    } else {
      t.ok();
    }
  };
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      std::string where = detail::pair_name(g, p, q);
      if (h.mode() == Mode::Graded) {
        // Here (p, q) indexes the inputs a in H_p, b in H_q.
        judge(t1, h.cut1(p, q), p, g.mul(p, q), where);
        judge(t2, h.cut2(p, q), g.mul(p, q), q, where);
        judge(t3, h.cut3(p, q), g.mul(p, q), p, where);
        judge(t4, h.cut4(p, q), p, g.mul(q, p), where);
        continue;
      }
      auto s = h.source(p, q);
      if (!s) {
        tiling.fail(where + ": no source component");
        continue;
      }
      tiling.expect(h.typing().left_partner(*s, q) == p && h.typing().right_partner(*s, p) == q, where);
      judge(t1, h.cut1(*s, q), p, q, where);
      judge(t2, h.cut2(p, *s), p, q, where);
      judge(t3, h.cut3(*s, p), p, q, where);
      judge(t4, h.cut4(*s, q), p, q, where);
    }
  }
  Report rep;
  t1.into(rep);
  t2.into(rep);
  t3.into(rep);
  t4.into(rep);
  if (h.mode() == Mode::Cograded) tiling.into(rep);
  return rep;
}

inline Report check_coassociativity(const MhaStructure& h, const Window& w) {
  const Group& g = h.group();
  Tally t("coassociativity", "(Delta (x) id)Delta = (id (x) Delta)Delta blockwise with matching sources");
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      for (Elem r : w.elements()) {
        if (h.mode() == Mode::Graded && !(p == q && q == r)) continue;
        std::string where = detail::triple_name(g, p, q, r);
        auto x = h.source(p, q);
        auto y = h.source(q, r);
        if (!x || !y) {
          t.fail(where + ": missing block");
          continue;
        }
        auto s1 = h.source(*x, r);
        auto s2 = h.source(p, *y);
        if (!s1 || !s2 || *s1 != *s2) {
          t.fail(where + ": sources differ");
          continue;
        }
        Matrix lhs = kron(h.delta(p, q), h.ident(r)) * h.delta(*x, r);
        Matrix rhs = kron(h.ident(p), h.delta(q, r)) * h.delta(p, *y);
        t.expect(lhs == rhs, where);
      }
    }
  }
  Report rep;
  t.into(rep);
  return rep;
}

inline Report check_counit(const MhaStructure& h, const Window& w) {
  const Group& g = h.group();
  const GradedAlgebra& alg = h.algebra();
  Tally left("counit left", "(eps (x) id)(Delta(a)(1 (x) b)) = ab");
  Tally right("counit right", "(id (x) eps)((a (x) 1)Delta(b)) = ab");
  Tally mult("counit multiplicative", "eps(ab) = eps(a)eps(b)");
  for (Elem a : w.elements()) {
    for (Elem b : w.elements()) {
      std::string where = detail::pair_name(g, a, b);
      auto prod = alg.product_target(a, b);
      if (const auto& c = h.cut1(a, b)) {
        detail::BlockSum lhs;
        detail::BlockSum rhs;
        lhs.add(c->right, kron(Matrix::row(h.counit(c->left)), h.ident(c->right)) * c->map);
        if (prod) rhs.add(*prod, alg.product(a, b));
        left.expect(lhs == rhs, where);
      } else if (prod) {
        left.fail(where + ": missing block");
      }
      if (const auto& c = h.cut2(a, b)) {
        detail::BlockSum lhs;
        detail::BlockSum rhs;
        lhs.add(c->left, kron(h.ident(c->left), Matrix::row(h.counit(c->right))) * c->map);
        if (prod) rhs.add(*prod, alg.product(a, b));
        right.expect(lhs == rhs, where);
      } else if (prod) {
        right.fail(where + ": missing block");
      }
      Vec both = h.counit(a).kron(h.counit(b));
      if (prod) {
        Vec lhs = alg.product(a, b).transpose() * h.counit(*prod);
        mult.expect(lhs == both, where);
      } else {
        mult.expect(both.is_zero(), where);
      }
    }
  }
  Report rep;
  left.into(rep);
  right.into(rep);
  mult.into(rep);
  return rep;
}

inline Report check_antipode(const MhaStructure& h, const Window& w) {
  const Group& g = h.group();
  const GradedAlgebra& alg = h.algebra();
  Tally left("antipode left", "m((S (x) id)(Delta(a)(1 (x) b))) = eps(a)b");
  Tally right("antipode right", "m((id (x) S)((a (x) 1)Delta(b))) = eps(b)a");
  Tally anti("antipode antimultiplicative", "S(ab) = S(b)S(a)");
  Tally bij("antipode bijective", "S restricted to each component is invertible");
  for (Elem a : w.elements()) {
    for (Elem b : w.elements()) {
      std::string where = detail::pair_name(g, a, b);
      if (const auto& c = h.cut1(a, b)) {
        detail::BlockSum lhs;
        Elem u = h.antipode_target(c->left);
        if (auto t = alg.product_target(u, c->right)) {
          lhs.add(*t, alg.product(u, c->right) * kron(h.antipode(c->left), h.ident(c->right)) * c->map);
        }
        detail::BlockSum rhs;
        rhs.add(b, kron(Matrix::row(h.counit(a)), h.ident(b)));
        left.expect(lhs == rhs, where);
      } else {
        left.expect(h.counit(a).is_zero(), where + ": missing block");
      }
      if (const auto& c = h.cut2(a, b)) {
        detail::BlockSum lhs;
        Elem v = h.antipode_target(c->right);
        if (auto t = alg.product_target(c->left, v)) {
          lhs.add(*t, alg.product(c->left, v) * kron(h.ident(c->left), h.antipode(c->right)) * c->map);
        }
        detail::BlockSum rhs;
        rhs.add(a, kron(h.ident(a), Matrix::row(h.counit(b))));
        right.expect(lhs == rhs, where);
      } else {
        right.expect(h.counit(b).is_zero(), where + ": missing block");
      }
      if (auto t = alg.product_target(a, b)) {
        detail::BlockSum lhs;
        lhs.add(h.antipode_target(*t), h.antipode(*t) * alg.product(a, b));
        detail::BlockSum rhs;
        Elem sb = h.antipode_target(b);
        Elem sa = h.antipode_target(a);
        if (auto r = alg.product_target(sb, sa)) {
          Matrix swap = permute_legs({h.dim(a), h.dim(b)}, {1, 0});
          rhs.add(*r, alg.product(sb, sa) * kron(h.antipode(b), h.antipode(a)) * swap);
        }
        anti.expect(lhs == rhs, where);
      }
    }
    try {
      Elem t = h.antipode_target(a);
      const Matrix& inv = h.antipode_inverse(t);
      bij.expect(h.antipode_source(t) == a && inv * h.antipode(a) == h.ident(a), "component " + g.name(a));
    } catch (const StructureError& e) {
      bij.fail(e.what());
    }
  }
  Report rep;
  left.into(rep);
  right.into(rep);
  anti.into(rep);
  bij.into(rep);
  return rep;
}

inline Report check_star(const MhaStructure& h, const Window& w) {
  if (!h.has_star()) throw StructureError("structure has no involution");
  const Group& g = h.group();
  const GradedAlgebra& alg = h.algebra();
  Tally hom("coproduct star-homomorphism", "Delta(x*) = Delta(x)*");
  Tally eps("counit star", "eps(x*) = conj(eps(x))");
  Tally rel("antipode star relation", "S(S(x)*)* = x");
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      auto s = h.source(p, q);
      if (!s) continue;
      const StarBlock& sp = alg.star(p);
      const StarBlock& sq = alg.star(q);
      const StarBlock& ss = alg.star(*s);
      bool typed = h.source(sp.target, sq.target) == ss.target;
      bool ok = true;
      for (std::size_t k = 0; k < h.dim(*s) && ok; ++k) {
        for (const Scalar& c : {Scalar(1), Scalar::i()}) {
          Vec x = Vec::unit(h.dim(*s), k, c);
          Vec rhs = star_tensor(sp.star, sq.star, h.delta(p, q) * x, h.dim(q));
          Vec lhs = typed ? h.delta(sp.target, sq.target) * ss.star.apply(x) : Vec(rhs.size());
          ok = ok && lhs == rhs;
        }
      }
      hom.expect(ok, detail::pair_name(g, p, q));
    }
    const StarBlock& sp = alg.star(p);
    bool eok = true;
    bool rok = true;
    for (std::size_t k = 0; k < h.dim(p); ++k) {
      Vec x = Vec::unit(h.dim(p), k, Scalar(1, 1));
      eok = eok && h.counit(sp.target).dot(sp.star.apply(x)) == h.counit(p).dot(x).conj();
      Elem t = h.antipode_target(p);
      const StarBlock& st = alg.star(t);
      Elem u = h.antipode_target(st.target);
      const StarBlock& su = alg.star(u);
      Vec back = su.star.apply(h.antipode(st.target) * st.star.apply(h.antipode(p) * x));
      rok = rok && su.target == p && back == x;
    }
    eps.expect(eok, "component " + g.name(p));
    rel.expect(rok, "component " + g.name(p));
  }
  Report rep;
  hom.into(rep);
  eps.into(rep);
  rel.into(rep);
  return rep;
}

// Algebra invariants plus every multiplier Hopf axiom on the window.
inline Report hopf_suite(const MhaStructure& h, const Window& w) {
  Report rep;
  rep.append(check_graded_algebra(h.algebra(), w), "algebra");
  rep.append(check_t1_t2(h, w), "hopf");
  rep.append(check_coassociativity(h, w), "hopf");
  rep.append(check_counit(h, w), "hopf");
  rep.append(check_antipode(h, w), "hopf");
  if (h.has_star()) rep.append(check_star(h, w), "star");
  return rep;
}

// Linear functional given by a row per component; absent components are
// outside the window it was computed on.
struct GradedFunctional {
  std::map<Elem, Vec> rows;

  bool defined(Elem p) const { return rows.count(p) != 0; }
  const Vec& row(Elem p) const {
    auto it = rows.find(p);
    if (it == rows.end()) throw StructureError("functional undefined on this component");
    return it->second;
  }
  Scalar operator()(Elem p, const Vec& x) const { return row(p).dot(x); }
  bool is_zero() const {
    for (const auto& [p, r] : rows) {
      if (!r.is_zero()) return false;
    }
    return true;
  }
  friend bool operator==(const GradedFunctional& a, const GradedFunctional& b) { return a.rows == b.rows; }
};

namespace detail {

class Layout {
 public:
  Layout(const MhaStructure& h, const Window& w) {
    for (Elem p : w.elements()) {
      offset_[p] = total_;
      total_ += h.dim(p);
      dims_[p] = h.dim(p);
    }
  }
  std::size_t total() const { return total_; }
  bool has(Elem p) const { return offset_.count(p) != 0; }
  std::size_t at(Elem p, std::size_t k) const { return offset_.at(p) + k; }
  Vec flatten(const GradedFunctional& f) const {
    std::vector<Vec::Entry> es;
    for (const auto& [p, off] : offset_) {
      for (const auto& [k, v] : f.row(p).entries()) es.emplace_back(off + k, v);
    }
    return Vec::from_entries(total_, std::move(es));
  }
  GradedFunctional unflatten(const Vec& x) const {
    GradedFunctional f;
    for (const auto& [p, off] : offset_) {
      std::vector<Vec::Entry> es;
      for (const auto& [k, v] : x.entries()) {
        if (k >= off && k < off + dims_.at(p)) es.emplace_back(k - off, v);
      }
      f.rows[p] = Vec::from_entries(dims_.at(p), std::move(es));
    }
    return f;
  }
  const std::map<Elem, std::size_t>& offsets() const { return offset_; }

 private:
  std::map<Elem, std::size_t> offset_;
  std::map<Elem, std::size_t> dims_;
  std::size_t total_ = 0;
};

// Equations of left invariance (id (x) f)(Delta(a)(b (x) 1)) = f(a)b or of
// right invariance (f (x) id)(Delta(a)(1 (x) b)) = f(a)b, one row per output
// coordinate, with unknowns laid out by `lay`. Pairs touching components
// outside the window are skipped.
template <class Sink>
void invariance_rows(const MhaStructure& h, const Window& w, const Layout& lay, bool left, Sink&& sink) {
  for (Elem s : w.elements()) {
    for (Elem p : w.elements()) {
      const auto& c = left ? h.cut3(s, p) : h.cut1(s, p);
      if (!c) continue;
      Elem contracted = left ? c->right : c->left;
      Elem kept = left ? c->left : c->right;
      if (!lay.has(contracted)) continue;
      std::size_t dk = h.dim(kept);
      std::size_t dr = h.dim(c->right);
      std::size_t dp = h.dim(p);
      for (std::size_t i = 0; i < h.dim(s); ++i) {
        for (std::size_t j = 0; j < dp; ++j) {
          std::map<std::pair<Elem, std::size_t>, std::vector<Vec::Entry>> rows;
          for (const auto& [idx, v] : c->map.col(i * dp + j).entries()) {
            std::size_t a = idx / dr;
            std::size_t b = idx % dr;
            std::size_t keep_k = left ? a : b;
            std::size_t contr_k = left ? b : a;
            rows[{kept, keep_k}].emplace_back(lay.at(contracted, contr_k), v);
          }
          rows[{p, j}].emplace_back(lay.at(s, i), Scalar(-1));
          (void)dk;
          for (auto& [key, es] : rows) sink(Vec::from_entries(lay.total(), std::move(es)));
        }
      }
    }
  }
}

inline Vec normalize_first(const Vec& v) {
  if (v.is_zero()) return v;
  return v.scaled(v.entries().front().second.inverse());
}

}  // namespace detail

struct IntegralSpace {
  std::size_t dimension = 0;
  std::vector<GradedFunctional> basis;  // first basis vector normalized to lead coefficient 1
  Window window;
};

inline IntegralSpace solve_integral(const MhaStructure& h, const Window& w, bool left) {
  detail::Layout lay(h, w);
  RowEchelon e(lay.total());
  detail::invariance_rows(h, w, lay, left, [&](Vec row) { e.add(std::move(row)); });
  IntegralSpace out;
  out.window = w;
  // Present the kernel in reduced echelon form with leading coefficients 1.
  RowEchelon k(lay.total());
  for (auto& v : e.kernel(lay.total())) k.add(std::move(v));
  k.finish();
  for (const auto& [c, v] : k.pivots()) out.basis.push_back(lay.unflatten(detail::normalize_first(v)));
  out.dimension = out.basis.size();
  return out;
}

inline IntegralSpace solve_left_integral(const MhaStructure& h, const Window& w) { return solve_integral(h, w, true); }
inline IntegralSpace solve_right_integral(const MhaStructure& h, const Window& w) {
  return solve_integral(h, w, false);
}

inline Report invariance_report(const MhaStructure& h, const GradedFunctional& f, const Window& w, bool left) {
  detail::Layout lay(h, w);
  Vec fx = lay.flatten(f);
  Tally t(left ? "left invariance" : "right invariance",
          left ? "(id (x) phi)Delta(a) = phi(a)1" : "(psi (x) id)Delta(a) = psi(a)1");
  std::size_t n = 0;
  detail::invariance_rows(h, w, lay, left, [&](const Vec& row) {
    ++n;
    Scalar r = row.dot(fx);
    t.expect(r.is_zero(), "equation " + std::to_string(n) + " has residual " + r.str());
  });
  Report rep;
  t.into(rep);
  return rep;
}

inline Report is_left_invariant(const MhaStructure& h, const GradedFunctional& f, const Window& w) {
  return invariance_report(h, f, w, true);
}
inline Report is_right_invariant(const MhaStructure& h, const GradedFunctional& f, const Window& w) {
  return invariance_report(h, f, w, false);
}

struct ModularElement {
  std::map<Elem, Vec> parts;  // per window component
  bool determined = true;
  Report report;

  GradedMultiplier multiplier() const {
    auto copy = parts;
    return {[copy](Elem p) {
      auto it = copy.find(p);
      if (it == copy.end()) throw StructureError("modular element undefined outside its window");
      return it->second;
    }};
  }
};

// Solves (phi (x) id)(Delta(a)(1 (x) b)) = phi(a) delta b for delta.
inline ModularElement modular_element(const MhaStructure& h, const GradedFunctional& phi, const Window& w) {
  detail::Layout lay(h, w);
  const GradedAlgebra& alg = h.algebra();
  std::size_t n = lay.total();
  RowEchelon e(n + 1);
  for (Elem s : w.elements()) {
    for (Elem q : w.elements()) {
      const auto& c = h.cut1(s, q);
      if (!c || !phi.defined(c->left) || !phi.defined(s)) continue;
      std::size_t dq = h.dim(q);
      std::size_t dr = h.dim(c->right);
      for (std::size_t i = 0; i < h.dim(s); ++i) {
        Scalar fa = phi.row(s).at(i);
        for (std::size_t j = 0; j < dq; ++j) {
          std::map<std::pair<Elem, std::size_t>, std::vector<Vec::Entry>> rows;
          for (const auto& [idx, v] : c->map.col(i * dq + j).entries()) {
            Scalar coef = phi.row(c->left).at(idx / dr);
            if (!coef.is_zero()) rows[{c->right, idx % dr}].emplace_back(n, coef * v);
          }
          if (!fa.is_zero()) {
            for (Elem r : w.elements()) {
              auto t = alg.product_target(r, q);
              if (!t) continue;
              const Matrix& m = alg.product(r, q);
              for (std::size_t l = 0; l < h.dim(r); ++l) {
                for (const auto& [k, v] : m.col(l * dq + j).entries()) {
                  rows[{*t, k}].emplace_back(lay.at(r, l), fa * v);
                }
              }
            }
          }
          for (auto& [key, es] : rows) e.add(Vec::from_entries(n + 1, std::move(es)));
        }
      }
    }
  }
  e.finish();
  for (const auto& [c, r] : e.pivots()) {
    if (c >= n) throw InconsistentSystem("functional is not a left integral on this window");
  }
  ModularElement out;
  std::vector<Vec::Entry> sol;
  for (const auto& [c, r] : e.pivots()) sol.emplace_back(c, r.at(n));
  GradedFunctional packed = lay.unflatten(Vec::from_entries(n, std::move(sol)));
  out.parts = packed.rows;
  out.determined = e.kernel(n).empty();
  Tally det("modular element determined", "(phi (x) id)Delta(a) = phi(a) delta has a unique solution");
  det.expect(out.determined, "solution space has positive dimension");
  det.into(out.report);
  Tally inv("modular element invertible", "delta is invertible");
  if (h.mode() == Mode::Cograded) {
    for (Elem p : w.elements()) {
      const auto& u = alg.unit(p);
      if (!u) {
        inv.fail("component " + h.group().name(p) + " has no unit");
        continue;
      }
      Matrix left_mult = alg.product(p, p) * kron(Matrix::column(out.parts.at(p)), h.ident(p));
      inv.expect(is_bijective(left_mult), "component " + h.group().name(p));
    }
  } else {
    // Left multiplication by delta on the window-flattened algebra.
    std::vector<Vec> cols;
    for (Elem q : w.elements()) {
      for (std::size_t j = 0; j < h.dim(q); ++j) {
        std::vector<Vec::Entry> es;
        for (Elem r : w.elements()) {
          auto t = alg.product_target(r, q);
          if (!t || !lay.has(*t)) continue;
          Vec y = alg.product(r, q) * out.parts.at(r).kron(Vec::unit(h.dim(q), j));
          for (const auto& [k, v] : y.entries()) es.emplace_back(lay.at(*t, k), v);
        }
        cols.push_back(Vec::from_entries(n, std::move(es)));
      }
    }
    inv.expect(is_bijective(Matrix::from_columns(n, std::move(cols))), "left multiplication by delta");
  }
  inv.into(out.report);
  return out;
}

namespace detail {

// Basis (component, index) of the window and the matrix [phi(x_u y_v)], with
// x_u = e_u or e_u* as requested.
inline Matrix window_gram(const MhaStructure& h, const GradedFunctional& phi, const Window& w, bool starred) {
  const GradedAlgebra& alg = h.algebra();
  std::vector<std::pair<Elem, std::size_t>> basis;
  for (Elem p : w.elements()) {
    for (std::size_t k = 0; k < h.dim(p); ++k) basis.emplace_back(p, k);
  }
  std::size_t n = basis.size();
  std::vector<Matrix::Triplet> t;
  for (std::size_t u = 0; u < n; ++u) {
    auto [p, i] = basis[u];
    Elem xp = p;
    Vec x = Vec::unit(h.dim(p), i);
    if (starred) {
      const StarBlock& sb = alg.star(p);
      xp = sb.target;
      x = sb.star.apply(x);
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto [q, j] = basis[v];
      auto target = alg.product_target(xp, q);
      if (!target || !phi.defined(*target)) continue;
      Scalar val = phi(*target, alg.product(xp, q) * x.kron(Vec::unit(h.dim(q), j)));
      if (!val.is_zero()) t.emplace_back(u, v, val);
    }
  }
  return Matrix::from_triplets(n, n, std::move(t));
}

}  // namespace detail

struct ModularAutomorphism {
  Matrix sigma;  // on the window-flattened basis
  Report report;
};

// sigma with phi(ab) = phi(b sigma(a)).
inline ModularAutomorphism modular_automorphism(const MhaStructure& h, const GradedFunctional& phi,
                                                const Window& w) {
  Matrix f = detail::window_gram(h, phi, w, false);
  auto finv = inverse(f);
  if (!finv) throw NotFaithful("the functional is not faithful on this window");
  ModularAutomorphism out{*finv * f.transpose(), {}};
  const GradedAlgebra& alg = h.algebra();
  detail::Layout lay(h, w);
  Tally hom("modular automorphism multiplicative", "sigma(ab) = sigma(a)sigma(b)");
  auto apply = [&](Elem p, const Vec& x) {
    std::vector<Vec::Entry> es;
    for (const auto& [k, v] : x.entries()) es.emplace_back(lay.at(p, k), v);
    return out.sigma * Vec::from_entries(lay.total(), std::move(es));
  };
  auto times = [&](const Vec& x, const Vec& y) {
    std::vector<Vec::Entry> es;
    for (const auto& [pa, oa] : lay.offsets()) {
      for (const auto& [pb, ob] : lay.offsets()) {
        auto t = alg.product_target(pa, pb);
        if (!t || !lay.has(*t)) continue;
        std::vector<Vec::Entry> xa;
        std::vector<Vec::Entry> yb;
        for (const auto& [k, v] : x.entries()) {
          if (k >= oa && k < oa + h.dim(pa)) xa.emplace_back(k - oa, v);
        }
        for (const auto& [k, v] : y.entries()) {
          if (k >= ob && k < ob + h.dim(pb)) yb.emplace_back(k - ob, v);
        }
        if (xa.empty() || yb.empty()) continue;
        Vec z = alg.product(pa, pb) * Vec::from_entries(h.dim(pa), xa).kron(Vec::from_entries(h.dim(pb), yb));
        for (const auto& [k, v] : z.entries()) es.emplace_back(lay.at(*t, k), v);
      }
    }
    return Vec::from_entries(lay.total(), std::move(es));
  };
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      auto t = alg.product_target(p, q);
      if (!t || !lay.has(*t)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < h.dim(p) && ok; ++i) {
        for (std::size_t j = 0; j < h.dim(q) && ok; ++j) {
          Vec x = Vec::unit(h.dim(p), i);
          Vec y = Vec::unit(h.dim(q), j);
          Vec lhs = apply(*t, alg.product(p, q) * x.kron(y));
          ok = lhs == times(apply(p, x), apply(q, y));
        }
      }
      hom.expect(ok, detail::pair_name(h.group(), p, q));
    }
  }
  hom.into(out.report);
  return out;
}

inline Report check_faithful(const MhaStructure& h, const GradedFunctional& phi, const Window& w) {
  Matrix f = detail::window_gram(h, phi, w, false);
  Report rep;
  rep.add("faithful", "a -> phi(a .) and a -> phi(. a) are injective", kernel(f).empty() && kernel(f.transpose()).empty(),
          "Gram matrix of size " + std::to_string(f.rows()) + " is singular");
  return rep;
}

inline Report check_positive_integral(const MhaStructure& h, const GradedFunctional& phi, const Window& w) {
  Matrix g = detail::window_gram(h, phi, w, true);
  Report rep;
  try {
    rep.add("positive", "phi(x* x) >= 0", hermitian_psd(g), "Gram matrix is not positive semidefinite");
  } catch (const NotHermitian&) {
    rep.add("positive", "phi(x* x) >= 0", false, "Gram matrix is not Hermitian");
  }
  return rep;
}

// Positivity of some nonzero scalar multiple of phi.
inline Report check_positive_up_to_scalar(const MhaStructure& h, const GradedFunctional& phi, const Window& w) {
  Matrix g = detail::window_gram(h, phi, w, true);
  Scalar scale;
  for (std::size_t k = 0; k < g.rows() && scale.is_zero(); ++k) scale = g.at(k, k);
  Report rep;
  if (scale.is_zero()) {
    rep.add("positive up to scalar", "c phi(x* x) >= 0 for some c != 0", g.is_zero(), "zero diagonal, nonzero Gram");
    return rep;
  }
  try {
    rep.add("positive up to scalar", "c phi(x* x) >= 0 for some c != 0", hermitian_psd(g.scaled(scale.inverse())),
            "rescaled Gram matrix is not positive semidefinite");
  } catch (const NotHermitian&) {
    rep.add("positive up to scalar", "c phi(x* x) >= 0 for some c != 0", false, "Gram matrix is not Hermitian up to phase");
  }
  return rep;
}

struct IntegralAnalysis {
  IntegralSpace left;
  IntegralSpace right;
  std::optional<ModularElement> modular;
  std::optional<ModularAutomorphism> sigma;
  Report report;
};

inline IntegralAnalysis analyze_integrals(const MhaStructure& h, const Window& w) {
  IntegralAnalysis out;
  out.left = solve_left_integral(h, w);
  out.right = solve_right_integral(h, w);
  Report& rep = out.report;
  rep.add("left integral dimension", "left integrals form a one-dimensional space", out.left.dimension == 1,
          "dimension " + std::to_string(out.left.dimension));
  rep.add("right integral dimension", "right integrals form a one-dimensional space", out.right.dimension == 1,
          "dimension " + std::to_string(out.right.dimension));
  if (out.left.dimension != 1 || out.right.dimension != 1) return out;
  const GradedFunctional& phi = out.left.basis.front();
  const GradedFunctional& psi = out.right.basis.front();
  rep.append(check_faithful(h, phi, w), "left");
  rep.append(check_faithful(h, psi, w), "right");
  try {
    out.modular = modular_element(h, phi, w);
    rep.append(out.modular->report);
  } catch (const InconsistentSystem& e) {
    rep.add("modular element determined", "(phi (x) id)Delta(a) = phi(a) delta has a unique solution", false, e.what());
  }
  try {
    out.sigma = modular_automorphism(h, phi, w);
    rep.append(out.sigma->report);
  } catch (const NotFaithful& e) {
    rep.add("modular automorphism multiplicative", "sigma(ab) = sigma(a)sigma(b)", false, e.what());
  }
  if (h.has_star()) {
    rep.append(check_positive_up_to_scalar(h, phi, w), "left");
    rep.append(check_positive_up_to_scalar(h, psi, w), "right");
  }
  return out;
}

// Function algebra K(G): one-dimensional components spanned by delta_p.
inline MhaStructure make_kg(const Group& g) {
  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = Mode::Cograded;
  a.dim = [](Elem) { return std::size_t{1}; };
  a.product = [](Elem, Elem) { return Matrix::identity(1); };
  a.unit = [](Elem) { return std::optional<Vec>(Vec::unit(1, 0)); };
  a.star = [](Elem p) { return StarBlock{p, Star{Matrix::identity(1), true}}; };
  MhaStructure::Definition d;
  d.name = "K(" + g.label() + ")";
  d.algebra = GradedAlgebra(std::move(a));
  d.typing = CoproductTyping::standard(g);
  d.delta = [](Elem, Elem) { return Matrix::identity(1); };
  d.counit = [g](Elem p) { return p == g.identity() ? Vec::unit(1, 0) : Vec(1); };
  d.antipode_target = [g](Elem p) { return g.inv(p); };
  d.antipode_source = [g](Elem t) { return g.inv(t); };
  d.antipode = [](Elem) { return Matrix::identity(1); };
  return MhaStructure(std::move(d));
}

// Group algebra C[G] graded by u_p in degree p.
inline MhaStructure make_group_algebra(const Group& g) {
  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = Mode::Graded;
  a.dim = [](Elem) { return std::size_t{1}; };
  a.product = [](Elem, Elem) { return Matrix::identity(1); };
  a.unit = [g](Elem p) { return p == g.identity() ? std::optional<Vec>(Vec::unit(1, 0)) : std::nullopt; };
  a.star = [g](Elem p) { return StarBlock{g.inv(p), Star{Matrix::identity(1), true}}; };
  MhaStructure::Definition d;
  d.name = "C[" + g.label() + "]";
  d.algebra = GradedAlgebra(std::move(a));
  d.typing = CoproductTyping::diagonal(g);
  d.delta = [](Elem, Elem) { return Matrix::identity(1); };
  d.counit = [](Elem) { return Vec::unit(1, 0); };
  d.antipode_target = [g](Elem p) { return g.inv(p); };
  d.antipode_source = [g](Elem t) { return g.inv(t); };
  d.antipode = [](Elem) { return Matrix::identity(1); };
  return MhaStructure(std::move(d));
}

// All components of a structure over a finite group, laid out in element order.
struct FlatHopf {
  std::string name;
  Group group;
  std::size_t n = 0;
  std::vector<Elem> grade;
  std::vector<std::size_t> local;
  std::map<Elem, std::size_t> offset;
  Matrix mul;    // n x n^2
  Matrix delta;  // n^2 x n
  Vec counit;
  Vec unit;
  Matrix antipode;
  Matrix antipode_inv;
  std::optional<Star> star;

  std::vector<std::size_t> indices(Elem p) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k) {
      if (grade[k] == p) out.push_back(k);
    }
    return out;
  }
};

inline FlatHopf flatten(const MhaStructure& h) {
  const Group& g = h.group();
  if (!g.finite()) throw StructureError("flattening needs a finite group");
  const GradedAlgebra& alg = h.algebra();
  FlatHopf f;
  f.name = h.name();
  f.group = g;
  for (Elem p : g.elements()) {
    f.offset[p] = f.n;
    for (std::size_t k = 0; k < h.dim(p); ++k) {
      f.grade.push_back(p);
      f.local.push_back(k);
    }
    f.n += h.dim(p);
  }
  std::size_t n = f.n;
  std::vector<Matrix::Triplet> mt;
  std::vector<Matrix::Triplet> dt;
  std::vector<Matrix::Triplet> st;
  std::vector<Matrix::Triplet> xt;
  std::vector<Vec::Entry> ce;
  std::vector<Vec::Entry> ue;
  bool antilinear = true;
  for (Elem p : g.elements()) {
    std::size_t op = f.offset[p];
    std::size_t dp = h.dim(p);
    for (Elem q : g.elements()) {
      std::size_t oq = f.offset[q];
      std::size_t dq = h.dim(q);
      if (auto t = alg.product_target(p, q)) {
        const Matrix& m = alg.product(p, q);
        for (const auto& [r, c, v] : m.triplets()) {
          mt.emplace_back(f.offset[*t] + r, (op + c / dq) * n + oq + c % dq, v);
        }
      }
      if (auto s = h.source(p, q)) {
        for (const auto& [r, c, v] : h.delta(p, q).triplets()) {
          dt.emplace_back((op + r / dq) * n + oq + r % dq, f.offset[*s] + c, v);
        }
      }
    }
    for (const auto& [k, v] : h.counit(p).entries()) ce.emplace_back(op + k, v);
    if (const auto& u = alg.unit(p)) {
      for (const auto& [k, v] : u->entries()) ue.emplace_back(op + k, v);
    }
    Elem t = h.antipode_target(p);
    for (const auto& [r, c, v] : h.antipode(p).triplets()) st.emplace_back(f.offset[t] + r, op + c, v);
    if (h.has_star()) {
      const StarBlock& sb = alg.star(p);
      antilinear = sb.star.antilinear;
      for (const auto& [r, c, v] : sb.star.matrix.triplets()) xt.emplace_back(f.offset[sb.target] + r, op + c, v);
    }
    (void)dp;
  }
  f.mul = Matrix::from_triplets(n, n * n, std::move(mt));
  f.delta = Matrix::from_triplets(n * n, n, std::move(dt));
  f.counit = Vec::from_entries(n, std::move(ce));
  f.unit = Vec::from_entries(n, std::move(ue));
  f.antipode = Matrix::from_triplets(n, n, std::move(st));
  auto inv = inverse(f.antipode);
  if (!inv) throw StructureError("antipode is not invertible");
  f.antipode_inv = *inv;
  if (h.has_star()) f.star = Star{Matrix::from_triplets(n, n, std::move(xt)), antilinear};
  return f;
}

// A finite-dimensional Hopf algebra as a single component over the trivial group.
inline MhaStructure from_flat(const FlatHopf& f) {
  Group g = Group::trivial();
  auto data = std::make_shared<const FlatHopf>(f);
  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = Mode::Cograded;
  a.dim = [data](Elem) { return data->n; };
  a.product = [data](Elem, Elem) { return data->mul; };
  a.unit = [data](Elem) { return std::optional<Vec>(data->unit); };
  if (f.star) a.star = [data](Elem p) { return StarBlock{p, *data->star}; };
  MhaStructure::Definition d;
  d.name = f.name;
  d.algebra = GradedAlgebra(std::move(a));
  d.typing = CoproductTyping::standard(g);
  d.delta = [data](Elem, Elem) { return data->delta; };
  d.counit = [data](Elem) { return data->counit; };
  d.antipode_target = [](Elem p) { return p; };
  d.antipode_source = [](Elem t) { return t; };
  d.antipode = [data](Elem) { return data->antipode; };
  return MhaStructure(std::move(d));
}

// Constant family B_p = h over g, with h a single-component structure.
inline MhaStructure make_constant_family(const MhaStructure& h, const Group& g) {
  if (!h.group().finite() || h.group().order() != 1) {
    throw StructureError("constant families need a single-component Hopf algebra");
  }
  Elem one = h.group().identity();
  std::size_t d = h.dim(one);
  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = Mode::Cograded;
  a.dim = [d](Elem) { return d; };
  a.product = [h, one](Elem, Elem) { return h.algebra().product(one, one); };
  a.unit = [h, one](Elem) { return h.algebra().unit(one); };
  if (h.has_star()) a.star = [h, one](Elem p) { return StarBlock{p, h.algebra().star(one).star}; };
  MhaStructure::Definition def;
  def.name = "const(" + h.name() + ", " + g.label() + ")";
  def.algebra = GradedAlgebra(std::move(a));
  def.typing = CoproductTyping::standard(g);
  def.delta = [h, one](Elem, Elem) { return h.delta(one, one); };
  def.counit = [h, one, g, d](Elem p) { return p == g.identity() ? h.counit(one) : Vec(d); };
  def.antipode_target = [g](Elem p) { return g.inv(p); };
  def.antipode_source = [g](Elem t) { return g.inv(t); };
  def.antipode = [h, one](Elem) { return h.antipode(one); };
  return MhaStructure(std::move(def));
}

}  // namespace mhd
