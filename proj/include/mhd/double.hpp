#pragma once

// Pairings, module actions, twist maps and the twisted double A^cop >< B~ of
// a pairing with an admissible action, for finite groups.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhd/cograded.hpp"
#include "mhd/hopf.hpp"

namespace mhd {

// Bilinear pairing <a, b> = a^T F_p b between A_p and B_p.
struct Pairing {
  std::string name;
  MhaStructure a;  // graded mode
  MhaStructure b;  // cograded mode
  std::function<Matrix(Elem)> form;
};

namespace detail {

inline void require_pairing_shape(const Pairing& p) {
  if (p.a.mode() != Mode::Graded || p.b.mode() != Mode::Cograded) {
    throw StructureError("pairing needs a graded A and a cograded B");
  }
  if (!p.a.group().same(p.b.group())) throw StructureError("paired structures live over different groups");
  if (!p.a.group().finite()) throw StructureError("pairings are handled for finite groups only");
}

inline Matrix flat_form(const Pairing& p, const FlatHopf& fa, const FlatHopf& fb) {
  std::vector<Matrix::Triplet> t;
  for (Elem g : fa.group.elements()) {
    Matrix f = p.form(g);
    if (f.rows() != p.a.dim(g) || f.cols() != p.b.dim(g)) throw DimensionMismatch("pairing form has wrong shape");
    for (const auto& [i, j, v] : f.triplets()) t.emplace_back(fa.offset.at(g) + i, fb.offset.at(g) + j, v);
  }
  return Matrix::from_triplets(fa.n, fb.n, std::move(t));
}

// Flat matrix of an action given blockwise, B_q -> B_rho_p(q).
inline Matrix flat_action(const Action& act, const FlatHopf& fb, Elem p) {
  std::vector<Matrix::Triplet> t;
  for (Elem q : fb.group.elements()) {
    Elem r = act.rho()(p, q);
    for (const auto& [i, j, v] : act.pi(p, q).triplets()) t.emplace_back(fb.offset.at(r) + i, fb.offset.at(q) + j, v);
  }
  return Matrix::from_triplets(fb.n, fb.n, std::move(t));
}

inline Vec bilinear(const Matrix& table, const Vec& x, const Vec& y) { return table * x.kron(y); }

}  // namespace detail

struct ModuleActionTables {
  Matrix a_on_b;   // a |> b = sum <a, b(2)> b(1), A (x) B -> B
  Matrix b_right_a;  // b <| a = sum <a, b(1)> b(2), B (x) A -> B
  Matrix b_on_a;   // b |> a = sum <a(2), b> a(1), B (x) A -> A
  Matrix a_right_b;  // a <| b = sum <a(1), b> a(2), A (x) B -> A
  Report report;
};

inline ModuleActionTables module_tables(const FlatHopf& fa, const FlatHopf& fb, const Matrix& f) {
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  Matrix ft = f.transpose();
  std::vector<Matrix::Triplet> t1;
  std::vector<Matrix::Triplet> t2;
  std::vector<Matrix::Triplet> t3;
  std::vector<Matrix::Triplet> t4;
  for (std::size_t j = 0; j < nb; ++j) {
    for (const auto& [kl, c] : fb.delta.col(j).entries()) {
      std::size_t k = kl / nb;
      std::size_t l = kl % nb;
      for (const auto& [i, v] : f.col(l).entries()) t1.emplace_back(k, i * nb + j, c * v);
      for (const auto& [i, v] : f.col(k).entries()) t2.emplace_back(l, j * na + i, c * v);
    }
  }
  for (std::size_t i = 0; i < na; ++i) {
    for (const auto& [kl, c] : fa.delta.col(i).entries()) {
      std::size_t k = kl / na;
      std::size_t l = kl % na;
      for (const auto& [j, v] : ft.col(l).entries()) t3.emplace_back(k, j * na + i, c * v);
      for (const auto& [j, v] : ft.col(k).entries()) t4.emplace_back(l, i * nb + j, c * v);
    }
  }
  ModuleActionTables m;
  m.a_on_b = Matrix::from_triplets(nb, na * nb, std::move(t1));
  m.b_right_a = Matrix::from_triplets(nb, nb * na, std::move(t2));
  m.b_on_a = Matrix::from_triplets(na, nb * na, std::move(t3));
  m.a_right_b = Matrix::from_triplets(na, na * nb, std::move(t4));
  return m;
}

inline ModuleActionTables build_module_actions(const Pairing& p) {
  detail::require_pairing_shape(p);
  FlatHopf fa = flatten(p.a);
  FlatHopf fb = flatten(p.b);
  Matrix f = detail::flat_form(p, fa, fb);
  ModuleActionTables m = module_tables(fa, fb, f);
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  Matrix ia = Matrix::identity(na);
  Matrix ib = Matrix::identity(nb);
  Report& rep = m.report;
  auto law = [&](const std::string& name, const std::string& prop, const Matrix& lhs, const Matrix& rhs) {
    rep.add(name, prop, lhs == rhs, "matrices differ");
  };
  law("module A on B", "(aa') |> b = a |> (a' |> b)", m.a_on_b * kron(fa.mul, ib), m.a_on_b * kron(ia, m.a_on_b));
  law("module B right A", "b <| (aa') = (b <| a) <| a'", m.b_right_a * kron(ib, fa.mul),
      m.b_right_a * kron(m.b_right_a, ia));
  law("module B on A", "(bb') |> a = b |> (b' |> a)", m.b_on_a * kron(fb.mul, ia), m.b_on_a * kron(ib, m.b_on_a));
  law("module A right B", "a <| (bb') = (a <| b) <| b'", m.a_right_b * kron(ia, fb.mul),
      m.a_right_b * kron(m.a_right_b, ib));
  law("bimodule B", "(a |> b) <| a' = a |> (b <| a')", m.b_right_a * kron(m.a_on_b, ia),
      m.a_on_b * kron(ia, m.b_right_a));
  law("bimodule A", "(b |> a) <| b' = b |> (a <| b')", m.a_right_b * kron(m.b_on_a, ib),
      m.b_on_a * kron(ib, m.a_right_b));
  Matrix p_bbaa = permute_legs({nb, nb, na, na}, {0, 2, 1, 3});
  Matrix p_aabb = permute_legs({na, na, nb, nb}, {0, 2, 1, 3});
  law("module algebra B on A", "b |> (aa') = (b(1) |> a)(b(2) |> a')", m.b_on_a * kron(ib, fa.mul),
      fa.mul * kron(m.b_on_a, m.b_on_a) * p_bbaa * kron(fb.delta, kron(ia, ia)));
  law("module algebra A right B", "(aa') <| b = (a <| b(1))(a' <| b(2))", m.a_right_b * kron(fa.mul, ib),
      fa.mul * kron(m.a_right_b, m.a_right_b) * p_aabb * kron(kron(ia, ia), fb.delta));
  law("module algebra A on B", "a |> (bb') = (a(1) |> b)(a(2) |> b')", m.a_on_b * kron(ia, fb.mul),
      fb.mul * kron(m.a_on_b, m.a_on_b) * p_aabb * kron(fa.delta, kron(ib, ib)));
  law("module algebra B right A", "(bb') <| a = (b <| a(1))(b' <| a(2))", m.b_right_a * kron(fb.mul, ia),
      fb.mul * kron(m.b_right_a, m.b_right_a) * p_bbaa * kron(kron(ib, ib), fa.delta));
  bool unital = m.a_on_b * kron(Matrix::column(fa.unit), ib) == ib &&
                m.b_right_a * kron(ib, Matrix::column(fa.unit)) == ib &&
                m.b_on_a * kron(Matrix::column(fb.unit), ia) == ia &&
                m.a_right_b * kron(ia, Matrix::column(fb.unit)) == ia;
  rep.add("unital actions", "1 |> x = x <| 1 = x", unital, "a unit acts nontrivially");
  return m;
}

inline Report check_pairing(const Pairing& p) {
  detail::require_pairing_shape(p);
  FlatHopf fa = flatten(p.a);
  FlatHopf fb = flatten(p.b);
  Matrix f = detail::flat_form(p, fa, fb);
  const Group& g = fa.group;
  Report rep;
  Tally nd("nondegenerate", "each form F_p is invertible");
  for (Elem x : g.elements()) nd.expect(is_bijective(p.form(x)), "component " + g.name(x));
  nd.into(rep);
  rep.add("product duality", "<a, bb'> = <Delta(a), b (x) b'>", f * fb.mul == fa.delta.transpose() * kron(f, f),
          "matrices differ");
  rep.add("coproduct duality", "<aa', b> = <a (x) a', Delta(b)>", fa.mul.transpose() * f == kron(f, f) * fb.delta,
          "matrices differ");
  rep.add("antipode duality", "<S(a), b> = <a, S(b)>", fa.antipode.transpose() * f == f * fb.antipode,
          "matrices differ");
  rep.add("counit duality", "<a, 1> = eps(a) and <1, b> = eps(b)",
          f * fb.unit == fa.counit && f.transpose() * fa.unit == fb.counit, "vectors differ");
  if (fa.star && fb.star) {
    Tally st("star pairing", "<a*, b> = conj(<a, S(b)*>)");
    for (std::size_t i = 0; i < fa.n; ++i) {
      for (std::size_t j = 0; j < fb.n; ++j) {
        Vec ei = Vec::unit(fa.n, i);
        Vec ej = Vec::unit(fb.n, j);
        Scalar lhs = fa.star->apply(ei).dot(f * ej);
        Scalar rhs = ei.dot(f * fb.star->apply(fb.antipode * ej)).conj();
        st.expect(lhs == rhs, "basis pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
    st.into(rep);
  }
  // The grading of A is the one induced by the pairing: 1_p |> a is the
  // projection of a onto A_p.
  ModuleActionTables m = module_tables(fa, fb, f);
  Tally ind("induced grading", "1_p |> a = a for a in A_p and 0 on other components, via pairing " + p.name);
  for (Elem x : g.elements()) {
    Vec one(fb.n);
    if (const auto& u = p.b.algebra().unit(x)) {
      std::vector<Vec::Entry> es;
      for (const auto& [k, v] : u->entries()) es.emplace_back(fb.offset.at(x) + k, v);
      one = Vec::from_entries(fb.n, std::move(es));
    }
    Matrix proj = m.b_on_a * kron(Matrix::column(one), Matrix::identity(fa.n));
    std::vector<Matrix::Triplet> t;
    for (std::size_t k : fa.indices(x)) t.emplace_back(k, k, Scalar(1));
    ind.expect(proj == Matrix::from_triplets(fa.n, fa.n, std::move(t)), "component " + g.name(x));
  }
  ind.into(rep);
  Tally mixed("mixed grading annihilation", "b |> a = 0 for a in A_q, b in B_p, p != q");
  for (const auto& [r, c, v] : m.b_on_a.triplets()) {
    mixed.expect(fb.grade[c / fa.n] == fa.grade[c % fa.n], "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  mixed.into(rep);
  Tally cog("coproduct pairs diagonally", "<Delta(A_p), B_q (x) B_r> = 0 unless q = r = p");
  for (const auto& [r, c, v] : (kron(f, f).transpose() * fa.delta).triplets()) {
    Elem p0 = fa.grade[c];
    cog.expect(fb.grade[r / fb.n] == p0 && fb.grade[r % fb.n] == p0,
               "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  cog.into(rep);
  Tally mg("A grading multiplicative", "A_p A_q lies in A_pq");
  for (const auto& [r, c, v] : fa.mul.triplets()) {
    mg.expect(fa.grade[r] == g.mul(fa.grade[c / fa.n], fa.grade[c % fa.n]),
              "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  mg.into(rep);
  Tally sg("A antipode grading", "S(A_p) = A_p^-1");
  for (const auto& [r, c, v] : fa.antipode.triplets()) {
    sg.expect(fa.grade[r] == g.inv(fa.grade[c]), "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  sg.into(rep);
  return rep;
}

struct TwistMaps {
  Matrix r1;      // A (x) B -> A (x) B
  Matrix r2;
  Matrix r1_inv;
  Matrix r2_inv;
  Matrix r;       // B (x) A -> A (x) B, as R1 R2^-1 flip
  Matrix closed;  // R from its one-line formula
};

namespace detail {

struct DoubleData {
  Pairing pairing;
  Action action;
  FlatHopf a;
  FlatHopf b;
  FlatHopf bt;  // deformed B
  Matrix form;
  ModuleActionTables tables;
  std::vector<Matrix> pi;      // flat pi_p, indexed by element
  std::vector<Matrix> pi_dual;  // flat pi'_p on A with <pi'_p a, b> = <a, pi_p^-1 b>
  TwistMaps twist;
  Matrix r_inv;
  FlatHopf d;
  bool crossing = false;
};

inline TwistMaps twist_maps(const DoubleData& x) {
  const FlatHopf& fa = x.a;
  const FlatHopf& fb = x.b;
  const Group& g = fb.group;
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  const ModuleActionTables& m = x.tables;
  auto a_of = [&](std::size_t i) { return Vec::unit(na, i); };
  std::vector<Vec> c1;
  std::vector<Vec> c2;
  std::vector<Vec> c1i;
  std::vector<Vec> c2i;
  for (std::size_t i = 0; i < na; ++i) {
    Elem qa = fa.grade[i];
    for (std::size_t j = 0; j < nb; ++j) {
      Elem pb = fb.grade[j];
      const Matrix& pi1 = x.pi[g.mul(qa, g.inv(pb))];
      const Matrix& pi2 = x.pi[g.inv(pb)];
      Vec v1(na * nb);
      Vec v2(na * nb);
      Vec v1i(na * nb);
      Vec v2i(na * nb);
      for (const auto& [kl, c] : fb.delta.col(j).entries()) {
        std::size_t k = kl / nb;
        std::size_t l = kl % nb;
        Vec ek = Vec::unit(nb, k);
        Vec el = Vec::unit(nb, l);
        v1.axpy(c, detail::bilinear(m.b_on_a, pi1 * ek, a_of(i)).kron(el));
        v2.axpy(c, detail::bilinear(m.a_right_b, a_of(i), el).kron(ek));
        v1i.axpy(c, detail::bilinear(m.b_on_a, pi2 * (fb.antipode_inv * ek), a_of(i)).kron(el));
        v2i.axpy(c, detail::bilinear(m.a_right_b, a_of(i), fb.antipode_inv * el).kron(ek));
      }
      c1.push_back(std::move(v1));
      c2.push_back(std::move(v2));
      c1i.push_back(std::move(v1i));
      c2i.push_back(std::move(v2i));
    }
  }
  TwistMaps t;
  t.r1 = Matrix::from_columns(na * nb, std::move(c1));
  t.r2 = Matrix::from_columns(na * nb, std::move(c2));
  t.r1_inv = Matrix::from_columns(na * nb, std::move(c1i));
  t.r2_inv = Matrix::from_columns(na * nb, std::move(c2i));
  t.r = t.r1 * t.r2_inv * permute_legs({nb, na}, {1, 0});
  // R(b (x) a) = sum (pi_s^-1(b(1)) |> a <| S^-1(b(3))) (x) b(2) for b in B_s.
  Matrix delta2 = kron(fb.delta, Matrix::identity(nb)) * fb.delta;
  std::vector<Vec> cc;
  for (std::size_t j = 0; j < nb; ++j) {
    const Matrix& pis = x.pi[g.inv(fb.grade[j])];
    for (std::size_t i = 0; i < na; ++i) {
      Vec v(na * nb);
      for (const auto& [klm, c] : delta2.col(j).entries()) {
        std::size_t k = klm / (nb * nb);
        std::size_t l = (klm / nb) % nb;
        std::size_t mm = klm % nb;
        Vec left = detail::bilinear(m.b_on_a, pis * Vec::unit(nb, k), a_of(i));
        Vec both = detail::bilinear(m.a_right_b, left, fb.antipode_inv * Vec::unit(nb, mm));
        v.axpy(c, both.kron(Vec::unit(nb, l)));
      }
      cc.push_back(std::move(v));
    }
  }
  t.closed = Matrix::from_columns(na * nb, std::move(cc));
  return t;
}

// D (x) D product of two elements given as vectors of length n^2.
inline Vec mul_dd(const FlatHopf& d, const Vec& x, const Vec& y) {
  std::size_t n = d.n;
  std::vector<Vec::Entry> acc;
  for (const auto& [uv, a] : x.entries()) {
    for (const auto& [uv2, b] : y.entries()) {
      const Vec& left = d.mul.col((uv / n) * n + uv2 / n);
      const Vec& right = d.mul.col((uv % n) * n + uv2 % n);
      Scalar c = a * b;
      for (const auto& [k, v] : left.entries()) {
        for (const auto& [l, w] : right.entries()) acc.emplace_back(k * n + l, c * v * w);
      }
    }
  }
  return Vec::from_entries(n * n, std::move(acc));
}

}  // namespace detail

// Twisted double of a pairing with an admissible action on B.
class DoubleStructure {
 public:
  const Pairing& pairing() const { return data_->pairing; }
  const Action& action() const { return data_->action; }
  const FlatHopf& flat_a() const { return data_->a; }
  const FlatHopf& flat_b() const { return data_->b; }
  const FlatHopf& flat_b_deformed() const { return data_->bt; }
  const FlatHopf& flat() const { return data_->d; }
  const Matrix& form() const { return data_->form; }
  const ModuleActionTables& tables() const { return data_->tables; }
  const TwistMaps& twist() const { return data_->twist; }
  const Matrix& twist_inverse() const { return data_->r_inv; }
  const Matrix& pi(Elem p) const { return data_->pi.at(static_cast<std::size_t>(p)); }
  const Matrix& pi_dual(Elem p) const { return data_->pi_dual.at(static_cast<std::size_t>(p)); }
  bool crossing() const { return data_->crossing; }
  const Group& group() const { return data_->b.group; }

  // Single-component view of the whole double.
  MhaStructure structure() const { return from_flat(data_->d); }

  // Component labels p^-1 for a (x) b with b in B_p.
  std::vector<Elem> grading_labels() const {
    std::vector<Elem> out(data_->d.n);
    for (std::size_t i = 0; i < data_->a.n; ++i) {
      for (std::size_t j = 0; j < data_->b.n; ++j) out[i * data_->b.n + j] = group().inv(data_->b.grade[j]);
    }
    return out;
  }

  std::size_t index(std::size_t ia, std::size_t jb) const { return ia * data_->b.n + jb; }

 private:
  friend DoubleStructure build_double(const Pairing& p, const Action& act);
  std::shared_ptr<detail::DoubleData> data_;
};

inline DoubleStructure build_double(const Pairing& p, const Action& act) {
  detail::require_pairing_shape(p);
  if (!act.base().group().same(p.b.group())) throw StructureError("action over a different group");
  auto x = std::make_shared<detail::DoubleData>();
  x->pairing = p;
  x->action = act;
  x->a = flatten(p.a);
  x->b = flatten(p.b);
  const Group& g = x->b.group;
  Window w = Window::full(g);
  MhaStructure bt = deform(p.b, act, w);
  x->bt = flatten(bt);
  x->form = detail::flat_form(p, x->a, x->b);
  x->tables = module_tables(x->a, x->b, x->form);
  for (Elem q : g.elements()) x->pi.push_back(detail::flat_action(act, x->b, q));
  // pi'_p on A_t lands in A_rho_p(t) and equals F_r^-T P^T F_t^T with
  // P the block of pi_p^-1 on B_r.
  for (Elem q : g.elements()) {
    std::vector<Matrix::Triplet> t;
    for (Elem c : g.elements()) {
      Elem r = act.rho()(q, c);
      auto fr_inv = inverse(p.form(r).transpose());
      if (!fr_inv) throw StructureError("pairing form is degenerate at " + g.name(r));
      Matrix blk = *fr_inv * act.pi(g.inv(q), r).transpose() * p.form(c).transpose();
      for (const auto& [i, j, v] : blk.triplets()) t.emplace_back(x->a.offset.at(r) + i, x->a.offset.at(c) + j, v);
    }
    x->pi_dual.push_back(Matrix::from_triplets(x->a.n, x->a.n, std::move(t)));
  }
  bool crossing = act.rho().kind() == GroupSelfAction::Kind::Adjoint;
  if (act.rho().kind() == GroupSelfAction::Kind::Table || act.rho().kind() == GroupSelfAction::Kind::Trivial) {
    crossing = true;
    for (Elem a : g.elements()) {
      for (Elem b : g.elements()) crossing = crossing && act.rho()(a, b) == g.conj(a, b);
    }
  }
  x->crossing = crossing;
  x->twist = detail::twist_maps(*x);
  auto rinv = inverse(x->twist.r);
  if (!rinv) throw StructureError("twist map is not invertible");
  x->r_inv = *rinv;

  const FlatHopf& fa = x->a;
  const FlatHopf& fb = x->b;
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  std::size_t n = na * nb;
  FlatHopf& d = x->d;
  d.name = "D(" + p.name + ", " + act.name() + ")";
  d.group = Group::trivial();
  d.n = n;
  d.grade.assign(n, d.group.identity());
  for (std::size_t k = 0; k < n; ++k) d.local.push_back(k);
  d.offset[d.group.identity()] = 0;
  Matrix ia = Matrix::identity(na);
  Matrix ib = Matrix::identity(nb);
  d.mul = kron(fa.mul, fb.mul) * kron(ia, kron(x->twist.r, ib));
  d.unit = fa.unit.kron(fb.unit);
  d.counit = fa.counit.kron(fb.counit);
  // Delta(a >< b) = Delta^cop(a) Delta~(b) with both factors embedded in D (x) D.
  std::vector<Vec> dcols;
  for (std::size_t i = 0; i < na; ++i) {
    Vec xa(n * n);
    for (const auto& [kl, c] : fa.delta.col(i).entries()) {
      Vec left = Vec::unit(na, kl % na).kron(fb.unit);
      Vec right = Vec::unit(na, kl / na).kron(fb.unit);
      xa.axpy(c, left.kron(right));
    }
    for (std::size_t j = 0; j < nb; ++j) {
      Vec yb(n * n);
      for (const auto& [kl, c] : x->bt.delta.col(j).entries()) {
        Vec left = fa.unit.kron(Vec::unit(nb, kl / nb));
        Vec right = fa.unit.kron(Vec::unit(nb, kl % nb));
        yb.axpy(c, left.kron(right));
      }
      dcols.push_back(detail::mul_dd(d, xa, yb));
    }
  }
  d.delta = Matrix::from_columns(n * n, std::move(dcols));
  // S(a >< b) = R(pi_p^-1(S(b)) (x) S^-1(a)) for b in B_p.
  std::vector<Vec> scols;
  for (std::size_t i = 0; i < na; ++i) {
    Vec sa = fa.antipode_inv * Vec::unit(na, i);
    for (std::size_t j = 0; j < nb; ++j) {
      Vec sb = x->pi[g.inv(fb.grade[j])] * (fb.antipode * Vec::unit(nb, j));
      scols.push_back(x->twist.r * sb.kron(sa));
    }
  }
  d.antipode = Matrix::from_columns(n, std::move(scols));
  auto sinv = inverse(d.antipode);
  if (!sinv) throw StructureError("antipode of the double is not invertible");
  d.antipode_inv = *sinv;
  if (fa.star && fb.star) {
    if (!fa.star->antilinear || !fb.star->antilinear) throw StructureError("double star needs antilinear involutions");
    d.star = Star{x->twist.r * kron(fb.star->matrix, fa.star->matrix) * permute_legs({na, nb}, {1, 0}), true};
  }
  DoubleStructure out;
  out.data_ = std::move(x);
  return out;
}

// Untwisted double: R(b (x) a) = sum (b(1) |> a <| S^-1(b(3))) (x) b(2).
inline Matrix classical_twist(const Pairing& p) {
  detail::require_pairing_shape(p);
  FlatHopf fa = flatten(p.a);
  FlatHopf fb = flatten(p.b);
  ModuleActionTables m = module_tables(fa, fb, detail::flat_form(p, fa, fb));
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  Matrix delta2 = kron(fb.delta, Matrix::identity(nb)) * fb.delta;
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t i = 0; i < na; ++i) {
      Vec v(na * nb);
      for (const auto& [klm, c] : delta2.col(j).entries()) {
        std::size_t k = klm / (nb * nb);
        std::size_t l = (klm / nb) % nb;
        std::size_t mm = klm % nb;
        Vec left = detail::bilinear(m.b_on_a, Vec::unit(nb, k), Vec::unit(na, i));
        Vec both = detail::bilinear(m.a_right_b, left, fb.antipode_inv * Vec::unit(nb, mm));
        v.axpy(c, both.kron(Vec::unit(nb, l)));
      }
      cols.push_back(std::move(v));
    }
  }
  return Matrix::from_columns(na * nb, std::move(cols));
}

// Splits a finite flat structure into components by the given labels and
// checks that every structure map respects the cograding.
inline std::pair<MhaStructure, Report> regrade(const FlatHopf& f, const Group& g, const std::vector<Elem>& labels) {
  if (labels.size() != f.n) throw DimensionMismatch("one label per basis vector is required");
  std::size_t n = f.n;
  Tally prod("orthogonal components", "D_p D_q = 0 for p != q and D_p D_p lies in D_p");
  Tally cop("coproduct grading", "Delta(D_s) lies in the sum of D_p (x) D_q over pq = s");
  Tally ant("antipode grading", "S(D_p) lies in D_p^-1");
  Tally star("star grading", "(D_p)* = D_p");
  for (const auto& [r, c, v] : f.mul.triplets()) {
    Elem lu = labels[c / n];
    Elem lv = labels[c % n];
    prod.expect(lu == lv && labels[r] == lu, "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  for (const auto& [r, c, v] : f.delta.triplets()) {
    cop.expect(g.mul(labels[r / n], labels[r % n]) == labels[c],
               "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  for (const auto& [r, c, v] : f.antipode.triplets()) {
    ant.expect(labels[r] == g.inv(labels[c]), "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  if (f.star) {
    for (const auto& [r, c, v] : f.star->matrix.triplets()) {
      star.expect(labels[r] == labels[c], "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
    }
  }
  Report rep;
  prod.into(rep);
  cop.into(rep);
  ant.into(rep);
  if (f.star) star.into(rep);

  auto idx = std::make_shared<std::map<Elem, std::vector<std::size_t>>>();
  for (Elem p : g.elements()) (*idx)[p] = {};
  for (std::size_t k = 0; k < n; ++k) idx->at(labels[k]).push_back(k);
  auto pairs = [idx, n](Elem p, Elem q) {
    std::vector<std::size_t> out;
    for (std::size_t u : idx->at(p)) {
      for (std::size_t v : idx->at(q)) out.push_back(u * n + v);
    }
    return out;
  };
  auto data = std::make_shared<const FlatHopf>(f);
  auto restrict_vec = [idx](const Vec& v, Elem p) {
    const auto& ks = idx->at(p);
    std::vector<Vec::Entry> es;
    for (std::size_t k = 0; k < ks.size(); ++k) {
      Scalar x = v.at(ks[k]);
      if (!x.is_zero()) es.emplace_back(k, x);
    }
    return Vec::from_entries(ks.size(), std::move(es));
  };
  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = Mode::Cograded;
  a.dim = [idx](Elem p) { return idx->at(p).size(); };
  a.product = [data, idx, pairs](Elem p, Elem) { return data->mul.submatrix(idx->at(p), pairs(p, p)); };
  a.unit = [data, restrict_vec](Elem p) { return std::optional<Vec>(restrict_vec(data->unit, p)); };
  if (f.star) {
    a.star = [data, idx](Elem p) {
      return StarBlock{p, Star{data->star->matrix.submatrix(idx->at(p), idx->at(p)), data->star->antilinear}};
    };
  }
  MhaStructure::Definition d;
  d.name = f.name + " graded";
  d.algebra = GradedAlgebra(std::move(a));
  d.typing = CoproductTyping::standard(g);
  d.delta = [data, idx, pairs, g](Elem p, Elem q) { return data->delta.submatrix(pairs(p, q), idx->at(g.mul(p, q))); };
  d.counit = [data, restrict_vec](Elem p) { return restrict_vec(data->counit, p); };
  d.antipode_target = [g](Elem p) { return g.inv(p); };
  d.antipode_source = [g](Elem t) { return g.inv(t); };
  d.antipode = [data, idx, g](Elem p) { return data->antipode.submatrix(idx->at(g.inv(p)), idx->at(p)); };
  return {MhaStructure(std::move(d)), rep};
}

// The graded double in the crossing case, D_p = A >< B_p^-1.
inline std::pair<MhaStructure, Report> graded_double(const DoubleStructure& d) {
  if (!d.crossing()) throw StructureError("the double is graded only for crossings");
  return regrade(d.flat(), d.group(), d.grading_labels());
}

// pi'_p (x) pi_p acting on the graded double.
inline Action double_crossing(const DoubleStructure& d, const MhaStructure& graded) {
  if (!d.crossing()) throw StructureError("the double carries a crossing only when the action is one");
  const Group g = d.group();
  const Action act = d.action();
  const FlatHopf fa = d.flat_a();
  auto pd = std::make_shared<std::vector<Matrix>>();
  for (Elem p : g.elements()) pd->push_back(d.pi_dual(p));
  return Action(graded, GroupSelfAction::adjoint(g),
                [g, act, pd](Elem p, Elem q) {
                  return kron(pd->at(static_cast<std::size_t>(p)), act.pi(p, g.inv(q)));
                },
                "double crossing");
}

inline Report check_double_axioms(const DoubleStructure& dd) {
  Report rep;
  const FlatHopf& fa = dd.flat_a();
  const FlatHopf& fb = dd.flat_b();
  const FlatHopf& d = dd.flat();
  const TwistMaps& t = dd.twist();
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  std::size_t n = d.n;
  Matrix ia = Matrix::identity(na);
  Matrix ib = Matrix::identity(nb);
  Matrix iab = Matrix::identity(n);
  rep.add("twist.R1 invertible", "R1 R1^-1 = R1^-1 R1 = id", t.r1 * t.r1_inv == iab && t.r1_inv * t.r1 == iab,
          "products differ from the identity");
  rep.add("twist.R2 invertible", "R2 R2^-1 = R2^-1 R2 = id", t.r2 * t.r2_inv == iab && t.r2_inv * t.r2 == iab,
          "products differ from the identity");
  rep.add("twist.closed form", "R1 R2^-1 flip = sum pi(b(1)) |> a <| S^-1(b(3)) (x) b(2)", t.r == t.closed,
          "matrices differ");
  if (dd.crossing()) {
    bool ok = true;
    for (const auto& [r, c, v] : t.r.triplets()) ok = ok && fb.grade[c / na] == fb.grade[r % nb];
    rep.add("twist.degree preserving", "R(B_p (x) A) lies in A (x) B_p", ok, "an entry changes the B-degree");
  }
  const Matrix& mb = fb.mul;
  const Matrix& ma = fa.mul;
  rep.add("twist.multiplicative in B", "R(m_B (x) id) = (id (x) m_B)(R (x) id)(id (x) R)",
          t.r * kron(mb, ia) == kron(ia, mb) * kron(t.r, ib) * kron(ib, t.r), "matrices differ");
  rep.add("twist.multiplicative in A", "R(id (x) m_A) = (m_A (x) id)(id (x) R)(R (x) id)",
          t.r * kron(ib, ma) == kron(ma, ib) * kron(ia, t.r) * kron(t.r, ia), "matrices differ");
  rep.add("twist.unital", "R(1 (x) a) = a (x) 1 and R(b (x) 1) = 1 (x) b",
          t.r * kron(Matrix::column(fb.unit), ia) == kron(ia, Matrix::column(fb.unit)) &&
              t.r * kron(ib, Matrix::column(fa.unit)) == kron(Matrix::column(fa.unit), ib),
          "a unit is not carried through");
  const Matrix& rinv = dd.twist_inverse();
  Matrix alt1 = kron(ia, mb) * kron(t.r, ib) * kron(ib, kron(ma, ib)) * kron(rinv, kron(ia, ib));
  Matrix alt2 = kron(ma, ib) * kron(ia, t.r) * kron(ia, kron(mb, ia)) * kron(kron(ia, ib), rinv);
  rep.add("product.alternate forms", "both rewritten product formulas agree with (m (x) m)(id (x) R (x) id)",
          alt1 == d.mul && alt2 == d.mul, "a rewritten product differs");
  Report algebra = check_graded_algebra(dd.structure().algebra(), Window::full(Group::trivial()));
  rep.append(algebra, "double");
  // Delta(R(b (x) a)) = Delta~(b) Delta^cop(a).
  Tally p37("coproduct of twist", "Delta(R(b (x) a)) = Delta~(b) Delta^cop(a)");
  for (std::size_t j = 0; j < nb; ++j) {
    Vec yb(n * n);
    for (const auto& [kl, c] : dd.flat_b_deformed().delta.col(j).entries()) {
      yb.axpy(c, fa.unit.kron(Vec::unit(nb, kl / nb)).kron(fa.unit.kron(Vec::unit(nb, kl % nb))));
    }
    for (std::size_t i = 0; i < na; ++i) {
      Vec xa(n * n);
      for (const auto& [kl, c] : fa.delta.col(i).entries()) {
        xa.axpy(c, Vec::unit(na, kl % na).kron(fb.unit).kron(Vec::unit(na, kl / na).kron(fb.unit)));
      }
      Vec lhs = d.delta * (t.r * Vec::unit(nb * na, j * na + i));
      p37.expect(lhs == detail::mul_dd(d, yb, xa), "basis pair (" + std::to_string(j) + ", " + std::to_string(i) + ")");
    }
  }
  p37.into(rep);
  // Legs of Delta(a >< b) sit as (a(2) >< b~(1)) (x) (a(1) >< b~(2)).
  Tally legs("coproduct legs", "Delta(a >< b) = sum (a(2) >< b~(1)) (x) (a(1) >< b~(2))");
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      Vec v(n * n);
      for (const auto& [kl, c] : fa.delta.col(i).entries()) {
        for (const auto& [uv, e] : dd.flat_b_deformed().delta.col(j).entries()) {
          Vec left = Vec::unit(na, kl % na).kron(Vec::unit(nb, uv / nb));
          Vec right = Vec::unit(na, kl / na).kron(Vec::unit(nb, uv % nb));
          v.axpy(c * e, left.kron(right));
        }
      }
      legs.expect(v == d.delta.col(dd.index(i, j)), "basis (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
  legs.into(rep);
  // S from the deformed antipode of B and the antipode of A^cop.
  Matrix alt_s = t.r * kron(dd.flat_b_deformed().antipode, fa.antipode_inv) * permute_legs({na, nb}, {1, 0});
  rep.add("antipode.two routes", "R(pi(S b) (x) S^-1 a) = R (S~ (x) S_cop) flip", alt_s == d.antipode,
          "matrices differ");
  if (d.star) {
    Matrix m = t.r * kron(fb.star->matrix, fa.star->matrix) * permute_legs({na, nb}, {1, 0});
    rep.add("star.twist involution", "(R (* (x) *) flip)^2 = id", m * m.conj() == iab, "square is not the identity");
  }
  if (dd.crossing()) {
    auto [graded, greport] = graded_double(dd);
    rep.append(greport, "grading");
    Window w = Window::full(dd.group());
    rep.append(check_cograded(graded, w), "grading");
    rep.append(hopf_suite(graded, w), "suite");
    Action dc = double_crossing(dd, graded);
    rep.append(check_crossing(dc, w), "double crossing");
  } else {
    rep.append(hopf_suite(dd.structure(), Window::full(Group::trivial())), "suite");
  }
  return rep;
}

struct DoubleIntegral {
  GradedFunctional psi;  // on the single-component double
  Vec phi_a;
  Vec psi_b_deformed;
  Scalar modular_pairing;         // <delta_A, delta_B>
  std::optional<Scalar> scalar;   // its square root when rational
  Report report;
};

inline DoubleIntegral double_right_integral(const DoubleStructure& dd) {
  const Pairing& p = dd.pairing();
  const Group& g = dd.group();
  Window w = Window::full(g);
  const FlatHopf& fa = dd.flat_a();
  const FlatHopf& fb = dd.flat_b();
  DoubleIntegral out;
  Report& rep = out.report;
  IntegralSpace la = solve_left_integral(p.a, w);
  IntegralSpace lb = solve_left_integral(p.b, w);
  IntegralSpace rb = solve_right_integral(p.b, w);
  if (la.dimension != 1 || lb.dimension != 1 || rb.dimension != 1) {
    rep.add("factor integrals", "A and B carry one-dimensional integral spaces", false, "unexpected dimension");
    return out;
  }
  GradedFunctional psi_t = deformed_right_integral(dd.action(), rb.basis[0]);
  auto to_flat = [](const FlatHopf& f, const GradedFunctional& x) {
    std::vector<Vec::Entry> es;
    for (Elem q : f.group.elements()) {
      for (const auto& [k, v] : x.row(q).entries()) es.emplace_back(f.offset.at(q) + k, v);
    }
    return Vec::from_entries(f.n, std::move(es));
  };
  out.phi_a = to_flat(fa, la.basis[0]);
  out.psi_b_deformed = to_flat(fb, psi_t);
  out.psi.rows[Group::trivial().identity()] = out.phi_a.kron(out.psi_b_deformed);
  MhaStructure ds = dd.structure();
  Window one = Window::full(Group::trivial());
  rep.append(is_right_invariant(ds, out.psi, one), "double");
  ModularElement da = modular_element(p.a, la.basis[0], w);
  ModularElement db = modular_element(p.b, lb.basis[0], w);
  auto gather = [&](const FlatHopf& f, const ModularElement& m) {
    std::vector<Vec::Entry> es;
    for (Elem q : g.elements()) {
      for (const auto& [k, v] : m.parts.at(q).entries()) es.emplace_back(f.offset.at(q) + k, v);
    }
    return Vec::from_entries(f.n, std::move(es));
  };
  Vec delta_a = gather(fa, da);
  Vec delta_b = gather(fb, db);
  auto delta_b_inv = solve_linear(fb.mul * kron(Matrix::column(delta_b), Matrix::identity(fb.n)), Matrix::column(fb.unit));
  if (!delta_b_inv || !delta_b_inv->kernel.empty()) {
    rep.add("modular element of B invertible", "delta_B is invertible", false, "no unique inverse");
    return out;
  }
  Vec dbi = delta_b_inv->particular.col(0);
  Tally aux("integral through twist", "(id (x) psi~)(R(b (x) a)) = psi~(b)(delta_B^-1 |> a)");
  std::size_t na = fa.n;
  std::size_t nb = fb.n;
  Matrix contract = kron(Matrix::identity(na), Matrix::row(out.psi_b_deformed));
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t i = 0; i < na; ++i) {
      Vec lhs = contract * dd.twist().r.col(j * na + i);
      Vec rhs = detail::bilinear(dd.tables().b_on_a, dbi, Vec::unit(na, i)).scaled(out.psi_b_deformed.at(j));
      aux.expect(lhs == rhs, "basis pair (" + std::to_string(j) + ", " + std::to_string(i) + ")");
    }
  }
  aux.into(rep);
  out.modular_pairing = delta_a.dot(dd.form() * delta_b);
  out.scalar = rational_sqrt(out.modular_pairing);
  rep.add("scalar representable", "<delta_A, delta_B>^(1/2) is rational", out.scalar.has_value(),
          "value " + out.modular_pairing.str() + " has no rational square root");
  const FlatHopf& d = dd.flat();
  if (out.scalar && d.star) {
    std::vector<Matrix::Triplet> t;
    const Vec& row = out.psi.rows.begin()->second;
    for (std::size_t u = 0; u < d.n; ++u) {
      Vec xs = d.star->apply(Vec::unit(d.n, u));
      for (std::size_t v = 0; v < d.n; ++v) {
        Scalar val = row.dot(d.mul * xs.kron(Vec::unit(d.n, v))) * *out.scalar;
        if (!val.is_zero()) t.emplace_back(u, v, val);
      }
    }
    Matrix gram = Matrix::from_triplets(d.n, d.n, std::move(t));
    bool ok = false;
    std::string why = "scaled Gram matrix is not positive semidefinite";
    try {
      ok = hermitian_psd(gram);
    } catch (const NotHermitian&) {
      why = "scaled Gram matrix is not Hermitian";
    }
    rep.add("double.positive", "c psi(x* x) >= 0 with c = <delta_A, delta_B>^(1/2)", ok, why);
  }
  return out;
}

struct ReducedDual {
  MhaStructure dual;
  Pairing pairing;
  std::optional<Action> dual_action;  // pi'_p f = f o pi_p^-1, when an action was given
};

namespace detail {

inline StarBlock dual_star(const MhaStructure& h, Elem p) {
  // f* (x) = conj(f(S(x)*)) for f on H_p, read on H_t.
  const GradedAlgebra& alg = h.algebra();
  Elem y = alg.star(p).target;
  Elem t = h.antipode_source(y);
  std::vector<Matrix::Triplet> trip;
  for (std::size_t k = 0; k < h.dim(t); ++k) {
    const StarBlock& sb = alg.star(y);
    if (sb.target != p) throw StructureError("star and antipode typings do not compose");
    Vec w = sb.star.apply(h.antipode(t) * Vec::unit(h.dim(t), k));
    for (const auto& [i, v] : w.entries()) trip.emplace_back(k, i, v.conj());
  }
  return StarBlock{t, Star{Matrix::from_triplets(h.dim(t), h.dim(p), std::move(trip)), true}};
}

}  // namespace detail

// Componentwise dual: structure maps are transposed, with the evaluation pairing.
inline ReducedDual reduced_dual(const MhaStructure& h, const std::optional<Action>& act = std::nullopt) {
  const Group g = h.group();
  const GradedAlgebra& alg = h.algebra();
  GradedAlgebra::Definition a;
  a.group = g;
  a.dim = [h](Elem p) { return h.dim(p); };
  MhaStructure::Definition d;
  d.name = h.name() + "*";
  d.antipode_target = [g](Elem p) { return g.inv(p); };
  d.antipode_source = [g](Elem t) { return g.inv(t); };
  d.antipode = [h, g](Elem p) { return h.antipode(g.inv(p)).transpose(); };
  if (h.has_star()) a.star = [h](Elem p) { return detail::dual_star(h, p); };
  if (h.mode() == Mode::Cograded) {
    for (Elem p : g.finite() ? g.elements() : std::vector<Elem>{g.identity()}) {
      if (h.source(p, g.identity()) != p) throw StructureError("reduced dual needs the standard coproduct typing");
    }
    a.mode = Mode::Graded;
    a.product = [h](Elem p, Elem q) { return h.delta(p, q).transpose(); };
    a.unit = [h, g](Elem p) {
      return p == g.identity() ? std::optional<Vec>(h.counit(p)) : std::nullopt;
    };
    d.typing = CoproductTyping::diagonal(g);
    d.delta = [alg](Elem p, Elem) { return alg.product(p, p).transpose(); };
    d.counit = [alg, h](Elem p) {
      const auto& u = alg.unit(p);
      if (!u) throw StructureError("reduced dual needs unital components");
      return *u;
    };
  } else {
    a.mode = Mode::Cograded;
    a.product = [h](Elem p, Elem) { return h.delta(p, p).transpose(); };
    a.unit = [h](Elem p) { return std::optional<Vec>(h.counit(p)); };
    d.typing = CoproductTyping::standard(g);
    d.delta = [alg](Elem p, Elem q) { return alg.product(p, q).transpose(); };
    d.counit = [alg, h](Elem p) {
      const auto& u = alg.unit(p);
      return u ? *u : Vec(h.dim(p));
    };
  }
  d.algebra = GradedAlgebra(std::move(a));
  ReducedDual out;
  out.dual = MhaStructure(std::move(d));
  auto ident = [h](Elem p) { return Matrix::identity(h.dim(p)); };
  if (h.mode() == Mode::Cograded) {
    out.pairing = Pairing{"<" + h.name() + "*, " + h.name() + ">", out.dual, h, ident};
  } else {
    out.pairing = Pairing{"<" + h.name() + ", " + h.name() + "*>", h, out.dual, ident};
  }
  if (act) {
    if (h.mode() != Mode::Cograded) throw StructureError("dual actions are defined for cograded inputs");
    Action a0 = *act;
    GroupSelfAction rho = a0.rho();
    out.dual_action = Action(out.dual, rho,
                             [a0, g, rho](Elem p, Elem q) { return a0.pi(g.inv(p), rho(p, q)).transpose(); },
                             a0.name() + "'");
  }
  return out;
}

}  // namespace mhd
