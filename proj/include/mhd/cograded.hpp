#pragma once

// Cograded structures, admissible actions on them, the deformed coproduct and
// the mirror regrading.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "mhd/hopf.hpp"

namespace mhd {

class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Automorphisms pi_p with pi_p(B_q) = B_{rho_p(q)}.
class Action {
 public:
  Action() = default;
  Action(MhaStructure base, GroupSelfAction rho, std::function<Matrix(Elem, Elem)> pi, std::string name = "action")
      : impl_(std::make_shared<Impl>()) {
    impl_->base = std::move(base);
    impl_->rho = std::move(rho);
    impl_->pi = std::move(pi);
    impl_->name = std::move(name);
    if (!impl_->rho.group().same(impl_->base.group())) throw StructureError("action over a different group");
  }

  const MhaStructure& base() const { return impl_->base; }
  const GroupSelfAction& rho() const { return impl_->rho; }
  const std::string& name() const { return impl_->name; }

  // Block B_q -> B_{rho_p(q)}.
  const Matrix& pi(Elem p, Elem q) const {
    return impl_->blocks.get({p, q}, [&] {
      Matrix m = impl_->pi(p, q);
      Elem t = rho()(p, q);
      if (m.rows() != base().dim(t) || m.cols() != base().dim(q)) {
        throw DimensionMismatch("action block has shape " + m.shape());
      }
      return m;
    });
  }

 private:
  struct Impl {
    MhaStructure base;
    GroupSelfAction rho;
    std::function<Matrix(Elem, Elem)> pi;
    std::string name;
    MemoCache<std::pair<Elem, Elem>, Matrix> blocks;
  };
  std::shared_ptr<Impl> impl_;
};

inline Action trivial_action(const MhaStructure& b) {
  return Action(b, GroupSelfAction::trivial(b.group()), [b](Elem, Elem q) { return b.ident(q); }, "trivial");
}

// pi_p(delta_q) = delta_{pqp^-1} on K(G).
inline Action kg_adjoint_action(const MhaStructure& kg) {
  return Action(kg, GroupSelfAction::adjoint(kg.group()), [](Elem, Elem) { return Matrix::identity(1); }, "adjoint");
}

// Identity maps B_q -> B_{pqp^-1} on a constant family.
inline Action constant_adjoint_action(const MhaStructure& family) {
  return Action(family, GroupSelfAction::adjoint(family.group()),
                [family](Elem, Elem q) { return family.ident(q); }, "adjoint");
}

inline Report check_cograded(const MhaStructure& b, const Window& w) {
  const Group& g = b.group();
  const GradedAlgebra& alg = b.algebra();
  Report rep;
  if (b.mode() != Mode::Cograded) {
    rep.add("cograded mode", "B_p B_q = 0 for p != q", false, "structure is in graded mode");
    return rep;
  }
  Tally typing("coproduct typing", "Delta_{p,q} maps B_pq into B_p (x) B_q");
  Tally units("unital components", "every B_p has a unit 1_p");
  Tally delta_units("coproduct of units", "Delta_{p,q}(1_pq) = 1_p (x) 1_q");
  Tally eps("counit support", "eps vanishes on B_p for p != e and eps(1_e) = 1");
  Tally ant("antipode grading", "S(B_p) lies in B_p^-1 and S(1_p) = 1_p^-1");
  Tally star("star grading", "(B_p)* = B_p and 1_p* = 1_p");
  for (Elem p : w.elements()) {
    const auto& up = alg.unit(p);
    units.expect(up.has_value(), "component " + g.name(p));
    Elem pi = g.inv(p);
    bool aok = b.antipode_target(p) == pi;
    if (aok && up && alg.unit(pi)) aok = b.antipode(p) * *up == *alg.unit(pi);
    ant.expect(aok, "component " + g.name(p));
    const Vec& e = b.counit(p);
    if (p == g.identity()) {
      eps.expect(up && e.dot(*up) == Scalar(1), "identity component");
    } else {
      eps.expect(e.is_zero(), "component " + g.name(p));
    }
    if (b.has_star()) {
      const StarBlock& sb = alg.star(p);
      bool sok = sb.target == p;
      if (sok && up) sok = sb.star.apply(*up) == *up;
      star.expect(sok, "component " + g.name(p));
    }
    for (Elem q : w.elements()) {
      std::string where = detail::pair_name(g, p, q);
      typing.expect(b.source(p, q) == g.mul(p, q), where);
      const auto& uq = alg.unit(q);
      const auto& upq = alg.unit(g.mul(p, q));
      if (!up || !uq || !upq) {
        delta_units.fail(where + ": missing unit");
        continue;
      }
      delta_units.expect(b.source(p, q) == g.mul(p, q) && b.delta(p, q) * *upq == up->kron(*uq), where);
    }
  }
  typing.into(rep);
  units.into(rep);
  delta_units.into(rep);
  eps.into(rep);
  ant.into(rep);
  if (b.has_star()) star.into(rep);
  return rep;
}

struct AdmissibilityCertificate {
  Window window;
  Report report;
  bool passed() const { return report.passed(); }
};

inline AdmissibilityCertificate check_admissible(const Action& a, const Window& w) {
  const MhaStructure& b = a.base();
  const Group& g = b.group();
  const GradedAlgebra& alg = b.algebra();
  const GroupSelfAction& rho = a.rho();
  Tally law("action law", "pi_e = id and pi_p pi_q = pi_pq");
  Tally bij("action bijective", "pi_p maps B_q bijectively onto B_rho_p(q)");
  Tally alg_hom("action multiplicative", "pi_p(xy) = pi_p(x)pi_p(y) and pi_p(1_q) = 1_rho_p(q)");
  Tally coalg("action coalgebra map", "Delta pi_p = (pi_p (x) pi_p)Delta");
  Tally conj("action conjugation compatibility", "pi_rho_p(q) = pi_pqp^-1");
  Tally star("action star-preserving", "pi_p(x*) = pi_p(x)*");
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      std::string where = detail::pair_name(g, p, q);
      Elem t = rho(p, q);
      const Matrix& m = a.pi(p, q);
      bij.expect(is_bijective(m), where);
      bool hom = alg.product(t, t) * kron(m, m) == m * alg.product(q, q);
      const auto& uq = alg.unit(q);
      const auto& ut = alg.unit(t);
      if (uq && ut) hom = hom && m * *uq == *ut;
      alg_hom.expect(hom, where);
      if (b.has_star()) {
        bool sok = true;
        for (std::size_t k = 0; k < b.dim(q) && sok; ++k) {
          Vec x = Vec::unit(b.dim(q), k, Scalar(1, 1));
          sok = m * alg.star(q).star.apply(x) == alg.star(t).star.apply(m * x);
        }
        star.expect(sok, where);
      }
      // Action law on B_r for every r in the window.
      if (p == g.identity()) law.expect(rho(p, q) == q && m == b.ident(q), where + ": identity");
      for (Elem r : w.elements()) {
        Elem pq = g.mul(p, q);
        bool ok = rho(pq, r) == rho(p, rho(q, r)) && a.pi(pq, r) == a.pi(p, rho(q, r)) * a.pi(q, r);
        law.expect(ok, detail::triple_name(g, p, q, r));
        Elem c = g.conj(p, q);
        bool cok = rho(t, r) == rho(c, r) && a.pi(t, r) == a.pi(c, r);
        conj.expect(cok, detail::triple_name(g, p, q, r));
      }
      // Coalgebra map: compare the (rho_p(q), rho_p(r))-block of Delta(pi_p b)
      // with (pi_p (x) pi_p)Delta_{q,r}(b).
      for (Elem r : w.elements()) {
        Elem x = rho(p, q);
        Elem y = rho(p, r);
        auto sx = b.source(x, y);
        auto s = b.source(q, r);
        Matrix rhs = kron(a.pi(p, q), a.pi(p, r)) * b.delta(q, r);
        std::string w3 = detail::triple_name(g, p, q, r);
        if (!sx || !s) {
          coalg.fail(w3 + ": missing block");
          continue;
        }
        Elem pre = rho(g.inv(p), *sx);
        if (pre == *s) {
          coalg.expect(b.delta(x, y) * a.pi(p, *s) == rhs, w3);
        } else {
          coalg.expect(rhs.is_zero() && (b.delta(x, y) * a.pi(p, pre)).is_zero(), w3 + ": blocks do not line up");
        }
      }
    }
  }
  AdmissibilityCertificate cert;
  cert.window = w;
  law.into(cert.report);
  bij.into(cert.report);
  alg_hom.into(cert.report);
  coalg.into(cert.report);
  conj.into(cert.report);
  if (b.has_star()) star.into(cert.report);
  // Automorphy of rho is not required; the outcome is recorded, never failed.
  std::string automorphy = "holds on the window";
  [&] {
    for (Elem p : w.elements()) {
      for (Elem q : w.elements()) {
        for (Elem r : w.elements()) {
          if (rho(p, g.mul(q, r)) == g.mul(rho(p, q), rho(p, r))) continue;
          automorphy = "fails at " + detail::triple_name(g, p, q, r);
          return;
        }
      }
    }
  }();
  cert.report.add("self-action automorphy (recorded only)", "rho_p(qr) = rho_p(q)rho_p(r): " + automorphy, true);
  return cert;
}

inline Report check_crossing(const Action& a, const Window& w) {
  Report rep = check_admissible(a, w).report;
  const Group& g = a.base().group();
  Tally adj("adjoint self-action", "rho_p(q) = pqp^-1");
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) adj.expect(a.rho()(p, q) == g.conj(p, q), detail::pair_name(g, p, q));
  }
  adj.into(rep);
  return rep;
}

// Deformed coproduct Delta~_{p,q} = (pi_q^-1 (x) id) Delta_{rho_q(p),q} and
// antipode S~_p = pi_p^-1 S_p; counit, product and star are unchanged.
inline MhaStructure deform(const MhaStructure& b, const Action& a, const Window& w) {
  if (b.mode() != Mode::Cograded) throw StructureError("deformation needs a cograded structure");
  const Group& g = b.group();
  for (Elem p : w.elements()) {
    for (Elem q : w.elements()) {
      if (b.source(p, q) != g.mul(p, q)) throw StructureError("deformation needs the standard coproduct typing");
    }
  }
  auto cert = check_admissible(a, w);
  if (!cert.passed()) {
    throw AdmissibilityError("action is not admissible: " + cert.report.failures().front().name + " at " +
                             cert.report.failures().front().witness);
  }
  GroupSelfAction rho = a.rho();
  MhaStructure::Definition d;
  d.name = b.name() + "~" + a.name();
  d.algebra = b.algebra();
  d.typing.name = "deformed";
  d.typing.source = [g, rho](Elem p, Elem q) -> std::optional<Elem> { return g.mul(rho(q, p), q); };
  d.typing.left_partner = [g, rho](Elem s, Elem q) -> std::optional<Elem> {
    return rho(g.inv(q), g.mul(s, g.inv(q)));
  };
  d.typing.right_partner = [rho](Elem s, Elem p) { return rho.solve_right(p, s); };
  d.delta = [b, a, g, rho](Elem p, Elem q) {
    Elem x = rho(q, p);
    return kron(a.pi(g.inv(q), x), b.ident(q)) * b.delta(x, q);
  };
  d.counit = [b](Elem p) { return b.counit(p); };
  d.antipode_target = [b, g, rho](Elem p) { return rho(g.inv(p), b.antipode_target(p)); };
  if (rho.kind() == GroupSelfAction::Kind::Table) {
    d.antipode_source = [b, g, rho](Elem t) {
      for (Elem p : g.elements()) {
        if (rho(g.inv(p), b.antipode_target(p)) == t) return p;
      }
      throw StructureError("deformed antipode typing is not invertible");
    };
  } else {
    d.antipode_source = [b](Elem t) { return b.antipode_source(t); };
  }
  d.antipode = [b, a, g](Elem p) { return a.pi(g.inv(p), b.antipode_target(p)) * b.antipode(p); };
  return MhaStructure(std::move(d));
}

// psi~ on B_p is psi o pi_p^-1, read on B_rho_p^-1(p).
inline GradedFunctional deformed_right_integral(const Action& a, const GradedFunctional& psi) {
  const Group& g = a.base().group();
  GradedFunctional out;
  for (const auto& [p, row] : psi.rows) {
    Elem src = a.rho()(g.inv(p), p);
    if (!psi.defined(src)) continue;
    out.rows[p] = a.pi(g.inv(p), p).transpose() * psi.row(src);
  }
  return out;
}

// H'_p = H_p^-1 with every typing relabelled accordingly.
inline MhaStructure relabel_inverse(const MhaStructure& h) {
  const Group g = h.group();
  const GradedAlgebra& alg = h.algebra();
  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = h.mode();
  a.dim = [h, g](Elem p) { return h.dim(g.inv(p)); };
  a.product = [alg, g](Elem p, Elem q) { return alg.product(g.inv(p), g.inv(q)); };
  a.unit = [alg, g](Elem p) { return alg.unit(g.inv(p)); };
  if (h.has_star()) {
    a.star = [alg, g](Elem p) {
      StarBlock sb = alg.star(g.inv(p));
      sb.target = g.inv(sb.target);
      return sb;
    };
  }
  if (h.mode() == Mode::Graded) throw StructureError("inverse relabelling is defined for cograded structures");
  auto lift = [g](std::optional<Elem> x) -> std::optional<Elem> {
    if (!x) return std::nullopt;
    return g.inv(*x);
  };
  CoproductTyping base = h.typing();
  MhaStructure::Definition d;
  d.name = h.name() + "'";
  d.algebra = GradedAlgebra(std::move(a));
  d.typing.name = base.name + "'";
  d.typing.source = [base, g, lift](Elem p, Elem q) { return lift(base.source(g.inv(p), g.inv(q))); };
  d.typing.left_partner = [base, g, lift](Elem s, Elem q) { return lift(base.left_partner(g.inv(s), g.inv(q))); };
  d.typing.right_partner = [base, g, lift](Elem s, Elem p) { return lift(base.right_partner(g.inv(s), g.inv(p))); };
  d.delta = [h, g](Elem p, Elem q) { return h.delta(g.inv(p), g.inv(q)); };
  d.counit = [h, g](Elem p) { return h.counit(g.inv(p)); };
  d.antipode_target = [h, g](Elem p) { return g.inv(h.antipode_target(g.inv(p))); };
  d.antipode_source = [h, g](Elem t) { return g.inv(h.antipode_source(g.inv(t))); };
  d.antipode = [h, g](Elem p) { return h.antipode(g.inv(p)); };
  return MhaStructure(std::move(d));
}

inline Action relabel_inverse(const Action& a, const MhaStructure& relabelled_base) {
  const Group g = a.base().group();
  return Action(relabelled_base, a.rho().inverted_labels(),
                [a, g](Elem p, Elem q) { return a.pi(p, g.inv(q)); }, a.name() + "'");
}

inline bool same_blocks(const MhaStructure& x, const MhaStructure& y, const Window& w, std::string* where) {
  const Group& g = x.group();
  for (Elem p : w.elements()) {
    if (x.dim(p) != y.dim(p) || x.counit(p) != y.counit(p) || x.antipode_target(p) != y.antipode_target(p) ||
        x.antipode(p) != y.antipode(p)) {
      if (where) *where = "component " + g.name(p);
      return false;
    }
    for (Elem q : w.elements()) {
      if (x.source(p, q) != y.source(p, q) || x.delta(p, q) != y.delta(p, q)) {
        if (where) *where = "block " + detail::pair_name(g, p, q);
        return false;
      }
    }
  }
  return true;
}

// The regraded deformation is cograded again, carries the relabelled crossing,
// and deforming it once more returns the original structure.
inline Report mirror_check(const MhaStructure& b, const Action& a, const Window& w) {
  Report rep;
  MhaStructure tilde = deform(b, a, w);
  MhaStructure mirror = relabel_inverse(tilde);
  rep.append(check_cograded(mirror, w), "mirror");
  rep.append(hopf_suite(mirror, w), "mirror");
  Action ma = relabel_inverse(a, mirror);
  rep.append(check_crossing(ma, w), "mirror");
  MhaStructure twice = relabel_inverse(deform(mirror, ma, w));
  std::string where;
  rep.add("mirror.double deformation", "deforming the mirror recovers the original blocks",
          same_blocks(twice, b, w, &where), where);
  return rep;
}

}  // namespace mhd
