// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <unistd.h>

#include "mhd/pipeline.hpp"

namespace {

using namespace mhd;

struct Outcome {
  bool pass = true;
  std::string note;

  void need(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
  void need(const Report& r, const std::string& what) {
    if (!r.passed() && pass) note = what + ": " + r.failures().front().name + " " + r.failures().front().witness;
    pass = pass && r.passed();
  }
};

bool check_named(const Report& r, const std::string& name) {
  const CheckResult* c = r.find(name);
  return c != nullptr && c->pass;
}

MhaStructure cz2_single() { return from_flat(flatten(make_group_algebra(Group::cyclic(2)))); }

Pairing group_pairing(const Group& g) {
  return Pairing{"<C[G], K(G)>", make_group_algebra(g), make_kg(g), [](Elem) { return Matrix::identity(1); }};
}

Outcome c1() {
  Outcome o;
  Group s3 = Group::symmetric3();
  MhaStructure kg = make_kg(s3);
  Report r = hopf_suite(kg, Window::full(s3));
  o.need(r, "suite");
  o.need(r.find("hopf.T1 bijective") && r.find("hopf.T1 bijective")->cases == 36, "36 T1 blocks");
  o.need(r.find("hopf.T2 bijective") && r.find("hopf.T2 bijective")->cases == 36, "36 T2 blocks");
  o.need(check_named(r, "star.coproduct star-homomorphism"), "coproduct is a star map");
  return o;
}

Outcome c2() {
  Outcome o;
  Group s3 = Group::symmetric3();
  Window w = Window::full(s3);
  MhaStructure kg = make_kg(s3);
  IntegralAnalysis a = analyze_integrals(kg, w);
  o.need(a.report, "integral analysis");
  o.need(a.left.dimension == 1, "left integral space is one-dimensional");
  if (!o.pass) return o;
  for (Elem p : s3.elements()) o.need(a.left.basis[0].row(p) == Vec::unit(1, 0), "phi(delta_p) = 1");
  o.need(a.modular.has_value(), "modular element found");
  if (a.modular) {
    for (Elem p : s3.elements()) o.need(a.modular->parts.at(p) == Vec::unit(1, 0), "modular element is 1");
  }
  o.need(a.sigma && a.sigma->sigma == Matrix::identity(6), "modular automorphism is the identity");
  o.need(check_positive_integral(kg, a.left.basis[0], w), "Gram matrix PSD");
  return o;
}

Outcome c3() {
  Outcome o;
  Group s3 = Group::symmetric3();
  Window w = Window::full(s3);
  MhaStructure ga = make_group_algebra(s3);
  o.need(hopf_suite(ga, w), "suite");
  IntegralAnalysis a = analyze_integrals(ga, w);
  o.need(a.left.dimension == 1, "integral space is one-dimensional");
  if (!o.pass) return o;
  for (Elem p : s3.elements()) {
    o.need(a.left.basis[0].row(p) == (p == s3.identity() ? Vec::unit(1, 0) : Vec(1)), "phi(u_g) = [g = e]");
  }
  return o;
}

Outcome c4() {
  Outcome o;
  Pairing p = group_pairing(Group::symmetric3());
  Report r = check_pairing(p);
  o.need(r, "pairing checks");
  for (const char* n : {"product duality", "coproduct duality", "nondegenerate", "antipode duality", "star pairing",
                        "induced grading", "mixed grading annihilation", "coproduct pairs diagonally",
                        "A antipode grading"}) {
    o.need(check_named(r, n), n);
  }
  o.need(build_module_actions(p).report, "module laws");
  return o;
}

Outcome c5() {
  Outcome o;
  Group g = Group::symmetric3();
  Pairing pr = group_pairing(g);
  DoubleStructure d = build_double(pr, trivial_action(pr.b));
  Matrix classical = classical_twist(pr);
  o.need(d.twist().r == classical, "twist equals the classical one");
  const FlatHopf& fa = d.flat_a();
  const FlatHopf& fb = d.flat_b();
  Matrix direct = kron(fa.mul, fb.mul) *
                  kron(Matrix::identity(fa.n), kron(classical, Matrix::identity(fb.n)));
  o.need(direct == d.flat().mul, "structure constants equal the classical double");
  std::size_t n = d.flat().n;
  for (Elem a : g.elements()) {
    for (Elem p : g.elements()) {
      for (Elem b : g.elements()) {
        for (Elem q : g.elements()) {
          Vec got = d.flat().mul * Vec::unit(n * n, d.index(a, p) * n + d.index(b, q));
          Vec want(n);
          if (g.mul(g.mul(g.inv(b), p), b) == q) want = Vec::unit(n, d.index(g.mul(a, b), q));
          o.need(got == want, "closed-form product at (" + g.name(a) + ", " + g.name(p) + ", " + g.name(b) + ", " +
                                  g.name(q) + ")");
        }
      }
    }
  }
  return o;
}

Outcome c6() {
  Outcome o;
  Pairing pr = group_pairing(Group::symmetric3());
  DoubleStructure d = build_double(pr, kg_adjoint_action(pr.b));
  o.need(d.crossing(), "adjoint action is a crossing");
  Report r = check_double_axioms(d);
  o.need(r, "double axioms");
  o.need(check_named(r, "coproduct of twist") && r.find("coproduct of twist")->cases == 36, "twist coproduct on 36 pairs");
  o.need(check_named(r, "grading.orthogonal components"), "grading");
  o.need(check_named(r, "grading.coproduct typing"), "cograded coproduct");
  o.need(check_named(r, "double crossing.adjoint self-action"), "double crossing");
  o.need(check_named(r, "suite.hopf.coassociativity"), "suite on the graded double");
  return o;
}

Outcome deformation(const MhaStructure& b, const Action& a) {
  Outcome o;
  const Group& g = b.group();
  Window w = Window::full(g);
  o.need(check_crossing(a, w), "crossing");
  MhaStructure t = deform(b, a, w);
  o.need(hopf_suite(t, w), "deformed suite");
  for (Elem p : g.elements()) {
    o.need(t.counit(p) == b.counit(p), "counit unchanged");
    Elem pi = g.inv(p);
    o.need(t.antipode(p) == a.pi(pi, b.antipode_target(p)) * b.antipode(p), "deformed antipode is pi_p^-1 S");
  }
  IntegralAnalysis ia = analyze_integrals(b, w);
  o.need(is_left_invariant(t, ia.left.basis[0], w), "phi stays left invariant");
  o.need(is_right_invariant(t, deformed_right_integral(a, ia.right.basis[0]), w), "deformed psi right invariant");
  return o;
}

Outcome c7() {
  Outcome o;
  Group s3 = Group::symmetric3();
  MhaStructure kg = make_kg(s3);
  Outcome a = deformation(kg, kg_adjoint_action(kg));
  o.need(a.pass, "K(S3): " + a.note);
  MhaStructure fam = make_constant_family(cz2_single(), s3);
  Outcome b = deformation(fam, constant_adjoint_action(fam));
  o.need(b.pass, "constant family: " + b.note);
  return o;
}

Outcome c8() {
  Outcome o;
  Group s3 = Group::symmetric3();
  Window w = Window::full(s3);
  MhaStructure kg = make_kg(s3);
  Report a = mirror_check(kg, kg_adjoint_action(kg), w);
  o.need(a, "K(S3)");
  MhaStructure fam = make_constant_family(cz2_single(), s3);
  Report b = mirror_check(fam, constant_adjoint_action(fam), w);
  o.need(b, "constant family");
  o.need(check_named(a, "mirror.double deformation") && check_named(b, "mirror.double deformation"),
         "deforming twice recovers the blocks");
  return o;
}

Outcome c9() {
  Outcome o;
  io::Loaded x = io::builtin("kg-integers");
  io::CertificateReport r = io::run_verify(x, std::string("-5..5"));
  o.need(r.report, "verify pipeline");
  o.need(r.window.size() == 11 && r.window.front() == "-5" && r.window.back() == "5", "window recorded");
  o.need(r.report.find("hopf.T1 bijective") && r.report.find("hopf.T1 bijective")->cases == 121, "121 T1 blocks");
  return o;
}

Outcome c10() {
  Outcome o;
  Pairing pr = group_pairing(Group::symmetric3());
  for (bool adjoint : {false, true}) {
    DoubleStructure d = build_double(pr, adjoint ? kg_adjoint_action(pr.b) : trivial_action(pr.b));
    DoubleIntegral di = double_right_integral(d);
    std::string which = adjoint ? "adjoint" : "trivial";
    o.need(di.report, which);
    o.need(check_named(di.report, "integral through twist"), which + " auxiliary identity");
    o.need(di.scalar && *di.scalar == Scalar(1), which + " scalar is 1");
  }
  Pairing pz = group_pairing(Group::cyclic(2));
  DoubleStructure dz = build_double(pz, trivial_action(pz.b));
  DoubleIntegral di = double_right_integral(dz);
  o.need(di.report, "D(Z2)");
  o.need(check_named(di.report, "double.positive"), "D(Z2) scaled Gram matrix PSD");
  return o;
}

Outcome c11() {
  Outcome o;
  Group s3 = Group::symmetric3();
  MhaStructure fam = make_constant_family(cz2_single(), s3);
  Action act = constant_adjoint_action(fam);
  ReducedDual rd = reduced_dual(fam, act);
  o.need(hopf_suite(rd.dual, Window::full(s3)), "dual suite");
  o.need(check_pairing(rd.pairing), "evaluation pairing");
  o.need(rd.dual_action.has_value(), "dual action returned");
  DoubleStructure d = build_double(rd.pairing, act);
  Report r = check_double_axioms(d);
  o.need(r, "double axioms");
  o.need(check_named(r, "grading.orthogonal components") && check_named(r, "double crossing.adjoint self-action"),
         "grading and crossing");
  return o;
}

Outcome c12() {
  Outcome o;
  io::Loaded pair = io::builtin("pairing-gacs3");
  io::DoubleRun run = io::run_double(pair, io::resolve_action(pair, "adjoint"));
  o.need(!run.aborted && run.construction.passed() && run.exported.passed(), "double pipeline");
  std::filesystem::path tmp = std::filesystem::temp_directory_path() / ("mhd_accept_" + std::to_string(::getpid()) + ".json");
  io::save_json(tmp, run.doc);
  io::Loaded back = io::load_source(tmp.string());
  io::CertificateReport again = io::run_verify(back);
  std::filesystem::remove(tmp);
  o.need(again.digest() == run.exported.digest(), "report digest reproduced");
  o.need(back.doc == run.doc, "spec reloads unchanged");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    double budget;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {1, "K(S3) full multiplier Hopf *-algebra suite", 10, c1},
      {2, "integrals on K(S3)", 5, c2},
      {3, "C[S3] suite and integral", 5, c3},
      {4, "pairing <C[S3], K(S3)>", 10, c4},
      {5, "trivial-action double equals the classical double", 30, c5},
      {6, "adjoint-crossing double", 60, c6},
      {7, "deformation suite", 30, c7},
      {8, "mirror involution", 10, c8},
      {9, "K(Z) on window -5..5", 10, c9},
      {10, "integrals on the double", 30, c10},
      {11, "reduced dual of the constant C[Z2] family and its double", 60, c11},
      {12, "CLI round trip", 30, c12},
  };
  bool all_pass = true;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget) o.need(false, "over the time budget");
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << std::fixed
              << std::setprecision(2) << secs << " s of " << std::setprecision(0) << c.budget << " s)";
    if (!o.pass) std::cout << " -- " << o.note;
    std::cout << std::endl;
  }
  return all_pass ? 0 : 1;
}
