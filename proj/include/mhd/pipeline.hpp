#pragma once

// Named pipelines behind the CLI and their certificate reports.

#include <string>
#include <vector>

#include "mhd/spec_io.hpp"

namespace mhd::io {

inline constexpr const char* kToolVersion = "mhd 1.0.0";

struct CertificateReport {
  std::string tool = kToolVersion;
  std::string spec_name;
  std::string spec_digest;
  std::vector<std::string> window;
  Report report;

  bool passed() const { return report.passed(); }

  // Everything except the tool banner enters the digest.
  std::string digest() const {
    json body = {{"spec", spec_digest}, {"window", window}, {"checks", checks_json()}};
    return sha256_hex(body.dump());
  }

  json checks_json() const {
    json out = json::array();
    for (const auto& c : report.checks()) {
      out.push_back({{"name", c.name},
                     {"property", c.property},
                     {"pass", c.pass},
                     {"cases", c.cases},
                     {"failures", c.failures},
                     {"witness", c.witness}});
    }
    return out;
  }

  json structured() const {
    return {{"tool", tool},       {"spec", spec_name},         {"spec_digest", spec_digest},
            {"window", window},   {"checks", checks_json()},   {"passed", passed()},
            {"failed", report.failures().size()}, {"digest", digest()}};
  }

  std::string text() const {
    std::ostringstream out;
    out << tool << "\n";
    out << "spec: " << spec_name << "\n";
    out << "spec digest: " << spec_digest << "\n";
    out << "window:";
    for (const auto& w : window) out << " " << w;
    out << "\n";
    for (const auto& c : report.checks()) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << " [" << c.property << "] (" << c.cases << " cases)";
      if (!c.pass) out << " witness: " << c.witness;
      out << "\n";
    }
    out << "result: " << (passed() ? "pass" : "fail") << ", " << report.checks().size() << " checks, "
        << report.failures().size() << " failed\n";
    out << "report digest: " << digest() << "\n";
    return out.str();
  }
};

inline Window default_window(const Loaded& x) {
  if (x.window) return *x.window;
  const Group& g = x.structure.group();
  if (!g.finite()) throw SpecError("an infinite group needs a window");
  return Window::full(g);
}

// Hopf suite, integrals, grading, action and pairing checks as applicable.
inline Report verify_structure(const Loaded& x, const Window& w) {
  const MhaStructure& h = x.structure;
  Report rep;
  rep.append(hopf_suite(h, w));
  if (h.mode() == Mode::Cograded) rep.append(check_cograded(h, w), "grading");
  IntegralAnalysis ia = analyze_integrals(h, w);
  rep.append(ia.report, "integrals");
  if (h.has_star() && ia.left.dimension == 1) {
    rep.append(check_positive_up_to_scalar(h, ia.left.basis[0], w), "integrals");
  }
  if (x.action && h.mode() == Mode::Cograded) {
    const Action& a = *x.action;
    AdmissibilityCertificate cert = check_admissible(a, w);
    rep.append(cert.report, "action");
    if (cert.passed()) {
      if (a.rho().kind() == GroupSelfAction::Kind::Adjoint) rep.append(check_crossing(a, w), "crossing");
      MhaStructure t = deform(h, a, w);
      rep.append(hopf_suite(t, w), "deformed");
      if (ia.left.dimension == 1) {
        rep.append(is_left_invariant(t, ia.left.basis[0], w), "deformed.left integral");
      }
      if (ia.right.dimension == 1) {
        rep.append(is_right_invariant(t, deformed_right_integral(a, ia.right.basis[0]), w), "deformed.right integral");
      }
      if (a.rho().kind() == GroupSelfAction::Kind::Adjoint) rep.append(mirror_check(h, a, w), "mirror");
    }
  }
  if (x.pairing) {
    rep.append(check_pairing(*x.pairing), "pairing");
    rep.append(build_module_actions(*x.pairing).report, "modules");
  }
  return rep;
}

inline CertificateReport certify(const Loaded& x, const Window& w, Report rep) {
  CertificateReport c;
  c.spec_name = x.builtin.empty() ? x.structure.name() : "builtin:" + x.builtin;
  c.spec_digest = spec_digest(x);
  c.window = w.names();
  c.report = std::move(rep);
  return c;
}

inline CertificateReport run_verify(const Loaded& x, const std::optional<std::string>& window_text = std::nullopt) {
  Window w = window_text ? parse_window(x.structure.group(), *window_text) : default_window(x);
  return certify(x, w, verify_structure(x, w));
}

// The double as a spec: graded with its crossing when the action is one,
// otherwise a single component over the trivial group.
inline Loaded export_double(const DoubleStructure& d) {
  if (d.crossing()) {
    auto [graded, rep] = graded_double(d);
    if (!rep.passed()) throw StructureError("double does not split along its grading");
    return from_structure(graded, double_crossing(d, graded));
  }
  return from_structure(d.structure());
}

struct DoubleRun {
  CertificateReport construction;  // double axioms and integrals
  CertificateReport exported;      // the verify pipeline on the exported spec
  json doc;
  bool aborted = false;
};

inline Action resolve_action(const Loaded& pair, const std::string& action, const std::filesystem::path& base = {}) {
  const MhaStructure& b = pair.pairing->b;
  if (action == "trivial") return trivial_action(b);
  if (action == "adjoint") {
    if (pair.action && pair.action->rho().kind() == GroupSelfAction::Kind::Adjoint) return *pair.action;
    throw SpecError("the paired structure declares no adjoint action");
  }
  std::filesystem::path p(action);
  if (p.is_relative() && !base.empty()) p = base / p;
  json doc = read_json_file(p);
  if (doc.contains("action")) doc = doc.at("action");
  return in_section(p.string(), [&] { return action_from_json(b, doc); });
}

inline DoubleRun run_double(const Loaded& pair, const Action& act) {
  if (!pair.pairing) throw SpecError("the pair spec has no pairing section");
  const Group& g = pair.structure.group();
  Window w = Window::full(g);
  DoubleRun out;
  Report rep;
  AdmissibilityCertificate cert = check_admissible(act, w);
  rep.append(cert.report, "action");
  rep.append(check_pairing(*pair.pairing), "pairing");
  if (!rep.passed()) {
    out.aborted = true;
    out.construction = certify(pair, w, rep);
    return out;
  }
  DoubleStructure d = build_double(*pair.pairing, act);
  rep.append(build_module_actions(*pair.pairing).report, "modules");
  rep.append(check_double_axioms(d), "double");
  rep.append(double_right_integral(d).report, "double integral");
  out.construction = certify(pair, w, rep);
  out.construction.spec_name += " with " + act.name() + " action";
  Loaded ex = export_double(d);
  out.doc = ex.doc;
  out.exported = run_verify(ex);
  return out;
}

inline Loaded dual_spec(const Loaded& x) {
  bool cograded = x.structure.mode() == Mode::Cograded;
  ReducedDual rd = reduced_dual(x.structure, cograded ? x.action : std::nullopt);
  Loaded out;
  out.structure = rd.dual;
  out.pairing = rd.pairing;
  // The crossing stays on the cograded partner; the double derives pi' from it.
  if (cograded) out.action = x.action;
  json partner = x.builtin.empty() ? x.doc : json("builtin:" + x.builtin);
  out.doc = canonical_doc(out, partner);
  return out;
}

}  // namespace mhd::io
