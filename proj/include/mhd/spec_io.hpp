#pragma once

// JSON spec files: load, canonical export, SHA-256 digests and built-ins.

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhd/double.hpp"

namespace mhd::io {

using json = nlohmann::json;

inline constexpr const char* kFormat = "mhd-spec/1";

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int k = 0; k < len; ++k) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return out.str();
}

// Runs f and prefixes any failure with the section it came from.
template <class F>
auto in_section(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError& e) {
    throw SpecError(where + ": " + e.what());
  } catch (const std::exception& e) {
    throw SpecError(where + ": " + e.what());
  }
}

inline json scalar_to_json(const Scalar& s) { return s.str(); }

inline Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  throw SpecError("scalar must be a string or an integer, got " + j.dump());
}

inline json matrix_to_json(const Matrix& m) {
  json e = json::array();
  for (const auto& [r, c, v] : m.triplets()) e.push_back(json::array({r, c, v.str()}));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

// Accepts the sparse object form or a dense array of rows.
inline Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (j.is_array()) {
    if (j.size() != rows) throw SpecError("dense matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    std::vector<std::vector<Scalar>> d;
    for (const auto& row : j) {
      if (!row.is_array() || row.size() != cols) throw SpecError("dense matrix row has wrong length");
      std::vector<Scalar> xs;
      for (const auto& x : row) xs.push_back(scalar_from_json(x));
      d.push_back(std::move(xs));
    }
    if (rows == 0) return Matrix::from_triplets(0, cols, {});
    return Matrix::from_dense(d);
  }
  if (!j.is_object()) throw SpecError("matrix must be an object or an array");
  std::size_t r = j.at("rows").get<std::size_t>();
  std::size_t c = j.at("cols").get<std::size_t>();
  if (r != rows || c != cols) {
    throw SpecError("matrix is " + std::to_string(r) + "x" + std::to_string(c) + ", expected " + std::to_string(rows) +
                    "x" + std::to_string(cols));
  }
  std::vector<Matrix::Triplet> t;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw SpecError("matrix entry must be [row, col, value]");
    std::size_t i = e[0].get<std::size_t>();
    std::size_t k = e[1].get<std::size_t>();
    if (i >= r || k >= c) throw SpecError("matrix entry out of range");
    t.emplace_back(i, k, scalar_from_json(e[2]));
  }
  return Matrix::from_triplets(r, c, std::move(t));
}

inline json vec_to_json(const Vec& v) {
  json e = json::array();
  for (const auto& [k, x] : v.entries()) e.push_back(json::array({k, x.str()}));
  return {{"size", v.size()}, {"entries", e}};
}

inline Vec vec_from_json(const json& j, std::size_t size) {
  if (j.is_array()) {
    if (j.size() != size) throw SpecError("dense vector has wrong length");
    std::vector<Scalar> xs;
    for (const auto& x : j) xs.push_back(scalar_from_json(x));
    if (size == 0) return Vec(0);
    return Vec::from_dense(xs);
  }
  if (j.at("size").get<std::size_t>() != size) throw SpecError("vector has wrong length");
  std::vector<Vec::Entry> es;
  for (const auto& e : j.at("entries")) {
    std::size_t k = e.at(0).get<std::size_t>();
    if (k >= size) throw SpecError("vector entry out of range");
    es.emplace_back(k, scalar_from_json(e.at(1)));
  }
  return Vec::from_entries(size, std::move(es));
}

inline json group_to_json(const Group& g) {
  if (!g.finite()) return {{"builtin", "integers"}};
  json table = json::array();
  for (const auto& row : g.table()) table.push_back(row);
  return {{"label", g.label()}, {"elements", g.names()}, {"table", table}};
}

inline Group group_from_json(const json& j) {
  if (j.contains("builtin")) {
    std::string b = j.at("builtin").get<std::string>();
    if (b == "integers") return Group::integers();
    throw SpecError("unknown builtin group '" + b + "'");
  }
  auto names = j.at("elements").get<std::vector<std::string>>();
  auto table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
  return Group::from_table(j.value("label", std::string("G")), names, table);
}

inline Elem element_from_json(const Group& g, const json& j) {
  if (j.is_string()) return g.parse(j.get<std::string>());
  if (j.is_number_integer() && !g.finite()) return j.get<Elem>();
  throw SpecError("group element must be given by name, got " + j.dump());
}

inline json element_to_json(const Group& g, Elem p) { return g.name(p); }

inline json rho_to_json(const GroupSelfAction& rho) {
  if (rho.kind() == GroupSelfAction::Kind::Trivial) return "trivial";
  if (rho.kind() == GroupSelfAction::Kind::Adjoint) return "adjoint";
  const Group& g = rho.group();
  json t = json::array();
  for (const auto& row : rho.table()) {
    json r = json::array();
    for (Elem x : row) r.push_back(g.name(x));
    t.push_back(r);
  }
  return {{"table", t}};
}

inline GroupSelfAction rho_from_json(const Group& g, const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "trivial") return GroupSelfAction::trivial(g);
    if (s == "adjoint") return GroupSelfAction::adjoint(g);
    throw SpecError("unknown self-action '" + s + "'");
  }
  std::vector<std::vector<Elem>> t;
  for (const auto& row : j.at("table")) {
    std::vector<Elem> r;
    for (const auto& x : row) r.push_back(element_from_json(g, x));
    t.push_back(std::move(r));
  }
  return GroupSelfAction::from_table(g, std::move(t));
}

// A loaded spec: the structure with its optional action, pairing and window.
struct Loaded {
  std::string builtin;  // set for built-ins
  json doc;             // canonical document
  MhaStructure structure;
  std::optional<Action> action;
  std::optional<Pairing> pairing;
  std::optional<Window> window;
};

inline std::string spec_digest(const Loaded& x) { return sha256_hex(x.doc.dump()); }

inline json typing_to_json(const MhaStructure& h) {
  const Group& g = h.group();
  bool standard = true;
  bool diagonal = true;
  for (Elem p : g.elements()) {
    for (Elem q : g.elements()) {
      auto s = h.source(p, q);
      standard = standard && s == g.mul(p, q);
      diagonal = diagonal && (p == q ? s == p : !s.has_value());
    }
  }
  if (standard) return "standard";
  if (diagonal) return "diagonal";
  json t = json::array();
  for (Elem p : g.elements()) {
    json row = json::array();
    for (Elem q : g.elements()) {
      auto s = h.source(p, q);
      row.push_back(s ? json(g.name(*s)) : json(nullptr));
    }
    t.push_back(row);
  }
  return {{"table", t}};
}

inline CoproductTyping typing_from_json(const Group& g, const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "standard") return CoproductTyping::standard(g);
    if (s == "diagonal") return CoproductTyping::diagonal(g);
    throw SpecError("unknown coproduct typing '" + s + "'");
  }
  if (!g.finite()) throw SpecError("tabulated typings need a finite group");
  auto src = std::make_shared<std::map<std::pair<Elem, Elem>, Elem>>();
  const json& t = j.at("table");
  for (Elem p : g.elements()) {
    for (Elem q : g.elements()) {
      const json& x = t.at(static_cast<std::size_t>(p)).at(static_cast<std::size_t>(q));
      if (!x.is_null()) (*src)[{p, q}] = element_from_json(g, x);
    }
  }
  CoproductTyping c;
  c.name = "table";
  c.source = [src](Elem p, Elem q) -> std::optional<Elem> {
    auto it = src->find({p, q});
    if (it == src->end()) return std::nullopt;
    return it->second;
  };
  c.left_partner = [src](Elem s, Elem q) -> std::optional<Elem> {
    for (const auto& [k, v] : *src) {
      if (k.second == q && v == s) return k.first;
    }
    return std::nullopt;
  };
  c.right_partner = [src](Elem s, Elem p) -> std::optional<Elem> {
    for (const auto& [k, v] : *src) {
      if (k.first == p && v == s) return k.second;
    }
    return std::nullopt;
  };
  return c;
}

inline json action_to_json(const Action& a) {
  const Group& g = a.base().group();
  json maps = json::array();
  for (Elem p : g.elements()) {
    for (Elem q : g.elements()) {
      maps.push_back({{"p", g.name(p)}, {"q", g.name(q)}, {"matrix", matrix_to_json(a.pi(p, q))}});
    }
  }
  return {{"name", a.name()}, {"rho", rho_to_json(a.rho())}, {"maps", maps}};
}

inline Action action_from_json(const MhaStructure& h, const json& j) {
  const Group& g = h.group();
  GroupSelfAction rho = in_section("action.rho", [&] { return rho_from_json(g, j.at("rho")); });
  auto blocks = std::make_shared<std::map<std::pair<Elem, Elem>, Matrix>>();
  if (!g.finite()) throw SpecError("action: tabulated actions need a finite group");
  std::size_t k = 0;
  for (const auto& e : j.at("maps")) {
    in_section("action.maps[" + std::to_string(k++) + "]", [&] {
      Elem p = element_from_json(g, e.at("p"));
      Elem q = element_from_json(g, e.at("q"));
      (*blocks)[{p, q}] = matrix_from_json(e.at("matrix"), h.dim(rho(p, q)), h.dim(q));
      return 0;
    });
  }
  for (Elem p : g.elements()) {
    for (Elem q : g.elements()) {
      if (!blocks->count({p, q})) {
        throw SpecError("action: missing map (" + g.name(p) + ", " + g.name(q) + ")");
      }
    }
  }
  return Action(h, rho, [blocks](Elem p, Elem q) { return blocks->at({p, q}); }, j.value("name", std::string("action")));
}

// Finite structures only; the window is recorded when given.
inline json structure_to_json(const MhaStructure& h) {
  const Group& g = h.group();
  if (!g.finite()) throw SpecError("only structures over finite groups can be exported");
  const GradedAlgebra& alg = h.algebra();
  json doc;
  doc["format"] = kFormat;
  doc["name"] = h.name();
  doc["group"] = group_to_json(g);
  doc["mode"] = mode_name(h.mode());
  doc["typing"] = typing_to_json(h);
  json comps = json::array();
  json prods = json::array();
  json cops = json::array();
  json counit = json::array();
  json antipode = json::array();
  for (Elem p : g.elements()) {
    json c = {{"element", g.name(p)}, {"dim", h.dim(p)}};
    const auto& u = alg.unit(p);
    c["unit"] = u ? vec_to_json(*u) : json(nullptr);
    if (h.has_star()) {
      const StarBlock& s = alg.star(p);
      c["star"] = {{"target", g.name(s.target)}, {"antilinear", s.star.antilinear}, {"matrix", matrix_to_json(s.star.matrix)}};
    }
    comps.push_back(c);
    for (Elem q : g.elements()) {
      if (alg.product_target(p, q)) {
        const Matrix& m = alg.product(p, q);
        if (!m.is_zero()) prods.push_back({{"p", g.name(p)}, {"q", g.name(q)}, {"matrix", matrix_to_json(m)}});
      }
      if (h.source(p, q)) {
        const Matrix& m = h.delta(p, q);
        if (!m.is_zero()) cops.push_back({{"p", g.name(p)}, {"q", g.name(q)}, {"matrix", matrix_to_json(m)}});
      }
    }
    if (!h.counit(p).is_zero()) counit.push_back({{"element", g.name(p)}, {"vector", vec_to_json(h.counit(p))}});
    antipode.push_back({{"element", g.name(p)},
                        {"target", g.name(h.antipode_target(p))},
                        {"matrix", matrix_to_json(h.antipode(p))}});
  }
  doc["components"] = comps;
  doc["products"] = prods;
  doc["coproducts"] = cops;
  doc["counit"] = counit;
  doc["antipode"] = antipode;
  return doc;
}

inline MhaStructure structure_from_json(const json& doc) {
  if (doc.value("format", std::string()) != kFormat) throw SpecError("format: expected \"" + std::string(kFormat) + "\"");
  Group g = in_section("group", [&] { return group_from_json(doc.at("group")); });
  if (!g.finite()) throw SpecError("group: infinite groups are available only through built-ins");
  std::string mode = doc.at("mode").get<std::string>();
  if (mode != "cograded" && mode != "graded") throw SpecError("mode: expected \"cograded\" or \"graded\"");
  Mode md = mode == "cograded" ? Mode::Cograded : Mode::Graded;
  CoproductTyping typing = in_section("typing", [&] { return typing_from_json(g, doc.value("typing", json("standard"))); });

  struct Data {
    std::map<Elem, std::size_t> dim;
    std::map<Elem, std::optional<Vec>> unit;
    std::map<Elem, StarBlock> star;
    std::map<std::pair<Elem, Elem>, Matrix> prod;
    std::map<std::pair<Elem, Elem>, Matrix> cop;
    std::map<Elem, Vec> counit;
    std::map<Elem, Elem> s_target;
    std::map<Elem, Elem> s_source;
    std::map<Elem, Matrix> antipode;
  };
  auto d = std::make_shared<Data>();
  bool has_star = false;
  std::size_t k = 0;
  for (const auto& c : doc.at("components")) {
    in_section("components[" + std::to_string(k++) + "]", [&] {
      Elem p = element_from_json(g, c.at("element"));
      d->dim[p] = c.at("dim").get<std::size_t>();
      return 0;
    });
  }
  for (Elem p : g.elements()) {
    if (!d->dim.count(p)) throw SpecError("components: missing element " + g.name(p));
  }
  k = 0;
  for (const auto& c : doc.at("components")) {
    in_section("components[" + std::to_string(k++) + "]", [&] {
      Elem p = element_from_json(g, c.at("element"));
      std::size_t n = d->dim[p];
      if (c.contains("unit") && !c.at("unit").is_null()) d->unit[p] = vec_from_json(c.at("unit"), n);
      else d->unit[p] = std::nullopt;
      if (c.contains("star")) {
        has_star = true;
        const json& s = c.at("star");
        Elem t = element_from_json(g, s.at("target"));
        d->star[p] = StarBlock{t, Star{matrix_from_json(s.at("matrix"), d->dim[t], n), s.value("antilinear", true)}};
      }
      return 0;
    });
  }
  if (has_star && d->star.size() != g.order()) throw SpecError("components: star given on some components only");
  auto load_blocks = [&](const char* section, std::map<std::pair<Elem, Elem>, Matrix>& into, bool coproduct) {
    std::size_t idx = 0;
    for (const auto& e : doc.value(section, json::array())) {
      in_section(std::string(section) + "[" + std::to_string(idx++) + "]", [&] {
        Elem p = element_from_json(g, e.at("p"));
        Elem q = element_from_json(g, e.at("q"));
        if (coproduct) {
          auto s = typing.source(p, q);
          if (!s) throw SpecError("no coproduct block at this pair under the typing");
          into[{p, q}] = matrix_from_json(e.at("matrix"), d->dim[p] * d->dim[q], d->dim[*s]);
        } else {
          Elem t = md == Mode::Cograded ? p : g.mul(p, q);
          if (md == Mode::Cograded && p != q) throw SpecError("cograded products live on the diagonal");
          into[{p, q}] = matrix_from_json(e.at("matrix"), d->dim[t], d->dim[p] * d->dim[q]);
        }
        return 0;
      });
    }
  };
  load_blocks("products", d->prod, false);
  load_blocks("coproducts", d->cop, true);
  k = 0;
  for (const auto& e : doc.value("counit", json::array())) {
    in_section("counit[" + std::to_string(k++) + "]", [&] {
      Elem p = element_from_json(g, e.at("element"));
      d->counit[p] = vec_from_json(e.at("vector"), d->dim[p]);
      return 0;
    });
  }
  k = 0;
  for (const auto& e : doc.at("antipode")) {
    in_section("antipode[" + std::to_string(k++) + "]", [&] {
      Elem p = element_from_json(g, e.at("element"));
      Elem t = element_from_json(g, e.at("target"));
      d->s_target[p] = t;
      if (d->s_source.count(t)) throw SpecError("two antipode blocks share a target");
      d->s_source[t] = p;
      d->antipode[p] = matrix_from_json(e.at("matrix"), d->dim[t], d->dim[p]);
      return 0;
    });
  }
  for (Elem p : g.elements()) {
    if (!d->antipode.count(p)) throw SpecError("antipode: missing block for " + g.name(p));
  }

  GradedAlgebra::Definition a;
  a.group = g;
  a.mode = md;
  a.dim = [d](Elem p) { return d->dim.at(p); };
  a.product = [d, md, g](Elem p, Elem q) {
    auto it = d->prod.find({p, q});
    if (it != d->prod.end()) return it->second;
    Elem t = md == Mode::Cograded ? p : g.mul(p, q);
    return Matrix::from_triplets(d->dim.at(t), d->dim.at(p) * d->dim.at(q), {});
  };
  a.unit = [d](Elem p) { return d->unit.at(p); };
  if (has_star) a.star = [d](Elem p) { return d->star.at(p); };
  MhaStructure::Definition def;
  def.name = doc.value("name", std::string("spec"));
  def.algebra = GradedAlgebra(std::move(a));
  def.typing = typing;
  def.delta = [d, typing](Elem p, Elem q) {
    auto it = d->cop.find({p, q});
    if (it != d->cop.end()) return it->second;
    Elem s = *typing.source(p, q);
    return Matrix::from_triplets(d->dim.at(p) * d->dim.at(q), d->dim.at(s), {});
  };
  def.counit = [d](Elem p) {
    auto it = d->counit.find(p);
    return it != d->counit.end() ? it->second : Vec(d->dim.at(p));
  };
  def.antipode_target = [d](Elem p) { return d->s_target.at(p); };
  def.antipode_source = [d](Elem t) { return d->s_source.at(t); };
  def.antipode = [d](Elem p) { return d->antipode.at(p); };
  return MhaStructure(std::move(def));
}

// Window from "lo..hi" (integers) or comma-separated element names.
inline Window parse_window(const Group& g, const std::string& text) {
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    if (g.finite()) throw SpecError("range windows need the integer group");
    Elem lo = g.parse(text.substr(0, dots));
    Elem hi = g.parse(text.substr(dots + 2));
    return Window::range(g, lo, hi);
  }
  std::vector<Elem> xs;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) xs.push_back(g.parse(part));
  }
  return Window::of(g, xs);
}

Loaded builtin(const std::string& name);
Loaded load_source(const std::string& source, const std::filesystem::path& base = {});

namespace detail {

inline json pairing_to_json(const Loaded& self, const Pairing& p, const json& partner) {
  const Group& g = self.structure.group();
  json forms = json::array();
  for (Elem x : g.elements()) forms.push_back({{"element", g.name(x)}, {"matrix", matrix_to_json(p.form(x))}});
  return {{"partner", partner}, {"forms", forms}};
}

}  // namespace detail

// Re-exports a loaded structure with its sections in canonical form.
inline json canonical_doc(const Loaded& x, const json& partner_ref = nullptr) {
  json doc = structure_to_json(x.structure);
  // A paired graded side carries its partner's action; the partner records it.
  if (x.action && !(x.pairing && x.structure.mode() == Mode::Graded)) doc["action"] = action_to_json(*x.action);
  if (x.window) doc["window"] = x.window->names();
  if (x.pairing) doc["pairing"] = detail::pairing_to_json(x, *x.pairing, partner_ref);
  return doc;
}

inline Loaded load_json(const json& doc, const std::filesystem::path& base = {}) {
  Loaded x;
  x.structure = structure_from_json(doc);
  const Group& g = x.structure.group();
  if (doc.contains("action") && !doc.at("action").is_null()) {
    x.action = in_section("action", [&] { return action_from_json(x.structure, doc.at("action")); });
  }
  if (doc.contains("window") && !doc.at("window").is_null()) {
    x.window = in_section("window", [&] {
      std::vector<Elem> xs;
      for (const auto& e : doc.at("window")) xs.push_back(element_from_json(g, e));
      return Window::of(g, xs);
    });
  }
  json partner_ref = nullptr;
  if (doc.contains("pairing") && !doc.at("pairing").is_null()) {
    const json& pj = doc.at("pairing");
    Loaded partner = in_section("pairing.partner", [&] {
      const json& pr = pj.at("partner");
      if (pr.is_string()) return load_source(pr.get<std::string>(), base);
      return load_json(pr, base);
    });
    partner_ref = pj.at("partner").is_string() && pj.at("partner").get<std::string>().rfind("builtin:", 0) == 0
                      ? pj.at("partner")
                      : partner.doc;
    if (!partner.structure.group().same(g)) throw SpecError("pairing.partner: lives over a different group");
    if (partner.structure.mode() == x.structure.mode()) throw SpecError("pairing.partner: needs the opposite mode");
    auto forms = std::make_shared<std::map<Elem, Matrix>>();
    const MhaStructure& a = x.structure.mode() == Mode::Graded ? x.structure : partner.structure;
    const MhaStructure& b = x.structure.mode() == Mode::Graded ? partner.structure : x.structure;
    std::size_t k = 0;
    for (const auto& e : pj.at("forms")) {
      in_section("pairing.forms[" + std::to_string(k++) + "]", [&] {
        Elem p = element_from_json(g, e.at("element"));
        (*forms)[p] = matrix_from_json(e.at("matrix"), a.dim(p), b.dim(p));
        return 0;
      });
    }
    for (Elem p : g.elements()) {
      if (!forms->count(p)) throw SpecError("pairing.forms: missing form for " + g.name(p));
    }
    x.pairing = Pairing{"<" + a.name() + ", " + b.name() + ">", a, b, [forms](Elem p) { return forms->at(p); }};
    // The partner's action comes along for the double.
    if (partner.action && !x.action && x.structure.mode() == Mode::Graded) {
      x.action = Action(b, partner.action->rho(), [pa = *partner.action](Elem p, Elem q) { return pa.pi(p, q); },
                        partner.action->name());
    }
  }
  x.doc = canonical_doc(x, partner_ref);
  return x;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

inline Loaded load_source(const std::string& source, const std::filesystem::path& base) {
  if (source.rfind("builtin:", 0) == 0) return builtin(source.substr(8));
  std::filesystem::path p(source);
  if (p.is_relative() && !base.empty()) p = base / p;
  json doc = read_json_file(p);
  try {
    return load_json(doc, p.parent_path());
  } catch (const SpecError& e) {
    throw SpecError(p.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw SpecError(p.string() + ": " + e.what());
  }
}

inline void save_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write " + path.string());
  out << doc.dump(1) << "\n";
}

inline Loaded from_structure(const MhaStructure& h, std::optional<Action> act = std::nullopt) {
  Loaded x;
  x.structure = h;
  x.action = std::move(act);
  x.doc = canonical_doc(x);
  return x;
}

inline std::vector<std::string> builtin_names() {
  return {"kg-s3",         "kg-z2", "kg-integers",  "group-algebra-s3", "ga-z2", "constant-cz2-s3",
          "pairing-gacs3", "pairing-gacz2"};
}

inline Loaded builtin(const std::string& name) {
  auto tag = [&](Loaded x) {
    x.builtin = name;
    return x;
  };
  auto pairing_of = [&](const Group& g) {
    Loaded kg = builtin(g.order() == 6 ? "kg-s3" : "kg-z2");
    Loaded x;
    x.structure = make_group_algebra(g);
    x.pairing = Pairing{"<C[G], K(G)>", x.structure, kg.structure, [](Elem) { return Matrix::identity(1); }};
    x.action = kg.action;
    x.doc = canonical_doc(x, json("builtin:" + kg.builtin));
    return x;
  };
  if (name == "kg-s3" || name == "kg-z2") {
    MhaStructure kg = make_kg(name == "kg-s3" ? Group::symmetric3() : Group::cyclic(2));
    return tag(from_structure(kg, kg_adjoint_action(kg)));
  }
  if (name == "kg-integers") {
    Group z = Group::integers();
    MhaStructure kz = make_kg(z);
    Loaded x;
    x.builtin = name;
    x.structure = kz;
    x.action = Action(kz, GroupSelfAction::adjoint(z), [](Elem, Elem) { return Matrix::identity(1); }, "adjoint");
    x.window = Window::range(z, -5, 5);
    x.doc = {{"format", kFormat}, {"builtin", name}};
    return x;
  }
  if (name == "group-algebra-s3") return tag(from_structure(make_group_algebra(Group::symmetric3())));
  if (name == "ga-z2") return tag(from_structure(make_group_algebra(Group::cyclic(2))));
  if (name == "constant-cz2-s3") {
    MhaStructure cz2 = from_flat(flatten(make_group_algebra(Group::cyclic(2))));
    MhaStructure fam = make_constant_family(cz2, Group::symmetric3());
    return tag(from_structure(fam, constant_adjoint_action(fam)));
  }
  if (name == "pairing-gacs3") return tag(pairing_of(Group::symmetric3()));
  if (name == "pairing-gacz2") return tag(pairing_of(Group::cyclic(2)));
  throw SpecError("unknown builtin '" + name + "'");
}

}  // namespace mhd::io
