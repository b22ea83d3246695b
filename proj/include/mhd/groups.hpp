#pragma once

// Group oracles, self-actions and finite windows into a group.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mhd {

using Elem = std::int64_t;

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Group {
 public:
  Group() : Group(trivial()) {}

  // Validates closure, identity, inverses and associativity of a Cayley
  // table given as table[a][b] = index of a*b.
  static Group from_table(std::string label, std::vector<std::string> names,
                          const std::vector<std::vector<std::size_t>>& table) {
    std::size_t n = names.size();
    if (n == 0) throw GroupError("group table is empty");
    if (table.size() != n) throw GroupError("group table has wrong number of rows");
    auto impl = std::make_shared<Impl>();
    impl->label = std::move(label);
    impl->finite = true;
    impl->names = std::move(names);
    impl->table.assign(n, std::vector<Elem>(n));
    for (std::size_t a = 0; a < n; ++a) {
      if (table[a].size() != n) throw GroupError("group table row " + std::to_string(a) + " has wrong length");
      for (std::size_t b = 0; b < n; ++b) {
        if (table[a][b] >= n) {
          throw GroupError("product " + impl->names[a] + "*" + impl->names[b] + " is not a group element");
        }
        impl->table[a][b] = static_cast<Elem>(table[a][b]);
      }
    }
    std::optional<Elem> e;
    for (std::size_t c = 0; c < n && !e; ++c) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) {
        ok = impl->table[c][x] == static_cast<Elem>(x) && impl->table[x][c] == static_cast<Elem>(x);
      }
      if (ok) e = static_cast<Elem>(c);
    }
    if (!e) throw GroupError("group table has no identity");
    impl->identity = *e;
    impl->inverses.assign(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (impl->table[a][b] == *e && impl->table[b][a] == *e) impl->inverses[a] = static_cast<Elem>(b);
      }
      if (impl->inverses[a] < 0) throw GroupError("element " + impl->names[a] + " has no inverse");
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          Elem left = impl->table[impl->table[a][b]][c];
          Elem right = impl->table[a][impl->table[b][c]];
          if (left != right) {
            throw GroupError("associativity fails at (" + impl->names[a] + ", " + impl->names[b] + ", " +
                             impl->names[c] + ")");
          }
        }
      }
    }
    for (std::size_t a = 0; a < n; ++a) impl->index[impl->names[a]] = static_cast<Elem>(a);
    if (impl->index.size() != n) throw GroupError("group element names are not distinct");
    return Group(std::move(impl));
  }

  // Group of permutations under composition (p*q)(x) = p(q(x)).
  static Group from_permutations(std::string label, std::vector<std::string> names,
                                 const std::vector<std::vector<int>>& perms) {
    std::size_t n = perms.size();
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        std::vector<int> c(perms[b].size());
        for (std::size_t x = 0; x < c.size(); ++x) c[x] = perms[a].at(static_cast<std::size_t>(perms[b][x]));
        auto it = std::find(perms.begin(), perms.end(), c);
        if (it == perms.end()) throw GroupError("permutations are not closed under composition");
        table[a][b] = static_cast<std::size_t>(it - perms.begin());
      }
    }
    return from_table(std::move(label), std::move(names), table);
  }

  static Group cyclic(std::size_t n) {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a) {
      names.push_back(a == 0 ? "e" : "g" + (a == 1 ? std::string() : std::to_string(a)));
      for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    }
    return from_table("Z" + std::to_string(n), std::move(names), table);
  }

  // S3 acting on {0,1,2}.
  static Group symmetric3() {
    return from_permutations("S3", {"e", "(12)", "(13)", "(23)", "(123)", "(132)"},
                             {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}});
  }

  static Group trivial() {
    static const Group g = from_table("1", {"e"}, {{0}});
    return g;
  }

  static Group integers() {
    static const Group g = [] {
      auto impl = std::make_shared<Impl>();
      impl->label = "Z";
      impl->finite = false;
      impl->identity = 0;
      return Group(std::move(impl));
    }();
    return g;
  }

  const std::string& label() const { return impl_->label; }
  bool finite() const { return impl_->finite; }
  std::size_t order() const {
    if (!finite()) throw GroupError("group " + label() + " is infinite");
    return impl_->names.size();
  }
  Elem identity() const { return impl_->identity; }

  Elem mul(Elem a, Elem b) const {
    if (!finite()) return a + b;
    return impl_->table.at(check(a)).at(check(b));
  }
  Elem inv(Elem a) const {
    if (!finite()) return -a;
    return impl_->inverses.at(check(a));
  }
  Elem conj(Elem p, Elem q) const { return mul(mul(p, q), inv(p)); }

  bool contains(Elem a) const {
    return !finite() || (a >= 0 && static_cast<std::size_t>(a) < impl_->names.size());
  }

  std::vector<Elem> elements() const {
    std::vector<Elem> out(order());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<Elem>(k);
    return out;
  }

  std::string name(Elem a) const {
    if (!finite()) return std::to_string(a);
    return impl_->names.at(check(a));
  }
  Elem parse(const std::string& s) const {
    if (!finite()) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(s, &used);
      } catch (const std::exception&) {
        throw GroupError("not an integer: " + s);
      }
      if (used != s.size()) throw GroupError("not an integer: " + s);
      return static_cast<Elem>(v);
    }
    auto it = impl_->index.find(s);
    if (it == impl_->index.end()) throw GroupError("unknown element '" + s + "' of " + label());
    return it->second;
  }

  const std::vector<std::string>& names() const { return impl_->names; }
  const std::vector<std::vector<Elem>>& table() const { return impl_->table; }

  bool same(const Group& other) const {
    if (impl_ == other.impl_) return true;
    return impl_->finite == other.impl_->finite && impl_->names == other.impl_->names &&
           impl_->table == other.impl_->table;
  }

 private:
  struct Impl {
    std::string label;
    bool finite = true;
    std::vector<std::string> names;
    std::vector<std::vector<Elem>> table;
    std::vector<Elem> inverses;
    std::map<std::string, Elem> index;
    Elem identity = 0;
  };

  explicit Group(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::size_t check(Elem a) const {
    if (!contains(a)) throw GroupError("element index out of range for " + label());
    return static_cast<std::size_t>(a);
  }

  std::shared_ptr<const Impl> impl_;
};

// Finite set of group elements containing e and closed under inverse.
class Window {
 public:
  Window() = default;

  static Window of(const Group& g, std::vector<Elem> elems) {
    std::vector<Elem> uniq;
    for (Elem x : elems) {
      if (!g.contains(x)) throw GroupError("window element outside the group");
      if (std::find(uniq.begin(), uniq.end(), x) == uniq.end()) uniq.push_back(x);
    }
    auto has = [&](Elem x) { return std::find(uniq.begin(), uniq.end(), x) != uniq.end(); };
    if (!has(g.identity())) throw GroupError("window does not contain the identity");
    for (Elem x : uniq) {
      if (!has(g.inv(x))) throw GroupError("window not closed under inverse at " + g.name(x));
    }
    Window w;
    w.group_ = g;
    w.elems_ = std::move(uniq);
    return w;
  }
  static Window full(const Group& g) { return of(g, g.elements()); }
  static Window range(const Group& g, Elem lo, Elem hi) {
    if (g.finite()) throw GroupError("range windows need the integer group");
    std::vector<Elem> xs;
    for (Elem x = lo; x <= hi; ++x) xs.push_back(x);
    return of(g, xs);
  }

  const Group& group() const { return group_; }
  const std::vector<Elem>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(Elem x) const { return std::find(elems_.begin(), elems_.end(), x) != elems_.end(); }
  bool contains(const std::optional<Elem>& x) const { return x && contains(*x); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (Elem x : elems_) out.push_back(group_.name(x));
    return out;
  }

 private:
  Group group_;
  std::vector<Elem> elems_;
};

// Left action of G on its own underlying set, q -> rho_p(q).
class GroupSelfAction {
 public:
  enum class Kind { Trivial, Adjoint, Table };

  GroupSelfAction() : GroupSelfAction(Group::trivial(), Kind::Trivial, {}) {}

  static GroupSelfAction trivial(const Group& g) { return GroupSelfAction(g, Kind::Trivial, {}); }
  static GroupSelfAction adjoint(const Group& g) { return GroupSelfAction(g, Kind::Adjoint, {}); }
  // table[p][q] = rho_p(q)
  static GroupSelfAction from_table(const Group& g, std::vector<std::vector<Elem>> table) {
    if (!g.finite()) throw GroupError("tabulated actions need a finite group");
    if (table.size() != g.order()) throw GroupError("action table has wrong size");
    for (const auto& row : table) {
      if (row.size() != g.order()) throw GroupError("action table row has wrong size");
      for (Elem x : row) {
        if (!g.contains(x)) throw GroupError("action table entry outside the group");
      }
    }
    return GroupSelfAction(g, Kind::Table, std::move(table));
  }

  const Group& group() const { return group_; }
  Kind kind() const { return kind_; }
  std::string name() const {
    switch (kind_) {
      case Kind::Trivial:
        return "trivial";
      case Kind::Adjoint:
        return "adjoint";
      case Kind::Table:
        return "table";
    }
    return "table";
  }
  const std::vector<std::vector<Elem>>& table() const { return table_; }

  Elem operator()(Elem p, Elem q) const {
    switch (kind_) {
      case Kind::Trivial:
        return q;
      case Kind::Adjoint:
        return group_.conj(p, q);
      case Kind::Table:
        return table_.at(static_cast<std::size_t>(p)).at(static_cast<std::size_t>(q));
    }
    return q;
  }

  // The q with rho_q(p) * q = s, if one exists.
  std::optional<Elem> solve_right(Elem p, Elem s) const {
    switch (kind_) {
      case Kind::Trivial:
        return group_.mul(group_.inv(p), s);
      case Kind::Adjoint:
        return group_.mul(s, group_.inv(p));
      case Kind::Table:
        for (Elem q : group_.elements()) {
          if (group_.mul((*this)(q, p), q) == s) return q;
        }
        return std::nullopt;
    }
    return std::nullopt;
  }

  // The self-action on labels after regrading every label by inversion.
  GroupSelfAction inverted_labels() const {
    if (kind_ != Kind::Table) return *this;
    std::vector<std::vector<Elem>> t(group_.order(), std::vector<Elem>(group_.order()));
    for (Elem p : group_.elements()) {
      for (Elem q : group_.elements()) {
        t[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = group_.inv((*this)(p, group_.inv(q)));
      }
    }
    return from_table(group_, std::move(t));
  }

 private:
  GroupSelfAction(Group g, Kind k, std::vector<std::vector<Elem>> table)
      : group_(std::move(g)), kind_(k), table_(std::move(table)) {}

  Group group_;
  Kind kind_;
  std::vector<std::vector<Elem>> table_;
};

}  // namespace mhd
