#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace mhd {

struct CheckResult {
  std::string name;
  std::string property;  // the law being tested, written as a formula
  bool pass = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string witness;  // first failing instance, empty on success
};

class Report {
 public:
  void add(CheckResult r) { checks_.push_back(std::move(r)); }

  void add(std::string name, std::string property, bool pass, std::string witness = {},
           std::size_t cases = 1) {
    CheckResult r;
    r.name = std::move(name);
    r.property = std::move(property);
    r.pass = pass;
    r.cases = cases;
    r.failures = pass ? 0 : 1;
    r.witness = std::move(witness);
    checks_.push_back(std::move(r));
  }

  void append(const Report& other, const std::string& prefix = {}) {
    for (CheckResult r : other.checks_) {
      if (!prefix.empty()) r.name = prefix + "." + r.name;
      checks_.push_back(std::move(r));
    }
  }

  bool passed() const {
    for (const auto& c : checks_) {
      if (!c.pass) return false;
    }
    return true;
  }

  const std::vector<CheckResult>& checks() const { return checks_; }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks_) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  std::vector<CheckResult> failures() const {
    std::vector<CheckResult> out;
    for (const auto& c : checks_) {
      if (!c.pass) out.push_back(c);
    }
    return out;
  }

  std::string summary() const {
    std::string out;
    for (const auto& c : checks_) {
      out += (c.pass ? "PASS " : "FAIL ") + c.name + " (" + std::to_string(c.cases) + " cases)";
      if (!c.pass) out += ": " + c.witness;
      out += "\n";
    }
    return out;
  }

 private:
  std::vector<CheckResult> checks_;
};

// Counts cases for one named check and remembers the first failure.
class Tally {
 public:
  Tally(std::string name, std::string property) {
    r_.name = std::move(name);
    r_.property = std::move(property);
  }

  void ok() { ++r_.cases; }
  void fail(const std::string& witness) {
    ++r_.cases;
    ++r_.failures;
    if (r_.pass) r_.witness = witness;
    r_.pass = false;
  }
  void expect(bool good, const std::string& witness) {
    if (good) {
      ok();
    } else {
      fail(witness);
    }
  }
  bool passed() const { return r_.pass; }
  std::size_t cases() const { return r_.cases; }

  CheckResult result() const {
    CheckResult out = r_;
    if (out.failures > 1) out.witness += " (+" + std::to_string(out.failures - 1) + " more)";
    return out;
  }
  void into(Report& report) const { report.add(result()); }

 private:
  CheckResult r_;
};

}  // namespace mhd
