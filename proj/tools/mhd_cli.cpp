#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mhd/pipeline.hpp"

namespace {

using mhd::io::CertificateReport;

void emit(const CertificateReport& r, const std::string& format, const std::string& path) {
  std::string body = format == "structured" ? r.structured().dump(1) + "\n" : r.text();
  std::cout << body;
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw mhd::io::SpecError("cannot write " + path);
    out << body;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of group-cograded multiplier Hopf algebras and their doubles"};
  app.require_subcommand(1);

  std::string spec;
  std::string window;
  std::string report_path;
  std::string format = "text";
  auto* verify = app.add_subcommand("verify", "run every applicable check on a spec");
  verify->add_option("spec", spec, "spec file or builtin:<name>")->required();
  verify->add_option("--window", window, "lo..hi for integers, or comma-separated element names");
  verify->add_option("--report", report_path, "also write the report to this file");
  verify->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));

  std::string pair;
  std::string action = "trivial";
  std::string out_path;
  auto* dbl = app.add_subcommand("double", "build the twisted double of a pairing and export it");
  dbl->add_option("--pair", pair, "paired spec, or A,B with the pairing on A")->required();
  dbl->add_option("--action", action, "trivial, adjoint, or a path to an action spec");
  dbl->add_option("--out", out_path, "output spec path")->required();
  dbl->add_option("--report", report_path, "also write the construction report to this file");
  dbl->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));

  std::string dual_out;
  auto* dual = app.add_subcommand("dual", "export the reduced dual with its evaluation pairing");
  dual->add_option("spec", spec, "spec file or builtin:<name>")->required();
  dual->add_option("--out", dual_out, "output spec path")->required();

  auto* list = app.add_subcommand("builtins", "list built-in spec names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      mhd::io::Loaded x = mhd::io::load_source(spec);
      CertificateReport r = mhd::io::run_verify(x, window.empty() ? std::nullopt : std::optional<std::string>(window));
      emit(r, format, report_path);
      return r.passed() ? 0 : 1;
    }
    if (*dbl) {
      mhd::io::Loaded x;
      auto comma = pair.find(',');
      if (comma == std::string::npos) {
        x = mhd::io::load_source(pair);
      } else {
        mhd::io::json a = mhd::io::read_json_file(pair.substr(0, comma));
        if (!a.contains("pairing")) throw mhd::io::SpecError("first spec of a pair needs a pairing section");
        std::string second = pair.substr(comma + 1);
        a["pairing"]["partner"] = second.rfind("builtin:", 0) == 0
                                      ? mhd::io::json(second)
                                      : mhd::io::json(std::filesystem::absolute(second).string());
        x = mhd::io::load_json(a, std::filesystem::path(pair.substr(0, comma)).parent_path());
      }
      if (!x.pairing) throw mhd::io::SpecError(pair + ": no pairing section");
      mhd::Action act = mhd::io::resolve_action(x, action);
      mhd::io::DoubleRun run = mhd::io::run_double(x, act);
      emit(run.construction, format, report_path);
      if (run.aborted) {
        std::cerr << "double: aborted before construction\n";
        return 1;
      }
      mhd::io::save_json(out_path, run.doc);
      std::cout << "exported: " << out_path << "\n";
      std::cout << "exported spec digest: " << run.exported.spec_digest << "\n";
      std::cout << "exported verify: " << (run.exported.passed() ? "pass" : "fail") << ", report digest "
                << run.exported.digest() << "\n";
      return run.construction.passed() && run.exported.passed() ? 0 : 1;
    }
    if (*dual) {
      mhd::io::Loaded x = mhd::io::load_source(spec);
      mhd::io::Loaded d = mhd::io::dual_spec(x);
      mhd::io::save_json(dual_out, d.doc);
      std::cout << "exported: " << dual_out << "\n";
      std::cout << "spec digest: " << mhd::io::spec_digest(d) << "\n";
      return 0;
    }
    if (*list) {
      for (const auto& n : mhd::io::builtin_names()) std::cout << "builtin:" << n << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
