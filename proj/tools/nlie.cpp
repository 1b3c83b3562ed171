#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "nlie/spec.hpp"

using namespace nlie;

namespace {

void print_results(const spec::Document &doc, const std::vector<spec::CampaignResult> &rs) {
  std::cout << doc.name << "\n";
  for (const auto &r : rs) {
    std::cout << "  [" << r.verdict << "] " << r.name << " (" << r.check << (r.mode.empty() ? "" : ", " + r.mode)
              << ")";
    if (r.counts.contains("evaluated")) std::cout << " evaluated " << r.counts["evaluated"] << ", failures " << r.counts["failures"];
    if (r.counts.contains("generators_checked")) std::cout << " generators " << r.counts["generators_checked"];
    std::cout << std::fixed << std::setprecision(3) << " " << r.duration_s << "s";
    if (r.expected != r.verdict) std::cout << "  (expected " << r.expected << ")";
    std::cout << "\n";
    for (const auto &w : r.witnesses) std::cout << "      witness: " << (w.is_string() ? w.get<std::string>() : w.dump()) << "\n";
  }
}

void write_json(const std::filesystem::path &p, const spec::json &j) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"n-Lie algebra construction and verification"};
  app.require_subcommand(1);
  std::string out_dir;
  app.add_option("--out-dir", out_dir, "directory for machine-readable reports");

  std::string spec_name;
  spec::RunOptions ropt;
  std::uint64_t budget = 0;
  std::string out_path;

  auto *describe = app.add_subcommand("describe", "print the catalog entry of a spec");
  describe->add_option("spec", spec_name, "spec file or bundled name")->required();

  auto *verify = app.add_subcommand("verify", "run a spec's campaigns");
  verify->add_option("spec", spec_name, "spec file or bundled name")->required();
  verify->add_option("--seed", ropt.seed, "random seed for sampled modes");
  verify->add_option("--budget", budget, "line budget for exhaustive simplicity");
  verify->add_flag("--parallel", ropt.parallel, "parallel tuple and line enumeration");
  verify->add_option("--report", out_path, "write the JSON report here");

  auto *exp = app.add_subcommand("export", "write the structure-constant table");
  exp->add_option("spec", spec_name, "spec file or bundled name")->required();
  exp->add_option("--out", out_path, "output path")->required();

  app.add_subcommand("list-bundled", "list bundled specs");

  auto *all = app.add_subcommand("verify-bundled", "run every bundled spec and compare with expectations");
  all->add_flag("--parallel", ropt.parallel, "parallel tuple and line enumeration");
  all->add_option("--seed", ropt.seed, "random seed for sampled modes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*describe) {
      std::cout << spec::describe(spec::resolve(spec_name));
      return 0;
    }
    if (*verify) {
      if (budget) ropt.budget = budget;
      auto doc = spec::resolve(spec_name);
      auto rs = spec::run(doc, ropt);
      print_results(doc, rs);
      auto rep = spec::report_json(doc, rs, ropt);
      if (!out_path.empty()) write_json(out_path, rep);
      else if (!out_dir.empty()) write_json(std::filesystem::path(out_dir) / (doc.name + ".report.json"), rep);
      return spec::exit_status(rs);
    }
    if (*exp) {
      auto j = spec::export_constants(spec::resolve(spec_name));
      write_json(out_path, j);
      std::cout << "wrote " << j["constants"].size() << " constants to " << out_path << "\n";
      return 0;
    }
    if (app.got_subcommand("list-bundled")) {
      for (const auto &n : spec::bundled_names()) {
        auto doc = spec::resolve(n);
        std::cout << std::left << std::setw(28) << n << " " << doc.claim << "\n";
      }
      return 0;
    }
    if (*all) {
      int bad = 0;
      for (const auto &n : spec::bundled_names()) {
        auto doc = spec::resolve(n);
        auto rs = spec::run(doc, ropt);
        print_results(doc, rs);
        if (!out_dir.empty())
          write_json(std::filesystem::path(out_dir) / (doc.name + ".report.json"), spec::report_json(doc, rs, ropt));
        for (const auto &r : rs) bad += r.as_expected ? 0 : 1;
      }
      std::cout << (bad ? std::to_string(bad) + " campaign(s) differ from expectations\n" : "all bundled campaigns as expected\n");
      return bad ? 1 : 0;
    }
  } catch (const spec::SpecError &e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 3;
  } catch (const HypothesisViolation &e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
