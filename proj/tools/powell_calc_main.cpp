#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "powellcalc/braid_shadow.hpp"
#include "powellcalc/dihedral.hpp"
#include "powellcalc/modp.hpp"
#include "powellcalc/symplectic.hpp"
#include "powellcalc/verifier.hpp"
#include "powellcalc/words.hpp"

using namespace powellcalc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// A scenario argument is a path if one exists, otherwise a bundled name.
std::string load_scenarios_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return slurp(arg);
  if (const std::string* bundled = find_bundled(arg)) return *bundled;
  throw std::runtime_error("no such file or bundled scenario set: " + arg +
                           " (bundled: paper-core, theorem-shadow)");
}

std::vector<ModPMatrix> subgroup_generators(const std::string& subgroup, std::size_t genus,
                                            std::uint32_t p) {
  return subgroup == "powell" ? powell_generators(genus, p) : full_sp_generators(genus, p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word calculator and scenario verifier for sphere-pair symmetries"};
  app.require_subcommand(1);

  std::string verify_input;
  std::string format = "text";
  std::size_t jobs = 1;
  CLI::App* verify = app.add_subcommand("verify", "run a scenario file and report results");
  verify->add_option("input", verify_input, "scenario file path or bundled name")->required();
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::Range(std::size_t(1), std::size_t(64)));

  std::string lint_input;
  CLI::App* lint = app.add_subcommand("lint", "validate a scenario file without running it");
  lint->add_option("input", lint_input, "scenario file path or bundled name")->required();

  std::string rep;
  std::string word_text;
  std::size_t genus = 0;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a word in one representation");
  eval->add_option("--rep", rep, "dih, perm, framed, or sp")
      ->required()
      ->check(CLI::IsMember({"dih", "perm", "framed", "sp"}));
  eval->add_option("--genus", genus, "number of bubbles (perm, framed, sp)");
  eval->add_option("--word", word_text, "generator word")->required();

  std::string scenario_id;
  CLI::App* check = app.add_subcommand("check", "run one bundled scenario by id");
  check->add_option("--scenario", scenario_id, "scenario id")->required();

  std::size_t m_genus = 0;
  std::uint32_t m_p = 0;
  std::string m_subgroup = "powell";
  std::string m_target;
  CLI::App* membership =
      app.add_subcommand("membership", "test a matrix or word against a mod-p subgroup");
  membership->add_option("--genus", m_genus, "number of bubbles")->required();
  membership->add_option("--p", m_p, "prime modulus")->required();
  membership->add_option("--subgroup", m_subgroup, "powell or full")
      ->check(CLI::IsMember({"powell", "full"}));
  membership->add_option("--target", m_target, "matrix file path or generator word")
      ->required();

  std::size_t o_genus = 0;
  std::uint32_t o_p = 0;
  std::string o_subgroup;
  CLI::App* order = app.add_subcommand("order", "print the order of a mod-p subgroup");
  order->add_option("--genus", o_genus, "number of bubbles")->required();
  order->add_option("--p", o_p, "prime modulus")->required();
  order->add_option("--subgroup", o_subgroup, "powell or full")
      ->required()
      ->check(CLI::IsMember({"powell", "full"}));

  std::string gens_text;
  CLI::App* closure =
      app.add_subcommand("closure", "print the subgroup generated by signed permutations");
  closure->add_option("--gens", gens_text, "space-separated elements such as \"-(12) +(02)\"")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      auto results = run_scenarios(load_scenarios_arg(verify_input), {.jobs = jobs});
      std::cout << (format == "json" ? emit_json(results) : emit_text(results));
      return all_clean(results) ? 0 : 1;
    }
    if (lint->parsed()) {
      lint_scenarios(load_scenarios_arg(lint_input));
      std::cout << "ok\n";
      return 0;
    }
    if (eval->parsed()) {
      Word w = parse_word(word_text);
      if (rep == "dih") {
        std::cout << to_string(eval_dih(w)) << "\n";
        return 0;
      }
      if (genus == 0) {
        std::cerr << "error: --genus is required for rep " << rep << "\n";
        return 2;
      }
      if (rep == "perm")
        std::cout << cycle_string(perm_of_word(genus, w)) << "\n";
      else if (rep == "framed")
        std::cout << to_string(framed_of_word(genus, w)) << "\n";
      else
        std::cout << format_matrix(eval_sp(genus, w));
      return 0;
    }
    if (check->parsed()) {
      for (const BundledFile& f : bundled_scenarios()) {
        try {
          ScenarioResult r = run_scenario_by_id(f.content, scenario_id);
          std::cout << emit_text({r});
          return r.status == ScenarioStatus::fail ? 1 : 0;
        } catch (const ScenarioError&) {
          // not in this bundled file
        }
      }
      std::cerr << "error: no bundled scenario with id \"" << scenario_id << "\"\n";
      return 2;
    }
    if (membership->parsed()) {
      StabilizerChain chain(subgroup_generators(m_subgroup, m_genus, m_p));
      ModPMatrix target;
      if (std::filesystem::exists(m_target)) {
        SpMatrix m = parse_matrix(slurp(m_target));
        if (m.genus() != m_genus)
          throw std::runtime_error("target file has genus " + std::to_string(m.genus()) +
                                   ", but --genus is " + std::to_string(m_genus));
        target = reduce_mod_p(m, m_p);
      } else {
        target = reduce_mod_p(eval_sp(m_genus, parse_word(m_target)), m_p);
      }
      auto out = chain.sift(target);
      std::cout << "member: " << (out.member ? "true" : "false") << "\n"
                << "order: " << chain.order().str() << "\n";
      if (!out.member)
        std::cout << "sift level: " << out.level << "\nresidue:\n"
                  << format_matrix(out.residue);
      return out.member ? 0 : 1;
    }
    if (order->parsed()) {
      StabilizerChain chain(subgroup_generators(o_subgroup, o_genus, o_p));
      std::cout << chain.order().str() << "\n";
      return 0;
    }
    // closure
    std::vector<DihElement> gens;
    std::istringstream in(gens_text);
    std::string tok;
    while (in >> tok) gens.push_back(parse_dih(tok));
    for (const DihElement& e : dih_closure(gens)) std::cout << to_string(e) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
