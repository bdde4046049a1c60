// Acceptance gate: one PASS/FAIL line per criterion; exits nonzero on any failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "cli.hpp"
#include "searchspace/io.hpp"

int main(int argc, char** argv) {
  using namespace searchspace;
  std::vector<int> criteria;
  std::string lattice;
  acceptance::Options options;

  CLI::App app{"Acceptance checks"};
  app.add_option("--criterion", criteria, "Run only these criteria (repeatable)")
      ->check(CLI::Range(1, acceptance::kCriterionCount));
  app.add_flag("--quick", options.quick, "Smaller random fixtures");
  app.add_option("--seed", options.seed, "Seed for the random fixtures");
  app.add_option("--lattice", lattice, "N=5 lattice envelope file to check instead of the built-in one");
  CLI11_PARSE(app, argc, argv);

  if (!lattice.empty()) {
    std::ifstream in(lattice);
    if (!in) {
      std::cerr << "cannot open " << lattice << '\n';
      return 2;
    }
    options.lattice_override = read_envelope_json(in);
  }
  options.cli = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return cli::run_cli(args, out, err);
  };

  if (criteria.empty()) {
    for (int i = 1; i <= acceptance::kCriterionCount; ++i) criteria.push_back(i);
  }
  int failed = 0;
  for (const int c : criteria) {
    const auto r = acceptance::run_criterion(c, options);
    failed += r.passed ? 0 : 1;
    std::cout << acceptance::format_result(r) << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
