#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtb/error.hpp"
#include "qtb/session.hpp"

int main(int argc, char **argv) {
  CLI::App app{"qtb: binomial ideals in quantum tori and quantum affine spaces"};
  app.require_subcommand(1);

  std::string backend;
  bool strict = false;
  int degree_bound = 0;
  unsigned threads = 1;
  app.add_option("--backend", backend, "expected field backend")->check(CLI::IsMember({"char0", "charp"}));
  app.add_flag("--strict-roots", strict, "reject roots that introduce fractional prime exponents");
  app.add_option("--degree-bound", degree_bound, "largest extension degree for roots")->check(CLI::PositiveNumber);
  app.add_option("--strata-parallel", threads, "threads for affine minimal primes")->check(CLI::Range(1u, 256u));

  std::string file;
  auto *run = app.add_subcommand("run", "parse and execute a session");
  run->add_option("file", file)->required();
  auto *check = app.add_subcommand("check", "parse a session and print its canonical form");
  check->add_option("file", file)->required();
  run->fallthrough();
  check->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::ifstream in(file);
  if (!in) {
    std::cerr << file << ": cannot open\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  qtb::SessionOptions opt;
  if (!backend.empty()) opt.backend = backend == "char0" ? qtb::Backend::char0 : qtb::Backend::charp;
  opt.strict_roots = strict;
  if (degree_bound > 0) opt.degree_bound = degree_bound;
  opt.strata_threads = threads;

  try {
    auto S = qtb::Session::parse(buf.str(), opt);
    if (*check) {
      std::cout << S.str();
      return 0;
    }
    return S.run(std::cout, std::cerr);
  } catch (const qtb::SessionParseError &e) {
    for (const auto &d : e.diagnostics()) std::cerr << file << ":" << d.str() << "\n";
    return 1;
  }
}
