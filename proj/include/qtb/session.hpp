#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtb/quotient.hpp"

namespace qtb {

struct Diagnostic {
  std::size_t line = 0, column = 0; // 1-based
  std::string message;
  std::string str() const;
};

class SessionParseError : public std::runtime_error {
public:
  explicit SessionParseError(std::vector<Diagnostic> d);
  const std::vector<Diagnostic> &diagnostics() const { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

struct SessionOptions {
  std::optional<Backend> backend;
  bool strict_roots = false;
  std::optional<int> degree_bound;
  unsigned strata_threads = 1;
};

// Polynomial literal: terms `coef*x^(a_1,...,a_n)` joined by + and -, a bare
// coefficient standing for the constant term.
Laurent parse_laurent(const Field &F, std::size_t n, const std::string &text);
Vec parse_vec(const std::string &text);
std::vector<Vec> parse_vec_list(const std::string &text);

class Session {
public:
  static Session parse(const std::string &text, const SessionOptions &opt = {});

  const Field &field() const { return F_; }
  bool has_torus() const { return has_torus_; }
  const QMatrix &q() const { return q_; }
  std::size_t command_count() const { return cmds_.size(); }

  // Canonical document text; parsing it again gives the same document.
  std::string str() const;
  // Output of command k; MathError on mathematical failure.
  std::string execute(std::size_t k) const;
  // Runs every command in order; stops at the first failure. Exit code.
  int run(std::ostream &out, std::ostream &err) const;

  struct LatticeDecl {
    std::string name;
    std::string kind; // rows, center, full
    std::vector<Vec> rows;
  };
  struct CharDecl {
    std::string name, lattice;
    std::vector<Scalar> values; // on the rows as written
  };
  struct IdealDecl {
    std::string name;
    std::string kind; // torus, gens, affine, unit
    std::string lattice, character;
    std::vector<Laurent> gens;
  };
  struct Command {
    std::size_t line = 0;
    std::string name;
    std::vector<std::string> args;
  };

private:
  const TorusContext &ctx() const;
  const LatticeDecl &lattice_decl(const std::string &name) const;
  const IdealDecl &ideal_decl(const std::string &name) const;
  Lattice lattice(const LatticeDecl &d) const;
  TorusIdeal torus_ideal(const IdealDecl &d) const;
  AffineIdeal affine_ideal(const IdealDecl &d) const;

  SessionOptions opt_;
  Field F_;
  bool has_field_ = false, has_torus_ = false;
  QMatrix q_;
  std::map<std::pair<std::size_t, std::size_t>, Scalar> qtext_; // non-trivial upper entries
  std::vector<LatticeDecl> lattices_;
  std::vector<CharDecl> chars_;
  std::vector<IdealDecl> ideals_;
  std::vector<Command> cmds_;
  mutable std::optional<TorusContext> ctx_;
};

} // namespace qtb
