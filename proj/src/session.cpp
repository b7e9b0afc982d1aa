#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "qtb/error.hpp"
#include "qtb/session.hpp"

namespace qtb {

std::string Diagnostic::str() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

namespace {

std::string join_diags(const std::vector<Diagnostic> &d) {
  std::string s;
  for (const auto &x : d) s += (s.empty() ? "" : "\n") + x.str();
  return s;
}

std::string trim(const std::string &s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Split on `sep` outside parentheses and brackets; offsets of the pieces kept.
std::vector<std::pair<std::string, std::size_t>> split_top(const std::string &s, char sep) {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    char c = i < s.size() ? s[i] : sep;
    if (c == '(' || c == '[') ++depth;
    else if (c == ')' || c == ']') --depth;
    if ((c == sep && depth == 0) || i == s.size()) {
      out.emplace_back(s.substr(start, i - start), start);
      start = i + 1;
    }
  }
  return out;
}

// Whitespace-separated words, keeping bracketed groups together.
std::vector<std::pair<std::string, std::size_t>> words(const std::string &s) {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) break;
    std::size_t start = i;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '(' || c == '[') ++depth;
      else if (c == ')' || c == ']') --depth;
      else if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
    }
    out.emplace_back(s.substr(start, i - start), start);
  }
  return out;
}

bool is_name(const std::string &s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; });
}

long parse_int(const std::string &s, std::size_t col) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception &) {
    throw ParseError("expected an integer, found '" + s + "'", col);
  }
  if (pos != s.size()) throw ParseError("expected an integer, found '" + s + "'", col);
  return v;
}

// key=value
std::pair<std::string, std::string> keyval(const std::string &w, std::size_t col) {
  auto eq = w.find('=');
  if (eq == std::string::npos) throw ParseError("expected key=value, found '" + w + "'", col);
  return {w.substr(0, eq), w.substr(eq + 1)};
}

std::string join_vecs(const std::vector<Vec> &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + vec_str(v[i]);
  return s + "]";
}

std::string join_laurent(const std::vector<Laurent> &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + "]";
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string index_set(const std::vector<std::size_t> &J) {
  std::string s = "{";
  for (std::size_t i = 0; i < J.size(); ++i) s += (i ? "," : "") + std::to_string(J[i] + 1);
  return s + "}";
}

} // namespace

SessionParseError::SessionParseError(std::vector<Diagnostic> d) : std::runtime_error(join_diags(d)), diags_(std::move(d)) {}

Vec parse_vec(const std::string &text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw ParseError("expected an integer vector (a,b,...), found '" + t + "'", 1);
  Vec v;
  std::string body = t.substr(1, t.size() - 2);
  if (trim(body).empty()) return v;
  for (const auto &[piece, off] : split_top(body, ',')) v.push_back(parse_int(trim(piece), off + 2));
  return v;
}

std::vector<Vec> parse_vec_list(const std::string &text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw ParseError("expected a list [..], found '" + t + "'", 1);
  std::vector<Vec> out;
  std::string body = t.substr(1, t.size() - 2);
  if (trim(body).empty()) return out;
  for (const auto &[piece, off] : split_top(body, ',')) {
    try {
      out.push_back(parse_vec(piece));
    } catch (const ParseError &e) {
      throw ParseError(e.what(), off + 2);
    }
  }
  return out;
}

Laurent parse_laurent(const Field &F, std::size_t n, const std::string &text) {
  // term boundaries: + or - at depth 0 not following ^ * / or another sign
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  int depth = 0;
  std::size_t start = 0;
  char prev = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[') ++depth;
    else if (c == ')' || c == ']') --depth;
    else if (depth == 0 && (c == '+' || c == '-') && prev && prev != '^' && prev != '*' && prev != '/' && prev != '+' &&
             prev != '-') {
      spans.emplace_back(start, i);
      start = i;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) prev = c;
  }
  spans.emplace_back(start, text.size());
  if (trim(text).empty()) throw ParseError("empty polynomial", 1);
  Laurent out;
  for (auto [a, b] : spans) {
    std::string term = text.substr(a, b - a);
    std::size_t lead = term.find_first_not_of(" \t");
    if (lead == std::string::npos) throw ParseError("empty term", a + 1);
    bool neg = false;
    std::size_t i = lead;
    if (term[i] == '+' || term[i] == '-') {
      neg = term[i] == '-';
      ++i;
    }
    std::string body = term.substr(i);
    std::size_t base = a + i; // offset of body in text
    // locate x^( at depth 0
    std::size_t xp = std::string::npos;
    int d = 0;
    for (std::size_t k = 0; k + 2 < body.size(); ++k) {
      if (body[k] == '(') ++d;
      else if (body[k] == ')') --d;
      else if (d == 0 && body.compare(k, 3, "x^(") == 0) {
        xp = k;
        break;
      }
    }
    Vec e(n, 0);
    std::string coef = body;
    if (xp != std::string::npos) {
      std::size_t close = body.find(')', xp);
      if (close == std::string::npos) throw ParseError("unclosed exponent", base + xp + 1);
      if (!trim(body.substr(close + 1)).empty()) throw ParseError("unexpected text after the monomial", base + close + 2);
      try {
        e = parse_vec(body.substr(xp + 2, close - xp - 1));
      } catch (const ParseError &) {
        throw ParseError("bad exponent vector", base + xp + 3);
      }
      if (e.size() != n) throw ParseError("exponent has " + std::to_string(e.size()) + " entries, expected " + std::to_string(n), base + xp + 3);
      coef = trim(body.substr(0, xp));
      if (!coef.empty()) {
        if (coef.back() != '*') throw ParseError("expected '*' before the monomial", base + xp + 1);
        coef = trim(coef.substr(0, coef.size() - 1));
        if (coef.empty()) throw ParseError("missing coefficient before '*'", base + 1);
      }
    }
    FieldElem c = F.unit();
    if (!trim(coef).empty()) {
      try {
        c = F.parse(coef);
      } catch (const ParseError &pe) {
        std::size_t off = body.find(trim(coef));
        throw ParseError(pe.what(), base + (off == std::string::npos ? 0 : off) + std::max<std::size_t>(pe.column(), 1));
      }
    }
    if (neg) c = -c;
    out.add_term(e, c);
  }
  return out;
}

// ---------------------------------------------------------------------------

Session Session::parse(const std::string &text, const SessionOptions &opt) {
  Session S;
  S.opt_ = opt;
  S.F_ = Field::char0();
  std::vector<Diagnostic> diags;
  std::map<std::string, std::string> names; // name -> declaration kind
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  std::size_t torus_n = 0;
  std::map<std::pair<std::size_t, std::size_t>, Scalar> upper;
  bool field_seen = false;

  auto apply_opts = [&] {
    if (opt.strict_roots) S.F_.strict_roots = true;
    if (opt.degree_bound) S.F_.degree_bound = *opt.degree_bound;
  };
  apply_opts();
  if (opt.backend == Backend::charp)
    diags.push_back({0, 0, "--backend charp needs a 'field charp p=...' line"}); // cleared when a field line appears

  auto need_torus = [&](std::size_t col) {
    if (!S.has_torus_) throw ParseError("a torus line must come first", col);
  };
  auto declare = [&](const std::string &name, const std::string &kind, std::size_t col) {
    if (!is_name(name)) throw ParseError("bad name '" + name + "'", col);
    if (names.count(name)) throw ParseError("name '" + name + "' already declared", col);
    names[name] = kind;
  };
  auto q_entry = [&](const std::string &w, std::size_t col) {
    auto [k, v] = keyval(w, col);
    std::size_t i = 0, j = 0;
    if (std::sscanf(k.c_str(), "q[%zu][%zu]", &i, &j) != 2 || k != "q[" + std::to_string(i) + "][" + std::to_string(j) + "]")
      throw ParseError("expected q[i][j]=value, found '" + w + "'", col);
    if (i < 1 || j < 1 || i > torus_n || j > torus_n) throw ParseError("index out of range in '" + k + "'", col);
    Scalar s = S.F_.parse_scalar(v);
    if (i == j) {
      if (!s.is_one()) throw ParseError("q_{ii} must be 1", col);
      return;
    }
    std::pair<std::size_t, std::size_t> key{std::min(i, j) - 1, std::max(i, j) - 1};
    Scalar val = i < j ? s : s.inv();
    if (auto it = upper.find(key); it != upper.end() && it->second != val)
      throw ParseError("conflicting values for q[" + std::to_string(key.first + 1) + "][" + std::to_string(key.second + 1) + "]", col);
    upper[key] = val;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    auto ws = words(line);
    const std::string &kw = ws[0].first;
    std::size_t kwcol = ws[0].second + 1;
    try {
      if (kw == "field") {
        if (field_seen) throw ParseError("field declared twice", kwcol);
        if (S.has_torus_) throw ParseError("field must precede the torus", kwcol);
        if (ws.size() < 2) throw ParseError("expected char0 or charp", kwcol);
        field_seen = true;
        diags.erase(std::remove_if(diags.begin(), diags.end(), [](const Diagnostic &d) { return d.line == 0; }), diags.end());
        std::map<std::string, std::string> kv;
        for (std::size_t w = 2; w < ws.size(); ++w) {
          auto [k, v] = keyval(ws[w].first, ws[w].second + 1);
          kv[k] = v;
        }
        auto num = [&](const std::string &k, long def) {
          auto it = kv.find(k);
          long v = it == kv.end() ? def : parse_int(it->second, kwcol);
          if (it != kv.end()) kv.erase(it);
          return v;
        };
        if (ws[1].first == "char0") {
          if (opt.backend == Backend::charp) throw ParseError("session is char0 but --backend charp was given", ws[1].second + 1);
          long N = num("N", 1), params = num("params", 0);
          if (N < 1 || params < 0) throw ParseError("N must be positive and params nonnegative", ws[1].second + 1);
          S.F_ = Field::char0(static_cast<int>(params), N);
        } else if (ws[1].first == "charp") {
          if (opt.backend == Backend::char0) throw ParseError("session is charp but --backend char0 was given", ws[1].second + 1);
          if (!kv.count("p")) throw ParseError("charp needs p=<prime>", ws[1].second + 1);
          long p = num("p", 0), m = num("m", 1);
          if (m < 1) throw ParseError("m must be positive", ws[1].second + 1);
          try {
            S.F_ = Field::charp(static_cast<std::uint32_t>(p), static_cast<int>(m));
          } catch (const MathError &) {
            throw ParseError("p=" + std::to_string(p) + " is not prime", ws[1].second + 1);
          }
        } else {
          throw ParseError("expected char0 or charp, found '" + ws[1].first + "'", ws[1].second + 1);
        }
        long bound = num("bound", S.F_.degree_bound);
        if (bound < 1) throw ParseError("bound must be positive", kwcol);
        S.F_.degree_bound = static_cast<int>(bound);
        if (!kv.empty()) throw ParseError("unknown field option '" + kv.begin()->first + "'", kwcol);
        apply_opts();
        S.has_field_ = true;
      } else if (kw == "torus") {
        if (S.has_torus_) throw ParseError("torus declared twice", kwcol);
        if (ws.size() < 2) throw ParseError("expected n=<size>", kwcol);
        auto [k, v] = keyval(ws[1].first, ws[1].second + 1);
        if (k != "n") throw ParseError("expected n=<size>", ws[1].second + 1);
        long n = parse_int(v, ws[1].second + 3);
        if (n < 0 || n > 64) throw ParseError("n out of range", ws[1].second + 3);
        torus_n = static_cast<std::size_t>(n);
        S.has_torus_ = true;
        for (std::size_t w = 2; w < ws.size(); ++w) q_entry(ws[w].first, ws[w].second + 1);
      } else if (kw.rfind("q[", 0) == 0) {
        need_torus(kwcol);
        for (const auto &[w, off] : ws) q_entry(w, off + 1);
      } else if (kw == "lattice") {
        need_torus(kwcol);
        // lattice NAME = rows [...] | center | full
        if (ws.size() < 4 || ws[2].first != "=") throw ParseError("expected 'lattice NAME = rows [...]'", kwcol);
        LatticeDecl d;
        d.name = ws[1].first;
        d.kind = ws[3].first;
        if (d.kind == "rows") {
          if (ws.size() != 5) throw ParseError("expected a list of rows", ws[3].second + 1);
          try {
            d.rows = parse_vec_list(ws[4].first);
          } catch (const ParseError &e) {
            throw ParseError(e.what(), ws[4].second + e.column());
          }
          for (const auto &r : d.rows)
            if (r.size() != torus_n) throw ParseError("row " + vec_str(r) + " does not have " + std::to_string(torus_n) + " entries", ws[4].second + 1);
        } else if (d.kind == "center" || d.kind == "full") {
          if (ws.size() != 4) throw ParseError("unexpected text after '" + d.kind + "'", ws[4].second + 1);
        } else {
          throw ParseError("expected rows, center or full", ws[3].second + 1);
        }
        declare(d.name, "lattice", ws[1].second + 1);
        S.lattices_.push_back(d);
      } else if (kw == "char") {
        need_torus(kwcol);
        // char NAME on LATTICE = [v, ...]
        if (ws.size() != 6 || ws[2].first != "on" || ws[4].first != "=") throw ParseError("expected 'char NAME on LATTICE = [values]'", kwcol);
        CharDecl d;
        d.name = ws[1].first;
        d.lattice = ws[3].first;
        auto it = names.find(d.lattice);
        if (it == names.end() || it->second != "lattice") throw ParseError("unknown lattice '" + d.lattice + "'", ws[3].second + 1);
        std::string list = ws[5].first;
        if (list.size() < 2 || list.front() != '[' || list.back() != ']') throw ParseError("expected [values]", ws[5].second + 1);
        std::string body = list.substr(1, list.size() - 2);
        if (!trim(body).empty())
          for (const auto &[piece, off] : split_top(body, ',')) {
            try {
              d.values.push_back(S.F_.parse_scalar(trim(piece)));
            } catch (const ParseError &e) {
              throw ParseError(e.what(), ws[5].second + off + 2);
            }
          }
        declare(d.name, "char", ws[1].second + 1);
        S.chars_.push_back(d);
      } else if (kw == "ideal") {
        need_torus(kwcol);
        auto eq = line.find('=');
        if (ws.size() < 4 || ws[2].first != "=") throw ParseError("expected 'ideal NAME = ...'", kwcol);
        IdealDecl d;
        d.name = ws[1].first;
        std::string rhs = trim(line.substr(eq + 1));
        std::size_t rcol = line.find(rhs, eq) + 1;
        if (rhs == "unit") {
          d.kind = "unit";
        } else if (rhs.rfind("torus(", 0) == 0 && rhs.back() == ')') {
          d.kind = "torus";
          auto parts = split_top(rhs.substr(6, rhs.size() - 7), ',');
          if (parts.size() != 2) throw ParseError("expected torus(LATTICE, CHAR)", rcol);
          d.lattice = trim(parts[0].first);
          d.character = trim(parts[1].first);
          auto lt = names.find(d.lattice);
          if (lt == names.end() || lt->second != "lattice") throw ParseError("unknown lattice '" + d.lattice + "'", rcol + 6);
          auto ct = std::find_if(S.chars_.begin(), S.chars_.end(), [&](const CharDecl &c) { return c.name == d.character; });
          if (ct == S.chars_.end()) throw ParseError("unknown character '" + d.character + "'", rcol + 6 + parts[1].second);
          if (ct->lattice != d.lattice) throw ParseError("character '" + d.character + "' lives on '" + ct->lattice + "', not '" + d.lattice + "'", rcol + 6 + parts[1].second);
        } else if (rhs.rfind("gens", 0) == 0 || rhs.rfind("affine", 0) == 0) {
          d.kind = rhs.rfind("gens", 0) == 0 ? "gens" : "affine";
          std::string list = trim(rhs.substr(d.kind.size()));
          std::size_t lcol = line.find(list, eq) + 1;
          if (list.size() < 2 || list.front() != '[' || list.back() != ']') throw ParseError("expected [polynomials]", lcol);
          std::string body = list.substr(1, list.size() - 2);
          if (!trim(body).empty())
            for (const auto &[piece, off] : split_top(body, ',')) {
              try {
                d.gens.push_back(parse_laurent(S.F_, torus_n, piece));
              } catch (const ParseError &e) {
                throw ParseError(e.what(), lcol + off + e.column());
              }
              if (d.kind == "affine")
                for (const auto &[ex, c] : d.gens.back().terms())
                  if (std::any_of(ex.begin(), ex.end(), [](std::int64_t x) { return x < 0; }))
                    throw ParseError("negative exponent in an affine ideal", lcol + off + 1);
            }
        } else {
          throw ParseError("expected unit, torus(L, rho), gens [...] or affine [...]", rcol);
        }
        declare(d.name, d.kind, ws[1].second + 1);
        S.ideals_.push_back(d);
      } else if (kw == "cmd") {
        if (ws.size() < 2) throw ParseError("expected a command name", kwcol);
        Command c;
        c.line = lineno;
        c.name = ws[1].first;
        std::size_t rest_at = ws[1].second + ws[1].first.size();
        std::string rest = trim(line.substr(rest_at));
        std::size_t rcol = rest.empty() ? rest_at + 1 : line.find(rest, rest_at) + 1;
        auto argw = words(rest);
        auto expect_args = [&](std::size_t k) {
          if (argw.size() != k) throw ParseError("'" + c.name + "' takes " + std::to_string(k) + " argument(s)", rcol);
        };
        auto expect_name = [&](std::size_t idx, std::vector<std::string> kinds) {
          const auto &nm = argw[idx].first;
          auto it = names.find(nm);
          if (it == names.end()) throw ParseError("unknown name '" + nm + "'", rcol + argw[idx].second);
          if (std::find(kinds.begin(), kinds.end(), it->second) == kinds.end())
            throw ParseError("'" + nm + "' is a " + it->second + " declaration, not usable with '" + c.name + "'", rcol + argw[idx].second);
          c.args.push_back(nm);
        };
        const std::vector<std::string> any_ideal{"torus", "gens", "unit", "affine"}, torus_kinds{"torus", "gens", "unit"};
        if (c.name == "center" || c.name == "qhat") {
          need_torus(kwcol);
          expect_args(0);
        } else if (c.name == "cvalue" || c.name == "dvalue") {
          need_torus(kwcol);
          expect_args(c.name == "cvalue" ? 1 : 2);
          for (const auto &[w, off] : argw) {
            Vec v;
            try {
              v = parse_vec(w);
            } catch (const ParseError &e) {
              throw ParseError(e.what(), rcol + off);
            }
            if (v.size() != torus_n) throw ParseError("vector " + vec_str(v) + " does not have " + std::to_string(torus_n) + " entries", rcol + off);
            c.args.push_back(vec_str(v));
          }
        } else if (c.name == "ideal-from-gens") {
          need_torus(kwcol);
          if (!rest.empty() && rest.front() == '[') {
            std::vector<Laurent> g;
            std::string body = rest.substr(1, rest.size() - 2);
            if (rest.back() != ']') throw ParseError("expected [polynomials]", rcol);
            if (!trim(body).empty())
              for (const auto &[piece, off] : split_top(body, ',')) {
                try {
                  g.push_back(parse_laurent(S.F_, torus_n, piece));
                } catch (const ParseError &e) {
                  throw ParseError(e.what(), rcol + off + e.column());
                }
              }
            c.args.push_back(join_laurent(g));
          } else {
            expect_args(1);
            expect_name(0, {"gens", "affine"});
          }
        } else if (c.name == "radical" || c.name == "minprimes" || c.name == "classify") {
          expect_args(1);
          expect_name(0, any_ideal);
        } else if (c.name == "contract" || c.name == "quotient-table") {
          expect_args(1);
          expect_name(0, torus_kinds);
        } else if (c.name == "saturate-x") {
          expect_args(1);
          expect_name(0, {"affine"});
        } else if (c.name == "congruence") {
          expect_args(2);
          expect_name(0, {"affine"});
          long b = parse_int(argw[1].first, rcol + argw[1].second);
          if (b < 0) throw ParseError("degree bound must be nonnegative", rcol + argw[1].second);
          c.args.push_back(std::to_string(b));
        } else if (c.name == "nf" || c.name == "member") {
          if (argw.size() < 2) throw ParseError("'" + c.name + "' takes an ideal and a polynomial", rcol);
          expect_name(0, any_ideal);
          std::size_t poff = argw[1].second;
          try {
            c.args.push_back(parse_laurent(S.F_, torus_n, rest.substr(poff)).str());
          } catch (const ParseError &e) {
            throw ParseError(e.what(), rcol + poff + e.column() - 1);
          }
        } else if (c.name == "toric") {
          expect_args(1);
          std::vector<Vec> gens;
          try {
            gens = parse_vec_list(argw[0].first);
          } catch (const ParseError &e) {
            throw ParseError(e.what(), rcol + e.column() - 1);
          }
          for (const auto &g : gens)
            if (g.size() != gens[0].size()) throw ParseError("monoid generators of different lengths", rcol);
          c.args.push_back(join_vecs(gens));
        } else {
          throw ParseError("unknown command '" + c.name + "'", ws[1].second + 1);
        }
        S.cmds_.push_back(c);
      } else {
        throw ParseError("unknown declaration '" + kw + "'", kwcol);
      }
    } catch (const ParseError &e) {
      diags.push_back({lineno, std::max<std::size_t>(e.column(), 1), e.what()});
    } catch (const MathError &e) {
      // malformed literals (zero or non-toric scalars) are input errors here
      diags.push_back({lineno, kwcol, e.what()});
    }
  }
  if (!diags.empty()) throw SessionParseError(diags);
  if (S.has_torus_) {
    S.q_ = QMatrix::from_upper(S.F_, torus_n, upper);
    S.qtext_ = upper;
  }
  return S;
}

std::string Session::str() const {
  std::ostringstream os;
  if (F_.backend == Backend::char0) os << "field char0 N=" << F_.conductor << " params=" << F_.params;
  else os << "field charp p=" << F_.p << " m=" << F_.base_degree;
  if (F_.degree_bound != 24) os << " bound=" << F_.degree_bound;
  os << "\n";
  if (has_torus_) {
    os << "torus n=" << q_.n();
    for (const auto &[k, v] : qtext_)
      if (!v.is_one()) os << " q[" << k.first + 1 << "][" << k.second + 1 << "]=" << v.str();
    os << "\n";
  }
  for (const auto &l : lattices_) {
    os << "lattice " << l.name << " = " << l.kind;
    if (l.kind == "rows") os << " " << join_vecs(l.rows);
    os << "\n";
  }
  for (const auto &c : chars_) {
    os << "char " << c.name << " on " << c.lattice << " = [";
    for (std::size_t i = 0; i < c.values.size(); ++i) os << (i ? ", " : "") << c.values[i].str();
    os << "]\n";
  }
  for (const auto &d : ideals_) {
    os << "ideal " << d.name << " = ";
    if (d.kind == "unit") os << "unit";
    else if (d.kind == "torus") os << "torus(" << d.lattice << ", " << d.character << ")";
    else os << d.kind << " " << join_laurent(d.gens);
    os << "\n";
  }
  for (const auto &c : cmds_) {
    os << "cmd " << c.name;
    for (const auto &a : c.args) os << " " << a;
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

const TorusContext &Session::ctx() const {
  if (!has_torus_) throw MathError(Err::DimensionMismatch, "no torus declared");
  if (!ctx_) ctx_.emplace(F_, q_);
  return *ctx_;
}

const Session::LatticeDecl &Session::lattice_decl(const std::string &name) const {
  for (const auto &l : lattices_)
    if (l.name == name) return l;
  throw MathError(Err::DimensionMismatch, "unknown lattice " + name);
}

const Session::IdealDecl &Session::ideal_decl(const std::string &name) const {
  for (const auto &d : ideals_)
    if (d.name == name) return d;
  throw MathError(Err::DimensionMismatch, "unknown ideal " + name);
}

Lattice Session::lattice(const LatticeDecl &d) const {
  if (d.kind == "center") return ctx().gamma_z();
  if (d.kind == "full") return Lattice::full(q_.n());
  return Lattice::from_rows(d.rows, q_.n());
}

TorusIdeal Session::torus_ideal(const IdealDecl &d) const {
  const auto &C = ctx();
  if (d.kind == "unit") return TorusIdeal::unit(C.n());
  if (d.kind == "gens" || d.kind == "affine") return from_generators(C, d.gens);
  const auto &ld = lattice_decl(d.lattice);
  const CharDecl *cd = nullptr;
  for (const auto &c : chars_)
    if (c.name == d.character) cd = &c;
  std::vector<Vec> rows = ld.kind == "rows" ? ld.rows : lattice(ld).basis();
  if (cd->values.size() != rows.size())
    throw MathError(Err::DimensionMismatch, "character " + cd->name + " has " + std::to_string(cd->values.size()) + " values for " +
                                                std::to_string(rows.size()) + " rows of " + ld.name);
  auto T = hnf_transform(rows, C.n());
  auto eval = [&](const std::vector<Big> &coeffs) {
    Scalar s = F_.one();
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (coeffs[k] != 0) s = s * cd->values[k].pow(coeffs[k]);
    return s;
  };
  for (const auto &rel : T.relations)
    if (!eval(rel).is_one())
      throw MathError(Err::Incompatible, "values of " + cd->name + " violate a relation among the rows of " + ld.name);
  std::vector<Scalar> rho;
  for (const auto &c : T.hnf_coeffs) rho.push_back(eval(c));
  return TorusIdeal::make(C, Lattice::from_rows(rows, C.n()), rho);
}

AffineIdeal Session::affine_ideal(const IdealDecl &d) const { return AffineIdeal(F_, q_, d.gens); }

std::string Session::execute(std::size_t k) const {
  const Command &c = cmds_.at(k);
  std::ostringstream os;
  auto is_affine = [&](const std::string &name) { return ideal_decl(name).kind == "affine"; };
  const std::string &name = c.name;
  if (name == "center") {
    os << ctx().gamma_z().str() << "\n";
  } else if (name == "cvalue") {
    os << ctx().c_value(parse_vec(c.args[0])).str() << "\n";
  } else if (name == "dvalue") {
    os << ctx().d(parse_vec(c.args[0]), parse_vec(c.args[1])).str() << "\n";
  } else if (name == "ideal-from-gens") {
    std::vector<Laurent> g;
    if (c.args[0].front() == '[') {
      std::string body = c.args[0].substr(1, c.args[0].size() - 2);
      if (!trim(body).empty())
        for (const auto &[piece, off] : split_top(body, ',')) g.push_back(parse_laurent(F_, q_.n(), piece));
    } else {
      g = ideal_decl(c.args[0]).gens;
    }
    os << from_generators(ctx(), g).str() << "\n";
  } else if (name == "radical") {
    if (is_affine(c.args[0])) os << radical_affine(affine_ideal(ideal_decl(c.args[0]))).str() << "\n";
    else os << radical(ctx(), torus_ideal(ideal_decl(c.args[0]))).str() << "\n";
  } else if (name == "minprimes") {
    if (is_affine(c.args[0])) {
      for (const auto &p : min_primes_affine(affine_ideal(ideal_decl(c.args[0])), opt_.strata_threads))
        os << "stratum " << index_set(p.stratum) << ": " << p.ideal.str() << "\n";
    } else {
      for (const auto &p : min_assoc_primes(ctx(), torus_ideal(ideal_decl(c.args[0])))) os << p.str() << "\n";
    }
  } else if (name == "classify") {
    if (is_affine(c.args[0])) {
      auto r = classify_affine(affine_ideal(ideal_decl(c.args[0])));
      os << "prime=" << bool_str(r.is_prime) << " completely_prime=" << bool_str(r.is_completely_prime)
         << " primitive=" << bool_str(r.is_primitive) << " stratum=" << index_set(r.stratum);
      if (r.character) os << " character=" << r.character->str();
      os << "\n";
    } else {
      auto r = classify(ctx(), torus_ideal(ideal_decl(c.args[0])));
      os << "prime=" << bool_str(r.is_prime) << " completely_prime=" << bool_str(r.is_completely_prime)
         << " maximal=" << bool_str(r.is_maximal) << " primitive=" << bool_str(r.is_primitive) << " height=" << r.height << "\n";
    }
  } else if (name == "contract") {
    os << contract_from_torus(ctx(), torus_ideal(ideal_decl(c.args[0]))).str() << "\n";
  } else if (name == "saturate-x") {
    auto X = saturate_x(affine_ideal(ideal_decl(c.args[0])));
    os << "closure " << X.closure.str() << "\n";
    os << "character " << (X.character ? X.character->str() : std::string("none")) << "\n";
  } else if (name == "nf" || name == "member") {
    Laurent f = parse_laurent(F_, q_.n(), c.args[1]);
    Laurent r = is_affine(c.args[0]) ? affine_ideal(ideal_decl(c.args[0])).normal_form(f)
                                     : normal_form(ctx(), torus_ideal(ideal_decl(c.args[0])), f);
    if (name == "nf") os << r.str() << "\n";
    else os << bool_str(r.is_zero()) << "\n";
  } else if (name == "quotient-table") {
    os << TwistedGroupAlgebra(ctx(), torus_ideal(ideal_decl(c.args[0]))).table();
  } else if (name == "toric") {
    auto S = parse_vec_list(c.args[0]);
    QMatrix q;
    if (!has_torus_) q = QMatrix::trivial(F_, S.size());
    else if (q_.n() == S.size()) q = q_;
    else throw MathError(Err::DimensionMismatch, std::to_string(S.size()) + " monoid generators but the torus has n=" + std::to_string(q_.n()));
    os << toric_presentation(F_, S, q).str() << "\n";
  } else if (name == "qhat") {
    auto Q = qhat_presentation(F_, q_);
    for (std::size_t i = 0; i < Q.qhat.n(); ++i) {
      os << "[";
      for (std::size_t j = 0; j < Q.qhat.n(); ++j) os << (j ? ", " : "") << Q.qhat(i, j).str();
      os << "]\n";
    }
    os << "<";
    for (std::size_t i = 0; i < Q.generators.size(); ++i) os << (i ? ", " : "") << Q.generators[i].str();
    os << ">\n";
  } else if (name == "congruence") {
    auto cc = congruence_classes(affine_ideal(ideal_decl(c.args[0])), std::stol(c.args[1]));
    auto set = [](const std::vector<Vec> &v) {
      std::string s = "{";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + vec_str(v[i]);
      return s + "}";
    };
    for (const auto &cl : cc.classes) os << set(cl) << "\n";
    if (!cc.zero_class.empty()) os << "zero " << set(cc.zero_class) << "\n";
  }
  return os.str();
}

int Session::run(std::ostream &out, std::ostream &err) const {
  for (std::size_t k = 0; k < cmds_.size(); ++k) {
    const Command &c = cmds_[k];
    std::string label = c.name;
    for (const auto &a : c.args) label += " " + a;
    try {
      out << execute(k);
    } catch (const MathError &e) {
      out.flush();
      err << "line " << c.line << ": " << label << ": " << e.what() << "\n";
      return 2;
    } catch (const ParseError &e) {
      out.flush();
      err << "line " << c.line << ": " << label << ": " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

} // namespace qtb
