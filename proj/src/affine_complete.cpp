#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "qtb/affine.hpp"
#include "qtb/error.hpp"

namespace qtb {

namespace {

bool divides(const Vec &a, const Vec &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Vec vmax(const Vec &a, const Vec &b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

// p - m with either side possibly absent (zero).
struct Bin {
  std::optional<Monomial> p, m;
};

struct Engine {
  const Field &F;
  const QMatrix &q;
  const RewriteSystem &sys; // only for the order
  std::vector<Rule> rules;

  std::optional<Monomial> step(const Rule &r, const Monomial &t) const {
    if (r.zero) return std::nullopt;
    Vec s = vec_sub(t.exp, r.lead);
    // x^m = d(s, lead)^{-1} x^s x^lead -> d(s, lead)^{-1} nu d(s, tail) x^{s + tail}
    Scalar c = t.coef * d_value(q, s, r.lead).inv() * r.nu * d_value(q, s, r.tail);
    return Monomial{c, vec_add(s, r.tail)};
  }

  std::optional<Monomial> reduce(Monomial t, std::size_t skip = SIZE_MAX) const {
    for (;;) {
      bool hit = false;
      for (std::size_t k = 0; k < rules.size(); ++k) {
        if (k == skip || !divides(rules[k].lead, t.exp)) continue;
        auto nx = step(rules[k], t);
        if (!nx) return std::nullopt;
        t = *nx;
        hit = true;
        break;
      }
      if (!hit) return t;
    }
  }

  // Reduce both sides and turn what is left into a rule.
  std::optional<Rule> to_rule(const Bin &b) const {
    std::optional<Monomial> p = b.p ? reduce(*b.p) : std::nullopt;
    std::optional<Monomial> m = b.m ? reduce(*b.m) : std::nullopt;
    if (!p && !m) return std::nullopt;
    Rule r;
    if (!p || !m) {
      r.lead = p ? p->exp : m->exp;
      r.zero = true;
      return r;
    }
    if (p->exp == m->exp) {
      if (p->coef == m->coef) return std::nullopt;
      r.lead = p->exp;
      r.zero = true;
      return r;
    }
    if (sys.greater(p->exp, m->exp)) {
      r.lead = p->exp;
      r.nu = m->coef * p->coef.inv();
      r.tail = m->exp;
    } else {
      r.lead = m->exp;
      r.nu = p->coef * m->coef.inv();
      r.tail = p->exp;
    }
    return r;
  }

  Bin spair(const Rule &a, const Rule &b) const {
    Monomial top{q.one(), vmax(a.lead, b.lead)};
    return Bin{step(a, top), step(b, top)};
  }

  // Right multiple (x^lead - nu x^tail) x_i.
  Bin right_multiple(const Rule &r, std::size_t i) const {
    Vec e(q.n(), 0);
    e[i] = 1;
    Monomial p{d_value(q, r.lead, e), vec_add(r.lead, e)};
    if (r.zero) return Bin{p, std::nullopt};
    Monomial m{r.nu * d_value(q, r.tail, e), vec_add(r.tail, e)};
    return Bin{p, m};
  }

  void run(std::vector<Bin> input) {
    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    auto add = [&](const Rule &r) {
      rules.push_back(r);
      std::size_t k = rules.size() - 1;
      for (std::size_t j = 0; j < k; ++j) pairs.emplace_back(j, k);
    };
    for (const auto &b : input)
      if (auto r = to_rule(b)) add(*r);
    for (;;) {
      while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        if (auto r = to_rule(spair(rules[i], rules[j]))) add(*r);
      }
      // two-sided closure
      bool grew = false;
      for (std::size_t k = 0; k < rules.size(); ++k) {
        if (rules[k].zero) continue;
        for (std::size_t i = 0; i < q.n(); ++i)
          if (auto r = to_rule(right_multiple(rules[k], i))) {
            add(*r);
            grew = true;
          }
      }
      if (!grew && pairs.empty()) break;
    }
    interreduce();
  }

  void interreduce() {
    // minimal leads
    std::vector<Rule> keep;
    for (std::size_t k = 0; k < rules.size(); ++k) {
      bool redundant = false;
      for (std::size_t j = 0; j < rules.size() && !redundant; ++j) {
        if (j == k || !divides(rules[j].lead, rules[k].lead)) continue;
        if (rules[j].lead != rules[k].lead) redundant = true;
        else if (j < k) redundant = true;
      }
      if (!redundant) keep.push_back(rules[k]);
    }
    rules = keep;
    // reduce tails against the other rules
    for (std::size_t k = 0; k < rules.size(); ++k) {
      if (rules[k].zero) continue;
      auto t = reduce(Monomial{rules[k].nu, rules[k].tail}, k);
      if (!t) {
        rules[k].zero = true;
        rules[k].tail.clear();
        rules[k].nu = q.one();
      } else {
        rules[k].nu = t->coef;
        rules[k].tail = t->exp;
      }
    }
    for (auto &r : rules)
      if (r.zero) {
        r.nu = q.one();
        r.tail.clear();
      }
    std::sort(rules.begin(), rules.end(), [&](const Rule &a, const Rule &b) { return sys.greater(a.lead, b.lead); });
    // the unit ideal keeps just 1 -> 0
    for (const auto &r : rules)
      if (r.zero && vec_is_zero(r.lead)) {
        rules = {r};
        break;
      }
  }
};

Bin laurent_to_bin(const Field &F, const QMatrix &q, const Laurent &g) {
  if (g.size() > 2) throw MathError(Err::UnsupportedScalar, g.str() + " is not a binomial");
  for (const auto &[e, c] : g.terms()) {
    if (e.size() != q.n()) throw MathError(Err::DimensionMismatch, "exponent length differs from n");
    for (auto x : e)
      if (x < 0) throw MathError(Err::DimensionMismatch, "negative exponent in " + g.str());
  }
  F.check(g.is_zero() ? F.unit() : g.terms().begin()->second);
  if (g.is_zero()) return Bin{};
  auto it = g.terms().begin();
  if (g.size() == 1) return Bin{Monomial{q.one(), it->first}, std::nullopt};
  auto jt = std::next(it);
  FieldElem ratio = -(jt->second / it->second);
  auto s = ratio.as_scalar();
  if (!s) throw MathError(Err::UnsupportedScalar, "coefficient ratio " + ratio.str() + " in " + g.str() + " is not a toric scalar");
  return Bin{Monomial{q.one(), it->first}, Monomial{*s, jt->first}};
}

} // namespace

bool RewriteSystem::greater(const Vec &a, const Vec &b) const {
  for (auto i : prio_)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

RewriteSystem RewriteSystem::complete(const Field &F, const QMatrix &q, const std::vector<Laurent> &gens,
                                      std::vector<std::size_t> prio) {
  RewriteSystem sys;
  sys.F_ = F;
  sys.q_ = q;
  if (prio.empty()) {
    prio.resize(q.n());
    std::iota(prio.begin(), prio.end(), 0);
  }
  if (prio.size() != q.n()) throw MathError(Err::DimensionMismatch, "variable priority has the wrong length");
  sys.prio_ = prio;
  std::vector<Bin> input;
  for (const auto &g : gens) input.push_back(laurent_to_bin(F, q, g));
  Engine eng{F, sys.q_, sys, {}};
  eng.run(std::move(input));
  sys.rules_ = std::move(eng.rules);
  return sys;
}

std::optional<Monomial> RewriteSystem::reduce(Monomial t) const {
  Engine eng{F_, q_, *this, rules_};
  return eng.reduce(std::move(t));
}

Laurent RewriteSystem::normal_form(const Laurent &f) const {
  Laurent r;
  for (const auto &[e, c] : f.terms()) {
    if (e.size() != n()) throw MathError(Err::DimensionMismatch, "exponent length differs from n");
    auto t = reduce(Monomial{q_.one(), e});
    if (t) r.add_term(t->exp, c * FieldElem(t->coef));
  }
  return r;
}

namespace {

std::string mono_str(const Vec &e) {
  std::string s = "x^(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

} // namespace

std::string RewriteSystem::dump() const {
  std::ostringstream os;
  for (const auto &r : rules_) {
    os << mono_str(r.lead) << " -> ";
    if (r.zero) os << "0";
    else if (r.nu.is_one()) os << mono_str(r.tail);
    else os << r.nu.str() << "*" << mono_str(r.tail);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

AffineIdeal::AffineIdeal(const Field &F, const QMatrix &q, const std::vector<Laurent> &gens)
  : F_(F), sys_(RewriteSystem::complete(F, q, gens)) {}

AffineIdeal AffineIdeal::unit(const Field &F, const QMatrix &q) {
  return AffineIdeal(F, q, {monomial_of(F, Vec(q.n(), 0))});
}

Laurent monomial_of(const Field &F, const Vec &m) { return Laurent::monomial(F.unit(), m); }

std::vector<Laurent> AffineIdeal::generators() const {
  std::vector<Laurent> out;
  for (const auto &r : rules()) {
    if (r.zero) out.push_back(monomial_of(F_, r.lead));
    else out.push_back(Laurent::binomial(F_.unit(), r.lead, FieldElem(r.nu), r.tail));
  }
  return out;
}

bool AffineIdeal::contains_monomial() const {
  return std::any_of(rules().begin(), rules().end(), [](const Rule &r) { return r.zero; });
}

bool AffineIdeal::is_unit() const { return rules().size() == 1 && rules()[0].zero && vec_is_zero(rules()[0].lead); }

bool AffineIdeal::subset_of(const AffineIdeal &o) const {
  for (const auto &g : generators())
    if (!o.contains(g)) return false;
  return true;
}

AffineIdeal AffineIdeal::operator+(const AffineIdeal &o) const {
  auto g = generators();
  auto h = o.generators();
  g.insert(g.end(), h.begin(), h.end());
  return AffineIdeal(F_, q(), g);
}

std::string AffineIdeal::str() const {
  std::string s = "<";
  auto g = generators();
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ", " : "") + g[i].str();
  return s + ">";
}

} // namespace qtb
