#ifndef MODULO_REWRITING_HPP
#define MODULO_REWRITING_HPP

#include <deque>
#include <functional>
#include <optional>

#include "modulo/lang.hpp"

namespace modulo {

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// An oriented rewrite rule: terms rewrite to terms and atomic propositions
/// to propositions. Scheme rules (STT's K, S, ∀̇_T, ...) carry sort
/// parameters that are instantiated during matching by reading sorts off the
/// subject. Binders in a prop-rule rhs are locally nameless, so rhs-bound
/// variables need no freshening beyond their display names.
struct RewriteRule {
  enum class Kind { TermRule, PropRule };

  Kind kind = Kind::TermRule;
  std::string label;
  std::vector<std::string> sort_params;
  std::vector<Var> vars;  // pattern variables; sorts may mention sort_params
  Term lhs_term = Term::bound(0), rhs_term = Term::bound(0);
  Prop lhs_prop = Prop::top(), rhs_prop = Prop::top();

  static RewriteRule term_rule(std::string label, std::vector<std::string> sort_params,
                               std::vector<Var> vars, Term lhs, Term rhs) {
    RewriteRule r;
    r.kind = Kind::TermRule;
    r.label = std::move(label);
    r.sort_params = std::move(sort_params);
    r.vars = std::move(vars);
    r.lhs_term = std::move(lhs);
    r.rhs_term = std::move(rhs);
    return r;
  }
  static RewriteRule prop_rule(std::string label, std::vector<std::string> sort_params,
                               std::vector<Var> vars, Prop lhs, Prop rhs) {
    RewriteRule r;
    r.kind = Kind::PropRule;
    r.label = std::move(label);
    r.sort_params = std::move(sort_params);
    r.vars = std::move(vars);
    r.lhs_prop = std::move(lhs);
    r.rhs_prop = std::move(rhs);
    return r;
  }
};

struct RuleError : std::runtime_error {
  explicit RuleError(const std::string& m) : std::runtime_error(m) {}
};

inline void sort_vars_of_term(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Free:
      collect_sort_vars(t.var().sort, out);
      break;
    case Term::Kind::Bound:
      break;
    case Term::Kind::App:
      for (const auto& s : t.sym().indices) collect_sort_vars(s, out);
      for (const auto& a : t.args()) sort_vars_of_term(a, out);
      break;
  }
}

inline void sort_vars_of_prop(const Prop& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& s : p.pred().indices) collect_sort_vars(s, out);
      for (const auto& a : p.args()) sort_vars_of_term(a, out);
      break;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or:
      sort_vars_of_prop(p.lhs(), out);
      sort_vars_of_prop(p.rhs(), out);
      break;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      collect_sort_vars(p.binder_sort(), out);
      sort_vars_of_prop(p.body(), out);
      break;
    default:
      break;
  }
}

/// Checks the structural discipline on one rule: non-variable term lhs /
/// atomic prop lhs, every free variable of the rhs occurs in the lhs, sorts
/// agree, and every sort parameter is bound by matching the lhs.
inline void validate_rule(const Signature& sig, const RewriteRule& r) {
  auto listed = [&](const Var& v) {
    for (const auto& w : r.vars)
      if (w == v) return true;
    return false;
  };
  if (r.kind == RewriteRule::Kind::TermRule) {
    if (!r.lhs_term.is_app())
      throw RuleError("rule " + r.label + ": term-rule lhs must not be a variable");
    Sort ls = sort_of(sig, r.lhs_term);
    Sort rs = sort_of(sig, r.rhs_term);
    if (ls != rs)
      throw RuleError("rule " + r.label + ": lhs sort " + ls.str() + " differs from rhs sort " +
                      rs.str());
    for (const auto& v : free_vars(r.lhs_term))
      if (!listed(v)) throw RuleError("rule " + r.label + ": undeclared variable " + v.name);
    auto lv = free_vars(r.lhs_term);
    for (const auto& v : free_vars(r.rhs_term))
      if (!lv.count(v))
        throw RuleError("rule " + r.label + ": rhs variable " + v.name +
                        " does not occur in the lhs");
    std::set<std::string> lsv, rsv;
    collect_sort_vars(ls, lsv);
    for (const auto& v : lv) collect_sort_vars(v.sort, lsv);
    sort_vars_of_term(r.lhs_term, lsv);
    sort_vars_of_term(r.rhs_term, rsv);
    for (const auto& s : rsv)
      if (!lsv.count(s))
        throw RuleError("rule " + r.label + ": rhs sort parameter " + s +
                        " is not determined by the lhs");
  } else {
    if (!r.lhs_prop.is_atom())
      throw RuleError("rule " + r.label + ": prop-rule lhs must be atomic");
    well_sorted(sig, r.lhs_prop);
    well_sorted(sig, r.rhs_prop);
    auto lv = free_vars(r.lhs_prop);
    for (const auto& v : lv)
      if (!listed(v)) throw RuleError("rule " + r.label + ": undeclared variable " + v.name);
    for (const auto& v : free_vars(r.rhs_prop))
      if (!lv.count(v))
        throw RuleError("rule " + r.label + ": rhs variable " + v.name +
                        " does not occur in the lhs");
    std::set<std::string> lsv, rsv;
    for (const auto& v : lv) collect_sort_vars(v.sort, lsv);
    sort_vars_of_prop(r.lhs_prop, lsv);
    sort_vars_of_prop(r.rhs_prop, rsv);
    for (const auto& s : rsv)
      if (!lsv.count(s))
        throw RuleError("rule " + r.label + ": rhs sort parameter " + s +
                        " is not determined by the lhs");
  }
}

/// The rule list plus the (unchecked) confluence assumption the paper makes.
/// Confluence checking is out of scope; the flag is metadata.
class RewriteSystem {
 public:
  RewriteSystem() = default;
  explicit RewriteSystem(std::vector<RewriteRule> rules, bool assumed_confluent = true)
      : rules_(std::move(rules)), assumed_confluent_(assumed_confluent) {}

  const std::vector<RewriteRule>& rules() const { return rules_; }
  bool assumed_confluent() const { return assumed_confluent_; }

  void validate(const Signature& sig) const {
    for (const auto& r : rules_) validate_rule(sig, r);
  }

 private:
  std::vector<RewriteRule> rules_;
  bool assumed_confluent_ = true;
};

/// Every search over the rewrite relation is fuelled: the congruence of
/// P → (P ⇒ Q) has no normal forms, so unbounded search would diverge.
struct Budget {
  int max_steps = 10000;
  int max_reducts = 1024;

  Budget() = default;
  Budget(int steps, int reducts) : max_steps(steps), max_reducts(reducts) {
    if (steps <= 0 || reducts <= 0)
      throw std::invalid_argument("budget components must be strictly positive");
  }
};

// ---------------------------------------------------------------------------
// First-order matching
// ---------------------------------------------------------------------------

struct MatchResult {
  std::map<std::string, Term> bindings;    // pattern variable name → subterm
  std::map<std::string, Sort> sort_bindings;
};

namespace detail {

inline bool match_term_rec(const Signature& sig, const Term& pattern, const Term& subject,
                           const std::vector<Sort>& benv, MatchResult& m) {
  switch (pattern.kind()) {
    case Term::Kind::Free: {
      auto it = m.bindings.find(pattern.var().name);
      if (it != m.bindings.end()) return it->second == subject;  // non-linear: alpha-equal
      Sort subject_sort = sort_of(sig, subject, benv);
      if (!match_sort(pattern.var().sort, subject_sort, m.sort_bindings)) return false;
      m.bindings.emplace(pattern.var().name, subject);
      return true;
    }
    case Term::Kind::Bound:
      return false;  // patterns are locally closed
    case Term::Kind::App: {
      if (!subject.is_app()) return false;
      if (pattern.sym().name != subject.sym().name) return false;
      if (pattern.sym().indices.size() != subject.sym().indices.size()) return false;
      for (size_t i = 0; i < pattern.sym().indices.size(); ++i)
        if (!match_sort(pattern.sym().indices[i], subject.sym().indices[i], m.sort_bindings))
          return false;
      if (pattern.args().size() != subject.args().size()) return false;
      for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_term_rec(sig, pattern.args()[i], subject.args()[i], benv, m)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Matches a rule lhs against a subject of the same kind. Returns the unique
/// substitution for left-linear patterns; non-linear patterns additionally
/// require alpha-equal repeats. `benv` gives the sorts of binders enclosing
/// the subject position.
inline std::optional<MatchResult> match(const Signature& sig, const Term& pattern,
                                        const Term& subject,
                                        const std::vector<Sort>& benv = {}) {
  MatchResult m;
  if (detail::match_term_rec(sig, pattern, subject, benv, m)) return m;
  return std::nullopt;
}

inline std::optional<MatchResult> match(const Signature& sig, const Prop& pattern,
                                        const Prop& subject,
                                        const std::vector<Sort>& benv = {}) {
  if (!pattern.is_atom() || !subject.is_atom()) return std::nullopt;
  if (pattern.pred().name != subject.pred().name) return std::nullopt;
  if (pattern.pred().indices.size() != subject.pred().indices.size()) return std::nullopt;
  MatchResult m;
  for (size_t i = 0; i < pattern.pred().indices.size(); ++i)
    if (!match_sort(pattern.pred().indices[i], subject.pred().indices[i], m.sort_bindings))
      return std::nullopt;
  if (pattern.args().size() != subject.args().size()) return std::nullopt;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!detail::match_term_rec(sig, pattern.args()[i], subject.args()[i], benv, m))
      return std::nullopt;
  return m;
}

// ---------------------------------------------------------------------------
// Contraction and one-step rewriting (leftmost-outermost)
// ---------------------------------------------------------------------------

namespace detail {

inline Subst ground_subst(const RewriteRule& r, const MatchResult& m) {
  Subst s;
  for (const auto& v : r.vars) {
    auto it = m.bindings.find(v.name);
    if (it == m.bindings.end()) continue;
    s.emplace(Var{v.name, v.sort.substitute(m.sort_bindings)}, it->second);
  }
  return s;
}

inline Term sort_subst_term(const Term& t, const std::map<std::string, Sort>& b) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return Term::free_var(t.var().name, t.var().sort.substitute(b));
    case Term::Kind::Bound:
      return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(sort_subst_term(a, b));
      return Term::app(t.sym().substitute(b), std::move(args));
    }
  }
  return t;
}

inline Prop sort_subst_prop(const Prop& p, const std::map<std::string, Sort>& b) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(sort_subst_term(a, b));
      return Prop::atom(p.pred().substitute(b), std::move(args));
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::Imp:
      return Prop::imp(sort_subst_prop(p.lhs(), b), sort_subst_prop(p.rhs(), b));
    case Prop::Kind::And:
      return Prop::conj(sort_subst_prop(p.lhs(), b), sort_subst_prop(p.rhs(), b));
    case Prop::Kind::Or:
      return Prop::disj(sort_subst_prop(p.lhs(), b), sort_subst_prop(p.rhs(), b));
    case Prop::Kind::Forall:
      return Prop::forall(p.binder_name(), p.binder_sort().substitute(b),
                          sort_subst_prop(p.body(), b));
    case Prop::Kind::Exists:
      return Prop::exists(p.binder_name(), p.binder_sort().substitute(b),
                          sort_subst_prop(p.body(), b));
  }
  return p;
}

/// Gives every binder introduced by a rule rhs a display name unused
/// anywhere in the rewritten expression.
inline Prop freshen_displays(const Prop& p, std::set<std::string>& avoid) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::Imp:
      return Prop::imp(freshen_displays(p.lhs(), avoid), freshen_displays(p.rhs(), avoid));
    case Prop::Kind::And:
      return Prop::conj(freshen_displays(p.lhs(), avoid), freshen_displays(p.rhs(), avoid));
    case Prop::Kind::Or:
      return Prop::disj(freshen_displays(p.lhs(), avoid), freshen_displays(p.rhs(), avoid));
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      std::string d = fresh_name(p.binder_name().empty() ? "y" : p.binder_name(), avoid);
      avoid.insert(d);
      Prop body = freshen_displays(p.body(), avoid);
      return p.kind() == Prop::Kind::Forall ? Prop::forall(d, p.binder_sort(), body)
                                            : Prop::exists(d, p.binder_sort(), body);
    }
  }
  return p;
}

inline Term contract_term(const RewriteRule& r, const MatchResult& m) {
  return apply_subst(ground_subst(r, m), sort_subst_term(r.rhs_term, m.sort_bindings));
}

inline Prop contract_prop(const RewriteRule& r, const MatchResult& m,
                          std::set<std::string>& avoid) {
  Prop rhs = sort_subst_prop(r.rhs_prop, m.sort_bindings);
  rhs = freshen_displays(rhs, avoid);
  return apply_subst(ground_subst(r, m), rhs);
}

struct StepCtx {
  const Signature* sig;
  const RewriteSystem* sys;
  std::set<std::string> avoid;  // every variable name in the whole subject
};

inline std::optional<Term> step_term(StepCtx& c, const Term& t, std::vector<Sort>& benv) {
  for (const auto& r : c.sys->rules()) {
    if (r.kind != RewriteRule::Kind::TermRule) continue;
    if (auto m = match(*c.sig, r.lhs_term, t, benv)) return contract_term(r, *m);
  }
  if (t.is_app()) {
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (auto s = step_term(c, t.args()[i], benv)) {
        std::vector<Term> args = t.args();
        args[i] = std::move(*s);
        return Term::app(t.sym(), std::move(args));
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Prop> step_prop(StepCtx& c, const Prop& p, std::vector<Sort>& benv) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      for (const auto& r : c.sys->rules()) {
        if (r.kind != RewriteRule::Kind::PropRule) continue;
        if (auto m = match(*c.sig, r.lhs_prop, p, benv)) return contract_prop(r, *m, c.avoid);
      }
      for (size_t i = 0; i < p.args().size(); ++i) {
        if (auto s = step_term(c, p.args()[i], benv)) {
          std::vector<Term> args = p.args();
          args[i] = std::move(*s);
          return Prop::atom(p.pred(), std::move(args));
        }
      }
      return std::nullopt;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return std::nullopt;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      if (auto s = step_prop(c, p.lhs(), benv)) {
        Prop l = std::move(*s);
        return p.kind() == Prop::Kind::Imp   ? Prop::imp(l, p.rhs())
               : p.kind() == Prop::Kind::And ? Prop::conj(l, p.rhs())
                                             : Prop::disj(l, p.rhs());
      }
      if (auto s = step_prop(c, p.rhs(), benv)) {
        Prop rr = std::move(*s);
        return p.kind() == Prop::Kind::Imp   ? Prop::imp(p.lhs(), rr)
               : p.kind() == Prop::Kind::And ? Prop::conj(p.lhs(), rr)
                                             : Prop::disj(p.lhs(), rr);
      }
      return std::nullopt;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      benv.insert(benv.begin(), p.binder_sort());
      auto s = step_prop(c, p.body(), benv);
      benv.erase(benv.begin());
      if (!s) return std::nullopt;
      return p.kind() == Prop::Kind::Forall
                 ? Prop::forall(p.binder_name(), p.binder_sort(), std::move(*s))
                 : Prop::exists(p.binder_name(), p.binder_sort(), std::move(*s));
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Contracts the leftmost-outermost redex, or nothing if `t` is normal.
inline std::optional<Term> rewrite_step(const Signature& sig, const RewriteSystem& sys,
                                        const Term& t) {
  detail::StepCtx c{&sig, &sys, {}};
  all_names(t, c.avoid);
  std::vector<Sort> benv;
  return detail::step_term(c, t, benv);
}

inline std::optional<Prop> rewrite_step(const Signature& sig, const RewriteSystem& sys,
                                        const Prop& p) {
  detail::StepCtx c{&sig, &sys, {}};
  all_names(p, c.avoid);
  std::vector<Sort> benv;
  return detail::step_prop(c, p, benv);
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// `complete` is false when the budget ran out first; `value` is then the
/// last reduct reached.
template <typename T>
struct NormalFormResult {
  T value;
  bool complete = true;
  int steps = 0;
};

template <typename T>
inline NormalFormResult<T> normal_form(const Signature& sig, const RewriteSystem& sys,
                                       const T& start, const Budget& budget = Budget()) {
  NormalFormResult<T> r{start, true, 0};
  while (true) {
    if (r.steps >= budget.max_steps) {
      r.complete = false;
      return r;
    }
    auto next = rewrite_step(sig, sys, r.value);
    if (!next) return r;
    r.value = std::move(*next);
    ++r.steps;
  }
}

// ---------------------------------------------------------------------------
// The congruence ≡, decided by bounded bidirectional joinability
// ---------------------------------------------------------------------------

enum class Cong { Yes, No, Undecided };

inline const char* to_string(Cong c) {
  switch (c) {
    case Cong::Yes:
      return "yes";
    case Cong::No:
      return "no";
    case Cong::Undecided:
      return "undecided";
  }
  return "?";
}

namespace detail {

template <typename T>
inline std::vector<T> all_reducts(const Signature& sig, const RewriteSystem& sys, const T& x);

template <>
inline std::vector<Term> all_reducts<Term>(const Signature& sig, const RewriteSystem& sys,
                                           const Term& x) {
  std::vector<Term> out;
  struct Rec {
    const Signature& sig;
    const RewriteSystem& sys;
    std::vector<Term>& out;
    void at(const Term& t, std::vector<Sort>& benv,
            const std::function<Term(const Term&)>& rebuild) {
      for (const auto& r : sys.rules()) {
        if (r.kind != RewriteRule::Kind::TermRule) continue;
        if (auto m = match(sig, r.lhs_term, t, benv)) out.push_back(rebuild(contract_term(r, *m)));
      }
      if (t.is_app()) {
        for (size_t i = 0; i < t.args().size(); ++i) {
          auto rb = [&, i](const Term& nt) {
            std::vector<Term> args = t.args();
            args[i] = nt;
            return rebuild(Term::app(t.sym(), std::move(args)));
          };
          at(t.args()[i], benv, rb);
        }
      }
    }
  } rec{sig, sys, out};
  std::vector<Sort> benv;
  rec.at(x, benv, [](const Term& t) { return t; });
  return out;
}

inline void all_reducts_prop_rec(const Signature& sig, const RewriteSystem& sys, const Prop& p,
                                 std::vector<Sort>& benv, std::set<std::string>& avoid,
                                 const std::function<Prop(const Prop&)>& rebuild,
                                 std::vector<Prop>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      for (const auto& r : sys.rules()) {
        if (r.kind != RewriteRule::Kind::PropRule) continue;
        if (auto m = match(sig, r.lhs_prop, p, benv)) {
          std::set<std::string> av = avoid;
          out.push_back(rebuild(contract_prop(r, *m, av)));
        }
      }
      for (size_t i = 0; i < p.args().size(); ++i) {
        struct TermRec {
          const Signature& sig;
          const RewriteSystem& sys;
          std::vector<Prop>& out;
          void at(const Term& t, std::vector<Sort>& benv,
                  const std::function<Prop(const Term&)>& rebuild) {
            for (const auto& r : sys.rules()) {
              if (r.kind != RewriteRule::Kind::TermRule) continue;
              if (auto m = match(sig, r.lhs_term, t, benv))
                out.push_back(rebuild(contract_term(r, *m)));
            }
            if (t.is_app()) {
              for (size_t j = 0; j < t.args().size(); ++j) {
                auto rb = [&, j](const Term& nt) {
                  std::vector<Term> args = t.args();
                  args[j] = nt;
                  return rebuild(Term::app(t.sym(), std::move(args)));
                };
                at(t.args()[j], benv, rb);
              }
            }
          }
        } trec{sig, sys, out};
        auto rb = [&, i](const Term& nt) {
          std::vector<Term> args = p.args();
          args[i] = nt;
          return rebuild(Prop::atom(p.pred(), std::move(args)));
        };
        trec.at(p.args()[i], benv, rb);
      }
      break;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      break;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      auto mk = [&](const Prop& a, const Prop& b) {
        return p.kind() == Prop::Kind::Imp   ? Prop::imp(a, b)
               : p.kind() == Prop::Kind::And ? Prop::conj(a, b)
                                             : Prop::disj(a, b);
      };
      all_reducts_prop_rec(sig, sys, p.lhs(), benv, avoid,
                           [&](const Prop& np) { return rebuild(mk(np, p.rhs())); }, out);
      all_reducts_prop_rec(sig, sys, p.rhs(), benv, avoid,
                           [&](const Prop& np) { return rebuild(mk(p.lhs(), np)); }, out);
      break;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      benv.insert(benv.begin(), p.binder_sort());
      auto rb = [&](const Prop& nb) {
        return rebuild(p.kind() == Prop::Kind::Forall
                           ? Prop::forall(p.binder_name(), p.binder_sort(), nb)
                           : Prop::exists(p.binder_name(), p.binder_sort(), nb));
      };
      all_reducts_prop_rec(sig, sys, p.body(), benv, avoid, rb, out);
      benv.erase(benv.begin());
      break;
    }
  }
}

template <>
inline std::vector<Prop> all_reducts<Prop>(const Signature& sig, const RewriteSystem& sys,
                                           const Prop& x) {
  std::vector<Prop> out;
  std::vector<Sort> benv;
  std::set<std::string> avoid;
  all_names(x, avoid);
  all_reducts_prop_rec(sig, sys, x, benv, avoid, [](const Prop& p) { return p; }, out);
  return out;
}

template <typename T>
struct CongSide {
  std::map<std::string, size_t> seen;  // alpha key → index
  std::vector<T> items;
  std::deque<size_t> frontier;
  bool overflow = false;

  bool add(const T& x, int max_reducts) {
    std::string k = x.alpha_key();
    if (seen.count(k)) return false;
    if (static_cast<int>(items.size()) >= max_reducts) {
      overflow = true;
      return false;
    }
    seen.emplace(std::move(k), items.size());
    frontier.push_back(items.size());
    items.push_back(x);
    return true;
  }
  bool contains(const T& x) const { return seen.count(x.alpha_key()) > 0; }
};

}  // namespace detail

/// Three-valued congruence test by breadth-first joinability.
///   Yes       — some reduct of `a` is alpha-equal to some reduct of `b`;
///               always sound for the generated congruence.
///   No        — both reachable-reduct sets were exhausted without overlap;
///               sound when the system is confluent.
///   Undecided — the budget ran out first (or a reduct set overflowed).
template <typename T>
inline Cong congruent(const Signature& sig, const RewriteSystem& sys, const T& a, const T& b,
                      const Budget& budget = Budget()) {
  if (a == b) return Cong::Yes;
  detail::CongSide<T> A, B;
  A.add(a, budget.max_reducts);
  B.add(b, budget.max_reducts);
  if (A.contains(b) || B.contains(a)) return Cong::Yes;
  int steps = 0;
  while (!A.frontier.empty() || !B.frontier.empty()) {
    for (detail::CongSide<T>* side : {&A, &B}) {
      detail::CongSide<T>& mine = *side;
      detail::CongSide<T>& other = side == &A ? B : A;
      // One generation per round keeps exploration breadth-first and fair.
      size_t generation = mine.frontier.size();
      for (size_t g = 0; g < generation; ++g) {
        size_t idx = mine.frontier.front();
        mine.frontier.pop_front();
        for (const T& red : detail::all_reducts<T>(sig, sys, mine.items[idx])) {
          if (++steps > budget.max_steps) return Cong::Undecided;
          if (other.contains(red)) return Cong::Yes;
          mine.add(red, budget.max_reducts);
        }
      }
    }
  }
  if (A.overflow || B.overflow) return Cong::Undecided;
  return Cong::No;
}

}  // namespace modulo

#endif  // MODULO_REWRITING_HPP
