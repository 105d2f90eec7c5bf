#ifndef MODULO_MODEL_HPP
#define MODULO_MODEL_HPP

#include <functional>
#include <optional>

#include "modulo/lang.hpp"
#include "modulo/theory.hpp"
#include "modulo/tva.hpp"

namespace modulo {

// ---------------------------------------------------------------------------
// Domain elements
// ---------------------------------------------------------------------------

/// An element of a finite domain. Scalars are positions in a base domain
/// (or truth values when the sort is interpreted by the algebra carrier);
/// elements of arrow sorts are explicit tables indexed by the enumeration
/// of the source domain. A table element exists without its own function
/// space ever being enumerated.
class Elem {
 public:
  enum class Kind { Scalar, Func };

  Elem() = default;
  static Elem scalar(int v) {
    Elem e;
    e.kind_ = Kind::Scalar;
    e.scalar_ = v;
    return e;
  }
  static Elem func(std::vector<Elem> table) {
    Elem e;
    e.kind_ = Kind::Func;
    e.table_ = std::make_shared<const std::vector<Elem>>(std::move(table));
    return e;
  }

  Kind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == Kind::Scalar; }
  int scalar() const { return scalar_; }
  const std::vector<Elem>& table() const { return *table_; }

  bool operator==(const Elem& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::Scalar) return scalar_ == o.scalar_;
    if (table_ == o.table_) return true;
    return *table_ == *o.table_;
  }
  bool operator!=(const Elem& o) const { return !(*this == o); }

  std::string key() const {
    if (kind_ == Kind::Scalar) return std::to_string(scalar_);
    std::string s = "[";
    for (size_t i = 0; i < table_->size(); ++i) {
      if (i) s += " ";
      s += (*table_)[i].key();
    }
    return s + "]";
  }

 private:
  Kind kind_ = Kind::Scalar;
  int scalar_ = 0;
  std::shared_ptr<const std::vector<Elem>> table_;
};

struct EvalError : std::runtime_error {
  enum class Kind { UnboundVariable, DomainUnavailable, NoInterpretation, Shape };
  Kind err;
  EvalError(Kind k, const std::string& m) : std::runtime_error(m), err(k) {}
};

// ---------------------------------------------------------------------------
// Structures
// ---------------------------------------------------------------------------

struct Domain {
  Sort sort{Sort::base("")};
  std::vector<Elem> elems;
  std::map<std::string, int> index;  // elem key → position

  int position(const Elem& e) const {
    auto it = index.find(e.key());
    if (it == index.end())
      throw EvalError(EvalError::Kind::Shape, "element outside its domain enumeration");
    return it->second;
  }
};

inline Domain make_domain(Sort sort, std::vector<Elem> elems) {
  Domain d;
  d.sort = std::move(sort);
  d.elems = std::move(elems);
  for (size_t i = 0; i < d.elems.size(); ++i)
    d.index.emplace(d.elems[i].key(), static_cast<int>(i));
  return d;
}

class FiniteStructure;

/// Interpretation hook for scheme symbols (the STT model interprets the
/// infinite K/S/∀̇/∃̇ families through this). Returns nothing when the
/// required enumerations exceed the structure's caps.
class SchemeInterpreter {
 public:
  virtual ~SchemeInterpreter() = default;
  virtual std::optional<Elem> constant(const FiniteStructure& s, const SymbolRef& sym) const = 0;
  virtual std::optional<Elem> apply(const FiniteStructure& s, const SymbolRef& sym,
                                    const std::vector<Elem>& args) const = 0;
};

/// A B-structure: per-sort finite domains, function interpretations into
/// the domains and predicate interpretations into the algebra carrier.
class FiniteStructure {
 public:
  FiniteTva tva;
  std::map<Sort, Domain> domains;
  std::map<std::string, std::vector<Elem>> func_tables;  // flattened over arg tuples
  std::map<std::string, std::vector<int>> pred_tables;   // flattened, values in B
  std::shared_ptr<const SchemeInterpreter> schemes;
  std::map<std::string, std::vector<std::string>> base_elem_names;
  size_t domain_cap = 10000;

  bool has_domain(const Sort& s) const { return domains.count(s) > 0; }
  const Domain& domain(const Sort& s) const {
    auto it = domains.find(s);
    if (it == domains.end())
      throw EvalError(EvalError::Kind::DomainUnavailable,
                      "no materialized domain for sort " + s.str());
    return it->second;
  }

  /// Interpretations must be total and land in the right domains. Shape
  /// checks that would need an unmaterialized (over-cap) domain are skipped;
  /// evaluation into such a domain reports DomainUnavailable instead.
  void validate_structure(const Signature& sig) const {
    tva.validate_structure();
    for (const auto& [name, rank] : sig.plain_symbols()) {
      size_t want = 1;
      bool sized = true;
      for (const auto& a : rank.args) {
        if (!has_domain(a)) {
          sized = false;
          break;
        }
        want *= domain(a).elems.size();
      }
      if (rank.is_pred) {
        auto it = pred_tables.find(name);
        if (it == pred_tables.end())
          throw EvalError(EvalError::Kind::NoInterpretation,
                          "predicate " + name + " has no interpretation");
        if (sized && it->second.size() != want)
          throw EvalError(EvalError::Kind::Shape, "predicate table for " + name +
                                                      " has the wrong size");
        for (int v : it->second)
          if (v < 0 || v >= tva.size())
            throw EvalError(EvalError::Kind::Shape,
                            "predicate " + name + " maps outside the carrier");
      } else {
        auto it = func_tables.find(name);
        if (it == func_tables.end())
          throw EvalError(EvalError::Kind::NoInterpretation,
                          "function " + name + " has no interpretation");
        if (sized && it->second.size() != want)
          throw EvalError(EvalError::Kind::Shape,
                          "function table for " + name + " has the wrong size");
        if (has_domain(rank.result)) {
          const Domain& res = domain(rank.result);
          for (const auto& e : it->second) res.position(e);  // throws if foreign
        }
      }
    }
  }
};

/// Sort-respecting finite map from variables to domain elements.
using Assignment = std::map<Var, Elem>;

// ---------------------------------------------------------------------------
// Denotation
// ---------------------------------------------------------------------------

namespace detail {

inline size_t flat_index(const FiniteStructure& s, const std::vector<Sort>& arg_sorts,
                         const std::vector<Elem>& args) {
  size_t idx = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    const Domain& d = s.domain(arg_sorts[i]);
    idx = idx * d.elems.size() + static_cast<size_t>(d.position(args[i]));
  }
  return idx;
}

}  // namespace detail

/// ⟦t⟧φ. `benv` carries values for proposition-level binders enclosing the
/// term, innermost first.
inline Elem denote_term(const FiniteStructure& s, const Signature& sig, const Assignment& phi,
                        const Term& t, const std::vector<Elem>& benv = {}) {
  switch (t.kind()) {
    case Term::Kind::Free: {
      auto it = phi.find(t.var());
      if (it == phi.end())
        throw EvalError(EvalError::Kind::UnboundVariable,
                        "assignment does not cover variable " + t.var().name);
      return it->second;
    }
    case Term::Kind::Bound: {
      size_t k = static_cast<size_t>(t.index());
      if (k >= benv.size())
        throw EvalError(EvalError::Kind::UnboundVariable, "dangling bound variable");
      return benv[k];
    }
    case Term::Kind::App: {
      std::vector<Elem> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(denote_term(s, sig, phi, a, benv));
      if (!t.sym().indices.empty() || sig.is_scheme(t.sym().name)) {
        if (!s.schemes)
          throw EvalError(EvalError::Kind::NoInterpretation,
                          "no scheme interpreter for " + t.sym().str());
        auto r = args.empty() ? s.schemes->constant(s, t.sym())
                              : s.schemes->apply(s, t.sym(), args);
        if (!r)
          throw EvalError(EvalError::Kind::DomainUnavailable,
                          "interpretation of " + t.sym().str() +
                              " needs an enumeration beyond the domain cap");
        return *r;
      }
      auto it = s.func_tables.find(t.sym().name);
      if (it == s.func_tables.end())
        throw EvalError(EvalError::Kind::NoInterpretation,
                        "function " + t.sym().name + " has no interpretation");
      Rank rank = sig.resolve(t.sym());
      return it->second.at(detail::flat_index(s, rank.args, args));
    }
  }
  throw EvalError(EvalError::Kind::Shape, "malformed term");
}

/// ⟦A⟧φ: a truth value, or nothing when a quantifier's collected value set
/// falls outside 𝒜/ℰ. The denotation is always defined over full algebras.
inline std::optional<int> denote_prop(const FiniteStructure& s, const Signature& sig,
                                      const Assignment& phi, const Prop& p,
                                      std::vector<Elem>& benv) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Elem> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(denote_term(s, sig, phi, a, benv));
      auto it = s.pred_tables.find(p.pred().name);
      if (it == s.pred_tables.end())
        throw EvalError(EvalError::Kind::NoInterpretation,
                        "predicate " + p.pred().name + " has no interpretation");
      Rank rank = sig.resolve(p.pred());
      return it->second.at(detail::flat_index(s, rank.args, args));
    }
    case Prop::Kind::Top:
      return s.tva.top;
    case Prop::Kind::Bottom:
      return s.tva.bottom;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      auto a = denote_prop(s, sig, phi, p.lhs(), benv);
      auto b = denote_prop(s, sig, phi, p.rhs(), benv);
      if (!a || !b) return std::nullopt;
      if (p.kind() == Prop::Kind::Imp) return s.tva.imp[size_t(*a)][size_t(*b)];
      if (p.kind() == Prop::Kind::And) return s.tva.meet[size_t(*a)][size_t(*b)];
      return s.tva.join[size_t(*a)][size_t(*b)];
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      const Domain& d = s.domain(p.binder_sort());
      BSet values = 0;
      for (const auto& e : d.elems) {
        benv.insert(benv.begin(), e);
        auto v = denote_prop(s, sig, phi, p.body(), benv);
        benv.erase(benv.begin());
        if (!v) return std::nullopt;
        values |= BSet(1) << *v;
      }
      if (p.kind() == Prop::Kind::Forall)
        return s.tva.has_forall(values) ? std::optional<int>(s.tva.forall(values)) : std::nullopt;
      return s.tva.has_exists(values) ? std::optional<int>(s.tva.exists(values)) : std::nullopt;
    }
  }
  throw EvalError(EvalError::Kind::Shape, "malformed proposition");
}

inline std::optional<int> denote_prop(const FiniteStructure& s, const Signature& sig,
                                      const Assignment& phi, const Prop& p) {
  std::vector<Elem> benv;
  return denote_prop(s, sig, phi, p, benv);
}

/// ⟦Γ ⊢ B⟧φ is ⟦(A1 ∧ ... ∧ An) ⇒ B⟧φ, the conjunction folded to the
/// right; the empty context denotes ⊤̃, so ⊢ B denotes ⊤̃ ⇒̃ ⟦B⟧φ.
inline std::optional<int> denote_context(const FiniteStructure& s, const Signature& sig,
                                         const Assignment& phi, const Context& ctx) {
  if (ctx.empty()) return s.tva.top;
  Prop folded = ctx.back();
  for (size_t i = ctx.size() - 1; i-- > 0;) folded = Prop::conj(ctx[i], folded);
  return denote_prop(s, sig, phi, folded);
}

inline std::optional<int> denote_sequent(const FiniteStructure& s, const Signature& sig,
                                         const Assignment& phi, const Sequent& seq) {
  auto c = denote_context(s, sig, phi, seq.ctx);
  auto b = denote_prop(s, sig, phi, seq.concl);
  if (!c || !b) return std::nullopt;
  return s.tva.imp[size_t(*c)][size_t(*b)];
}

// ---------------------------------------------------------------------------
// Assignment enumeration
// ---------------------------------------------------------------------------

/// All sort-respecting assignments over the given variables, in a fixed
/// deterministic order. Throws DomainUnavailable when a variable's sort has
/// no enumerated domain; returns nothing when the count would exceed `cap`.
inline std::optional<std::vector<Assignment>> enumerate_assignments(
    const FiniteStructure& s, const std::set<Var>& vars, size_t cap) {
  std::vector<Var> order(vars.begin(), vars.end());
  size_t total = 1;
  for (const auto& v : order) {
    size_t n = s.domain(v.sort).elems.size();
    if (n == 0) return std::vector<Assignment>{};
    if (total > cap / n) return std::nullopt;
    total *= n;
  }
  std::vector<Assignment> out;
  out.reserve(total);
  std::vector<size_t> odo(order.size(), 0);
  while (true) {
    Assignment a;
    for (size_t i = 0; i < order.size(); ++i)
      a.emplace(order[i], s.domain(order[i].sort).elems[odo[i]]);
    out.push_back(std::move(a));
    size_t i = 0;
    for (; i < order.size(); ++i) {
      if (++odo[i] < s.domain(order[i].sort).elems.size()) break;
      odo[i] = 0;
    }
    if (i == order.size()) break;
    if (order.empty()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model checking
// ---------------------------------------------------------------------------

struct ModelIssue {
  enum class Kind { AxiomNotPositive, RuleMismatch, Undefined };
  Kind kind = Kind::RuleMismatch;
  std::string what;        // axiom or rule, printed
  std::string assignment;  // witnessing assignment, printed
};

inline const char* to_string(ModelIssue::Kind k) {
  switch (k) {
    case ModelIssue::Kind::AxiomNotPositive: return "axiom-not-positive";
    case ModelIssue::Kind::RuleMismatch: return "rule-mismatch";
    case ModelIssue::Kind::Undefined: return "undefined-denotation";
  }
  return "?";
}

struct ModelReport {
  bool ok = true;
  std::vector<ModelIssue> issues;
  int axiom_instances = 0;
  int rule_instances = 0;
  int skipped_instances = 0;  // needed enumerations beyond the cap

  void issue(ModelIssue::Kind k, std::string what, std::string assignment) {
    ok = false;
    issues.push_back(ModelIssue{k, std::move(what), std::move(assignment)});
  }
};

namespace detail {

inline std::string describe_assignment(const Assignment& a) {
  std::string s;
  for (const auto& [v, e] : a) {
    if (!s.empty()) s += ", ";
    s += v.name + "=" + e.key();
  }
  return s.empty() ? "(empty)" : s;
}

/// Ground sort tuples for a scheme rule, drawn from the structure's
/// materialized sorts.
inline std::vector<std::map<std::string, Sort>> sort_instantiations(
    const FiniteStructure& s, const std::vector<std::string>& params) {
  std::vector<Sort> pool;
  for (const auto& [sort, dom] : s.domains) {
    (void)dom;
    pool.push_back(sort);
  }
  std::vector<std::map<std::string, Sort>> out;
  if (params.empty()) {
    out.emplace_back();
    return out;
  }
  std::vector<size_t> odo(params.size(), 0);
  while (true) {
    std::map<std::string, Sort> b;
    for (size_t i = 0; i < params.size(); ++i) b.emplace(params[i], pool[odo[i]]);
    out.push_back(std::move(b));
    size_t i = 0;
    for (; i < params.size(); ++i) {
      if (++odo[i] < pool.size()) break;
      odo[i] = 0;
    }
    if (i == params.size()) break;
  }
  return out;
}

inline RewriteRule instantiate_rule(const RewriteRule& r, const std::map<std::string, Sort>& b) {
  RewriteRule out = r;
  out.sort_params.clear();
  for (auto& v : out.vars) v.sort = v.sort.substitute(b);
  if (r.kind == RewriteRule::Kind::TermRule) {
    out.lhs_term = detail::sort_subst_term(r.lhs_term, b);
    out.rhs_term = detail::sort_subst_term(r.rhs_term, b);
  } else {
    out.lhs_prop = detail::sort_subst_prop(r.lhs_prop, b);
    out.rhs_prop = detail::sort_subst_prop(r.rhs_prop, b);
  }
  return out;
}

}  // namespace detail

/// Checks that the structure is a model of the theory: every axiom denotes
/// a positive value under all assignments, and for every rewrite rule l → r
/// and all assignments ⟦l⟧φ = ⟦r⟧φ (sufficient for the congruence condition,
/// since ≡ is generated by the rules and denotation is compositional).
/// Scheme rules are checked at every sort instantiation whose required
/// domains are materialized; the rest are counted as skipped.
inline ModelReport check_model(const FiniteStructure& s, const TheoryBundle& theory) {
  ModelReport rep;
  s.validate_structure(theory.sig);

  for (const auto& ax : theory.axioms) {
    auto phis = enumerate_assignments(s, free_vars(ax), s.domain_cap);
    if (!phis) {
      ++rep.skipped_instances;
      continue;
    }
    for (const auto& phi : *phis) {
      ++rep.axiom_instances;
      auto v = denote_prop(s, theory.sig, phi, ax);
      if (!v)
        rep.issue(ModelIssue::Kind::Undefined, ax.alpha_key(),
                  detail::describe_assignment(phi));
      else if (!s.tva.pos(*v))
        rep.issue(ModelIssue::Kind::AxiomNotPositive, ax.alpha_key(),
                  detail::describe_assignment(phi));
    }
  }

  for (const auto& rule : theory.rules.rules()) {
    for (const auto& binding : detail::sort_instantiations(s, rule.sort_params)) {
      RewriteRule inst = detail::instantiate_rule(rule, binding);
      std::set<Var> vars(inst.vars.begin(), inst.vars.end());
      bool domains_ok = true;
      for (const auto& v : vars)
        if (!s.has_domain(v.sort)) domains_ok = false;
      if (!domains_ok) {
        ++rep.skipped_instances;
        continue;
      }
      auto phis = enumerate_assignments(s, vars, s.domain_cap);
      if (!phis) {
        ++rep.skipped_instances;
        continue;
      }
      std::string label = rule.label.empty() ? "rule" : rule.label;
      bool counted = false;
      for (const auto& phi : *phis) {
        try {
          if (inst.kind == RewriteRule::Kind::TermRule) {
            Elem l = denote_term(s, theory.sig, phi, inst.lhs_term);
            Elem r = denote_term(s, theory.sig, phi, inst.rhs_term);
            if (!counted) {
              ++rep.rule_instances;
              counted = true;
            }
            if (l != r)
              rep.issue(ModelIssue::Kind::RuleMismatch, label,
                        detail::describe_assignment(phi));
          } else {
            auto l = denote_prop(s, theory.sig, phi, inst.lhs_prop);
            auto r = denote_prop(s, theory.sig, phi, inst.rhs_prop);
            if (!counted) {
              ++rep.rule_instances;
              counted = true;
            }
            if (!l || !r)
              rep.issue(ModelIssue::Kind::Undefined, label, detail::describe_assignment(phi));
            else if (*l != *r)
              rep.issue(ModelIssue::Kind::RuleMismatch, label,
                        detail::describe_assignment(phi));
          }
        } catch (const EvalError& e) {
          if (e.err == EvalError::Kind::DomainUnavailable) {
            ++rep.skipped_instances;
            break;  // this sort instantiation is beyond the materialized cap
          }
          throw;
        }
      }
    }
  }
  return rep;
}

/// Soundness, sampled: every accepted proof's conclusion sequent must
/// denote a positive value under all assignments in every model of the
/// theory. A violation here would witness a soundness bug.
struct SoundnessReport {
  bool ok = true;
  int sequents_checked = 0;
  std::vector<std::string> violations;
};

inline SoundnessReport check_soundness_sample(const FiniteStructure& s,
                                              const TheoryBundle& theory,
                                              const std::vector<Sequent>& conclusions) {
  SoundnessReport rep;
  for (const auto& seq : conclusions) {
    std::set<Var> fv = free_vars(seq.ctx);
    free_vars(seq.concl, fv);
    auto phis = enumerate_assignments(s, fv, s.domain_cap);
    if (!phis) continue;
    for (const auto& phi : *phis) {
      ++rep.sequents_checked;
      auto v = denote_sequent(s, theory.sig, phi, seq);
      if (!v || !s.tva.pos(*v)) {
        rep.ok = false;
        rep.violations.push_back(seq.alpha_key() + " under " +
                                 detail::describe_assignment(phi));
      }
    }
  }
  return rep;
}

}  // namespace modulo

#endif  // MODULO_MODEL_HPP
