#ifndef MODULO_PROOF_HPP
#define MODULO_PROOF_HPP

#include <cassert>
#include <optional>

#include "modulo/theory.hpp"

namespace modulo {

// ---------------------------------------------------------------------------
// Proof trees
// ---------------------------------------------------------------------------

enum class RuleTag {
  Axiom,
  ImpI,
  ImpE,
  AndI,
  AndE1,
  AndE2,
  OrI1,
  OrI2,
  OrE,
  TopI,
  BotE,
  AllI,
  AllE,
  ExI,
  ExE
};

inline const char* to_string(RuleTag t) {
  switch (t) {
    case RuleTag::Axiom: return "axiom";
    case RuleTag::ImpI: return "impI";
    case RuleTag::ImpE: return "impE";
    case RuleTag::AndI: return "andI";
    case RuleTag::AndE1: return "andE1";
    case RuleTag::AndE2: return "andE2";
    case RuleTag::OrI1: return "orI1";
    case RuleTag::OrI2: return "orI2";
    case RuleTag::OrE: return "orE";
    case RuleTag::TopI: return "topI";
    case RuleTag::BotE: return "botE";
    case RuleTag::AllI: return "allI";
    case RuleTag::AllE: return "allE";
    case RuleTag::ExI: return "exI";
    case RuleTag::ExE: return "exE";
  }
  return "?";
}

inline std::optional<RuleTag> rule_tag_from_string(const std::string& s) {
  for (RuleTag t : {RuleTag::Axiom, RuleTag::ImpI, RuleTag::ImpE, RuleTag::AndI, RuleTag::AndE1,
                    RuleTag::AndE2, RuleTag::OrI1, RuleTag::OrI2, RuleTag::OrE, RuleTag::TopI,
                    RuleTag::BotE, RuleTag::AllI, RuleTag::AllE, RuleTag::ExI, RuleTag::ExE})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

inline size_t premise_count(RuleTag t) {
  switch (t) {
    case RuleTag::Axiom:
    case RuleTag::TopI:
      return 0;
    case RuleTag::ImpI:
    case RuleTag::AndE1:
    case RuleTag::AndE2:
    case RuleTag::OrI1:
    case RuleTag::OrI2:
    case RuleTag::BotE:
    case RuleTag::AllI:
    case RuleTag::AllE:
    case RuleTag::ExI:
      return 1;
    case RuleTag::ImpE:
    case RuleTag::AndI:
    case RuleTag::ExE:
      return 2;
    case RuleTag::OrE:
      return 3;
  }
  return 0;
}

inline bool is_intro_rule(RuleTag t) {
  switch (t) {
    case RuleTag::ImpI:
    case RuleTag::AndI:
    case RuleTag::OrI1:
    case RuleTag::OrI2:
    case RuleTag::TopI:
    case RuleTag::AllI:
    case RuleTag::ExI:
      return true;
    default:
      return false;
  }
}

inline bool is_elim_rule(RuleTag t) {
  switch (t) {
    case RuleTag::ImpE:
    case RuleTag::AndE1:
    case RuleTag::AndE2:
    case RuleTag::OrE:
    case RuleTag::BotE:
    case RuleTag::AllE:
    case RuleTag::ExE:
      return true;
    default:
      return false;
  }
}

/// Index of the major premise of an elimination rule. OrE's premises are
/// ordered (Γ,A ⊢ C), (Γ,B ⊢ C), (Γ ⊢ D) and the third is major.
inline size_t major_index(RuleTag t) {
  return t == RuleTag::OrE ? 2 : 0;
}

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

/// Fully annotated derivation node: every node carries its complete
/// conclusion sequent and the instance data of its Figure-1 schema, so
/// checking is local and error reports are precise.
struct ProofNode {
  RuleTag tag = RuleTag::Axiom;
  Sequent concl;
  std::optional<Prop> prop_a;   // the A of the side condition
  std::optional<Prop> prop_b;   // the B
  std::optional<Var> eigen;     // quantifier variable (AllI/AllE/ExI/ExE)
  std::optional<Term> witness;  // the t of AllE/ExI
  std::vector<ProofPtr> subs;

  std::string alpha_key() const {
    std::string s = "(";
    s += to_string(tag);
    s += " ";
    s += concl.alpha_key();
    if (prop_a) s += " :A " + prop_a->alpha_key();
    if (prop_b) s += " :B " + prop_b->alpha_key();
    if (eigen) s += " :x " + eigen->name + ":" + eigen->sort.str();
    if (witness) s += " :t " + witness->alpha_key();
    for (const auto& sub : subs) s += " " + sub->alpha_key();
    return s + ")";
  }
};

inline ProofPtr make_proof(ProofNode n) { return std::make_shared<ProofNode>(std::move(n)); }

// Convenience constructors used by tests, generators and the parser.
inline ProofPtr mk_axiom(Context ctx, Prop b) {
  ProofNode n;
  n.tag = RuleTag::Axiom;
  n.concl = Sequent{std::move(ctx), std::move(b)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_topi(Context ctx, Prop a = Prop::top()) {
  ProofNode n;
  n.tag = RuleTag::TopI;
  n.concl = Sequent{std::move(ctx), std::move(a)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_impi(Prop c, Prop a, Prop b, ProofPtr sub) {
  ProofNode n;
  n.tag = RuleTag::ImpI;
  Context ctx = sub->concl.ctx;
  ctx.pop_back();
  n.concl = Sequent{std::move(ctx), std::move(c)};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(sub)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_impe(Prop a, Prop b, ProofPtr major, ProofPtr minor) {
  ProofNode n;
  n.tag = RuleTag::ImpE;
  n.concl = Sequent{major->concl.ctx, b};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(major), std::move(minor)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_andi(Prop c, ProofPtr pa, ProofPtr pb) {
  ProofNode n;
  n.tag = RuleTag::AndI;
  n.concl = Sequent{pa->concl.ctx, std::move(c)};
  n.prop_a = pa->concl.concl;
  n.prop_b = pb->concl.concl;
  n.subs = {std::move(pa), std::move(pb)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_ande1(Prop a, Prop b, ProofPtr major) {
  ProofNode n;
  n.tag = RuleTag::AndE1;
  n.concl = Sequent{major->concl.ctx, a};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(major)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_ande2(Prop a, Prop b, ProofPtr major) {
  ProofNode n;
  n.tag = RuleTag::AndE2;
  n.concl = Sequent{major->concl.ctx, b};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(major)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_ori1(Prop c, Prop a, Prop b, ProofPtr sub) {
  ProofNode n;
  n.tag = RuleTag::OrI1;
  n.concl = Sequent{sub->concl.ctx, std::move(c)};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(sub)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_ori2(Prop c, Prop a, Prop b, ProofPtr sub) {
  ProofNode n;
  n.tag = RuleTag::OrI2;
  n.concl = Sequent{sub->concl.ctx, std::move(c)};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(sub)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_ore(Prop c, Prop a, Prop b, ProofPtr br1, ProofPtr br2, ProofPtr major) {
  ProofNode n;
  n.tag = RuleTag::OrE;
  n.concl = Sequent{major->concl.ctx, std::move(c)};
  n.prop_a = std::move(a);
  n.prop_b = std::move(b);
  n.subs = {std::move(br1), std::move(br2), std::move(major)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_bote(Prop a, ProofPtr major) {
  ProofNode n;
  n.tag = RuleTag::BotE;
  n.concl = Sequent{major->concl.ctx, std::move(a)};
  n.subs = {std::move(major)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_alli(Prop b, Var x, ProofPtr sub) {
  ProofNode n;
  n.tag = RuleTag::AllI;
  n.concl = Sequent{sub->concl.ctx, std::move(b)};
  n.eigen = std::move(x);
  n.prop_a = sub->concl.concl;
  n.subs = {std::move(sub)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_alle(Prop c, Var x, Prop a, Term t, ProofPtr major) {
  ProofNode n;
  n.tag = RuleTag::AllE;
  n.concl = Sequent{major->concl.ctx, std::move(c)};
  n.eigen = std::move(x);
  n.prop_a = std::move(a);
  n.witness = std::move(t);
  n.subs = {std::move(major)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_exi(Prop b, Var x, Prop a, Term t, ProofPtr sub) {
  ProofNode n;
  n.tag = RuleTag::ExI;
  n.concl = Sequent{sub->concl.ctx, std::move(b)};
  n.eigen = std::move(x);
  n.prop_a = std::move(a);
  n.witness = std::move(t);
  n.subs = {std::move(sub)};
  return make_proof(std::move(n));
}
inline ProofPtr mk_exe(Prop b, Var x, Prop a, ProofPtr major, ProofPtr minor) {
  ProofNode n;
  n.tag = RuleTag::ExE;
  n.concl = Sequent{major->concl.ctx, std::move(b)};
  n.eigen = std::move(x);
  n.prop_a = std::move(a);
  n.subs = {std::move(major), std::move(minor)};
  return make_proof(std::move(n));
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

struct CheckFailure {
  enum class Kind {
    Malformed,
    SortProblem,
    ContextMismatch,
    PremiseMismatch,
    CongruenceNo,
    CongruenceUndecided,
    EigenNotFresh
  };
  std::vector<int> path;  // child indices from the root
  std::string rule;
  Kind kind = Kind::Malformed;
  std::string message;

  std::string path_str() const {
    if (path.empty()) return "root";
    std::string s;
    for (size_t i = 0; i < path.size(); ++i) {
      if (i) s += ".";
      s += std::to_string(path[i]);
    }
    return s;
  }
};

inline const char* to_string(CheckFailure::Kind k) {
  switch (k) {
    case CheckFailure::Kind::Malformed: return "malformed";
    case CheckFailure::Kind::SortProblem: return "sort";
    case CheckFailure::Kind::ContextMismatch: return "context-mismatch";
    case CheckFailure::Kind::PremiseMismatch: return "premise-mismatch";
    case CheckFailure::Kind::CongruenceNo: return "congruence-no";
    case CheckFailure::Kind::CongruenceUndecided: return "congruence-undecided";
    case CheckFailure::Kind::EigenNotFresh: return "eigenvariable-not-fresh";
  }
  return "?";
}

struct CheckReport {
  bool accepted = false;
  std::vector<CheckFailure> failures;
};

namespace detail {

struct Checker {
  const TheoryBundle& theory;
  Budget budget;
  std::vector<CheckFailure> failures;
  std::vector<int> path;

  void fail(RuleTag tag, CheckFailure::Kind kind, std::string msg) {
    failures.push_back(CheckFailure{path, to_string(tag), kind, std::move(msg)});
  }

  /// Side condition L ≡ R; an Undecided verdict is reported as its own
  /// failure class — the proof is neither accepted nor refuted by it.
  void require_cong(RuleTag tag, const Prop& l, const Prop& r, const char* what) {
    Cong c = congruent(theory.sig, theory.rules, l, r, budget);
    if (c == Cong::Yes) return;
    auto kind = c == Cong::No ? CheckFailure::Kind::CongruenceNo
                              : CheckFailure::Kind::CongruenceUndecided;
    fail(tag, kind,
         std::string(what) + ": " + l.alpha_key() + " ≡ " + r.alpha_key() + " is " +
             to_string(c));
  }

  void require_prop_eq(RuleTag tag, const Prop& got, const Prop& want, const char* what) {
    if (got != want)
      fail(tag, CheckFailure::Kind::PremiseMismatch,
           std::string(what) + ": expected " + want.alpha_key() + ", found " + got.alpha_key());
  }

  void require_ctx(RuleTag tag, const Context& premise, const Context& expected) {
    if (premise.size() != expected.size()) {
      fail(tag, CheckFailure::Kind::ContextMismatch,
           "premise context has " + std::to_string(premise.size()) + " members, expected " +
               std::to_string(expected.size()));
      return;
    }
    for (size_t i = 0; i < premise.size(); ++i)
      if (premise[i] != expected[i]) {
        fail(tag, CheckFailure::Kind::ContextMismatch,
             "premise context member " + std::to_string(i) + " is " + premise[i].alpha_key() +
                 ", expected " + expected[i].alpha_key());
        return;
      }
  }

  void require_fresh(RuleTag tag, const Var& x, const std::set<Var>& fv, const char* where) {
    for (const auto& v : fv)
      if (v.name == x.name) {
        fail(tag, CheckFailure::Kind::EigenNotFresh,
             "eigenvariable " + x.name + " occurs free in " + where);
        return;
      }
  }

  void well_sorted_or_fail(RuleTag tag, const Prop& p) {
    try {
      well_sorted(theory.sig, p);
    } catch (const SortError& e) {
      fail(tag, CheckFailure::Kind::SortProblem, e.what());
    }
  }

  void visit(const ProofNode& n) {
    if (n.subs.size() != premise_count(n.tag)) {
      fail(n.tag, CheckFailure::Kind::Malformed,
           std::string(to_string(n.tag)) + " has " + std::to_string(n.subs.size()) +
               " premises, expected " + std::to_string(premise_count(n.tag)));
      return;
    }
    for (const auto& p : n.concl.ctx) well_sorted_or_fail(n.tag, p);
    well_sorted_or_fail(n.tag, n.concl.concl);

    const Context& ctx = n.concl.ctx;
    const Prop& goal = n.concl.concl;
    switch (n.tag) {
      case RuleTag::Axiom: {
        // B ≡ A for some A in Γ — the whole context is searched, and the
        // theory's axioms count as extra context members.
        bool yes = false, undecided = false;
        auto probe = [&](const Prop& a) {
          if (yes) return;
          Cong c = congruent(theory.sig, theory.rules, goal, a, budget);
          if (c == Cong::Yes) yes = true;
          if (c == Cong::Undecided) undecided = true;
        };
        for (const auto& a : ctx) probe(a);
        for (const auto& a : theory.axioms) probe(a);
        if (!yes)
          fail(n.tag,
               undecided ? CheckFailure::Kind::CongruenceUndecided
                         : CheckFailure::Kind::CongruenceNo,
               "no context member or axiom is congruent to " + goal.alpha_key());
        break;
      }
      case RuleTag::ImpI: {
        if (!n.prop_a || !n.prop_b) {
          fail(n.tag, CheckFailure::Kind::Malformed, "impI needs :A and :B");
          break;
        }
        Context want = ctx;
        want.push_back(*n.prop_a);
        require_ctx(n.tag, n.subs[0]->concl.ctx, want);
        require_prop_eq(n.tag, n.subs[0]->concl.concl, *n.prop_b, "premise conclusion");
        require_cong(n.tag, goal, Prop::imp(*n.prop_a, *n.prop_b), "C ≡ A ⇒ B");
        break;
      }
      case RuleTag::ImpE: {
        if (!n.prop_a || !n.prop_b) {
          fail(n.tag, CheckFailure::Kind::Malformed, "impE needs :A and :B");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_ctx(n.tag, n.subs[1]->concl.ctx, ctx);
        require_prop_eq(n.tag, n.subs[1]->concl.concl, *n.prop_a, "minor premise");
        require_prop_eq(n.tag, goal, *n.prop_b, "conclusion");
        require_cong(n.tag, n.subs[0]->concl.concl, Prop::imp(*n.prop_a, *n.prop_b),
                     "C ≡ A ⇒ B");
        break;
      }
      case RuleTag::AndI: {
        if (!n.prop_a || !n.prop_b) {
          fail(n.tag, CheckFailure::Kind::Malformed, "andI needs :A and :B");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_ctx(n.tag, n.subs[1]->concl.ctx, ctx);
        require_prop_eq(n.tag, n.subs[0]->concl.concl, *n.prop_a, "first premise");
        require_prop_eq(n.tag, n.subs[1]->concl.concl, *n.prop_b, "second premise");
        require_cong(n.tag, goal, Prop::conj(*n.prop_a, *n.prop_b), "C ≡ A ∧ B");
        break;
      }
      case RuleTag::AndE1:
      case RuleTag::AndE2: {
        if (!n.prop_a || !n.prop_b) {
          fail(n.tag, CheckFailure::Kind::Malformed, "andE needs :A and :B");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_prop_eq(n.tag, goal, n.tag == RuleTag::AndE1 ? *n.prop_a : *n.prop_b,
                        "conclusion");
        require_cong(n.tag, n.subs[0]->concl.concl, Prop::conj(*n.prop_a, *n.prop_b),
                     "C ≡ A ∧ B");
        break;
      }
      case RuleTag::OrI1:
      case RuleTag::OrI2: {
        if (!n.prop_a || !n.prop_b) {
          fail(n.tag, CheckFailure::Kind::Malformed, "orI needs :A and :B");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_prop_eq(n.tag, n.subs[0]->concl.concl,
                        n.tag == RuleTag::OrI1 ? *n.prop_a : *n.prop_b, "premise");
        require_cong(n.tag, goal, Prop::disj(*n.prop_a, *n.prop_b), "C ≡ A ∨ B");
        break;
      }
      case RuleTag::OrE: {
        if (!n.prop_a || !n.prop_b) {
          fail(n.tag, CheckFailure::Kind::Malformed, "orE needs :A and :B");
          break;
        }
        Context want1 = ctx;
        want1.push_back(*n.prop_a);
        Context want2 = ctx;
        want2.push_back(*n.prop_b);
        require_ctx(n.tag, n.subs[0]->concl.ctx, want1);
        require_ctx(n.tag, n.subs[1]->concl.ctx, want2);
        require_ctx(n.tag, n.subs[2]->concl.ctx, ctx);
        require_prop_eq(n.tag, n.subs[0]->concl.concl, goal, "first branch");
        require_prop_eq(n.tag, n.subs[1]->concl.concl, goal, "second branch");
        require_cong(n.tag, n.subs[2]->concl.concl, Prop::disj(*n.prop_a, *n.prop_b),
                     "D ≡ A ∨ B");
        break;
      }
      case RuleTag::TopI:
        require_cong(n.tag, goal, Prop::top(), "A ≡ ⊤");
        break;
      case RuleTag::BotE:
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_cong(n.tag, n.subs[0]->concl.concl, Prop::bottom(), "B ≡ ⊥");
        break;
      case RuleTag::AllI: {
        if (!n.eigen) {
          fail(n.tag, CheckFailure::Kind::Malformed, "allI needs :x");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_fresh(n.tag, *n.eigen, free_vars(ctx), "the context");
        if (n.prop_a)
          require_prop_eq(n.tag, n.subs[0]->concl.concl, *n.prop_a, "premise vs stored :A");
        require_cong(n.tag, goal, forall_over(*n.eigen, n.subs[0]->concl.concl),
                     "B ≡ ∀x A");
        break;
      }
      case RuleTag::AllE: {
        if (!n.eigen || !n.prop_a || !n.witness) {
          fail(n.tag, CheckFailure::Kind::Malformed, "allE needs :x, :A and :t");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_cong(n.tag, n.subs[0]->concl.concl, forall_over(*n.eigen, *n.prop_a),
                     "B ≡ ∀x A");
        require_cong(n.tag, goal, apply_subst(single_subst(*n.eigen, *n.witness), *n.prop_a),
                     "C ≡ (t/x)A");
        break;
      }
      case RuleTag::ExI: {
        if (!n.eigen || !n.prop_a || !n.witness) {
          fail(n.tag, CheckFailure::Kind::Malformed, "exI needs :x, :A and :t");
          break;
        }
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_cong(n.tag, goal, exists_over(*n.eigen, *n.prop_a), "B ≡ ∃x A");
        require_cong(n.tag, n.subs[0]->concl.concl,
                     apply_subst(single_subst(*n.eigen, *n.witness), *n.prop_a),
                     "C ≡ (t/x)A");
        break;
      }
      case RuleTag::ExE: {
        if (!n.eigen || !n.prop_a) {
          fail(n.tag, CheckFailure::Kind::Malformed, "exE needs :x and :A");
          break;
        }
        Context want = ctx;
        want.push_back(*n.prop_a);
        require_ctx(n.tag, n.subs[0]->concl.ctx, ctx);
        require_ctx(n.tag, n.subs[1]->concl.ctx, want);
        require_prop_eq(n.tag, n.subs[1]->concl.concl, goal, "minor premise conclusion");
        require_cong(n.tag, n.subs[0]->concl.concl, exists_over(*n.eigen, *n.prop_a),
                     "C ≡ ∃x A");
        auto fv = free_vars(ctx);
        free_vars(goal, fv);
        require_fresh(n.tag, *n.eigen, fv, "the context or the conclusion");
        break;
      }
    }

    for (size_t i = 0; i < n.subs.size(); ++i) {
      path.push_back(static_cast<int>(i));
      visit(*n.subs[i]);
      path.pop_back();
    }
  }
};

}  // namespace detail

/// Checks a fully annotated proof against every Figure-1 schema instance:
/// premise sequents must match the stored instance data, every ≡ side
/// condition must come back Yes from `congruent`, and eigenvariable
/// freshness must hold. Axioms of the theory act as extra context members.
inline CheckReport check(const TheoryBundle& theory, const ProofPtr& proof,
                         const Budget& budget = Budget()) {
  detail::Checker c{theory, budget, {}, {}};
  c.visit(*proof);
  CheckReport r;
  r.failures = std::move(c.failures);
  r.accepted = r.failures.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Classifiers
// ---------------------------------------------------------------------------

/// A proof is neutral when its last rule is the axiom rule or an
/// elimination rule, but not an introduction rule.
inline bool is_neutral(const ProofPtr& p) {
  return p->tag == RuleTag::Axiom || is_elim_rule(p->tag);
}

/// The positive inductive definition of cut-free proofs: axiom roots pass;
/// intro roots pass when all subproofs pass; elim roots pass when the major
/// premise is proved by a neutral cut-free proof and the rest are cut-free.
inline bool is_cut_free(const ProofPtr& p) {
  if (p->tag == RuleTag::Axiom) return true;
  if (is_intro_rule(p->tag)) {
    for (const auto& s : p->subs)
      if (!is_cut_free(s)) return false;
    return true;
  }
  size_t m = major_index(p->tag);
  for (size_t i = 0; i < p->subs.size(); ++i) {
    if (!is_cut_free(p->subs[i])) return false;
    if (i == m && !is_neutral(p->subs[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Proof transformations
// ---------------------------------------------------------------------------

namespace detail {

inline void proof_names(const ProofNode& n, std::set<std::string>& out) {
  for (const auto& p : n.concl.ctx) all_names(p, out);
  all_names(n.concl.concl, out);
  if (n.prop_a) all_names(*n.prop_a, out);
  if (n.prop_b) all_names(*n.prop_b, out);
  if (n.eigen) out.insert(n.eigen->name);
  if (n.witness) all_names(*n.witness, out);
  for (const auto& s : n.subs) proof_names(*s, out);
}

inline ProofPtr subst_proof(const ProofPtr& p, const Subst& s);

/// Renames the eigenvariable of an AllI/ExE node to a fresh one.
inline ProofPtr rename_eigen(const ProofNode& n, const std::set<std::string>& extra_avoid) {
  std::set<std::string> avoid = extra_avoid;
  proof_names(n, avoid);
  Var fresh{fresh_name(n.eigen->name, avoid), n.eigen->sort};
  Subst ren = single_subst(*n.eigen, Term::free_var(fresh));
  ProofNode out = n;
  out.eigen = fresh;
  if (n.tag == RuleTag::AllI) {
    out.subs[0] = subst_proof(n.subs[0], ren);
    if (out.prop_a) out.prop_a = apply_subst(ren, *out.prop_a);
  } else {  // ExE: the hypothesis A and the minor premise mention x
    out.prop_a = apply_subst(ren, *out.prop_a);
    out.subs[1] = subst_proof(n.subs[1], ren);
  }
  return make_proof(std::move(out));
}

inline ProofPtr subst_proof(const ProofPtr& p, const Subst& s) {
  if (s.empty()) return p;
  const ProofNode* node = p.get();
  ProofPtr renamed;
  Subst use = s;
  if ((node->tag == RuleTag::AllI || node->tag == RuleTag::ExE) && node->eigen) {
    // The eigenvariable is proof-level bound from this node up: it escapes
    // the substitution, and a clash with incoming terms forces a rename.
    use.erase(*node->eigen);
    bool clash = false;
    for (const auto& [v, t] : use) {
      (void)v;
      for (const auto& fv : free_vars(t))
        if (fv.name == node->eigen->name) clash = true;
    }
    if (clash) {
      std::set<std::string> avoid;
      for (const auto& [v, t] : use) {
        avoid.insert(v.name);
        all_names(t, avoid);
      }
      renamed = rename_eigen(*node, avoid);
      node = renamed.get();
    }
    if (use.empty()) return renamed ? renamed : p;
  }
  ProofNode out = *node;
  for (auto& cp : out.concl.ctx) cp = apply_subst(use, cp);
  out.concl.concl = apply_subst(use, out.concl.concl);
  if (out.prop_a) out.prop_a = apply_subst(use, *out.prop_a);
  if (out.prop_b) out.prop_b = apply_subst(use, *out.prop_b);
  if (out.witness) out.witness = apply_subst(use, *out.witness);
  for (auto& sub : out.subs) sub = subst_proof(sub, use);
  return make_proof(std::move(out));
}

/// Inserts `props` at position `pos` of every context in the subtree
/// (weakening). Eigenvariables clashing with the inserted propositions are
/// renamed first.
inline ProofPtr weaken_insert(const ProofPtr& p, size_t pos, const std::vector<Prop>& props) {
  if (props.empty()) return p;
  const ProofNode* node = p.get();
  ProofPtr renamed;
  if ((node->tag == RuleTag::AllI || node->tag == RuleTag::ExE) && node->eigen) {
    std::set<std::string> inserted;
    for (const auto& q : props) {
      for (const auto& v : free_vars(q)) inserted.insert(v.name);
    }
    if (inserted.count(node->eigen->name)) {
      renamed = rename_eigen(*node, inserted);
      node = renamed.get();
    }
  }
  ProofNode out = *node;
  out.concl.ctx.insert(out.concl.ctx.begin() + static_cast<long>(pos), props.begin(),
                       props.end());
  for (auto& sub : out.subs) sub = weaken_insert(sub, pos, props);
  return make_proof(std::move(out));
}

inline ProofPtr with_concl_prop(const ProofPtr& p, const Prop& np) {
  if (p->concl.concl == np) return p;
  ProofNode out = *p;
  out.concl.concl = np;
  switch (p->tag) {
    case RuleTag::ImpE:
      out.prop_b = np;
      break;
    case RuleTag::AndE1:
      out.prop_a = np;
      break;
    case RuleTag::AndE2:
      out.prop_b = np;
      break;
    case RuleTag::OrE:
      // Branches conclude the same proposition as the node.
      out.subs[0] = with_concl_prop(p->subs[0], np);
      out.subs[1] = with_concl_prop(p->subs[1], np);
      break;
    case RuleTag::ExE: {
      out.subs[1] = with_concl_prop(p->subs[1], np);
      // ≡ can introduce variables backwards; keep x ∉ FV(B) intact.
      if (out.eigen) {
        for (const auto& v : free_vars(np))
          if (v.name == out.eigen->name) {
            ProofPtr r = rename_eigen(out, {});
            return r;
          }
      }
      break;
    }
    default:
      break;
  }
  return make_proof(std::move(out));
}

/// Replaces uses of the hypothesis at context position `pos` by the proof
/// `rho` (which proves ctx[0..pos) ⊢ ctx[pos], up to ≡). Substitution is by
/// position, so contraction stays explicit.
inline ProofPtr subst_hyp(const TheoryBundle& th, const Budget& budget, const ProofPtr& p,
                          size_t pos, const ProofPtr& rho) {
  const ProofNode& n = *p;
  Context reduced = n.concl.ctx;
  reduced.erase(reduced.begin() + static_cast<long>(pos));
  if (n.tag == RuleTag::Axiom) {
    const Prop& goal = n.concl.concl;
    for (size_t j = 0; j < n.concl.ctx.size(); ++j) {
      if (j == pos) continue;
      if (congruent(th.sig, th.rules, goal, n.concl.ctx[j], budget) == Cong::Yes)
        return mk_axiom(std::move(reduced), goal);
    }
    for (const auto& ax : th.axioms)
      if (congruent(th.sig, th.rules, goal, ax, budget) == Cong::Yes)
        return mk_axiom(std::move(reduced), goal);
    // Only the removed hypothesis justified this leaf: splice in rho,
    // retargeted to this leaf's proposition and weakened to its context.
    ProofPtr r = with_concl_prop(rho, goal);
    std::vector<Prop> extra(n.concl.ctx.begin() + static_cast<long>(pos) + 1,
                            n.concl.ctx.end());
    return weaken_insert(r, pos, extra);
  }
  ProofNode out = n;
  out.concl.ctx = std::move(reduced);
  for (auto& sub : out.subs) sub = subst_hyp(th, budget, sub, pos, rho);
  return make_proof(std::move(out));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

enum class RedexKind { Detour, Permutative };

struct RedexInfo {
  std::vector<int> path;
  RedexKind kind = RedexKind::Detour;
};

namespace detail {

/// Matching introduction tag for each elimination, recognized modulo ≡.
inline std::optional<ProofPtr> try_detour(const TheoryBundle& th, const Budget& budget,
                                          const ProofNode& n) {
  if (!is_elim_rule(n.tag) || n.subs.empty()) return std::nullopt;
  const ProofPtr& major = n.subs[major_index(n.tag)];
  auto cong = [&](const Prop& a, const Prop& b) {
    return congruent(th.sig, th.rules, a, b, budget) == Cong::Yes;
  };
  size_t base = n.concl.ctx.size();
  switch (n.tag) {
    case RuleTag::ImpE: {
      if (major->tag != RuleTag::ImpI) return std::nullopt;
      if (!n.prop_a || !n.prop_b || !major->prop_a || !major->prop_b) return std::nullopt;
      if (!cong(*n.prop_a, *major->prop_a) || !cong(*n.prop_b, *major->prop_b))
        return std::nullopt;
      ProofPtr arg = with_concl_prop(n.subs[1], *major->prop_a);
      ProofPtr r = subst_hyp(th, budget, major->subs[0], base, arg);
      return with_concl_prop(r, n.concl.concl);
    }
    case RuleTag::AndE1:
    case RuleTag::AndE2: {
      if (major->tag != RuleTag::AndI) return std::nullopt;
      if (!n.prop_a || !n.prop_b || !major->prop_a || !major->prop_b) return std::nullopt;
      if (n.tag == RuleTag::AndE1) {
        if (!cong(*n.prop_a, *major->prop_a)) return std::nullopt;
        return with_concl_prop(major->subs[0], n.concl.concl);
      }
      if (!cong(*n.prop_b, *major->prop_b)) return std::nullopt;
      return with_concl_prop(major->subs[1], n.concl.concl);
    }
    case RuleTag::OrE: {
      if (major->tag != RuleTag::OrI1 && major->tag != RuleTag::OrI2) return std::nullopt;
      if (!n.prop_a || !n.prop_b || !major->prop_a || !major->prop_b) return std::nullopt;
      bool left = major->tag == RuleTag::OrI1;
      const Prop& mine = left ? *n.prop_a : *n.prop_b;
      const Prop& theirs = left ? *major->prop_a : *major->prop_b;
      if (!cong(mine, theirs)) return std::nullopt;
      ProofPtr arg = with_concl_prop(major->subs[0], mine);
      const ProofPtr& branch = left ? n.subs[0] : n.subs[1];
      return subst_hyp(th, budget, branch, base, arg);
    }
    case RuleTag::AllE: {
      if (major->tag != RuleTag::AllI) return std::nullopt;
      if (!n.eigen || !n.witness || !major->eigen) return std::nullopt;
      Prop inst = apply_subst(single_subst(*major->eigen, *n.witness),
                              major->subs[0]->concl.concl);
      if (!cong(inst, n.concl.concl)) return std::nullopt;
      ProofPtr r = subst_proof(major->subs[0], single_subst(*major->eigen, *n.witness));
      return with_concl_prop(r, n.concl.concl);
    }
    case RuleTag::ExE: {
      if (major->tag != RuleTag::ExI) return std::nullopt;
      if (!n.eigen || !n.prop_a || !major->witness) return std::nullopt;
      Prop inst = apply_subst(single_subst(*n.eigen, *major->witness), *n.prop_a);
      if (!cong(inst, major->subs[0]->concl.concl)) return std::nullopt;
      ProofPtr minor = subst_proof(n.subs[1], single_subst(*n.eigen, *major->witness));
      ProofPtr arg = with_concl_prop(major->subs[0], inst);
      return subst_hyp(th, budget, minor, base, arg);
    }
    case RuleTag::BotE:
      return std::nullopt;  // ⊥ has no introduction rule
    default:
      return std::nullopt;
  }
}

/// Hoists an elimination across an OrE/ExE major premise so that a neutral
/// major can emerge.
inline std::optional<ProofPtr> try_permutative(const TheoryBundle& th, const Budget& budget,
                                               const ProofNode& n) {
  (void)th;
  (void)budget;
  if (!is_elim_rule(n.tag) || n.subs.empty()) return std::nullopt;
  size_t m = major_index(n.tag);
  const ProofPtr& major = n.subs[m];
  if (major->tag != RuleTag::OrE && major->tag != RuleTag::ExE) return std::nullopt;
  size_t base = n.concl.ctx.size();
  const Prop& goal = n.concl.concl;

  auto hoisted_inner = [&](const ProofPtr& new_major, const Prop& hyp) -> ProofPtr {
    // The outer elimination, rebuilt over Γ,hyp with its major premise
    // replaced by `new_major`.
    ProofNode inner = n;
    inner.concl.ctx.push_back(hyp);
    inner.concl.concl = goal;
    for (size_t i = 0; i < inner.subs.size(); ++i)
      inner.subs[i] = i == m ? new_major : weaken_insert(n.subs[i], base, {hyp});
    ProofPtr r = make_proof(std::move(inner));
    // The inner copy is itself an ExE whose eigenvariable may clash with
    // the new hypothesis.
    if (r->tag == RuleTag::ExE && r->eigen) {
      for (const auto& v : free_vars(hyp))
        if (v.name == r->eigen->name) return rename_eigen(*r, {});
    }
    return r;
  };

  if (major->tag == RuleTag::OrE) {
    if (!major->prop_a || !major->prop_b) return std::nullopt;
    ProofNode out = *major;  // tag OrE, data A/B kept
    out.concl = Sequent{n.concl.ctx, goal};
    out.subs[0] = hoisted_inner(major->subs[0], *major->prop_a);
    out.subs[1] = hoisted_inner(major->subs[1], *major->prop_b);
    return make_proof(std::move(out));
  }
  // ExE major.
  if (!major->eigen || !major->prop_a) return std::nullopt;
  ProofPtr maj = major;
  for (const auto& v : free_vars(goal)) {
    if (v.name == maj->eigen->name) {
      maj = rename_eigen(*major, free_names(goal));
      break;
    }
  }
  ProofNode out = *maj;  // tag ExE, eigen and :A kept
  out.concl = Sequent{n.concl.ctx, goal};
  out.subs[1] = hoisted_inner(maj->subs[1], *maj->prop_a);
  return make_proof(std::move(out));
}

inline std::optional<ProofPtr> reduce_rec(const TheoryBundle& th, const Budget& budget,
                                          const ProofPtr& p, std::vector<int>* path,
                                          RedexKind* kind) {
  if (auto r = try_detour(th, budget, *p)) {
    if (kind) *kind = RedexKind::Detour;
    return r;
  }
  if (auto r = try_permutative(th, budget, *p)) {
    if (kind) *kind = RedexKind::Permutative;
    return r;
  }
  for (size_t i = 0; i < p->subs.size(); ++i) {
    if (path) path->push_back(static_cast<int>(i));
    if (auto r = reduce_rec(th, budget, p->subs[i], path, kind)) {
      ProofNode out = *p;
      out.subs[i] = *r;
      return make_proof(std::move(out));
    }
    if (path) path->pop_back();
  }
  return std::nullopt;
}

}  // namespace detail

/// Contracts the leftmost-outermost proof redex — a detour (an elimination
/// whose major premise ends in the matching introduction, connectives
/// matched modulo ≡) or a permutative conversion (an elimination whose
/// major premise ends in OrE/ExE). Returns nothing for a normal proof.
inline std::optional<ProofPtr> reduce_step(const TheoryBundle& theory, const ProofPtr& proof,
                                           const Budget& budget = Budget()) {
  return detail::reduce_rec(theory, budget, proof, nullptr, nullptr);
}

/// Location and kind of the redex reduce_step would contract.
inline std::optional<RedexInfo> find_redex(const TheoryBundle& theory, const ProofPtr& proof,
                                           const Budget& budget = Budget()) {
  RedexInfo info;
  if (detail::reduce_rec(theory, budget, proof, &info.path, &info.kind)) return info;
  return std::nullopt;
}

/// Like find_redex but only reports detours (used by the cut-free/normal
/// alignment checks).
inline std::optional<RedexInfo> find_detour(const TheoryBundle& theory, const ProofPtr& proof,
                                            const Budget& budget = Budget()) {
  struct Rec {
    const TheoryBundle& th;
    const Budget& budget;
    std::optional<RedexInfo> found;
    void at(const ProofPtr& p, std::vector<int>& path) {
      if (found) return;
      if (detail::try_detour(th, budget, *p)) {
        found = RedexInfo{path, RedexKind::Detour};
        return;
      }
      for (size_t i = 0; i < p->subs.size(); ++i) {
        path.push_back(static_cast<int>(i));
        at(p->subs[i], path);
        path.pop_back();
      }
    }
  } rec{theory, budget, std::nullopt};
  std::vector<int> path;
  rec.at(proof, path);
  return rec.found;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

struct ReductionTrace {
  enum class Status { NormalForm, FuelExhausted, CycleDetected };
  std::vector<ProofPtr> steps;
  Status status = Status::NormalForm;
  int cycle_index = -1;  // index of the earlier alpha-equal reduct
};

inline const char* to_string(ReductionTrace::Status s) {
  switch (s) {
    case ReductionTrace::Status::NormalForm: return "NormalForm";
    case ReductionTrace::Status::FuelExhausted: return "FuelExhausted";
    case ReductionTrace::Status::CycleDetected: return "CycleDetected";
  }
  return "?";
}

/// Iterates reduce_step. Stops at a normal proof, when a reduct is
/// alpha-equal to an earlier one (the non-normalizing theories cycle), or
/// when the fuel runs out.
inline ReductionTrace normalize(const TheoryBundle& theory, const ProofPtr& proof,
                                const Budget& budget = Budget()) {
  ReductionTrace tr;
  std::map<std::string, int> seen;
  tr.steps.push_back(proof);
  seen.emplace(proof->alpha_key(), 0);
  for (int step = 0; step < budget.max_steps; ++step) {
    if (static_cast<int>(tr.steps.size()) > budget.max_reducts) {
      tr.status = ReductionTrace::Status::FuelExhausted;
      return tr;
    }
    auto next = reduce_step(theory, tr.steps.back(), budget);
    if (!next) {
      tr.status = ReductionTrace::Status::NormalForm;
      return tr;
    }
    std::string key = (*next)->alpha_key();
    auto it = seen.find(key);
    tr.steps.push_back(*next);
    if (it != seen.end()) {
      tr.status = ReductionTrace::Status::CycleDetected;
      tr.cycle_index = it->second;
      return tr;
    }
    seen.emplace(std::move(key), static_cast<int>(tr.steps.size()) - 1);
  }
  tr.status = ReductionTrace::Status::FuelExhausted;
  return tr;
}

}  // namespace modulo

#endif  // MODULO_PROOF_HPP
