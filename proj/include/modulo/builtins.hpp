#ifndef MODULO_BUILTINS_HPP
#define MODULO_BUILTINS_HPP

#include <cmath>

#include "modulo/lang_io.hpp"
#include "modulo/model.hpp"
#include "modulo/theory.hpp"

namespace modulo {

// ---------------------------------------------------------------------------
// Built-in theories
// ---------------------------------------------------------------------------

/// Simple type theory. Sorts are ι, o and T → U; the combinators K_{T,U} and
/// S_{T,U,V}, the dotted connectives, application α_{T,U} and the predicate
/// ε of rank ⟨o⟩, with the nine rewrite rules. Sort-indexed families are
/// symbol schemes, so the signature stays finite.
inline const TheoryBundle& stt_theory() {
  static const TheoryBundle th = [] {
    TheoryBundle t;
    t.name = "stt";
    Sort o = Sort::base("o");
    Sort T = Sort::var("T"), U = Sort::var("U"), V = Sort::var("V");
    t.sig.add_sort("iota");
    t.sig.add_sort("o");
    Sort ooo = Sort::arrow(o, Sort::arrow(o, o));
    t.sig.add_func("dtop", {}, o);
    t.sig.add_func("dbot", {}, o);
    t.sig.add_func("dimp", {}, ooo);
    t.sig.add_func("dand", {}, ooo);
    t.sig.add_func("dor", {}, ooo);
    t.sig.add_func_scheme("K", {"T", "U"}, {}, Sort::arrow(T, Sort::arrow(U, T)));
    t.sig.add_func_scheme(
        "S", {"T", "U", "V"}, {},
        Sort::arrow(Sort::arrow(T, Sort::arrow(U, V)),
                    Sort::arrow(Sort::arrow(T, U), Sort::arrow(T, V))));
    t.sig.add_func_scheme("dforall", {"T"}, {}, Sort::arrow(Sort::arrow(T, o), o));
    t.sig.add_func_scheme("dexists", {"T"}, {}, Sort::arrow(Sort::arrow(T, o), o));
    t.sig.add_func_scheme("app", {"T", "U"}, {Sort::arrow(T, U), T}, U);
    t.sig.add_pred("eps", {o});

    auto term_rule = [&](const char* label, std::vector<std::string> params,
                         std::vector<std::pair<const char*, Sort>> vars, const char* lhs,
                         const char* rhs) {
      ExprParser p(t.sig);
      std::set<std::string> sp(params.begin(), params.end());
      p.allow_sort_vars(sp);
      std::vector<Var> vs;
      for (auto& [n, s] : vars) {
        p.declare_var(n, s);
        vs.push_back(Var{n, s});
      }
      return RewriteRule::term_rule(label, std::move(params), std::move(vs),
                                    p.parse_term(parse_sexpr(lhs)),
                                    p.parse_term(parse_sexpr(rhs)));
    };
    auto prop_rule = [&](const char* label, std::vector<std::string> params,
                         std::vector<std::pair<const char*, Sort>> vars, const char* lhs,
                         const char* rhs) {
      ExprParser p(t.sig);
      std::set<std::string> sp(params.begin(), params.end());
      p.allow_sort_vars(sp);
      std::vector<Var> vs;
      for (auto& [n, s] : vars) {
        p.declare_var(n, s);
        vs.push_back(Var{n, s});
      }
      return RewriteRule::prop_rule(label, std::move(params), std::move(vs),
                                    p.parse_prop(parse_sexpr(lhs)),
                                    p.parse_prop(parse_sexpr(rhs)));
    };

    Sort To = Sort::arrow(T, o);
    std::vector<RewriteRule> rules;
    rules.push_back(term_rule(
        "S", {"T", "U", "V"},
        {{"x", Sort::arrow(T, Sort::arrow(U, V))}, {"y", Sort::arrow(T, U)}, {"z", T}},
        "(app (app (app (S T U V) x) y) z)", "(app (app x z) (app y z))"));
    rules.push_back(term_rule("K", {"T", "U"}, {{"x", T}, {"y", U}},
                              "(app (app (K T U) x) y)", "x"));
    rules.push_back(prop_rule("eps-top", {}, {}, "(eps dtop)", "true"));
    rules.push_back(prop_rule("eps-bot", {}, {}, "(eps dbot)", "false"));
    rules.push_back(prop_rule("eps-imp", {}, {{"x", o}, {"y", o}},
                              "(eps (app (app dimp x) y))", "(=> (eps x) (eps y))"));
    rules.push_back(prop_rule("eps-and", {}, {{"x", o}, {"y", o}},
                              "(eps (app (app dand x) y))", "(and (eps x) (eps y))"));
    rules.push_back(prop_rule("eps-or", {}, {{"x", o}, {"y", o}},
                              "(eps (app (app dor x) y))", "(or (eps x) (eps y))"));
    rules.push_back(prop_rule("eps-forall", {"T"}, {{"x", To}},
                              "(eps (app (dforall T) x))", "(forall (y T) (eps (app x y)))"));
    rules.push_back(prop_rule("eps-exists", {"T"}, {{"x", To}},
                              "(eps (app (dexists T) x))", "(exists (y T) (eps (app x y)))"));
    t.rules = RewriteSystem(std::move(rules));
    t.validate();
    return t;
  }();
  return th;
}

/// The paper's two one-rule propositional theories: P → (P ⇒ Q), whose
/// proof of Q does not normalize, and P → (Q ⇒ P), where all proofs do.
inline const TheoryBundle& pimpq_theory() {
  static const TheoryBundle th = [] {
    TheoryBundle t;
    t.name = "pimpq";
    t.sig.add_pred("P", {});
    t.sig.add_pred("Q", {});
    t.rules = RewriteSystem({RewriteRule::prop_rule(
        "P", {}, {}, Prop::atom("P"), Prop::imp(Prop::atom("P"), Prop::atom("Q")))});
    t.validate();
    return t;
  }();
  return th;
}

inline const TheoryBundle& qimpp_theory() {
  static const TheoryBundle th = [] {
    TheoryBundle t;
    t.name = "qimpp";
    t.sig.add_pred("P", {});
    t.sig.add_pred("Q", {});
    t.rules = RewriteSystem({RewriteRule::prop_rule(
        "P", {}, {}, Prop::atom("P"), Prop::imp(Prop::atom("Q"), Prop::atom("P")))});
    t.validate();
    return t;
  }();
  return th;
}

inline std::vector<const TheoryBundle*> example_theories() {
  return {&pimpq_theory(), &qimpp_theory()};
}

inline const TheoryBundle* builtin_theory(const std::string& name) {
  if (name == "stt") return &stt_theory();
  if (name == "pimpq") return &pimpq_theory();
  if (name == "qimpp") return &qimpp_theory();
  return nullptr;
}

// ---------------------------------------------------------------------------
// The STT model from the super-consistency proof
// ---------------------------------------------------------------------------

/// Maximum arrow-nesting depth of materialized STT sorts. STT has
/// infinitely many sorts; finite models truncate.
struct SortDepthBound {
  int depth;
  explicit SortDepthBound(int d) : depth(d) {
    if (d < 1) throw std::invalid_argument("sort depth bound must be >= 1");
  }
};

namespace detail {

/// Interprets the scheme constants exactly as the super-consistency proof:
/// K̂ = a ↦ (b ↦ a), Ŝ = a ↦ (b ↦ (c ↦ a(c)(b(c)))), α̂(a,b) = a(b),
/// ∀̇̂_T = a ↦ ∀̃(Range a), ∃̇̂_T = a ↦ ∃̃(Range a).
class SttSchemes final : public SchemeInterpreter {
 public:
  std::optional<Elem> constant(const FiniteStructure& s, const SymbolRef& sym) const override {
    const auto& ix = sym.indices;
    if (sym.name == "K" && ix.size() == 2) {
      if (!s.has_domain(ix[0]) || !s.has_domain(ix[1])) return std::nullopt;
      const Domain& dt = s.domain(ix[0]);
      const Domain& du = s.domain(ix[1]);
      std::vector<Elem> outer;
      outer.reserve(dt.elems.size());
      for (const auto& a : dt.elems)
        outer.push_back(Elem::func(std::vector<Elem>(du.elems.size(), a)));
      return Elem::func(std::move(outer));
    }
    if (sym.name == "S" && ix.size() == 3) {
      Sort tuv = Sort::arrow(ix[0], Sort::arrow(ix[1], ix[2]));
      Sort tu = Sort::arrow(ix[0], ix[1]);
      if (!s.has_domain(tuv) || !s.has_domain(tu) || !s.has_domain(ix[0]) ||
          !s.has_domain(ix[1]))
        return std::nullopt;
      const Domain& da = s.domain(tuv);
      const Domain& db = s.domain(tu);
      const Domain& dt = s.domain(ix[0]);
      const Domain& du = s.domain(ix[1]);
      std::vector<Elem> la;
      la.reserve(da.elems.size());
      for (const auto& a : da.elems) {
        std::vector<Elem> lb;
        lb.reserve(db.elems.size());
        for (const auto& b : db.elems) {
          std::vector<Elem> lc;
          lc.reserve(dt.elems.size());
          for (size_t cpos = 0; cpos < dt.elems.size(); ++cpos) {
            const Elem& ac = a.table()[cpos];
            const Elem& bc = b.table()[cpos];
            lc.push_back(ac.table()[size_t(du.position(bc))]);
          }
          lb.push_back(Elem::func(std::move(lc)));
        }
        la.push_back(Elem::func(std::move(lb)));
      }
      return Elem::func(std::move(la));
    }
    if ((sym.name == "dforall" || sym.name == "dexists") && ix.size() == 1) {
      Sort to = Sort::arrow(ix[0], Sort::base("o"));
      if (!s.has_domain(to)) return std::nullopt;
      const Domain& d = s.domain(to);
      std::vector<Elem> out;
      out.reserve(d.elems.size());
      for (const auto& f : d.elems) {
        BSet range = 0;
        for (const auto& v : f.table()) range |= BSet(1) << v.scalar();
        int val = sym.name == "dforall" ? s.tva.forall(range) : s.tva.exists(range);
        out.push_back(Elem::scalar(val));
      }
      return Elem::func(std::move(out));
    }
    return std::nullopt;
  }

  std::optional<Elem> apply(const FiniteStructure& s, const SymbolRef& sym,
                            const std::vector<Elem>& args) const override {
    if (sym.name == "app" && sym.indices.size() == 2 && args.size() == 2) {
      if (!s.has_domain(sym.indices[0])) return std::nullopt;
      const Domain& dt = s.domain(sym.indices[0]);
      return args[0].table().at(size_t(dt.position(args[1])));
    }
    return std::nullopt;
  }
};

inline void collect_stt_sorts(int depth, std::vector<Sort>& out) {
  out = {Sort::base("iota"), Sort::base("o")};
  std::vector<Sort> prev = out;
  for (int d = 1; d <= depth; ++d) {
    std::vector<Sort> next = prev;
    for (const auto& a : prev)
      for (const auto& b : prev) {
        Sort ar = Sort::arrow(a, b);
        if (ar.depth() == d) next.push_back(ar);
      }
    prev = std::move(next);
  }
  out = std::move(prev);
  std::sort(out.begin(), out.end());
}

}  // namespace detail

/// Builds the finite B-structure of the super-consistency proof: M_ι = {0},
/// M_o is the carrier, M_{T→U} = M_U^{M_T} materialized for every sort of
/// depth ≤ bound whose enumeration stays within `cap` elements (larger
/// function spaces are skipped; evaluating into them reports
/// DomainUnavailable, which check_model counts as skipped instances).
/// Requires a full algebra — the proof needs ∀̃/∃̃ on arbitrary ranges.
inline FiniteStructure build_stt_model(const FiniteTva& t, SortDepthBound bound,
                                       size_t cap = 10000) {
  t.validate_structure();
  if (!t.is_full()) throw TvaError("build_stt_model requires a full algebra");
  if (static_cast<size_t>(t.size()) > cap)
    throw TvaError("carrier exceeds the domain cap");

  FiniteStructure s;
  s.tva = t;
  s.domain_cap = cap;
  s.schemes = std::make_shared<detail::SttSchemes>();
  s.base_elem_names["iota"] = {"0"};

  std::vector<Sort> sorts;
  detail::collect_stt_sorts(bound.depth, sorts);
  // Ascending depth so arrow domains find their components.
  std::stable_sort(sorts.begin(), sorts.end(),
                   [](const Sort& a, const Sort& b) { return a.depth() < b.depth(); });
  for (const auto& sort : sorts) {
    if (sort.is_base()) {
      if (sort.name() == "iota") {
        s.domains.emplace(sort, make_domain(sort, {Elem::scalar(0)}));
      } else {
        std::vector<Elem> elems;
        for (int v = 0; v < t.size(); ++v) elems.push_back(Elem::scalar(v));
        s.domains.emplace(sort, make_domain(sort, std::move(elems)));
      }
      continue;
    }
    auto from = s.domains.find(sort.from());
    auto to = s.domains.find(sort.to());
    if (from == s.domains.end() || to == s.domains.end()) continue;
    size_t nf = from->second.elems.size(), nt = to->second.elems.size();
    double count = std::pow(double(nt), double(nf));
    if (count > double(cap)) continue;
    std::vector<Elem> elems;
    std::vector<size_t> odo(nf, 0);
    while (true) {
      std::vector<Elem> table;
      table.reserve(nf);
      for (size_t i = 0; i < nf; ++i) table.push_back(to->second.elems[odo[i]]);
      elems.push_back(Elem::func(std::move(table)));
      size_t i = 0;
      for (; i < nf; ++i) {
        if (++odo[i] < nt) break;
        odo[i] = 0;
      }
      if (i == nf) break;
    }
    s.domains.emplace(sort, make_domain(sort, std::move(elems)));
  }

  // Plain constants: the dotted connectives denote the algebra operations,
  // ε̂ is the identity on M_o.
  Sort o = Sort::base("o");
  s.func_tables["dtop"] = {Elem::scalar(t.top)};
  s.func_tables["dbot"] = {Elem::scalar(t.bottom)};
  auto binop = [&](const std::vector<std::vector<int>>& table) {
    std::vector<Elem> outer;
    for (int a = 0; a < t.size(); ++a) {
      std::vector<Elem> inner;
      for (int b = 0; b < t.size(); ++b) inner.push_back(Elem::scalar(table[a][b]));
      outer.push_back(Elem::func(std::move(inner)));
    }
    return std::vector<Elem>{Elem::func(std::move(outer))};
  };
  s.func_tables["dimp"] = binop(t.imp);
  s.func_tables["dand"] = binop(t.meet);
  s.func_tables["dor"] = binop(t.join);
  std::vector<int> eps;
  for (int v = 0; v < t.size(); ++v) eps.push_back(v);
  s.pred_tables["eps"] = std::move(eps);
  (void)o;
  return s;
}

}  // namespace modulo

#endif  // MODULO_BUILTINS_HPP
