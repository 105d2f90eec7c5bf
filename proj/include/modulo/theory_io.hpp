#ifndef MODULO_THEORY_IO_HPP
#define MODULO_THEORY_IO_HPP

#include "modulo/lang_io.hpp"
#include "modulo/theory.hpp"

namespace modulo {

// Theory files:
//   (theory <name>
//     (sorts iota o)
//     (funcs (f (iota) iota) (c () iota))
//     (preds (in (iota iota)) (P ()))
//     (schemes (K (T U) () (-> T U T)) (app (T U) ((-> T U) T) U))
//     (rules (rule subset () ((x iota) (y iota)) (subset x y) (forall ...)))
//     (axioms ...))
// Prop rules and term rules are distinguished by the kind of their lhs.

inline TheoryBundle parse_theory(const Sexpr& e) {
  if (e.head() != "theory" || e.size() < 2 || !e[1].is_atom())
    throw ParseError("theory syntax is (theory name sections...)");
  TheoryBundle th;
  th.name = e[1].atom;
  // Sorts first, then symbols, so later sections can parse sort exprs.
  for (size_t i = 2; i < e.size(); ++i) {
    if (e[i].head() == "sorts")
      for (size_t j = 1; j < e[i].size(); ++j) {
        if (!e[i][j].is_atom()) throw ParseError("sort names must be atoms");
        th.sig.add_sort(e[i][j].atom);
      }
  }
  ExprParser sig_parser(th.sig);
  for (size_t i = 2; i < e.size(); ++i) {
    const Sexpr& sec = e[i];
    const std::string h = sec.head();
    if (h == "funcs") {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& d = sec[j];
        if (!d.is_list() || d.size() != 3 || !d[0].is_atom() || !d[1].is_list())
          throw ParseError("function declaration syntax is (name (argsorts) result): " +
                           d.str());
        std::vector<Sort> args;
        for (const auto& a : d[1].items) args.push_back(sig_parser.parse_sort(a));
        th.sig.add_func(d[0].atom, std::move(args), sig_parser.parse_sort(d[2]));
      }
    } else if (h == "preds") {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& d = sec[j];
        if (!d.is_list() || d.size() != 2 || !d[0].is_atom() || !d[1].is_list())
          throw ParseError("predicate declaration syntax is (name (argsorts)): " + d.str());
        std::vector<Sort> args;
        for (const auto& a : d[1].items) args.push_back(sig_parser.parse_sort(a));
        th.sig.add_pred(d[0].atom, std::move(args));
      }
    } else if (h == "schemes") {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& d = sec[j];
        if (!d.is_list() || d.size() != 4 || !d[0].is_atom() || !d[1].is_list() ||
            !d[2].is_list())
          throw ParseError("scheme declaration syntax is (name (params) (argsorts) result): " +
                           d.str());
        std::vector<std::string> params;
        std::set<std::string> param_set;
        for (const auto& p : d[1].items) {
          if (!p.is_atom()) throw ParseError("scheme parameters must be atoms");
          params.push_back(p.atom);
          param_set.insert(p.atom);
        }
        ExprParser sp(th.sig);
        sp.allow_sort_vars(param_set);
        std::vector<Sort> args;
        for (const auto& a : d[2].items) args.push_back(sp.parse_sort(a));
        th.sig.add_func_scheme(d[0].atom, std::move(params), std::move(args),
                               sp.parse_sort(d[3]));
      }
    }
  }
  for (size_t i = 2; i < e.size(); ++i) {
    const Sexpr& sec = e[i];
    if (sec.head() == "rules") {
      std::vector<RewriteRule> rules;
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& d = sec[j];
        if (d.head() != "rule" || d.size() != 6 || !d[1].is_atom() || !d[2].is_list() ||
            !d[3].is_list())
          throw ParseError(
              "rule syntax is (rule label (sort-params) ((x T) ...) lhs rhs): " + d.str());
        std::vector<std::string> params;
        std::set<std::string> param_set;
        for (const auto& p : d[2].items) {
          if (!p.is_atom()) throw ParseError("rule sort parameters must be atoms");
          params.push_back(p.atom);
          param_set.insert(p.atom);
        }
        ExprParser rp(th.sig);
        rp.allow_sort_vars(param_set);
        std::vector<Var> vars;
        for (const auto& v : d[3].items) {
          if (!v.is_list() || v.size() != 2 || !v[0].is_atom())
            throw ParseError("rule variable syntax is (x T): " + v.str());
          Var var{v[0].atom, rp.parse_sort(v[1])};
          rp.declare_var(var.name, var.sort);
          vars.push_back(std::move(var));
        }
        auto lhs = rp.parse_expr(d[4]);
        if (std::holds_alternative<Prop>(lhs)) {
          rules.push_back(RewriteRule::prop_rule(d[1].atom, params, vars,
                                                 std::get<Prop>(lhs), rp.parse_prop(d[5])));
        } else {
          rules.push_back(RewriteRule::term_rule(d[1].atom, params, vars,
                                                 std::get<Term>(lhs), rp.parse_term(d[5])));
        }
      }
      th.rules = RewriteSystem(std::move(rules));
    } else if (sec.head() == "axioms") {
      ExprParser ap(th.sig);
      for (size_t j = 1; j < sec.size(); ++j) th.axioms.push_back(ap.parse_prop(sec[j]));
    }
  }
  th.validate();
  return th;
}

inline TheoryBundle parse_theory(const std::string& text) {
  return parse_theory(parse_sexpr(text));
}

inline std::string print_theory(const TheoryBundle& th) {
  std::ostringstream os;
  os << "(theory " << th.name << "\n";
  os << "  (sorts";
  for (const auto& s : th.sig.base_sorts()) os << " " << s;
  os << ")\n";
  std::string funcs, preds;
  for (const auto& [name, rank] : th.sig.plain_symbols()) {
    std::string decl = "(" + name + " (";
    for (size_t i = 0; i < rank.args.size(); ++i)
      decl += (i ? " " : "") + print_sort(rank.args[i]);
    decl += ")";
    if (rank.is_pred) {
      preds += " " + decl + ")";
    } else {
      funcs += " " + decl + " " + print_sort(rank.result) + ")";
    }
  }
  if (!funcs.empty()) os << "  (funcs" << funcs << ")\n";
  if (!preds.empty()) os << "  (preds" << preds << ")\n";
  if (!th.sig.schemes().empty()) {
    os << "  (schemes";
    for (const auto& [name, sc] : th.sig.schemes()) {
      os << " (" << name << " (";
      for (size_t i = 0; i < sc.params.size(); ++i) os << (i ? " " : "") << sc.params[i];
      os << ") (";
      for (size_t i = 0; i < sc.args.size(); ++i)
        os << (i ? " " : "") << print_sort(sc.args[i]);
      os << ") " << print_sort(sc.result) << ")";
    }
    os << ")\n";
  }
  if (!th.rules.rules().empty()) {
    os << "  (rules\n";
    for (const auto& r : th.rules.rules()) {
      os << "    (rule " << (r.label.empty() ? "r" : r.label) << " (";
      for (size_t i = 0; i < r.sort_params.size(); ++i) os << (i ? " " : "") << r.sort_params[i];
      os << ") (";
      for (size_t i = 0; i < r.vars.size(); ++i)
        os << (i ? " " : "") << "(" << r.vars[i].name << " " << print_sort(r.vars[i].sort)
           << ")";
      os << ") ";
      if (r.kind == RewriteRule::Kind::TermRule)
        os << print_term(r.lhs_term) << " " << print_term(r.rhs_term);
      else
        os << print_prop(r.lhs_prop) << " " << print_prop(r.rhs_prop);
      os << ")\n";
    }
    os << "  )\n";
  }
  if (!th.axioms.empty()) {
    os << "  (axioms";
    for (const auto& a : th.axioms) os << " " << print_prop_closed(a);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

}  // namespace modulo

#endif  // MODULO_THEORY_IO_HPP
