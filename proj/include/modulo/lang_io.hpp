#ifndef MODULO_LANG_IO_HPP
#define MODULO_LANG_IO_HPP

#include <optional>
#include <variant>

#include "modulo/lang.hpp"
#include "modulo/sexpr.hpp"

namespace modulo {

// ---------------------------------------------------------------------------
// Parsing. The textual syntax is s-expression flavored:
//   sorts:  iota, o, (-> T U), (-> T U V) = (-> T (-> U V))
//   terms:  x, c, (f t1 t2), (K iota o) for scheme instances, (app f x)
//   props:  true, false, (P t1), (=> a b), (and a b), (or a b),
//           (forall (x T) body), (exists (x T) body)
//   open expressions may declare their free variables:
//           (vars ((x T) (y U)) expr)
// Otherwise free-variable sorts are inferred from the ranks of the symbols
// they appear under; variables that stay unconstrained are errors.
// ---------------------------------------------------------------------------

class ExprParser {
 public:
  explicit ExprParser(const Signature& sig) : sig_(&sig) {}

  /// Sort variables allowed to appear (rule/scheme files).
  void allow_sort_vars(const std::set<std::string>& params) { sort_params_ = params; }
  void declare_var(const std::string& name, Sort sort) { vars_.emplace(name, std::move(sort)); }
  const std::map<std::string, Sort>& vars() const { return vars_; }

  Sort parse_sort(const Sexpr& e) const {
    if (e.is_atom()) {
      if (sig_->has_sort(e.atom)) return Sort::base(e.atom);
      if (sort_params_.count(e.atom)) return Sort::var(e.atom);
      throw ParseError("unknown sort: " + e.atom);
    }
    if (e.head() != "->" || e.size() < 3)
      throw ParseError("malformed sort: " + e.str());
    Sort result = parse_sort(e[e.size() - 1]);
    for (size_t i = e.size() - 2; i >= 1; --i)
      result = Sort::arrow(parse_sort(e[i]), result);
    return result;
  }

  Term parse_term(const Sexpr& e, std::optional<Sort> expected = std::nullopt) {
    if (e.is_atom()) return parse_term_atom(e.atom, expected);
    std::string h = e.head();
    if (h.empty()) throw ParseError("malformed term: " + e.str());
    if (sig_->is_scheme(h)) return parse_scheme_app(e, expected);
    if (sig_->has_symbol(h)) {
      Rank r = sig_->resolve(SymbolRef{h, {}});
      if (r.is_pred) throw ParseError("predicate used as a term: " + e.str());
      return finish_app(e, SymbolRef{h, {}}, r, expected);
    }
    throw ParseError("unknown symbol in term: " + e.str());
  }

  Prop parse_prop(const Sexpr& e) {
    if (e.is_atom()) {
      if (e.atom == "true") return Prop::top();
      if (e.atom == "false") return Prop::bottom();
      if (sig_->has_symbol(e.atom) && !sig_->is_scheme(e.atom)) {
        Rank r = sig_->resolve(SymbolRef{e.atom, {}});
        if (r.is_pred && r.args.empty()) return Prop::atom(SymbolRef{e.atom, {}});
      }
      throw ParseError("expected a proposition, got: " + e.atom);
    }
    std::string h = e.head();
    if (h == "=>" || h == "and" || h == "or") {
      if (e.size() != 3) throw ParseError(h + " takes two arguments: " + e.str());
      Prop a = parse_prop(e[1]);
      Prop b = parse_prop(e[2]);
      if (h == "=>") return Prop::imp(a, b);
      if (h == "and") return Prop::conj(a, b);
      return Prop::disj(a, b);
    }
    if (h == "forall" || h == "exists") {
      if (e.size() != 3 || !e[1].is_list() || e[1].size() != 2 || !e[1][0].is_atom())
        throw ParseError("binder syntax is (" + h + " (x T) body): " + e.str());
      std::string name = e[1][0].atom;
      Sort s = parse_sort(e[1][1]);
      binders_.insert(binders_.begin(), {name, s});
      Prop body = parse_prop(e[2]);  // occurrences of `name` parse as index 0
      binders_.erase(binders_.begin());
      return h == "forall" ? Prop::forall(name, s, body) : Prop::exists(name, s, body);
    }
    if (h == "vars") {
      if (e.size() != 3) throw ParseError("vars syntax is (vars ((x T) ...) expr)");
      declare_from_list(e[1]);
      return parse_prop(e[2]);
    }
    // Predicate atom.
    if (sig_->is_scheme(h))
      throw ParseError("predicate schemes are not supported: " + e.str());
    if (sig_->has_symbol(h)) {
      Rank r = sig_->resolve(SymbolRef{h, {}});
      if (!r.is_pred) throw ParseError("function symbol used as a proposition: " + e.str());
      if (r.args.size() != e.size() - 1)
        throw ParseError("arity mismatch for predicate " + h + " in " + e.str());
      std::vector<Term> args;
      for (size_t i = 1; i < e.size(); ++i)
        args.push_back(parse_term(e[i], r.args[i - 1]));
      return Prop::atom(SymbolRef{h, {}}, std::move(args));
    }
    throw ParseError("unknown proposition head: " + e.str());
  }

  /// Either a term or a proposition, decided by the head symbol.
  std::variant<Term, Prop> parse_expr(const Sexpr& e) {
    if (e.is_atom()) {
      if (e.atom == "true" || e.atom == "false") return parse_prop(e);
      if (sig_->has_symbol(e.atom) && !sig_->is_scheme(e.atom) &&
          sig_->resolve(SymbolRef{e.atom, {}}).is_pred)
        return parse_prop(e);
      return parse_term(e);
    }
    std::string h = e.head();
    if (h == "vars") {
      if (e.size() != 3) throw ParseError("vars syntax is (vars ((x T) ...) expr)");
      declare_from_list(e[1]);
      return parse_expr(e[2]);
    }
    if (h == "=>" || h == "and" || h == "or" || h == "forall" || h == "exists")
      return parse_prop(e);
    if (sig_->has_symbol(h) && !sig_->is_scheme(h) &&
        sig_->resolve(SymbolRef{h, {}}).is_pred)
      return parse_prop(e);
    return parse_term(e);
  }

  /// (seq (A1 A2 ...) B)
  Sequent parse_sequent(const Sexpr& e) {
    if (e.head() != "seq" || e.size() != 3 || !e[1].is_list())
      throw ParseError("sequent syntax is (seq (ctx...) concl): " + e.str());
    Sequent s;
    for (const auto& p : e[1].items) s.ctx.push_back(parse_prop(p));
    s.concl = parse_prop(e[2]);
    return s;
  }

  void declare_from_list(const Sexpr& decls) {
    if (!decls.is_list()) throw ParseError("expected variable declarations: " + decls.str());
    for (const auto& d : decls.items) {
      if (!d.is_list() || d.size() != 2 || !d[0].is_atom())
        throw ParseError("variable declaration syntax is (x T): " + d.str());
      vars_.insert_or_assign(d[0].atom, parse_sort(d[1]));
    }
  }

 private:
  /// One-way sort matching where only the reserved marker variables bind;
  /// sort variables of the enclosing rule compare as opaque constants.
  static bool match_marked(const Sort& pattern, const Sort& subject,
                           std::map<std::string, Sort>& b) {
    switch (pattern.kind()) {
      case Sort::Kind::Var: {
        if (pattern.name().rfind("\x01p", 0) != 0)
          return subject.is_var() && subject.name() == pattern.name();
        auto it = b.find(pattern.name());
        if (it != b.end()) return it->second == subject;
        b.emplace(pattern.name(), subject);
        return true;
      }
      case Sort::Kind::Base:
        return subject.is_base() && subject.name() == pattern.name();
      case Sort::Kind::Arrow:
        return subject.is_arrow() && match_marked(pattern.from(), subject.from(), b) &&
               match_marked(pattern.to(), subject.to(), b);
    }
    return false;
  }

  Term parse_term_atom(const std::string& tok, const std::optional<Sort>& expected) {
    for (size_t k = 0; k < binders_.size(); ++k) {
      if (binders_[k].first == tok) {
        if (expected && binders_[k].second != *expected)
          throw ParseError("variable " + tok + " has sort " + binders_[k].second.str() +
                           ", expected " + expected->str());
        return Term::bound(static_cast<int>(k));
      }
    }
    auto it = vars_.find(tok);
    if (it != vars_.end()) {
      if (expected && it->second != *expected)
        throw ParseError("variable " + tok + " has sort " + it->second.str() + ", expected " +
                         expected->str());
      return Term::free_var(tok, it->second);
    }
    if (sig_->has_symbol(tok)) {
      if (sig_->is_scheme(tok))
        throw ParseError("scheme " + tok + " needs sort indices, e.g. (" + tok + " iota ...)");
      Rank r = sig_->resolve(SymbolRef{tok, {}});
      if (r.is_pred) throw ParseError("predicate used as a term: " + tok);
      if (!r.args.empty()) throw ParseError("symbol " + tok + " expects arguments");
      if (expected && r.result != *expected)
        throw ParseError("constant " + tok + " has sort " + r.result.str() + ", expected " +
                         expected->str());
      return Term::app(SymbolRef{tok, {}});
    }
    if (expected) {
      vars_.emplace(tok, *expected);  // inferred free variable
      return Term::free_var(tok, *expected);
    }
    throw ParseError("cannot determine the sort of variable " + tok +
                     "; declare it with (vars ((" + tok + " T)) ...)");
  }

  Term parse_scheme_app(const Sexpr& e, const std::optional<Sort>& expected) {
    const std::string& h = e[0].atom;
    const Signature::Scheme& sc = sig_->scheme(h);
    if (sc.args.empty()) {
      // Explicit instantiation: (K iota o).
      if (e.size() != 1 + sc.params.size())
        throw ParseError("scheme " + h + " expects " + std::to_string(sc.params.size()) +
                         " sort indices: " + e.str());
      std::vector<Sort> idx;
      for (size_t i = 1; i < e.size(); ++i) idx.push_back(parse_sort(e[i]));
      SymbolRef sym{h, idx};
      Rank r = sig_->resolve(sym);
      if (expected && r.result != *expected)
        throw ParseError("term " + e.str() + " has sort " + r.result.str() + ", expected " +
                         expected->str());
      return Term::app(sym);
    }
    // Indices inferred from argument sorts, left to right. Scheme parameters
    // are renamed to reserved markers first so they can never collide with
    // sort variables of the surrounding rule.
    if (e.size() != 1 + sc.args.size())
      throw ParseError("arity mismatch for " + h + " in " + e.str());
    std::map<std::string, Sort> markers;
    for (size_t i = 0; i < sc.params.size(); ++i)
      markers.emplace(sc.params[i], Sort::var("\x01p" + std::to_string(i)));
    std::map<std::string, Sort> b;
    std::vector<Term> args;
    for (size_t i = 0; i < sc.args.size(); ++i) {
      Sort pat = sc.args[i].substitute(markers).substitute(b);
      bool open = false;
      {
        std::set<std::string> vs;
        collect_sort_vars(pat, vs);
        for (const auto& v : vs)
          if (v.rfind("\x01p", 0) == 0) open = true;
      }
      Term arg = open ? parse_term(e[i + 1]) : parse_term(e[i + 1], pat);
      Sort got = sort_of_parsed(arg);
      if (!match_marked(pat, got, b))
        throw ParseError("sort mismatch in " + e.str() + ": argument " + std::to_string(i + 1) +
                         " has sort " + got.str());
      args.push_back(std::move(arg));
    }
    std::vector<Sort> idx;
    for (size_t i = 0; i < sc.params.size(); ++i) {
      auto it = b.find("\x01p" + std::to_string(i));
      if (it == b.end())
        throw ParseError("cannot infer sort index " + sc.params[i] + " of " + h + " in " +
                         e.str() + "; the index does not occur in any argument sort");
      idx.push_back(it->second);
    }
    SymbolRef sym{h, idx};
    Rank r = sig_->resolve(sym);
    if (expected && r.result != *expected)
      throw ParseError("term " + e.str() + " has sort " + r.result.str() + ", expected " +
                       expected->str());
    return Term::app(sym, std::move(args));
  }

  Term finish_app(const Sexpr& e, SymbolRef sym, const Rank& r,
                  const std::optional<Sort>& expected) {
    if (r.args.size() != e.size() - 1)
      throw ParseError("arity mismatch for " + sym.name + " in " + e.str());
    if (expected && r.result != *expected)
      throw ParseError("term " + e.str() + " has sort " + r.result.str() + ", expected " +
                       expected->str());
    std::vector<Term> args;
    for (size_t i = 1; i < e.size(); ++i) args.push_back(parse_term(e[i], r.args[i - 1]));
    return Term::app(std::move(sym), std::move(args));
  }

  Sort sort_of_parsed(const Term& t) const {
    std::vector<Sort> benv;
    for (const auto& b : binders_) benv.push_back(b.second);
    return sort_of(*sig_, t, benv);
  }

  const Signature* sig_;
  std::set<std::string> sort_params_;
  std::map<std::string, Sort> vars_;
  std::vector<std::pair<std::string, Sort>> binders_;  // innermost first
};

// ---------------------------------------------------------------------------
// Printing. Output parses back to an alpha-equal value; printing is
// deterministic, so print∘parse∘print is the identity on printed text.
// ---------------------------------------------------------------------------

inline Sexpr sort_to_sexpr(const Sort& s) {
  switch (s.kind()) {
    case Sort::Kind::Base:
    case Sort::Kind::Var:
      return Sexpr::make_atom(s.name());
    case Sort::Kind::Arrow:
      return Sexpr::make_list({Sexpr::make_atom("->"), sort_to_sexpr(s.from()),
                               sort_to_sexpr(s.to())});
  }
  return Sexpr::make_atom("?");
}

namespace detail {

inline Sexpr term_to_sexpr(const Term& t, const std::vector<std::string>& stack) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return Sexpr::make_atom(t.var().name);
    case Term::Kind::Bound: {
      size_t k = static_cast<size_t>(t.index());
      if (k >= stack.size()) return Sexpr::make_atom("#" + std::to_string(t.index()));
      return Sexpr::make_atom(stack[k]);
    }
    case Term::Kind::App: {
      if (t.args().empty() && t.sym().indices.empty())
        return Sexpr::make_atom(t.sym().name);
      std::vector<Sexpr> items{Sexpr::make_atom(t.sym().name)};
      if (t.args().empty()) {
        for (const auto& s : t.sym().indices) items.push_back(sort_to_sexpr(s));
      } else {
        // Indices are re-inferred from argument sorts when parsing back.
        for (const auto& a : t.args()) items.push_back(term_to_sexpr(a, stack));
      }
      return Sexpr::make_list(std::move(items));
    }
  }
  return Sexpr::make_atom("?");
}

inline void binder_avoid_names(const Prop& p, std::set<std::string>& avoid) {
  all_names(p, avoid);
}

inline Sexpr prop_to_sexpr(const Prop& p, std::vector<std::string>& stack) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      if (p.args().empty()) return Sexpr::make_atom(p.pred().name);
      std::vector<Sexpr> items{Sexpr::make_atom(p.pred().name)};
      for (const auto& a : p.args()) items.push_back(term_to_sexpr(a, stack));
      return Sexpr::make_list(std::move(items));
    }
    case Prop::Kind::Top:
      return Sexpr::make_atom("true");
    case Prop::Kind::Bottom:
      return Sexpr::make_atom("false");
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      const char* op = p.kind() == Prop::Kind::Imp ? "=>"
                       : p.kind() == Prop::Kind::And ? "and"
                                                     : "or";
      return Sexpr::make_list({Sexpr::make_atom(op), prop_to_sexpr(p.lhs(), stack),
                               prop_to_sexpr(p.rhs(), stack)});
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      std::set<std::string> avoid;
      binder_avoid_names(p.body(), avoid);
      for (const auto& n : stack) avoid.insert(n);
      std::string display = p.binder_name().empty() ? "x" : p.binder_name();
      display = fresh_name(display, avoid);
      stack.insert(stack.begin(), display);
      Sexpr body = prop_to_sexpr(p.body(), stack);
      stack.erase(stack.begin());
      return Sexpr::make_list(
          {Sexpr::make_atom(p.kind() == Prop::Kind::Forall ? "forall" : "exists"),
           Sexpr::make_list({Sexpr::make_atom(display), sort_to_sexpr(p.binder_sort())}),
           std::move(body)});
    }
  }
  return Sexpr::make_atom("?");
}

}  // namespace detail

inline std::string print_sort(const Sort& s) { return sort_to_sexpr(s).str(); }

inline std::string print_term(const Term& t) {
  std::vector<std::string> stack;
  return detail::term_to_sexpr(t, stack).str();
}

inline std::string print_prop(const Prop& p) {
  std::vector<std::string> stack;
  return detail::prop_to_sexpr(p, stack).str();
}

inline Sexpr sequent_to_sexpr(const Sequent& s) {
  std::vector<std::string> stack;
  std::vector<Sexpr> ctx;
  for (const auto& p : s.ctx) ctx.push_back(detail::prop_to_sexpr(p, stack));
  return Sexpr::make_list({Sexpr::make_atom("seq"), Sexpr::make_list(std::move(ctx)),
                           detail::prop_to_sexpr(s.concl, stack)});
}

inline std::string print_sequent(const Sequent& s) { return sequent_to_sexpr(s).str(); }

/// Wraps an open expression with its free-variable declarations so that the
/// printed form parses back without any inference.
template <typename T>
inline Sexpr with_vars_sexpr(const T& value, const Sexpr& inner) {
  auto fv = free_vars(value);
  if (fv.empty()) return inner;
  std::vector<Sexpr> decls;
  for (const auto& v : fv)
    decls.push_back(Sexpr::make_list({Sexpr::make_atom(v.name), sort_to_sexpr(v.sort)}));
  return Sexpr::make_list({Sexpr::make_atom("vars"), Sexpr::make_list(std::move(decls)), inner});
}

inline std::string print_term_closed(const Term& t) {
  std::vector<std::string> stack;
  return with_vars_sexpr(t, detail::term_to_sexpr(t, stack)).str();
}
inline std::string print_prop_closed(const Prop& p) {
  std::vector<std::string> stack;
  return with_vars_sexpr(p, detail::prop_to_sexpr(p, stack)).str();
}

}  // namespace modulo

#endif  // MODULO_LANG_IO_HPP
