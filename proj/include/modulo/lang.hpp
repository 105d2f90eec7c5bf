#ifndef MODULO_LANG_HPP
#define MODULO_LANG_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modulo {

// ---------------------------------------------------------------------------
// Sorts
// ---------------------------------------------------------------------------

/// Many-sorted sort expressions: a base sort, an arrow of two sorts, or a
/// sort variable. Sort variables appear only in symbol schemes and rule
/// patterns; everything user-facing is ground.
class Sort {
 public:
  enum class Kind { Base, Arrow, Var };

  static Sort base(std::string name) {
    return Sort(std::make_shared<Node>(Node{Kind::Base, std::move(name), nullptr, nullptr}));
  }
  static Sort arrow(Sort from, Sort to) {
    return Sort(std::make_shared<Node>(
        Node{Kind::Arrow, "", std::make_shared<Sort>(std::move(from)),
             std::make_shared<Sort>(std::move(to))}));
  }
  static Sort var(std::string name) {
    return Sort(std::make_shared<Node>(Node{Kind::Var, std::move(name), nullptr, nullptr}));
  }

  Kind kind() const { return n_->kind; }
  bool is_base() const { return n_->kind == Kind::Base; }
  bool is_arrow() const { return n_->kind == Kind::Arrow; }
  bool is_var() const { return n_->kind == Kind::Var; }
  const std::string& name() const { return n_->name; }
  const Sort& from() const { return *n_->from; }
  const Sort& to() const { return *n_->to; }

  bool operator==(const Sort& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind) return false;
    switch (n_->kind) {
      case Kind::Base:
      case Kind::Var:
        return n_->name == o.n_->name;
      case Kind::Arrow:
        return from() == o.from() && to() == o.to();
    }
    return false;
  }
  bool operator!=(const Sort& o) const { return !(*this == o); }
  bool operator<(const Sort& o) const { return str() < o.str(); }

  /// Arrow-nesting depth: base sorts and variables are 0.
  int depth() const {
    if (!is_arrow()) return 0;
    return 1 + std::max(from().depth(), to().depth());
  }

  bool has_vars() const {
    switch (n_->kind) {
      case Kind::Var:
        return true;
      case Kind::Base:
        return false;
      case Kind::Arrow:
        return from().has_vars() || to().has_vars();
    }
    return false;
  }

  Sort substitute(const std::map<std::string, Sort>& binding) const {
    switch (n_->kind) {
      case Kind::Base:
        return *this;
      case Kind::Var: {
        auto it = binding.find(n_->name);
        return it == binding.end() ? *this : it->second;
      }
      case Kind::Arrow:
        return Sort::arrow(from().substitute(binding), to().substitute(binding));
    }
    return *this;
  }

  std::string str() const {
    switch (n_->kind) {
      case Kind::Base:
        return n_->name;
      case Kind::Var:
        return "'" + n_->name;
      case Kind::Arrow:
        return "(-> " + from().str() + " " + to().str() + ")";
    }
    return "?";
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<Sort> from, to;
  };
  explicit Sort(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// One-way matching of a sort pattern (may contain variables) against a
/// ground sort; bindings accumulate in `b`.
inline bool match_sort(const Sort& pattern, const Sort& subject,
                       std::map<std::string, Sort>& b) {
  switch (pattern.kind()) {
    case Sort::Kind::Var: {
      auto it = b.find(pattern.name());
      if (it != b.end()) return it->second == subject;
      b.emplace(pattern.name(), subject);
      return true;
    }
    case Sort::Kind::Base:
      return subject.is_base() && subject.name() == pattern.name();
    case Sort::Kind::Arrow:
      return subject.is_arrow() && match_sort(pattern.from(), subject.from(), b) &&
             match_sort(pattern.to(), subject.to(), b);
  }
  return false;
}

inline void collect_sort_vars(const Sort& s, std::set<std::string>& out) {
  if (s.is_var()) out.insert(s.name());
  if (s.is_arrow()) {
    collect_sort_vars(s.from(), out);
    collect_sort_vars(s.to(), out);
  }
}

// ---------------------------------------------------------------------------
// Variables and symbols
// ---------------------------------------------------------------------------

struct Var {
  std::string name;
  Sort sort;

  bool operator==(const Var& o) const { return name == o.name && sort == o.sort; }
  bool operator!=(const Var& o) const { return !(*this == o); }
  bool operator<(const Var& o) const {
    if (name != o.name) return name < o.name;
    return sort < o.sort;
  }
};

/// A symbol occurrence: plain symbols have no indices; scheme instances carry
/// the sort tuple they were instantiated at, e.g. K at ⟨ι,o⟩.
struct SymbolRef {
  std::string name;
  std::vector<Sort> indices;

  bool operator==(const SymbolRef& o) const {
    return name == o.name && indices == o.indices;
  }
  bool operator!=(const SymbolRef& o) const { return !(*this == o); }
  bool operator<(const SymbolRef& o) const { return str() < o.str(); }

  SymbolRef substitute(const std::map<std::string, Sort>& b) const {
    SymbolRef r{name, {}};
    r.indices.reserve(indices.size());
    for (const auto& s : indices) r.indices.push_back(s.substitute(b));
    return r;
  }

  std::string str() const {
    if (indices.empty()) return name;
    std::string s = name + "<";
    for (size_t i = 0; i < indices.size(); ++i) {
      if (i) s += ",";
      s += indices[i].str();
    }
    return s + ">";
  }
};

// ---------------------------------------------------------------------------
// Terms (locally nameless: bound variables are de Bruijn indices pointing at
// enclosing proposition binders; free variables are named)
// ---------------------------------------------------------------------------

class Term {
 public:
  enum class Kind { Free, Bound, App };

  static Term free_var(Var v) {
    Node n;
    n.kind = Kind::Free;
    n.var = std::move(v);
    return Term(std::make_shared<Node>(std::move(n)));
  }
  static Term free_var(std::string name, Sort sort) {
    return free_var(Var{std::move(name), std::move(sort)});
  }
  static Term bound(int index) {
    Node n;
    n.kind = Kind::Bound;
    n.index = index;
    return Term(std::make_shared<Node>(std::move(n)));
  }
  static Term app(SymbolRef sym, std::vector<Term> args = {}) {
    Node n;
    n.kind = Kind::App;
    n.sym = std::move(sym);
    n.args = std::move(args);
    return Term(std::make_shared<Node>(std::move(n)));
  }
  static Term app(std::string name, std::vector<Term> args = {}) {
    return app(SymbolRef{std::move(name), {}}, std::move(args));
  }

  Kind kind() const { return n_->kind; }
  bool is_free() const { return n_->kind == Kind::Free; }
  bool is_bound() const { return n_->kind == Kind::Bound; }
  bool is_app() const { return n_->kind == Kind::App; }
  const Var& var() const { return n_->var; }
  int index() const { return n_->index; }
  const SymbolRef& sym() const { return n_->sym; }
  const std::vector<Term>& args() const { return n_->args; }

  bool operator==(const Term& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind) return false;
    switch (n_->kind) {
      case Kind::Free:
        return n_->var == o.n_->var;
      case Kind::Bound:
        return n_->index == o.n_->index;
      case Kind::App:
        return n_->sym == o.n_->sym && n_->args == o.n_->args;
    }
    return false;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }

  /// Raw, alpha-canonical rendering; bound variables print as #k. Used for
  /// diagnostics and as a structural key — the pretty-printer lives in
  /// lang_io.hpp.
  std::string alpha_key() const {
    std::ostringstream os;
    key(os);
    return os.str();
  }
  void key(std::ostream& os) const {
    switch (n_->kind) {
      case Kind::Free:
        os << n_->var.name << ":" << n_->var.sort.str();
        break;
      case Kind::Bound:
        os << "#" << n_->index;
        break;
      case Kind::App:
        if (n_->args.empty()) {
          os << n_->sym.str();
        } else {
          os << "(" << n_->sym.str();
          for (const auto& a : n_->args) {
            os << " ";
            a.key(os);
          }
          os << ")";
        }
        break;
    }
  }

 private:
  struct Node {
    Kind kind = Kind::Bound;
    Var var{"", Sort::base("")};
    int index = 0;
    SymbolRef sym;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// ---------------------------------------------------------------------------
// Propositions
// ---------------------------------------------------------------------------

class Prop {
 public:
  enum class Kind { Atom, Top, Bottom, Imp, And, Or, Forall, Exists };

  static Prop atom(SymbolRef pred, std::vector<Term> args = {}) {
    Node n;
    n.kind = Kind::Atom;
    n.pred = std::move(pred);
    n.args = std::move(args);
    return Prop(std::make_shared<Node>(std::move(n)));
  }
  static Prop atom(std::string name, std::vector<Term> args = {}) {
    return atom(SymbolRef{std::move(name), {}}, std::move(args));
  }
  static Prop top() { return nullary(Kind::Top); }
  static Prop bottom() { return nullary(Kind::Bottom); }
  static Prop imp(Prop a, Prop b) { return binary(Kind::Imp, std::move(a), std::move(b)); }
  static Prop conj(Prop a, Prop b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Prop disj(Prop a, Prop b) { return binary(Kind::Or, std::move(a), std::move(b)); }

  /// Raw binder constructor: `body` already uses de Bruijn index 0 for the
  /// bound variable. `close_over` builds these from named bodies.
  static Prop forall(std::string display, Sort var_sort, Prop body) {
    return binder(Kind::Forall, std::move(display), std::move(var_sort), std::move(body));
  }
  static Prop exists(std::string display, Sort var_sort, Prop body) {
    return binder(Kind::Exists, std::move(display), std::move(var_sort), std::move(body));
  }

  Kind kind() const { return n_->kind; }
  bool is_atom() const { return n_->kind == Kind::Atom; }
  bool is_binder() const { return n_->kind == Kind::Forall || n_->kind == Kind::Exists; }
  bool is_connective() const {
    return n_->kind == Kind::Imp || n_->kind == Kind::And || n_->kind == Kind::Or;
  }
  const SymbolRef& pred() const { return n_->pred; }
  const std::vector<Term>& args() const { return n_->args; }
  const Prop& lhs() const { return n_->kids[0]; }
  const Prop& rhs() const { return n_->kids[1]; }
  const Prop& body() const { return n_->kids[0]; }
  const std::string& binder_name() const { return n_->binder; }
  const Sort& binder_sort() const { return n_->bsort; }

  /// Comparison is alpha-equivalence: binder display names are ignored.
  bool operator==(const Prop& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind) return false;
    switch (n_->kind) {
      case Kind::Atom:
        return n_->pred == o.n_->pred && n_->args == o.n_->args;
      case Kind::Top:
      case Kind::Bottom:
        return true;
      case Kind::Imp:
      case Kind::And:
      case Kind::Or:
        return lhs() == o.lhs() && rhs() == o.rhs();
      case Kind::Forall:
      case Kind::Exists:
        return n_->bsort == o.n_->bsort && body() == o.body();
    }
    return false;
  }
  bool operator!=(const Prop& o) const { return !(*this == o); }

  std::string alpha_key() const {
    std::ostringstream os;
    key(os);
    return os.str();
  }
  void key(std::ostream& os) const {
    switch (n_->kind) {
      case Kind::Atom:
        if (n_->args.empty()) {
          os << n_->pred.str();
        } else {
          os << "(" << n_->pred.str();
          for (const auto& a : n_->args) {
            os << " ";
            a.key(os);
          }
          os << ")";
        }
        break;
      case Kind::Top:
        os << "true";
        break;
      case Kind::Bottom:
        os << "false";
        break;
      case Kind::Imp:
      case Kind::And:
      case Kind::Or: {
        const char* op = n_->kind == Kind::Imp ? "=>" : n_->kind == Kind::And ? "and" : "or";
        os << "(" << op << " ";
        lhs().key(os);
        os << " ";
        rhs().key(os);
        os << ")";
        break;
      }
      case Kind::Forall:
      case Kind::Exists:
        os << "(" << (n_->kind == Kind::Forall ? "forall" : "exists") << " (_ "
           << n_->bsort.str() << ") ";
        body().key(os);
        os << ")";
        break;
    }
  }

 private:
  struct Node {
    Kind kind = Kind::Top;
    SymbolRef pred;
    std::vector<Term> args;
    std::vector<Prop> kids;
    std::string binder;
    Sort bsort{Sort::base("")};
  };
  static Prop nullary(Kind k) {
    Node n;
    n.kind = k;
    return Prop(std::make_shared<Node>(std::move(n)));
  }
  static Prop binary(Kind k, Prop a, Prop b) {
    Node n;
    n.kind = k;
    n.kids = {std::move(a), std::move(b)};
    return Prop(std::make_shared<Node>(std::move(n)));
  }
  static Prop binder(Kind k, std::string display, Sort var_sort, Prop body) {
    Node n;
    n.kind = k;
    n.binder = std::move(display);
    n.bsort = std::move(var_sort);
    n.kids = {std::move(body)};
    return Prop(std::make_shared<Node>(std::move(n)));
  }
  explicit Prop(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

inline bool alpha_eq(const Term& a, const Term& b) { return a == b; }
inline bool alpha_eq(const Prop& a, const Prop& b) { return a == b; }

// ---------------------------------------------------------------------------
// Contexts, sequents, substitutions
// ---------------------------------------------------------------------------

/// Contexts are ordered lists; weakening and contraction are explicit
/// operations in the proof kernel, never implicit.
using Context = std::vector<Prop>;

struct Sequent {
  Context ctx;
  Prop concl{Prop::top()};

  bool operator==(const Sequent& o) const {
    return ctx == o.ctx && concl == o.concl;
  }
  bool operator!=(const Sequent& o) const { return !(*this == o); }

  std::string alpha_key() const {
    std::string s = "[";
    for (size_t i = 0; i < ctx.size(); ++i) {
      if (i) s += ", ";
      s += ctx[i].alpha_key();
    }
    s += " |- " + concl.alpha_key() + "]";
    return s;
  }
};

/// Sort-respecting finite map from variables to terms.
using Subst = std::map<Var, Term>;

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

inline void free_vars(const Term& t, std::set<Var>& out) {
  switch (t.kind()) {
    case Term::Kind::Free:
      out.insert(t.var());
      break;
    case Term::Kind::Bound:
      break;
    case Term::Kind::App:
      for (const auto& a : t.args()) free_vars(a, out);
      break;
  }
}

inline void free_vars(const Prop& p, std::set<Var>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& a : p.args()) free_vars(a, out);
      break;
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      break;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or:
      free_vars(p.lhs(), out);
      free_vars(p.rhs(), out);
      break;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      free_vars(p.body(), out);
      break;
  }
}

inline std::set<Var> free_vars(const Term& t) {
  std::set<Var> s;
  free_vars(t, s);
  return s;
}
inline std::set<Var> free_vars(const Prop& p) {
  std::set<Var> s;
  free_vars(p, s);
  return s;
}
inline std::set<Var> free_vars(const Context& ctx) {
  std::set<Var> s;
  for (const auto& p : ctx) free_vars(p, s);
  return s;
}

inline std::set<std::string> free_names(const Prop& p) {
  std::set<std::string> names;
  for (const auto& v : free_vars(p)) names.insert(v.name);
  return names;
}

/// Every variable name occurring in a term/prop, free or as a binder display
/// name. Fresh-name generation avoids this set.
inline void all_names(const Term& t, std::set<std::string>& out) {
  if (t.is_free()) out.insert(t.var().name);
  if (t.is_app())
    for (const auto& a : t.args()) all_names(a, out);
}
inline void all_names(const Prop& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& a : p.args()) all_names(a, out);
      break;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or:
      all_names(p.lhs(), out);
      all_names(p.rhs(), out);
      break;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      out.insert(p.binder_name());
      all_names(p.body(), out);
      break;
    default:
      break;
  }
}

inline std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (avoid.count(base)) base += "'";
  return base;
}

// ---------------------------------------------------------------------------
// Shifting, substitution, opening, closing
// ---------------------------------------------------------------------------

/// Adds `by` to every dangling bound index >= cutoff. Only rewriting ever
/// manufactures terms with dangling indices; interface-level values are
/// locally closed and shifting is the identity on them.
inline Term shift(const Term& t, int by, int cutoff) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return t;
    case Term::Kind::Bound:
      return t.index() >= cutoff ? Term::bound(t.index() + by) : t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(shift(a, by, cutoff));
      return Term::app(t.sym(), std::move(args));
    }
  }
  return t;
}

inline Prop shift(const Prop& p, int by, int cutoff) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(shift(a, by, cutoff));
      return Prop::atom(p.pred(), std::move(args));
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::Imp:
      return Prop::imp(shift(p.lhs(), by, cutoff), shift(p.rhs(), by, cutoff));
    case Prop::Kind::And:
      return Prop::conj(shift(p.lhs(), by, cutoff), shift(p.rhs(), by, cutoff));
    case Prop::Kind::Or:
      return Prop::disj(shift(p.lhs(), by, cutoff), shift(p.rhs(), by, cutoff));
    case Prop::Kind::Forall:
      return Prop::forall(p.binder_name(), p.binder_sort(), shift(p.body(), by, cutoff + 1));
    case Prop::Kind::Exists:
      return Prop::exists(p.binder_name(), p.binder_sort(), shift(p.body(), by, cutoff + 1));
  }
  return p;
}

namespace detail {

inline Term subst_term(const Subst& s, const Term& t, int depth) {
  switch (t.kind()) {
    case Term::Kind::Free: {
      auto it = s.find(t.var());
      if (it == s.end()) return t;
      return depth == 0 ? it->second : shift(it->second, depth, 0);
    }
    case Term::Kind::Bound:
      return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(subst_term(s, a, depth));
      return Term::app(t.sym(), std::move(args));
    }
  }
  return t;
}

inline Prop subst_prop(const Subst& s, const Prop& p, int depth) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(subst_term(s, a, depth));
      return Prop::atom(p.pred(), std::move(args));
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::Imp:
      return Prop::imp(subst_prop(s, p.lhs(), depth), subst_prop(s, p.rhs(), depth));
    case Prop::Kind::And:
      return Prop::conj(subst_prop(s, p.lhs(), depth), subst_prop(s, p.rhs(), depth));
    case Prop::Kind::Or:
      return Prop::disj(subst_prop(s, p.lhs(), depth), subst_prop(s, p.rhs(), depth));
    case Prop::Kind::Forall:
      return Prop::forall(p.binder_name(), p.binder_sort(), subst_prop(s, p.body(), depth + 1));
    case Prop::Kind::Exists:
      return Prop::exists(p.binder_name(), p.binder_sort(), subst_prop(s, p.body(), depth + 1));
  }
  return p;
}

}  // namespace detail

/// Capture-avoiding substitution. Capture is impossible by construction:
/// bound occurrences are indices, so a free variable can never be shadowed
/// by a binder. Substituted values with dangling indices are shifted past
/// the binders they cross.
inline Term apply_subst(const Subst& s, const Term& t) {
  return s.empty() ? t : detail::subst_term(s, t, 0);
}
inline Prop apply_subst(const Subst& s, const Prop& p) {
  return s.empty() ? p : detail::subst_prop(s, p, 0);
}

inline Subst single_subst(const Var& v, const Term& t) { return Subst{{v, t}}; }

namespace detail {

inline Term open_term(const Term& t, const Term& value, int depth) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return t;
    case Term::Kind::Bound:
      if (t.index() == depth) return depth == 0 ? value : shift(value, depth, 0);
      if (t.index() > depth) return Term::bound(t.index() - 1);
      return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(open_term(a, value, depth));
      return Term::app(t.sym(), std::move(args));
    }
  }
  return t;
}

inline Prop open_prop(const Prop& p, const Term& value, int depth) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(open_term(a, value, depth));
      return Prop::atom(p.pred(), std::move(args));
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::Imp:
      return Prop::imp(open_prop(p.lhs(), value, depth), open_prop(p.rhs(), value, depth));
    case Prop::Kind::And:
      return Prop::conj(open_prop(p.lhs(), value, depth), open_prop(p.rhs(), value, depth));
    case Prop::Kind::Or:
      return Prop::disj(open_prop(p.lhs(), value, depth), open_prop(p.rhs(), value, depth));
    case Prop::Kind::Forall:
      return Prop::forall(p.binder_name(), p.binder_sort(), open_prop(p.body(), value, depth + 1));
    case Prop::Kind::Exists:
      return Prop::exists(p.binder_name(), p.binder_sort(), open_prop(p.body(), value, depth + 1));
  }
  return p;
}

inline Term close_term(const Term& t, const Var& v, int depth) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return t.var() == v ? Term::bound(depth) : t;
    case Term::Kind::Bound:
      return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(close_term(a, v, depth));
      return Term::app(t.sym(), std::move(args));
    }
  }
  return t;
}

inline Prop close_prop(const Prop& p, const Var& v, int depth) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(close_term(a, v, depth));
      return Prop::atom(p.pred(), std::move(args));
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::Imp:
      return Prop::imp(close_prop(p.lhs(), v, depth), close_prop(p.rhs(), v, depth));
    case Prop::Kind::And:
      return Prop::conj(close_prop(p.lhs(), v, depth), close_prop(p.rhs(), v, depth));
    case Prop::Kind::Or:
      return Prop::disj(close_prop(p.lhs(), v, depth), close_prop(p.rhs(), v, depth));
    case Prop::Kind::Forall:
      return Prop::forall(p.binder_name(), p.binder_sort(), close_prop(p.body(), v, depth + 1));
    case Prop::Kind::Exists:
      return Prop::exists(p.binder_name(), p.binder_sort(), close_prop(p.body(), v, depth + 1));
  }
  return p;
}

}  // namespace detail

/// Instantiates the body of a binder with `value`: ⟨∀x A⟩.body opened with t
/// is (t/x)A.
inline Prop open_binder(const Prop& binder, const Term& value) {
  return detail::open_prop(binder.body(), value, 0);
}

/// Builds ∀x A / ∃x A from a named body: occurrences of `v` become index 0.
inline Prop forall_over(const Var& v, const Prop& named_body) {
  return Prop::forall(v.name, v.sort, detail::close_prop(named_body, v, 0));
}
inline Prop exists_over(const Var& v, const Prop& named_body) {
  return Prop::exists(v.name, v.sort, detail::close_prop(named_body, v, 0));
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

struct SortError : std::runtime_error {
  enum class Kind { UnknownSymbol, ArityMismatch, SortMismatch, UnboundVariable };
  Kind err;
  SortError(Kind k, const std::string& msg) : std::runtime_error(msg), err(k) {}
};

struct Rank {
  std::vector<Sort> args;
  Sort result{Sort::base("")};
  bool is_pred = false;
};

/// Declared symbols plus symbol schemes — named families indexed by sort
/// tuples, instantiated on demand (K at ⟨T,U⟩ has rank ⟨⟩ → T → U → T). A
/// scheme keeps the signature file finite while denoting infinitely many
/// constants.
class Signature {
 public:
  struct Scheme {
    std::vector<std::string> params;
    std::vector<Sort> args;
    Sort result{Sort::base("")};
    bool is_pred = false;
  };

  void add_sort(const std::string& name) { base_sorts_.insert(name); }
  bool has_sort(const std::string& name) const { return base_sorts_.count(name) > 0; }
  const std::set<std::string>& base_sorts() const { return base_sorts_; }

  void add_func(const std::string& name, std::vector<Sort> args, Sort result) {
    ensure_unused(name);
    symbols_.emplace(name, Rank{std::move(args), std::move(result), false});
  }
  void add_pred(const std::string& name, std::vector<Sort> args) {
    ensure_unused(name);
    symbols_.emplace(name, Rank{std::move(args), Sort::base(""), true});
  }
  void add_func_scheme(const std::string& name, std::vector<std::string> params,
                       std::vector<Sort> args, Sort result) {
    ensure_unused(name);
    schemes_.emplace(name, Scheme{std::move(params), std::move(args), std::move(result), false});
  }

  bool has_symbol(const std::string& name) const {
    return symbols_.count(name) || schemes_.count(name);
  }
  bool is_scheme(const std::string& name) const { return schemes_.count(name) > 0; }
  const Scheme& scheme(const std::string& name) const { return schemes_.at(name); }

  const std::map<std::string, Rank>& plain_symbols() const { return symbols_; }
  const std::map<std::string, Scheme>& schemes() const { return schemes_; }

  /// Rank of a symbol occurrence; scheme instances substitute their indices
  /// into the declared patterns. Deterministic in the indices.
  Rank resolve(const SymbolRef& sym) const {
    auto it = symbols_.find(sym.name);
    if (it != symbols_.end()) {
      if (!sym.indices.empty())
        throw SortError(SortError::Kind::UnknownSymbol,
                        "symbol " + sym.name + " is not a scheme but has sort indices");
      return it->second;
    }
    auto sc = schemes_.find(sym.name);
    if (sc == schemes_.end())
      throw SortError(SortError::Kind::UnknownSymbol, "unknown symbol: " + sym.str());
    const Scheme& s = sc->second;
    if (sym.indices.size() != s.params.size())
      throw SortError(SortError::Kind::ArityMismatch,
                      "scheme " + sym.name + " expects " + std::to_string(s.params.size()) +
                          " sort indices, got " + std::to_string(sym.indices.size()));
    std::map<std::string, Sort> b;
    for (size_t i = 0; i < s.params.size(); ++i) b.emplace(s.params[i], sym.indices[i]);
    Rank r;
    r.is_pred = s.is_pred;
    r.args.reserve(s.args.size());
    for (const auto& a : s.args) r.args.push_back(a.substitute(b));
    r.result = s.result.substitute(b);
    return r;
  }

 private:
  void ensure_unused(const std::string& name) {
    if (has_symbol(name))
      throw std::invalid_argument("symbol declared twice with different ranks: " + name);
  }
  std::set<std::string> base_sorts_;
  std::map<std::string, Rank> symbols_;
  std::map<std::string, Scheme> schemes_;
};

// ---------------------------------------------------------------------------
// Sort checking
// ---------------------------------------------------------------------------

/// Sort of a term; `benv` carries the sorts of enclosing binders,
/// innermost first. Throws SortError naming the offending subterm.
inline Sort sort_of(const Signature& sig, const Term& t, const std::vector<Sort>& benv = {}) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return t.var().sort;
    case Term::Kind::Bound:
      if (t.index() < 0 || static_cast<size_t>(t.index()) >= benv.size())
        throw SortError(SortError::Kind::UnboundVariable,
                        "dangling bound variable " + t.alpha_key());
      return benv[static_cast<size_t>(t.index())];
    case Term::Kind::App: {
      Rank r = sig.resolve(t.sym());
      if (r.is_pred)
        throw SortError(SortError::Kind::SortMismatch,
                        "predicate symbol used as a term: " + t.alpha_key());
      if (r.args.size() != t.args().size())
        throw SortError(SortError::Kind::ArityMismatch,
                        "arity mismatch in " + t.alpha_key() + ": " + t.sym().str() +
                            " expects " + std::to_string(r.args.size()) + " arguments");
      for (size_t i = 0; i < r.args.size(); ++i) {
        Sort got = sort_of(sig, t.args()[i], benv);
        if (got != r.args[i])
          throw SortError(SortError::Kind::SortMismatch,
                          "sort mismatch in " + t.alpha_key() + ": argument " +
                              std::to_string(i + 1) + " has sort " + got.str() + ", expected " +
                              r.args[i].str());
      }
      return r.result;
    }
  }
  throw SortError(SortError::Kind::UnknownSymbol, "malformed term");
}

/// Spec-facing name: returns the sort and enforces the rank discipline.
inline Sort well_sorted(const Signature& sig, const Term& t) { return sort_of(sig, t); }

inline void check_prop(const Signature& sig, const Prop& p, std::vector<Sort>& benv) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      Rank r = sig.resolve(p.pred());
      if (!r.is_pred)
        throw SortError(SortError::Kind::SortMismatch,
                        "function symbol used as a predicate: " + p.alpha_key());
      if (r.args.size() != p.args().size())
        throw SortError(SortError::Kind::ArityMismatch,
                        "arity mismatch in " + p.alpha_key());
      for (size_t i = 0; i < r.args.size(); ++i) {
        Sort got = sort_of(sig, p.args()[i], benv);
        if (got != r.args[i])
          throw SortError(SortError::Kind::SortMismatch,
                          "sort mismatch in " + p.alpha_key() + ": argument " +
                              std::to_string(i + 1) + " has sort " + got.str() + ", expected " +
                              r.args[i].str());
      }
      break;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      break;
    case Prop::Kind::Imp:
    case Prop::Kind::And:
    case Prop::Kind::Or:
      check_prop(sig, p.lhs(), benv);
      check_prop(sig, p.rhs(), benv);
      break;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      benv.insert(benv.begin(), p.binder_sort());
      check_prop(sig, p.body(), benv);
      benv.erase(benv.begin());
      break;
  }
}

inline void well_sorted(const Signature& sig, const Prop& p) {
  std::vector<Sort> benv;
  check_prop(sig, p, benv);
}

}  // namespace modulo

#endif  // MODULO_LANG_HPP
