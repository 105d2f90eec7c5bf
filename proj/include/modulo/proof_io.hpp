#ifndef MODULO_PROOF_IO_HPP
#define MODULO_PROOF_IO_HPP

#include "modulo/lang_io.hpp"
#include "modulo/proof.hpp"

namespace modulo {

// Proof files are s-expression trees, e.g.
//   (impE :concl (seq () Q) :A P :B Q <major> <minor>)
// with an optional (vars ((x iota) ...) <tree>) wrapper declaring free
// variables. :x takes a (name sort) pair, :t a term.

namespace detail {

inline ProofPtr parse_proof_node(ExprParser& p, const Sexpr& e) {
  if (!e.is_list() || e.size() < 1 || !e[0].is_atom())
    throw ParseError("malformed proof node: " + e.str());
  auto tag = rule_tag_from_string(e[0].atom);
  if (!tag) throw ParseError("unknown proof rule: " + e[0].atom);
  ProofNode n;
  n.tag = *tag;
  bool have_concl = false;
  size_t i = 1;
  while (i < e.size() && e[i].is_atom() && !e[i].atom.empty() && e[i].atom[0] == ':') {
    const std::string key = e[i].atom;
    if (i + 1 >= e.size()) throw ParseError("missing value for " + key + " in " + e.str());
    const Sexpr& v = e[i + 1];
    if (key == ":concl") {
      n.concl = p.parse_sequent(v);
      have_concl = true;
    } else if (key == ":A") {
      n.prop_a = p.parse_prop(v);
    } else if (key == ":B") {
      n.prop_b = p.parse_prop(v);
    } else if (key == ":x") {
      if (!v.is_list() || v.size() != 2 || !v[0].is_atom())
        throw ParseError(":x takes a (name sort) pair: " + v.str());
      Var x{v[0].atom, p.parse_sort(v[1])};
      p.declare_var(x.name, x.sort);
      n.eigen = std::move(x);
    } else if (key == ":t") {
      n.witness = p.parse_term(v);
    } else {
      throw ParseError("unknown proof keyword " + key);
    }
    i += 2;
  }
  if (!have_concl) throw ParseError("proof node lacks :concl: " + e.str());
  for (; i < e.size(); ++i) n.subs.push_back(parse_proof_node(p, e[i]));
  return make_proof(std::move(n));
}

}  // namespace detail

inline ProofPtr parse_proof(const Signature& sig, const Sexpr& e) {
  ExprParser p(sig);
  if (e.head() == "vars") {
    if (e.size() != 3) throw ParseError("vars syntax is (vars ((x T) ...) tree)");
    p.declare_from_list(e[1]);
    return detail::parse_proof_node(p, e[2]);
  }
  return detail::parse_proof_node(p, e);
}

inline ProofPtr parse_proof(const Signature& sig, const std::string& text) {
  return parse_proof(sig, parse_sexpr(text));
}

namespace detail {

inline void collect_proof_vars(const ProofNode& n, std::set<Var>& out) {
  for (const auto& q : n.concl.ctx) free_vars(q, out);
  free_vars(n.concl.concl, out);
  if (n.prop_a) free_vars(*n.prop_a, out);
  if (n.prop_b) free_vars(*n.prop_b, out);
  if (n.eigen) out.insert(*n.eigen);
  if (n.witness) free_vars(*n.witness, out);
  for (const auto& s : n.subs) collect_proof_vars(*s, out);
}

inline void print_proof_node(std::ostream& os, const ProofNode& n, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad << "(" << to_string(n.tag) << " :concl " << print_sequent(n.concl);
  if (n.prop_a) os << " :A " << print_prop(*n.prop_a);
  if (n.prop_b) os << " :B " << print_prop(*n.prop_b);
  if (n.eigen)
    os << " :x (" << n.eigen->name << " " << print_sort(n.eigen->sort) << ")";
  if (n.witness) os << " :t " << print_term(*n.witness);
  for (const auto& s : n.subs) {
    os << "\n";
    print_proof_node(os, *s, indent + 1);
  }
  os << ")";
}

}  // namespace detail

inline std::string print_proof(const ProofPtr& proof) {
  std::set<Var> fv;
  detail::collect_proof_vars(*proof, fv);
  std::ostringstream os;
  if (!fv.empty()) {
    os << "(vars (";
    bool first = true;
    for (const auto& v : fv) {
      if (!first) os << " ";
      first = false;
      os << "(" << v.name << " " << print_sort(v.sort) << ")";
    }
    os << ")\n";
    detail::print_proof_node(os, *proof, 1);
    os << ")";
  } else {
    detail::print_proof_node(os, *proof, 0);
  }
  os << "\n";
  return os.str();
}

}  // namespace modulo

#endif  // MODULO_PROOF_IO_HPP
