#ifndef MODULO_THEORY_HPP
#define MODULO_THEORY_HPP

#include "modulo/lang.hpp"
#include "modulo/rewriting.hpp"

namespace modulo {

/// A theory in deduction modulo: a congruence generated by rewrite rules,
/// plus an axiom list. All built-in theories have empty axiom lists — their
/// whole content is the congruence.
struct TheoryBundle {
  std::string name;
  Signature sig;
  RewriteSystem rules;
  std::vector<Prop> axioms;

  void validate() const {
    rules.validate(sig);
    for (const auto& a : axioms) well_sorted(sig, a);
  }
};

}  // namespace modulo

#endif  // MODULO_THEORY_HPP
