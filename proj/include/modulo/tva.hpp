#ifndef MODULO_TVA_HPP
#define MODULO_TVA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace modulo {

/// Subsets of a finite carrier as bitmasks; carriers are capped at 24
/// elements (completeness checks enumerate all 2^|B| subsets).
using BSet = std::uint64_t;

inline int bset_count(BSet s) { return __builtin_popcountll(s); }
inline bool bset_has(BSet s, int i) { return (s >> i) & 1u; }

struct TvaError : std::runtime_error {
  explicit TvaError(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Finite truth values algebras
// ---------------------------------------------------------------------------

/// ⟨B, B⁺, 𝒜, ℰ, ⊤̃, ⊥̃, ⇒̃, ∧̃, ∨̃, ∀̃, ∃̃⟩ with explicit tables. The
/// quantifier domains are stored extensionally; fullness is literal
/// equality with ℘(B). The order ⊑ is optional extra structure.
struct FiniteTva {
  std::vector<std::string> names;  // carrier; elements are indices into this
  BSet positive = 0;
  int top = 0;
  int bottom = 0;
  std::vector<std::vector<int>> imp, meet, join;  // ⇒̃, ∧̃, ∨̃
  std::vector<BSet> dom_forall, dom_exists;       // 𝒜, ℰ (sorted)
  std::map<BSet, int> forall_map, exists_map;     // ∀̃, ∃̃
  std::optional<std::vector<std::vector<bool>>> leq;

  int size() const { return static_cast<int>(names.size()); }
  BSet carrier_mask() const { return size() >= 64 ? ~BSet(0) : ((BSet(1) << size()) - 1); }

  bool has_forall(BSet a) const { return forall_map.count(a) > 0; }
  bool has_exists(BSet e) const { return exists_map.count(e) > 0; }
  int forall(BSet a) const { return forall_map.at(a); }
  int exists(BSet e) const { return exists_map.at(e); }
  bool pos(int a) const { return bset_has(positive, a); }
  bool below(int a, int b) const { return (*leq)[a][b]; }

  bool is_full() const {
    size_t want = size_t(1) << size();
    return dom_forall.size() == want && dom_exists.size() == want;
  }

  /// Structural invariants only (totality and shape); the deduction-rule
  /// closure conditions live in validate_tva.
  void validate_structure() const {
    int n = size();
    if (n <= 0) throw TvaError("empty carrier");
    if (n > 24) throw TvaError("carrier too large for exhaustive validation");
    if (top < 0 || top >= n || bottom < 0 || bottom >= n)
      throw TvaError("top/bottom outside the carrier");
    if (positive & ~carrier_mask()) throw TvaError("positive set outside the carrier");
    for (const auto* t : {&imp, &meet, &join}) {
      if (static_cast<int>(t->size()) != n) throw TvaError("binary table is not total");
      for (const auto& row : *t) {
        if (static_cast<int>(row.size()) != n) throw TvaError("binary table is not total");
        for (int v : row)
          if (v < 0 || v >= n) throw TvaError("table entry outside the carrier");
      }
    }
    for (BSet a : dom_forall) {
      if (a & ~carrier_mask()) throw TvaError("quantifier domain set outside the carrier");
      if (!forall_map.count(a)) throw TvaError("forall map is not total on its domain");
    }
    for (BSet e : dom_exists) {
      if (e & ~carrier_mask()) throw TvaError("quantifier domain set outside the carrier");
      if (!exists_map.count(e)) throw TvaError("exists map is not total on its domain");
    }
    if (leq) {
      if (static_cast<int>(leq->size()) != n) throw TvaError("order relation is not total");
      for (const auto& row : *leq)
        if (static_cast<int>(row.size()) != n) throw TvaError("order relation is not total");
    }
  }
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Counterexample tuple; -1 / nullopt marks components a condition does not
/// quantify over. Witnesses are reproducible: replaying them through the
/// condition's defining expression violates it.
struct TvaWitness {
  int a = -1, b = -1, c = -1;
  std::optional<BSet> A, E;
};

struct TvaConditionResult {
  int condition = 0;  // 1..17
  bool pass = true;
  std::vector<TvaWitness> witnesses;  // first few counterexamples
};

struct TvaReport {
  std::vector<TvaConditionResult> conditions;  // exactly 17, in order
  bool full = false;

  bool all_pass() const {
    for (const auto& c : conditions)
      if (!c.pass) return false;
    return true;
  }
  const TvaConditionResult& condition(int i) const { return conditions.at(size_t(i) - 1); }
};

namespace detail {

constexpr int kMaxWitnesses = 4;

struct CondSink {
  TvaConditionResult* r;
  void hit(TvaWitness w) {
    r->pass = false;
    if (static_cast<int>(r->witnesses.size()) < kMaxWitnesses) r->witnesses.push_back(w);
  }
};

inline std::optional<BSet> imp_left_set(const FiniteTva& t, int a, BSet A) {
  BSet out = 0;
  for (int e = 0; e < t.size(); ++e)
    if (bset_has(A, e)) out |= BSet(1) << t.imp[a][e];
  return out;
}
inline BSet imp_right_set(const FiniteTva& t, BSet E, int a) {
  BSet out = 0;
  for (int e = 0; e < t.size(); ++e)
    if (bset_has(E, e)) out |= BSet(1) << t.imp[e][a];
  return out;
}

inline bool in_dom_forall(const FiniteTva& t, BSet s) {
  return t.forall_map.count(s) > 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// validate_tva: conditions 1–17, checked by exhaustive enumeration
// ---------------------------------------------------------------------------

inline TvaReport validate_tva(const FiniteTva& t) {
  t.validate_structure();
  const int n = t.size();
  TvaReport rep;
  rep.full = t.is_full();
  rep.conditions.resize(17);
  for (int i = 0; i < 17; ++i) rep.conditions[i].condition = i + 1;
  auto sink = [&](int c) { return detail::CondSink{&rep.conditions[size_t(c) - 1]}; };
  auto I = [&](int a, int b) { return t.imp[a][b]; };

  // 1. if a ⇒̃ b ∈ B⁺ and a ∈ B⁺ then b ∈ B⁺
  {
    auto s = sink(1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (t.pos(I(a, b)) && t.pos(a) && !t.pos(b)) s.hit({a, b, -1, {}, {}});
  }
  // 2. a ⇒̃ b ⇒̃ a ∈ B⁺
  {
    auto s = sink(2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (!t.pos(I(a, I(b, a)))) s.hit({a, b, -1, {}, {}});
  }
  // 3. (a ⇒̃ b ⇒̃ c) ⇒̃ (a ⇒̃ b) ⇒̃ a ⇒̃ c ∈ B⁺
  {
    auto s = sink(3);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!t.pos(I(I(a, I(b, c)), I(I(a, b), I(a, c))))) s.hit({a, b, c, {}, {}});
  }
  // 4. ⊤̃ ∈ B⁺
  {
    auto s = sink(4);
    if (!t.pos(t.top)) s.hit({t.top, -1, -1, {}, {}});
  }
  // 5. ⊥̃ ⇒̃ a ∈ B⁺
  {
    auto s = sink(5);
    for (int a = 0; a < n; ++a)
      if (!t.pos(I(t.bottom, a))) s.hit({a, -1, -1, {}, {}});
  }
  // 6. a ⇒̃ b ⇒̃ (a ∧̃ b) ∈ B⁺
  {
    auto s = sink(6);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (!t.pos(I(a, I(b, t.meet[a][b])))) s.hit({a, b, -1, {}, {}});
  }
  // 7. (a ∧̃ b) ⇒̃ a ∈ B⁺   8. (a ∧̃ b) ⇒̃ b ∈ B⁺
  {
    auto s7 = sink(7);
    auto s8 = sink(8);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!t.pos(I(t.meet[a][b], a))) s7.hit({a, b, -1, {}, {}});
        if (!t.pos(I(t.meet[a][b], b))) s8.hit({a, b, -1, {}, {}});
      }
  }
  // 9. a ⇒̃ (a ∨̃ b) ∈ B⁺   10. b ⇒̃ (a ∨̃ b) ∈ B⁺
  {
    auto s9 = sink(9);
    auto s10 = sink(10);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!t.pos(I(a, t.join[a][b]))) s9.hit({a, b, -1, {}, {}});
        if (!t.pos(I(b, t.join[a][b]))) s10.hit({a, b, -1, {}, {}});
      }
  }
  // 11. (a ∨̃ b) ⇒̃ (a ⇒̃ c) ⇒̃ (b ⇒̃ c) ⇒̃ c ∈ B⁺
  {
    auto s = sink(11);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!t.pos(I(t.join[a][b], I(I(a, c), I(I(b, c), c))))) s.hit({a, b, c, {}, {}});
  }
  // 12. a ⇒̃ A ∈ 𝒜 and E ⇒̃ a ∈ 𝒜
  {
    auto s = sink(12);
    for (int a = 0; a < n; ++a) {
      for (BSet A : t.dom_forall)
        if (!detail::in_dom_forall(t, *detail::imp_left_set(t, a, A)))
          s.hit({a, -1, -1, A, {}});
      for (BSet E : t.dom_exists)
        if (!detail::in_dom_forall(t, detail::imp_right_set(t, E, a)))
          s.hit({a, -1, -1, {}, E});
    }
  }
  // 13. if all elements of A are in B⁺ then ∀̃ A ∈ B⁺ (A = ∅ included)
  {
    auto s = sink(13);
    for (BSet A : t.dom_forall)
      if ((A & ~t.positive) == 0 && !t.pos(t.forall(A))) s.hit({-1, -1, -1, A, {}});
  }
  // 14. ∀̃ (a ⇒̃ A) ⇒̃ a ⇒̃ (∀̃ A) ∈ B⁺ (where a ⇒̃ A ∈ 𝒜; otherwise 12 reports)
  {
    auto s = sink(14);
    for (int a = 0; a < n; ++a)
      for (BSet A : t.dom_forall) {
        BSet impA = *detail::imp_left_set(t, a, A);
        if (!detail::in_dom_forall(t, impA)) continue;
        if (!t.pos(I(t.forall(impA), I(a, t.forall(A))))) s.hit({a, -1, -1, A, {}});
      }
  }
  // 15. if a ∈ A then (∀̃ A) ⇒̃ a ∈ B⁺
  {
    auto s = sink(15);
    for (BSet A : t.dom_forall)
      for (int a = 0; a < n; ++a)
        if (bset_has(A, a) && !t.pos(I(t.forall(A), a))) s.hit({a, -1, -1, A, {}});
  }
  // 16. if a ∈ E then a ⇒̃ (∃̃ E) ∈ B⁺
  {
    auto s = sink(16);
    for (BSet E : t.dom_exists)
      for (int a = 0; a < n; ++a)
        if (bset_has(E, a) && !t.pos(I(a, t.exists(E)))) s.hit({a, -1, -1, {}, E});
  }
  // 17. (∃̃ E) ⇒̃ ∀̃ (E ⇒̃ a) ⇒̃ a ∈ B⁺ (where E ⇒̃ a ∈ 𝒜)
  {
    auto s = sink(17);
    for (BSet E : t.dom_exists)
      for (int a = 0; a < n; ++a) {
        BSet impE = detail::imp_right_set(t, E, a);
        if (!detail::in_dom_forall(t, impE)) continue;
        if (!t.pos(I(t.exists(E), I(t.forall(impE), a)))) s.hit({a, -1, -1, {}, E});
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Order and completeness
// ---------------------------------------------------------------------------

struct OrderCheck {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct OrderReport {
  std::vector<OrderCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Checks the ordered-TVA laws exhaustively: the order axioms, upward
/// closure of B⁺, extremality of ⊤̃/⊥̃, monotonicity of ∧̃/∨̃/∀̃/∃̃ and the
/// mixed monotonicity of ⇒̃. Quantifier monotonicity uses the set orders
/// under which greatest lower / least upper bounds are monotone.
inline OrderReport validate_order(const FiniteTva& t) {
  t.validate_structure();
  if (!t.leq) throw TvaError("algebra carries no order relation");
  const int n = t.size();
  OrderReport rep;
  auto add = [&](const std::string& name) {
    rep.checks.push_back(OrderCheck{name, true, ""});
    return &rep.checks.back();
  };
  auto el = [&](int i) { return t.names[size_t(i)]; };

  {
    auto* c = add("reflexive");
    for (int a = 0; a < n; ++a)
      if (!t.below(a, a) && c->pass) {
        c->pass = false;
        c->witness = el(a);
      }
  }
  {
    auto* c = add("antisymmetric");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b && t.below(a, b) && t.below(b, a) && c->pass) {
          c->pass = false;
          c->witness = el(a) + "," + el(b);
        }
  }
  {
    auto* c = add("transitive");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          if (t.below(a, b) && t.below(b, d) && !t.below(a, d) && c->pass) {
            c->pass = false;
            c->witness = el(a) + "," + el(b) + "," + el(d);
          }
  }
  {
    auto* c = add("positive-upward-closed");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (t.pos(a) && t.below(a, b) && !t.pos(b) && c->pass) {
          c->pass = false;
          c->witness = el(a) + "," + el(b);
        }
  }
  {
    auto* c = add("top-maximal");
    for (int a = 0; a < n; ++a)
      if (!t.below(a, t.top) && c->pass) {
        c->pass = false;
        c->witness = el(a);
      }
  }
  {
    auto* c = add("bottom-minimal");
    for (int a = 0; a < n; ++a)
      if (!t.below(t.bottom, a) && c->pass) {
        c->pass = false;
        c->witness = el(a);
      }
  }
  {
    auto* cm = add("meet-monotone");
    auto* cj = add("join-monotone");
    for (int a = 0; a < n; ++a)
      for (int a2 = 0; a2 < n; ++a2)
        for (int b = 0; b < n; ++b)
          for (int b2 = 0; b2 < n; ++b2) {
            if (!t.below(a, a2) || !t.below(b, b2)) continue;
            if (!t.below(t.meet[a][b], t.meet[a2][b2]) && cm->pass) {
              cm->pass = false;
              cm->witness = el(a) + "," + el(a2) + "," + el(b) + "," + el(b2);
            }
            if (!t.below(t.join[a][b], t.join[a2][b2]) && cj->pass) {
              cj->pass = false;
              cj->witness = el(a) + "," + el(a2) + "," + el(b) + "," + el(b2);
            }
          }
  }
  {
    auto* c = add("imp-left-anti-right-monotone");
    for (int a = 0; a < n; ++a)
      for (int a2 = 0; a2 < n; ++a2)
        for (int b = 0; b < n; ++b)
          for (int b2 = 0; b2 < n; ++b2) {
            // a2 ⊑ a and b ⊑ b2 implies (a ⇒̃ b) ⊑ (a2 ⇒̃ b2)
            if (!t.below(a2, a) || !t.below(b, b2)) continue;
            if (!t.below(t.imp[a][b], t.imp[a2][b2]) && c->pass) {
              c->pass = false;
              c->witness = el(a) + "," + el(a2) + "," + el(b) + "," + el(b2);
            }
          }
  }
  {
    // A ⊑ A' in the Smyth order: every a' ∈ A' dominates some a ∈ A.
    auto* c = add("forall-monotone");
    for (BSet A : t.dom_forall)
      for (BSet A2 : t.dom_forall) {
        bool smyth = true;
        for (int a2 = 0; a2 < n && smyth; ++a2) {
          if (!bset_has(A2, a2)) continue;
          bool dominated = false;
          for (int a = 0; a < n && !dominated; ++a)
            if (bset_has(A, a) && t.below(a, a2)) dominated = true;
          smyth = dominated;
        }
        if (smyth && !t.below(t.forall(A), t.forall(A2)) && c->pass) {
          c->pass = false;
          c->witness = "A=" + std::to_string(A) + ",A'=" + std::to_string(A2);
        }
      }
  }
  {
    // E ⊑ E' in the Hoare order: every e ∈ E is dominated by some e' ∈ E'.
    auto* c = add("exists-monotone");
    for (BSet E : t.dom_exists)
      for (BSet E2 : t.dom_exists) {
        bool hoare = true;
        for (int e = 0; e < n && hoare; ++e) {
          if (!bset_has(E, e)) continue;
          bool dominated = false;
          for (int e2 = 0; e2 < n && !dominated; ++e2)
            if (bset_has(E2, e2) && t.below(e, e2)) dominated = true;
          hoare = dominated;
        }
        if (hoare && !t.below(t.exists(E), t.exists(E2)) && c->pass) {
          c->pass = false;
          c->witness = "E=" + std::to_string(E) + ",E'=" + std::to_string(E2);
        }
      }
  }
  return rep;
}

struct CompleteReport {
  bool complete = true;
  std::optional<BSet> witness;  // a subset with no greatest lower bound
};

/// Every subset of B must have a greatest lower bound (so every subset also
/// has a least upper bound). Enumerates all 2^|B| subsets.
inline CompleteReport validate_complete(const FiniteTva& t) {
  t.validate_structure();
  if (!t.leq) throw TvaError("algebra carries no order relation");
  const int n = t.size();
  CompleteReport rep;
  BSet full = t.carrier_mask();
  for (BSet s = 0; s <= full; ++s) {
    bool found = false;
    for (int m = 0; m < n && !found; ++m) {
      bool lower = true;
      for (int x = 0; x < n && lower; ++x)
        if (bset_has(s, x) && !t.below(m, x)) lower = false;
      if (!lower) continue;
      bool greatest = true;
      for (int c = 0; c < n && greatest; ++c) {
        bool c_lower = true;
        for (int x = 0; x < n && c_lower; ++x)
          if (bset_has(s, x) && !t.below(c, x)) c_lower = false;
        if (c_lower && !t.below(c, m)) greatest = false;
      }
      found = greatest;
    }
    if (!found) {
      rep.complete = false;
      rep.witness = s;
      return rep;
    }
    if (s == full) break;  // avoid wrap-around when n == 64
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Heyting algebras
// ---------------------------------------------------------------------------

struct HeytingError : std::runtime_error {
  explicit HeytingError(const std::string& m) : std::runtime_error(m) {}
};

/// A finite Heyting algebra presented by its order; meets, joins and the
/// arrow are computed and the lattice/residuation laws are verified.
struct FiniteHeyting {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq;
  std::vector<std::vector<int>> meet, join, arrow;
  int top = 0, bottom = 0;

  int size() const { return static_cast<int>(names.size()); }
};

/// Builds a FiniteHeyting from an order relation, rejecting inputs that are
/// not lattices or fail the residuation law c ≤ (a ⇒ b) iff (c ∧ a) ≤ b.
inline FiniteHeyting make_heyting(std::vector<std::string> names,
                                  std::vector<std::vector<bool>> leq) {
  FiniteHeyting h;
  h.names = std::move(names);
  h.leq = std::move(leq);
  const int n = h.size();
  if (n == 0) throw HeytingError("empty carrier");
  for (int a = 0; a < n; ++a) {
    if (!h.leq[a][a]) throw HeytingError("order is not reflexive");
    for (int b = 0; b < n; ++b) {
      if (a != b && h.leq[a][b] && h.leq[b][a]) throw HeytingError("order is not antisymmetric");
      for (int c = 0; c < n; ++c)
        if (h.leq[a][b] && h.leq[b][c] && !h.leq[a][c])
          throw HeytingError("order is not transitive");
    }
  }
  auto glb2 = [&](int a, int b) -> int {
    int best = -1;
    for (int m = 0; m < n; ++m) {
      if (!h.leq[m][a] || !h.leq[m][b]) continue;
      if (best == -1 || h.leq[best][m]) best = m;
    }
    if (best == -1) return -1;
    for (int m = 0; m < n; ++m)
      if (h.leq[m][a] && h.leq[m][b] && !h.leq[m][best]) return -1;
    return best;
  };
  auto lub2 = [&](int a, int b) -> int {
    int best = -1;
    for (int m = 0; m < n; ++m) {
      if (!h.leq[a][m] || !h.leq[b][m]) continue;
      if (best == -1 || h.leq[m][best]) best = m;
    }
    if (best == -1) return -1;
    for (int m = 0; m < n; ++m)
      if (h.leq[a][m] && h.leq[b][m] && !h.leq[best][m]) return -1;
    return best;
  };
  h.meet.assign(size_t(n), std::vector<int>(size_t(n), 0));
  h.join.assign(size_t(n), std::vector<int>(size_t(n), 0));
  h.arrow.assign(size_t(n), std::vector<int>(size_t(n), 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int m = glb2(a, b), j = lub2(a, b);
      if (m < 0 || j < 0) throw HeytingError("order is not a lattice");
      h.meet[a][b] = m;
      h.join[a][b] = j;
    }
  // Top and bottom exist in any finite lattice.
  h.top = 0;
  h.bottom = 0;
  for (int a = 1; a < n; ++a) {
    h.top = h.join[h.top][a];
    h.bottom = h.meet[h.bottom][a];
  }
  // Arrow: a ⇒ b is the greatest c with c ∧ a ≤ b.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int best = -1;
      for (int c = 0; c < n; ++c) {
        if (!h.leq[h.meet[c][a]][b]) continue;
        if (best == -1) {
          best = c;
        } else {
          best = h.join[best][c];
          if (!h.leq[h.meet[best][a]][b]) throw HeytingError("no relative pseudo-complement");
        }
      }
      if (best == -1) throw HeytingError("no relative pseudo-complement");
      h.arrow[a][b] = best;
    }
  // Residuation, exhaustively.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (h.leq[c][h.arrow[a][b]] != h.leq[h.meet[c][a]][b])
          throw HeytingError("residuation law fails");
  return h;
}

/// Any Heyting algebra is a truth values algebra: ⊤̃/∧̃/∀̃ are greatest
/// lower bounds, ⊥̃/∨̃/∃̃ least upper bounds, ⇒̃ is the arrow, B⁺ = {⊤̃},
/// and the quantifier domains are all of ℘(B).
inline FiniteTva heyting_to_tva(const FiniteHeyting& h) {
  FiniteTva t;
  const int n = h.size();
  t.names = h.names;
  t.top = h.top;
  t.bottom = h.bottom;
  t.positive = BSet(1) << h.top;
  t.imp = h.arrow;
  t.meet = h.meet;
  t.join = h.join;
  BSet full = t.carrier_mask();
  for (BSet s = 0;; ++s) {
    int glb = h.top, lub = h.bottom;
    for (int x = 0; x < n; ++x)
      if (bset_has(s, x)) {
        glb = h.meet[glb][x];
        lub = h.join[lub][x];
      }
    t.dom_forall.push_back(s);
    t.dom_exists.push_back(s);
    t.forall_map.emplace(s, glb);
    t.exists_map.emplace(s, lub);
    if (s == full) break;
  }
  t.leq = h.leq;
  t.validate_structure();
  return t;
}

}  // namespace modulo

#endif  // MODULO_TVA_HPP
