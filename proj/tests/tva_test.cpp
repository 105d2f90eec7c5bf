#include <catch_amalgamated.hpp>

#include "modulo/tva.hpp"
#include "modulo/tva_io.hpp"
#include "support/generators.hpp"
#include "support/replay.hpp"

using namespace modulo;

namespace {

FiniteTva bool2() { return heyting_to_tva(gen::chain_heyting(2)); }

}  // namespace

TEST_CASE("the two-element Boolean algebra satisfies all 17 conditions") {
  FiniteTva t = bool2();
  TvaReport rep = validate_tva(t);
  for (const auto& c : rep.conditions) {
    INFO("condition " << c.condition);
    CHECK(c.pass);
  }
  CHECK(rep.full);
  CHECK(validate_order(t).all_pass());
  CHECK(validate_complete(t).complete);
  // classical implication table
  CHECK(t.imp[1][0] == 0);
  CHECK(t.imp[0][0] == 1);
  CHECK(t.imp[0][1] == 1);
  CHECK(t.imp[1][1] == 1);
}

TEST_CASE("an empty positive set fails condition 4") {
  FiniteTva t = bool2();
  t.positive = 0;
  TvaReport rep = validate_tva(t);
  CHECK(!rep.condition(4).pass);
  REQUIRE(!rep.condition(4).witnesses.empty());
  CHECK(replay::violates(t, 4, rep.condition(4).witnesses[0]));
}

TEST_CASE("breaking modus ponens fails condition 1 with a replayable witness") {
  FiniteTva t = bool2();
  t.imp[1][0] = 1;  // 1 ⇒̃ 0 now claims to be positive
  TvaReport rep = validate_tva(t);
  REQUIRE(!rep.condition(1).pass);
  const TvaWitness& w = rep.condition(1).witnesses[0];
  CHECK(w.a == 1);
  CHECK(w.b == 0);
  CHECK(replay::violates(t, 1, w));
}

TEST_CASE("every reported counterexample replays as a real violation") {
  // Sweep single-entry mutations of the Boolean algebra and replay every
  // failure the validator reports.
  FiniteTva base = bool2();
  std::vector<FiniteTva> mutants;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int v = 0; v < 2; ++v) {
        for (auto field : {0, 1, 2}) {
          FiniteTva m = base;
          auto& table = field == 0 ? m.imp : field == 1 ? m.meet : m.join;
          if (table[size_t(a)][size_t(b)] == v) continue;
          table[size_t(a)][size_t(b)] = v;
          mutants.push_back(std::move(m));
        }
      }
  for (BSet s = 0; s < 4; ++s)
    for (int v = 0; v < 2; ++v) {
      for (bool fa : {true, false}) {
        FiniteTva m = base;
        auto& qmap = fa ? m.forall_map : m.exists_map;
        if (qmap.at(s) == v) continue;
        qmap.at(s) = v;
        mutants.push_back(std::move(m));
      }
    }
  int replayed = 0;
  for (const auto& m : mutants) {
    TvaReport rep = validate_tva(m);
    for (const auto& c : rep.conditions)
      for (const auto& w : c.witnesses) {
        CHECK(replay::violates(m, c.condition, w));
        ++replayed;
      }
  }
  CHECK(replayed > 20);
}

TEST_CASE("heyting_to_tva on the three-chain matches the residuation table") {
  FiniteHeyting h = gen::chain_heyting(3);  // 0 < m < 1
  CHECK(h.arrow[2][1] == 1);                // 1 ⇒ m = m
  CHECK(h.arrow[1][0] == 0);                // m ⇒ 0 = 0
  for (int x = 0; x < 3; ++x) CHECK(h.arrow[0][x] == 2);  // 0 ⇒ x = 1
  FiniteTva t = heyting_to_tva(h);
  // B⁺ of a Heyting algebra's TVA is exactly {⊤̃}
  CHECK(t.positive == (BSet(1) << t.top));
  CHECK(validate_tva(t).all_pass());
}

TEST_CASE("the generated Heyting family is exhaustively valid") {
  for (const auto& [name, h] : gen::heyting_family()) {
    INFO(name);
    FiniteTva t = heyting_to_tva(h);
    CHECK(t.positive == (BSet(1) << t.top));
    TvaReport rep = validate_tva(t);
    CHECK(rep.all_pass());
    CHECK(rep.full);
    // full algebras never fail condition 12
    CHECK(rep.condition(12).pass);
    CHECK(validate_order(t).all_pass());
    CHECK(validate_complete(t).complete);
  }
}

TEST_CASE("non-lattices and non-Heyting lattices are rejected") {
  // two maximal elements over two atoms: no meets/joins
  std::vector<std::vector<bool>> poset(4, std::vector<bool>(4, false));
  for (int i = 0; i < 4; ++i) poset[size_t(i)][size_t(i)] = true;
  poset[0][2] = poset[0][3] = poset[1][2] = poset[1][3] = true;
  CHECK_THROWS_AS(make_heyting({"a", "b", "c", "d"}, poset), HeytingError);

  // M3 is a lattice but has no relative pseudo-complement
  std::vector<std::vector<bool>> m3(5, std::vector<bool>(5, false));
  for (int i = 0; i < 5; ++i) m3[size_t(i)][size_t(i)] = true;
  for (int atom : {1, 2, 3}) {
    m3[0][size_t(atom)] = true;
    m3[size_t(atom)][4] = true;
  }
  m3[0][4] = true;
  CHECK_THROWS_AS(make_heyting({"0", "x", "y", "z", "1"}, m3), HeytingError);
}

TEST_CASE("order diagnostics") {
  FiniteTva t = bool2();
  // flip the order so ⊤̃ is no longer maximal
  std::vector<std::vector<bool>> rev{{true, false}, {true, true}};
  t.leq = rev;
  OrderReport rep = validate_order(t);
  bool top_fail = false, up_fail = false;
  for (const auto& c : rep.checks) {
    if (c.name == "top-maximal" && !c.pass) top_fail = true;
    if (c.name == "positive-upward-closed" && !c.pass) up_fail = true;
  }
  CHECK((top_fail || up_fail));

  // declaring 1 ⊑ 0 on top of the true order breaks antisymmetry
  FiniteTva t2 = bool2();
  (*t2.leq)[1][0] = true;
  OrderReport rep2 = validate_order(t2);
  bool antisym = false;
  for (const auto& c : rep2.checks)
    if (c.name == "antisymmetric" && !c.pass) antisym = true;
  CHECK(antisym);
}

TEST_CASE("completeness finds posets without meets") {
  // two incomparable atoms below two incomparable tops: {c,d} has no glb
  FiniteTva t;
  t.names = {"a", "b", "c", "d"};
  t.top = 2;
  t.bottom = 0;
  t.positive = 0b0100;
  t.imp = t.meet = t.join =
      std::vector<std::vector<int>>(4, std::vector<int>(4, 0));
  for (BSet s = 0; s < 16; ++s) {
    t.dom_forall.push_back(s);
    t.dom_exists.push_back(s);
    t.forall_map.emplace(s, 0);
    t.exists_map.emplace(s, 0);
  }
  std::vector<std::vector<bool>> leq(4, std::vector<bool>(4, false));
  for (int i = 0; i < 4; ++i) leq[size_t(i)][size_t(i)] = true;
  leq[0][2] = leq[0][3] = leq[1][2] = leq[1][3] = true;
  t.leq = leq;
  CompleteReport rep = validate_complete(t);
  CHECK(!rep.complete);
  REQUIRE(rep.witness);
  // the spec's witness shape: {c, d} has lower bounds {a, b}, which are
  // incomparable, so no greatest one exists
  auto has_glb = [&](BSet s) {
    for (int m = 0; m < 4; ++m) {
      bool lower = true;
      for (int x = 0; x < 4; ++x)
        if (bset_has(s, x) && !t.below(m, x)) lower = false;
      if (!lower) continue;
      bool greatest = true;
      for (int c = 0; c < 4; ++c) {
        bool clower = true;
        for (int x = 0; x < 4; ++x)
          if (bset_has(s, x) && !t.below(c, x)) clower = false;
        if (clower && !t.below(c, m)) greatest = false;
      }
      if (greatest) return true;
    }
    return false;
  };
  CHECK(!has_glb(BSet(0b1100)));

  // any finite lattice is complete, including its empty subset (glb = top)
  CHECK(validate_complete(bool2()).complete);
}

TEST_CASE("non-full quantifier domains are representable and detected") {
  FiniteTva t = bool2();
  // restrict 𝒜 to {{1}}: condition 12 must fail somewhere
  t.dom_forall = {BSet(0b10)};
  t.forall_map.clear();
  t.forall_map.emplace(BSet(0b10), 1);
  TvaReport rep = validate_tva(t);
  CHECK(!rep.full);
  CHECK(!rep.condition(12).pass);
  for (const auto& w : rep.condition(12).witnesses)
    CHECK(replay::violates(t, 12, w));
}

TEST_CASE("algebra JSON round-trips") {
  FiniteTva t = heyting_to_tva(gen::chain_heyting(3));
  Json j = tva_to_json(t);
  FiniteTva back = tva_from_json(j);
  CHECK(tva_to_json(back) == j);
  CHECK(validate_tva(back).all_pass());
  REQUIRE(back.leq);
  CHECK(validate_order(back).all_pass());
}
