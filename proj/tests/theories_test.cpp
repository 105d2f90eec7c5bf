#include <catch_amalgamated.hpp>

#include "modulo/builtins.hpp"
#include "support/generators.hpp"

using namespace modulo;

TEST_CASE("the STT signature and rules are as defined") {
  const TheoryBundle& stt = stt_theory();
  // ε has predicate rank ⟨o⟩
  Rank eps = stt.sig.resolve(SymbolRef{"eps", {}});
  CHECK(eps.is_pred);
  REQUIRE(eps.args.size() == 1);
  CHECK(eps.args[0] == Sort::base("o"));

  // the nine rewrite rules, in display order
  const auto& rules = stt.rules.rules();
  REQUIRE(rules.size() == 9);
  std::vector<std::string> labels;
  for (const auto& r : rules) labels.push_back(r.label);
  CHECK(labels == std::vector<std::string>{"S", "K", "eps-top", "eps-bot", "eps-imp",
                                           "eps-and", "eps-or", "eps-forall", "eps-exists"});

  // α(α(K,x),y) → x is present as stated
  const RewriteRule& k = rules[1];
  CHECK(k.kind == RewriteRule::Kind::TermRule);
  CHECK(k.rhs_term == Term::free_var("x", Sort::var("T")));
  CHECK(k.lhs_term.sym().name == "app");

  // ε(α(∀̇_T, x)) → ∀y ε(α(x,y)) binds y in its rhs
  const RewriteRule& fa = rules[7];
  CHECK(fa.kind == RewriteRule::Kind::PropRule);
  CHECK(fa.rhs_prop.kind() == Prop::Kind::Forall);
  CHECK(fa.rhs_prop.binder_sort() == Sort::var("T"));
  // the bound variable really is rhs-bound: the rhs has only x free
  auto fv = free_vars(fa.rhs_prop);
  REQUIRE(fv.size() == 1);
  CHECK(fv.begin()->name == "x");
}

TEST_CASE("the example theories are the paper's two rules") {
  auto list = example_theories();
  REQUIRE(list.size() == 2);
  const TheoryBundle& pq = *list[0];
  const TheoryBundle& qp = *list[1];
  CHECK(pq.name == "pimpq");
  CHECK(qp.name == "qimpp");
  Prop P = Prop::atom("P"), Q = Prop::atom("Q");
  REQUIRE(pq.rules.rules().size() == 1);
  CHECK(pq.rules.rules()[0].lhs_prop == P);
  CHECK(pq.rules.rules()[0].rhs_prop == Prop::imp(P, Q));
  REQUIRE(qp.rules.rules().size() == 1);
  CHECK(qp.rules.rules()[0].lhs_prop == P);
  CHECK(qp.rules.rules()[0].rhs_prop == Prop::imp(Q, P));
  CHECK(pq.axioms.empty());
  CHECK(qp.axioms.empty());
  CHECK(builtin_theory("stt") == &stt_theory());
  CHECK(builtin_theory("nope") == nullptr);
}

TEST_CASE("build_stt_model realizes the proof's interpretations") {
  const TheoryBundle& stt = stt_theory();
  FiniteTva bool2 = heyting_to_tva(gen::chain_heyting(2));
  FiniteStructure s = build_stt_model(bool2, SortDepthBound(2));

  // M_ι = {0}, M_o = B
  CHECK(s.domain(Sort::base("iota")).elems.size() == 1);
  CHECK(s.domain(Sort::base("o")).elems.size() == 2);

  // ε̂ is the identity on M_o
  for (int v = 0; v < 2; ++v) CHECK(s.pred_tables.at("eps")[size_t(v)] == v);

  // ⟦ε(α(α(∧̇,⊤̇),⊤̇))⟧ = ⊤̃ ∧̃ ⊤̃
  ExprParser p(stt.sig);
  Prop e = p.parse_prop(parse_sexpr("(eps (app (app dand dtop) dtop))"));
  auto v = denote_prop(s, stt.sig, {}, e);
  REQUIRE(v);
  CHECK(*v == bool2.meet[size_t(bool2.top)][size_t(bool2.top)]);

  // all nine rules pass, with real instances
  ModelReport rep = check_model(s, stt);
  CHECK(rep.ok);
  CHECK(rep.rule_instances > 0);

  // rejects non-full algebras and carriers beyond the cap
  FiniteTva nofull = bool2;
  nofull.dom_forall.pop_back();
  CHECK_THROWS_AS(build_stt_model(nofull, SortDepthBound(2)), TvaError);
  CHECK_THROWS_AS(build_stt_model(bool2, SortDepthBound(2), 1), TvaError);
  CHECK_THROWS_AS(SortDepthBound(0), std::invalid_argument);
}

TEST_CASE("S is exercised with non-trivial instances at depth 2") {
  const TheoryBundle& stt = stt_theory();
  FiniteTva bool2 = heyting_to_tva(gen::chain_heyting(2));
  FiniteStructure s = build_stt_model(bool2, SortDepthBound(2));
  // evaluate the S rule at (o,o,o) by hand
  ExprParser p(stt.sig);
  Sort o = Sort::base("o");
  Sort ooo = Sort::arrow(o, Sort::arrow(o, o));
  p.declare_var("x", ooo);
  p.declare_var("y", Sort::arrow(o, o));
  p.declare_var("z", o);
  Term lhs = p.parse_term(parse_sexpr("(app (app (app (S o o o) x) y) z)"));
  Term rhs = p.parse_term(parse_sexpr("(app (app x z) (app y z))"));
  auto phis = enumerate_assignments(
      s, {Var{"x", ooo}, Var{"y", Sort::arrow(o, o)}, Var{"z", o}}, 10000);
  REQUIRE(phis);
  REQUIRE(phis->size() == 16 * 4 * 2);
  for (const auto& phi : *phis)
    CHECK(denote_term(s, stt.sig, phi, lhs) == denote_term(s, stt.sig, phi, rhs));
}

TEST_CASE("stt model checks over every small full algebra") {
  const TheoryBundle& stt = stt_theory();
  for (const auto& [name, h] : gen::heyting_family()) {
    if (h.size() > 3) continue;
    INFO(name);
    FiniteStructure s = build_stt_model(heyting_to_tva(h), SortDepthBound(2));
    ModelReport rep = check_model(s, stt);
    CHECK(rep.ok);
    CHECK(rep.rule_instances > 0);
  }
}

TEST_CASE("STT rewriting terminates empirically") {
  const TheoryBundle& stt = stt_theory();
  gen::Rng rng(321);
  std::vector<Var> env;
  int fresh = 0;
  for (int i = 0; i < 150; ++i) {
    Prop p = gen::random_stt_prop(rng, env, 4, fresh);
    auto nf = normal_form(stt.sig, stt.rules, p);
    CHECK(nf.complete);
  }
  for (int i = 0; i < 150; ++i) {
    auto t = gen::random_stt_term(rng, {}, Sort::base("o"), 30);
    if (!t) continue;
    auto nf = normal_form(stt.sig, stt.rules, *t);
    CHECK(nf.complete);
  }
}

TEST_CASE("the example theories behave oppositely under the kernel") {
  const TheoryBundle& pq = pimpq_theory();
  const TheoryBundle& qp = qimpp_theory();
  // the non-normalizing side
  ReductionTrace bad = normalize(pq, gen::paper_q_proof(), Budget(100, 256));
  CHECK(bad.status == ReductionTrace::Status::CycleDetected);
  // the normalizing side: sampled detour proofs all reach normal forms
  gen::Rng rng(2024);
  int done = 0;
  for (int i = 0; done < 40 && i < 800; ++i) {
    gen::ProofGen pg{qp, rng};
    Context ctx;
    if (rng.chance(0.5)) ctx.push_back(gen::random_pq_prop(rng, 2));
    auto proof = pg.prove(ctx, gen::random_pq_prop(rng, 2), 5);
    if (!proof) continue;
    ++done;
    ReductionTrace tr = normalize(qp, *proof, Budget(1000, 512));
    CHECK(tr.status == ReductionTrace::Status::NormalForm);
  }
  CHECK(done == 40);
}
