// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "modulo/model_io.hpp"
#include "modulo/proof_io.hpp"
#include "modulo/theory_io.hpp"
#include "modulo/tva_io.hpp"
#include "support/generators.hpp"
#include "support/replay.hpp"
#include "support/run_cli.hpp"

using namespace modulo;

namespace {

int failures = 0;

void report(int n, const std::string& name, bool pass, const std::string& detail = "") {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << n << ": " << name;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << "\n" << std::flush;
  if (!pass) ++failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool all_elim_majors_neutral(const ProofPtr& p) {
  if (is_elim_rule(p->tag) && !is_neutral(p->subs[major_index(p->tag)])) return false;
  for (const auto& s : p->subs)
    if (!all_elim_majors_neutral(s)) return false;
  return true;
}

// --- criterion 1: the paper's proof of ⊢ Q -------------------------------

void criterion1() {
  const TheoryBundle& pq = pimpq_theory();
  ProofPtr proof = parse_proof(pq.sig, slurp(cli::corpus("paper_q_proof.sexp")));
  bool accepted = check(pq, proof).accepted;
  bool not_cut_free = !is_cut_free(proof);
  ReductionTrace tr = normalize(pq, proof, Budget(100, 1024));
  bool cycles = tr.status == ReductionTrace::Status::CycleDetected;
  report(1, "paper proof of ⊢ Q: accepted, not cut-free, cycles within fuel 100",
         accepted && not_cut_free && cycles,
         std::string("verdict=") + (accepted ? "accepted" : "rejected") +
             ", status=" + to_string(tr.status));
}

// --- criterion 2: the contrast theory normalizes --------------------------

void criterion2() {
  const TheoryBundle& qp = qimpp_theory();
  gen::Rng rng(920001);
  int produced = 0, normalized = 0, closed = 0, closed_intro = 0;
  for (int i = 0; produced < 200 && i < 20000; ++i) {
    gen::ProofGen pg{qp, rng};
    Context ctx;
    int nctx = rng.range(0, 2);
    for (int k = 0; k < nctx; ++k) ctx.push_back(gen::random_pq_prop(rng, 2));
    auto proof = pg.prove(ctx, gen::random_pq_prop(rng, rng.range(1, 3)), 6);
    if (!proof) continue;
    if (!check(qp, *proof).accepted) continue;
    ++produced;
    ReductionTrace tr = normalize(qp, *proof, Budget(1000, 1024));
    if (tr.status == ReductionTrace::Status::NormalForm) {
      ++normalized;
      if ((*proof)->concl.ctx.empty()) {
        ++closed;
        if (is_intro_rule(tr.steps.back()->tag)) ++closed_intro;
      }
    }
  }
  report(2, "200 random checked proofs in P → (Q ⇒ P) normalize; closed results end in intros",
         produced == 200 && normalized == 200 && closed > 0 && closed_intro == closed,
         std::to_string(normalized) + "/200 normalized, " + std::to_string(closed_intro) + "/" +
             std::to_string(closed) + " closed results intro-rooted");
}

// --- criterion 3: cut-free alignment ---------------------------------------

void criterion3() {
  gen::Rng rng(930001);
  std::vector<const TheoryBundle*> theories{&pimpq_theory(), &qimpp_theory(), &stt_theory()};
  int produced = 0, cut_free_seen = 0, normal_seen = 0, bad = 0;
  int fresh = 0;
  for (int i = 0; produced < 500 && i < 50000; ++i) {
    const TheoryBundle& th = *theories[size_t(i % theories.size())];
    gen::ProofGen pg{th, rng};
    Context ctx;
    Prop goal = Prop::top();
    if (th.name == "stt") {
      std::vector<Var> env;
      goal = gen::random_stt_prop(rng, env, 2, fresh);
      if (rng.chance(0.4)) ctx.push_back(gen::random_stt_prop(rng, env, 2, fresh));
    } else {
      goal = gen::random_pq_prop(rng, rng.range(1, 3));
      if (rng.chance(0.5)) ctx.push_back(gen::random_pq_prop(rng, 2));
    }
    auto proof = pg.prove(ctx, goal, 6);
    if (!proof) continue;
    if (!check(th, *proof).accepted) continue;
    ++produced;
    if (is_cut_free(*proof)) {
      ++cut_free_seen;
      if (find_detour(th, *proof)) ++bad;
    }
    ReductionTrace tr = normalize(th, *proof, Budget(1000, 1024));
    if (tr.status == ReductionTrace::Status::NormalForm) {
      ProofPtr last = tr.steps.back();
      if (all_elim_majors_neutral(last)) {
        ++normal_seen;
        if (!is_cut_free(last)) ++bad;
      }
    }
  }
  report(3, "cut-free ⇒ no detour redex; neutral-major normal forms are cut-free",
         produced == 500 && bad == 0 && cut_free_seen > 50 && normal_seen > 50,
         std::to_string(produced) + " proofs, " + std::to_string(cut_free_seen) +
             " cut-free, " + std::to_string(normal_seen) + " neutral-major normal forms, " +
             std::to_string(bad) + " counterexamples");
}

// --- criterion 4: Heyting algebras pass every validator --------------------

void criterion4() {
  bool ok = true;
  std::string detail;
  for (const auto& [name, h] : gen::heyting_family()) {
    FiniteTva t = heyting_to_tva(h);
    TvaReport rep = validate_tva(t);
    bool pass = rep.all_pass() && rep.full && validate_order(t).all_pass() &&
                validate_complete(t).complete;
    if (!pass) {
      ok = false;
      detail += name + " failed; ";
    }
  }
  report(4, "chains 2–6 and the four distributive lattices ≤5 pass all 17 + order + complete",
         ok, ok ? "9/9 algebras" : detail);
}

// --- criterion 5: mutation sensitivity -------------------------------------

void criterion5() {
  FiniteTva base = heyting_to_tva(gen::chain_heyting(2));
  struct Mutation {
    int condition;
    std::function<void(FiniteTva&)> apply;
  };
  const std::vector<Mutation> mutations = {
      {1, [](FiniteTva& t) { t.imp[1][0] = 1; }},
      {2, [](FiniteTva& t) { t.imp[0][0] = 0; }},
      {3, [](FiniteTva& t) { t.imp[1][1] = 0; }},
      {4, [](FiniteTva& t) { t.positive = 0; }},
      {5, [](FiniteTva& t) { t.imp[0][0] = 0; }},
      {6, [](FiniteTva& t) { t.meet[1][1] = 0; }},
      {7, [](FiniteTva& t) { t.meet[0][1] = 1; }},
      {8, [](FiniteTva& t) { t.meet[1][0] = 1; }},
      {9, [](FiniteTva& t) { t.join[1][0] = 0; }},
      {10, [](FiniteTva& t) { t.join[0][1] = 0; }},
      {11, [](FiniteTva& t) { t.join[0][0] = 1; }},
      {12,
       [](FiniteTva& t) {
         BSet zero = BSet(0b01);
         t.dom_forall.erase(std::find(t.dom_forall.begin(), t.dom_forall.end(), zero));
         t.forall_map.erase(zero);
       }},
      {13, [](FiniteTva& t) { t.forall_map.at(BSet(0b10)) = 0; }},
      {14, [](FiniteTva& t) { t.imp[1][1] = 0; }},
      {15, [](FiniteTva& t) { t.forall_map.at(BSet(0b01)) = 1; }},
      {16, [](FiniteTva& t) { t.exists_map.at(BSet(0b10)) = 0; }},
      {17, [](FiniteTva& t) { t.exists_map.at(BSet(0b01)) = 1; }},
  };
  bool ok = true;
  std::string detail;
  for (const auto& m : mutations) {
    FiniteTva t = base;
    m.apply(t);
    TvaReport rep = validate_tva(t);
    const TvaConditionResult& c = rep.condition(m.condition);
    bool detected = !c.pass && !c.witnesses.empty();
    bool replays = detected && replay::violates(t, m.condition, c.witnesses[0]);
    if (!(detected && replays)) {
      ok = false;
      detail += "condition " + std::to_string(m.condition) + " not caught; ";
    }
  }
  report(5, "each of the 17 conditions is tripped by a single-entry mutation, witness replays",
         ok, ok ? "17/17 mutations detected and replayed" : detail);
}

// --- criterion 6: soundness ------------------------------------------------

FiniteStructure pq_structure(int p, int q) {
  FiniteStructure s;
  s.tva = heyting_to_tva(gen::chain_heyting(2));
  s.pred_tables["P"] = {p};
  s.pred_tables["Q"] = {q};
  return s;
}

void criterion6() {
  gen::Rng rng(960001);
  bool ok = true;
  int models = 0, sequents = 0;
  for (const TheoryBundle* th : {&pimpq_theory(), &qimpp_theory()}) {
    std::vector<Sequent> conclusions;
    if (th->name == "pimpq")
      conclusions.push_back(parse_proof(th->sig, slurp(cli::corpus("paper_q_proof.sexp")))
                                ->concl);
    for (int i = 0; int(conclusions.size()) < 120 && i < 8000; ++i) {
      gen::ProofGen pg{*th, rng};
      Context ctx;
      if (rng.chance(0.5)) ctx.push_back(gen::random_pq_prop(rng, 2));
      auto proof = pg.prove(ctx, gen::random_pq_prop(rng, rng.range(1, 3)), 5);
      if (!proof) continue;
      if (!check(*th, *proof).accepted) continue;
      conclusions.push_back((*proof)->concl);
    }
    // every structure over the Boolean algebra that models the theory
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        FiniteStructure s = pq_structure(p, q);
        if (!check_model(s, *th).ok) continue;
        ++models;
        SoundnessReport rep = check_soundness_sample(s, *th, conclusions);
        sequents += rep.sequents_checked;
        if (!rep.ok) ok = false;
      }
  }
  report(6, "accepted conclusions denote positive values in every model (provable ⇒ valid)",
         ok && models == 4 && sequents > 400,
         std::to_string(models) + " models, " + std::to_string(sequents) +
             " sequent evaluations, 0 violations required");
}

// --- criterion 7: substitution lemma ----------------------------------------

void criterion7() {
  TheoryBundle fo = gen::fo_theory();
  // two structures over different algebras
  std::vector<FiniteStructure> structures;
  for (int which = 0; which < 2; ++which) {
    FiniteStructure s;
    FiniteTva t = heyting_to_tva(which == 0 ? gen::chain_heyting(2) : gen::chain_heyting(3));
    s.tva = t;
    Sort i = Sort::base("iota");
    s.base_elem_names["iota"] = {"d0", "d1"};
    s.domains.emplace(i, make_domain(i, {Elem::scalar(0), Elem::scalar(1)}));
    s.func_tables["c"] = {Elem::scalar(0)};
    s.func_tables["f"] = {Elem::scalar(1), Elem::scalar(0)};
    s.func_tables["g"] = {Elem::scalar(0), Elem::scalar(1), Elem::scalar(1), Elem::scalar(0)};
    s.pred_tables["in"] = {t.top, t.bottom, which == 0 ? t.bottom : t.top, t.top};
    s.pred_tables["subset"] = {t.top, t.bottom, t.bottom, t.top};
    s.pred_tables["R"] = {t.bottom, t.top};
    structures.push_back(std::move(s));
  }
  gen::Rng rng(970001);
  Var x{"x", Sort::base("iota")}, y{"y", Sort::base("iota")};
  bool ok = true;
  int checked = 0;
  for (const auto& s : structures) {
    for (int i = 0; i < 1000; ++i) {
      std::vector<Var> env{x, y};
      int fresh = 0;
      Prop a = gen::random_fo_prop(rng, env, 3, fresh);
      Term t = gen::random_fo_term(rng, env, 3);
      Assignment phi{{x, Elem::scalar(rng.range(0, 1))}, {y, Elem::scalar(rng.range(0, 1))}};
      Assignment phi2 = phi;
      phi2.insert_or_assign(x, denote_term(s, fo.sig, phi, t));
      auto lhs = denote_prop(s, fo.sig, phi, apply_subst(single_subst(x, t), a));
      auto rhs = denote_prop(s, fo.sig, phi2, a);
      if (!lhs || !rhs || *lhs != *rhs) ok = false;
      ++checked;
    }
  }
  report(7, "⟦(t/x)A⟧φ = ⟦A⟧φ+(⟦t⟧φ/x) on 1000 random triples per structure, exactly", ok,
         std::to_string(checked) + " triples");
}

// --- criterion 8: desk-scale super-consistency of STT ----------------------

void criterion8() {
  const TheoryBundle& stt = stt_theory();
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  int algebras = 0;
  for (const auto& [name, h] : gen::heyting_family()) {
    FiniteStructure s = build_stt_model(heyting_to_tva(h), SortDepthBound(2));
    ModelReport rep = check_model(s, stt);
    ++algebras;
    if (!rep.ok || rep.rule_instances == 0) {
      ok = false;
      detail += name + " failed; ";
    }
  }
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
  ok = ok && secs <= 300;
  report(8, "build_stt_model passes check_model for every rule over all 9 algebras (depth 2)",
         ok, std::to_string(algebras) + " algebras in " + std::to_string(secs) + "s (budget 300s)");
}

// --- criterion 9: rewriting regressions ------------------------------------

void criterion9() {
  const TheoryBundle& stt = stt_theory();
  bool ok = true;
  std::string detail;
  Json golden = Json::parse(slurp(cli::corpus("golden/stt_nf.json")));
  for (const auto& entry : golden.at("cases")) {
    ExprParser p(stt.sig);
    auto expr = p.parse_expr(parse_sexpr(entry.at("expr").get<std::string>()));
    std::string got;
    if (std::holds_alternative<Prop>(expr))
      got = print_prop_closed(normal_form(stt.sig, stt.rules, std::get<Prop>(expr)).value);
    else
      got = print_term_closed(normal_form(stt.sig, stt.rules, std::get<Term>(expr)).value);
    if (got != entry.at("nf").get<std::string>()) {
      ok = false;
      detail += "nf mismatch for " + entry.at("expr").get<std::string>() + "; ";
    }
  }
  const TheoryBundle& pq = pimpq_theory();
  Prop P = Prop::atom("P"), Q = Prop::atom("Q");
  if (congruent(pq.sig, pq.rules, P, Prop::imp(P, Q)) != Cong::Yes) {
    ok = false;
    detail += "P ≡ P⇒Q not Yes; ";
  }
  if (congruent(stt.sig, stt.rules, Prop::top(), Prop::bottom()) != Cong::No) {
    ok = false;
    detail += "⊤ ≡ ⊥ not No; ";
  }
  report(9, "normal forms match goldens; P ≡ P⇒Q is Yes; ⊤ ≡ ⊥ is No", ok,
         ok ? std::to_string(golden.at("cases").size()) + " golden normal forms" : detail);
}

// --- criterion 10: determinism ----------------------------------------------

void criterion10() {
  const std::vector<std::string> suite = {
      "check pimpq " + cli::corpus("paper_q_proof.sexp") + " --json --seed 42",
      "classify " + cli::corpus("paper_q_proof.sexp") + " --json --seed 42",
      "normalize pimpq " + cli::corpus("paper_q_proof.sexp") + " --fuel 100 --json --seed 42",
      "rewrite nf stt '(eps (app (app dand dtop) dtop))' --json --seed 42",
      "rewrite cong pimpq P '(=> P Q)' --json --seed 42",
      "tva validate " + cli::corpus("bool2.json") + " --json --seed 42",
      "tva validate " + cli::corpus("chain3.json") + " --json --seed 42",
      "tva from-heyting " + cli::corpus("bool2_lattice.json") + " --json --seed 42",
      "model check pimpq " + cli::corpus("structures/pimpq_tt.json") + " --json --seed 42",
      "model check qimpp " + cli::corpus("structures/qimpp_tf.json") + " --json --seed 42",
      "model check stt " + cli::corpus("structures/stt_bool2_d2.json") + " --json --seed 42",
      "model eval " + cli::corpus("structures/pimpq_tt.json") +
          " '(=> P Q)' --theory pimpq --json --seed 42",
      "theory show stt --json --seed 42",
      "check stt " + cli::corpus("proof_refl.sexp") + " --json --seed 42",
      "rewrite cong stt true false --json --seed 42",
  };
  auto run_all = [&] {
    std::string bytes;
    for (const auto& args : suite) {
      auto r = cli::run(args);
      bytes += args + "\n" + std::to_string(r.code) + "\n" + r.out + "\n";
    }
    return bytes;
  };
  std::string first = run_all();
  std::string second = run_all();
  report(10, "two runs of the full CLI suite with the same seed are byte-identical",
         !first.empty() && first == second, std::to_string(suite.size()) + " invocations");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::cout << "ACCEPTANCE: " << (10 - failures) << "/10 criteria passed\n";
  return failures == 0 ? 0 : 1;
}
