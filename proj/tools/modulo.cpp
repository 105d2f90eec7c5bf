// modulo — proof checking, rewriting, algebra validation and model checking
// for deduction modulo, as a batch CLI over s-expression and JSON files.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "modulo/builtins.hpp"
#include "modulo/model_io.hpp"
#include "modulo/proof_io.hpp"
#include "modulo/theory_io.hpp"
#include "modulo/tva_io.hpp"

namespace fs = std::filesystem;
using namespace modulo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  bool json = false;
  std::optional<long> seed;
  int fuel = 10000;
  std::string trace_path;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Arguments that name an existing file are read; anything else is treated
/// as literal text.
std::string file_or_literal(const std::string& arg) {
  std::error_code ec;
  if (fs::exists(arg, ec) && fs::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

TheoryBundle load_theory(const std::string& arg) {
  if (const TheoryBundle* b = builtin_theory(arg)) return *b;
  return parse_theory(file_or_literal(arg));
}

void start_report(Json& j, const char* command, const Options& opt) {
  j["command"] = command;
  if (opt.seed)
    j["seed"] = *opt.seed;
  else
    j["seed"] = nullptr;
  j["fuel"] = opt.fuel;
}

int emit(const Json& j, const Options& opt, int code, const std::string& human) {
  if (opt.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << human;
  return code;
}

Json failures_to_json(const std::vector<CheckFailure>& fs) {
  Json out = Json::array();
  for (const auto& f : fs)
    out.push_back(Json{{"path", f.path_str()},
                       {"rule", f.rule},
                       {"kind", to_string(f.kind)},
                       {"message", f.message}});
  return out;
}

std::string witness_str(const FiniteTva& t, const TvaWitness& w) {
  std::string s;
  auto name = [&](int i) { return t.names[size_t(i)]; };
  if (w.a >= 0) s += "a=" + name(w.a);
  if (w.b >= 0) s += (s.empty() ? "" : ",") + std::string("b=") + name(w.b);
  if (w.c >= 0) s += (s.empty() ? "" : ",") + std::string("c=") + name(w.c);
  auto set_str = [&](BSet bs) {
    std::string r = "{";
    bool first = true;
    for (int i = 0; i < t.size(); ++i)
      if (bset_has(bs, i)) {
        if (!first) r += ",";
        first = false;
        r += name(i);
      }
    return r + "}";
  };
  if (w.A) s += (s.empty() ? "" : ",") + std::string("A=") + set_str(*w.A);
  if (w.E) s += (s.empty() ? "" : ",") + std::string("E=") + set_str(*w.E);
  return s;
}

int cmd_rewrite_nf(const Options& opt, const std::string& theory_arg,
                   const std::string& expr_arg) {
  TheoryBundle th = load_theory(theory_arg);
  ExprParser p(th.sig);
  auto expr = p.parse_expr(parse_sexpr(file_or_literal(expr_arg)));
  Budget budget(opt.fuel, 1024);
  Json j;
  start_report(j, "rewrite.nf", opt);
  j["theory"] = th.name;
  std::string printed;
  bool complete;
  int steps;
  if (std::holds_alternative<Prop>(expr)) {
    auto r = normal_form(th.sig, th.rules, std::get<Prop>(expr), budget);
    printed = print_prop_closed(r.value);
    complete = r.complete;
    steps = r.steps;
  } else {
    auto r = normal_form(th.sig, th.rules, std::get<Term>(expr), budget);
    printed = print_term_closed(r.value);
    complete = r.complete;
    steps = r.steps;
  }
  j["status"] = complete ? "NormalForm" : "FuelExhausted";
  j["steps"] = steps;
  j["result"] = printed;
  std::string human = std::string(complete ? "normal form" : "fuel exhausted") + " after " +
                      std::to_string(steps) + " steps:\n" + printed + "\n";
  return emit(j, opt, complete ? kExitOk : kExitFail, human);
}

int cmd_rewrite_cong(const Options& opt, const std::string& theory_arg, const std::string& a_arg,
                     const std::string& b_arg) {
  TheoryBundle th = load_theory(theory_arg);
  ExprParser p(th.sig);
  auto a = p.parse_expr(parse_sexpr(file_or_literal(a_arg)));
  auto b = p.parse_expr(parse_sexpr(file_or_literal(b_arg)));
  Budget budget(opt.fuel, 1024);
  Cong c;
  if (std::holds_alternative<Prop>(a) && std::holds_alternative<Prop>(b))
    c = congruent(th.sig, th.rules, std::get<Prop>(a), std::get<Prop>(b), budget);
  else if (std::holds_alternative<Term>(a) && std::holds_alternative<Term>(b))
    c = congruent(th.sig, th.rules, std::get<Term>(a), std::get<Term>(b), budget);
  else
    throw ParseError("congruence arguments must both be terms or both be propositions");
  Json j;
  start_report(j, "rewrite.cong", opt);
  j["theory"] = th.name;
  j["status"] = to_string(c);
  return emit(j, opt, c == Cong::Yes ? kExitOk : kExitFail,
              std::string(to_string(c)) + "\n");
}

int cmd_check(const Options& opt, const std::string& theory_arg, const std::string& proof_arg) {
  TheoryBundle th = load_theory(theory_arg);
  ProofPtr proof = parse_proof(th.sig, file_or_literal(proof_arg));
  CheckReport rep = check(th, proof, Budget(opt.fuel, 1024));
  Json j;
  start_report(j, "check", opt);
  j["theory"] = th.name;
  j["verdict"] = rep.accepted ? "accepted" : "rejected";
  j["failures"] = failures_to_json(rep.failures);
  std::string human = rep.accepted ? "accepted\n" : "rejected\n";
  for (const auto& f : rep.failures)
    human += "  " + f.path_str() + " [" + f.rule + "] " + to_string(f.kind) + ": " + f.message +
             "\n";
  return emit(j, opt, rep.accepted ? kExitOk : kExitFail, human);
}

int cmd_classify(const Options& opt, const std::string& proof_arg,
                 const std::string& theory_arg) {
  // Classification is structural, but parsing needs a signature; try the
  // requested theory, or every built-in.
  std::optional<ProofPtr> proof;
  std::string text = file_or_literal(proof_arg);
  if (!theory_arg.empty()) {
    proof = parse_proof(load_theory(theory_arg).sig, text);
  } else {
    for (const char* name : {"pimpq", "qimpp", "stt"}) {
      try {
        proof = parse_proof(builtin_theory(name)->sig, text);
        break;
      } catch (const std::exception&) {
      }
    }
    if (!proof)
      throw ParseError(
          "proof does not parse against any built-in theory; pass --theory <theory>");
  }
  bool neutral = is_neutral(*proof);
  bool cut_free = is_cut_free(*proof);
  Json j;
  start_report(j, "classify", opt);
  j["root"] = to_string((*proof)->tag);
  j["neutral"] = neutral;
  j["cut_free"] = cut_free;
  std::string human = std::string("root: ") + to_string((*proof)->tag) + "\nneutral: " +
                      (neutral ? "yes" : "no") + "\ncut-free: " + (cut_free ? "yes" : "no") +
                      "\n";
  return emit(j, opt, kExitOk, human);
}

int cmd_normalize(const Options& opt, const std::string& theory_arg,
                  const std::string& proof_arg) {
  TheoryBundle th = load_theory(theory_arg);
  ProofPtr proof = parse_proof(th.sig, file_or_literal(proof_arg));
  ReductionTrace tr = normalize(th, proof, Budget(opt.fuel, 1024));
  Json j;
  start_report(j, "normalize", opt);
  j["theory"] = th.name;
  j["status"] = to_string(tr.status);
  j["steps"] = static_cast<int>(tr.steps.size()) - 1;
  if (tr.status == ReductionTrace::Status::CycleDetected)
    j["cycle_index"] = tr.cycle_index;
  else
    j["cycle_index"] = nullptr;
  j["result"] = print_proof(tr.steps.back());
  if (!opt.trace_path.empty()) {
    Json trace;
    trace["status"] = to_string(tr.status);
    if (tr.status == ReductionTrace::Status::CycleDetected)
      trace["cycle_index"] = tr.cycle_index;
    else
      trace["cycle_index"] = nullptr;
    Json steps = Json::array();
    for (const auto& s : tr.steps) steps.push_back(print_proof(s));
    trace["steps"] = std::move(steps);
    std::ofstream out(opt.trace_path);
    if (!out) throw std::runtime_error("cannot write " + opt.trace_path);
    out << trace.dump(2) << "\n";
  }
  bool ok = tr.status == ReductionTrace::Status::NormalForm;
  std::string human = std::string(to_string(tr.status)) + " after " +
                      std::to_string(tr.steps.size() - 1) + " steps\n";
  return emit(j, opt, ok ? kExitOk : kExitFail, human);
}

int cmd_tva_validate(const Options& opt, const std::string& algebra_arg) {
  FiniteTva t = tva_from_json(Json::parse(file_or_literal(algebra_arg)));
  TvaReport rep = validate_tva(t);
  Json j;
  start_report(j, "tva.validate", opt);
  Json conds = Json::array();
  for (const auto& c : rep.conditions) {
    Json w = Json::array();
    for (const auto& x : c.witnesses) w.push_back(witness_str(t, x));
    conds.push_back(Json{{"condition", c.condition}, {"pass", c.pass}, {"witnesses", w}});
  }
  j["conditions"] = std::move(conds);
  j["full"] = rep.full;
  bool ok = rep.all_pass();
  std::string human;
  for (const auto& c : rep.conditions) {
    human += "condition " + std::to_string(c.condition) + ": " + (c.pass ? "pass" : "FAIL");
    if (!c.pass && !c.witnesses.empty()) human += " [" + witness_str(t, c.witnesses[0]) + "]";
    human += "\n";
  }
  human += std::string("full: ") + (rep.full ? "yes" : "no") + "\n";
  if (t.leq) {
    OrderReport orep = validate_order(t);
    Json order = Json::array();
    for (const auto& c : orep.checks) {
      order.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
      human += "order " + c.name + ": " + (c.pass ? "pass" : "FAIL " + c.witness) + "\n";
    }
    j["order"] = std::move(order);
    ok = ok && orep.all_pass();
    CompleteReport crep = validate_complete(t);
    j["complete"] = crep.complete;
    human += std::string("complete: ") + (crep.complete ? "yes" : "no") + "\n";
    ok = ok && crep.complete;
  } else {
    j["order"] = nullptr;
    j["complete"] = nullptr;
  }
  j["all_pass"] = ok;
  human += ok ? "all checks pass\n" : "checks FAILED\n";
  return emit(j, opt, ok ? kExitOk : kExitFail, human);
}

int cmd_tva_from_heyting(const Options& opt, const std::string& lattice_arg) {
  FiniteHeyting h = heyting_from_json(Json::parse(file_or_literal(lattice_arg)));
  FiniteTva t = heyting_to_tva(h);
  Json j;
  start_report(j, "tva.from-heyting", opt);
  j["algebra"] = tva_to_json(t);
  return emit(j, opt, kExitOk, tva_to_json(t).dump(2) + "\n");
}

int cmd_model_check(const Options& opt, const std::string& theory_arg,
                    const std::string& structure_arg) {
  TheoryBundle th = load_theory(theory_arg);
  fs::path base = ".";
  std::error_code ec;
  if (fs::exists(structure_arg, ec)) base = fs::path(structure_arg).parent_path();
  FiniteStructure s =
      parse_structure(th.sig, Json::parse(file_or_literal(structure_arg)), base);
  ModelReport rep = check_model(s, th);
  Json j;
  start_report(j, "model.check", opt);
  j["theory"] = th.name;
  j["ok"] = rep.ok;
  Json issues = Json::array();
  for (const auto& i : rep.issues)
    issues.push_back(
        Json{{"kind", to_string(i.kind)}, {"what", i.what}, {"assignment", i.assignment}});
  j["issues"] = std::move(issues);
  j["axiom_instances"] = rep.axiom_instances;
  j["rule_instances"] = rep.rule_instances;
  j["skipped_instances"] = rep.skipped_instances;
  std::string human = rep.ok ? "model: ok\n" : "model: FAILED\n";
  for (const auto& i : rep.issues)
    human += std::string("  ") + to_string(i.kind) + " " + i.what + " at " + i.assignment + "\n";
  human += "rule instances checked: " + std::to_string(rep.rule_instances) + ", skipped: " +
           std::to_string(rep.skipped_instances) + "\n";
  return emit(j, opt, rep.ok ? kExitOk : kExitFail, human);
}

int cmd_model_eval(const Options& opt, const std::string& structure_arg,
                   const std::string& prop_arg, const std::vector<std::string>& assigns,
                   const std::string& theory_arg) {
  TheoryBundle th = load_theory(theory_arg.empty() ? "stt" : theory_arg);
  fs::path base = ".";
  std::error_code ec;
  if (fs::exists(structure_arg, ec)) base = fs::path(structure_arg).parent_path();
  FiniteStructure s =
      parse_structure(th.sig, Json::parse(file_or_literal(structure_arg)), base);
  ExprParser p(th.sig);
  Prop prop = p.parse_prop(parse_sexpr(file_or_literal(prop_arg)));
  Assignment phi;
  for (const auto& a : assigns) {
    auto eq = a.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--assign takes x=element, got " + a);
    std::string var = a.substr(0, eq), elem = a.substr(eq + 1);
    auto it = p.vars().find(var);
    if (it == p.vars().end())
      throw std::runtime_error("assigned variable " + var + " does not occur in the formula");
    const Domain& d = s.domain(it->second);
    int pos = -1;
    for (size_t i = 0; i < d.elems.size(); ++i)
      if (elem_name(s, it->second, d.elems[i]) == elem) pos = static_cast<int>(i);
    if (pos < 0)
      throw std::runtime_error("unknown element " + elem + " of sort " + it->second.str());
    phi.emplace(Var{var, it->second}, d.elems[size_t(pos)]);
  }
  auto v = denote_prop(s, th.sig, phi, prop);
  Json j;
  start_report(j, "model.eval", opt);
  j["theory"] = th.name;
  j["defined"] = v.has_value();
  if (v) {
    j["value"] = s.tva.names[size_t(*v)];
    j["positive"] = s.tva.pos(*v);
  } else {
    j["value"] = nullptr;
    j["positive"] = false;
  }
  std::string human = v ? ("value: " + s.tva.names[size_t(*v)] +
                           (s.tva.pos(*v) ? " (positive)\n" : " (not positive)\n"))
                        : "undefined\n";
  return emit(j, opt, v ? kExitOk : kExitFail, human);
}

int cmd_theory_show(const Options& opt, const std::string& theory_arg) {
  TheoryBundle th = load_theory(theory_arg);
  std::string text = print_theory(th);
  Json j;
  start_report(j, "theory.show", opt);
  j["name"] = th.name;
  j["text"] = text;
  return emit(j, opt, kExitOk, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deduction modulo toolkit: proof checking, rewriting, truth values algebras"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow subcommand arguments

  Options opt;
  if (const char* env = std::getenv("MODULO_FUEL")) opt.fuel = std::atoi(env);
  app.add_flag("--json", opt.json, "machine-readable JSON output");
  app.add_option("--fuel", opt.fuel, "rewrite/reduction step budget")
      ->check(CLI::PositiveNumber);
  long seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "random seed (echoed in reports)");

  std::string arg1, arg2, arg3;
  std::vector<std::string> assigns;
  std::string theory_flag;

  auto* rewrite = app.add_subcommand("rewrite", "normalize or compare expressions");
  rewrite->require_subcommand(1);
  auto* nf = rewrite->add_subcommand("nf", "reduce to normal form");
  nf->add_option("theory", arg1)->required();
  nf->add_option("expr", arg2)->required();
  auto* cong = rewrite->add_subcommand("cong", "decide the congruence");
  cong->add_option("theory", arg1)->required();
  cong->add_option("a", arg2)->required();
  cong->add_option("b", arg3)->required();

  auto* chk = app.add_subcommand("check", "check a proof against a theory");
  chk->add_option("theory", arg1)->required();
  chk->add_option("proof", arg2)->required();

  auto* classify = app.add_subcommand("classify", "report neutral / cut-free status");
  classify->add_option("proof", arg1)->required();
  classify->add_option("--theory", theory_flag, "signature to parse the proof against");

  auto* norm = app.add_subcommand("normalize", "reduce a proof");
  norm->add_option("theory", arg1)->required();
  norm->add_option("proof", arg2)->required();
  norm->add_option("--trace", opt.trace_path, "write the reduction trace as JSON");

  auto* tva = app.add_subcommand("tva", "truth values algebras");
  tva->require_subcommand(1);
  auto* tval = tva->add_subcommand("validate", "run the 17 closure conditions");
  tval->add_option("algebra", arg1)->required();
  auto* theyt = tva->add_subcommand("from-heyting", "build the TVA of a Heyting algebra");
  theyt->add_option("lattice", arg1)->required();

  auto* model = app.add_subcommand("model", "finite structures");
  model->require_subcommand(1);
  auto* mcheck = model->add_subcommand("check", "check a structure against a theory");
  mcheck->add_option("theory", arg1)->required();
  mcheck->add_option("structure", arg2)->required();
  auto* meval = model->add_subcommand("eval", "evaluate a proposition");
  meval->add_option("structure", arg1)->required();
  meval->add_option("prop", arg2)->required();
  meval->add_option("--assign", assigns, "variable assignment x=element");
  meval->add_option("--theory", theory_flag, "theory providing the signature (default stt)");

  auto* tshow = app.add_subcommand("theory", "built-in theories");
  tshow->require_subcommand(1);
  auto* show = tshow->add_subcommand("show", "print a theory in file format");
  show->add_option("name", arg1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  if (!seed_opt->empty()) opt.seed = seed_value;

  try {
    if (nf->parsed()) return cmd_rewrite_nf(opt, arg1, arg2);
    if (cong->parsed()) return cmd_rewrite_cong(opt, arg1, arg2, arg3);
    if (chk->parsed()) return cmd_check(opt, arg1, arg2);
    if (classify->parsed()) return cmd_classify(opt, arg1, theory_flag);
    if (norm->parsed()) return cmd_normalize(opt, arg1, arg2);
    if (tval->parsed()) return cmd_tva_validate(opt, arg1);
    if (theyt->parsed()) return cmd_tva_from_heyting(opt, arg1);
    if (mcheck->parsed()) return cmd_model_check(opt, arg1, arg2);
    if (meval->parsed()) return cmd_model_eval(opt, arg1, arg2, assigns, theory_flag);
    if (show->parsed()) return cmd_theory_show(opt, arg1);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::parse_error& e) {
    std::cerr << "json parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
