#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "modulo/builtins.hpp"
#include "modulo/proof_io.hpp"
#include "modulo/theory_io.hpp"
#include "modulo/tva_io.hpp"
#include "support/run_cli.hpp"
#include "support/schema.hpp"

using namespace modulo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("check accepts the bundled reflexivity proof") {
  auto r = cli::run("check stt " + cli::corpus("proof_refl.sexp"));
  CHECK(r.code == 0);
}

TEST_CASE("the paper proof checks but cycles under normalization") {
  auto chk = cli::run("check pimpq " + cli::corpus("paper_q_proof.sexp") + " --json");
  CHECK(chk.code == 0);
  Json j = Json::parse(chk.out);
  CHECK(j.at("verdict") == "accepted");

  auto norm =
      cli::run("normalize pimpq " + cli::corpus("paper_q_proof.sexp") + " --fuel 100 --json");
  CHECK(norm.code == 1);
  Json nj = Json::parse(norm.out);
  CHECK(nj.at("status") == "CycleDetected");

  auto cls = cli::run("classify " + cli::corpus("paper_q_proof.sexp") + " --json");
  CHECK(cls.code == 0);
  Json cj = Json::parse(cls.out);
  CHECK(cj.at("cut_free") == false);
  CHECK(cj.at("neutral") == true);
}

TEST_CASE("tva validate passes on the bundled algebras") {
  for (const char* f : {"bool2.json", "chain3.json"}) {
    auto r = cli::run("tva validate " + cli::corpus(f) + " --json");
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("all_pass") == true);
    CHECK(j.at("conditions").size() == 17);
  }
}

TEST_CASE("tva from-heyting rebuilds the bundled boolean algebra") {
  auto r = cli::run("tva from-heyting " + cli::corpus("bool2_lattice.json") + " --json");
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  Json expected = Json::parse(slurp(cli::corpus("bool2.json")));
  CHECK(j.at("algebra") == expected);
}

TEST_CASE("rewrite verbs agree with the library") {
  auto r = cli::run("rewrite cong pimpq P '(=> P Q)'");
  CHECK(r.code == 0);
  CHECK(r.out == "yes\n");
  auto n = cli::run("rewrite cong stt true false");
  CHECK(n.code == 1);
  CHECK(n.out == "no\n");

  // nf through the CLI equals nf through the API
  std::string expr = "(eps (app (app dand dtop) dtop))";
  auto nf = cli::run("rewrite nf stt " + cli::quote(expr) + " --json");
  REQUIRE(nf.code == 0);
  Json j = Json::parse(nf.out);
  const TheoryBundle& stt = stt_theory();
  ExprParser p(stt.sig);
  auto mine = normal_form(stt.sig, stt.rules, p.parse_prop(parse_sexpr(expr)));
  CHECK(j.at("result").get<std::string>() == print_prop_closed(mine.value));
  CHECK(j.at("steps").get<int>() == mine.steps);
}

TEST_CASE("model verbs run against bundled structures") {
  auto ok = cli::run("model check pimpq " + cli::corpus("structures/pimpq_tt.json"));
  CHECK(ok.code == 0);
  auto bad = cli::run("model check pimpq " + cli::corpus("structures/qimpp_ft.json"));
  CHECK(bad.code == 1);
  auto stt = cli::run("model check stt " + cli::corpus("structures/stt_bool2_d2.json"));
  CHECK(stt.code == 0);

  auto ev = cli::run("model eval " + cli::corpus("structures/pimpq_tt.json") +
                     " '(=> P Q)' --theory pimpq --json");
  REQUIRE(ev.code == 0);
  Json j = Json::parse(ev.out);
  CHECK(j.at("value") == "1");
  CHECK(j.at("positive") == true);
}

TEST_CASE("theory show round-trips through files") {
  auto r = cli::run("theory show stt");
  CHECK(r.code == 0);
  CHECK(r.out == print_theory(stt_theory()));
  // the exported text parses back to an identical export
  TheoryBundle back = parse_theory(r.out);
  CHECK(print_theory(back) == r.out);
  // bundled theory files are exactly the exports
  CHECK(slurp(cli::corpus("pimpq.thy")) == print_theory(pimpq_theory()));
  CHECK(slurp(cli::corpus("qimpp.thy")) == print_theory(qimpp_theory()));
  CHECK(slurp(cli::corpus("stt.thy")) == print_theory(stt_theory()));
  // and every verb accepts theories by file as well as by name
  auto by_file = cli::run("rewrite cong " + cli::corpus("pimpq.thy") + " P '(=> P Q)'");
  CHECK(by_file.code == 0);
}

TEST_CASE("usage and parse failures exit with 2") {
  CHECK(cli::run("rewrite nf stt '(eps'").code == 2);
  CHECK(cli::run("nosuchverb").code == 2);
  CHECK(cli::run("tva validate " + cli::corpus("paper_q_proof.sexp")).code == 2);
}

TEST_CASE("golden outputs are stable") {
  Json golden = Json::parse(slurp(cli::corpus("golden/cli_golden.json")));
  for (const auto& entry : golden.at("cases")) {
    std::string args = entry.at("args").get<std::string>();
    for (size_t at; (at = args.find("@CORPUS@")) != std::string::npos;)
      args.replace(at, 8, MODULO_CORPUS_DIR);
    INFO(args);
    auto r = cli::run(args);
    CHECK(r.code == entry.at("exit").get<int>());
    CHECK(r.out == entry.at("output").get<std::string>());
  }
}

TEST_CASE("JSON reports validate against the shipped schemas") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"rewrite nf stt '(eps dtop)' --json", "rewrite_nf.schema.json"},
      {"rewrite cong pimpq P '(=> P Q)' --json", "rewrite_cong.schema.json"},
      {"check pimpq " + cli::corpus("paper_q_proof.sexp") + " --json", "check.schema.json"},
      {"classify " + cli::corpus("paper_q_proof.sexp") + " --json", "classify.schema.json"},
      {"normalize pimpq " + cli::corpus("paper_q_proof.sexp") + " --json",
       "normalize.schema.json"},
      {"tva validate " + cli::corpus("bool2.json") + " --json", "tva_validate.schema.json"},
      {"model check pimpq " + cli::corpus("structures/pimpq_tt.json") + " --json",
       "model_check.schema.json"},
  };
  for (const auto& [args, schema_file] : cases) {
    INFO(args);
    auto r = cli::run(args);
    Json report = Json::parse(r.out);
    Json sch = Json::parse(slurp(cli::corpus("schemas/" + schema_file)));
    std::string err;
    bool ok = schema::validate(sch, report, err);
    INFO(err);
    CHECK(ok);
  }
}

TEST_CASE("normalize --trace writes the trace schema") {
  fs::path tmp = fs::temp_directory_path() / "modulo_trace_test.json";
  auto r = cli::run("normalize pimpq " + cli::corpus("paper_q_proof.sexp") +
                    " --fuel 100 --trace " + tmp.string());
  CHECK(r.code == 1);
  Json trace = Json::parse(slurp(tmp.string()));
  CHECK(trace.at("status") == "CycleDetected");
  REQUIRE(trace.at("steps").is_array());
  CHECK(trace.at("steps").size() >= 2);
  // every step parses back as a proof
  for (const auto& s : trace.at("steps"))
    CHECK_NOTHROW(parse_proof(pimpq_theory().sig, s.get<std::string>()));
  fs::remove(tmp);
}

TEST_CASE("same seed, same bytes") {
  std::string args = "tva validate " + cli::corpus("bool2.json") + " --json --seed 7";
  auto a = cli::run(args);
  auto b = cli::run(args);
  CHECK(a.out == b.out);
  Json j = Json::parse(a.out);
  CHECK(j.at("seed") == 7);
}
