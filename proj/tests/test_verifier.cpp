#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "powellcalc/verifier.hpp"

using namespace powellcalc;

namespace {

std::string wrap(const std::string& body) {
  return R"__({"version": 1, "scenarios": [)__" + body + "]}";
}

std::string scen(const std::string& id, const std::string& kind, const std::string& params,
                 const std::string& extra = "") {
  return R"__({"id": ")__" + id + R"__(", "kind": ")__" + kind +
         R"__(", "params": )__" + params + extra + R"__(, "paper_anchor": "plumbing"})__";
}

ScenarioResult run_single(const std::string& body) {
  auto results = run_scenarios(wrap(body));
  REQUIRE(results.size() == 1);
  return results[0];
}

const ScenarioResult& by_id(const std::vector<ScenarioResult>& results, const std::string& id) {
  auto it = std::find_if(results.begin(), results.end(),
                         [&](const ScenarioResult& r) { return r.id == id; });
  REQUIRE(it != results.end());
  return *it;
}

}  // namespace

TEST_CASE("top level structure is strict") {
  CHECK_THROWS_AS(run_scenarios("not json"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios("[]"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"scenarios": []})__"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"version": 2, "scenarios": []})__"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"version": "1", "scenarios": []})__"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"version": 1})__"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"version": 1, "scenarios": {}})__"), ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"version": 1, "scenarios": [], "notes": ""})__"),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(R"__({"version": 1, "scenarios": [17]})__"), ScenarioError);
  CHECK(run_scenarios(R"__({"version": 1, "scenarios": []})__").empty());
}

TEST_CASE("scenario envelopes are strict") {
  // missing id
  CHECK_THROWS_AS(run_scenarios(wrap(R"__({"kind": "sl2", "params": {}})__")), ScenarioError);
  // empty id
  CHECK_THROWS_AS(
      run_scenarios(wrap(
          R"__({"id": "", "kind": "sl2", "params": {}, "paper_anchor": "plumbing"})__")),
      ScenarioError);
  // duplicate ids
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("dup", "sl2", "{}") + "," + scen("dup", "sl2", "{}"))),
      ScenarioError);
  // unknown envelope key
  CHECK_THROWS_AS(
      run_scenarios(wrap(
          R"__({"id": "x", "kind": "sl2", "params": {}, "paper_anchor": "plumbing", "note": 1})__")),
      ScenarioError);
  // missing anchor
  CHECK_THROWS_AS(run_scenarios(wrap(R"__({"id": "x", "kind": "sl2", "params": {}})__")),
                  ScenarioError);
  // unknown kind
  CHECK_THROWS_AS(run_scenarios(wrap(scen("x", "no-such-kind", "{}"))), ScenarioError);
  // params not an object
  CHECK_THROWS_AS(
      run_scenarios(wrap(
          R"__({"id": "x", "kind": "sl2", "params": 3, "paper_anchor": "plumbing"})__")),
      ScenarioError);
}

TEST_CASE("per-kind parameter validation") {
  // dih-relation needs an expectation and known params
  CHECK_THROWS_AS(run_scenarios(wrap(scen("x", "dih-relation", R"__({"word": "r0"})__"))),
                  ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "dih-relation", R"__({"word": "r0", "bonus": 1})__",
                              R"__(, "expect": {"element": "+(12)"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "dih-relation", R"__({"word": "x1"})__",
                              R"__(, "expect": {"element": "+(12)"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "dih-relation", R"__({"word": "r0"})__",
                              R"__(, "expect": {"element": "junk"})__"))),
      ScenarioError);

  // closure expectations must be consistent
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "dih-closure", R"__({"gens": ["+(12)"]})__",
                              R"__(, "expect": {"size": 2, "elements": ["+()"]})__"))),
      ScenarioError);

  // identities reject pole letters, bad indices, stray expect blocks
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen(
          "x", "perm-identity", R"__({"genus": 3, "lhs": "r0", "rhs": "e"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen(
          "x", "perm-identity", R"__({"genus": 3, "lhs": "x3", "rhs": "e"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen(
          "x", "perm-identity", R"__({"genus": 0, "lhs": "e", "rhs": "e"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "perm-identity",
                              R"__({"genus": 3, "lhs": "e", "rhs": "e"})__",
                              R"__(, "expect": {"perm": "()"})__"))),
      ScenarioError);

  // framed-identity takes exactly one comparison target
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "framed-identity",
                              R"__({"genus": 2, "lhs": "e", "rhs": "x1"})__",
                              R"__(, "expect": {"perm": "(1 2)", "framing": ["0", "0"]})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "framed-identity", R"__({"genus": 2, "lhs": "e"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "framed-identity", R"__({"genus": 2, "lhs": "e"})__",
                              R"__(, "expect": {"perm": "(1 2)", "framing": ["0"]})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "framed-identity", R"__({"genus": 2, "lhs": "e"})__",
                              R"__(, "expect": {"perm": "(1 2)", "framing": ["0", "1/0"]})__"))),
      ScenarioError);

  // sp-identity matrix shape
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "sp-identity", R"__({"genus": 1, "lhs": "w"})__",
                              R"__(, "expect": {"matrix": [[1, 0]]})__"))),
      ScenarioError);

  // sp-property parameter sets
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "sp-property", R"__({"property": "no-such-law"})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "sp-property",
                              R"__({"property": "eyeglass-composition", "genus": 2,
                                    "lens_a": "a1", "mu": "a2", "lens_b": "b2",
                                    "direction": 2})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "sp-property",
                              R"__({"property": "braid-relation", "max_genus": 2})__"))),
      ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "sp-property",
                              R"__({"property": "eyeglass-composition-random",
                                    "trials": 0, "seed": 1, "max_genus": 3})__"))),
      ScenarioError);

  // membership parameter sets
  auto member = [](const std::string& params) {
    return wrap(scen("x", "membership", params));
  };
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 3, "p": 2, "subgroup": "powell", "family": "nope"})__")),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 3, "p": 2, "subgroup": "maximal", "family": "order"})__")),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 1, "p": 2, "subgroup": "powell", "family": "order"})__")),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 2, "p": 4, "subgroup": "powell", "family": "order"})__")),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 2, "p": 65537, "subgroup": "powell", "family": "order"})__")),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 2, "p": 2, "subgroup": "powell", "family": "word"})__")),
                  ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 2, "p": 2, "subgroup": "powell", "family": "order",
                            "samples": 5})__")),
                  ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "membership",
                              R"__({"genus": 2, "p": 2, "subgroup": "powell",
                                    "family": "flips"})__",
                              R"__(, "expect": {"member": true})__"))),
      ScenarioError);
  CHECK_THROWS_AS(run_scenarios(member(
                      R"__({"genus": 6, "p": 2, "subgroup": "powell",
                            "family": "ab-eyeglasses"})__")),
                  ScenarioError);

  // sl2 and realization-search have empty params
  CHECK_THROWS_AS(run_scenarios(wrap(scen("x", "sl2", R"__({"genus": 1})__"))), ScenarioError);
  CHECK_THROWS_AS(
      run_scenarios(wrap(scen("x", "realization-search", "{}",
                              R"__(, "expect": {"convention": "y"})__"))),
      ScenarioError);
}

TEST_CASE("relation and identity scenarios report witnesses on failure") {
  ScenarioResult ok = run_single(scen("rel", "dih-relation", R"__({"word": "re r0"})__",
                                      R"__(, "expect": {"element": "-(12)"})__"));
  CHECK(ok.status == ScenarioStatus::pass);
  CHECK(ok.witness.empty());
  CHECK(ok.ms >= 0.0);

  ScenarioResult rel = run_single(scen("rel", "dih-relation", R"__({"word": "re r0"})__",
                                       R"__(, "expect": {"element": "+(12)"})__"));
  CHECK(rel.status == ScenarioStatus::fail);
  CHECK(rel.witness.find("evaluates to -(12)") != std::string::npos);
  CHECK(rel.witness.find("expected +(12)") != std::string::npos);

  ScenarioResult closure =
      run_single(scen("clo", "dih-closure", R"__({"gens": ["+(012)"]})__",
                      R"__(, "expect": {"size": 6})__"));
  CHECK(closure.status == ScenarioStatus::fail);
  CHECK(closure.witness.find("3 elements, expected 6") != std::string::npos);

  ScenarioResult perm = run_single(
      scen("perm", "perm-identity", R"__({"genus": 3, "lhs": "x1", "rhs": "x2"})__"));
  CHECK(perm.status == ScenarioStatus::fail);
  CHECK(perm.witness.find("(1 2)") != std::string::npos);
  CHECK(perm.witness.find("(2 3)") != std::string::npos);

  ScenarioResult framed = run_single(
      scen("framed", "framed-identity", R"__({"genus": 2, "lhs": "x1"})__",
           R"__(, "expect": {"perm": "(1 2)", "framing": ["0", "0"]})__"));
  CHECK(framed.status == ScenarioStatus::fail);
  CHECK(framed.witness.find("evaluates to (1 2) [1/2, -1/2]") != std::string::npos);
  CHECK(framed.witness.find("expected (1 2) [0, 0]") != std::string::npos);

  ScenarioResult sp = run_single(
      scen("sp", "sp-identity", R"__({"genus": 1, "lhs": "w", "rhs": ""})__"));
  CHECK(sp.status == ScenarioStatus::fail);
  CHECK(sp.witness.find("lhs =\ng=1\n-1 0\n0 -1\n") != std::string::npos);
  CHECK(sp.witness.find("rhs =\ng=1\n1 0\n0 1\n") != std::string::npos);

  // runner exceptions surface as failures, not crashes
  ScenarioResult cap = run_single(scen(
      "cap", "membership",
      R"__({"genus": 8, "p": 3, "subgroup": "full", "family": "order"})__"));
  CHECK(cap.status == ScenarioStatus::fail);
  CHECK(cap.witness.find("error:") != std::string::npos);
}

TEST_CASE("membership scenarios distinguish findings, members, and escapes") {
  ScenarioResult order = run_single(scen(
      "ord", "membership",
      R"__({"genus": 2, "p": 2, "subgroup": "full", "family": "order"})__"));
  CHECK(order.status == ScenarioStatus::finding);
  CHECK(order.witness == "order=720");

  ScenarioResult powell_order = run_single(scen(
      "ord2", "membership",
      R"__({"genus": 2, "p": 3, "subgroup": "powell", "family": "order"})__"));
  CHECK(powell_order.status == ScenarioStatus::finding);
  CHECK(powell_order.witness == "order=48");

  ScenarioResult escape = run_single(scen(
      "esc", "membership",
      R"__({"genus": 2, "p": 2, "subgroup": "powell", "family": "word",
            "word": "t(a1,b1)"})__"));
  CHECK(escape.status == ScenarioStatus::fail);
  CHECK(escape.witness.find("escapes the powell image") != std::string::npos);
  CHECK(escape.witness.find("residue:") != std::string::npos);

  ScenarioResult expected_escape = run_single(scen(
      "esc2", "membership",
      R"__({"genus": 2, "p": 2, "subgroup": "powell", "family": "word",
            "word": "t(a1,b1)"})__",
      R"__(, "expect": {"member": false})__"));
  CHECK(expected_escape.status == ScenarioStatus::pass);
  CHECK(expected_escape.witness.empty());

  ScenarioResult surprise_member = run_single(scen(
      "mem", "membership",
      R"__({"genus": 2, "p": 2, "subgroup": "powell", "family": "word", "word": "x1"})__",
      R"__(, "expect": {"member": false})__"));
  CHECK(surprise_member.status == ScenarioStatus::fail);
  CHECK(surprise_member.witness.find("unexpectedly lies in") != std::string::npos);
}

TEST_CASE("realization search scenario pins the enumeration outcome") {
  ScenarioResult found = run_single(scen(
      "real", "realization-search", "{}",
      R"__(, "expect": {"found": true,
                        "convention": "factor=none eta1=(a_s,y) d1=-1 eta2=(b_s,x) d2=+1"})__"));
  CHECK(found.status == ScenarioStatus::pass);

  ScenarioResult wrong = run_single(scen(
      "real", "realization-search", "{}",
      R"__(, "expect": {"found": true, "convention": "factor=none eta1=(a_s,x)"})__"));
  CHECK(wrong.status == ScenarioStatus::fail);
  CHECK(wrong.witness.find("search found factor=none") != std::string::npos);

  ScenarioResult contradiction = run_single(scen(
      "real", "realization-search", "{}", R"__(, "expect": {"found": false})__"));
  CHECK(contradiction.status == ScenarioStatus::fail);
}

TEST_CASE("bundled paper-core scenarios all pass") {
  const std::string* text = find_bundled("paper-core");
  REQUIRE(text != nullptr);
  lint_scenarios(*text);
  auto results = run_scenarios(*text);
  CHECK(results.size() >= 40);
  for (const auto& r : results) {
    INFO(r.id << ": " << r.witness);
    CHECK(r.status == ScenarioStatus::pass);
    CHECK(r.witness.empty());
  }
  CHECK(all_clean(results));
}

TEST_CASE("bundled theorem-shadow scenarios pass with pinned order findings") {
  const std::string* text = find_bundled("theorem-shadow.json");
  REQUIRE(text != nullptr);
  lint_scenarios(*text);
  auto results = run_scenarios(*text, {.jobs = 4});
  CHECK(all_clean(results));
  CHECK(by_id(results, "shadow-order-g3p2").witness == "order=168");
  CHECK(by_id(results, "shadow-order-g3p3").witness == "order=11232");
  CHECK(by_id(results, "shadow-order-g4p2").witness == "order=20160");
  CHECK(by_id(results, "shadow-order-g4p3").witness == "order=24261120");
  for (const auto& r : results) {
    INFO(r.id << ": " << r.witness);
    if (r.id.rfind("shadow-order-", 0) == 0) {
      CHECK(r.status == ScenarioStatus::finding);
    } else {
      CHECK(r.status == ScenarioStatus::pass);
    }
  }
}

TEST_CASE("single scenario lookup") {
  const std::string* text = find_bundled("paper-core.json");
  REQUIRE(text != nullptr);
  ScenarioResult r = run_scenario_by_id(*text, "newgen-g4");
  CHECK(r.id == "newgen-g4");
  CHECK(r.status == ScenarioStatus::pass);
  CHECK_THROWS_AS(run_scenario_by_id(*text, "no-such-id"), ScenarioError);
  CHECK(find_bundled("no-such-file") == nullptr);
}

TEST_CASE("worker pool matches serial execution") {
  const std::string file = wrap(
      scen("a", "dih-relation", R"__({"word": "r0 r2"})__",
           R"__(, "expect": {"element": "+(021)"})__") +
      "," +
      scen("b", "membership",
           R"__({"genus": 2, "p": 2, "subgroup": "powell", "family": "order"})__") +
      "," + scen("c", "perm-identity", R"__({"genus": 3, "lhs": "x1", "rhs": "x2"})__") +
      "," + scen("d", "sl2", "{}"));
  auto serial = run_scenarios(file, {.jobs = 1});
  auto parallel = run_scenarios(file, {.jobs = 4});
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].id == parallel[i].id);
    CHECK(serial[i].status == parallel[i].status);
    CHECK(serial[i].witness == parallel[i].witness);
  }
  CHECK_FALSE(all_clean(serial));  // scenario "c" fails by construction
}

TEST_CASE("json report format is stable") {
  std::vector<ScenarioResult> results = {
      {"alpha", ScenarioStatus::pass, "", 1.5},
      {"beta", ScenarioStatus::fail, "boom", 0.25},
      {"gamma", ScenarioStatus::finding, "order=6", 2.0},
  };
  std::string text = emit_json(results);
  auto parsed = nlohmann::ordered_json::parse(text);
  CHECK(parsed["results"].size() == 3);
  CHECK(parsed["results"][0]["id"] == "alpha");
  CHECK(parsed["results"][0]["status"] == "pass");
  CHECK(parsed["results"][0]["witness"].is_null());
  CHECK(parsed["results"][0]["ms"] == 1.5);
  CHECK(parsed["results"][1]["witness"] == "boom");
  CHECK(parsed["results"][2]["status"] == "finding");
  CHECK(parsed["summary"]["pass"] == 1);
  CHECK(parsed["summary"]["finding"] == 1);
  CHECK(parsed["summary"]["fail"] == 1);
  // insertion order is preserved: id, status, witness, ms
  auto keys = std::vector<std::string>();
  for (const auto& item : parsed["results"][0].items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"id", "status", "witness", "ms"});
  CHECK(text.back() == '\n');
}

TEST_CASE("text report format is stable") {
  std::vector<ScenarioResult> results = {
      {"alpha", ScenarioStatus::pass, "", 1.5},
      {"beta", ScenarioStatus::fail, "two\nlines", 0.25},
      {"gamma", ScenarioStatus::finding, "order=6", 2.0},
  };
  CHECK(emit_text(results) ==
        "alpha: PASS (1.500 ms)\n"
        "beta: FAIL (0.250 ms)\n"
        "    two\n"
        "    lines\n"
        "gamma: FINDING (2.000 ms)\n"
        "    order=6\n"
        "summary: 1 pass, 1 finding, 1 fail\n");
}

TEST_CASE("lint enforces the anchor policy") {
  const std::string good_quote = wrap(
      R"__({"id": "x", "kind": "sl2", "params": {},
            "paper_anchor": "identity: \"m^2 = -1\" in the local model"})__");
  lint_scenarios(good_quote);  // must not throw

  const std::string plumbing = wrap(scen("x", "sl2", "{}"));
  lint_scenarios(plumbing);

  const std::string vague = wrap(
      R"__({"id": "x", "kind": "sl2", "params": {},
            "paper_anchor": "checks the local model"})__");
  CHECK_THROWS_AS(lint_scenarios(vague), ScenarioError);
}
