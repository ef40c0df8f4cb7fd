#include "powellcalc/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "json.hpp"
#include "powellcalc/braid_shadow.hpp"
#include "powellcalc/dihedral.hpp"
#include "powellcalc/modp.hpp"
#include "powellcalc/symplectic.hpp"
#include "powellcalc/words.hpp"

namespace powellcalc {

std::string to_string(ScenarioStatus s) {
  switch (s) {
    case ScenarioStatus::pass: return "pass";
    case ScenarioStatus::fail: return "fail";
    default: return "finding";
  }
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& message) { throw ScenarioError(message); }

std::string ctx_id(const std::string& id) { return "scenario \"" + id + "\": "; }

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) bad(ctx + "unknown key \"" + item.key() + "\"");
  }
}

const json* maybe_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& field(const json& obj, const std::string& ctx, const char* key) {
  const json* f = maybe_field(obj, key);
  if (!f) bad(ctx + "missing key \"" + key + "\"");
  return *f;
}

std::string get_string(const json& v, const std::string& ctx, const char* key) {
  if (!v.is_string()) bad(ctx + "\"" + std::string(key) + "\" must be a string");
  return v.get<std::string>();
}

std::uint64_t get_uint(const json& v, const std::string& ctx, const char* key) {
  if (!v.is_number_unsigned())
    bad(ctx + "\"" + std::string(key) + "\" must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

long long get_int(const json& v, const std::string& ctx, const char* key) {
  if (!v.is_number_integer())
    bad(ctx + "\"" + std::string(key) + "\" must be an integer");
  return v.get<long long>();
}

std::uint64_t get_uint_in(const json& v, const std::string& ctx, const char* key,
                          std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t u = get_uint(v, ctx, key);
  if (u < lo || u > hi)
    bad(ctx + "\"" + std::string(key) + "\" must lie in [" + std::to_string(lo) +
        ", " + std::to_string(hi) + "]");
  return u;
}

struct Scenario {
  std::string id;
  std::string kind;
  std::string anchor;
  json params;
  json expect;  // null when absent
};

// "1/4", "-3/4", "2" -> exact rational; throws on malformed text.
Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(BigInt(text));
  BigInt num(text.substr(0, slash));
  BigInt den(text.substr(slash + 1));
  if (den == 0) throw std::runtime_error("rational with zero denominator");
  return Rational(num, den);
}

// Word tokens restricted to genus letters that exist at the given genus.
void validate_genus_word(const Word& w, std::uint64_t genus, const std::string& ctx) {
  for (const Letter& l : w.letters) {
    if (const Flip* f = std::get_if<Flip>(&l.symbol)) {
      if (static_cast<std::uint64_t>(f->slot.value_or(1)) > genus)
        bad(ctx + "flip slot exceeds the genus");
    } else if (const Exchange* x = std::get_if<Exchange>(&l.symbol)) {
      if (static_cast<std::uint64_t>(x->index) >= genus)
        bad(ctx + "exchange index must be below the genus");
    } else if (const Eyeglass* t = std::get_if<Eyeglass>(&l.symbol)) {
      for (const ClassExpr* c : {&t->lens_a, &t->lens_b})
        for (const auto& term : c->terms)
          if (static_cast<std::uint64_t>(term.second) > genus)
            bad(ctx + "lens index exceeds the genus");
    } else if (std::holds_alternative<Rho>(l.symbol)) {
      bad(ctx + "pole-symmetry letters do not act on the bubbles");
    }
  }
}

void validate_class_expr(const ClassExpr& c, std::uint64_t genus, const std::string& ctx) {
  for (const auto& term : c.terms)
    if (static_cast<std::uint64_t>(term.second) > genus)
      bad(ctx + "lens index exceeds the genus");
}

// Token sequence for the order-12 symmetry group: signed permutations such as
// "+(02)" and rho generator names, optionally suffixed ^-1; "." separators
// are ignored.
std::vector<DihElement> dih_tokens(const std::string& text) {
  std::vector<DihElement> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == ".") continue;
    bool inv = false;
    if (tok.size() >= 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
      inv = true;
      tok.resize(tok.size() - 3);
    }
    DihElement e;
    if (!tok.empty() && (tok[0] == '+' || tok[0] == '-')) {
      e = parse_dih(tok);
    } else {
      Word w = parse_word(tok);
      if (w.letters.size() != 1 || !std::holds_alternative<Rho>(w.letters[0].symbol))
        throw ScenarioError("token \"" + tok +
                            "\" is neither a signed permutation nor a rho generator");
      e = dih_rho(std::get<Rho>(w.letters[0].symbol).axis);
      if (w.letters[0].exponent == -1) inv = !inv;
    }
    if (inv) e = dih_inverse(e);
    out.push_back(e);
  }
  return out;
}

DihElement eval_dih_tokens(const std::string& text) {
  DihElement acc = dih_identity;
  for (const DihElement& e : dih_tokens(text)) acc = dih_compose(acc, e);
  return acc;
}

const std::set<std::string>& membership_families() {
  static const std::set<std::string> families = {
      "block-exchanges", "flips", "ab-eyeglasses", "word", "order", "cross-check"};
  return families;
}

void validate_scenario_checked(const Scenario& s) {
  const std::string ctx = ctx_id(s.id);
  const json& p = s.params;
  const bool has_expect = !s.expect.is_null();
  auto expect_forbidden = [&] {
    if (has_expect) bad(ctx + "kind \"" + s.kind + "\" takes no \"expect\" block");
  };

  if (s.kind == "dih-relation") {
    check_keys(p, ctx, {"word"});
    dih_tokens(get_string(field(p, ctx, "word"), ctx, "word"));
    if (!has_expect) bad(ctx + "an \"expect\" block with \"element\" is required");
    check_keys(s.expect, ctx, {"element"});
    parse_dih(get_string(field(s.expect, ctx, "element"), ctx, "element"));
  } else if (s.kind == "dih-closure") {
    check_keys(p, ctx, {"gens"});
    const json& gens = field(p, ctx, "gens");
    if (!gens.is_array()) bad(ctx + "\"gens\" must be an array");
    for (const json& g : gens) parse_dih(get_string(g, ctx, "gens entry"));
    if (!has_expect) bad(ctx + "an \"expect\" block with \"size\" is required");
    check_keys(s.expect, ctx, {"size", "elements"});
    std::uint64_t size = get_uint(field(s.expect, ctx, "size"), ctx, "size");
    if (const json* els = maybe_field(s.expect, "elements")) {
      if (!els->is_array()) bad(ctx + "\"elements\" must be an array");
      if (els->size() != size) bad(ctx + "\"elements\" length disagrees with \"size\"");
      for (const json& e : *els) parse_dih(get_string(e, ctx, "elements entry"));
    }
  } else if (s.kind == "perm-identity") {
    check_keys(p, ctx, {"genus", "lhs", "rhs"});
    std::uint64_t g = get_uint_in(field(p, ctx, "genus"), ctx, "genus", 1, 1024);
    validate_genus_word(parse_word(get_string(field(p, ctx, "lhs"), ctx, "lhs")), g, ctx);
    validate_genus_word(parse_word(get_string(field(p, ctx, "rhs"), ctx, "rhs")), g, ctx);
    expect_forbidden();
  } else if (s.kind == "framed-identity") {
    check_keys(p, ctx, {"genus", "lhs", "rhs"});
    std::uint64_t g = get_uint_in(field(p, ctx, "genus"), ctx, "genus", 1, 1024);
    validate_genus_word(parse_word(get_string(field(p, ctx, "lhs"), ctx, "lhs")), g, ctx);
    const json* rhs = maybe_field(p, "rhs");
    if (static_cast<bool>(rhs) == has_expect)
      bad(ctx + "exactly one of params \"rhs\" and an \"expect\" block is required");
    if (rhs) {
      validate_genus_word(parse_word(get_string(*rhs, ctx, "rhs")), g, ctx);
    } else {
      check_keys(s.expect, ctx, {"perm", "framing"});
      if (get_string(field(s.expect, ctx, "perm"), ctx, "perm").empty())
        bad(ctx + "\"perm\" must be nonempty");
      const json& framing = field(s.expect, ctx, "framing");
      if (!framing.is_array() || framing.size() != g)
        bad(ctx + "\"framing\" must be an array of length genus");
      for (const json& f : framing)
        parse_rational(get_string(f, ctx, "framing entry"));
    }
  } else if (s.kind == "sp-identity") {
    check_keys(p, ctx, {"genus", "lhs", "rhs"});
    std::uint64_t g = get_uint_in(field(p, ctx, "genus"), ctx, "genus", 1, 1024);
    validate_genus_word(parse_word(get_string(field(p, ctx, "lhs"), ctx, "lhs")), g, ctx);
    const json* rhs = maybe_field(p, "rhs");
    if (static_cast<bool>(rhs) == has_expect)
      bad(ctx + "exactly one of params \"rhs\" and an \"expect\" block is required");
    if (rhs) {
      validate_genus_word(parse_word(get_string(*rhs, ctx, "rhs")), g, ctx);
    } else {
      check_keys(s.expect, ctx, {"matrix"});
      const json& m = field(s.expect, ctx, "matrix");
      if (!m.is_array() || m.size() != 2 * g)
        bad(ctx + "\"matrix\" must have 2*genus rows");
      for (const json& row : m) {
        if (!row.is_array() || row.size() != 2 * g)
          bad(ctx + "\"matrix\" rows must have 2*genus entries");
        for (const json& e : row) get_int(e, ctx, "matrix entry");
      }
    }
  } else if (s.kind == "sp-property") {
    expect_forbidden();
    std::string prop = get_string(field(p, ctx, "property"), ctx, "property");
    if (prop == "eyeglass-composition") {
      check_keys(p, ctx, {"property", "genus", "lens_a", "mu", "lens_b", "direction"});
      std::uint64_t g = get_uint_in(field(p, ctx, "genus"), ctx, "genus", 1, 64);
      for (const char* key : {"lens_a", "mu", "lens_b"})
        validate_class_expr(parse_class_expr(get_string(field(p, ctx, key), ctx, key)),
                            g, ctx);
      long long d = get_int(field(p, ctx, "direction"), ctx, "direction");
      if (d != 1 && d != -1) bad(ctx + "\"direction\" must be +1 or -1");
    } else if (prop == "conjugation-covariance") {
      check_keys(p, ctx, {"property", "genus", "m_word", "lens_a", "lens_b", "direction"});
      std::uint64_t g = get_uint_in(field(p, ctx, "genus"), ctx, "genus", 1, 64);
      validate_genus_word(parse_word(get_string(field(p, ctx, "m_word"), ctx, "m_word")),
                          g, ctx);
      for (const char* key : {"lens_a", "lens_b"})
        validate_class_expr(parse_class_expr(get_string(field(p, ctx, key), ctx, key)),
                            g, ctx);
      long long d = get_int(field(p, ctx, "direction"), ctx, "direction");
      if (d != 1 && d != -1) bad(ctx + "\"direction\" must be +1 or -1");
    } else if (prop == "eyeglass-composition-random" ||
               prop == "conjugation-covariance-random") {
      check_keys(p, ctx, {"property", "trials", "seed", "max_genus"});
      get_uint_in(field(p, ctx, "trials"), ctx, "trials", 1, 1000000);
      get_uint(field(p, ctx, "seed"), ctx, "seed");
      get_uint_in(field(p, ctx, "max_genus"), ctx, "max_genus", 1, 8);
    } else if (prop == "braid-relation") {
      check_keys(p, ctx, {"property", "max_genus"});
      get_uint_in(field(p, ctx, "max_genus"), ctx, "max_genus", 3, 64);
    } else {
      bad(ctx + "unknown property \"" + prop + "\"");
    }
  } else if (s.kind == "membership") {
    std::string family = get_string(field(p, ctx, "family"), ctx, "family");
    if (!membership_families().count(family))
      bad(ctx + "unknown family \"" + family + "\"");
    if (family == "word")
      check_keys(p, ctx, {"genus", "p", "subgroup", "family", "word"});
    else if (family == "cross-check")
      check_keys(p, ctx, {"genus", "p", "subgroup", "family", "samples", "seed"});
    else
      check_keys(p, ctx, {"genus", "p", "subgroup", "family"});
    std::string subgroup = get_string(field(p, ctx, "subgroup"), ctx, "subgroup");
    if (subgroup != "powell" && subgroup != "full")
      bad(ctx + "unknown subgroup \"" + subgroup + "\"");
    std::uint64_t g = get_uint_in(field(p, ctx, "genus"), ctx, "genus",
                                  subgroup == "powell" ? 2 : 1, 8);
    std::uint64_t q = get_uint(field(p, ctx, "p"), ctx, "p");
    if (q >= 65536 || !is_prime(static_cast<std::uint32_t>(q)))
      bad(ctx + "\"p\" must be a prime below 65536");
    if (family == "word") {
      Word w = parse_word(get_string(field(p, ctx, "word"), ctx, "word"));
      validate_genus_word(w, g, ctx);
      if (has_expect) {
        check_keys(s.expect, ctx, {"member"});
        if (!field(s.expect, ctx, "member").is_boolean())
          bad(ctx + "\"member\" must be a boolean");
      }
    } else {
      if (has_expect) bad(ctx + "only the word family takes an \"expect\" block");
      if (family == "cross-check") {
        if (const json* v = maybe_field(p, "samples"))
          get_uint_in(*v, ctx, "samples", 1, 100000);
        if (const json* v = maybe_field(p, "seed")) get_uint(*v, ctx, "seed");
      }
      if (family == "ab-eyeglasses" && g > 5)
        bad(ctx + "family \"ab-eyeglasses\" enumerates 3^genus sign patterns; "
                  "genus must be at most 5");
    }
  } else if (s.kind == "sl2") {
    check_keys(p, ctx, {});
    expect_forbidden();
  } else if (s.kind == "realization-search") {
    check_keys(p, ctx, {});
    if (has_expect) {
      check_keys(s.expect, ctx, {"found", "convention"});
      if (!field(s.expect, ctx, "found").is_boolean())
        bad(ctx + "\"found\" must be a boolean");
      if (const json* c = maybe_field(s.expect, "convention"))
        get_string(*c, ctx, "convention");
    }
  } else {
    bad(ctx + "unknown kind \"" + s.kind + "\"");
  }
}

void validate_scenario(const Scenario& s) {
  try {
    validate_scenario_checked(s);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    bad(ctx_id(s.id) + e.what());
  }
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("scenario file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("top level: must be an object");
  check_keys(root, "top level: ", {"version", "scenarios"});
  const json& ver = field(root, "top level: ", "version");
  if (!ver.is_number_unsigned() || ver.get<std::uint64_t>() != 1)
    bad("top level: \"version\" must be the integer 1");
  const json& list = field(root, "top level: ", "scenarios");
  if (!list.is_array()) bad("top level: \"scenarios\" must be an array");

  std::vector<Scenario> out;
  std::set<std::string> seen;
  for (const json& item : list) {
    if (!item.is_object()) bad("every scenario must be an object");
    std::string id = get_string(field(item, "scenario: ", "id"), "scenario: ", "id");
    if (id.empty()) bad("scenario ids must be nonempty");
    const std::string ctx = ctx_id(id);
    if (!seen.insert(id).second) bad(ctx + "duplicate id");
    check_keys(item, ctx, {"id", "kind", "params", "expect", "paper_anchor"});
    Scenario s;
    s.id = std::move(id);
    s.kind = get_string(field(item, ctx, "kind"), ctx, "kind");
    s.anchor = get_string(field(item, ctx, "paper_anchor"), ctx, "paper_anchor");
    s.params = field(item, ctx, "params");
    if (!s.params.is_object()) bad(ctx + "\"params\" must be an object");
    if (const json* e = maybe_field(item, "expect")) {
      if (!e->is_object()) bad(ctx + "\"expect\" must be an object");
      s.expect = *e;
    }
    validate_scenario(s);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runners.  Validation has already succeeded, so parameter extraction here is
// unchecked; any exception a runner leaks is reported as a failing result.

void run_dih_relation(const Scenario& s, ScenarioResult& r) {
  DihElement got = eval_dih_tokens(s.params.at("word").get<std::string>());
  DihElement want = parse_dih(s.expect.at("element").get<std::string>());
  if (got == want) return;
  r.status = ScenarioStatus::fail;
  r.witness = "evaluates to " + to_string(got) + ", expected " + to_string(want);
}

void run_dih_closure(const Scenario& s, ScenarioResult& r) {
  std::vector<DihElement> gens;
  for (const json& g : s.params.at("gens")) gens.push_back(parse_dih(g.get<std::string>()));
  std::vector<DihElement> closure = dih_closure(gens);
  std::uint64_t size = s.expect.at("size").get<std::uint64_t>();
  if (closure.size() != size) {
    r.status = ScenarioStatus::fail;
    r.witness = "closure has " + std::to_string(closure.size()) +
                " elements, expected " + std::to_string(size);
    return;
  }
  if (const json* els = maybe_field(s.expect, "elements")) {
    std::vector<DihElement> want;
    for (const json& e : *els) want.push_back(parse_dih(e.get<std::string>()));
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < closure.size(); ++i) {
      if (closure[i] == want[i]) continue;
      r.status = ScenarioStatus::fail;
      r.witness = "closure differs at position " + std::to_string(i) + ": " +
                  to_string(closure[i]) + " vs " + to_string(want[i]);
      return;
    }
  }
}

void run_perm_identity(const Scenario& s, ScenarioResult& r) {
  std::size_t g = s.params.at("genus").get<std::size_t>();
  auto lhs = perm_of_word(g, parse_word(s.params.at("lhs").get<std::string>()));
  auto rhs = perm_of_word(g, parse_word(s.params.at("rhs").get<std::string>()));
  if (lhs == rhs) return;
  r.status = ScenarioStatus::fail;
  r.witness = "lhs acts as " + cycle_string(lhs) + ", rhs acts as " + cycle_string(rhs);
}

void run_framed_identity(const Scenario& s, ScenarioResult& r) {
  std::size_t g = s.params.at("genus").get<std::size_t>();
  FramedPermutation lhs = framed_of_word(g, parse_word(s.params.at("lhs").get<std::string>()));
  if (const json* rhs_word = maybe_field(s.params, "rhs")) {
    FramedPermutation rhs = framed_of_word(g, parse_word(rhs_word->get<std::string>()));
    if (lhs == rhs) return;
    r.status = ScenarioStatus::fail;
    r.witness = "lhs = " + to_string(lhs) + ", rhs = " + to_string(rhs);
    return;
  }
  std::string want_perm = s.expect.at("perm").get<std::string>();
  std::vector<Rational> want_framing;
  for (const json& f : s.expect.at("framing"))
    want_framing.push_back(parse_rational(f.get<std::string>()));
  if (cycle_string(lhs.perm) == want_perm && lhs.framing == want_framing) return;
  std::string want = want_perm + " [";
  for (std::size_t i = 0; i < want_framing.size(); ++i) {
    if (i) want += ", ";
    want += want_framing[i].str();
  }
  want += "]";
  r.status = ScenarioStatus::fail;
  r.witness = "evaluates to " + to_string(lhs) + ", expected " + want;
}

void run_sp_identity(const Scenario& s, ScenarioResult& r) {
  std::size_t g = s.params.at("genus").get<std::size_t>();
  SpMatrix lhs = eval_sp(g, parse_word(s.params.at("lhs").get<std::string>()));
  SpMatrix rhs;
  if (const json* rhs_word = maybe_field(s.params, "rhs")) {
    rhs = eval_sp(g, parse_word(rhs_word->get<std::string>()));
  } else {
    rhs = SpMatrix::zero(2 * g);
    const json& m = s.expect.at("matrix");
    for (std::size_t i = 0; i < 2 * g; ++i)
      for (std::size_t j = 0; j < 2 * g; ++j)
        rhs.at(i, j) = m[i][j].get<long long>();
  }
  if (lhs == rhs) return;
  r.status = ScenarioStatus::fail;
  r.witness = "lhs =\n" + format_matrix(lhs) + "rhs =\n" + format_matrix(rhs);
}

void run_sp_property(const Scenario& s, ScenarioResult& r) {
  const json& p = s.params;
  std::string prop = p.at("property").get<std::string>();
  if (prop == "eyeglass-composition") {
    std::size_t g = p.at("genus").get<std::size_t>();
    HomologyClass la = class_vector(g, parse_class_expr(p.at("lens_a").get<std::string>()));
    HomologyClass mu = class_vector(g, parse_class_expr(p.at("mu").get<std::string>()));
    HomologyClass lb = class_vector(g, parse_class_expr(p.at("lens_b").get<std::string>()));
    int d = p.at("direction").get<int>();
    if (intersection(la, lb) != 0 || intersection(mu, lb) != 0 || intersection(la, mu) != 0) {
      r.status = ScenarioStatus::fail;
      r.witness = "the composition law needs pairwise orthogonal classes";
      return;
    }
    HomologyClass sum(la);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += mu[i];
    SpMatrix lhs = multiply(eyeglass_map(g, la, lb, d), eyeglass_map(g, mu, lb, d));
    SpMatrix rhs = eyeglass_map(g, sum, lb, d);
    if (lhs == rhs) return;
    r.status = ScenarioStatus::fail;
    r.witness = "product =\n" + format_matrix(lhs) + "merged lens =\n" + format_matrix(rhs);
  } else if (prop == "conjugation-covariance") {
    std::size_t g = p.at("genus").get<std::size_t>();
    SpMatrix m = eval_sp(g, parse_word(p.at("m_word").get<std::string>()));
    HomologyClass la = class_vector(g, parse_class_expr(p.at("lens_a").get<std::string>()));
    HomologyClass lb = class_vector(g, parse_class_expr(p.at("lens_b").get<std::string>()));
    int d = p.at("direction").get<int>();
    SpMatrix lhs = multiply(multiply(m, eyeglass_map(g, la, lb, d)), sp_inverse(m));
    SpMatrix rhs = eyeglass_map(g, act(m, la), act(m, lb), d);
    if (lhs == rhs) return;
    r.status = ScenarioStatus::fail;
    r.witness = "conjugate =\n" + format_matrix(lhs) + "moved lenses =\n" + format_matrix(rhs);
  } else if (prop == "eyeglass-composition-random" || prop == "conjugation-covariance-random") {
    std::size_t trials = p.at("trials").get<std::size_t>();
    std::uint64_t seed = p.at("seed").get<std::uint64_t>();
    std::size_t max_genus = p.at("max_genus").get<std::size_t>();
    CheckReport report = prop == "eyeglass-composition-random"
                             ? eyeglass_composition_check(trials, seed, max_genus)
                             : conjugation_covariance_check(trials, seed, max_genus);
    if (report.pass) return;
    r.status = ScenarioStatus::fail;
    r.witness = report.witness;
  } else {  // braid-relation
    std::size_t max_genus = p.at("max_genus").get<std::size_t>();
    for (std::size_t g = 3; g <= max_genus; ++g) {
      for (std::size_t i = 1; i + 1 < g; ++i) {
        std::string xi = "x" + std::to_string(i);
        std::string xj = "x" + std::to_string(i + 1);
        std::string lhs = xi + " " + xj + " " + xi;
        std::string rhs = xj + " " + xi + " " + xj;
        if (perm_of_word(g, parse_word(lhs)) != perm_of_word(g, parse_word(rhs))) {
          r.status = ScenarioStatus::fail;
          r.witness = "slot actions differ for " + lhs + " vs " + rhs + " at genus " +
                      std::to_string(g);
          return;
        }
        if (eval_sp(g, parse_word(lhs)) != eval_sp(g, parse_word(rhs))) {
          r.status = ScenarioStatus::fail;
          r.witness = "homology actions differ for " + lhs + " vs " + rhs +
                      " at genus " + std::to_string(g);
          return;
        }
      }
    }
  }
}

std::string signed_combo(const std::vector<int>& coeffs, char side) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    if (coeffs[i] > 0 && !out.empty()) out += '+';
    if (coeffs[i] < 0) out += '-';
    out += side;
    out += std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

void run_membership(const Scenario& s, ScenarioResult& r) {
  const json& p = s.params;
  std::size_t g = p.at("genus").get<std::size_t>();
  auto q = p.at("p").get<std::uint32_t>();
  std::string subgroup = p.at("subgroup").get<std::string>();
  std::string family = p.at("family").get<std::string>();
  std::vector<ModPMatrix> gens =
      subgroup == "powell" ? powell_generators(g, q) : full_sp_generators(g, q);
  StabilizerChain chain(gens);

  auto report_escape = [&](const std::string& label, const StabilizerChain::SiftOutcome& out) {
    r.status = ScenarioStatus::fail;
    r.witness = label + " escapes the " + subgroup + " image (sift stops at level " +
                std::to_string(out.level) + "); residue:\n" + format_matrix(out.residue);
  };

  if (family == "order") {
    r.status = ScenarioStatus::finding;
    r.witness = "order=" + chain.order().str();
  } else if (family == "block-exchanges") {
    for (std::size_t i = 1; i <= g; ++i)
      for (std::size_t j = i + 1; j <= g; ++j) {
        auto out = chain.sift(reduce_mod_p(exchange_matrix(g, i, j), q));
        if (!out.member) {
          report_escape("exchange of blocks " + std::to_string(i) + ", " + std::to_string(j),
                        out);
          return;
        }
      }
  } else if (family == "flips") {
    for (std::size_t slot = 1; slot <= g; ++slot) {
      auto out = chain.sift(reduce_mod_p(flip_matrix(g, slot), q));
      if (!out.member) {
        report_escape("flip at slot " + std::to_string(slot), out);
        return;
      }
    }
  } else if (family == "ab-eyeglasses") {
    // Lenses c = sum eps_i a_i and d = sum delta_j b_j with coefficients in
    // {-1, 0, 1}, both nonzero and <c, d> = sum eps_i delta_i = 0.
    std::vector<int> eps(g, -1), delta;
    auto advance = [&](std::vector<int>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 1) {
          ++v[i];
          return true;
        }
        v[i] = -1;
      }
      return false;
    };
    do {
      if (std::all_of(eps.begin(), eps.end(), [](int e) { return e == 0; })) continue;
      delta.assign(g, -1);
      do {
        if (std::all_of(delta.begin(), delta.end(), [](int e) { return e == 0; })) continue;
        long long dot = 0;
        for (std::size_t i = 0; i < g; ++i) dot += static_cast<long long>(eps[i]) * delta[i];
        if (dot != 0) continue;
        HomologyClass c(2 * g, 0), d(2 * g, 0);
        for (std::size_t i = 0; i < g; ++i) {
          c[2 * i] = eps[i];
          d[2 * i + 1] = delta[i];
        }
        auto out = chain.sift(reduce_mod_p(eyeglass_map(g, c, d, 1), q));
        if (!out.member) {
          report_escape("eyeglass with lenses " + signed_combo(eps, 'a') + " and " +
                            signed_combo(delta, 'b'),
                        out);
          return;
        }
      } while (advance(delta));
    } while (advance(eps));
  } else if (family == "word") {
    Word w = parse_word(p.at("word").get<std::string>());
    auto out = chain.sift(reduce_mod_p(eval_sp(g, w), q));
    bool want = s.expect.is_null() ? true : s.expect.at("member").get<bool>();
    if (out.member == want) return;
    if (want) {
      report_escape("the word " + to_string(w), out);
    } else {
      r.status = ScenarioStatus::fail;
      r.witness = "the word " + to_string(w) + " unexpectedly lies in the " + subgroup +
                  " image";
    }
  } else {  // cross-check
    std::size_t samples = 100;
    if (const json* v = maybe_field(p, "samples")) samples = v->get<std::size_t>();
    std::uint64_t seed = 0;
    if (const json* v = maybe_field(p, "seed")) seed = v->get<std::uint64_t>();
    std::mt19937_64 rng(seed);
    auto random_product = [&](const std::vector<ModPMatrix>& from) {
      ModPMatrix m = ModPMatrix::identity(2 * g, q);
      std::size_t len = 1 + rng() % 8;
      for (std::size_t k = 0; k < len; ++k) m = mul(m, from[rng() % from.size()]);
      return m;
    };
    if (subgroup == "full") {
      BigInt want = sp_group_order(g, q);
      if (chain.order() != want) {
        r.status = ScenarioStatus::fail;
        r.witness = "chain order " + chain.order().str() +
                    " disagrees with the closed-form order " + want.str();
        return;
      }
      for (std::size_t k = 0; k < samples; ++k) {
        ModPMatrix m = random_product(gens);
        if (!chain.contains(m)) {
          r.status = ScenarioStatus::fail;
          r.witness = "a product of generators fails the membership test:\n" +
                      format_matrix(m);
          return;
        }
      }
      return;
    }
    if (chain.order() > 2000000) {
      r.status = ScenarioStatus::fail;
      r.witness = "subgroup order " + chain.order().str() +
                  " is too large for the independent closure";
      return;
    }
    std::size_t limit = chain.order().convert_to<std::size_t>() + 1;
    std::vector<ModPMatrix> closure = naive_closure(gens, limit);
    if (BigInt(closure.size()) != chain.order()) {
      r.status = ScenarioStatus::fail;
      r.witness = "independent closure has " + std::to_string(closure.size()) +
                  " elements but the chain order is " + chain.order().str();
      return;
    }
    std::set<std::vector<std::uint32_t>> truth;
    for (const ModPMatrix& m : closure) truth.insert(m.data);
    std::vector<ModPMatrix> ambient = full_sp_generators(g, q);
    for (std::size_t k = 0; k < samples; ++k) {
      ModPMatrix m = k % 2 == 0 ? random_product(gens) : random_product(ambient);
      bool want = truth.count(m.data) != 0;
      if (k % 2 == 0 && !want) {
        r.status = ScenarioStatus::fail;
        r.witness = "the independent closure is missing a product of subgroup "
                    "generators:\n" +
                    format_matrix(m);
        return;
      }
      if (chain.contains(m) != want) {
        r.status = ScenarioStatus::fail;
        r.witness = std::string("chain and closure disagree on membership of:\n") +
                    format_matrix(m);
        return;
      }
    }
  }
}

void run_sl2(const Scenario&, ScenarioResult& r) {
  CheckReport report = local_sl2_check();
  if (report.pass) return;
  r.status = ScenarioStatus::fail;
  r.witness = report.witness;
}

void run_realization_search(const Scenario& s, ScenarioResult& r) {
  RealizationResult res = exchange_realization_search();
  const bool has_expect = !s.expect.is_null();
  if (res.found) {
    if (res.product != res.target || multiply(res.product, res.product) !=
                                         SpMatrix::identity(res.product.n)) {
      r.status = ScenarioStatus::fail;
      r.witness = "reported match is inconsistent; product =\n" + format_matrix(res.product);
      return;
    }
    if (has_expect) {
      if (!s.expect.at("found").get<bool>()) {
        r.status = ScenarioStatus::fail;
        r.witness = "expected no realization, but the search found " + res.convention;
        return;
      }
      if (const json* c = maybe_field(s.expect, "convention")) {
        std::string want = c->get<std::string>();
        if (res.convention != want) {
          r.status = ScenarioStatus::fail;
          r.witness = "search found " + res.convention + ", expected " + want;
          return;
        }
      }
    }
    return;
  }
  if (has_expect && s.expect.at("found").get<bool>()) {
    r.status = ScenarioStatus::fail;
    r.witness = "expected a realization, but the search found none";
    return;
  }
  r.status = ScenarioStatus::finding;
  r.witness = "search space exhausted without an exact match";
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

ScenarioResult run_one(const Scenario& s) {
  ScenarioResult r;
  r.id = s.id;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (s.kind == "dih-relation") run_dih_relation(s, r);
    else if (s.kind == "dih-closure") run_dih_closure(s, r);
    else if (s.kind == "perm-identity") run_perm_identity(s, r);
    else if (s.kind == "framed-identity") run_framed_identity(s, r);
    else if (s.kind == "sp-identity") run_sp_identity(s, r);
    else if (s.kind == "sp-property") run_sp_property(s, r);
    else if (s.kind == "membership") run_membership(s, r);
    else if (s.kind == "sl2") run_sl2(s, r);
    else run_realization_search(s, r);
  } catch (const std::exception& e) {
    r.status = ScenarioStatus::fail;
    r.witness = std::string("error: ") + e.what();
  }
  auto t1 = std::chrono::steady_clock::now();
  r.ms = round3(std::chrono::duration<double, std::milli>(t1 - t0).count());
  return r;
}

}  // namespace

std::vector<ScenarioResult> run_scenarios(const std::string& json_text,
                                          const VerifyOptions& options) {
  std::vector<Scenario> scenarios = parse_scenarios(json_text);
  std::vector<ScenarioResult> results(scenarios.size());
  std::size_t jobs = std::max<std::size_t>(options.jobs, 1);
  jobs = std::min(jobs, std::max<std::size_t>(scenarios.size(), 1));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) results[i] = run_one(scenarios[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= scenarios.size()) break;
      results[i] = run_one(scenarios[i]);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return results;
}

ScenarioResult run_scenario_by_id(const std::string& json_text, const std::string& id) {
  std::vector<Scenario> scenarios = parse_scenarios(json_text);
  for (const Scenario& s : scenarios)
    if (s.id == id) return run_one(s);
  bad("no scenario with id \"" + id + "\"");
}

void lint_scenarios(const std::string& json_text) {
  std::vector<Scenario> scenarios = parse_scenarios(json_text);
  for (const Scenario& s : scenarios) {
    if (s.anchor == "plumbing") continue;
    if (std::count(s.anchor.begin(), s.anchor.end(), '"') >= 2) continue;
    bad(ctx_id(s.id) +
        "paper_anchor must be \"plumbing\" or contain a quoted statement of the "
        "checked fact");
  }
}

bool all_clean(const std::vector<ScenarioResult>& results) {
  return std::none_of(results.begin(), results.end(), [](const ScenarioResult& r) {
    return r.status == ScenarioStatus::fail;
  });
}

std::string emit_json(const std::vector<ScenarioResult>& results) {
  ordered_json arr = ordered_json::array();
  std::size_t pass = 0, fail = 0, finding = 0;
  for (const ScenarioResult& r : results) {
    ordered_json o;
    o["id"] = r.id;
    o["status"] = to_string(r.status);
    if (r.witness.empty())
      o["witness"] = nullptr;
    else
      o["witness"] = r.witness;
    o["ms"] = r.ms;
    arr.push_back(std::move(o));
    if (r.status == ScenarioStatus::pass) ++pass;
    else if (r.status == ScenarioStatus::fail) ++fail;
    else ++finding;
  }
  ordered_json out;
  out["results"] = std::move(arr);
  out["summary"] = ordered_json{{"pass", pass}, {"finding", finding}, {"fail", fail}};
  return out.dump(2) + "\n";
}

std::string emit_text(const std::vector<ScenarioResult>& results) {
  std::ostringstream out;
  std::size_t pass = 0, fail = 0, finding = 0;
  for (const ScenarioResult& r : results) {
    std::string status = to_string(r.status);
    std::transform(status.begin(), status.end(), status.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.ms);
    out << r.id << ": " << status << " (" << ms << " ms)\n";
    if (!r.witness.empty()) {
      std::istringstream lines(r.witness);
      std::string line;
      while (std::getline(lines, line)) out << "    " << line << "\n";
    }
    if (r.status == ScenarioStatus::pass) ++pass;
    else if (r.status == ScenarioStatus::fail) ++fail;
    else ++finding;
  }
  out << "summary: " << pass << " pass, " << finding << " finding, " << fail
      << " fail\n";
  return out.str();
}

const std::string* find_bundled(const std::string& name) {
  std::string key = name;
  if (key.size() > 5 && key.compare(key.size() - 5, 5, ".json") == 0)
    key.resize(key.size() - 5);
  for (const BundledFile& f : bundled_scenarios())
    if (f.name == key) return &f.content;
  return nullptr;
}

}  // namespace powellcalc
