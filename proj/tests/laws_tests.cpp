#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "capcalc/equational.hpp"
#include "capcalc/gen.hpp"
#include "capcalc/interp.hpp"
#include "capcalc/modellab.hpp"
#include "capcalc/parser.hpp"
#include "capcalc/printer.hpp"
#include "capcalc/stlc.hpp"
#include "capcalc/suites.hpp"
#include "capcalc/typecheck.hpp"

using namespace capcalc;

static TermPtr pt(const std::string& s) { return parse_term_text(s); }
static TypePtr ptt(const std::string& s) { return parse_type_text(s); }

static const Context kChanCtx = {{"c", ty::cap(), Qualifier::Impure}};

// ---------------------------------------------------------------------------
// rewrite rules and their side conditions
// ---------------------------------------------------------------------------

TEST_CASE("product beta projects value pairs only") {
  auto r1 = try_rule(Rule::BetaProd1, pt("fst ((), \"s\")"), {});
  REQUIRE(r1.has_value());
  CHECK(alpha_equal(*r1, tm::unit()));

  auto r2 = try_rule(Rule::BetaProd2, pt("snd ((), \"s\")"), {});
  REQUIRE(r2.has_value());
  CHECK(alpha_equal(*r2, tm::str("s")));

  CHECK_FALSE(try_rule(Rule::BetaProd1, pt("fst (c.print(\"s\"), ())"), kChanCtx));
  CHECK_FALSE(try_rule(Rule::BetaProd1, pt("fst x"), {{"x", ptt("unit * unit"), Qualifier::Impure}}));
  CHECK_FALSE(try_rule(Rule::BetaProd2, pt("fst ((), ())"), {}));
}

TEST_CASE("product eta expands values of product type") {
  Context g = {{"p", ptt("unit * str"), Qualifier::Impure}};
  auto r = try_rule(Rule::EtaProd, tm::var("p"), g);
  REQUIRE(r.has_value());
  CHECK(alpha_equal(*r, pt("(fst p, snd p)")));

  CHECK_FALSE(try_rule(Rule::EtaProd, pt("(c.print(\"a\"), ())"), kChanCtx));
  CHECK_FALSE(try_rule(Rule::EtaProd, tm::unit(), {}));
}

TEST_CASE("arrow beta fires on value arguments only") {
  auto r = try_rule(Rule::BetaArrow, pt("(fun x: unit -> (x, x)) ()"), {});
  REQUIRE(r.has_value());
  CHECK(alpha_equal(*r, pt("((), ())")));

  // an effectful argument would be duplicated, so the rule refuses
  CHECK_FALSE(try_rule(Rule::BetaArrow, pt("(fun x: unit -> (x; x)) (c.print(\"s\"))"), kChanCtx));
}

TEST_CASE("duplicating an effectful argument is observable") {
  TermPtr lhs = pt("(fun x: unit -> (x; x)) (c.print(\"s\"))");
  TermPtr naive = tm::seq(pt("c.print(\"s\")"), pt("c.print(\"s\")"));
  DenotResult d = denot_equal(kChanCtx, lhs, naive, ty::unit(), 21);
  CHECK(d.verdict == Verdict::Distinguished);
  CHECK_FALSE(d.witness.empty());
}

TEST_CASE("arrow eta expands values and safe expressions") {
  Context g = {{"f", ptt("unit -> unit"), Qualifier::Impure}};
  auto r = try_rule(Rule::EtaArrowImpure, tm::var("f"), g);
  REQUIRE(r.has_value());
  REQUIRE((*r)->kind == Term::Kind::Lam);
  CHECK(alpha_equal(*r, pt("fun q: unit -> f q")));

  // not a value, not safe (prints before producing the function)
  TermPtr busy = pt("c.print(\"s\"); fun x: unit -> x");
  CHECK_FALSE(try_rule(Rule::EtaArrowImpure, busy, kChanCtx));
  CHECK_FALSE(try_rule(Rule::EtaArrowSafe, busy, kChanCtx));

  // safe but not a value: the safe variant applies, the impure one refuses
  TermPtr safe_expr = pt("(fun y: unit -> fun x: unit -> x) ()");
  CHECK_FALSE(try_rule(Rule::EtaArrowImpure, safe_expr, {}));
  auto rs = try_rule(Rule::EtaArrowSafe, safe_expr, {});
  REQUIRE(rs.has_value());
  CHECK(alpha_equal(*rs, pt("fun q: unit -> ((fun y: unit -> fun x: unit -> x) ()) q")));
}

TEST_CASE("suspending an effect behind eta is observable") {
  TermPtr busy = pt("c.print(\"s\"); fun x: unit -> x");
  TermPtr suspended = tm::lam("y", ty::unit(), tm::app(busy, tm::var("y")));
  DenotResult d = denot_equal(kChanCtx, busy, suspended, ptt("unit -> unit"), 22);
  CHECK(d.verdict == Verdict::Distinguished);
}

TEST_CASE("box beta substitutes safely") {
  auto r = try_rule(Rule::BetaBox, pt("let box x = box () in (x, x)"), {});
  REQUIRE(r.has_value());
  CHECK(alpha_equal(*r, pt("((), ())")));

  // scrutinee must be an immediate box of a well-typed safe body
  CHECK_FALSE(try_rule(Rule::BetaBox, pt("let box x = box (c.print(\"s\")) in x"), kChanCtx));
  CHECK_FALSE(try_rule(Rule::BetaBox, pt("let box x = y in x"),
                       {{"y", ptt("[]unit"), Qualifier::Impure}}));
}

TEST_CASE("box eta expansion builds the let box form") {
  TermPtr e = pt("box ()");
  TermPtr got = eta_box_expand(CtxKind::Safe, ec::hole(), e, {});
  CHECK(alpha_equal(got, pt("let box q = box () in box q")));

  Context g = {{"z", ptt("[]unit"), Qualifier::Impure}};
  TermPtr imp = eta_box_expand(CtxKind::Impure, ec::hole(), tm::var("z"), g);
  CHECK(alpha_equal(imp, pt("let box q = z in box q")));

  // a context whose hole is not box-shaped cannot host the expansion
  CHECK_THROWS_AS(eta_box_expand(CtxKind::Safe, ec::fst(ec::hole()), e, {}), error);
  // the safe variant requires the scrutinee itself to be safe
  CHECK_THROWS_AS(eta_box_expand(CtxKind::Safe, ec::hole(), tm::var("z"), g), error);
  // impure contexts reject binder frames
  CHECK_THROWS_AS(
      eta_box_expand(CtxKind::Impure, ec::lam_body("w", ty::unit(), ec::hole()), e, {}), error);
}

TEST_CASE("box eta expansion preserves meaning in a real context") {
  // C = (let box w = [] in w, "k")
  auto c = ec::pair_left(ec::let_box_scrut("w", ec::hole(), tm::var("w")), tm::str("k"));
  TermPtr e = pt("box ()");
  TermPtr lhs = plug(c, e);
  TermPtr rhs = eta_box_expand(CtxKind::Impure, c, e, {});
  TypePtr t = infer({}, lhs);
  CHECK(type_equal(t, infer({}, rhs)));
  DenotResult d = denot_equal({}, lhs, rhs, t, 23);
  CHECK(d.verdict == Verdict::Equal);
}

TEST_CASE("observational comparison") {
  CHECK(denot_equal({}, tm::unit(), tm::unit(), ty::unit(), 31).verdict == Verdict::Equal);

  DenotResult d = denot_equal(kChanCtx, pt("(c.print(\"a\"), c.print(\"b\"))"),
                              pt("(c.print(\"b\"), c.print(\"a\"))"), ptt("unit * unit"), 32);
  CHECK(d.verdict == Verdict::Distinguished);
  CHECK_FALSE(d.witness.empty());

  // functions are compared by sampled application
  DenotResult fd = denot_equal({}, pt("fun x: unit -> ()"),
                               pt("fun x: unit -> x"), ptt("unit -> unit"), 33);
  CHECK(fd.verdict == Verdict::Equal);
  DenotResult fn = denot_equal(kChanCtx, pt("fun x: cap -> x.print(\"1\")"),
                               pt("fun x: cap -> x.print(\"2\")"), ptt("cap -> unit"), 34);
  CHECK(fn.verdict == Verdict::Distinguished);
}

TEST_CASE("beta normalization") {
  NormalizeResult r = rewrite_normalize({}, pt("fst ((), \"s\")"), 100);
  CHECK(alpha_equal(r.term, tm::unit()));
  CHECK(r.steps == 1);
  CHECK_FALSE(r.fuel_exhausted);

  NormalizeResult lb = rewrite_normalize({}, pt("let box x = box () in (x, x)"), 100);
  CHECK(alpha_equal(lb.term, pt("((), ())")));

  // arguments normalize before functions fire
  NormalizeResult two = rewrite_normalize({}, pt("(fun x: unit -> x) ((fun y: unit -> y) ())"), 100);
  CHECK(alpha_equal(two.term, tm::unit()));
  CHECK(two.steps == 2);

  NormalizeResult starved =
      rewrite_normalize({}, pt("(fun x: unit -> x) ((fun y: unit -> y) ())"), 1);
  CHECK(starved.fuel_exhausted);
  CHECK(starved.steps == 1);

  // no rewriting under binders, boxes, or prints
  TermPtr under_lam = pt("fun x: unit -> (fun y: unit -> y) x");
  CHECK(term_equal(rewrite_normalize({}, under_lam, 100).term, under_lam));
  TermPtr under_box = pt("box ((fun x: unit -> x) ())");
  CHECK(term_equal(rewrite_normalize({}, under_box, 100).term, under_box));
  TermPtr under_print = pt("c.print((fun x: str -> x) \"s\")");
  CHECK(term_equal(rewrite_normalize(kChanCtx, under_print, 100).term, under_print));

  // effectful arguments are not values, so the redex stays
  TermPtr stuck = pt("(fun x: unit -> x) (c.print(\"s\"))");
  NormalizeResult sr = rewrite_normalize(kChanCtx, stuck, 100);
  CHECK(term_equal(sr.term, stuck));
  CHECK(sr.steps == 0);
}

TEST_CASE("generated rule instances typecheck on both sides") {
  const Rule rules[] = {Rule::BetaProd1, Rule::BetaProd2,     Rule::EtaProd,
                        Rule::BetaArrow, Rule::EtaArrowImpure, Rule::EtaArrowSafe,
                        Rule::BetaBox,   Rule::EtaBoxSafe,     Rule::EtaBoxImpure};
  Rng root(77);
  for (Rule r : rules) {
    Rng rng = root.fork(static_cast<uint64_t>(r) + 1);
    int made = 0;
    for (int i = 0; i < 200 && made < 5; ++i) {
      auto inst = gen_eq_instance(r, rng);
      if (!inst) continue;
      ++made;
      CHECK(inst->rule == r);
      auto lt = try_infer(inst->ctx, inst->lhs);
      auto rt = try_infer(inst->ctx, inst->rhs);
      REQUIRE(lt.has_value());
      REQUIRE(rt.has_value());
      CHECK(type_equal(*lt, inst->ty));
      CHECK(type_equal(*rt, inst->ty));
    }
    CHECK(made == 5);
  }
}

TEST_CASE("equation suite smoke") {
  EqSuiteOptions opts;
  opts.seed = 7;
  opts.instances = 3;
  auto lines = run_eq_suite(opts);
  CHECK(all_pass(lines));

  std::set<std::string> names;
  for (const auto& l : lines) names.insert(l.name);
  CHECK(names.count("eq/config"));
  CHECK(names.count("eq/beta-prod1/0000"));
  CHECK(names.count("eq/eta-box-impure/0002"));
  CHECK(names.count("eq/cong/beta-arrow/pair-left/0000"));
  CHECK(names.count("eq/regress/print-duplication"));
  CHECK(names.count("eq/regress/pair-order"));
  CHECK(names.count("eq/normalize/embedded-termination"));

  auto again = run_eq_suite(opts);
  REQUIRE(lines.size() == again.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    CHECK(lines[i].name == again[i].name);
    CHECK(lines[i].pass == again[i].pass);
    CHECK(lines[i].note == again[i].note);
  }
}

// ---------------------------------------------------------------------------
// the pure sidecar calculus and its embedding
// ---------------------------------------------------------------------------

namespace st = capcalc::stlc;

TEST_CASE("sidecar typing") {
  auto id = st::stm::lam("x", st::sty::unit(), st::stm::var("x"));
  CHECK(st::stype_equal(st::stlc_infer({}, id), st::sty::arrow(st::sty::unit(), st::sty::unit())));
  CHECK(st::stype_equal(st::stlc_infer({}, st::stm::app(id, st::stm::unit())), st::sty::unit()));
  CHECK_THROWS_AS(st::stlc_infer({}, st::stm::var("free")), error);
  CHECK_THROWS_AS(st::stlc_infer({}, st::stm::app(st::stm::unit(), st::stm::unit())), error);
}

TEST_CASE("sidecar evaluation") {
  auto id = st::stm::lam("x", st::sty::unit(), st::stm::var("x"));
  CHECK(st::sterm_equal(st::stlc_eval(st::stm::app(id, st::stm::unit())), st::stm::unit()));
  CHECK(st::sterm_equal(st::stlc_eval(id), id));

  auto k = st::stm::lam("x", st::sty::unit(),
                        st::stm::lam("y", st::sty::unit(), st::stm::var("x")));
  auto r = st::stlc_eval(st::stm::app(st::stm::app(k, st::stm::unit()), st::stm::unit()));
  CHECK(st::sterm_equal(r, st::stm::unit()));
}

TEST_CASE("sidecar substitution avoids capture") {
  // [y/x](fun y: unit -> x) keeps the free y free
  auto body = st::stm::lam("y", st::sty::unit(), st::stm::var("x"));
  auto got = st::stlc_subst(st::stm::var("y"), "x", body);
  REQUIRE(got->kind == st::STerm::Kind::Lam);
  CHECK(got->name != "y");
  REQUIRE(got->a->kind == st::STerm::Kind::Var);
  CHECK(got->a->name == "y");
}

TEST_CASE("embedding types and contexts") {
  CHECK(type_equal(st::embed_type(st::sty::unit()), ty::unit()));
  CHECK(type_equal(st::embed_type(st::sty::arrow(st::sty::unit(), st::sty::unit())),
                   ptt("[]unit -> unit")));
  CHECK(type_equal(
      st::embed_type(st::sty::arrow(st::sty::arrow(st::sty::unit(), st::sty::unit()),
                                    st::sty::unit())),
      ptt("[]([]unit -> unit) -> unit")));

  Context g = st::embed_context({{"x", st::sty::unit()}});
  REQUIRE(g.size() == 1);
  CHECK(g[0].name == "x");
  CHECK(g[0].qual == Qualifier::Safe);
  CHECK(type_equal(g[0].type, ty::unit()));
}

TEST_CASE("embedding terms") {
  auto id = st::stm::lam("x", st::sty::unit(), st::stm::var("x"));
  TermPtr e = st::embed_term(id);
  CHECK(alpha_equal(e, pt("fun z: []unit -> let box x = z in x")));

  TermPtr a = st::embed_term(st::stm::app(id, st::stm::unit()));
  CHECK(alpha_equal(a, pt("(fun z: []unit -> let box x = z in x) (box ())")));

  // embedded images typecheck at the embedded type
  CHECK(type_equal(infer({}, e), st::embed_type(st::stlc_infer({}, id))));
}

TEST_CASE("reverse translation") {
  CHECK(st::stype_equal(st::unembed_type(ty::str()), st::sty::unit()));
  CHECK(st::stype_equal(st::unembed_type(ty::cap()), st::sty::unit()));
  CHECK(st::stype_equal(st::unembed_type(ptt("[]([]unit -> unit)")),
                        st::sty::arrow(st::sty::unit(), st::sty::unit())));
  CHECK_THROWS_AS(st::unembed_type(ptt("unit * unit")), error);

  // prints collapse to unit
  CHECK(st::sterm_equal(st::unembed_term(kChanCtx, pt("c.print(\"s\")")), st::stm::unit()));

  // let box becomes an immediate application
  auto lb = st::unembed_term({}, pt("let box x = box () in x"));
  CHECK(st::sterm_equal(
      lb, st::stm::app(st::stm::lam("x", st::sty::unit(), st::stm::var("x")), st::stm::unit())));

  CHECK_THROWS_AS(st::unembed_term({}, pt("((), ())")), error);
  CHECK_THROWS_AS(st::unembed_term({}, pt("fst x")), error);
}

TEST_CASE("embedding round trips") {
  auto id = st::stm::lam("x", st::sty::unit(), st::stm::var("x"));

  CHECK(st::stype_equal(st::unembed_type(st::embed_type(st::sty::unit())), st::sty::unit()));
  auto at = st::sty::arrow(st::sty::arrow(st::sty::unit(), st::sty::unit()), st::sty::unit());
  CHECK(st::stype_equal(st::unembed_type(st::embed_type(at)), at));

  // terms come back eta-expanded: the lambda clause leaves one administrative
  // application around the original body
  auto back = st::unembed_term({}, st::embed_term(id));
  REQUIRE(back->kind == st::STerm::Kind::Lam);
  CHECK(st::stype_equal(back->annot, st::sty::unit()));
  REQUIRE(back->a->kind == st::STerm::Kind::App);
  CHECK(st::sterm_equal(back->a->a, id));
  REQUIRE(back->a->b->kind == st::STerm::Kind::Var);
  CHECK(back->a->b->name == back->name);

  // and both sides type and evaluate the same at ground type
  CHECK(st::stype_equal(st::stlc_infer({}, back), st::stlc_infer({}, id)));
  CHECK(st::sterm_equal(st::stlc_eval(st::stm::app(back, st::stm::unit())),
                        st::stlc_eval(st::stm::app(id, st::stm::unit()))));
}

TEST_CASE("embedded programs run silently") {
  Rng rng(201);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    auto t = st::gen_stype(rng, 2);
    auto e = st::gen_sterm(rng, {}, t, 5);
    if (!e) continue;
    ++checked;
    TermPtr ce = st::embed_term(e);
    EvalResult r = eval({}, ce);
    CHECK(r.output.empty());
  }
  CHECK(checked > 40);
}

TEST_CASE("embedding suite smoke") {
  EmbedSuiteOptions opts;
  opts.seed = 7;
  opts.instances = 40;
  auto lines = run_embed_suite(opts);
  CHECK(all_pass(lines));

  std::set<std::string> names;
  for (const auto& l : lines) names.insert(l.name);
  for (const char* want :
       {"embed/config", "embed/typing-preservation", "embed/type-roundtrip",
        "embed/context-roundtrip", "embed/term-roundtrip-typing", "embed/beta-eta-equal",
        "embed/ground-observations", "embed/erasure", "embed/conservativity-smoke"})
    CHECK(names.count(want));

  auto again = run_embed_suite(opts);
  REQUIRE(lines.size() == again.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    CHECK(lines[i].name == again[i].name);
    CHECK(lines[i].pass == again[i].pass);
  }
}

// ---------------------------------------------------------------------------
// finite-model lab
// ---------------------------------------------------------------------------

namespace md = capcalc::model;

TEST_CASE("monoid constructors") {
  auto triv = md::monoid_trivial();
  CHECK(triv.size == 1);
  CHECK(triv.commutative());

  auto t2 = md::monoid_trunc2();
  // words of length <= 2 over two letters, plus the saturation sink
  CHECK(t2.size == 8);
  CHECK_FALSE(t2.commutative());

  auto idem = md::monoid_idem();
  CHECK(idem.size == 2);
  CHECK(idem.times(1, 1) == 1);
  CHECK(idem.commutative());

  // identity law broken: 0 is not a left/right unit
  CHECK_THROWS_AS(md::make_monoid("bad-id", 0, {{1, 1}, {1, 1}}, {"e", "a"}), error);
  // associativity broken with a valid unit: (a*b)*b = e but a*(b*b) = a
  CHECK_THROWS_AS(
      md::make_monoid("bad-assoc", 0, {{0, 1, 2}, {1, 1, 2}, {2, 2, 0}}, {"e", "a", "b"}), error);
}

TEST_CASE("capability spaces") {
  auto caps = md::space_cap({"out", "log"});
  CHECK(caps->size() == 2);
  CHECK(caps->weighted(0, 0b01));
  CHECK_FALSE(caps->weighted(0, 0b00));
  CHECK_FALSE(caps->weighted(0, 0b10));

  auto one = md::space_terminal();
  CHECK(one->size() == 1);
  CHECK(one->weighted(0, 0));

  CHECK(md::space_product(caps, caps)->size() == 4);

  // no weight-preserving point of the capability space
  CHECK(md::enumerate_homs(one, caps).empty());
  CHECK(md::hom_violation(one, caps, {0}).has_value());

  // tokens are never purely weighted, so the box carrier is empty
  CHECK(md::functor_box(caps).space->size() == 0);
  CHECK(md::functor_box(one).space->size() == 1);
}

TEST_CASE("writer and exception functors") {
  auto one = md::space_terminal();
  auto t = md::functor_T(one, md::monoid_trivial());
  CHECK(t.space->size() == 1);

  auto caps = md::space_cap({"a", "b"});
  auto tw = md::functor_T(one, md::monoid_idem());
  // no channels in the terminal universe: carrier stays |A|
  CHECK(tw.space->size() == 1);
  auto tc = md::functor_T(caps, md::monoid_idem());
  // two channels, two monoid elements each: 2 * 2^2
  CHECK(tc.space->size() == 8);

  auto exc = md::functor_exception(caps);
  CHECK(exc.space->size() == 3);
  CHECK(exc.fail_id() == 2);
  CHECK(exc.space->weighted(exc.fail_id(), exc.fail_bit));
}

TEST_CASE("hom checking and composition") {
  auto one = md::space_terminal();
  auto id1 = md::identity_map(one);
  CHECK(md::map_equal(md::compose(id1, id1), id1));
  CHECK_FALSE(md::hom_violation(one, one, {0}).has_value());

  auto caps = md::space_cap({"a"});
  auto into = md::make_map(caps, caps, {0}, "identity on tokens");
  CHECK(md::map_equal(into, md::identity_map(caps)));
  CHECK_THROWS_AS(md::make_map(one, caps, {0}, "broken point"), error);
}

TEST_CASE("model suite smoke") {
  md::ModelOptions opts;
  opts.seed = 7;
  opts.caps = 2;
  opts.max_carrier = 2;
  opts.monoid = "trunc2";
  auto lines = md::run_model_suite(opts);
  CHECK(all_pass(lines));
  for (const auto& l : lines) {
    if (!l.pass) MESSAGE(l.name << ": " << l.note);
  }

  std::set<std::string> names;
  for (const auto& l : lines) names.insert(l.name);
  CHECK(names.count("model/neg/no-global-sections"));
  CHECK(names.count("model/box/cap-carrier-empty"));
  CHECK(names.count("model/monad/order-sensitivity/trunc2"));
  CHECK(names.count("model/monad/order-sensitivity/trivial"));

  CHECK_THROWS_AS(md::run_model_suite({7, 9, 2, "trunc2"}), error);
  CHECK_THROWS_AS(md::run_model_suite({7, 2, 2, "nope"}), error);
}
