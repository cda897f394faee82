#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "capcalc/capcalc.h"

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { capcalc_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

struct Src {
  capcalc_source* p = nullptr;
  ~Src() { capcalc_source_free(p); }
};

capcalc_status parse_into(const char* text, Src& src, Str* err = nullptr) {
  return capcalc_source_parse(text, &src.p, err ? &err->p : nullptr);
}

}  // namespace

TEST_CASE("parse and check a program") {
  Src src;
  REQUIRE(parse_into("cap stdout\nmain = stdout.print(\"hello world\")", src) == CAPCALC_OK);
  REQUIRE(src.p != nullptr);

  Str ty;
  CHECK(capcalc_source_check(src.p, &ty.p, nullptr) == CAPCALC_OK);
  CHECK(ty.s() == "unit");
}

TEST_CASE("parse errors carry positions") {
  Src src;
  Str err;
  CHECK(parse_into("main = (", src, &err) == CAPCALC_ERR_PARSE);
  CHECK(src.p == nullptr);
  CHECK(err.s().find("line 1") != std::string::npos);
}

TEST_CASE("type errors name the impure variable") {
  Src src;
  REQUIRE(parse_into("main = fun x: unit -> box x", src) == CAPCALC_OK);
  Str ty, err;
  CHECK(capcalc_source_check(src.p, &ty.p, &err.p) == CAPCALC_ERR_TYPE);
  CHECK(ty.p == nullptr);
  CHECK(err.s().find("x") != std::string::npos);
  CHECK(err.s().find("line") != std::string::npos);
}

TEST_CASE("running a program") {
  Src src;
  REQUIRE(parse_into("cap stdout\nmain = stdout.print(\"hello world\")", src) == CAPCALC_OK);

  const char* caps[] = {"stdout"};
  const char* chans[] = {"fd1"};
  Str value, output;
  REQUIRE(capcalc_source_run(src.p, caps, chans, 1, 1, &value.p, &output.p, nullptr) ==
          CAPCALC_OK);
  CHECK(value.s() == "()");
  CHECK(output.s() == "fd1: hello world\n");
}

TEST_CASE("running needs every capability bound") {
  Src src;
  REQUIRE(parse_into("cap stdout\nmain = stdout.print(\"x\")", src) == CAPCALC_OK);
  Str value, output, err;
  CHECK(capcalc_source_run(src.p, nullptr, nullptr, 0, 1, &value.p, &output.p, &err.p) ==
        CAPCALC_ERR_MISSING_BINDING);
  CHECK(err.s().find("stdout") != std::string::npos);
}

TEST_CASE("output lines are sorted by channel") {
  Src src;
  REQUIRE(parse_into("cap a\ncap b\nmain = b.print(\"2\"); a.print(\"1\")", src) == CAPCALC_OK);
  const char* caps[] = {"a", "b"};
  const char* chans[] = {"zz", "aa"};
  Str value, output;
  REQUIRE(capcalc_source_run(src.p, caps, chans, 2, 1, &value.p, &output.p, nullptr) ==
          CAPCALC_OK);
  CHECK(output.s() == "aa: 2\nzz: 1\n");
}

TEST_CASE("weighing defaults unbound capabilities to their own names") {
  Src src;
  REQUIRE(parse_into("cap c1\ncap c2\nmain = (c1, c2)", src) == CAPCALC_OK);
  Str vw, ew;
  REQUIRE(capcalc_source_weigh(src.p, nullptr, nullptr, 0, &vw.p, &ew.p, nullptr) == CAPCALC_OK);
  CHECK(vw.s() == "{c1, c2}");
  CHECK(ew.s() == "{}");

  Src pr;
  REQUIRE(parse_into("cap stdout\nmain = stdout.print(\"x\")", pr) == CAPCALC_OK);
  Str vw2, ew2;
  REQUIRE(capcalc_source_weigh(pr.p, nullptr, nullptr, 0, &vw2.p, &ew2.p, nullptr) == CAPCALC_OK);
  CHECK(vw2.s() == "{}");
  CHECK(ew2.s() == "{stdout}");
}

TEST_CASE("embedding a pure term") {
  Str out;
  REQUIRE(capcalc_embed("fun x: unit -> x", &out.p, nullptr) == CAPCALC_OK);
  CHECK(out.s().find("let box x") != std::string::npos);
  CHECK(out.s().find("[]unit") != std::string::npos);

  Str err;
  CHECK(capcalc_embed("((), ())", nullptr, &err.p) == CAPCALC_ERR_TYPE);
  CHECK(err.s().find("pure fragment") != std::string::npos);
  Str err2;
  CHECK(capcalc_embed("fun c: cap -> c", nullptr, &err2.p) == CAPCALC_ERR_TYPE);
}

TEST_CASE("reverse translation of a printing program") {
  Str out;
  REQUIRE(capcalc_unembed("cap c\nmain = c.print(\"s\")", &out.p, nullptr) == CAPCALC_OK);
  CHECK(out.s() == "()");

  Str rt;
  REQUIRE(capcalc_unembed("main = fun x: []unit -> let box y = x in y", &rt.p, nullptr) ==
          CAPCALC_OK);
  CHECK(rt.s().find("fun x: unit ->") != std::string::npos);

  Str err;
  CHECK(capcalc_unembed("main = ((), ())", nullptr, &err.p) == CAPCALC_ERR_TYPE);
}

TEST_CASE("law suites through the C interface") {
  Str report;
  int ok = 0;
  REQUIRE(capcalc_laws_run("embed", 7, 5, 0, 0, nullptr, 0, &report.p, &ok, nullptr) ==
          CAPCALC_OK);
  CHECK(ok == 1);
  CHECK(report.s().find("embed/config: PASS") != std::string::npos);
  CHECK(report.s().find("FAIL") == std::string::npos);

  Str json;
  int jok = 0;
  REQUIRE(capcalc_laws_run("embed", 7, 5, 0, 0, nullptr, 1, &json.p, &jok, nullptr) == CAPCALC_OK);
  CHECK(jok == 1);
  CHECK(json.s().find("{\"name\":") != std::string::npos);
  CHECK(json.s().find("\"pass\":true") != std::string::npos);

  Str model;
  int mok = 0;
  REQUIRE(capcalc_laws_run("model", 7, -1, 2, 2, "idem", 0, &model.p, &mok, nullptr) ==
          CAPCALC_OK);
  CHECK(mok == 1);
  CHECK(model.s().find("model/") != std::string::npos);
}

TEST_CASE("usage errors") {
  Str err;
  CHECK(capcalc_laws_run("nope", 7, -1, 0, 0, nullptr, 0, nullptr, nullptr, &err.p) ==
        CAPCALC_ERR_USAGE);
  Str err2;
  CHECK(capcalc_laws_run("model", 7, -1, 2, 2, "nope", 0, nullptr, nullptr, &err2.p) ==
        CAPCALC_ERR_USAGE);
  Str err3;
  CHECK(capcalc_source_parse(nullptr, nullptr, &err3.p) == CAPCALC_ERR_USAGE);
  CHECK(capcalc_embed(nullptr, nullptr, nullptr) == CAPCALC_ERR_USAGE);

  capcalc_string_free(nullptr);
  capcalc_source_free(nullptr);
}

TEST_CASE("evaluation failures surface as eval errors") {
  // box body writes: ill-typed, so the checker refuses before evaluation
  Src src;
  REQUIRE(parse_into("cap c\nmain = box (c.print(\"x\"))", src) == CAPCALC_OK);
  Str ty, err;
  CHECK(capcalc_source_check(src.p, &ty.p, &err.p) == CAPCALC_ERR_TYPE);

  const char* caps[] = {"c"};
  const char* chans[] = {"c"};
  Str value, output, rerr;
  CHECK(capcalc_source_run(src.p, caps, chans, 1, 1, &value.p, &output.p, &rerr.p) ==
        CAPCALC_ERR_TYPE);
}
