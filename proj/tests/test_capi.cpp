#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "gerty/capi.h"

namespace {
std::string corpus(const std::string& name) {
  return std::string(GERTY_CORPUS_DIR) + "/" + name;
}

struct Opts {
  gerty_options* p = gerty_options_new();
  ~Opts() { gerty_options_free(p); }
};

struct Run {
  gerty_result* r;
  Run(const Opts& o, const char* cmd, std::initializer_list<std::string> args) {
    std::vector<const char*> argv;
    std::vector<std::string> hold(args);
    for (const auto& a : hold) argv.push_back(a.c_str());
    r = gerty_run(o.p, cmd, argv.empty() ? nullptr : argv.data(), (int)argv.size());
  }
  ~Run() { gerty_result_free(r); }
  int code() const { return gerty_result_code(r); }
  std::string out() const { return gerty_result_output(r); }
  std::string diag() const { return gerty_result_diagnostics(r); }
};
}  // namespace

TEST_CASE("checking a valid file succeeds through the C API") {
  Opts o;
  Run r(o, "check", {corpus("id.gerty")});
  CHECK(r.code() == GERTY_OK);
  CHECK(r.out().find("checked id") != std::string::npos);
  CHECK(r.diag().empty());
}

TEST_CASE("the leak example fails with the documented diagnostic") {
  Opts o;
  REQUIRE(gerty_options_set(o.p, "semiring", "security") == 0);
  Run r(o, "check", {corpus("leak.gerty")});
  CHECK(r.code() == GERTY_ERR_CHECK);
  CHECK(r.diag().find("For 'x' expected Hi but got .1") != std::string::npos);
}

TEST_CASE("missing files are configuration errors") {
  Opts o;
  Run r(o, "check", {corpus("missing.gerty")});
  CHECK(r.code() == GERTY_ERR_CONFIG);
}

TEST_CASE("eval normalizes a declaration") {
  Opts o;
  Run r(o, "eval", {corpus("id.gerty"), "id"});
  CHECK(r.code() == GERTY_OK);
  CHECK(r.out().find("\\a -> \\x -> x") != std::string::npos);
}

TEST_CASE("translate produces the SSF image of id") {
  Opts o;
  REQUIRE(gerty_options_set(o.p, "target", "ssf") == 0);
  Run r(o, "translate", {corpus("id.gerty"), "id"});
  CHECK(r.code() == GERTY_OK);
  CHECK(r.out().find("forall") != std::string::npos);
}

TEST_CASE("selftest runs a small suite") {
  Opts o;
  REQUIRE(gerty_options_set(o.p, "suite", "preservation") == 0);
  REQUIRE(gerty_options_set(o.p, "cases", "20") == 0);
  REQUIRE(gerty_options_set(o.p, "seed", "5") == 0);
  Run r(o, "selftest", {});
  CHECK(r.code() == GERTY_OK);
  CHECK(r.out().find("0 failures") != std::string::npos);
}

TEST_CASE("unknown options and commands are rejected") {
  Opts o;
  CHECK(gerty_options_set(o.p, "no-such-key", "1") != 0);
  CHECK(gerty_options_set(o.p, "fuel", "not-a-number") != 0);
  Run r(o, "frobnicate", {});
  CHECK(r.code() == GERTY_ERR_CONFIG);
}

TEST_CASE("version string") {
  std::string v = gerty_version();
  CHECK(v.find("gerty") != std::string::npos);
}
