// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scenario/parser.hpp"
#include "support/test_rng.hpp"

using namespace cove;
using namespace cove::scenario;
using cove::testing::TestRng;

namespace {

Scenario parse_ok(const std::string& text) {
  auto result = parse_scenario(text);
  auto* err = std::get_if<ParseError>(&result);
  if (err != nullptr) FAIL(err->to_string());
  return std::get<Scenario>(result);
}

ParseError parse_err(const std::string& text) {
  auto result = parse_scenario(text);
  REQUIRE(std::holds_alternative<ParseError>(result));
  return std::get<ParseError>(result);
}

}  // namespace

TEST_CASE("grammar: a host step with expectation") {
  Scenario s = parse_ok("host convert 0x100000 4 expect ok\n");
  REQUIRE(s.steps.size() == 1);
  const Step& step = s.steps[0];
  CHECK(step.actor == Step::Actor::Host);
  CHECK(step.op.kind == OpKind::Covh);
  CHECK(step.op.fn == kCovhConvertPages);
  CHECK(step.op.args == std::vector<uint64_t>{0x100000, 4});
  CHECK(step.expect.kind == Expectation::Kind::Ok);
  CHECK(step.text == "host convert 0x100000 4 expect ok");
}

TEST_CASE("grammar: decimal and hex integers, comments, blank lines") {
  Scenario s = parse_ok(
      "# leading comment\n"
      "\n"
      "name demo\n"
      "host convert 65536 4   # trailing comment\n"
      "host read 0x2000\n");
  CHECK(s.name == "demo");
  REQUIRE(s.steps.size() == 2);
  CHECK(s.steps[0].op.args[0] == 65536);
  CHECK(s.steps[1].op.kind == OpKind::Read);
}

TEST_CASE("grammar: adversary steps require an expectation") {
  ParseError e = parse_err("adversary read 0x100000\n");
  CHECK(e.line == 1);
  CHECK(e.message.find("expectation") != std::string::npos);
}

TEST_CASE("grammar: unknown op is reported at the offending token") {
  ParseError e = parse_err("host tvm_creat 1\n");
  CHECK(e.category == ParseError::Category::UnknownOp);
  CHECK(e.line == 1);
  CHECK(e.message.find("tvm_creat") != std::string::npos);
}

TEST_CASE("grammar: arity mismatch") {
  ParseError e = parse_err("host convert 0x1000\n");
  CHECK(e.category == ParseError::Category::ArityMismatch);
}

TEST_CASE("grammar: positions point into the line") {
  ParseError e = parse_err("host convert 0x1000 zzz\n");
  CHECK(e.line == 1);
  CHECK(e.column == 21);  // the 'zzz' token
}

TEST_CASE("grammar: program blocks") {
  Scenario s = parse_ok(
      "program p\n"
      "  touch store 0x80000000 7\n"
      "  covg share 0x90000000 1\n"
      "  covg get_evidence aabb\n"
      "  wfi\n"
      "  exit 3\n"
      "endprogram\n"
      "host convert 0x10000 4 expect ok\n"
      "host tvm_create 0x10000 1 expect ok\n"
      "host tvm_create_vcpu 0 0 0x11000 1 p expect ok\n");
  REQUIRE(s.programs.contains("p"));
  const TvmProgram& p = s.programs.at("p");
  REQUIRE(p.size() == 5);
  CHECK(p[0].kind == Action::Kind::Touch);
  CHECK(p[0].access == AccessKind::Store);
  CHECK(p[1].covg_fn == kCovgShare);
  CHECK(p[2].covg_fn == kCovgGetEvidence);
  CHECK(p[2].report_data[0] == 0xaa);
  CHECK(p[3].kind == Action::Kind::Wfi);
  CHECK(p[4].value == 3);
  CHECK(s.steps[2].op.program == "p");
}

TEST_CASE("grammar: unterminated program and undefined program references") {
  CHECK(parse_err("program p\n touch load 0x0\n").message.find("never ends") !=
        std::string::npos);
  ParseError e =
      parse_err("host tvm_create_vcpu 0 0 0x11000 1 nosuch expect ok\n");
  CHECK(e.message.find("nosuch") != std::string::npos);
}

TEST_CASE("grammar: config directives feed the platform config") {
  Scenario s = parse_ok(
      "config memory_pages 128\n"
      "config harts 2\n"
      "config max_tvms 4\n"
      "config debug_platform 1\n"
      "config tsm_blob deadbeef\n"
      "config root_secret "
      "0101010101010101010101010101010101010101010101010101010101010102\n");
  CHECK(s.config.memory_pages == 128);
  CHECK(s.config.hart_count == 2);
  CHECK(s.config.max_tvms == 4);
  CHECK(s.config.debug_platform);
  CHECK(s.config.tsm_blob == std::vector<uint8_t>{0xde, 0xad, 0xbe, 0xef});
  CHECK(s.config.root_secret[31] == 0x02);

  CHECK(parse_err("config root_secret aabb\n").message.find("32 bytes") !=
        std::string::npos);
  CHECK(parse_err("config nonsense 1\n").category ==
        ParseError::Category::UnknownOp);

  // Values that would build an unusable platform are parse errors.
  CHECK(parse_err("config memory_pages 4\n").line == 1);
  CHECK(parse_err("config memory_pages 100000000\n").line == 1);
  CHECK(parse_err("config harts 0\n").line == 1);
  CHECK(parse_err("config max_tvms 0\n").line == 1);
}

TEST_CASE("grammar: expectation clauses") {
  Scenario s = parse_ok(
      "host tsm_info expect value 1\n"
      "adversary read 0x5000 expect fault access_fault\n"
      "adversary tvm_destroy 4 expect error unknown_tvm\n"
      "host tvm_run 0 0 expect exit guest_page_fault 0x80000000\n");
  CHECK(s.steps[0].expect.kind == Expectation::Kind::Value);
  CHECK(s.steps[0].expect.value == 1);
  CHECK(s.steps[1].expect.fault == ExceptionKind::AccessFault);
  CHECK(s.steps[2].expect.error == AbiStatus::UnknownTvm);
  CHECK(s.steps[3].expect.exit_reason == TvmExit::Reason::GuestPageFault);
  CHECK(s.steps[3].expect.exit_arg == 0x80000000);

  CHECK(parse_err("host tsm_info expect error bogus_code\n").line == 1);
  CHECK(parse_err("host tsm_info expect\n").category ==
        ParseError::Category::ArityMismatch);
  CHECK(parse_err("host tsm_info expect ok trailing\n").line == 1);
}

TEST_CASE("grammar: tvm actor steps") {
  Scenario s = parse_ok(
      "tvm 1 0 read 0x80000000 expect value 0\n"
      "tvm 1 0 write 0x80000008 0x55\n"
      "tvm 1 0 covg_share 0x90000000 2 expect ok\n"
      "tvm 1 0 covg_get_evidence expect ok\n"
      "tvm 1 0 intfile_read 1 0 expect ok\n");
  CHECK(s.steps[0].actor == Step::Actor::Tvm);
  CHECK(s.steps[0].actor_tvm == 1);
  CHECK(s.steps[0].op.kind == OpKind::GuestTouch);
  CHECK(s.steps[1].op.access == AccessKind::Store);
  CHECK(s.steps[2].op.fn == kCovgShare);
  CHECK(s.steps[3].op.fn == kCovgGetEvidence);
  CHECK(s.steps[4].op.kind == OpKind::GuestIntfile);
}

TEST_CASE("parser totality: random bytes never crash") {
  TestRng rng(0x70F0);
  const std::string alphabet =
      "host adversary tvm expect ok error fault value exit 0x123 99 \n\t "
      "convert read write program endprogram touch covg wfi # name config";
  for (int i = 0; i < 2000; ++i) {
    std::string junk;
    size_t len = rng.below(200);
    for (size_t k = 0; k < len; ++k) {
      if (rng.chance(50)) {
        junk.push_back(alphabet[rng.below(alphabet.size())]);
      } else {
        junk.push_back(static_cast<char>(rng.next() & 0xFF));
      }
    }
    (void)parse_scenario(junk);  // must return Scenario or ParseError
  }
}
