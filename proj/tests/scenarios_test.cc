#include <doctest.h>

#include <algorithm>

#include "garota/scenarios/attacks.h"
#include "garota/scenarios/suite.h"
#include "garota/sim/isa.h"

using namespace garota;
using namespace garota::scenarios;
using sim::Address;
using sim::MemoryLayout;

namespace {

const MemoryLayout kLayout = MemoryLayout::standard();

sim::Word word_at(const Assembly& a, unsigned addr) {
  for (const auto& w : a.image) {
    if (w.addr.value == addr) return w.value;
  }
  FAIL("no word at ", addr);
  return 0;
}

std::size_t error_line(std::string_view text) {
  try {
    assemble(text, kLayout);
  } catch (const AssemblyError& e) {
    return e.line();
  }
  return 0;
}

const CheckResult& find_check(const RunResult& r, std::string_view name) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(),
                         [&](const auto& c) { return c.check == name; });
  REQUIRE(it != r.checks.end());
  return *it;
}

}  // namespace

TEST_CASE("assembler encodes two-word instructions with forward labels") {
  const auto a = assemble(
      ".org INIT_MIN\n"
      "start: MOVI r2, 0x10 + 2 ; comment\n"
      "       JMP done\n"
      "done:  HALT\n",
      kLayout);
  CHECK(a.symbols.at("start") == 0xA000);
  CHECK(a.symbols.at("done") == 0xA004);
  CHECK(a.image.size() == 6);
  CHECK(word_at(a, 0xA001) == 0x12);
  CHECK(word_at(a, 0xA003) == 0xA004);
  CHECK(std::is_sorted(a.image.begin(), a.image.end(),
                       [](const auto& x, const auto& y) { return x.addr < y.addr; }));
}

TEST_CASE("assembler expressions and directives") {
  const auto a = assemble(
      ".equ BASE 0x0300\n"
      ".org BASE + 4\n"
      ".word 'A'\n"
      ".word BASE - 1\n"
      ".word TCB_MAX - TCB_MIN + 1\n",
      kLayout);
  CHECK(word_at(a, 0x0304) == 65);
  CHECK(word_at(a, 0x0305) == 0x02FF);
  CHECK(word_at(a, 0x0306) == 2048);
  CHECK(eval_expression("APP_BASE", kLayout) == kLayout.tcb.max.value + 2);
  CHECK(eval_expression("VEC_UART", kLayout) ==
        sim::irq_slot(kLayout, sim::IrqSource::kUart).value);
  CHECK(eval_expression("X + 1", kLayout, {{"X", 41}}) == 42);
  CHECK_THROWS_AS(eval_expression("1 +", kLayout), AssemblyError);
}

TEST_CASE("assembler errors carry the line number") {
  CHECK(error_line(".org INIT_MIN\nNOP\nFROB r1, 2\n") == 3);
  CHECK(error_line(".org INIT_MIN\nx: NOP\nx: NOP\n") == 3);
  CHECK(error_line(".org INIT_MIN\nJMP nowhere\n") == 2);
  CHECK(error_line(".equ TCB_MIN 4\n") == 1);
  CHECK(error_line(".org 0x0300\n.word 1\n.org 0x0300\n.word 2\n") == 4);
}

TEST_CASE("a TCB body larger than the TCB is rejected") {
  const auto small = MemoryLayout::with_tcb_size(8);
  std::string body = ".org TCB_MIN\n";
  for (int i = 0; i < 5; ++i) body += "NOP\n";
  CHECK_THROWS_AS(assemble(body, small), AssemblyError);
  // Four instructions fill the region; the last operand word may spill.
  std::string fits = ".org TCB_MIN\nNOP\nNOP\nNOP\nRET\n";
  CHECK_NOTHROW(assemble(fits, small));
}

TEST_CASE("disassembly reassembles to the same image") {
  for (auto name : kBuiltinNames) {
    const auto s = builtin_scenario(name);
    const auto layout = s.layout();
    const auto a = assemble(s.program, layout);
    const auto listing = disassemble(a.image, layout);
    CAPTURE(listing);
    CHECK(assemble(listing, layout).image == a.image);
  }
  const auto resized = MemoryLayout::with_tcb_size(4096);
  auto s = builtin_scenario("gpio-tcb");
  const auto a = assemble(s.program, resized);
  CHECK(assemble(disassemble(a.image, resized), resized).image == a.image);
}

TEST_CASE("a flat hex listing is a program") {
  const auto s = builtin_scenario("timer-tcb");
  const auto a = assemble(s.program, s.layout());
  const auto hex = format_hex_image(a.image);
  CHECK(hex.substr(0, 15) == "0xA000: 0x0203\n");
  CHECK(assemble(hex, s.layout()).image == a.image);
  CHECK(word_at(assemble("0x0300: 'a' + 1\n0x0302: 7\n", kLayout), 0x0300) == 98);
  CHECK(error_line("0x0300: 1\n0x0300: 2\n") == 2);
  CHECK(error_line("0x0100: 1\n") == 1);
}

TEST_CASE("scenario text round trips") {
  for (auto name : kBuiltinNames) {
    const auto s = builtin_scenario(name);
    CHECK(parse_scenario(to_text(s)) == s);
    for (const auto& atk : attack_catalog()) {
      if (!applicable(atk, s)) continue;
      const auto attacked = apply_attack(s, atk);
      CHECK(parse_scenario(to_text(attacked)) == attacked);
    }
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), UnknownScenario);
}

TEST_CASE("scenario parser") {
  const auto s = parse_scenario(
      "# comment\n"
      "[meta]\nname = demo\ntrigger = uart\nmax_cycles = 50\ntcb_size = 256\n"
      "[program]\n.org INIT_MIN\nHALT\n"
      "[events]\nuart 10 'z'\ngpio 12 1\n"
      "[dma]\n3..5 0x0300 7\n9 0x0301\n"
      "[expect]\nno-resets\n");
  CHECK(s.name == "demo");
  CHECK(s.trigger == sim::IrqSource::kUart);
  CHECK(s.layout().tcb.max.value - s.layout().tcb.min.value + 1 == 256);
  REQUIRE(s.events.uart_events.size() == 1);
  CHECK(s.events.uart_events[0].byte == 'z');
  REQUIRE(s.dma.size() == 4);
  CHECK(s.dma[2].cycle == 5);
  CHECK(s.dma[2].value == 7);
  CHECK_FALSE(s.dma[3].value.has_value());
  CHECK(s.expect == std::vector<std::string>{"no-resets"});
  CHECK_THROWS_AS(parse_scenario("[meta]\nbogus = 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[events]\nuart 5 1\nuart 5 2\n"), ScenarioError);
}

TEST_CASE("built-in scenarios meet their expectations") {
  for (auto name : kBuiltinNames) {
    const auto r = run_scenario(builtin_scenario(name));
    CAPTURE(format_result(r));
    CHECK(r.pass);
  }
}

TEST_CASE("gpio scenario pulses P3OUT once per rising edge") {
  const auto r = run_scenario(builtin_scenario("gpio-tcb"));
  const auto p3out = eval_expression("P3OUT", kLayout);
  std::vector<sim::Word> writes;
  for (const auto& a : r.trace.accesses) {
    if (a.committed && a.kind == sim::AccessKind::kWrite && a.addr.value == p3out) {
      writes.push_back(a.value);
    }
  }
  CHECK(writes == std::vector<sim::Word>{1, 0, 1, 0});
}

TEST_CASE("net scenario resets only on 'r'") {
  auto s = builtin_scenario("net-tcb");
  s.events.uart_events = {{1000, 'x'}, {1500, 'y'}};
  s.expect = {"no-resets", "store-seen APPDATA 'y'"};
  CHECK(run_scenario(s).pass);

  s.events.uart_events = {{1000, 'r'}};
  s.expect = {"sw-reset", "no-guard-fired", "retrigger"};
  const auto r = run_scenario(s);
  CHECK(r.pass);
  REQUIRE(r.trace.resets.size() == 1);
  CHECK(r.trace.resets[0].cause == sim::ResetCause::kSoftware);
}

TEST_CASE("every attack trips its guard and the device recovers") {
  std::size_t ran = 0;
  for (auto name : kBuiltinNames) {
    const auto base = builtin_scenario(name);
    for (const auto& atk : attack_catalog()) {
      if (!applicable(atk, base)) continue;
      const auto s = apply_attack(base, atk);
      const auto r = run_scenario(s);
      CAPTURE(format_result(r));
      CHECK(r.pass);
      CHECK(find_check(r, "guard-fired " + std::string(monitor::to_string(atk.expected_guard)))
                .status == CheckStatus::kPass);
      ++ran;
    }
  }
  CHECK(ran == 31);
}

TEST_CASE("attack applicability") {
  const auto gpio = builtin_scenario("gpio-tcb");
  const auto& reads = find_attack("app-reads-tcb");
  CHECK(reads.confidentiality_only);
  CHECK_FALSE(applicable(reads, gpio));
  CHECK_THROWS_AS(apply_attack(gpio, reads), ScenarioError);
  CHECK(applicable(reads, builtin_scenario("net-tcb")));
  CHECK_THROWS_AS(find_attack("nope"), UnknownAttack);
  auto hookless = gpio;
  hookless.program = ".org INIT_MIN\nHALT\n";
  CHECK_THROWS_AS(apply_attack(hookless, find_attack("app-writes-pmem")), ScenarioError);
}

TEST_CASE("checks detect the wrong outcome") {
  const auto benign = run_scenario(builtin_scenario("gpio-tcb"));
  const auto s = builtin_scenario("gpio-tcb");
  const auto a = assemble(s.program, s.layout());
  auto state = sim::load_program(a.image, s.layout());
  const CheckContext ctx{s, benign.trace, state, a.symbols};
  CHECK(evaluate_check("guard-fired pmem", ctx).status == CheckStatus::kFail);
  CHECK(evaluate_check("sw-reset", ctx).status == CheckStatus::kFail);
  CHECK(evaluate_check("requests 3", ctx).status == CheckStatus::kFail);
  CHECK(evaluate_check("store-seen P3OUT 7", ctx).status == CheckStatus::kFail);
  CHECK_THROWS_AS(evaluate_check("frobnicate", ctx), ScenarioError);
  CHECK_THROWS_AS(evaluate_check("guard-fired bogus", ctx), ScenarioError);

  const auto attacked =
      run_scenario(apply_attack(s, find_attack("app-writes-pmem")));
  const auto aa = assemble(attacked.scenario.program, s.layout());
  const CheckContext actx{attacked.scenario, attacked.trace, state, aa.symbols};
  CHECK(evaluate_check("no-guard-fired", actx).status == CheckStatus::kFail);
  CHECK(evaluate_check("guard-fired exec", actx).status == CheckStatus::kFail);
}

TEST_CASE("a truncated trace leaves service checks inconclusive") {
  auto s = builtin_scenario("gpio-tcb");
  s.max_cycles = 1002;  // the first edge arrives at cycle 1000
  s.expect = {"trigger-serviced"};
  const auto r = run_scenario(s);
  CHECK(r.checks[0].status == CheckStatus::kInconclusive);
  CHECK_FALSE(r.pass);
}

TEST_CASE("suite is deterministic and filterable") {
  CHECK(suite_entries().size() == 34);
  CHECK(suite_entries(std::string_view("gpio-tcb*")).size() == 11);
  CHECK(suite_entries(std::string_view("dma")).size() == 9);
  CHECK(suite_entries(std::string_view("*+app-reads-tcb")).size() == 1);
  const auto one = run_suite(std::string_view("timer"), 1);
  const auto many = run_suite(std::string_view("timer"), 4);
  CHECK(format_report(one) == format_report(many));
  CHECK(one.all_passed());
}
