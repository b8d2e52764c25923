#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "garota/cli/commands.h"
#include "garota/cli/trace_file.h"
#include "garota/scenarios/suite.h"

using namespace garota;
using namespace garota::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() /
                   ("garota_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

bool contains(const std::string& hay, std::string_view needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("trace files round trip") {
  const auto r = scenarios::run_scenario(scenarios::builtin_scenario("net-tcb"));
  const auto file = TraceFile::of(r.trace, r.scenario.trigger);
  const auto text = emit_trace(file);
  const auto back = parse_trace(text);
  CHECK(back == file);
  CHECK(emit_trace(back) == text);
  CHECK(back.rows.size() == r.trace.rows.size());
  CHECK(back.rows[0].guards[4].has_value());  // confidentiality enabled

  auto resized = scenarios::builtin_scenario("gpio-tcb");
  resized.tcb_size = 1024;
  const auto rr = scenarios::run_scenario(resized);
  CHECK(parse_trace(emit_trace(TraceFile::of(rr.trace, resized.trigger))).layout ==
        resized.layout());
}

TEST_CASE("trace parser rejects malformed input") {
  const std::string h = std::string(kTraceHeader) + "\n";
  const std::string row = "0,0x0000,0,0,0x0000,0,0x0000,0,0,none,0,RUN,RUN,OFF,NotTcb,-\n";
  CHECK_NOTHROW(parse_trace(h + row));
  CHECK_THROWS_AS(parse_trace(h), TraceFileError);
  CHECK_THROWS_AS(parse_trace(""), TraceFileError);
  CHECK_THROWS_AS(parse_trace(row), TraceFileError);         // no header
  CHECK_THROWS_AS(parse_trace(h + row + row), TraceFileError);  // cycle repeats
  CHECK_THROWS_AS(parse_trace(h + "0,0x00,0,0,0x0000,0,0x0000,0,0,none,0,RUN,RUN,OFF,NotTcb,-\n"),
                  TraceFileError);
  CHECK_THROWS_AS(parse_trace(h + "0,0x0000,2,0,0x0000,0,0x0000,0,0,none,0,RUN,RUN,OFF,NotTcb,-\n"),
                  TraceFileError);
  CHECK_THROWS_AS(parse_trace(h + "0,0x0000,0,0,0x0000,0,0x0000,0,0,none,0,RUN,RUN,OFF,Bogus,-\n"),
                  TraceFileError);
  CHECK_THROWS_AS(parse_trace("# trigger sonar\n" + h + row), TraceFileError);
}

TEST_CASE("run: exit codes and trace output") {
  const auto dir = temp_dir();
  const auto trace = (dir / "gpio.csv").string();
  auto r = invoke({"run", "gpio-tcb", "--trace-out", trace});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "PASS gpio-tcb"));
  CHECK_NOTHROW(parse_trace(slurp(trace)));

  CHECK(invoke({"run", "gpio-tcb", "--attack", "app-writes-tcb"}).status == kExitOk);
  CHECK(invoke({"run", (dir / "missing.scn").string()}).status == kExitError);
  CHECK(invoke({"run", "gpio-tcb", "--attack", "nope"}).status == kExitError);
  CHECK(invoke({"run", "gpio-tcb", "--attack", "app-reads-tcb"}).status == kExitError);
  CHECK(invoke({"run", "gpio-tcb", "--tcb-size", "3"}).status == kExitError);
  // A window too short for the second edge fails the request count.
  CHECK(invoke({"run", "gpio-tcb", "--max-cycles", "1500"}).status == kExitFailed);
  CHECK(invoke({}).status == kExitError);
  CHECK(invoke({"frobnicate"}).status == kExitError);
}

TEST_CASE("export-scenario output runs as a scenario file") {
  const auto dir = temp_dir();
  const auto path = (dir / "net.scn").string();
  CHECK(invoke({"export-scenario", "net-tcb", "--attack", "app-reads-tcb", "-o", path}).status ==
        kExitOk);
  const auto r = invoke({"run", path});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "PASS net-tcb+app-reads-tcb"));

  // Broken program text is a load error.
  auto text = slurp(path);
  text.replace(text.find("[program]\n"), 10, "[program]\nFROB\n");
  spit(dir / "broken.scn", text);
  CHECK(invoke({"run", (dir / "broken.scn").string()}).status == kExitError);

  const auto hex = invoke({"export-scenario", "gpio-tcb", "--hex"});
  CHECK(hex.status == kExitOk);
  CHECK(hex.out.rfind("0xA000: ", 0) == 0);
}

TEST_CASE("check: verdicts, violation position, exit codes") {
  const auto dir = temp_dir();
  const auto good = (dir / "good.csv").string();
  REQUIRE(invoke({"run", "gpio-tcb", "--trace-out", good}).status == kExitOk);
  auto r = invoke({"check", good});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, " 0 violated"));

  // Cycle 700 becomes an untrusted store into PMEM.
  auto file = parse_trace(slurp(good));
  auto& s = file.rows[700].snap;
  REQUIRE_FALSE(file.layout.tcb.contains(s.pc));
  s.w_en = true;
  s.d_addr = sim::Address(0xC800);
  s.reset = false;
  const auto bad = dir / "bad.csv";
  spit(bad, emit_trace(file));
  r = invoke({"check", bad.string()});
  CHECK(r.status == kExitFailed);
  CHECK(contains(r.out, "ltl5        Violated(700) cycle 700"));

  spit(dir / "empty.csv", std::string(kTraceHeader) + "\n");
  CHECK(invoke({"check", (dir / "empty.csv").string()}).status == kExitError);
  spit(dir / "f.ltl", "odd : G(W_EN -> NOPE)\n");
  CHECK(invoke({"check", good, (dir / "f.ltl").string()}).status == kExitError);
  spit(dir / "g.ltl", "never_write : G(!W_EN)\n");
  r = invoke({"check", good, (dir / "g.ltl").string()});
  CHECK(r.status == kExitFailed);
  CHECK(contains(r.out, "never_write"));
}

TEST_CASE("prove: bounds, theorem selection, seed") {
  CHECK(invoke({"prove", "--bound", "1"}).status == kExitError);
  CHECK(invoke({"prove", "--theorem", "T3"}).status == kExitError);
  auto r = invoke({"prove", "--theorem", "T1", "--bound", "4"});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "NoCounterexampleUpTo(4)"));
  CHECK_FALSE(contains(r.out, "T2"));
  r = invoke({"prove", "--theorem", "T2", "--bound", "4", "--sanity"});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "T2_weakened"));
  CHECK(contains(r.out, "Counterexample(\n"));

  ::setenv("GAROTA_SEED", "42", 1);
  r = invoke({"prove", "--theorem", "T1", "--bound", "3", "--samples", "50"});
  ::unsetenv("GAROTA_SEED");
  CHECK(contains(r.out, "seed 42"));
  CHECK(r.out == invoke({"prove", "--theorem", "T1", "--bound", "3", "--samples", "50",
                      "--seed", "42"}).out);
}

TEST_CASE("equiv: counts and cross pairs") {
  auto r = invoke({"equiv"});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "7/7 guard checks pass"));
  r = invoke({"equiv", "--no-confidentiality"});
  CHECK(contains(r.out, "6/6 guard checks pass"));
  r = invoke({"equiv", "--cross"});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "pmem_guard vs ltl6: Mismatch"));
}

TEST_CASE("suite and list") {
  const auto dir = temp_dir() / "traces";
  auto r = invoke({"suite", "--filter", "timer-tcb+app-*", "--trace-dir", dir.string()});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "5/5 suite entries passed"));
  CHECK(fs::exists(dir / "timer-tcb+app-clears-gie.csv"));
  CHECK(invoke({"check", (dir / "timer-tcb+app-clears-gie.csv").string()}).status == kExitOk);

  r = invoke({"list"});
  CHECK(r.status == kExitOk);
  CHECK(contains(r.out, "irq-during-tcb"));
  CHECK(contains(r.out, "T2_weakened"));
}
