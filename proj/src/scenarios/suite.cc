#include "garota/scenarios/suite.h"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "garota/ltl/library.h"
#include "garota/ltl/signals.h"
#include "garota/monitor/guards.h"
#include "garota/scenarios/attacks.h"

namespace garota::scenarios {

namespace {

using sim::AccessSource;
using sim::AccessKind;
using sim::ResetCause;

std::vector<std::string> split_words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

CheckResult pass(std::string check, std::string detail = "") {
  return {std::move(check), CheckStatus::kPass, std::move(detail)};
}
CheckResult fail(std::string check, std::string detail) {
  return {std::move(check), CheckStatus::kFail, std::move(detail)};
}
CheckResult inconclusive(std::string check, std::string detail) {
  return {std::move(check), CheckStatus::kInconclusive, std::move(detail)};
}

std::string hex4(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", v & 0xFFFF);
  return buf;
}

// Rows are indexed by cycle.
const sim::TraceRow* row_at(const sim::Trace& t, std::uint64_t cycle) {
  if (cycle >= t.rows.size()) return nullptr;
  return &t.rows[cycle];
}

bool is_register(const sim::MemoryLayout& l, sim::Address a) {
  return l.irq_cfg.contains(a) ||
         a == sim::register_address(l, sim::reg::kDmaCtl);
}

CheckResult check_retrigger(const std::string& name, const CheckContext& ctx) {
  const auto& t = ctx.trace;
  const auto& l = t.layout;
  for (const auto& r : t.resets) {
    const auto* zero = row_at(t, r.cycle + 1);
    if (zero == nullptr) {
      return inconclusive(name, "trace ends at the reset of cycle " + std::to_string(r.cycle));
    }
    if (zero->snap.pc.value != 0) {
      return fail(name, "no pc=0 after the reset of cycle " + std::to_string(r.cycle));
    }
    std::uint64_t c = r.cycle + 2;
    while (row_at(t, c) && l.init.contains(row_at(t, c)->snap.pc) &&
           !row_at(t, c)->snap.reset) {
      ++c;
    }
    const auto* entry = row_at(t, c);
    if (entry == nullptr) return inconclusive(name, "trace ends inside INIT");
    if (entry->snap.pc != l.tcb.min) {
      return fail(name, "cycle " + std::to_string(c) + ": first pc after INIT is " +
                            hex4(entry->snap.pc.value) + ", not tcb.min");
    }
    for (;; ++c) {
      const auto* row = row_at(t, c);
      if (row == nullptr) return inconclusive(name, "trace ends inside the TCB");
      if (!l.tcb.contains(row->snap.pc)) {
        return fail(name, "cycle " + std::to_string(c) + ": untrusted pc " +
                              hex4(row->snap.pc.value) + " before tcb.max");
      }
      if (row->snap.reset) {
        return fail(name, "cycle " + std::to_string(c) + ": reset before tcb.max");
      }
      if (row->snap.pc == l.tcb.max) break;
    }
  }
  return pass(name, std::to_string(t.resets.size()) + " recoveries");
}

CheckResult check_trigger_serviced(const std::string& name, const CheckContext& ctx) {
  const auto& t = ctx.trace;
  std::size_t served = 0;
  for (const auto& req : t.irq_requests) {
    if (req.source != ctx.scenario.trigger) continue;
    bool ok = false;
    for (auto c = req.cycle + 1; c < t.rows.size() && !ok; ++c) {
      ok = t.rows[c].snap.pc == t.layout.tcb.min;
    }
    if (!ok) {
      return inconclusive(name, "request at cycle " + std::to_string(req.cycle) +
                                    " not followed by tcb.min within the trace");
    }
    ++served;
  }
  return pass(name, std::to_string(served) + " requests served");
}

CheckResult check_ltl_clean(const std::string& name, const CheckContext& ctx) {
  std::vector<sim::CycleSnapshot> snaps;
  snaps.reserve(ctx.trace.rows.size());
  for (const auto& r : ctx.trace.rows) snaps.push_back(r.snap);
  const auto letters =
      ltl::signal_trace(snaps, ctx.trace.layout, ctx.scenario.trigger);
  for (const auto& e : ltl::builtin_formulas().checked()) {
    const auto v = ltl::eval_on_trace(e.formula, ltl::signal_alphabet(), letters);
    if (v.kind == ltl::VerdictKind::kViolated) {
      return fail(name, e.name + " " + ltl::to_string(v));
    }
  }
  return pass(name);
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "FAIL";
    case CheckStatus::kInconclusive: return "INCONCLUSIVE";
  }
  return "FAIL";
}

CheckResult evaluate_check(std::string_view check, const CheckContext& ctx) {
  const std::string name(check);
  const auto w = split_words(check);
  if (w.empty()) return fail(name, "empty check");
  const auto& t = ctx.trace;
  const auto& l = t.layout;
  auto args = [&](std::size_t n) {
    if (w.size() != n + 1) {
      throw ScenarioError("check '" + name + "' takes " + std::to_string(n) + " argument(s)");
    }
  };
  auto value = [&](const std::string& text) {
    return eval_expression(text, l, ctx.symbols);
  };
  auto count = [&](ResetCause c) {
    return std::count_if(t.resets.begin(), t.resets.end(),
                         [c](const auto& r) { return r.cause == c; });
  };
  const std::string& kind = w[0];

  if (kind == "no-resets") {
    args(0);
    if (t.resets.empty()) return pass(name);
    return fail(name, std::to_string(t.resets.size()) + " resets, first at cycle " +
                          std::to_string(t.resets.front().cycle) + " (" +
                          t.resets.front().detail + ")");
  }
  if (kind == "no-guard-fired") {
    args(0);
    const auto n = count(ResetCause::kMonitor);
    if (n == 0) return pass(name);
    return fail(name, std::to_string(n) + " monitor resets");
  }
  if (kind == "guard-fired") {
    args(1);
    const auto g = monitor::parse_guard_kind(w[1]);
    if (!g) throw ScenarioError("unknown guard '" + w[1] + "'");
    std::vector<const sim::ResetRecord*> fired;
    for (const auto& r : t.resets) {
      if (r.cause == ResetCause::kMonitor) fired.push_back(&r);
    }
    if (fired.size() != 1) {
      return fail(name, std::to_string(fired.size()) + " monitor resets, expected 1");
    }
    const auto* row = row_at(t, fired[0]->cycle);
    if (!row->local_reset[static_cast<std::size_t>(*g)]) {
      return fail(name, "cycle " + std::to_string(fired[0]->cycle) + ": " +
                            fired[0]->detail);
    }
    return pass(name, "cycle " + std::to_string(fired[0]->cycle));
  }
  if (kind == "sw-reset") {
    args(0);
    if (count(ResetCause::kSoftware) > 0) return pass(name);
    return fail(name, "no software reset");
  }
  if (kind == "requests") {
    args(1);
    const auto want = value(w[1]);
    const auto n = std::count_if(t.irq_requests.begin(), t.irq_requests.end(),
                                 [&](const auto& r) { return r.source == ctx.scenario.trigger; });
    if (n == want) return pass(name);
    return fail(name, std::to_string(n) + " trigger requests");
  }
  if (kind == "trigger-serviced") {
    args(0);
    return check_trigger_serviced(name, ctx);
  }
  if (kind == "retrigger") {
    args(0);
    return check_retrigger(name, ctx);
  }
  if (kind == "tcb-completes") {
    args(0);
    const std::uint64_t from = t.resets.empty() ? 0 : t.resets.back().cycle + 1;
    for (auto c = from; c < t.rows.size(); ++c) {
      const auto& s = t.rows[c].snap;
      if (s.pc == l.tcb.max && !s.reset) {
        return pass(name, "tcb.max at cycle " + std::to_string(c));
      }
    }
    return fail(name, "tcb.max not reached after cycle " + std::to_string(from));
  }
  if (kind == "write-blocked") {
    args(0);
    std::size_t blocked = 0;
    for (const auto& r : t.resets) {
      if (r.cause != ResetCause::kMonitor) continue;
      for (const auto& a : t.accesses) {
        if (a.cycle != r.cycle) continue;
        if (a.committed) {
          return fail(name, "access to " + hex4(a.addr.value) + " committed on cycle " +
                                std::to_string(r.cycle));
        }
        if (a.kind == AccessKind::kWrite) {
          if (!is_register(l, a.addr) && a.before != a.after) {
            return fail(name, hex4(a.addr.value) + " changed on cycle " +
                                  std::to_string(r.cycle));
          }
          ++blocked;
        }
      }
    }
    return pass(name, std::to_string(blocked) + " writes blocked");
  }
  if (kind == "ltl-clean") {
    args(0);
    return check_ltl_clean(name, ctx);
  }
  if (kind == "store-seen") {
    args(2);
    const auto addr = value(w[1]);
    const auto v = value(w[2]);
    for (const auto& a : t.accesses) {
      if (a.source == AccessSource::kCpu && a.kind == AccessKind::kWrite &&
          a.committed && a.addr.value == addr && a.value == v) {
        return pass(name, "cycle " + std::to_string(a.cycle));
      }
    }
    return fail(name, "no committed store of " + hex4(v) + " to " + hex4(addr));
  }
  if (kind == "mem" || kind == "mem-at-least") {
    args(2);
    const auto addr = value(w[1]);
    const auto v = value(w[2]);
    const auto got = sim::peek(ctx.final_state, sim::Address(addr));
    const bool ok = kind == "mem" ? got == v : got >= v;
    if (ok) return pass(name, hex4(got));
    return fail(name, hex4(addr) + " holds " + hex4(got));
  }
  throw ScenarioError("unknown check '" + kind + "'");
}

RunResult run_scenario(const Scenario& s) {
  const auto layout = s.layout();
  const auto assembly = assemble(s.program, layout);
  auto state = sim::load_program(assembly.image, layout);
  state.dma.schedule = s.dma;
  auto bank = monitor::MonitorBank::make(layout, s.confidentiality);
  RunResult r;
  r.scenario = s;
  r.trace = sim::run(state, s.max_cycles, bank, s.events);
  const CheckContext ctx{s, r.trace, state, assembly.symbols};
  r.pass = true;
  for (const auto& c : s.expect) {
    r.checks.push_back(evaluate_check(c, ctx));
    r.pass = r.pass && r.checks.back().status == CheckStatus::kPass;
  }
  return r;
}

std::vector<SuiteEntry> suite_entries(std::optional<std::string_view> filter) {
  std::vector<SuiteEntry> all;
  for (auto name : kBuiltinNames) {
    const auto base = builtin_scenario(name);
    all.push_back({base.name, base});
    for (const auto& a : attack_catalog()) {
      if (!applicable(a, base)) continue;
      auto s = apply_attack(base, a);
      all.push_back({s.name, std::move(s)});
    }
  }
  if (!filter) return all;
  const std::string pattern(*filter);
  const bool glob = pattern.find_first_of("*?[") != std::string::npos;
  std::vector<SuiteEntry> kept;
  for (auto& e : all) {
    const bool match = glob ? fnmatch(pattern.c_str(), e.name.c_str(), 0) == 0
                            : e.name.find(pattern) != std::string::npos;
    if (match) kept.push_back(std::move(e));
  }
  return kept;
}

std::size_t RunReport::passed() const {
  return static_cast<std::size_t>(std::count_if(
      results.begin(), results.end(), [](const auto& r) { return r.pass; }));
}

RunReport run_suite(std::optional<std::string_view> filter, unsigned threads) {
  const auto entries = suite_entries(filter);
  RunReport report;
  report.results.resize(entries.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(entries.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(entries.size());
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < entries.size();) {
      try {
        report.results[i] = run_scenario(entries[i].scenario);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

std::string format_result(const RunResult& r) {
  std::string out = (r.pass ? "PASS " : "FAIL ") + r.scenario.name + " (" +
                    std::to_string(r.trace.rows.size()) + " cycles, " +
                    std::to_string(r.trace.resets.size()) + " resets)\n";
  for (const auto& c : r.checks) {
    out += "  " + std::string(to_string(c.status)) + " " + c.check;
    if (!c.detail.empty()) out += ": " + c.detail;
    out += "\n";
  }
  return out;
}

std::string format_report(const RunReport& r) {
  std::string out;
  for (const auto& res : r.results) out += format_result(res);
  out += std::to_string(r.passed()) + "/" + std::to_string(r.results.size()) +
         " suite entries passed\n";
  return out;
}

}  // namespace garota::scenarios
