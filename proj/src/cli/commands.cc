#include "garota/cli/commands.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "garota/cli/trace_file.h"
#include "garota/ltl/library.h"
#include "garota/ltl/signals.h"
#include "garota/ltl/validity.h"
#include "garota/monitor/equivalence.h"
#include "garota/scenarios/attacks.h"
#include "garota/scenarios/suite.h"

namespace garota::cli {

namespace {

namespace fs = std::filesystem;
using scenarios::Scenario;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

// A path to a scenario file, else a built-in name.
Scenario load_scenario(const std::string& target) {
  if (fs::is_regular_file(target)) return scenarios::parse_scenario(read_file(target));
  for (auto name : scenarios::kBuiltinNames) {
    if (target == name) return scenarios::builtin_scenario(name);
  }
  throw scenarios::UnknownScenario("no scenario file or built-in named '" + target + "'");
}

ltl::FormulaSet load_formulas(const std::string& path) {
  if (path.empty()) return ltl::builtin_formulas();
  return ltl::FormulaSet(ltl::parse_formula_file(read_file(path)));
}

struct RunArgs {
  std::string target;
  std::string attack;
  std::optional<std::uint64_t> max_cycles;
  std::optional<std::uint32_t> tcb_size;
  bool confidentiality = false;
  std::string trace_out;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  auto s = load_scenario(a.target);
  if (a.max_cycles) s.max_cycles = *a.max_cycles;
  if (a.tcb_size) s.tcb_size = *a.tcb_size;
  if (a.confidentiality) s.confidentiality = true;
  if (!a.attack.empty()) s = scenarios::apply_attack(s, scenarios::find_attack(a.attack));
  s.layout().validate();
  const auto r = scenarios::run_scenario(s);
  out << scenarios::format_result(r);
  if (!a.trace_out.empty()) {
    write_file(a.trace_out, emit_trace(TraceFile::of(r.trace, s.trigger)));
  }
  return r.pass ? kExitOk : kExitFailed;
}

int cmd_check(const std::string& trace_path, const std::string& formulas_path,
              std::ostream& out) {
  const auto trace = parse_trace(read_file(trace_path));
  const auto set = load_formulas(formulas_path);
  const auto& alphabet = ltl::signal_alphabet();
  const auto letters = ltl::signal_trace(trace.snapshots(), trace.layout, trace.trigger);
  std::size_t width = 0;
  const auto checked = set.checked();
  for (const auto& e : checked) {
    ltl::require_atoms(e.formula, alphabet);
    width = std::max(width, e.name.size());
  }
  std::size_t violated = 0;
  for (const auto& e : checked) {
    const auto v = ltl::eval_on_trace(e.formula, alphabet, letters);
    out << std::left << std::setw(static_cast<int>(width) + 2) << e.name << ltl::to_string(v);
    if (v.kind == ltl::VerdictKind::kViolated) {
      ++violated;
      out << " cycle " << trace.rows[v.position].snap.cycle;
    }
    out << "\n";
  }
  out << checked.size() << " formulas over " << trace.rows.size() << " rows, " << violated
      << " violated\n";
  return violated == 0 ? kExitOk : kExitFailed;
}

struct ProveArgs {
  std::string theorem = "all";
  std::size_t bound = 6;
  bool sanity = false;
  std::size_t samples = 256;
  std::uint64_t seed = 0;
  std::string method = "auto";
  std::string formulas;
};

int cmd_prove(const ProveArgs& a, std::ostream& out) {
  const auto set = load_formulas(a.formulas);
  ltl::ValidityOptions base;
  base.samples = a.samples;
  base.seed = a.seed;
  base.method = a.method == "sat"         ? ltl::SearchMethod::kSat
                : a.method == "enumerate" ? ltl::SearchMethod::kEnumerate
                                          : ltl::SearchMethod::kAuto;
  std::vector<ltl::TheoremId> ids;
  if (a.theorem == "all" || a.theorem == "T1") ids.push_back(ltl::TheoremId::kT1);
  if (a.theorem == "all" || a.theorem == "T2") ids.push_back(ltl::TheoremId::kT2);
  if (a.sanity) {
    if (a.theorem == "all" || a.theorem == "T1") ids.push_back(ltl::TheoremId::kT1Weakened);
    if (a.theorem == "all" || a.theorem == "T2") ids.push_back(ltl::TheoremId::kT2Weakened);
  }
  out << "bound " << a.bound << ", " << a.samples << " samples, seed " << a.seed << "\n";
  bool ok = true;
  for (auto id : ids) {
    const auto r = ltl::theorem_check(id, set, a.bound, base);
    out << ltl::to_string(r) << "\n";
    ok = ok && r.as_expected;
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_equiv(bool cross, bool confidentiality, const std::string& formulas,
              std::ostream& out) {
  const auto set = load_formulas(formulas);
  const auto layout = sim::MemoryLayout::standard();
  std::size_t passed = 0;
  const auto checks = monitor::standard_checks(confidentiality);
  bool ok = true;
  for (const auto& c : checks) {
    const auto r = monitor::run_guard_check(c, set, layout);
    out << monitor::to_string(r) << "\n";
    passed += r.as_expected ? 1 : 0;
    ok = ok && r.as_expected;
  }
  out << passed << "/" << checks.size() << " guard checks pass\n";
  if (cross) {
    out << "cross pairs (a mismatch is expected):\n";
    for (const auto& c : monitor::cross_checks()) {
      const auto r = monitor::run_guard_check(c, set, layout);
      out << monitor::to_string(r) << "\n";
      ok = ok && r.as_expected;
    }
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_suite(const std::string& filter, unsigned threads, const std::string& trace_dir,
              std::ostream& out) {
  std::optional<std::string_view> f;
  if (!filter.empty()) f = filter;
  const auto report = scenarios::run_suite(f, threads);
  if (!trace_dir.empty()) fs::create_directories(trace_dir);
  for (const auto& r : report.results) {
    out << scenarios::format_result(r);
    if (!trace_dir.empty()) {
      const auto path = fs::path(trace_dir) / (r.scenario.name + ".csv");
      write_file(path, emit_trace(TraceFile::of(r.trace, r.scenario.trigger)));
      out << "  trace " << path.string() << "\n";
    }
  }
  out << report.passed() << "/" << report.results.size() << " suite entries passed\n";
  return report.all_passed() ? kExitOk : kExitFailed;
}

int cmd_export(const std::string& name, const std::string& attack, bool hex,
               const std::string& path, std::ostream& out) {
  auto s = load_scenario(name);
  if (!attack.empty()) s = scenarios::apply_attack(s, scenarios::find_attack(attack));
  const auto text = hex ? scenarios::format_hex_image(
                              scenarios::assemble(s.program, s.layout()).image)
                        : scenarios::to_text(s);
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
  return kExitOk;
}

int cmd_list(std::ostream& out) {
  out << "scenarios:\n";
  for (auto name : scenarios::kBuiltinNames) {
    const auto s = scenarios::builtin_scenario(name);
    out << "  " << name << " (trigger " << sim::to_string(s.trigger)
        << (s.confidentiality ? ", confidentiality" : "") << ")\n";
  }
  out << "attacks:\n";
  for (const auto& a : scenarios::attack_catalog()) {
    out << "  " << std::left << std::setw(22) << a.name << std::setw(8)
        << monitor::to_string(a.expected_guard) << a.summary << "\n";
  }
  out << "theorems:\n";
  for (auto id : {ltl::TheoremId::kT1, ltl::TheoremId::kT2, ltl::TheoremId::kT1Weakened,
                  ltl::TheoremId::kT2Weakened}) {
    const auto spec = ltl::theorem_spec(id);
    out << "  " << ltl::to_string(id) << ": ";
    for (std::size_t i = 0; i < spec.antecedents.size(); ++i) {
      out << (i ? ", " : "") << spec.antecedents[i];
    }
    out << " |- " << spec.consequent << "\n";
  }
  out << "formulas:\n";
  for (const auto& e : ltl::builtin_formulas().checked()) {
    out << "  " << e.name << " : " << e.text << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GAROTA active root-of-trust simulator and LTL toolkit", "garota"};
  app.require_subcommand(1);
  int status = kExitOk;

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "Run a scenario file or built-in and its checks");
  c_run->add_option("scenario", run.target, "Scenario file or built-in name")->required();
  c_run->add_option("--attack", run.attack, "Apply an attack from the catalog");
  c_run->add_option("--max-cycles", run.max_cycles, "Override max_cycles");
  c_run->add_option("--tcb-size", run.tcb_size, "TCB size in address units");
  c_run->add_flag("--confidentiality", run.confidentiality, "Enable the confidentiality guard");
  c_run->add_option("--trace-out", run.trace_out, "Write the trace as CSV");
  c_run->callback([&] { status = cmd_run(run, out); });

  std::string trace_path, check_formulas;
  auto* c_check = app.add_subcommand("check", "Evaluate formulas over a trace file");
  c_check->add_option("trace", trace_path, "Trace CSV")->required();
  c_check->add_option("formulas", check_formulas, "Formula file (default: built-in set)");
  c_check->callback([&] { status = cmd_check(trace_path, check_formulas, out); });

  ProveArgs prove;
  auto* c_prove = app.add_subcommand("prove", "Bounded validity check of the theorems");
  c_prove->add_option("--theorem", prove.theorem, "T1, T2 or all")
      ->check(CLI::IsMember({"T1", "T2", "all"}))
      ->capture_default_str();
  c_prove->add_option("--bound", prove.bound, "Largest prefix+loop length")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  c_prove->add_flag("--sanity", prove.sanity, "Also require counterexamples for weakened variants");
  c_prove->add_option("--samples", prove.samples, "Random lassos tried past the bound")
      ->capture_default_str();
  c_prove->add_option("--seed", prove.seed, "Sampling seed")
      ->envname("GAROTA_SEED")
      ->capture_default_str();
  c_prove->add_option("--method", prove.method, "auto, enumerate or sat")
      ->check(CLI::IsMember({"auto", "enumerate", "sat"}))
      ->capture_default_str();
  c_prove->add_option("--formulas", prove.formulas, "Formula file (default: built-in set)");
  c_prove->callback([&] { status = cmd_prove(prove, out); });

  bool cross = false, no_confid = false;
  std::string equiv_formulas;
  auto* c_equiv = app.add_subcommand("equiv", "Check each guard FSM against its formula");
  c_equiv->add_flag("--cross", cross, "Also run mismatched guard/formula pairs");
  c_equiv->add_flag("--no-confidentiality", no_confid, "Skip the confidentiality guard");
  c_equiv->add_option("--formulas", equiv_formulas, "Formula file (default: built-in set)");
  c_equiv->callback([&] { status = cmd_equiv(cross, !no_confid, equiv_formulas, out); });

  std::string filter, trace_dir;
  unsigned threads = 0;
  auto* c_suite = app.add_subcommand("suite", "Run built-in scenarios under every attack");
  c_suite->add_option("--filter", filter, "Glob, or substring without wildcards");
  c_suite->add_option("--threads", threads, "Worker threads (0: one per core)");
  c_suite->add_option("--trace-dir", trace_dir, "Write one trace CSV per entry");
  c_suite->callback([&] { status = cmd_suite(filter, threads, trace_dir, out); });

  std::string export_name, export_attack, export_path;
  bool export_hex = false;
  auto* c_export = app.add_subcommand("export-scenario", "Print a built-in scenario file");
  c_export->add_option("name", export_name, "Built-in name or scenario file")->required();
  c_export->add_option("--attack", export_attack, "Apply an attack first");
  c_export->add_flag("--hex", export_hex, "Print the assembled image as ADDR: WORD lines");
  c_export->add_option("-o,--output", export_path, "Write to a file");
  c_export->callback(
      [&] { status = cmd_export(export_name, export_attack, export_hex, export_path, out); });

  app.add_subcommand("list", "List scenarios, attacks, theorems and formulas")
      ->callback([&] { status = cmd_list(out); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return status;
}

}  // namespace garota::cli
