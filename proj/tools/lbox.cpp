// lbox: check, run and compare evaluators on .lbox programs.
//
// Exit status: 0 success, 1 program error (I/O, syntax, typing, stuck or
// out of fuel), 2 a property failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lbox/harness.hpp"
#include "lbox/machine.hpp"
#include "lbox/opsem.hpp"
#include "lbox/parser.hpp"
#include "lbox/printer.hpp"
#include "lbox/sugar.hpp"
#include "lbox/typing.hpp"

namespace {

using namespace lbox;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kProgramError = 1;
constexpr int kPropertyFailure = 2;

/// A program error, reported on stderr as `file: message`.
struct Failure {
  std::string message;
};

struct Flags {
  std::size_t fuel = default_fuel;
  bool trace = false;
  bool json = false;
  bool debug_typing = false;
  std::string return_type;
  std::uint64_t seed = 1;
  std::size_t depth = 4;
};

std::size_t fuel_from_env() {
  const char* s = std::getenv("LBOX_FUEL");
  if (!s || !*s) return default_fuel;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Failure{std::string("LBOX_FUEL is not a number: ") + s};
  }
}

SourceProgram load(const std::string& path, const Flags& f) {
  std::ifstream in(path);
  if (!in) throw Failure{path + ": cannot open"};
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = parse_program(text.str());
  if (!parsed) throw Failure{path + ":" + parsed.error().render()};
  SourceProgram p = parsed.value();
  if (!f.return_type.empty()) {
    auto r = parse_type(f.return_type);
    if (!r) throw Failure{"--return-type: " + r.error().render()};
    p.return_type = r.value();
  }
  return p;
}

TypeRef checked(const SourceProgram& p, const std::string& path, const Flags& f) {
  CheckOptions opts;
  opts.debug = f.debug_typing;
  auto t = check_command(TypingContext(p.return_type), p.command, opts);
  if (!t) throw Failure{path + ": " + t.error().render()};
  return t.value();
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// --- subcommands -------------------------------------------------------------

int cmd_check(const std::string& path, const Flags& f) {
  SourceProgram p = load(path, f);
  TypeRef cut = checked(p, path, f);
  if (f.json)
    emit({{"ok", true}, {"return_type", print(p.return_type)}, {"cut_type", print(cut)}});
  else
    std::cout << "OK: cut type " << print(cut) << ", tp : " << print(p.return_type) << "\n";
  return kOk;
}

int cmd_run(const std::string& path, const Flags& f) {
  SourceProgram p = load(path, f);
  checked(p, path, f);
  const TypeRef& R = p.return_type;
  ordered_json steps = ordered_json::array();
  RunResult r = run(p.command, f.fuel, [&](std::size_t i, const TermRef& before, const StepResult& s) {
    if (!f.trace) return;
    if (f.json) {
      steps.push_back({{"step", i + 1}, {"rule", to_string(*s.rule)}, {"command_text", print(s.term, R)}});
    } else {
      if (i == 0) std::cout << "0: " << print(before, R) << "\n";
      std::cout << i + 1 << " [" << to_string(*s.rule) << "]: " << print(s.term, R) << "\n";
    }
  });
  const bool ok = r.final.terminal();
  if (f.json) {
    ordered_json out{{"outcome", ok ? "terminal" : r.fuel_exhausted ? "fuel" : "stuck"},
                     {"steps", r.steps}};
    out["value"] = ok ? ordered_json(print(r.final.term, R)) : ordered_json(nullptr);
    if (!ok) out["reason"] = r.final.reason;
    if (f.trace) out["trace"] = steps;
    emit(out);
  } else if (ok) {
    std::cout << print(r.final.term, R) << "\n" << "steps: " << r.steps << "\n";
  }
  if (!ok) {
    if (!f.json) std::cerr << path << ": " << r.final.reason << " after " << r.steps << " steps\n";
    return kProgramError;
  }
  return kOk;
}

ordered_json memory_json(const Memory& m, const TypeRef& R) {
  ordered_json heap = ordered_json::array();
  for (const Binding& b : m.heap()) heap.push_back({{"name", b.name.str()}, {"text", print(b.stored, R)}});
  ordered_json stack = ordered_json::array();
  for (const Frame& fr : m.stack()) {
    ordered_json frame = ordered_json::array();
    for (const Binding& b : fr.bindings)
      frame.push_back({{"name", b.name.str()}, {"kind", b.covariable ? "covar" : "var"},
                       {"text", print(b.stored, R)}});
    stack.push_back(std::move(frame));
  }
  return {{"heap", heap}, {"stack", stack}};
}

int cmd_machine(const std::string& path, const Flags& f) {
  SourceProgram p = load(path, f);
  checked(p, path, f);
  const TypeRef& R = p.return_type;
  RunOptions o;
  o.machine.return_type = R;
  o.machine.debug = f.debug_typing;
  o.fuel = f.fuel;
  o.record_trace = f.trace;
  MachineRun r = machine_run(p.command, o);
  const bool ok = r.terminal();

  if (f.json) {
    ordered_json out{{"outcome", ok ? "terminal" : r.fuel_exhausted ? "fuel" : "stuck"},
                     {"steps", r.steps}};
    out["value"] = ok ? ordered_json(print(r.value, R)) : ordered_json(nullptr);
    out["readback"] = ok ? ordered_json(print(readback(r.final.memory, r.value), R)) : ordered_json(nullptr);
    if (!ok) out["reason"] = r.reason;
    out["initial_depth"] = r.initial_depth;
    out["final_depth"] = r.final.memory.depth();
    out["high_water"] = r.high_water;
    out["shrink_events"] = r.shrink_events;
    out["memory"] = memory_json(r.final.memory, R);
    if (f.trace) out["trace"] = ordered_json::parse(trace_json(r.trace, R));
    emit(out);
  } else {
    if (f.trace)
      for (const TraceEntry& e : r.trace)
        std::cout << e.step << " [" << e.rule << "] depth " << e.config.memory.depth() << ": "
                  << print(e.config.command, R) << "\n";
    if (ok) {
      std::cout << "value: " << print(r.value, R) << "\n"
                << "readback: " << print(readback(r.final.memory, r.value), R) << "\n";
    }
    std::cout << "steps: " << r.steps << ", stack depth " << r.initial_depth << " -> "
              << r.final.memory.depth() << " (high water " << r.high_water << "), shrink events "
              << r.shrink_events << "\n";
    std::cout << "heap:\n";
    for (const Binding& b : r.final.memory.heap())
      std::cout << "  " << b.name.str() << " := " << print(b.stored, R) << "\n";
    std::cout << "stack:\n";
    for (std::size_t i = 0; i < r.final.memory.depth(); ++i) {
      std::cout << "  [" << i << "]";
      for (const Binding& b : r.final.memory.stack()[i].bindings)
        std::cout << " " << b.name.str() << " := " << print(b.stored, R) << ";";
      std::cout << "\n";
    }
  }
  if (!ok) {
    std::cerr << path << ": " << r.reason << " after " << r.steps << " steps\n";
    return kProgramError;
  }
  return kOk;
}

int cmd_diff(const std::string& path, const Flags& f) {
  SourceProgram p = load(path, f);
  checked(p, path, f);
  harness::DiffOptions o;
  o.fuel = f.fuel;
  harness::Verdict v = harness::differential_run(p.command, p.return_type, o);
  if (f.json) {
    ordered_json failures = ordered_json::array();
    for (harness::Property q : v.failures)
      failures.push_back({{"property", harness::to_string(q)}, {"detail", v.details.at(q)}});
    ordered_json out{{"ok", v.ok()},
                     {"op_steps", v.op_steps},
                     {"machine_steps", v.machine_steps},
                     {"shrink_events", v.shrink_events},
                     {"high_water", v.high_water},
                     {"final_depth", v.final_depth}};
    out["value"] = v.op_value ? ordered_json(print(v.op_value, p.return_type)) : ordered_json(nullptr);
    out["failures"] = failures;
    emit(out);
  } else if (v.ok()) {
    std::cout << "OK: V'[H] = V; shrinks=" << v.shrink_events << "\n";
  } else {
    for (harness::Property q : v.failures)
      std::cout << "FAIL " << harness::to_string(q) << ": " << v.details.at(q) << "\n";
  }
  return v.ok() ? kOk : kPropertyFailure;
}

int cmd_desugar(const std::string& path, const Flags& f) {
  SourceProgram p = load(path, f);
  if (f.json)
    emit({{"return_type", print(p.return_type)}, {"command", print(p.command, p.return_type)}});
  else
    std::cout << print_program(p);
  return kOk;
}

int cmd_erase(const std::string& path, const Flags& f) {
  SourceProgram p = load(path, f);
  checked(p, path, f);
  SourceProgram e;
  try {
    e.command = sugar::erase_modality(p.command, TypingContext(p.return_type));
  } catch (const TypeError& err) {
    throw Failure{path + ": " + err.diagnostic().render()};
  }
  e.return_type = sugar::erase_modality(p.return_type);
  if (f.json)
    emit({{"return_type", print(e.return_type)}, {"command", print(e.command, e.return_type)}});
  else
    std::cout << print_program(e);
  return kOk;
}

int cmd_suite(const std::vector<std::string>& files, const Flags& f) {
  harness::SuiteOptions o;
  o.depth = f.depth;
  o.seed = f.seed;
  o.fuel = f.fuel;
  for (const std::string& path : files) o.programs.push_back(load(path, f));
  harness::SuiteReport r = harness::property_suites(o);
  if (f.json)
    std::cout << r.json() << "\n";
  else
    std::cout << r.text();
  return r.ok() ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check and evaluate polarised modal sequent-calculus programs"};
  app.require_subcommand(1);
  Flags f;
  std::string file;
  std::vector<std::string> files;

  auto with_fuel = [&](CLI::App* sub) {
    sub->add_option("--fuel", f.fuel, "Step budget (default: $LBOX_FUEL or 100000)");
  };
  auto with_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "Program (.lbox)")->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", f.json, "Emit JSON on stdout");
    sub->add_option("--return-type", f.return_type, "Override the program's return type");
    sub->add_flag("--debug-typing", f.debug_typing,
                  "Re-check boxed values in the pruned context; type the machine memory at every step");
  };

  CLI::App* check = app.add_subcommand("check", "Type-check a program");
  with_common(check);
  CLI::App* run_ = app.add_subcommand("run", "Evaluate with the reduction semantics");
  with_common(run_);
  with_fuel(run_);
  run_->add_flag("--trace", f.trace, "Print every step");
  CLI::App* machine = app.add_subcommand("machine", "Evaluate with the heap-and-stack machine");
  with_common(machine);
  with_fuel(machine);
  machine->add_flag("--trace", f.trace, "Print every configuration");
  CLI::App* diff = app.add_subcommand("diff", "Compare reduction, machine and erasure");
  with_common(diff);
  with_fuel(diff);
  CLI::App* desugar = app.add_subcommand("desugar", "Print the core term");
  with_common(desugar);
  CLI::App* erase = app.add_subcommand("erase", "Print the box-free translation");
  with_common(erase);
  CLI::App* suite = app.add_subcommand("suite", "Run the property suites");
  suite->add_option("files", files, "Curated programs to include")->check(CLI::ExistingFile);
  suite->add_option("--depth", f.depth, "Enumeration depth (at most 6)")->check(CLI::Range(1, 6));
  suite->add_option("--seed", f.seed, "Seed for the random commands");
  suite->add_flag("--json", f.json, "Emit JSON on stdout");
  suite->add_option("--return-type", f.return_type, "Override the return type of curated programs");
  with_fuel(suite);

  try {
    f.fuel = fuel_from_env();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kProgramError;
  } catch (const Failure& e) {
    std::cerr << "lbox: " << e.message << "\n";
    return kProgramError;
  }

  try {
    if (*check) return cmd_check(file, f);
    if (*run_) return cmd_run(file, f);
    if (*machine) return cmd_machine(file, f);
    if (*diff) return cmd_diff(file, f);
    if (*desugar) return cmd_desugar(file, f);
    if (*erase) return cmd_erase(file, f);
    if (*suite) return cmd_suite(files, f);
  } catch (const Failure& e) {
    std::cerr << e.message << "\n";
    return kProgramError;
  } catch (const std::exception& e) {
    std::cerr << "lbox: internal error: " << e.what() << "\n";
    return kProgramError;
  }
  return kProgramError;
}
