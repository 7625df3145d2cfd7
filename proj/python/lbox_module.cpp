// Python bindings. Programs travel as .lbox source text; results come back as
// plain dicts and strings. Syntax and type errors raise ValueError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lbox/harness.hpp"
#include "lbox/machine.hpp"
#include "lbox/opsem.hpp"
#include "lbox/parser.hpp"
#include "lbox/printer.hpp"
#include "lbox/sugar.hpp"
#include "lbox/typing.hpp"

namespace py = pybind11;
using namespace lbox;

namespace {

SourceProgram parse_or_raise(const std::string& text) {
  auto p = parse_program(text);
  if (!p) throw py::value_error(p.error().render());
  return p.value();
}

SourceProgram checked_program(const std::string& text) {
  SourceProgram p = parse_or_raise(text);
  auto t = check_command(TypingContext(p.return_type), p.command);
  if (!t) throw py::value_error(t.error().render());
  return p;
}

TypeRef type_or_raise(const std::string& text) {
  auto t = parse_type(text);
  if (!t) throw py::value_error(t.error().render());
  return t.value();
}

py::dict check(const std::string& text) {
  SourceProgram p = parse_or_raise(text);
  auto t = check_command(TypingContext(p.return_type), p.command);
  py::dict out;
  out["ok"] = t.ok();
  out["return_type"] = print(p.return_type);
  if (t)
    out["cut_type"] = print(t.value());
  else
    out["error"] = t.error().render();
  return out;
}

py::dict run_program(const std::string& text, std::size_t fuel) {
  SourceProgram p = checked_program(text);
  std::vector<std::string> rules;
  RunResult r = run(p.command, fuel, [&](std::size_t, const TermRef&, const StepResult& s) {
    rules.emplace_back(to_string(*s.rule));
  });
  py::dict out;
  out["outcome"] = r.final.terminal() ? "terminal" : r.fuel_exhausted ? "fuel" : "stuck";
  out["steps"] = r.steps;
  out["rules"] = rules;
  out["value"] = r.final.terminal() ? py::object(py::str(print(r.final.term, p.return_type))) : py::none();
  return out;
}

py::dict machine_program(const std::string& text, std::size_t fuel, bool trace) {
  SourceProgram p = checked_program(text);
  RunOptions o;
  o.machine.return_type = p.return_type;
  o.fuel = fuel;
  o.record_trace = trace;
  MachineRun r = machine_run(p.command, o);
  std::vector<std::string> rules;
  for (MachineRule m : r.rules) rules.emplace_back(to_string(m));
  py::dict out;
  out["outcome"] = r.terminal() ? "terminal" : r.fuel_exhausted ? "fuel" : "stuck";
  out["steps"] = r.steps;
  out["rules"] = rules;
  out["value"] = r.terminal() ? py::object(py::str(print(r.value, p.return_type))) : py::none();
  out["readback"] = r.terminal()
                        ? py::object(py::str(print(readback(r.final.memory, r.value), p.return_type)))
                        : py::none();
  out["initial_depth"] = r.initial_depth;
  out["final_depth"] = r.final.memory.depth();
  out["high_water"] = r.high_water;
  out["shrink_events"] = r.shrink_events;
  if (trace) out["trace_json"] = trace_json(r.trace, p.return_type);
  return out;
}

py::dict diff_program(const std::string& text, std::size_t fuel) {
  SourceProgram p = checked_program(text);
  harness::DiffOptions o;
  o.fuel = fuel;
  harness::Verdict v = harness::differential_run(p.command, p.return_type, o);
  py::dict failures;
  for (harness::Property q : v.failures) failures[py::str(std::string(harness::to_string(q)))] = v.details.at(q);
  py::dict out;
  out["ok"] = v.ok();
  out["failures"] = failures;
  out["shrink_events"] = v.shrink_events;
  out["op_steps"] = v.op_steps;
  out["machine_steps"] = v.machine_steps;
  out["value"] = v.op_value ? py::object(py::str(print(v.op_value, p.return_type))) : py::none();
  return out;
}

std::string desugar(const std::string& text) { return print_program(parse_or_raise(text)); }

std::string erase(const std::string& text) {
  SourceProgram p = checked_program(text);
  SourceProgram e{sugar::erase_modality(p.return_type),
                  sugar::erase_modality(p.command, TypingContext(p.return_type))};
  return print_program(e);
}

std::vector<std::string> enumerate(std::size_t depth, const std::string& return_type) {
  if (depth > 4) throw py::value_error("depth above 4 is too large to return as a list");
  TypeRef R = type_or_raise(return_type);
  std::vector<std::string> out;
  for (const TermRef& c : harness::enumerate_commands(depth, R)) out.push_back(print(c, R));
  return out;
}

std::string suite_json(std::size_t depth, std::uint64_t seed, std::size_t random_samples) {
  harness::SuiteOptions o;
  o.depth = depth;
  o.seed = seed;
  o.random_samples = random_samples;
  return harness::property_suites(o).json();
}

}  // namespace

PYBIND11_MODULE(lbox, m) {
  m.doc() = "Checker and evaluators for the polarised modal sequent calculus";
  m.attr("DEFAULT_FUEL") = default_fuel;
  m.def("check", &check, py::arg("source"));
  m.def("run", &run_program, py::arg("source"), py::arg("fuel") = default_fuel);
  m.def("machine", &machine_program, py::arg("source"), py::arg("fuel") = default_fuel,
        py::arg("trace") = false);
  m.def("diff", &diff_program, py::arg("source"), py::arg("fuel") = default_fuel);
  m.def("desugar", &desugar, py::arg("source"));
  m.def("erase", &erase, py::arg("source"));
  m.def("enumerate", &enumerate, py::arg("depth"), py::arg("return_type") = "1");
  m.def("suite_json", &suite_json, py::arg("depth") = 4, py::arg("seed") = 1,
        py::arg("random_samples") = 1000);
}
