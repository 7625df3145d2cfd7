#include "json.hpp"

#include "lbox/machine.hpp"
#include "lbox/printer.hpp"

namespace lbox {

namespace {

std::string pol_tag(Polarity p) {
  switch (p) {
    case Polarity::Pos: return "+";
    case Polarity::Neg: return "-";
    case Polarity::Modal: return "box";
  }
  return "?";
}

}  // namespace

std::string trace_json(const std::vector<TraceEntry>& trace, const TypeRef& return_type, int indent) {
  using nlohmann::ordered_json;
  ordered_json out = ordered_json::array();
  for (const TraceEntry& e : trace) {
    const Memory& m = e.config.memory;
    ordered_json heap = ordered_json::array();
    for (const Binding& b : m.heap())
      heap.push_back({{"name", b.name.str()}, {"pol", pol_tag(b.pol)},
                      {"value_text", print(b.stored, return_type)}});
    ordered_json stack = ordered_json::array();
    for (const Frame& f : m.stack()) {
      ordered_json frame = ordered_json::array();
      for (const Binding& b : f.bindings)
        frame.push_back({{"name", b.name.str()}, {"pol", pol_tag(b.pol)},
                         {"kind", b.covariable ? "covar" : "var"},
                         {"text", print(b.stored, return_type)}});
      stack.push_back(std::move(frame));
    }
    out.push_back({{"step", e.step},
                   {"rule", e.rule},
                   {"command_text", print(e.config.command, return_type)},
                   {"heap", std::move(heap)},
                   {"stack", std::move(stack)},
                   {"depth", m.depth()},
                   {"high_water", e.high_water}});
  }
  return out.dump(indent);
}

}  // namespace lbox
