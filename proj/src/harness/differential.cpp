#include <algorithm>

#include "lbox/harness.hpp"
#include "lbox/opsem.hpp"
#include "lbox/printer.hpp"
#include "lbox/sugar.hpp"

namespace lbox::harness {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::Typing: return "typing";
    case Property::Determinism: return "determinism";
    case Property::SubjectReduction: return "subject-reduction";
    case Property::Evaluation: return "evaluation";
    case Property::MachineAgrees: return "machine-agrees";
    case Property::Simulation: return "simulation";
    case Property::MemoryTyping: return "memory-typing";
    case Property::ErasureTyping: return "erasure-typing";
    case Property::ErasureResult: return "erasure-result";
    case Property::ErasureSimulation: return "erasure-simulation";
  }
  return "?";
}

bool Verdict::failed(Property p) const {
  return std::find(failures.begin(), failures.end(), p) != failures.end();
}

namespace {

class Judge {
 public:
  Judge(Verdict& v, const TypeRef& R) : v_(v), R_(R) {}

  /// Records the first failure of each property.
  void fail(Property p, std::string why) {
    if (v_.failed(p)) return;
    v_.failures.push_back(p);
    v_.details[p] = std::move(why);
  }

  std::string show(const TermRef& t) const { return print(t, R_); }

 private:
  Verdict& v_;
  const TypeRef& R_;
};

void check_machine(const TermRef& c, const TypeRef& R, const DiffOptions& opts,
                   const TermRef& op_value, Verdict& v, Judge& j) {
  std::size_t stutter = 0;
  std::size_t budget = 0;
  auto memory_ok = [&](const MachineConfig& cfg) {
    auto mctx = type_memory(cfg.memory, R);
    if (!mctx) {
      j.fail(Property::MemoryTyping, "memory: " + mctx.error().render());
      return;
    }
    auto ct = check_command(mctx.value(), cfg.command);
    if (!ct) j.fail(Property::MemoryTyping, "command " + j.show(cfg.command) + ": " + ct.error().render());
  };
  memory_ok(MachineConfig{Memory{}, c});

  RunOptions ro;
  ro.machine.return_type = R;
  ro.fuel = opts.fuel;
  MachineRun run_ = machine_run(c, ro, [&](const MachineConfig& before, const MachineStep& s) {
    memory_ok(s.next);
    TermRef a = readback(before.memory, before.command);
    TermRef b = readback(s.next.memory, s.next.command);
    if (alpha_equal(a, b)) {
      // A stutter run is bounded by the memory size when it starts.
      if (stutter++ == 0) budget = before.memory.binding_count();
      if (stutter > budget)
        j.fail(Property::Simulation, "stutter of " + std::to_string(stutter) + " steps with " +
                                         std::to_string(budget) + " bindings at " + j.show(a));
      return;
    }
    stutter = 0;
    StepResult one = step(a);
    if (!one.stepped() || !alpha_equal(one.term, b))
      j.fail(Property::Simulation, "machine step " + std::string(to_string(*s.rule)) +
                                       " reads back as " + j.show(b) + ", not one step from " +
                                       j.show(a));
  });
  v.machine_steps = run_.steps;
  v.shrink_events = run_.shrink_events;
  v.high_water = run_.high_water;
  v.final_depth = run_.final.memory.depth();
  if (!run_.terminal()) {
    j.fail(Property::MachineAgrees, "machine did not terminate: " + run_.reason);
    return;
  }
  v.machine_value = readback(run_.final.memory, run_.value);
  if (op_value && !alpha_equal(v.machine_value, op_value))
    j.fail(Property::MachineAgrees,
           "machine " + j.show(v.machine_value) + " vs reduction " + j.show(op_value));
}

void check_erasure(const std::vector<TermRef>& reducts, const TypeRef& R, const DiffOptions& opts,
                   const TermRef& op_value, Judge& j) {
  const TypingContext ctx(R);
  const TypingContext ectx = sugar::erase_modality(ctx);
  std::vector<TermRef> erased;
  try {
    for (const TermRef& c : reducts) erased.push_back(sugar::erase_modality(c, ctx));
  } catch (const TypeError& e) {
    j.fail(Property::ErasureTyping, std::string("erasure rejected: ") + e.what());
    return;
  }
  if (auto t = check_command(ectx, erased.front()); !t) {
    j.fail(Property::ErasureTyping, "erased " + j.show(erased.front()) + ": " + t.error().render());
    return;
  }
  for (std::size_t i = 0; i + 1 < erased.size(); ++i) {
    TermRef cur = erased[i];
    std::size_t n = 0;
    while (!alpha_equal(cur, erased[i + 1]) && n < opts.erasure_step_bound) {
      StepResult s = step(cur);
      if (!s.stepped()) break;
      cur = s.term;
      ++n;
    }
    if (n == 0 || !alpha_equal(cur, erased[i + 1])) {
      j.fail(Property::ErasureSimulation,
             "step " + std::to_string(i) + ": " + j.show(erased[i]) + " does not reach " +
                 j.show(erased[i + 1]) + " within " + std::to_string(opts.erasure_step_bound));
      break;
    }
  }
  RunResult er = run(erased.front(), opts.fuel);
  if (!er.final.terminal()) {
    j.fail(Property::ErasureResult, "erased command does not terminate: " + er.final.reason);
    return;
  }
  if (!op_value) return;
  TermRef expect = sugar::erase_modality(op_value, ctx);
  if (!alpha_equal(er.final.term, expect))
    j.fail(Property::ErasureResult,
           "erased result " + j.show(er.final.term) + " vs erased value " + j.show(expect));
}

}  // namespace

Verdict differential_run(const TermRef& c, const TypeRef& R, const DiffOptions& opts) {
  Verdict v;
  Judge j(v, R);
  const TypingContext ctx(R);
  if (auto t = check_command(ctx, c); !t) {
    j.fail(Property::Typing, t.error().render());
    return v;
  }

  std::vector<TermRef> reducts{c};
  auto overlap = [&](const TermRef& cmd) {
    if (matching_rules(cmd).size() > 1) j.fail(Property::Determinism, "two rules match " + j.show(cmd));
  };
  RunResult op = run(c, opts.fuel, [&](std::size_t, const TermRef& before, const StepResult& s) {
    overlap(before);
    reducts.push_back(s.term);
    if (auto t = check_command(ctx, s.term); !t)
      j.fail(Property::SubjectReduction, j.show(before) + " -> " + j.show(s.term) + ": " +
                                             t.error().render());
  });
  overlap(reducts.back());
  v.op_steps = op.steps;
  if (!op.final.terminal()) {
    j.fail(Property::Evaluation, op.fuel_exhausted ? "fuel exhausted" : "stuck: " + op.final.reason);
  } else {
    v.op_value = op.final.term;
    if (!free_names(*v.op_value).empty())
      j.fail(Property::Evaluation, "open result " + j.show(v.op_value));
    else if (auto m = modal_restriction(ctx, v.op_value); !m)
      j.fail(Property::Evaluation, "result " + j.show(v.op_value) + ": " + m.error().render());
  }

  check_machine(c, R, opts, v.op_value, v, j);

  if (opts.erasure && op.final.terminal()) {
    v.erasure_checked = true;
    check_erasure(reducts, R, opts, v.op_value, j);
  }
  return v;
}

}  // namespace lbox::harness
