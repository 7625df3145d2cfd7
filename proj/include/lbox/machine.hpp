#pragma once

// Explicit-memory evaluation: a heap for modal data, a stack of frames for
// everything else, and restriction of the stack on modal returns.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbox/core.hpp"
#include "lbox/diagnostic.hpp"
#include "lbox/typing.hpp"

namespace lbox {

/// x := V or a := S. `stored` is already evaluated against earlier memory.
struct Binding {
  Name name;
  Polarity pol;
  bool covariable = false;
  TypeRef type;
  TermRef stored;
};

/// One or two bindings allocated together.
struct Frame {
  std::vector<Binding> bindings;
};

/// Raised on unbound names, class mismatches, restriction of an unknown
/// covariable, and failed debug assertions.
class MachineFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Memory {
 public:
  const std::vector<Binding>& heap() const { return heap_; }
  const std::vector<Frame>& stack() const { return stack_; }
  std::size_t depth() const { return stack_.size(); }
  std::size_t binding_count() const;

  /// Heap first, then the stack; nullptr when absent.
  const Binding* find(const Name& n, bool covariable) const;
  /// Index of the frame holding `n`, if it is on the stack.
  std::optional<std::size_t> frame_of(const Name& n) const;

  /// Modal variables go to the heap; every other binding goes into one new
  /// stack frame. Names must be fresh.
  Memory alloc(std::vector<Binding> bindings) const;
  /// Heap-only allocation, used for the payload of a box whatever its polarity.
  Memory alloc_heap(Binding b) const;
  /// Drop the frame holding `a` and every later frame. An empty stack is
  /// returned unchanged; otherwise an absent `a` is a fault.
  Memory restrict_to(const Name& a) const;

  /// Raw construction, for tests and tools.
  static Memory from_parts(std::vector<Binding> heap, std::vector<Frame> stack);

 private:
  std::vector<Binding> heap_;
  std::vector<Frame> stack_;
};

/// Positive and modal variables are dereferenced, negative ones kept; binder
/// forms are returned as they are.
TermRef eval_value(const Memory& m, const TermRef& v);
/// Negative covariables are dereferenced, positive and modal ones kept.
TermRef eval_covalue(const Memory& m, const TermRef& s);

enum class MachineRule : std::uint8_t {
  EvalPos,
  EvalNeg,
  EvalBox,
  EvalMuNot,
  EvalMu,
  EvalMuTilde,
  EvalMuTildePair,
  EvalMuPar,
  EvalMuTildeSum,
  EvalMuWith,
  EvalMuTildeUnit,
  EvalMuTildeBox,
};

std::string_view to_string(MachineRule r);

struct MachineConfig {
  Memory memory;
  TermRef command;
};

struct MachineStep {
  enum class Kind : std::uint8_t { Stepped, Terminal, Stuck, Fault };
  Kind kind;
  MachineConfig next;  // Stepped only
  std::optional<MachineRule> rule;
  TermRef value;  // Terminal: the evaluated returned value
  std::string reason;
};

struct MachineOptions {
  TypeRef return_type;  // needed for debug checks and printing
  bool debug = false;   // type the memory and the command after every step
};

MachineStep machine_step(const MachineConfig& cfg, const MachineOptions& opts);

/// Σ rebuilt from a memory, as a typing context: heap in the modal zone,
/// stack variables in the ordinary zone, stack covariables and tp:R in Δ.
Checked<TypingContext> type_memory(const Memory& m, const TypeRef& return_type);

/// The memory read as one substitution, applied to `node`.
TermRef readback(const Memory& m, const TermRef& node);
Substitution memory_substitution(const Memory& m);

struct TraceEntry {
  std::size_t step;
  std::string rule;  // "start" for the initial configuration
  MachineConfig config;
  std::size_t high_water;
};

struct MachineRun {
  MachineStep::Kind outcome = MachineStep::Kind::Stuck;
  bool fuel_exhausted = false;
  std::string reason;
  std::size_t steps = 0;
  MachineConfig final;
  TermRef value;  // evaluated result on Terminal
  std::size_t initial_depth = 0;
  std::size_t high_water = 0;
  /// A shrink event is a maximal run of consecutive EvalBox steps.
  std::size_t shrink_events = 0;
  std::vector<MachineRule> rules;
  std::vector<TraceEntry> trace;  // filled when requested

  bool terminal() const { return outcome == MachineStep::Kind::Terminal; }
};

using MachineObserver =
    std::function<void(const MachineConfig& before, const MachineStep& step)>;

struct RunOptions {
  MachineOptions machine;
  std::size_t fuel = 100000;
  bool record_trace = false;
};

MachineRun machine_run(const TermRef& c, const RunOptions& opts,
                       const MachineObserver& observe = {});
MachineRun machine_run(const MachineConfig& start, const RunOptions& opts,
                       const MachineObserver& observe = {});

/// The trace as a JSON array of
/// {step, rule, command_text, heap, stack, depth, high_water}.
std::string trace_json(const std::vector<TraceEntry>& trace, const TypeRef& return_type,
                       int indent = 2);

}  // namespace lbox
