#pragma once

// Executable metatheory: exhaustive enumeration of small well-typed
// commands, differential running of the three evaluators, property suites.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lbox/core.hpp"
#include "lbox/machine.hpp"
#include "lbox/parser.hpp"
#include "lbox/typing.hpp"

namespace lbox::harness {

/// {1, 1+1, box 1, ~1, 1&1, ~1@1, 1*1}
const std::vector<TypeRef>& type_universe();
/// {1, 1+1, box 1}
const std::vector<TypeRef>& return_types();

/// Height of the syntax tree: names and () have depth 0, every other node
/// is one more than its deepest child.
std::size_t term_depth(const Term& t);

/// Every command of depth <= `depth` that checks against tp : R with all
/// binder and cut types drawn from the universe, up to renaming. Ordered by
/// depth, then size.
std::vector<TermRef> enumerate_commands(std::size_t depth, const TypeRef& R);

/// Property identifiers, in report order.
enum class Property : std::uint8_t {
  Typing,           // the input checks
  Determinism,      // at most one reduction rule matches each step
  SubjectReduction, // each reduct checks in the same context
  Evaluation,       // Terminal within fuel, closed, modal-restriction clean
  MachineAgrees,    // readback of the machine result equals the reduction result
  Simulation,       // readback advances by at most one step; stutter bounded
  MemoryTyping,     // memory and command type after every machine step
  ErasureTyping,    // the erased command checks in the erased context
  ErasureResult,    // the erased command evaluates to the erased result
  ErasureSimulation,// each step maps to 1..8 steps of the erased command
};
constexpr std::size_t property_count = 10;
std::string_view to_string(Property p);

struct DiffOptions {
  std::size_t fuel = 100000;
  bool erasure = true;
  std::size_t erasure_step_bound = 8;
};

/// Outcome of running one command through every evaluator.
struct Verdict {
  std::vector<Property> failures;
  std::map<Property, std::string> details;
  TermRef op_value;
  TermRef machine_value;  // read back
  std::size_t op_steps = 0;
  std::size_t machine_steps = 0;
  std::size_t shrink_events = 0;
  std::size_t high_water = 0;
  std::size_t final_depth = 0;
  bool erasure_checked = false;

  bool ok() const { return failures.empty(); }
  bool failed(Property p) const;
};

Verdict differential_run(const TermRef& c, const TypeRef& R, const DiffOptions& opts = {});

/// Smallest-subterm-first minimisation: repeatedly replace a subterm by a
/// shallower well-typed one of the same type while `still_fails` holds.
TermRef shrink(const TermRef& c, const TypeRef& R,
               const std::function<bool(const TermRef&)>& still_fails);

struct PropertyTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  TermRef witness;  // minimised
  TypeRef witness_return_type;
  std::string detail;
};

struct SuiteOptions {
  std::size_t depth = 4;
  std::size_t erasure_depth = 3;
  std::uint64_t seed = 1;
  std::size_t fuel = 100000;
  /// Random well-typed commands deeper than the enumeration, per return type.
  std::size_t random_samples = 1000;
  std::size_t random_depth = 8;
  /// Curated programs run alongside the enumeration.
  std::vector<SourceProgram> programs;
};

struct SuiteReport {
  SuiteOptions options;
  std::size_t random_commands = 0;
  std::size_t curated_programs = 0;
  std::map<std::string, std::vector<std::size_t>> corpus_sizes;  // per R, per depth
  std::map<Property, PropertyTally> tallies;
  std::size_t commands = 0;
  double seconds = 0;

  bool ok() const;
  std::string text() const;
  std::string json(int indent = 2) const;
};

SuiteReport property_suites(const SuiteOptions& opts);

/// A random well-typed closed command of depth <= `depth`, drawn from the
/// same grammar as the enumeration.
TermRef random_command(std::uint64_t seed, std::size_t depth, const TypeRef& R);

}  // namespace lbox::harness
