#pragma once

// Toplevel small-step reduction and a fuel-bounded driver.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lbox/core.hpp"

namespace lbox {

/// The nine reduction rules, numbered in the conventional order.
enum class OpRule : std::uint8_t {
  Mu = 1,    // < mu a.c | S >            -> c[S/a]
  MuTilde,   // < V | mu~x.c >            -> c[V/x]
  Unit,      // < () | mu~().c >          -> c
  Pair,      // < (V,W) | mu~(x,y).c >    -> c[V/x, W/y]
  Match,     // < inj_i V | mu~{..} >     -> c_i[V/x_i]
  Box,       // < box V | mu~box x.c >    -> c[V/x]
  Not,       // < mu[x].c | [V] >         -> c[V/x]
  Par,       // < mu(a,b).c | (S,S') >    -> c[S/a, S'/b]
  With,      // < mu{..} | proj_i S >     -> c_i[S/a_i]
};

std::string_view to_string(OpRule r);

struct StepResult {
  enum class Kind : std::uint8_t { Stepped, Terminal, Stuck };
  Kind kind;
  /// Stepped: the reduct. Terminal: the returned value. Stuck: the command.
  TermRef term;
  std::optional<OpRule> rule;
  std::string reason;

  bool stepped() const { return kind == Kind::Stepped; }
  bool terminal() const { return kind == Kind::Terminal; }
  bool stuck() const { return kind == Kind::Stuck; }
};

/// Every rule whose left-hand side matches `c`. Well-typed commands match at
/// most one; ill-polarised ones may match both Mu and MuTilde.
std::vector<OpRule> matching_rules(const TermRef& c);

/// One step at the toplevel. Terminal when `c` is < V | tp > with V closed.
/// When two rules match, the cut polarity decides: Mu for a positive or modal
/// cut, MuTilde for a negative one.
StepResult step(const TermRef& c);

struct RunResult {
  std::size_t steps = 0;
  StepResult final;
  bool fuel_exhausted = false;
};

using StepObserver = std::function<void(std::size_t index, const TermRef& before,
                                        const StepResult& result)>;

/// Iterate `step` until Terminal, Stuck, or `fuel` steps have been taken.
RunResult run(const TermRef& c, std::size_t fuel, const StepObserver& observe = {});

constexpr std::size_t default_fuel = 100000;

}  // namespace lbox
