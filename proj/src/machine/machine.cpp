#include "lbox/machine.hpp"

#include <algorithm>

#include "lbox/printer.hpp"

namespace lbox {

std::size_t Memory::binding_count() const {
  std::size_t n = heap_.size();
  for (const Frame& f : stack_) n += f.bindings.size();
  return n;
}

const Binding* Memory::find(const Name& n, bool covariable) const {
  for (const Binding& b : heap_)
    if (b.name == n && b.covariable == covariable) return &b;
  for (const Frame& f : stack_)
    for (const Binding& b : f.bindings)
      if (b.name == n && b.covariable == covariable) return &b;
  return nullptr;
}

std::optional<std::size_t> Memory::frame_of(const Name& n) const {
  for (std::size_t i = 0; i < stack_.size(); ++i)
    for (const Binding& b : stack_[i].bindings)
      if (b.name == n) return i;
  return std::nullopt;
}

Memory Memory::alloc(std::vector<Binding> bindings) const {
  Memory out = *this;
  Frame frame;
  for (Binding& b : bindings) {
    if (!b.covariable && b.pol == Polarity::Modal)
      out.heap_.push_back(std::move(b));
    else
      frame.bindings.push_back(std::move(b));
  }
  if (!frame.bindings.empty()) out.stack_.push_back(std::move(frame));
  return out;
}

Memory Memory::alloc_heap(Binding b) const {
  Memory out = *this;
  out.heap_.push_back(std::move(b));
  return out;
}

Memory Memory::restrict_to(const Name& a) const {
  if (stack_.empty()) return *this;
  auto at = frame_of(a);
  if (!at) throw MachineFault("restriction on " + a.str() + ", which is not on the stack");
  Memory out = *this;
  out.stack_.resize(*at);
  return out;
}

Memory Memory::from_parts(std::vector<Binding> heap, std::vector<Frame> stack) {
  Memory m;
  m.heap_ = std::move(heap);
  m.stack_ = std::move(stack);
  return m;
}

// ---------------------------------------------------------------------------

TermRef eval_value(const Memory& m, const TermRef& v) {
  switch (v->tag()) {
    case Tag::Var: {
      const Binding* b = m.find(v->name(), false);
      if (!b) throw MachineFault("unbound variable " + v->name().str());
      return b->pol == Polarity::Neg ? v : b->stored;
    }
    case Tag::Pair:
      return term::pair(eval_value(m, v->child(0)), eval_value(m, v->child(1)));
    case Tag::Inj1:
      return term::inj(1, eval_value(m, v->child(0)));
    case Tag::Inj2:
      return term::inj(2, eval_value(m, v->child(0)));
    case Tag::BoxV:
      return term::box(eval_value(m, v->child(0)));
    case Tag::UnitV:
    case Tag::MuNot:
    case Tag::MuWith:
    case Tag::MuPar:
    case Tag::MuNeg:
      return v;
    default:
      throw MachineFault("not a value: " + print(v));
  }
}

TermRef eval_covalue(const Memory& m, const TermRef& s) {
  switch (s->tag()) {
    case Tag::CoVar: {
      if (s->name() == toplevel_name()) return s;
      const Binding* b = m.find(s->name(), true);
      if (!b) throw MachineFault("unbound covariable " + s->name().str());
      return b->pol == Polarity::Neg ? b->stored : s;
    }
    case Tag::Proj1:
      return term::proj(1, eval_covalue(m, s->child(0)));
    case Tag::Proj2:
      return term::proj(2, eval_covalue(m, s->child(0)));
    case Tag::NotV:
      return term::not_v(eval_value(m, s->child(0)));
    case Tag::CoPair:
      return term::copair(eval_covalue(m, s->child(0)), eval_covalue(m, s->child(1)));
    case Tag::MuTildeBox:
    case Tag::MuTildeUnit:
    case Tag::MuTildePos:
    case Tag::MuTildePair:
    case Tag::MuTildeMatch:
      return s;
    default:
      throw MachineFault("not a co-value: " + print(s));
  }
}

std::string_view to_string(MachineRule r) {
  switch (r) {
    case MachineRule::EvalPos: return "Eval+";
    case MachineRule::EvalNeg: return "Eval-";
    case MachineRule::EvalBox: return "EvalBox";
    case MachineRule::EvalMuNot: return "EvalMuNot";
    case MachineRule::EvalMu: return "EvalMu";
    case MachineRule::EvalMuTilde: return "EvalMuTilde";
    case MachineRule::EvalMuTildePair: return "EvalMuTildePair";
    case MachineRule::EvalMuPar: return "EvalMuPar";
    case MachineRule::EvalMuTildeSum: return "EvalMuTildeSum";
    case MachineRule::EvalMuWith: return "EvalMuWith";
    case MachineRule::EvalMuTildeUnit: return "EvalMuTildeUnit";
    case MachineRule::EvalMuTildeBox: return "EvalMuTildeBox";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

using Kind = MachineStep::Kind;

bool is_mu(Tag t) { return t == Tag::MuPos || t == Tag::MuNeg; }
bool is_mu_tilde(Tag t) { return t == Tag::MuTildePos || t == Tag::MuTildeNeg; }

// A binder of `node` renamed to a fresh name, with the body rewritten.
struct Freshened {
  Binding binding;
  TermRef body;
};

Freshened freshen(const Binder& b, bool covariable, const TermRef& body, TermRef stored) {
  Name fresh = fresh_name(b.name);
  Substitution s;
  if (covariable)
    s.bind_covar(b.name, term::covar(fresh));
  else
    s.bind_var(b.name, term::var(fresh));
  return {Binding{fresh, b.type->polarity(), covariable, b.type, std::move(stored)},
          substitute(body, s)};
}

// Two binders sharing one body.
std::pair<std::array<Binding, 2>, TermRef> freshen2(const Term& t, bool covariable,
                                                   TermRef s0, TermRef s1) {
  std::array<TermRef, 2> stored = {std::move(s0), std::move(s1)};
  std::array<Binding, 2> out;
  Substitution s;
  for (std::size_t i = 0; i < 2; ++i) {
    const Binder& b = t.binder(i);
    Name fresh = fresh_name(b.name);
    if (covariable)
      s.bind_covar(b.name, term::covar(fresh));
    else
      s.bind_var(b.name, term::var(fresh));
    out[i] = Binding{fresh, b.type->polarity(), covariable, b.type, stored[i]};
  }
  return {out, substitute(t.body(), s)};
}

void require_heap_only(const Memory& m, const TermRef& v, const char* what) {
  FreeNames fn = free_names(*v);
  if (!fn.covars.empty())
    throw MachineFault(std::string(what) + " mentions covariable " + fn.covars.begin()->str());
  for (const Name& x : fn.vars) {
    bool on_heap = std::any_of(m.heap().begin(), m.heap().end(),
                               [&](const Binding& b) { return b.name == x && !b.covariable; });
    if (!on_heap) throw MachineFault(std::string(what) + " refers to stack variable " + x.str());
  }
}

MachineStep stepped(MachineRule r, Memory m, TermRef c) {
  return MachineStep{Kind::Stepped, MachineConfig{std::move(m), std::move(c)}, r, nullptr, {}};
}

MachineStep stuck(const std::string& why) {
  return MachineStep{Kind::Stuck, {}, std::nullopt, nullptr, why};
}

MachineStep step_unchecked(const MachineConfig& cfg, const MachineOptions& opts) {
  const Memory& m = cfg.memory;
  const TermRef& c = cfg.command;
  if (c->tag() != Tag::Cut) return stuck("not a command");
  const TermRef& l = c->left();
  const TermRef& r = c->right();
  const Polarity eps = c->cut_polarity();

  if (r->tag() == Tag::CoVar && r->name() == toplevel_name() && is_value(*l)) {
    TermRef v = eval_value(m, l);
    if (opts.debug) require_heap_only(m, v, "returned value");
    return MachineStep{Kind::Terminal, {}, std::nullopt, v, {}};
  }

  const bool left_mu = is_mu(l->tag()) && is_covalue(*r);
  const bool right_mu = is_mu_tilde(r->tag()) && is_value(*l);
  if (left_mu && !(right_mu && eps == Polarity::Neg)) {
    auto [b, body] = freshen(l->binder(0), true, l->body(), eval_covalue(m, r));
    return stepped(MachineRule::EvalMu, m.alloc({std::move(b)}), body);
  }
  if (right_mu) {
    auto [b, body] = freshen(r->binder(0), false, r->body(), eval_value(m, l));
    return stepped(MachineRule::EvalMuTilde, m.alloc({std::move(b)}), body);
  }

  switch (l->tag()) {
    case Tag::MuNot:
    case Tag::MuPar:
    case Tag::MuWith: {
      if (!is_covalue(*r)) return stuck("negative value against an environment: " + print(c));
      TermRef s = eval_covalue(m, r);
      if (l->tag() == Tag::MuNot) {
        if (s->tag() != Tag::NotV) return stuck("expected [V], got " + print(s));
        auto [b, body] = freshen(l->binder(0), false, l->body(), s->child(0));
        return stepped(MachineRule::EvalMuNot, m.alloc({std::move(b)}), body);
      }
      if (l->tag() == Tag::MuPar) {
        if (s->tag() != Tag::CoPair) return stuck("expected (S, S'), got " + print(s));
        auto [bs, body] = freshen2(*l, true, s->child(0), s->child(1));
        return stepped(MachineRule::EvalMuPar, m.alloc({bs[0], bs[1]}), body);
      }
      if (s->tag() != Tag::Proj1 && s->tag() != Tag::Proj2)
        return stuck("expected a projection, got " + print(s));
      const std::size_t i = s->tag() == Tag::Proj1 ? 0 : 1;
      auto [b, body] = freshen(l->binder(i), true, l->child(i), s->child(0));
      return stepped(MachineRule::EvalMuWith, m.alloc({std::move(b)}), body);
    }
    default:
      break;
  }

  switch (r->tag()) {
    case Tag::MuTildePair:
    case Tag::MuTildeMatch:
    case Tag::MuTildeUnit:
    case Tag::MuTildeBox: {
      if (!is_value(*l)) return stuck("expression against a pattern: " + print(c));
      TermRef v = eval_value(m, l);
      if (r->tag() == Tag::MuTildePair) {
        if (v->tag() != Tag::Pair) return stuck("expected a pair, got " + print(v));
        auto [bs, body] = freshen2(*r, false, v->child(0), v->child(1));
        return stepped(MachineRule::EvalMuTildePair, m.alloc({bs[0], bs[1]}), body);
      }
      if (r->tag() == Tag::MuTildeMatch) {
        if (v->tag() != Tag::Inj1 && v->tag() != Tag::Inj2)
          return stuck("expected an injection, got " + print(v));
        const std::size_t i = v->tag() == Tag::Inj1 ? 0 : 1;
        auto [b, body] = freshen(r->binder(i), false, r->child(i), v->child(0));
        return stepped(MachineRule::EvalMuTildeSum, m.alloc({std::move(b)}), body);
      }
      if (r->tag() == Tag::MuTildeUnit) {
        if (v->tag() != Tag::UnitV) return stuck("expected (), got " + print(v));
        return stepped(MachineRule::EvalMuTildeUnit, m, r->body());
      }
      if (v->tag() != Tag::BoxV) return stuck("expected a box, got " + print(v));
      if (opts.debug) require_heap_only(m, v->child(0), "boxed value");
      auto [b, body] = freshen(r->binder(0), false, r->body(), v->child(0));
      return stepped(MachineRule::EvalMuTildeBox, m.alloc_heap(std::move(b)), body);
    }
    default:
      break;
  }

  if (l->tag() == Tag::Var) {
    const Binding* b = m.find(l->name(), false);
    if (!b) throw MachineFault("unbound variable " + l->name().str());
    if (b->pol == Polarity::Neg)
      return stepped(MachineRule::EvalNeg, m, term::cut(eps, b->stored, r));
  }

  if (r->tag() == Tag::CoVar) {
    const Binding* b = m.find(r->name(), true);
    if (!b) throw MachineFault("unbound covariable " + r->name().str());
    if (!is_value(*l)) return stuck("expression against a covariable: " + print(c));
    if (b->pol == Polarity::Pos) return stepped(MachineRule::EvalPos, m, term::cut(eps, l, b->stored));
    if (b->pol == Polarity::Modal) {
      if (opts.debug) require_heap_only(m, l, "value returned on a modal covariable");
      TermRef target = b->stored;
      return stepped(MachineRule::EvalBox, m.restrict_to(r->name()), term::cut(eps, l, target));
    }
  }
  return stuck("no rule matches " + print(c, opts.return_type));
}

void debug_check(const MachineConfig& cfg, const MachineOptions& opts) {
  for (const Binding& b : cfg.memory.heap())
    if (b.stored) require_heap_only(cfg.memory, b.stored, ("heap value of " + b.name.str()).c_str());
  auto ctx = type_memory(cfg.memory, opts.return_type);
  if (!ctx) throw MachineFault("memory does not type: " + ctx.error().render());
  auto t = check_command(ctx.value(), cfg.command);
  if (!t) throw MachineFault("command does not type in its memory: " + t.error().render());
}

}  // namespace

MachineStep machine_step(const MachineConfig& cfg, const MachineOptions& opts) {
  try {
    MachineStep s = step_unchecked(cfg, opts);
    if (opts.debug && s.kind == Kind::Stepped) debug_check(s.next, opts);
    return s;
  } catch (const MachineFault& f) {
    return MachineStep{Kind::Fault, {}, std::nullopt, nullptr, f.what()};
  } catch (const StratificationError& e) {
    return MachineStep{Kind::Fault, {}, std::nullopt, nullptr, std::string("class mismatch: ") + e.what()};
  }
}

// ---------------------------------------------------------------------------

Checked<TypingContext> type_memory(const Memory& m, const TypeRef& return_type) {
  TypingContext ctx(return_type);
  auto fail = [](const Binding& b, const Diagnostic& d) {
    return Diagnostic{d.rule, "binding " + b.name.str() + ": " + d.message, std::nullopt};
  };
  for (const Binding& b : m.heap()) {
    if (b.covariable) return Diagnostic{"memory", "covariable " + b.name.str() + " on the heap", {}};
    auto t = check_value(ctx.modal_part(), b.stored, b.type);
    if (!t) return fail(b, t.error());
    ctx.bind_modal(b.name, b.type);
  }
  for (const Frame& f : m.stack()) {
    if (f.bindings.empty() || f.bindings.size() > 2)
      return Diagnostic{"memory", "stack frame with " + std::to_string(f.bindings.size()) + " bindings", {}};
    TypingContext before = ctx;
    for (const Binding& b : f.bindings) {
      if (b.covariable) {
        auto t = check_covalue(before, b.stored, b.type);
        if (!t) return fail(b, t.error());
        ctx.bind_covar(b.name, b.type);
      } else {
        if (b.pol == Polarity::Modal)
          return Diagnostic{"memory", "modal variable " + b.name.str() + " on the stack", {}};
        auto t = check_value(before, b.stored, b.type);
        if (!t) return fail(b, t.error());
        ctx.bind_var(b.name, b.type);
      }
    }
  }
  return ctx;
}

Substitution memory_substitution(const Memory& m) {
  Substitution sigma;
  auto add = [&](const Binding& b) {
    TermRef r = substitute(b.stored, sigma);
    if (b.covariable)
      sigma.bind_covar(b.name, std::move(r));
    else
      sigma.bind_var(b.name, std::move(r));
  };
  for (const Binding& b : m.heap()) add(b);
  for (const Frame& f : m.stack())
    for (const Binding& b : f.bindings) add(b);
  return sigma;
}

TermRef readback(const Memory& m, const TermRef& node) {
  return substitute(node, memory_substitution(m));
}

// ---------------------------------------------------------------------------

MachineRun machine_run(const TermRef& c, const RunOptions& opts, const MachineObserver& observe) {
  return machine_run(MachineConfig{Memory{}, c}, opts, observe);
}

MachineRun machine_run(const MachineConfig& start, const RunOptions& opts,
                       const MachineObserver& observe) {
  MachineRun out;
  out.initial_depth = start.memory.depth();
  out.high_water = out.initial_depth;
  MachineConfig cur = start;
  if (opts.record_trace) out.trace.push_back(TraceEntry{0, "start", cur, out.high_water});
  bool in_shrink = false;
  for (;;) {
    MachineStep s = machine_step(cur, opts.machine);
    if (s.kind != Kind::Stepped) {
      out.outcome = s.kind;
      out.reason = s.reason;
      out.value = s.value;
      out.final = std::move(cur);
      return out;
    }
    if (out.steps == opts.fuel) {
      out.outcome = Kind::Stuck;
      out.fuel_exhausted = true;
      out.reason = "fuel exhausted";
      out.final = std::move(cur);
      return out;
    }
    if (observe) observe(cur, s);
    ++out.steps;
    const MachineRule rule = *s.rule;
    out.rules.push_back(rule);
    const bool shrink = rule == MachineRule::EvalBox;
    if (shrink && !in_shrink) ++out.shrink_events;
    in_shrink = shrink;
    cur = std::move(s.next);
    out.high_water = std::max(out.high_water, cur.memory.depth());
    if (opts.record_trace)
      out.trace.push_back(TraceEntry{out.steps, std::string(to_string(rule)), cur, out.high_water});
  }
}

}  // namespace lbox
