// Acceptance criteria 1-9: one PASS/FAIL line each, thresholds pinned below.
//
// Exit status is 0 when the set of failing criteria equals the set passed
// with --expect-red (empty by default), so a known red stays visible in the
// output without masking a new one, and a red that turns green is reported.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lbox/harness.hpp"
#include "lbox/machine.hpp"
#include "lbox/opsem.hpp"
#include "lbox/parser.hpp"
#include "lbox/printer.hpp"

namespace {

using namespace lbox;
using harness::Property;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr double kRuleStepsSeconds = 1.0;
constexpr double kSweepSeconds = 60.0;
constexpr std::size_t kCorpusDepth = 4;
constexpr std::size_t kErasureDepth = 3;
constexpr std::size_t kFuel = 100000;
constexpr std::size_t kModalCallShrinks = 2;
constexpr std::size_t kCounterexampleFrames = 3;
constexpr std::uint64_t kRandomSeed = 1;
constexpr std::size_t kRandomPerType = 1000;
constexpr std::size_t kRandomDepth = 8;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SourceProgram load(const std::string& name) {
  auto p = parse_program(read_file(std::string(LBOX_PROGRAMS_DIR) + "/" + name));
  if (!p) throw std::runtime_error(name + ": " + p.error().render());
  return p.value();
}

TermRef parse(const char* text) {
  auto c = parse_command(text, Type::unit());
  if (!c) throw std::runtime_error(std::string(text) + ": " + c.error().render());
  return c.value();
}

struct Report {
  std::set<int> red;
  void line(int n, const char* name, bool pass, const std::string& detail) {
    if (!pass) red.insert(n);
    std::cout << (pass ? "PASS " : "FAIL ") << n << " " << name << ": " << detail << std::endl;
  }
};

// --- 1 ---------------------------------------------------------------------

void rule_exactness(Report& rep) {
  struct Golden {
    const char* redex;
    OpRule rule;
    const char* reduct;  // substituted by hand
  };
  const Golden cases[] = {
      {"< mu a:1.< () | a > | mu~x:1.< x | tp > >", OpRule::Mu, "< () | mu~x:1.< x | tp > >"},
      {"< () | mu~x:1.< (x, x) |^ tp > >", OpRule::MuTilde, "< ((), ()) |^ tp >"},
      {"< () | mu~().< () | tp > >", OpRule::Unit, "< () | tp >"},
      {"< (inl (), ()) | mu~(x:1 + 1, y:1).< (y, x) |^ tp > >", OpRule::Pair, "< ((), inl ()) |^ tp >"},
      {"< inr () | mu~{inl x:1 -> < inl x |^ tp > | inr y:1 -> < inr y |^ tp >} >", OpRule::Match,
       "< inr () |^ tp >"},
      {"< box () | mu~box x:1.< box x | mu~box z:1.< z | tp > > >", OpRule::Box,
       "< box () | mu~box z:1.< z | tp > >"},
      {"< mu[x:1].< x | tp > | [()] >", OpRule::Not, "< () | tp >"},
      {"< mu(a:~1, b:1).< mu[x:1].< x | b > | a > | ([()], tp) >", OpRule::Par,
       "< mu[x:1].< x | tp > | [()] >"},
      {"< mu{fst a:1 -> < () | a > | snd b:1 + 1 -> < inl () | b >} | snd tp >", OpRule::With,
       "< inl () | tp >"},
  };
  std::vector<std::pair<TermRef, TermRef>> parsed;
  for (const Golden& g : cases) parsed.emplace_back(parse(g.redex), parse(g.reduct));

  const auto t0 = Clock::now();
  std::size_t exact = 0;
  std::string first_miss;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    StepResult r = step(parsed[i].first);
    const bool ok = r.stepped() && r.rule == cases[i].rule && alpha_equal(r.term, parsed[i].second);
    if (ok)
      ++exact;
    else if (first_miss.empty())
      first_miss = std::string("; rule ") + std::string(to_string(cases[i].rule)) + " gave " +
                   (r.stepped() ? print(r.term) : r.reason);
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << exact << "/9 golden steps alpha-equal to the hand-substituted reduct in " << secs * 1e3
    << " ms (limit " << kRuleStepsSeconds << " s)" << first_miss;
  rep.line(1, "rule-exactness", exact == 9 && secs < kRuleStepsSeconds, d.str());
}

// --- 2-6, 8, 9 ---------------------------------------------------------------

struct Sweep {
  std::size_t commands = 0;
  std::size_t enumerated = 0;
  std::size_t curated = 0;
  std::size_t erasure_commands = 0;
  std::map<Property, std::size_t> violations;
  std::map<Property, std::string> example;
  double seconds = 0;
  std::string sizes;
};

Sweep corpus_sweep() {
  Sweep s;
  auto account = [&](const TermRef& c, const TypeRef& R, bool erasure) {
    harness::DiffOptions o;
    o.fuel = kFuel;
    o.erasure = erasure;
    harness::Verdict v = harness::differential_run(c, R, o);
    ++s.commands;
    if (v.erasure_checked) ++s.erasure_commands;
    for (Property p : v.failures)
      if (s.violations[p]++ == 0) s.example[p] = print(c, R) + ": " + v.details[p];
  };

  // The timed sweep is the enumerated corpus alone.
  const auto t0 = Clock::now();
  for (const TypeRef& R : harness::return_types()) {
    std::vector<TermRef> corpus = harness::enumerate_commands(kCorpusDepth, R);
    s.sizes += (s.sizes.empty() ? "" : ", ") + std::string("R = ") + print(R) + ": " +
               std::to_string(corpus.size());
    for (const TermRef& c : corpus) account(c, R, harness::term_depth(*c) <= kErasureDepth);
  }
  s.seconds = seconds_since(t0);
  s.enumerated = s.commands;

  // Extra coverage beyond the enumeration, same thresholds.
  std::mt19937_64 seeds(kRandomSeed);
  for (const TypeRef& R : harness::return_types())
    for (std::size_t i = 0; i < kRandomPerType; ++i)
      if (TermRef c = harness::random_command(seeds(), kRandomDepth, R)) account(c, R, false);
  for (const auto& e : std::filesystem::directory_iterator(LBOX_PROGRAMS_DIR))
    if (e.path().extension() == ".lbox") {
      SourceProgram p = load(e.path().filename().string());
      account(p.command, p.return_type, false);
      ++s.curated;
    }
  return s;
}

std::string tally(const Sweep& s, std::initializer_list<Property> ps, std::size_t checked) {
  std::ostringstream d;
  std::size_t total = 0;
  for (Property p : ps) total += s.violations.count(p) ? s.violations.at(p) : 0;
  d << total << " violations over " << checked << " commands";
  for (Property p : ps)
    if (s.example.count(p)) d << "; e.g. " << s.example.at(p);
  return d.str();
}

bool clean(const Sweep& s, std::initializer_list<Property> ps) {
  for (Property p : ps)
    if (s.violations.count(p) && s.violations.at(p) != 0) return false;
  return true;
}

// --- 7 ---------------------------------------------------------------------

nlohmann::json golden(const std::string& name) {
  return nlohmann::json::parse(read_file(std::string(LBOX_GOLDEN_DIR) + "/" + name));
}

struct Traced {
  MachineRun run;
  std::vector<std::string> rules;
  std::vector<std::size_t> depths;
};

Traced traced_run(const SourceProgram& p) {
  RunOptions o;
  o.machine.return_type = p.return_type;
  o.machine.debug = true;
  o.record_trace = true;
  o.fuel = kFuel;
  Traced t{machine_run(p.command, o), {}, {}};
  for (const TraceEntry& e : t.run.trace) {
    if (e.step != 0) t.rules.push_back(e.rule);
    t.depths.push_back(e.config.memory.depth());
  }
  return t;
}

bool matches_golden(const Traced& t, const nlohmann::json& g) {
  return t.rules == g.at("rules").get<std::vector<std::string>>() &&
         t.depths == g.at("depths").get<std::vector<std::size_t>>() &&
         t.run.shrink_events == g.at("shrink_events").get<std::size_t>() && t.run.terminal() &&
         print(t.run.value) == g.at("value").get<std::string>();
}

void stackability(Report& rep) {
  std::ostringstream d;
  bool pass = true;

  const Traced call = traced_run(load("modal_call.lbox"));
  const std::size_t call_final = call.run.final.memory.depth();
  const bool call_ok = call.run.terminal() && call.run.shrink_events == kModalCallShrinks &&
                       call_final == call.run.initial_depth;
  pass &= call_ok;
  d << "worked example: " << call.run.shrink_events << " shrink events (want " << kModalCallShrinks
    << "), depth " << call.run.initial_depth << " -> " << call_final;

  // Locate the first configuration < y | alpha >.
  const Traced cex = traced_run(load("counterexample.lbox"));
  std::optional<std::size_t> at;
  std::size_t shrinks_before = 0;
  for (std::size_t i = 0; i < cex.run.trace.size() && !at; ++i) {
    const TermRef& c = cex.run.trace[i].config.command;
    if (c->left()->tag() == Tag::Var && c->left()->name().base == "y" &&
        c->right()->tag() == Tag::CoVar && c->right()->name().base == "alpha")
      at = i;
    else if (i + 1 < cex.run.trace.size() && cex.run.trace[i + 1].rule == "EvalBox")
      ++shrinks_before;
  }
  if (!at) {
    pass = false;
    d << "; counterexample never reaches < y | alpha >";
  } else {
    const std::size_t frames = cex.depths[*at] - cex.run.trace.front().config.memory.depth();
    const bool frames_ok = frames == kCounterexampleFrames;
    pass &= frames_ok && shrinks_before == 0;
    d << "; counterexample at < y | alpha >: " << frames << " frames above baseline (want "
      << kCounterexampleFrames << "), " << shrinks_before << " shrink events before it";
    if (!frames_ok) {
      d << " [frames:";
      for (const Frame& f : cex.run.trace[*at].config.memory.stack()) {
        d << " (";
        for (std::size_t k = 0; k < f.bindings.size(); ++k)
          d << (k ? ", " : "") << f.bindings[k].name.base;
        d << ")";
      }
      d << "; the call binder expands to mu-par then mu-not, which allocate separate frames]";
    }
  }

  const bool golden_ok = matches_golden(call, golden("modal_call.json")) &&
                         matches_golden(cex, golden("counterexample.json"));
  pass &= golden_ok;
  d << "; golden trace labels " << (golden_ok ? "match" : "differ");
  rep.line(7, "stackability", pass, d.str());
}

// --- 9 (hand-built part) -----------------------------------------------------

bool forward_reference_rejected() {
  const TypeRef one = Type::unit();
  const TypeRef neg = Type::negation(one);
  const TypeRef pair_t = Type::tensor(neg, one);
  auto producer = [&](const char* text) { return parse_command(std::string("< ") + text + " |^ tp >", one).value()->left(); };
  Frame uses_w{{Binding{"p", pair_t->polarity(), false, pair_t, producer("(w, ())")}}};
  Frame defines_w{{Binding{"w", Polarity::Neg, false, neg, producer("mu[q:1].< q | tp >")}}};
  const bool forward = type_memory(Memory::from_parts({}, {uses_w, defines_w}), one).ok();
  const bool backward = type_memory(Memory::from_parts({}, {defines_w, uses_w}), one).ok();
  return !forward && backward;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> expect_red;
  app.add_option("--expect-red", expect_red, "Criteria known to fail (documented in the README)");
  CLI11_PARSE(app, argc, argv);

  Report rep;
  try {
    rule_exactness(rep);

    const Sweep s = corpus_sweep();
    std::cout << "corpus: " << s.enumerated << " enumerated at depth <= " << kCorpusDepth << " ("
              << s.sizes << "), swept in " << s.seconds << " s; plus "
              << s.commands - s.enumerated - s.curated << " seeded random (seed " << kRandomSeed
              << ", height <= " << kRandomDepth << ") and " << s.curated << " curated programs"
              << std::endl;
    rep.line(2, "determinism", clean(s, {Property::Determinism}),
             tally(s, {Property::Determinism}, s.commands) + " (commands matching two rules)");
    rep.line(3, "subject-reduction", clean(s, {Property::SubjectReduction}),
             tally(s, {Property::SubjectReduction}, s.commands));
    {
      std::ostringstream t;
      t << "; sweep " << s.seconds << " s (limit " << kSweepSeconds << " s)";
      rep.line(4, "evaluation", clean(s, {Property::Evaluation}) && s.seconds < kSweepSeconds,
               tally(s, {Property::Evaluation}, s.commands) + t.str());
    }
    rep.line(5, "machine-correctness", clean(s, {Property::MachineAgrees}),
             tally(s, {Property::MachineAgrees}, s.commands));
    rep.line(6, "simulation", clean(s, {Property::Simulation}),
             tally(s, {Property::Simulation}, s.commands));

    stackability(rep);

    const auto erasure = {Property::ErasureTyping, Property::ErasureResult, Property::ErasureSimulation};
    rep.line(8, "erasure-oracle", clean(s, erasure) && s.erasure_commands > 0,
             tally(s, erasure, s.erasure_commands) + " (depth <= " + std::to_string(kErasureDepth) + ")");

    const bool forward = forward_reference_rejected();
    rep.line(9, "memory-typing", clean(s, {Property::MemoryTyping}) && forward,
             tally(s, {Property::MemoryTyping}, s.commands) + "; forward stack reference " +
                 (forward ? "rejected" : "NOT rejected"));
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance harness error: " << e.what() << std::endl;
    return 1;
  }

  const std::set<int> expected(expect_red.begin(), expect_red.end());
  if (rep.red == expected) {
    if (!expected.empty()) std::cout << "failing criteria are exactly the documented ones" << std::endl;
    return 0;
  }
  std::cout << "failing criteria differ from the documented ones" << std::endl;
  return 1;
}
