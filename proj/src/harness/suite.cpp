#include <chrono>
#include <random>
#include <sstream>

#include "enumerate.hpp"
#include "json.hpp"
#include "lbox/harness.hpp"
#include "lbox/printer.hpp"

namespace lbox::harness {

namespace {

using detail::Cls;
using detail::GenContext;
using detail::Zone;

/// A replaceable position: the child path from the root, the class the
/// position accepts, and the names in scope there.
struct Site {
  std::vector<std::size_t> path;
  Cls cls;
  GenContext ctx;
  std::size_t depth;
};

void collect(const TermRef& t, Cls cls, const GenContext& ctx, std::vector<std::size_t>& path,
             std::vector<Site>& out) {
  out.push_back(Site{path, cls, ctx, term_depth(*t)});
  auto visit = [&](std::size_t i, Cls c, const GenContext& g) {
    path.push_back(i);
    collect(t->child(i), c, g, path, out);
    path.pop_back();
  };
  switch (t->tag()) {
    case Tag::Cut: {
      const bool neg = t->cut_polarity() == Polarity::Neg;
      visit(0, neg ? Cls::Value : Cls::Expression, ctx);
      visit(1, neg ? Cls::Environment : Cls::CoValue, ctx);
      return;
    }
    case Tag::BoxV:
      visit(0, Cls::Value, ctx.modal_part());
      return;
    case Tag::Pair:
    case Tag::Inj1:
    case Tag::Inj2:
    case Tag::NotV:
      for (std::size_t i = 0; i < t->child_count(); ++i) visit(i, Cls::Value, ctx);
      return;
    case Tag::Proj1:
    case Tag::Proj2:
    case Tag::CoPair:
      for (std::size_t i = 0; i < t->child_count(); ++i) visit(i, Cls::CoValue, ctx);
      return;
    default:
      break;
  }
  if (!has_body(*t)) return;
  const Zone zone = binds_covariables(*t)         ? Zone::Co
                    : t->tag() == Tag::MuTildeBox ? Zone::Modal
                                                  : Zone::Ordinary;
  for (std::size_t i = 0; i < t->child_count(); ++i) {
    GenContext inner = ctx;
    auto [lo, hi] = binders_over(*t, i);
    for (std::size_t k = lo; k < hi; ++k)
      inner = inner.bind(zone, detail::type_index(t->binder(k).type), t->binder(k).name);
    visit(i, Cls::Command, inner);
  }
}

TermRef at(const TermRef& t, const std::vector<std::size_t>& path) {
  TermRef cur = t;
  for (std::size_t i : path) cur = cur->child(i);
  return cur;
}

/// Minimisation order: fewer nodes, then fewer name occurrences.
std::pair<std::size_t, std::size_t> weight(const Term& t) {
  std::size_t names = 0;
  std::function<void(const Term&)> go = [&](const Term& n) {
    if (n.tag() == Tag::Var || n.tag() == Tag::CoVar) ++names;
    for (std::size_t i = 0; i < n.child_count(); ++i) go(*n.child(i));
  };
  go(t);
  return {term_size(t), names};
}

bool here_is_constant(const TermRef& t, const std::vector<std::size_t>& path) {
  const TermRef n = at(t, path);
  return n->tag() == Tag::UnitV || (n->tag() == Tag::CoVar && n->name() == toplevel_name());
}

TermRef replace(const TermRef& t, const std::vector<std::size_t>& path, std::size_t at,
                const TermRef& with) {
  if (at == path.size()) return with;
  std::array<TermRef, 2> kids{t->child(0), t->child_count() > 1 ? t->child(1) : nullptr};
  kids[path[at]] = replace(kids[path[at]], path, at + 1, with);
  if (!has_body(*t)) return term::with_children(*t, kids[0], kids[1]);
  std::array<Binder, 2> bs;
  for (std::size_t k = 0; k < t->binder_count(); ++k) bs[k] = t->binder(k);
  return term::with_binders(*t, bs, kids[0], kids[1]);
}

}  // namespace

TermRef shrink(const TermRef& c, const TypeRef& R,
               const std::function<bool(const TermRef&)>& still_fails) {
  if (detail::type_index(R) == detail::no_type) return c;
  detail::Enumerator gen(R);
  const TypingContext ctx(R);
  const std::size_t universe = type_universe().size();
  TermRef best = c;
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<Site> sites;
    std::vector<std::size_t> path;
    collect(best, Cls::Command, GenContext{}, path, sites);
    // Outermost sites first: replacing them removes the most.
    for (const Site& s : sites) {
      if (s.depth == 0 && here_is_constant(best, s.path)) continue;
      // Candidates: the site's own descendants (hoisting), then shallow
      // enumerated terms of the site's class.
      std::vector<TermRef> candidates;
      const TermRef here = at(best, s.path);
      if (s.depth == 0) candidates.push_back(term::unit());
      std::function<void(const TermRef&)> descend = [&](const TermRef& t) {
        for (std::size_t i = 0; i < t->child_count(); ++i) {
          candidates.push_back(t->child(i));
          descend(t->child(i));
        }
      };
      descend(here);
      for (std::size_t ty = 0; s.depth > 0 && ty < universe; ++ty) {
        const detail::TypeIx ix = s.cls == Cls::Command ? detail::no_type : static_cast<detail::TypeIx>(ty);
        auto layer = gen.up_to(s.cls, ix, s.ctx, std::min<std::size_t>(s.depth - 1, 2));
        candidates.insert(candidates.end(), layer.begin(), layer.end());
        if (s.cls == Cls::Command) break;
      }
      std::stable_sort(candidates.begin(), candidates.end(), [](const TermRef& a, const TermRef& b) {
        return term_size(*a) < term_size(*b);
      });
      const auto size = weight(*best);
      for (const TermRef& r : candidates) {
        TermRef next;
        try {
          next = replace(best, s.path, 0, r);
        } catch (const StratificationError&) {
          continue;
        }
        if (!(weight(*next) < size) || !check_command(ctx, next).ok() || !still_fails(next))
          continue;
        best = next;
        progress = true;
        break;
      }
      if (progress) break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

bool SuiteReport::ok() const {
  for (const auto& [p, t] : tallies)
    if (t.violations != 0) return false;
  return true;
}

SuiteReport property_suites(const SuiteOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.options = opts;
  for (std::size_t i = 0; i < property_count; ++i) rep.tallies[static_cast<Property>(i)];

  auto account = [&](const TermRef& c, const TypeRef& R, bool erasure) {
    DiffOptions d;
    d.fuel = opts.fuel;
    d.erasure = erasure;
    Verdict v = differential_run(c, R, d);
    ++rep.commands;
    for (std::size_t i = 0; i < property_count; ++i) {
      const auto p = static_cast<Property>(i);
      const bool erasure_prop = i >= static_cast<std::size_t>(Property::ErasureTyping);
      if (erasure_prop && !v.erasure_checked) continue;
      PropertyTally& t = rep.tallies[p];
      ++t.checked;
      if (!v.failed(p)) continue;
      if (t.violations++ != 0) continue;
      t.witness = shrink(c, R, [&](const TermRef& x) { return differential_run(x, R, d).failed(p); });
      t.witness_return_type = R;
      t.detail = differential_run(t.witness, R, d).details[p];
    }
  };

  for (const TypeRef& R : return_types()) {
    std::vector<TermRef> corpus = enumerate_commands(opts.depth, R);
    std::vector<std::size_t>& sizes = rep.corpus_sizes[print(R)];
    sizes.assign(opts.depth, 0);
    for (const TermRef& c : corpus) {
      const std::size_t depth = term_depth(*c);
      ++sizes[depth - 1];
      account(c, R, depth <= opts.erasure_depth);
    }
  }

  // Deeper random commands; each draw has its own seed derived from the suite seed.
  std::mt19937_64 seeds(opts.seed);
  for (const TypeRef& R : return_types())
    for (std::size_t i = 0; i < opts.random_samples; ++i) {
      TermRef c = random_command(seeds(), opts.random_depth, R);
      if (!c) continue;
      ++rep.random_commands;
      account(c, R, true);
    }

  for (const SourceProgram& p : opts.programs) {
    ++rep.curated_programs;
    account(p.command, p.return_type, true);
  }

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string SuiteReport::text() const {
  std::ostringstream out;
  out << "seed " << options.seed << ", depth " << options.depth << ", erasure depth "
      << options.erasure_depth << ", fuel " << options.fuel << "\n";
  for (const auto& [R, sizes] : corpus_sizes) {
    out << "corpus R = " << R << ":";
    for (std::size_t i = 0; i < sizes.size(); ++i) out << " d" << i + 1 << "=" << sizes[i];
    out << "\n";
  }
  out << "random commands " << random_commands << " (depth <= " << options.random_depth
      << "), curated programs " << curated_programs << ", total " << commands << "\n";
  for (const auto& [p, t] : tallies) {
    out << (t.violations == 0 ? "PASS " : "FAIL ") << to_string(p) << ": " << t.checked
        << " checked, " << t.violations << " violations\n";
    if (t.witness) {
      out << "  witness (R = " << print(t.witness_return_type) << "): "
          << print(t.witness, t.witness_return_type) << "\n  " << t.detail << "\n";
    }
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", seconds);
  out << (ok() ? "OK" : "FAILED") << " in " << secs << " s\n";
  return out.str();
}

std::string SuiteReport::json(int indent) const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["seed"] = options.seed;
  j["depth"] = options.depth;
  j["erasure_depth"] = options.erasure_depth;
  j["fuel"] = options.fuel;
  j["random_depth"] = options.random_depth;
  ordered_json corpus = ordered_json::object();
  for (const auto& [R, sizes] : corpus_sizes) corpus[R] = sizes;
  j["corpus_sizes"] = corpus;
  j["random_commands"] = random_commands;
  j["curated_programs"] = curated_programs;
  j["commands"] = commands;
  ordered_json props = ordered_json::array();
  for (const auto& [p, t] : tallies) {
    ordered_json e{{"property", to_string(p)}, {"checked", t.checked}, {"violations", t.violations}};
    if (t.witness) {
      e["return_type"] = print(t.witness_return_type);
      e["witness"] = print(t.witness, t.witness_return_type);
      e["detail"] = t.detail;
    }
    props.push_back(std::move(e));
  }
  j["properties"] = props;
  j["ok"] = ok();
  return j.dump(indent);
}

}  // namespace lbox::harness
