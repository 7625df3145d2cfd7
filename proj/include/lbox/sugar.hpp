#pragma once

// Derived forms (functions, shifts, booleans) and the box-erasure
// translation into the shift fragment.

#include <variant>

#include "lbox/core.hpp"
#include "lbox/typing.hpp"

namespace lbox::sugar {

// --- types -----------------------------------------------------------------

/// A -> B  =  ~A @ B
TypeRef arrow(TypeRef a, TypeRef b);
/// up A  =  A * 1  (always positive)
TypeRef shift_up(TypeRef a);
/// down A  =  ~1 @ A  (always negative)
TypeRef shift_down(TypeRef a);
/// bool  =  1 + 1
TypeRef boolean();

// --- surface forms ---------------------------------------------------------

struct Arrow { TypeRef arg, result; };
struct ShiftUpType { TypeRef inner; };
struct ShiftDownType { TypeRef inner; };
struct Bool {};

/// fun x:A => body, where the body has type `result`.
struct Lam { Binder param; TermRef body; TypeRef result; };
/// fn arg, for fn : A -> B.
struct App { TermRef fn; TypeRef arg_type; TermRef arg; TypeRef result; };
/// mu(x . b).c  =  mu(a:~A, b:B).< mu[x:A].c | a >
struct MuCall { Binder param; Binder ret; TermRef body; };
/// V . S  =  ([V], S)
struct CallStack { TermRef arg; TermRef stack; };
/// up V  =  (V, ())
struct ShiftUpVal { TermRef value; };
/// mu~up x.c  =  mu~(x, u:1).c
struct ShiftUpMatch { Binder var; TermRef body; };
/// mu down a.c  =  mu(b:~1, a).c
struct ShiftDownVal { Binder covar; TermRef body; };
/// down S  =  ([()], S)
struct ShiftDownCoval { TermRef stack; };
struct True {};
struct False {};
/// if cond then t else u, at result type `result`.
struct If { TermRef cond; TermRef then_branch; TermRef else_branch; TypeRef result; };

using SurfaceType = std::variant<Arrow, ShiftUpType, ShiftDownType, Bool>;
using SurfaceForm = std::variant<Lam, App, MuCall, CallStack, ShiftUpVal, ShiftUpMatch,
                                 ShiftDownVal, ShiftDownCoval, True, False, If>;

TypeRef elaborate(const SurfaceType& form);
TermRef elaborate(const SurfaceForm& form);

// --- erasure ---------------------------------------------------------------

/// box A becomes up A; every other connective is kept.
TypeRef erase_modality(const TypeRef& t);

/// Translate a term checked in `ctx` into the box-free fragment: box V
/// becomes (V, ()), mu~box x.c becomes mu~(x, u:1).c, and each cut's
/// polarity is recomputed from its erased type. Modal-zone variables move
/// to the ordinary zone with their erased types. Throws TypeError when the
/// term does not check in `ctx`.
TermRef erase_modality(const TermRef& t, const TypingContext& ctx);

/// The erased context: (G | T |- D) becomes (G, T |- D) with erased types.
TypingContext erase_modality(const TypingContext& ctx);

}  // namespace lbox::sugar
