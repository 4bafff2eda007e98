"""Name binding: de Bruijn indices and nominal abstraction.

Lambda terms come in two forms.  Named terms use natural-number atoms for
both free and bound variables; de Bruijn terms use indices, where an index
below the current binder depth is bound and an index n at depth d refers
to the ambient atom n - d.  Binding a term shifts its support down by one:
atom k is visible outside a binder exactly when k+1 is visible inside,
and atom 0 is captured.

The two views are connected by an explicit isomorphism.  `phi` turns a
term-under-a-nameless-binder into an abstraction class (a binder atom and
a body, modulo alpha), and `phi_inv` goes back; the translation rotates
indices with the cycle `sigma(m) = (0 1 ... m)` for a sufficiently large m.
"""

from __future__ import annotations

from dataclasses import dataclass

from .atoms import (
    EMPTY_SUPPORT,
    GlobalMap,
    Support,
    SymmetryId,
    apply,
    compose,
    finite_perm,
    fresh,
    inverse,
    transposition,
)
from .freenom import NominalCarrier

_EQ = SymmetryId.EQUALITY


# --- named terms ---

@dataclass(frozen=True)
class Var:
    atom: int


@dataclass(frozen=True)
class App:
    fn: object
    arg: object


@dataclass(frozen=True)
class Lam:
    binder: int
    body: object


# --- de Bruijn terms ---

@dataclass(frozen=True)
class Idx:
    index: int


@dataclass(frozen=True)
class DbApp:
    fn: object
    arg: object


@dataclass(frozen=True)
class DbLam:
    body: object


def free_atoms(t) -> Support:
    """Free variables of a named term."""
    match t:
        case Var(a):
            return Support.of([a])
        case App(f, x):
            return free_atoms(f).union(free_atoms(x))
        case Lam(a, body):
            return free_atoms(body).minus([a])
    raise TypeError(f"not a named term: {t!r}")


def act_term(g: GlobalMap, t):
    """Rename every atom occurrence, bound and free, along a permutation."""
    if g.sym is not _EQ:
        raise ValueError("terms carry equality-symmetry atoms")
    match t:
        case Var(a):
            return Var(apply(g, a))
        case App(f, x):
            return App(act_term(g, f), act_term(g, x))
        case Lam(a, body):
            return Lam(apply(g, a), act_term(g, body))
    raise TypeError(f"not a named term: {t!r}")


def alpha_eq_terms(t1, t2) -> bool:
    """Alpha equivalence via one fresh witness per binder pair."""
    match (t1, t2):
        case (Var(a), Var(b)):
            return a == b
        case (App(f1, x1), App(f2, x2)):
            return alpha_eq_terms(f1, f2) and alpha_eq_terms(x1, x2)
        case (Lam(a, x), Lam(b, y)):
            avoid = Support.of([a, b]).union(free_atoms(x)).union(free_atoms(y))
            c = fresh(_EQ, avoid)
            return alpha_eq_terms(
                act_term(transposition(_EQ, c, a), x),
                act_term(transposition(_EQ, c, b), y),
            )
    return False


TERM_CARRIER = NominalCarrier(act=act_term, supp=free_atoms, eq=alpha_eq_terms)


# --- abstraction classes ---

@dataclass(eq=False)
class AbsClass:
    """An atom bound in a carrier value, modulo alpha."""

    binder: int
    body: object
    carrier: NominalCarrier = TERM_CARRIER

    def __eq__(self, other):
        if not isinstance(other, AbsClass) or self.carrier is not other.carrier:
            return NotImplemented
        return alpha_eq(self, other)


def alpha_eq(l: AbsClass, r: AbsClass) -> bool:
    """Compare two abstractions with a single deterministically fresh atom.

    Freshness of the witness makes the existential choice irrelevant; the
    brute-force search in the test suite re-checks this.
    """
    carrier = l.carrier
    avoid = (
        Support.of([l.binder, r.binder])
        .union(carrier.supp(l.body))
        .union(carrier.supp(r.body))
    )
    c = fresh(_EQ, avoid)
    return carrier.eq(
        carrier.act(transposition(_EQ, c, l.binder), l.body),
        carrier.act(transposition(_EQ, c, r.binder), r.body),
    )


def supp_abs(a: AbsClass) -> Support:
    """The binder disappears from the support."""
    return a.carrier.supp(a.body).minus([a.binder])


def act_abs(g: GlobalMap, a: AbsClass) -> AbsClass:
    return AbsClass(apply(g, a.binder), a.carrier.act(g, a.body), a.carrier)


# --- the binder shift and the isomorphism ---

def b_support(s: Support) -> Support:
    """Support of a value under a nameless binder: shift down, dropping 0."""
    return Support.of(a - 1 for a in s if a >= 1)


def maxidx(s: Support) -> int:
    """One past the largest atom; 0 on the empty support."""
    return 1 + max(s, default=-1)


def sigma(m: int) -> GlobalMap:
    """The cycle (0 1 ... m): k maps to k+1 below m, and m wraps to 0."""
    return finite_perm(_EQ, {k: k + 1 for k in range(m)} | {m: 0})


def phi(x, carrier: NominalCarrier = TERM_CARRIER) -> AbsClass:
    """From a value under a nameless binder to its abstraction class.

    Atom 0 is the bound one; every other atom k+1 stands for the ambient
    atom k, so the body is rotated down by sigma(maxidx)⁻¹ before atom 0's
    new name is bound.
    """
    m = maxidx(carrier.supp(x))
    shift_down = inverse(sigma(m))
    return AbsClass(apply(shift_down, 0), carrier.act(shift_down, x), carrier)


def phi_inv(a: AbsClass):
    """Inverse translation: rotate the body up and swap the binder to atom 0."""
    carrier = a.carrier
    m = max(maxidx(carrier.supp(a.body)), a.binder) + 1
    move = compose(transposition(_EQ, 0, a.binder + 1), sigma(m))
    return carrier.act(move, a.body)


# --- de Bruijn conversion ---

def to_debruijn(t):
    """Named to de Bruijn: bound occurrences become binder distances, the
    free atom k at depth d becomes index k + d."""

    def go(t, env):
        match t:
            case Var(a):
                if a in env:
                    return Idx(env.index(a))
                return Idx(a + len(env))
            case App(f, x):
                return DbApp(go(f, env), go(x, env))
            case Lam(a, body):
                return DbLam(go(body, [a] + env))
        raise TypeError(f"not a named term: {t!r}")

    return go(t, [])


def db_free_indices(t, depth: int = 0) -> Support:
    """Ambient atoms referenced by a de Bruijn term (indices shifted back)."""
    match t:
        case Idx(n):
            return Support.of([n - depth]) if n >= depth else EMPTY_SUPPORT
        case DbApp(f, x):
            return db_free_indices(f, depth).union(db_free_indices(x, depth))
        case DbLam(body):
            return db_free_indices(body, depth + 1)
    raise TypeError(f"not a de Bruijn term: {t!r}")


def from_debruijn(t):
    """De Bruijn to named; binder atoms are the smallest that avoid capture."""

    def go(t, env):
        match t:
            case Idx(n):
                if n < len(env):
                    return Var(env[n])
                return Var(n - len(env))
            case DbApp(f, x):
                return App(go(f, env), go(x, env))
            case DbLam(body):
                visible = _referenced_names(body, [None] + env)
                a = fresh(_EQ, Support.of(visible))
                return Lam(a, go(body, [a] + env))
        raise TypeError(f"not a de Bruijn term: {t!r}")

    def _referenced_names(t, env, depth=0):
        # env[j] is None for the binder being chosen, an atom for outer
        # binders; indices beyond env refer to ambient atoms.
        match t:
            case Idx(n):
                j = n - depth
                if j < 0:
                    return set()
                if j < len(env):
                    return set() if env[j] is None else {env[j]}
                return {j - len(env)}
            case DbApp(f, x):
                return _referenced_names(f, env, depth) | _referenced_names(x, env, depth)
            case DbLam(body):
                return _referenced_names(body, env, depth + 1)
        raise TypeError(f"not a de Bruijn term: {t!r}")

    return go(t, [])


# --- concrete syntax: named `\\vN. t`, `t u`, `vN`; de Bruijn `\\ t`, `#N` ---

class TermSyntaxError(ValueError):
    pass


def _tokenize(src: str, named: bool):
    tokens = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch in "\\.()":
            tokens.append(ch)
            i += 1
        elif (named and ch == "v") or (not named and ch == "#"):
            j = i + 1
            while j < len(src) and src[j].isdigit():
                j += 1
            if j == i + 1:
                raise TermSyntaxError(f"expected digits after {ch!r} at {i}")
            tokens.append(int(src[i + 1:j]))
            i = j
        else:
            raise TermSyntaxError(f"unexpected character {ch!r} at {i}")
    return tokens


def parse_named(src: str):
    tokens = _tokenize(src, named=True)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def term():
        nonlocal pos
        if peek() == "\\":
            pos += 1
            binder = peek()
            if not isinstance(binder, int):
                raise TermSyntaxError("expected a variable after \\")
            pos += 1
            if peek() != ".":
                raise TermSyntaxError("expected '.' after the binder")
            pos += 1
            return Lam(binder, term())
        return appchain()

    def appchain():
        nonlocal pos
        t = atomic()
        while peek() is not None and peek() not in (")",):
            if peek() == "\\":
                t = App(t, term())
            else:
                t = App(t, atomic())
        return t

    def atomic():
        nonlocal pos
        tok = peek()
        if isinstance(tok, int):
            pos += 1
            return Var(tok)
        if tok == "(":
            pos += 1
            t = term()
            if peek() != ")":
                raise TermSyntaxError("unbalanced parenthesis")
            pos += 1
            return t
        raise TermSyntaxError(f"unexpected token {tok!r}")

    t = term()
    if pos != len(tokens):
        raise TermSyntaxError("trailing input")
    return t


def parse_debruijn(src: str):
    tokens = _tokenize(src, named=False)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def term():
        nonlocal pos
        if peek() == "\\":
            pos += 1
            return DbLam(term())
        return appchain()

    def appchain():
        nonlocal pos
        t = atomic()
        while peek() is not None and peek() not in (")",):
            if peek() == "\\":
                t = DbApp(t, term())
            else:
                t = DbApp(t, atomic())
        return t

    def atomic():
        nonlocal pos
        tok = peek()
        if isinstance(tok, int):
            pos += 1
            return Idx(tok)
        if tok == "(":
            pos += 1
            t = term()
            if peek() != ")":
                raise TermSyntaxError("unbalanced parenthesis")
            pos += 1
            return t
        raise TermSyntaxError(f"unexpected token {tok!r}")

    t = term()
    if pos != len(tokens):
        raise TermSyntaxError("trailing input")
    return t


def show_named(t) -> str:
    match t:
        case Var(a):
            return f"v{a}"
        case App(f, x):
            lhs = show_named(f)
            if isinstance(f, Lam):
                lhs = f"({lhs})"
            rhs = show_named(x)
            if isinstance(x, (App, Lam)):
                rhs = f"({rhs})"
            return f"{lhs} {rhs}"
        case Lam(a, body):
            return f"\\v{a}. {show_named(body)}"
    raise TypeError(f"not a named term: {t!r}")


def show_debruijn(t) -> str:
    match t:
        case Idx(n):
            return f"#{n}"
        case DbApp(f, x):
            lhs = show_debruijn(f)
            if isinstance(f, DbLam):
                lhs = f"({lhs})"
            rhs = show_debruijn(x)
            if isinstance(x, (DbApp, DbLam)):
                rhs = f"({rhs})"
            return f"{lhs} {rhs}"
        case DbLam(body):
            return f"\\ {show_debruijn(body)}"
    raise TypeError(f"not a de Bruijn term: {t!r}")


# --- JSON mirrors of the trees ---

def named_to_json(t):
    match t:
        case Var(a):
            return {"var": a}
        case App(f, x):
            return {"app": [named_to_json(f), named_to_json(x)]}
        case Lam(a, body):
            return {"lam": [a, named_to_json(body)]}
    raise TypeError(f"not a named term: {t!r}")


def named_from_json(d):
    if "var" in d:
        return Var(d["var"])
    if "app" in d:
        f, x = d["app"]
        return App(named_from_json(f), named_from_json(x))
    if "lam" in d:
        a, body = d["lam"]
        return Lam(a, named_from_json(body))
    raise ValueError(f"bad named-term JSON: {d!r}")


def debruijn_to_json(t):
    match t:
        case Idx(n):
            return {"idx": n}
        case DbApp(f, x):
            return {"app": [debruijn_to_json(f), debruijn_to_json(x)]}
        case DbLam(body):
            return {"lam": debruijn_to_json(body)}
    raise TypeError(f"not a de Bruijn term: {t!r}")


def debruijn_from_json(d):
    if "idx" in d:
        return Idx(d["idx"])
    if "app" in d:
        f, x = d["app"]
        return DbApp(debruijn_from_json(f), debruijn_from_json(x))
    if "lam" in d:
        return DbLam(debruijn_from_json(d["lam"]))
    raise ValueError(f"bad de Bruijn-term JSON: {d!r}")
