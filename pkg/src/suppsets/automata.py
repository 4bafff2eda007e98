"""Register automata and their configuration-space semantics.

A register automaton has finitely many locations, each owning atom-named
registers (its support), and guarded transitions that reassign registers
from the old contents and the current input value.  Inside a transition,
`Input` names the freshly read value and `Reg(a)` the old content of
register a; in the shifted index view the input is atom 0 and the old
register k is atom k+1.

A configuration pairs a location with an admissible register valuation;
stepping through all matching transitions yields the (finitely branching)
configuration automaton.  `determinize_generic` exposes the construction
generically: with finite-powerset side effects it is the classical subset
construction, with free-nominal side effects it is exactly `step`/`run`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .atoms import (
    EMPTY_SUPPORT,
    Atom,
    FiniteMap,
    GlobalMap,
    Support,
    SymmetryId,
    apply,
    atom_from_json,
    atom_to_json,
    is_admissible,
)
from .binding import b_support
from .freenom import ExtElem, RestrictedMap
from .supported import SuppSet, UnionFind, suppset_from_json, suppset_to_json


@dataclass(frozen=True)
class Signature:
    """Relation names with arities; `eq` and `lt` have fixed meanings."""

    relations: tuple  # ((name, arity), ...)

    def arity(self, name: str):
        for n, k in self.relations:
            if n == name:
                return k
        return None

    def holds(self, name: str, args: tuple) -> bool:
        if name == "eq":
            return args[0] == args[1]
        if name == "lt":
            return args[0] < args[1]
        raise ValueError(f"relation {name!r} has no interpretation")


def default_signature(sym: SymmetryId) -> Signature:
    if sym is SymmetryId.TOTAL_ORDER:
        return Signature((("eq", 2), ("lt", 2)))
    return Signature((("eq", 2),))


@dataclass(frozen=True)
class InputRef:
    """The data value read by the transition (atom 0 under the binder)."""


@dataclass(frozen=True)
class Reg:
    """The old content of a register (atom k+1 under the binder)."""

    atom: Atom


INPUT = InputRef()


@dataclass(frozen=True)
class Literal:
    positive: bool
    relation: str
    args: tuple  # of InputRef | Reg


@dataclass(frozen=True)
class Guard:
    """A conjunction of possibly negated literals; empty means true."""

    literals: tuple = ()


TRUE_GUARD = Guard()


@dataclass(frozen=True)
class Transition:
    source: object
    guard: Guard
    target: object
    assign: tuple  # ((target_register_atom, InputRef | Reg), ...) sorted


def make_transition(source, guard: Guard, target, assign) -> Transition:
    pairs = assign.items() if hasattr(assign, "items") else assign
    return Transition(source, guard, target, tuple(sorted(pairs, key=lambda ar: ar[0])))


@dataclass
class RegisterAutomaton:
    sym: SymmetryId
    locations: SuppSet
    initial: object
    final: frozenset
    transitions: tuple
    signature: Signature = None

    def __post_init__(self):
        if self.signature is None:
            self.signature = default_signature(self.sym)
        self.final = frozenset(self.final)
        by_source = {}
        for t in self.transitions:
            by_source.setdefault(t.source, []).append(t)
        self._by_source = {q: tuple(ts) for q, ts in by_source.items()}

    def outgoing(self, loc) -> tuple:
        return self._by_source.get(loc, ())


@dataclass(frozen=True)
class Config:
    """A location plus an admissible valuation of its registers."""

    loc: object
    valuation: RestrictedMap


def initial_config(ra: RegisterAutomaton) -> Config:
    return Config(ra.initial, RestrictedMap(ra.sym, FiniteMap.of({})))


def _config_key(c: Config):
    return (str(c.loc), c.valuation.images.entries)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(ra: RegisterAutomaton) -> ValidationReport:
    """Check every structural coherence condition of the automaton."""
    errors = []
    locs = set(ra.locations.elements)
    if ra.initial not in locs:
        errors.append(f"initial location {ra.initial!r} is not a location")
    elif len(ra.locations.support(ra.initial)):
        errors.append("initial location must have all registers uninitialized")
    for q in ra.final:
        if q not in locs:
            errors.append(f"final location {q!r} is not a location")
    for i, t in enumerate(ra.transitions):
        where = f"transition {i} ({t.source!r} -> {t.target!r})"
        if t.source not in locs or t.target not in locs:
            errors.append(f"{where}: unknown endpoint")
            continue
        src_supp = ra.locations.support(t.source)
        tgt_supp = ra.locations.support(t.target)
        for lit in t.guard.literals:
            ar = ra.signature.arity(lit.relation)
            if ar is None:
                errors.append(f"{where}: unknown relation {lit.relation!r}")
            elif ar != len(lit.args):
                errors.append(f"{where}: relation {lit.relation!r} expects {ar} arguments")
            for ref in lit.args:
                if isinstance(ref, Reg) and ref.atom not in src_supp:
                    errors.append(f"{where}: guard uses register {ref.atom!r} outside the source support")
        assigned = [a for a, _ in t.assign]
        if Support.of(assigned) != tgt_supp or len(assigned) != len(tgt_supp):
            errors.append(f"{where}: assignment must cover the target registers exactly")
        refs = [r for _, r in t.assign]
        if len(set(refs)) != len(refs):
            errors.append(f"{where}: assignment is not injective")
        for r in refs:
            if isinstance(r, Reg) and r.atom not in src_supp:
                errors.append(f"{where}: assignment reads register {r.atom!r} outside the source support")
    if not errors and not ra.sym.rational_atoms:
        errors.extend(_shifted_support_errors(ra))
    return ValidationReport(tuple(errors))


def _shifted_support_errors(ra: RegisterAutomaton) -> list:
    """Re-check supports through the binder encoding: the input is atom 0,
    old register k is atom k+1, and the binder shifts everything down."""
    errors = []
    for q in ra.locations.elements:
        inside = EMPTY_SUPPORT
        for t in ra.outgoing(q):
            refs = [r for _, r in t.assign]
            for lit in t.guard.literals:
                refs.extend(lit.args)
            shifted = [0 if isinstance(r, InputRef) else r.atom + 1 for r in refs]
            inside = inside.union(Support.of(shifted))
        outside = b_support(inside)
        if not outside.issubset(ra.locations.support(q)):
            errors.append(
                f"location {q!r}: transition structure has support {tuple(outside)} "
                f"outside {tuple(ra.locations.support(q))}"
            )
    return errors


class UnresolvedRegister(KeyError):
    pass


def eval_guard(sig: Signature, g: Guard, val: RestrictedMap, input_atom: Atom) -> bool:
    """Evaluate a guard against a valuation and the current input."""

    def resolve(ref):
        if isinstance(ref, InputRef):
            return input_atom
        got = val.images.get(ref.atom)
        if got is None:
            raise UnresolvedRegister(ref.atom)
        return got

    for lit in g.literals:
        value = sig.holds(lit.relation, tuple(resolve(r) for r in lit.args))
        if value != lit.positive:
            return False
    return True


def step_full(ra: RegisterAutomaton, c: Config, input_atom: Atom):
    """Successor configurations plus the successors dropped as inadmissible."""
    kept, dropped, seen = [], [], set()
    for t in ra.outgoing(c.loc):
        if not eval_guard(ra.signature, t.guard, c.valuation, input_atom):
            continue
        images = {}
        for reg, ref in t.assign:
            images[reg] = input_atom if isinstance(ref, InputRef) else c.valuation(ref.atom)
        fm = FiniteMap.of(images)
        if not is_admissible(ra.sym, fm):
            dropped.append((t, fm))
            continue
        succ = Config(t.target, RestrictedMap(ra.sym, fm))
        key = _config_key(succ)
        if key not in seen:
            seen.add(key)
            kept.append(succ)
    kept.sort(key=_config_key)
    return tuple(kept), tuple(dropped)


def step(ra: RegisterAutomaton, c: Config, input_atom: Atom) -> tuple:
    return step_full(ra, c, input_atom)[0]


def run(ra: RegisterAutomaton, word: Iterable[Atom]) -> bool:
    """Breadth-first subset tracking; accept when a final location is live."""
    frontier = [initial_config(ra)]
    for a in word:
        seen = set()
        nxt = []
        for c in frontier:
            for succ in step(ra, c, a):
                key = _config_key(succ)
                if key not in seen:
                    seen.add(key)
                    nxt.append(succ)
        nxt.sort(key=_config_key)
        frontier = nxt
    return any(c.loc in ra.final for c in frontier)


def act_config(g: GlobalMap, c: Config) -> Config:
    """Rename the stored data values; register names stay put."""
    images = FiniteMap.of({a: apply(g, v) for a, v in c.valuation.images.items()})
    return Config(c.loc, RestrictedMap(g.sym, images))


def config_as_ext(c: Config) -> ExtElem:
    return ExtElem(c.valuation, c.loc)


# --- generalized determinization ---

@dataclass
class Nfa:
    """A classical NFA presented coalgebraically: finality plus successor sets."""

    states: tuple
    alphabet: tuple
    initial: object
    final: frozenset
    delta: dict  # (state, letter) -> frozenset of states

    def coalg(self, q):
        flag = 1 if q in self.final else 0
        return flag, {a: frozenset(self.delta.get((q, a), frozenset())) for a in self.alphabet}


class PfSubsets:
    """Finite-powerset side effects over discrete state sets.

    The lifting to the determinized automaton is the join-semilattice one:
    finality flags join by max, successor sets by union.
    """

    name = "pf"

    @staticmethod
    def unit(q):
        return frozenset([q])

    @staticmethod
    def join(hs, alphabet):
        flag = max((f for f, _ in hs), default=0)
        delta = {
            a: frozenset().union(*(d[a] for _, d in hs)) if hs else frozenset()
            for a in alphabet
        }
        return flag, delta


class ExtConfigs:
    """Free-nominal side effects: determinization lands on configurations."""

    name = "ext"

    @staticmethod
    def unit(ra: RegisterAutomaton, q) -> Config:
        supp = ra.locations.support(q)
        return Config(q, RestrictedMap(ra.sym, FiniteMap.of({a: a for a in supp})))


@dataclass
class DetAutomaton:
    """The subset automaton induced by an NFA through the powerset lifting."""

    nfa: Nfa

    def observe(self, subset):
        return PfSubsets.join([self.nfa.coalg(q) for q in sorted(subset, key=repr)],
                              self.nfa.alphabet)

    @property
    def initial(self):
        return PfSubsets.unit(self.nfa.initial)

    def is_final(self, subset) -> bool:
        return self.observe(subset)[0] == 1

    def successor(self, subset, letter):
        return self.observe(subset)[1][letter]

    def accepts(self, word) -> bool:
        state = self.initial
        for a in word:
            state = self.successor(state, a)
        return self.is_final(state)


@dataclass
class ConfigAutomaton:
    """The configuration automaton of a register automaton."""

    ra: RegisterAutomaton

    @property
    def initial(self) -> Config:
        return initial_config(self.ra)

    def successor(self, configs, input_atom):
        seen, out = set(), []
        for c in configs:
            for succ in step(self.ra, c, input_atom):
                key = _config_key(succ)
                if key not in seen:
                    seen.add(key)
                    out.append(succ)
        out.sort(key=_config_key)
        return tuple(out)

    def accepts(self, word) -> bool:
        return run(self.ra, word)


def determinize_generic(monad, coalg):
    """Internalize monadic side effects into the state space.

    With `PfSubsets` and an `Nfa` this is the classical subset
    construction; with `ExtConfigs` and a `RegisterAutomaton` it is the
    configuration automaton realized by `step`/`run`.
    """
    if monad is PfSubsets:
        if not isinstance(coalg, Nfa):
            raise ValueError("the pf instance determinizes an Nfa")
        return DetAutomaton(coalg)
    if monad is ExtConfigs:
        if not isinstance(coalg, RegisterAutomaton):
            raise ValueError("the ext instance determinizes a RegisterAutomaton")
        return ConfigAutomaton(coalg)
    raise ValueError(f"unsupported monad instance: {monad!r}")


# --- reachability and orbits ---

@dataclass(frozen=True)
class OrbitSummary:
    per_location: tuple  # ((loc, orbit count), ...) in location order
    configs_seen: int

    @property
    def total(self) -> int:
        return sum(n for _, n in self.per_location)

    def as_dict(self) -> dict:
        return {str(loc): n for loc, n in self.per_location}


def reachable_configs(ra: RegisterAutomaton, pool: Support, depth: int) -> tuple:
    frontier = [initial_config(ra)]
    seen = {_config_key(frontier[0]): frontier[0]}
    for _ in range(depth):
        nxt = []
        for c in frontier:
            for a in pool:
                for succ in step(ra, c, a):
                    key = _config_key(succ)
                    if key not in seen:
                        seen[key] = succ
                        nxt.append(succ)
        if not nxt:
            break
        frontier = nxt
    return tuple(sorted(seen.values(), key=_config_key))


def _same_orbit(sym: SymmetryId, c1: Config, c2: Config) -> bool:
    """Same location and the forced value map between valuations is admissible."""
    if c1.loc != c2.loc:
        return False
    pairs = {}
    for (a, v1), (b, v2) in zip(c1.valuation.images.items(), c2.valuation.images.items()):
        if a != b:
            return False
        if v1 in pairs and pairs[v1] != v2:
            return False
        pairs[v1] = v2
    return is_admissible(sym, FiniteMap.of(pairs))


def reachable_orbits(ra: RegisterAutomaton, pool: Support, depth: int) -> OrbitSummary:
    """Orbit counts of the configurations reachable with pool inputs."""
    if not ra.sym.is_group:
        raise ValueError("orbit counting needs a group symmetry")
    configs = reachable_configs(ra, pool, depth)
    uf = UnionFind([_config_key(c) for c in configs])
    by_loc = {}
    for c in configs:
        by_loc.setdefault(c.loc, []).append(c)
    for group in by_loc.values():
        for i, c1 in enumerate(group):
            for c2 in group[i + 1:]:
                if _same_orbit(ra.sym, c1, c2):
                    uf.union(_config_key(c1), _config_key(c2))
    per_loc = []
    for q in ra.locations.elements:
        group = by_loc.get(q, [])
        per_loc.append((q, len({uf.find(_config_key(c)) for c in group})))
    return OrbitSummary(tuple(per_loc), len(configs))


# --- JSON forms ---

def _ref_to_json(ref):
    return "input" if isinstance(ref, InputRef) else {"reg": atom_to_json(ref.atom)}


def _ref_from_json(v, sym: SymmetryId):
    if v == "input":
        return INPUT
    return Reg(atom_from_json(v["reg"], sym))


def automaton_to_json(ra: RegisterAutomaton) -> dict:
    return {
        "symmetry": ra.sym.value,
        "locations": suppset_to_json(ra.locations),
        "initial": ra.initial,
        "final": sorted(ra.final, key=str),
        "transitions": [
            {
                "from": t.source,
                "guard": [
                    [lit.positive, lit.relation, [_ref_to_json(r) for r in lit.args]]
                    for lit in t.guard.literals
                ],
                "to": t.target,
                "assign": {
                    str(atom_to_json(a)): _ref_to_json(r) for a, r in t.assign
                },
            }
            for t in ra.transitions
        ],
    }


def automaton_from_json(d: dict) -> RegisterAutomaton:
    sym = SymmetryId.parse(d["symmetry"])
    locations = suppset_from_json(d["locations"], sym)
    transitions = []
    for td in d["transitions"]:
        guard = Guard(
            tuple(
                Literal(bool(pol), rel, tuple(_ref_from_json(r, sym) for r in refs))
                for pol, rel, refs in td.get("guard", [])
            )
        )
        assign = {
            atom_from_json(a, sym): _ref_from_json(r, sym)
            for a, r in td.get("assign", {}).items()
        }
        transitions.append(make_transition(td["from"], guard, td["to"], assign))
    return RegisterAutomaton(
        sym=sym,
        locations=locations,
        initial=d["initial"],
        final=frozenset(d["final"]),
        transitions=tuple(transitions),
    )
