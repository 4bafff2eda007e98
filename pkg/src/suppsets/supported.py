"""Supported sets and supported maps.

A supported set is a finite carrier of opaque element ids together with a
support function assigning each element a finite atom set.  A supported
map may shrink supports but never grow them.  This module provides the
finite-scale categorical toolkit: (co)products, (co)equalizers,
exponentials, image factorizations, isomorphism and subobject tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .atoms import EMPTY_SUPPORT, Support, SymmetryId, atom_from_json, support_to_json


def _id_key(x):
    """Deterministic ordering key for heterogeneous element ids."""
    if isinstance(x, tuple):
        return (2, tuple(_id_key(i) for i in x))
    if isinstance(x, str):
        return (1, x)
    return (0, repr(x))


@dataclass(frozen=True)
class SuppSet:
    """A finite supported set: element ids paired with their supports."""

    items: tuple = ()  # ((elem_id, Support), ...) in fixed order

    @staticmethod
    def of(entries) -> "SuppSet":
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        items = []
        seen = set()
        for x, s in pairs:
            if x in seen:
                raise ValueError(f"duplicate element id {x!r}")
            seen.add(x)
            items.append((x, s if isinstance(s, Support) else Support.of(s)))
        return SuppSet(tuple(items))

    @property
    def elements(self) -> tuple:
        return tuple(x for x, _ in self.items)

    def support(self, x) -> Support:
        for y, s in self.items:
            if y == x:
                return s
        raise KeyError(x)

    def __contains__(self, x) -> bool:
        return any(y == x for y, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.elements)

    def atoms(self) -> Support:
        out = EMPTY_SUPPORT
        for _, s in self.items:
            out = out.union(s)
        return out


EMPTY_SET = SuppSet()


def unit_set(support=EMPTY_SUPPORT) -> SuppSet:
    """A singleton supported set; empty support unless told otherwise."""
    return SuppSet(((0, support),))


def bool_set() -> SuppSet:
    """The two-element classifier target, both elements with empty support."""
    return SuppSet(((0, EMPTY_SUPPORT), (1, EMPTY_SUPPORT)))


@dataclass(frozen=True)
class SupportViolation:
    element: object
    result_support: Support
    source_support: Support


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple

    def __bool__(self) -> bool:
        return False  # a report is always a failure witness

    def describe(self) -> list:
        return [
            f"support grows at {v.element!r}: {tuple(v.result_support)} ⊄ {tuple(v.source_support)}"
            for v in self.violations
        ]


@dataclass(frozen=True)
class SuppMap:
    """A support-shrinking function between supported sets."""

    source: SuppSet
    target: SuppSet
    mapping: tuple  # ((x, f(x)), ...) aligned with source order

    @staticmethod
    def of(source: SuppSet, target: SuppSet, f) -> "SuppMap":
        res = check_supported_map(f, source, target)
        if isinstance(res, ViolationReport):
            raise ValueError("; ".join(res.describe()))
        return res

    def __call__(self, x):
        for a, b in self.mapping:
            if a == x:
                return b
        raise KeyError(x)

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def is_injective(self) -> bool:
        vals = [b for _, b in self.mapping]
        return len(set(map(_id_key, vals))) == len(vals)

    def is_surjective(self) -> bool:
        vals = {_id_key(b) for _, b in self.mapping}
        return all(_id_key(y) in vals for y in self.target.elements)

    def is_support_reflecting(self) -> bool:
        return all(
            self.target.support(b) == self.source.support(a) for a, b in self.mapping
        )


def check_supported_map(f, X: SuppSet, Y: SuppSet):
    """Build a SuppMap, or report every element whose support would grow.

    `f` is a mapping or callable on the elements of X; it must be total
    and land in Y.
    """
    get = f.__getitem__ if isinstance(f, Mapping) else f
    mapping = []
    violations = []
    for x in X.elements:
        y = get(x)
        if y not in Y:
            raise KeyError(f"{y!r} is not in the target carrier")
        if not Y.support(y).issubset(X.support(x)):
            violations.append(SupportViolation(x, Y.support(y), X.support(x)))
        mapping.append((x, y))
    if violations:
        return ViolationReport(tuple(violations))
    return SuppMap(X, Y, tuple(mapping))


def identity_map(X: SuppSet) -> SuppMap:
    return SuppMap(X, X, tuple((x, x) for x in X.elements))


def compose_maps(g: SuppMap, f: SuppMap) -> SuppMap:
    if f.target != g.source:
        raise ValueError("composition mismatch")
    return SuppMap(f.source, g.target, tuple((x, g(f(x))) for x in f.source.elements))


# --- universal constructions ---

def product(X: SuppSet, Y: SuppSet):
    """Cartesian product; the support of a pair is the union of the parts."""
    items = [((x, y), X.support(x).union(Y.support(y))) for x in X.elements for y in Y.elements]
    P = SuppSet(tuple(items))
    pr1 = SuppMap(P, X, tuple((p, p[0]) for p, _ in items))
    pr2 = SuppMap(P, Y, tuple((p, p[1]) for p, _ in items))
    return P, pr1, pr2


def coproduct(X: SuppSet, Y: SuppSet):
    """Disjoint union; injected elements keep their supports."""
    items = [(("inl", x), X.support(x)) for x in X.elements]
    items += [(("inr", y), Y.support(y)) for y in Y.elements]
    C = SuppSet(tuple(items))
    inl = SuppMap(X, C, tuple((x, ("inl", x)) for x in X.elements))
    inr = SuppMap(Y, C, tuple((y, ("inr", y)) for y in Y.elements))
    return C, inl, inr


class UnionFind:
    def __init__(self, keys):
        self.parent = {k: k for k in keys}

    def find(self, k):
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def coequalizer(f: SuppMap, g: SuppMap):
    """Quotient the common target by f(r) ~ g(r).

    Each class is named by its least member id and carries the
    intersection of its members' supports.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("coequalizer needs a parallel pair")
    X = f.target
    uf = UnionFind([_id_key(x) for x in X.elements])
    by_key = {_id_key(x): x for x in X.elements}
    for r in f.source.elements:
        uf.union(_id_key(f(r)), _id_key(g(r)))
    classes = {}
    for x in X.elements:
        classes.setdefault(uf.find(_id_key(x)), []).append(x)
    items = []
    rep_of = {}
    for members in classes.values():
        rep = min(members, key=_id_key)
        supp = X.support(members[0])
        for m in members[1:]:
            supp = supp.intersect(X.support(m))
        for m in members:
            rep_of[_id_key(m)] = rep
        items.append((rep, supp))
    items.sort(key=lambda it: _id_key(it[0]))
    Q = SuppSet(tuple(items))
    epi = SuppMap(X, Q, tuple((x, rep_of[_id_key(x)]) for x in X.elements))
    return Q, epi


def equalizer(f: SuppMap, g: SuppMap):
    """The subset where f and g agree, with inherited supports."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("equalizer needs a parallel pair")
    X = f.source
    items = tuple((x, X.support(x)) for x in X.elements if f(x) == g(x))
    E = SuppSet(items)
    mono = SuppMap(E, X, tuple((x, x) for x, _ in items))
    return E, mono


def exponential(E: SuppSet, X: SuppSet) -> SuppSet:
    """All functions E -> X; the support of f is ⋃_e s(f(e)) \\ s(e)."""
    es = E.elements
    items = []
    for choice in itertools.product(X.elements, repeat=len(es)):
        fid = tuple(zip(es, choice))
        supp = EMPTY_SUPPORT
        for e, x in fid:
            supp = supp.union(X.support(x).minus(E.support(e)))
        items.append((fid, supp))
    return SuppSet(tuple(items))


def is_iso(f: SuppMap) -> bool:
    """Isomorphisms are exactly the support-reflecting bijections."""
    return f.is_injective() and f.is_surjective() and f.is_support_reflecting()


def classify_regular_subobject(m: SuppMap) -> SuppMap:
    """The characteristic map X -> 2 of a support-reflecting mono."""
    if not m.is_injective():
        raise ValueError("subobject map is not injective")
    if not m.is_support_reflecting():
        raise ValueError("subobject map is not support-reflecting")
    image = {_id_key(m(s)) for s in m.source.elements}
    X = m.target
    two = bool_set()
    return SuppMap(X, two, tuple((x, 1 if _id_key(x) in image else 0) for x in X.elements))


def image_factorization(f: SuppMap, support_from: str = "source"):
    """Factor f as epi ∘ mono through its image.

    `support_from="source"` intersects fibre supports (regular epi);
    `support_from="target"` inherits target supports (regular mono).
    """
    if support_from not in ("source", "target"):
        raise ValueError("support_from must be 'source' or 'target'")
    X, Y = f.source, f.target
    fibres = {}
    for x in X.elements:
        fibres.setdefault(_id_key(f(x)), []).append(x)
    items = []
    for y in Y.elements:
        members = fibres.get(_id_key(y))
        if not members:
            continue
        if support_from == "target":
            supp = Y.support(y)
        else:
            supp = X.support(members[0])
            for m in members[1:]:
                supp = supp.intersect(X.support(m))
        items.append((y, supp))
    Im = SuppSet(tuple(items))
    epi = SuppMap(X, Im, tuple((x, f(x)) for x in X.elements))
    mono = SuppMap(Im, Y, tuple((y, y) for y, _ in items))
    return epi, Im, mono


def pf_support(X: SuppSet, elems: Iterable) -> Support:
    """Support of a finite subset: the union of its members' supports."""
    out = EMPTY_SUPPORT
    for x in elems:
        out = out.union(X.support(x))
    return out


def ufs_support(supports: Iterable[Support], max_atoms: int = None):
    """Union of a family of supports; None when it exceeds `max_atoms`.

    Finite families (subsets of a SuppSet) always succeed; the bound only
    guards externally supplied streams that may not be uniformly supported.
    """
    out = EMPTY_SUPPORT
    for s in supports:
        out = out.union(s)
        if max_atoms is not None and len(out) > max_atoms:
            return None
    return out


# --- JSON forms ---

def suppset_to_json(X: SuppSet) -> dict:
    return {
        "elements": [
            {"id": x, "support": support_to_json(s)} for x, s in X.items
        ]
    }


def suppset_from_json(d: dict, sym: SymmetryId = None) -> SuppSet:
    return SuppSet.of(
        [(e["id"], Support.of(atom_from_json(a, sym) for a in e["support"]))
         for e in d["elements"]]
    )


def suppmap_to_json(f: SuppMap) -> dict:
    return {"map": {x: y for x, y in f.mapping}}


def suppmap_from_json(d: dict, source: SuppSet, target: SuppSet) -> SuppMap:
    return SuppMap.of(source, target, dict(d["map"]))
