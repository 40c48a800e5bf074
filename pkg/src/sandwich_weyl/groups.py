"""Finite matrix groups: elements, breadth-first closure, and axiom checks."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

from .checks import Report
from .rational import RatMat, RatVec, rank

DEFAULT_CAP = 10**7


def default_cap() -> int:
    env = os.environ.get("SANDWICH_CAP")
    return int(env) if env else DEFAULT_CAP


class ClosureCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An invertible rational matrix, optionally acting on an indexed root set."""

    matrix: RatMat
    domain: Optional[tuple[RatVec, ...]] = None

    @property
    def key(self) -> bytes:
        return self.matrix.key

    @cached_property
    def action(self) -> tuple[int, ...]:
        """Permutation of ``domain`` indices induced by the matrix."""
        if self.domain is None:
            raise ValueError("element has no domain to act on")
        pos = {v: i for i, v in enumerate(self.domain)}
        images = []
        for v in self.domain:
            w = self.matrix.apply(v)
            if w not in pos:
                raise ValueError("matrix does not preserve its domain")
            images.append(pos[w])
        if len(set(images)) != len(images):
            raise ValueError("induced action is not injective")
        return tuple(images)

    def __call__(self, v: RatVec) -> RatVec:
        return self.matrix.apply(v)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return element_multiply(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.matrix.inverse(), self.domain)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupElement) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"GroupElement({self.matrix!r})"


def identity_element(dim: int, domain=None) -> GroupElement:
    return GroupElement(RatMat.identity(dim), domain)


def element_multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.matrix.shape != b.matrix.shape:
        raise ValueError(f"dimension mismatch: {a.matrix.shape} vs {b.matrix.shape}")
    return GroupElement(a.matrix @ b.matrix, a.domain if a.domain is not None else b.domain)


class FiniteGroup:
    """A finite set of matrices with memoized index arithmetic.

    Elements are enumerated in canonical-key order. The set is not assumed
    closed; :func:`verify_group_axioms` checks that.
    """

    def __init__(self, elements: Sequence[GroupElement], generators: Sequence[GroupElement] = (), dim: int | None = None):
        uniq = {e.key: e for e in elements}
        self.elements: tuple[GroupElement, ...] = tuple(uniq[k] for k in sorted(uniq))
        self.generators = tuple(generators)
        self.index = {e.key: i for i, e in enumerate(self.elements)}
        if dim is None:
            if not self.elements:
                raise ValueError("dimension needed for an empty element set")
            dim = self.elements[0].matrix.shape[0]
        self.dim = dim
        self._mul: dict[tuple[int, int], Optional[int]] = {}
        self._inv: dict[int, Optional[int]] = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        key = g.key if isinstance(g, (GroupElement, RatMat)) else g
        return key in self.index

    def find(self, g) -> Optional[int]:
        key = g.key if isinstance(g, (GroupElement, RatMat)) else g
        return self.index.get(key)

    @cached_property
    def identity_index(self) -> Optional[int]:
        return self.index.get(RatMat.identity(self.dim).key)

    def generator_indices(self) -> list[int]:
        return [self.index[g.key] for g in self.generators]

    @cached_property
    def _perm_table(self):
        # composing cached root permutations is much cheaper than matrix products;
        # a domain spanning the space makes the action faithful
        if not self.elements or any(e.domain is None for e in self.elements):
            return None
        if rank(self.elements[0].domain) != self.dim:
            return None
        try:
            perms = [e.action for e in self.elements]
        except ValueError:
            return None
        lookup = {p: i for i, p in enumerate(perms)}
        if len(lookup) != len(perms):
            return None
        return perms, lookup

    def mul(self, i: int, j: int) -> Optional[int]:
        """Index of elements[i] @ elements[j], or None when the product escapes the set."""
        r = self._mul.get((i, j), -1)
        if r == -1:
            table = self._perm_table
            if table is not None:
                perms, lookup = table
                a, b = perms[i], perms[j]
                r = lookup.get(tuple(a[k] for k in b))
            else:
                r = self.index.get((self.elements[i].matrix @ self.elements[j].matrix).key)
            self._mul[(i, j)] = r
        return r

    def inv(self, i: int) -> Optional[int]:
        if i not in self._inv:
            self._inv[i] = self.index.get(self.elements[i].matrix.inverse().key)
        return self._inv[i]

    def keys(self) -> list[bytes]:
        return [e.key for e in self.elements]


def _products(frontier, gens, workers: int):
    def row(g):
        return [element_multiply(g, s) for s in gens]

    if workers <= 1 or len(frontier) < 2:
        return [p for g in frontier for p in row(g)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return [p for r in pool.map(row, frontier) for p in r]


def group_closure(
    generators: Sequence[GroupElement],
    dim: int | None = None,
    cap: int | None = None,
    workers: int = 1,
    domain=None,
) -> FiniteGroup:
    """Breadth-first closure of ``generators`` under right multiplication.

    The element set does not depend on generator order or ``workers``;
    each frontier is merged in sorted key order.
    """
    gens = list(generators)
    if dim is None:
        if not gens:
            raise ValueError("dim is required when there are no generators")
        dim = gens[0].matrix.shape[0]
    for g in gens:
        if g.matrix.shape != (dim, dim):
            raise ValueError("generator dimension mismatch")
        if not g.matrix.is_invertible():
            raise ValueError("generator is not invertible")
    cap = default_cap() if cap is None else cap
    if domain is None and gens:
        domain = gens[0].domain
    ident = identity_element(dim, domain)
    seen = {ident.key: ident}
    frontier = [ident]
    while frontier:
        fresh: dict[bytes, GroupElement] = {}
        for p in _products(frontier, gens, workers):
            if p.key not in seen and p.key not in fresh:
                fresh[p.key] = p
        frontier = [fresh[k] for k in sorted(fresh)]
        seen.update(fresh)
        if len(seen) > cap:
            raise ClosureCapExceeded(
                f"closure exceeded {cap} elements ({len(seen)} found); generators may not span a finite group"
            )
    return FiniteGroup(list(seen.values()), gens, dim)


def check_table(
    n: int,
    mul: Callable[[int, int], Optional[int]],
    identity: Optional[int],
    label: Callable[[int], object] = lambda i: i,
    associativity: bool = False,
    name: str = "group axioms",
    inverse: Callable[[int], Optional[int]] | None = None,
) -> Report:
    """Exhaustive closure, identity, inverse (and optionally associativity) checks on an index table.

    With ``inverse`` the candidate inverse of each element is checked
    directly instead of searched for.
    """
    rep = Report(name)
    witness = None
    for a in range(n):
        for b in range(n):
            if mul(a, b) is None:
                witness = {"a": label(a), "b": label(b)}
                break
        if witness:
            break
    rep.add("closure", witness is None, witness)
    if identity is None:
        rep.add("identity", False, {"reason": "identity not in element set"})
        rep.add("inverses", False, {"reason": "identity not in element set"})
        return rep
    bad = next((a for a in range(n) if mul(identity, a) != a or mul(a, identity) != a), None)
    rep.add("identity", bad is None, None if bad is None else {"element": label(bad)})
    bad = None
    for a in range(n):
        cands = range(n) if inverse is None else [inverse(a)]
        if not any(b is not None and mul(a, b) == identity and mul(b, a) == identity for b in cands):
            bad = a
            break
    rep.add("inverses", bad is None, None if bad is None else {"element": label(bad)})
    if associativity:
        witness = None
        for a in range(n):
            for b in range(n):
                ab = mul(a, b)
                for c in range(n):
                    if ab is None or mul(ab, c) != mul(a, mul(b, c)):
                        witness = {"a": label(a), "b": label(b), "c": label(c)}
                        break
                if witness:
                    break
            if witness:
                break
        rep.add("associativity", witness is None, witness)
    return rep


def verify_group_axioms(g: FiniteGroup) -> Report:
    """Closure, identity and inverses by exhaustive check.

    Inverses are found by matrix inversion and looked up, so the inverse
    scan is linear rather than quadratic.
    """
    rep = Report("group axioms")
    n = g.order
    witness = None
    for a in range(n):
        for b in range(n):
            if g.mul(a, b) is None:
                witness = {"a": g.elements[a].key, "b": g.elements[b].key}
                break
        if witness:
            break
    rep.add("closure", witness is None, witness)
    e = g.identity_index
    rep.add("identity", e is not None, None if e is not None else {"reason": "identity not in element set"})
    bad = next((a for a in range(n) if g.inv(a) is None), None)
    rep.add("inverses", bad is None, None if bad is None else {"element": g.elements[bad].key})
    return rep


def is_abelian(g: FiniteGroup) -> tuple[bool, Optional[tuple[int, int]]]:
    for a in range(g.order):
        for b in range(a + 1, g.order):
            if g.mul(a, b) != g.mul(b, a):
                return False, (a, b)
    return True, None
