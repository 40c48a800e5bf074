"""Ambient root systems, root chains, Killing integers and reflections.

Killing integers here are never read off an inner product. They come from
scanning the string beta + j*alpha inside the membership set (with zero
adjoined), which is what makes them usable on the restricted systems where
no natural inner product is given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .checks import Report
from .groups import GroupElement
from .rational import (
    CoordinateMap,
    RatMat,
    RatVec,
    add,
    dot,
    first_nonzero_sign,
    fmt_vec,
    greedy_basis,
    is_zero,
    neg,
    scale,
    unit_vec,
    vec,
    zero_vec,
)

TYPES = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")
_EXCEPTIONAL_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
_MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 2}

half = Fraction(1, 2)


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    roots: frozenset
    simple_roots: tuple

    @property
    def dim(self) -> int:
        return len(self.simple_roots[0])

    def sorted_roots(self) -> list[RatVec]:
        return sorted(self.roots)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.roots

    def __len__(self) -> int:
        return len(self.roots)


def _pm_pairs(n: int, i: int, j: int) -> list[RatVec]:
    out = []
    for si, sj in product((1, -1), repeat=2):
        v = [0] * n
        v[i], v[j] = si, sj
        out.append(vec(v))
    return out


def _e8_roots() -> list[RatVec]:
    roots = [r for i, j in combinations(range(8), 2) for r in _pm_pairs(8, i, j)]
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(Fraction(s, 2) for s in signs))
    return roots


def _e8_simple() -> list[RatVec]:
    a1 = vec([half, -half, -half, -half, -half, -half, -half, half])
    a2 = vec([1, 1, 0, 0, 0, 0, 0, 0])
    rest = [vec([-1 if k == i else 1 if k == i + 1 else 0 for k in range(8)]) for i in range(6)]
    return [a1, a2] + rest


def _normalize_label(type_label: str, rank: int | None) -> str:
    # ("E", 6) and ("E6", None) name the same system
    t = type_label.upper()
    if t in ("E", "F", "G") and rank is not None:
        return f"{t}{rank}"
    if t in ("F", "G"):
        return {"F": "F4", "G": "G2"}[t]
    return t


def build_root_system(type_label: str, rank: int | None = None) -> RootSystem:
    """Root system in Bourbaki coordinates.

    ``A_n`` lives in n+1 coordinates, ``G2`` in 3, and ``E6``/``E7`` inside
    the 8 coordinates of ``E8``. ``F4`` and ``E`` have half-integer roots.
    """
    t = _normalize_label(type_label, rank)
    if t not in TYPES:
        raise ValueError(f"unknown root system type {type_label!r}; expected one of {', '.join(TYPES)}")
    if t in _EXCEPTIONAL_RANK:
        if rank is not None and rank != _EXCEPTIONAL_RANK[t]:
            raise ValueError(f"type {t} has fixed rank {_EXCEPTIONAL_RANK[t]}, got {rank}")
        rank = _EXCEPTIONAL_RANK[t]
    elif rank is None or rank < _MIN_RANK[t]:
        raise ValueError(f"type {t} needs rank >= {_MIN_RANK[t]}, got {rank}")

    n = rank
    if t == "A":
        d = n + 1
        roots = [vec(unit_vec(d, i)[k] - unit_vec(d, j)[k] for k in range(d)) for i in range(d) for j in range(d) if i != j]
        simple = [add(unit_vec(d, i), unit_vec(d, i + 1, -1)) for i in range(n)]
    elif t in ("B", "C", "D"):
        roots = [r for i, j in combinations(range(n), 2) for r in _pm_pairs(n, i, j)]
        simple = [add(unit_vec(n, i), unit_vec(n, i + 1, -1)) for i in range(n - 1)]
        if t == "B":
            roots += [unit_vec(n, i, s) for i in range(n) for s in (1, -1)]
            simple.append(unit_vec(n, n - 1))
        elif t == "C":
            roots += [unit_vec(n, i, 2 * s) for i in range(n) for s in (1, -1)]
            simple.append(unit_vec(n, n - 1, 2))
        else:
            simple.append(add(unit_vec(n, n - 2), unit_vec(n, n - 1)))
    elif t == "G2":
        short = [vec(unit_vec(3, i)[k] - unit_vec(3, j)[k] for k in range(3)) for i in range(3) for j in range(3) if i != j]
        long_ = []
        for i in range(3):
            v = vec([2 if k == i else -1 for k in range(3)])
            long_ += [v, neg(v)]
        roots = short + long_
        simple = [vec([1, -1, 0]), vec([-2, 1, 1])]
    elif t == "F4":
        roots = [r for i, j in combinations(range(4), 2) for r in _pm_pairs(4, i, j)]
        roots += [unit_vec(4, i, s) for i in range(4) for s in (1, -1)]
        roots += [tuple(Fraction(s, 2) for s in signs) for signs in product((1, -1), repeat=4)]
        simple = [vec([0, 1, -1, 0]), vec([0, 0, 1, -1]), vec([0, 0, 0, 1]), vec([half, -half, -half, -half])]
    else:
        e8 = _e8_roots()
        simple = _e8_simple()
        if t == "E8":
            roots = e8
        else:
            normals = [vec([0, 0, 0, 0, 0, 0, 1, 1])]
            if t == "E6":
                normals.append(vec([0, 0, 0, 0, 0, 1, 0, 1]))
            roots = [r for r in e8 if all(dot(r, h) == 0 for h in normals)]
            simple = simple[:rank]
    return RootSystem(t, rank, frozenset(tuple(r) for r in roots), tuple(simple))


def expected_root_count(type_label: str, rank: int) -> int:
    t = _normalize_label(type_label, rank)
    return {
        "A": rank * (rank + 1),
        "B": 2 * rank * rank,
        "C": 2 * rank * rank,
        "D": 2 * rank * (rank - 1),
        "E6": 72,
        "E7": 126,
        "E8": 240,
        "F4": 48,
        "G2": 12,
    }[t]


def positive_roots(roots: Iterable[RatVec]) -> list[RatVec]:
    """Roots whose first nonzero coordinate is positive, sorted descending."""
    return sorted((r for r in roots if first_nonzero_sign(r) > 0), reverse=True)


def simple_roots_of(roots: Iterable[RatVec]) -> list[RatVec]:
    """Simple roots for the lexicographic positivity rule: positive roots that
    are not a sum of two positive roots."""
    pos = positive_roots(roots)
    sums = {add(a, b) for a in pos for b in pos}
    return [r for r in pos if r not in sums]


# --- chains -----------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    base: RatVec
    direction: RatVec
    q: int
    p: int
    elements: tuple

    @property
    def killing(self) -> int:
        return self.q - self.p


def _allowed(membership) -> set:
    return membership if isinstance(membership, (set, frozenset)) else set(membership)


def root_chain(membership, beta: RatVec, alpha: RatVec) -> Chain:
    """Maximal unbroken string beta + j*alpha, -q <= j <= p, inside membership with 0 adjoined."""
    mem = _allowed(membership)
    beta, alpha = tuple(beta), tuple(alpha)

    def ok(v):
        return v in mem or is_zero(v)

    if not ok(beta):
        raise ValueError(f"base {fmt_vec(beta)} is not in the membership set or zero")
    if not ok(alpha):
        raise ValueError(f"direction {fmt_vec(alpha)} is not in the membership set or zero")
    if is_zero(alpha):
        return Chain(beta, alpha, 0, 0, (beta,))
    # distinct points on a line, so a string can never exceed the set size
    bound = len(mem) + 1
    p = 0
    while ok(add(beta, scale(p + 1, alpha))):
        p += 1
        if p > bound:
            raise RuntimeError("root chain scan did not terminate")
    q = 0
    while ok(add(beta, scale(-(q + 1), alpha))):
        q += 1
        if q > bound:
            raise RuntimeError("root chain scan did not terminate")
    elements = tuple(add(beta, scale(j, alpha)) for j in range(-q, p + 1))
    return Chain(beta, alpha, q, p, elements)


def killing_integer(membership, beta: RatVec, alpha: RatVec) -> int:
    return root_chain(membership, beta, alpha).killing


class KillingTable:
    """Memoized Killing integers over one membership set."""

    def __init__(self, membership):
        self.membership = frozenset(tuple(v) for v in membership)
        self._cache: dict[tuple, int] = {}

    def __call__(self, beta: RatVec, alpha: RatVec) -> int:
        k = (beta, alpha)
        if k not in self._cache:
            self._cache[k] = killing_integer(self.membership, beta, alpha)
        return self._cache[k]


# --- functionals and reflections -------------------------------------------


@dataclass(frozen=True)
class LinFunc:
    """A linear functional, stored as an ambient covector.

    ``values`` are its values on the basis it was built from. For vectors in
    the span of that basis, ``f(v) = covector . v``; off the span the
    covector vanishes on the orthogonal complement.
    """

    covector: RatVec
    values: tuple = field(default=())

    def __call__(self, v: RatVec) -> Fraction:
        return dot(self.covector, v)

    def is_zero(self) -> bool:
        return is_zero(self.covector)


def _check_basis(membership, basis: Sequence[RatVec]) -> CoordinateMap:
    mem = _allowed(membership)
    for b in basis:
        if tuple(b) not in mem:
            raise ValueError(f"basis vector {fmt_vec(b)} is not in the membership set")
    cm = CoordinateMap(basis)
    for v in mem:
        if not cm.in_span(v):
            raise ValueError(f"basis does not span the membership set; {fmt_vec(v)} is outside")
    return cm


def extend_functional(membership, basis: Sequence[RatVec], alpha: RatVec, coords: CoordinateMap | None = None) -> LinFunc:
    """k_alpha: the linear extension of beta -> <beta, alpha> from ``basis``."""
    alpha = tuple(alpha)
    cm = coords if coords is not None else _check_basis(membership, basis)
    d = cm.dim
    if is_zero(alpha):
        return LinFunc(zero_vec(d), tuple(Fraction(0) for _ in cm.basis))
    values = tuple(Fraction(killing_integer(membership, b, alpha)) for b in cm.basis)
    cov = tuple(sum((values[i] * cm.dual[i][c] for i in range(len(values))), Fraction(0)) for c in range(d))
    return LinFunc(cov, values)


def reflection_matrix(alpha: RatVec, k: LinFunc) -> RatMat:
    d = len(alpha)
    return RatMat.from_rows(
        [[(1 if i == j else 0) - alpha[i] * k.covector[j] for j in range(d)] for i in range(d)]
    )


def reflection(membership, basis: Sequence[RatVec], alpha: RatVec, domain=None, coords: CoordinateMap | None = None) -> GroupElement:
    """The map v -> v - k_alpha(v) alpha as a matrix in the ambient coordinates.

    When ``basis`` is the standard basis (as for restricted systems written
    in their own coordinates) this is also the matrix over the basis.
    """
    k = extend_functional(membership, basis, alpha, coords)
    return GroupElement(reflection_matrix(tuple(alpha), k), domain)


def matrix_in_basis(m: RatMat, basis: Sequence[RatVec]) -> RatMat:
    """Matrix of ``m`` (restricted to span(basis)) with respect to ``basis``."""
    cm = CoordinateMap(basis)
    cols = [cm.coords(m.apply(b)) for b in cm.basis]
    return RatMat.from_columns(cols)


def simple_reflections(system_roots, simple: Sequence[RatVec], domain=None) -> list[GroupElement]:
    mem = frozenset(tuple(r) for r in system_roots)
    cm = _check_basis(mem, simple)
    return [reflection(mem, simple, a, domain, cm) for a in simple]


def reflection_laws(phi, basis: Sequence[RatVec] | None = None, name: str = "reflection laws") -> Report:
    """Involution, chain formula, bijectivity and sigma_alpha = sigma_{-alpha}^-1, exhaustively over phi."""
    rep = Report(name)
    phi = frozenset(tuple(v) for v in phi)
    ordered = sorted(phi)
    basis = list(basis) if basis is not None else greedy_basis(ordered)
    cm = _check_basis(phi, basis)
    d = cm.dim
    ident = RatMat.identity(d)
    refl = {a: reflection(phi, basis, a, coords=cm) for a in ordered}
    kt = KillingTable(phi)

    rep.add("zero_reflection_identity", reflection(phi, basis, zero_vec(d), coords=cm).matrix == ident)

    bad = next((a for a in ordered if extend_functional(phi, basis, a, cm)(a) != 2), None)
    rep.add("k_alpha_of_alpha_is_2", bad is None, None if bad is None else {"alpha": bad})

    bad = None
    for a in ordered:
        k = extend_functional(phi, basis, a, cm)
        for b in ordered:
            if k(b) != kt(b, a):
                bad = {"alpha": a, "beta": b, "extended": k(b), "killing": kt(b, a)}
                break
        if bad:
            break
    rep.add("extension_agrees_on_phi", bad is None, bad)

    bad = next((a for a in ordered if refl[a].matrix @ refl[a].matrix != ident), None)
    rep.add("involution", bad is None, None if bad is None else {"alpha": bad})

    bad = None
    for a in ordered:
        for b in ordered:
            ch = root_chain(phi, b, a)
            for j in range(-ch.q, ch.p + 1):
                lhs = refl[a](add(b, scale(j, a)))
                rhs = add(b, scale(ch.p - (ch.q + j), a))
                if lhs != rhs:
                    bad = {"alpha": a, "beta": b, "j": j, "got": lhs, "want": rhs}
                    break
            if bad:
                break
        if bad:
            break
    rep.add("chain_formula", bad is None, bad)

    bad = None
    for a in ordered:
        images = {refl[a](b) for b in ordered}
        if images != set(phi):
            bad = {"alpha": a}
            break
    rep.add("bijective_on_phi", bad is None, bad)

    bad = next((a for a in ordered if refl[a].matrix != refl[neg(a)].matrix.inverse()), None)
    rep.add("inverse_of_negative", bad is None, None if bad is None else {"alpha": bad})
    return rep
