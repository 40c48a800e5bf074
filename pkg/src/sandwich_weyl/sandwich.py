"""Aligned Cartan data, the class-C center test, and the restricted system of the nilradical.

Restriction to the smaller Cartan subalgebra is realized as the orthogonal
projection onto span(R0). Since the grading vector is orthogonal to that span,
two ambient roots restrict to the same functional exactly when their
projections agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

from .checks import Report
from .groups import FiniteGroup, group_closure, is_abelian
from .rational import (
    CoordinateMap,
    RatMat,
    RatVec,
    add,
    dot,
    first_nonzero_sign,
    greedy_basis,
    is_independent,
    is_zero,
    neg,
    orthogonal_projector,
    rank,
    unit_vec,
    vec,
    zero_vec,
)
from .roots import KillingTable, RootSystem, reflection, root_chain, simple_roots_of


class AlignmentError(ValueError):
    pass


class NotClassC(ValueError):
    def __init__(self, center: "CenterReport"):
        self.center = center
        super().__init__(
            f"nilradical center has dimension {center.dimension}, class C needs 1"
        )


class RestrictionError(ValueError):
    pass


@dataclass(frozen=True)
class Alignment:
    ambient: RootSystem
    h_star: RatVec
    r_zero: frozenset
    r_minus: frozenset
    restriction: RatMat
    zero_simple: tuple

    def restrict_vector(self, v: RatVec) -> RatVec:
        return self.restriction.apply(v)


@dataclass(frozen=True)
class CenterReport:
    center_roots: frozenset
    dimension: int
    is_class_c: bool

    def to_dict(self) -> dict:
        from .checks import encode

        return {
            "center_roots": encode(sorted(self.center_roots)),
            "dimension": self.dimension,
            "is_class_c": self.is_class_c,
        }


@dataclass(frozen=True)
class HatSystem:
    """Restricted roots of the nilradical, written in coordinates over Pi-hat.

    ``embedding`` holds the projected ambient vectors of Pi-hat, so a hat
    vector c corresponds to the ambient vector sum(c_i * embedding_i).
    """

    M: int
    zeta: RatVec
    phi: frozenset
    pi_hat: tuple
    fibers: dict = field(hash=False, compare=True)
    embedding: tuple = ()

    @property
    def basis(self) -> tuple:
        return self.pi_hat

    @property
    def roots(self) -> frozenset:
        """R-hat: phi with zeta adjoined."""
        return self.phi | {self.zeta}


def align(ambient: RootSystem, h_star: Sequence) -> Alignment:
    h = vec(h_star)
    if len(h) != ambient.dim:
        raise AlignmentError(f"grading vector has length {len(h)}, ambient coordinates have dimension {ambient.dim}")
    if is_zero(h):
        raise AlignmentError("grading vector must be nonzero")
    r_zero = frozenset(r for r in ambient.roots if dot(r, h) == 0)
    r_minus = frozenset(r for r in ambient.roots if dot(r, h) < 0)
    if not r_zero:
        raise AlignmentError("no ambient root vanishes on the grading vector")
    if rank(sorted(r_zero)) != ambient.rank - 1:
        raise AlignmentError(
            f"R0 spans a space of dimension {rank(sorted(r_zero))}, expected ambient rank - 1 = {ambient.rank - 1}"
        )
    simple = tuple(simple_roots_of(r_zero))
    rep = verify_system(r_zero, simple, name="R0 axioms")
    if not rep.passed:
        bad = rep.first_failure()
        raise AlignmentError(f"R0 is not a system of roots: {bad.name} fails with {bad.witness}")
    projector = orthogonal_projector(greedy_basis(sorted(r_zero)))
    return Alignment(ambient, h, r_zero, r_minus, projector, simple)


def nilradical_center(a: Alignment) -> CenterReport:
    """Roots of R- whose root vector brackets to zero with all of R-."""
    roots = a.ambient.roots
    center = frozenset(
        x for x in a.r_minus if all(add(x, y) not in roots for y in a.r_minus)
    )
    return CenterReport(center, len(center), len(center) == 1)


def restrict(a: Alignment) -> HatSystem:
    center = nilradical_center(a)
    if not center.is_class_c:
        raise NotClassC(center)
    images: dict[RatVec, set] = {}
    for r in sorted(a.r_minus):
        images.setdefault(a.restrict_vector(r), set()).add(r)
    d = a.ambient.dim
    zero = zero_vec(d)
    if zero not in images:
        raise RestrictionError("no root of R- restricts to zero")
    if frozenset(images[zero]) != center.center_roots:
        raise RestrictionError(
            "the zero restriction is not spanned by the center: "
            f"fiber {sorted(images[zero])} vs center {sorted(center.center_roots)}"
        )
    nonzero = [v for v in images if not is_zero(v)]
    pos = sorted((v for v in nonzero if first_nonzero_sign(v) > 0), reverse=True)
    negs = {v for v in nonzero if first_nonzero_sign(v) < 0}
    if negs != {neg(v) for v in pos}:
        raise RestrictionError("nonzero restrictions do not split as Pi-hat and its negative")
    if not pos or not is_independent(pos):
        raise RestrictionError("positive restricted roots are not linearly independent")
    cm = CoordinateMap(pos)
    m = len(pos)
    fibers = {cm.coords(v): frozenset(rs) for v, rs in images.items()}
    phi = frozenset(k for k in fibers if not is_zero(k))
    pi_hat = tuple(unit_vec(m, i) for i in range(m))
    return HatSystem(m, zero_vec(m), phi, pi_hat, fibers, tuple(pos))


def hat_coordinates(h: HatSystem, a: Alignment, ambient_root: RatVec) -> RatVec:
    """Hat vector of the restriction of an ambient root."""
    return CoordinateMap(h.embedding).coords(a.restrict_vector(ambient_root))


# --- axioms -----------------------------------------------------------------


def verify_system(phi, basis: Sequence[RatVec] | None = None, dim: int | None = None, name: str = "axioms") -> Report:
    """Exhaustive check of the five system-of-roots axioms.

    Chains always run inside phi with zero adjoined. ``dim``, when given,
    is the dimension the basis must span (the hat space).
    """
    rep = Report(name)
    phi = frozenset(tuple(v) for v in phi)
    ordered = sorted(phi)
    with_zero = ordered + ([zero_vec(len(ordered[0]))] if ordered else [])
    allowed = set(with_zero)
    basis = list(basis) if basis is not None else greedy_basis(ordered)

    bad = next((v for v in ordered if is_zero(v)), None)
    rep.add("nonzero", bad is None, None if bad is None else {"vector": bad})

    w = None
    if not is_independent(basis):
        w = {"reason": "basis is linearly dependent", "basis": basis}
    elif dim is not None and len(basis) != dim:
        w = {"reason": f"basis has {len(basis)} vectors, space has dimension {dim}"}
    else:
        cm = CoordinateMap(basis) if basis else None
        outside = next((v for v in ordered if cm is None or not cm.in_span(v)), None)
        if outside is not None:
            w = {"reason": "vector outside span of basis", "vector": outside}
        elif rank(ordered) != len(basis):
            w = {"reason": "basis spans more than phi"}
    rep.add("axiom1_span", w is None, w)

    bad = next((v for v in ordered if neg(v) not in phi), None)
    rep.add("axiom2_symmetric", bad is None, None if bad is None else {"vector": bad, "missing": neg(bad)})

    kt = KillingTable(phi)
    w = None
    for beta in with_zero:
        for alpha in with_zero:
            try:
                ch = root_chain(phi, beta, alpha)
            except (RuntimeError, ValueError) as exc:
                w = {"beta": beta, "alpha": alpha, "reason": str(exc)}
                break
            if not is_zero(alpha):
                lo = add(beta, tuple(-(ch.q + 1) * x for x in alpha))
                hi = add(beta, tuple((ch.p + 1) * x for x in alpha))
                if any(e not in allowed for e in ch.elements) or lo in allowed or hi in allowed:
                    w = {"beta": beta, "alpha": alpha, "q": ch.q, "p": ch.p}
                    break
            kt._cache[(beta, alpha)] = ch.killing
        if w:
            break
    rep.add("axiom3_chains", w is None, w)
    if w is not None:
        rep.add("axiom4_additive", False, {"reason": "chains undefined"})
        rep.add("axiom5_normalized", False, {"reason": "chains undefined"})
        return rep

    # pair sums do not depend on alpha: find them once on integer-scaled vectors
    den = lcm(*(x.denominator for v in with_zero for x in v)) if with_zero else 1
    ints = [tuple(int(x * den) for x in v) for v in with_zero]
    scaled = {v: i for i, v in enumerate(ints)}
    krow = [tuple(kt(b, a) for a in ordered) for b in with_zero]
    w = None
    for i, b1 in enumerate(ints):
        for j, b2 in enumerate(ints):
            k = scaled.get(tuple(x + y for x, y in zip(b1, b2)))
            if k is None:
                continue
            for col, alpha in enumerate(ordered):
                if krow[k][col] != krow[i][col] + krow[j][col]:
                    w = {"alpha": alpha, "beta1": with_zero[i], "beta2": with_zero[j],
                         "lhs": krow[k][col], "rhs": krow[i][col] + krow[j][col]}
                    break
            if w:
                break
        if w:
            break
    rep.add("axiom4_additive", w is None, w)

    bad = next((a for a in ordered if kt(a, a) != 2), None)
    rep.add("axiom5_normalized", bad is None, None if bad is None else {"alpha": bad, "killing": kt(bad, bad)})
    return rep


def verify_axioms(h: HatSystem) -> Report:
    return verify_system(h.phi, h.pi_hat, dim=h.M, name="hat axioms")


def sum_collapse_check(h: HatSystem) -> bool:
    """Every sum of two roots of phi that lands in R-hat is zeta."""
    roots = h.roots
    for a in h.phi:
        for b in h.phi:
            s = add(a, b)
            if s in roots and s != h.zeta:
                return False
    return True


# --- Weyl group of the hat system -------------------------------------------


def hat_reflection(h: HatSystem, alpha: RatVec):
    return reflection(h.phi, h.pi_hat, alpha, domain=tuple(sorted(h.phi)))


def hat_weyl(h: HatSystem, cap: int | None = None, workers: int = 1) -> FiniteGroup:
    gens = [hat_reflection(h, a) for a in h.pi_hat]
    return group_closure(gens, dim=h.M, cap=cap, workers=workers)


def base_weyl(a: Alignment, cap: int | None = None, workers: int = 1) -> FiniteGroup:
    """Weyl group of R0 acting on the ambient coordinates."""
    domain = tuple(sorted(a.ambient.roots))
    gens = [reflection(a.r_zero, a.zero_simple, s, domain=domain) for s in a.zero_simple]
    return group_closure(gens, dim=a.ambient.dim, cap=cap, workers=workers, domain=domain)


def verify_relations(h: HatSystem, w: FiniteGroup) -> Report:
    rep = Report("hat relations")
    m = h.M
    pis = list(h.pi_hat)
    kt = KillingTable(h.phi)
    ident = RatMat.identity(m)

    bad = next(((i, j) for i in range(m) for j in range(m) if kt(pis[j], pis[i]) != (2 if i == j else 0)), None)
    rep.add("killing_matrix_2I", bad is None, None if bad is None else {"i": bad[0], "j": bad[1]})

    sig = [hat_reflection(h, a) for a in pis]
    bad = None
    for i in range(m):
        for j in range(m):
            want = neg(pis[i]) if i == j else pis[j]
            if sig[i](pis[j]) != want:
                bad = {"i": i, "j": j, "got": sig[i](pis[j]), "want": want}
                break
        if bad:
            break
    rep.add("simple_reflection_images", bad is None, bad)

    bad = None
    for a in sorted(h.phi):
        if hat_reflection(h, a).matrix != hat_reflection(h, neg(a)).matrix.inverse():
            bad = {"alpha": a}
            break
    rep.add("reflection_inverse_of_negative", bad is None, bad)

    bad = next((i for i in range(m) if sig[i].matrix @ sig[i].matrix != ident), None)
    rep.add("relation1_involution", bad is None, None if bad is None else {"i": bad})

    bad = next(
        ((i, j) for i in range(m) for j in range(m) if sig[i].matrix @ sig[j].matrix != sig[j].matrix @ sig[i].matrix),
        None,
    )
    rep.add("relation2_commute", bad is None, None if bad is None else {"i": bad[0], "j": bad[1]})

    prod = ident
    for s in sig:
        prod = prod @ s.matrix
    rep.add("relation3_product_is_minus_identity", prod == -ident, None if prod == -ident else {"product": prod})

    bad = None
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            comp = sig[j].matrix @ sig[i].matrix
            for k in range(m):
                want = neg(pis[i]) if k == i else neg(pis[j]) if k == j else pis[k]
                if comp.apply(pis[k]) != want:
                    bad = {"i": i, "j": j, "k": k}
                    break
            if bad:
                break
        if bad:
            break
    rep.add("pairwise_composition_images", bad is None, bad)

    ok, pair = is_abelian(w)
    rep.add("abelian", ok, None if ok else {"a": w.elements[pair[0]].key, "b": w.elements[pair[1]].key})

    everything = group_closure([hat_reflection(h, a) for a in sorted(h.phi)], dim=m)
    same = everything.keys() == w.keys()
    rep.add("generated_by_simple", same, None if same else {"all_reflections": everything.order, "simple": w.order})

    rep.add("order_2_to_M", w.order == 2**m, None if w.order == 2**m else {"order": w.order, "expected": 2**m})
    return rep
