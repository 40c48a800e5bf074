"""Symplectic model of the hat Weyl group on Y = L+ (+) L-.

Basis order is (x_1..x_M, y_1..y_M), so the form is [[0, I], [-I, 0]] and
x_i, y_i are the root vectors for +alpha_i and -alpha_i. The center vector
X_zeta stays outside Y; only its normalization nu(X_zeta) = 1 is recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .checks import Report
from .groups import FiniteGroup, GroupElement, group_closure
from .rational import RatMat, neg
from .sandwich import HatSystem

CENTER_LABEL = "X_zeta"


@dataclass(frozen=True)
class PhaseSpace:
    M: int
    basis_labels: tuple  # ((name, hat root), ...) in basis order
    omega: RatMat
    center_label: str = CENTER_LABEL
    center_normalization: int = 1

    @property
    def dim(self) -> int:
        return 2 * self.M

    def form(self, u: Sequence, v: Sequence):
        """Omega(u, v) for coordinate vectors u, v."""
        w = self.omega.apply(v)
        return sum(a * b for a, b in zip(u, w))

    def is_symplectic(self, m: RatMat) -> bool:
        return m.transpose() @ self.omega @ m == self.omega


def standard_form(m: int) -> RatMat:
    rows = [[0] * (2 * m) for _ in range(2 * m)]
    for i in range(m):
        rows[i][m + i] = 1
        rows[m + i][i] = -1
    return RatMat(rows)


def build_phase_space(h: HatSystem) -> PhaseSpace:
    m = h.M
    labels = tuple((f"x{i + 1}", h.pi_hat[i]) for i in range(m)) + tuple(
        (f"y{i + 1}", neg(h.pi_hat[i])) for i in range(m)
    )
    return PhaseSpace(m, labels, standard_form(m))


class SympMap(GroupElement):
    """A group element whose matrix preserves the phase-space form."""

    @classmethod
    def checked(cls, ps: PhaseSpace, matrix: RatMat) -> "SympMap":
        if not ps.is_symplectic(matrix):
            raise ValueError("matrix does not preserve the symplectic form")
        return cls(matrix)


def s_generator(ps: PhaseSpace, i: int) -> SympMap:
    """S_i: minus the identity on the plane span(x_i, y_i), identity elsewhere (0-based i)."""
    if not 0 <= i < ps.M:
        raise ValueError(f"generator index {i} out of range 0..{ps.M - 1}")
    diag = [1] * ps.dim
    diag[i] = diag[ps.M + i] = -1
    return SympMap.checked(ps, RatMat.diagonal(diag))


def validate_perm(tau: Sequence[int], m: int) -> tuple[int, ...]:
    tau = tuple(int(t) for t in tau)
    if len(tau) != m or sorted(tau) != list(range(m)):
        raise ValueError(f"{tau} is not a permutation of 0..{m - 1}")
    return tau


def lift_permutation(ps: PhaseSpace, tau: Sequence[int]) -> SympMap:
    """T_tau: x_i -> x_tau(i), y_i -> y_tau(i)."""
    tau = validate_perm(tau, ps.M)
    m = ps.M
    rows = [[0] * (2 * m) for _ in range(2 * m)]
    for i, t in enumerate(tau):
        rows[t][i] = 1
        rows[m + t][m + i] = 1
    return SympMap.checked(ps, RatMat(rows))


def compose_perm(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """(a o b)(i) = a(b(i))."""
    return tuple(a[b[i]] for i in range(len(b)))


def script_w(ps: PhaseSpace, cap: int | None = None, workers: int = 1) -> FiniteGroup:
    gens = [s_generator(ps, i) for i in range(ps.M)]
    return group_closure(gens, dim=ps.dim, cap=cap, workers=workers)


def verify_phase_space(ps: PhaseSpace) -> Report:
    rep = Report("phase space")
    m, om = ps.M, ps.omega
    rep.add("antisymmetric", om.transpose() == -om)
    rep.add("invertible", om.is_invertible())
    bad = next(
        ((i, k) for i in range(m) for k in range(m) if om.entry(i, m + k) != (1 if i == k else 0)),
        None,
    )
    rep.add("pairing_delta", bad is None, None if bad is None else {"i": bad[0], "k": bad[1]})
    lag = all(om.entry(i, k) == 0 and om.entry(m + i, m + k) == 0 for i in range(m) for k in range(m))
    rep.add("lagrangian_halves", lag)
    rep.add("nilradical_dimension", ps.dim + 1 == 2 * m + 1)
    return rep


def verify_s_relations(ps: PhaseSpace) -> Report:
    rep = Report("S relations")
    ident = RatMat.identity(ps.dim)
    gens = [s_generator(ps, i) for i in range(ps.M)]
    rep.add("symplectic", all(ps.is_symplectic(g.matrix) for g in gens))
    bad = next((i for i, g in enumerate(gens) if g.matrix @ g.matrix != ident), None)
    rep.add("relation1_involution", bad is None, None if bad is None else {"i": bad})
    bad = next(
        ((i, j) for i, a in enumerate(gens) for j, b in enumerate(gens) if a.matrix @ b.matrix != b.matrix @ a.matrix),
        None,
    )
    rep.add("relation2_commute", bad is None, None if bad is None else {"i": bad[0], "j": bad[1]})
    prod = ident
    for g in gens:
        prod = prod @ g.matrix
    rep.add("relation3_product_is_minus_identity", prod == -ident)
    return rep


def mu_isomorphism(w_hat: FiniteGroup, w_script: FiniteGroup) -> Report:
    """Extend sigma_i -> S_i along words and check it is a well-defined bijective homomorphism."""
    if len(w_hat.generators) != len(w_script.generators):
        raise ValueError(
            f"generator counts differ: {len(w_hat.generators)} vs {len(w_script.generators)}"
        )
    rep = Report("mu isomorphism")
    gh = w_hat.generator_indices()
    gs = w_script.generator_indices()
    mu: dict[int, int] = {w_hat.identity_index: w_script.identity_index}
    frontier = [w_hat.identity_index]
    clash = None
    while frontier and clash is None:
        nxt = []
        for a in frontier:
            for s, t in zip(gh, gs):
                b = w_hat.mul(a, s)
                img = w_script.mul(mu[a], t)
                if b in mu:
                    if mu[b] != img:
                        clash = {"element": w_hat.elements[b].key, "images": [w_script.elements[mu[b]].key, w_script.elements[img].key]}
                        break
                else:
                    mu[b] = img
                    nxt.append(b)
            if clash:
                break
        frontier = nxt
    rep.add("well_defined", clash is None, clash)
    rep.add("defined_everywhere", len(mu) == w_hat.order, None if len(mu) == w_hat.order else {"reached": len(mu)})

    bad = None
    if clash is None and len(mu) == w_hat.order:
        for a in range(w_hat.order):
            for b in range(w_hat.order):
                if mu[w_hat.mul(a, b)] != w_script.mul(mu[a], mu[b]):
                    bad = {"a": w_hat.elements[a].key, "b": w_hat.elements[b].key}
                    break
            if bad:
                break
    else:
        bad = {"reason": "map not defined"}
    rep.add("homomorphism", bad is None, bad)
    bij = len(set(mu.values())) == len(mu) == w_script.order == w_hat.order
    rep.add("bijective", bij, None if bij else {"hat_order": w_hat.order, "script_order": w_script.order, "images": len(set(mu.values()))})
    rep.data["mu"] = {w_hat.elements[a].key.decode(): w_script.elements[b].key.decode() for a, b in sorted(mu.items())}
    return rep
