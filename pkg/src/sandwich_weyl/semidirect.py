"""Induced action of W(R0) on the hat roots and the semidirect product with the symplectic model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .checks import Report
from .groups import ClosureCapExceeded, FiniteGroup, GroupElement, check_table, default_cap
from .rational import CoordinateMap, RatMat, RatVec, dot, neg
from .sandwich import Alignment, HatSystem
from .symplectic import PhaseSpace, compose_perm, lift_permutation, s_generator


class InducedActionError(ValueError):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class InducedMap:
    """The action s of one element of W(R0) on the hat space.

    ``tau[i] = j`` and ``signs[i] = +-1`` record s(alpha_i) = signs[i] * alpha_j.
    """

    source: GroupElement
    matrix_on_hat: RatMat
    tau: tuple
    signs: tuple


class _Restrictor:
    def __init__(self, a: Alignment, h: HatSystem):
        self.a = a
        self.h = h
        self.cm = CoordinateMap(h.embedding)

    def __call__(self, ambient: RatVec) -> RatVec:
        return self.cm.coords(self.a.restrict_vector(ambient))


def induced_action(a: Alignment, h: HatSystem, sigma: GroupElement, _restrictor: _Restrictor | None = None) -> InducedMap:
    """s(beta-hat) = restriction of sigma(beta) for any beta in R- over beta-hat.

    Every fiber representative is tried; they must agree.
    """
    res = _restrictor or _Restrictor(a, h)
    images: dict[RatVec, RatVec] = {}
    for hv in sorted(h.fibers):
        got = None
        for beta in sorted(h.fibers[hv]):
            img = sigma(beta)
            if img not in a.r_minus:
                raise InducedActionError(
                    "element does not preserve R-", {"root": beta, "image": img}
                )
            r = res(img)
            if got is None:
                got = (beta, r)
            elif r != got[1]:
                raise InducedActionError(
                    "induced map is not well defined on a fiber",
                    {"hat_root": hv, "representatives": [got[0], beta], "images": [got[1], r]},
                )
        images[hv] = got[1]
    m = h.M
    cols = [images[h.pi_hat[i]] for i in range(m)]
    mat = RatMat.from_columns(cols)
    for hv, img in images.items():
        if mat.apply(hv) != img:
            raise InducedActionError("induced map is not linear on the hat roots", {"hat_root": hv, "image": img})
    if images[h.zeta] != h.zeta:
        raise InducedActionError("induced map moves zeta", {"image": images[h.zeta]})
    if {images[v] for v in h.phi} != set(h.phi):
        raise InducedActionError("induced map does not permute phi", {})
    pos = {v: i for i, v in enumerate(h.pi_hat)}
    tau, signs = [], []
    for c in cols:
        if c in pos:
            tau.append(pos[c])
            signs.append(1)
        else:
            tau.append(pos[neg(c)])
            signs.append(-1)
    return InducedMap(sigma, mat, tuple(tau), tuple(signs))


def induced_table(a: Alignment, h: HatSystem, w_base: FiniteGroup) -> list[InducedMap]:
    res = _Restrictor(a, h)
    return [induced_action(a, h, g, res) for g in w_base.elements]


def check_rminus_stability(a: Alignment, elements: Sequence[GroupElement]) -> Report:
    """Every element keeps every root of R- negative on the grading vector."""
    rep = Report("R- stability")
    w = None
    for g in elements:
        for beta in sorted(a.r_minus):
            img = g(beta)
            if not dot(img, a.h_star) < 0:
                w = {"element": g.key, "root": beta, "image": img, "value": dot(img, a.h_star)}
                break
        if w:
            break
    rep.add("stable", w is None, w)
    return rep


def tau_homomorphism_check(a: Alignment, h: HatSystem, w_base: FiniteGroup, induced: list[InducedMap] | None = None) -> Report:
    rep = Report("tau homomorphism")
    ind = induced if induced is not None else induced_table(a, h, w_base)
    n = w_base.order
    e = w_base.identity_index
    ident = tuple(range(h.M))
    rep.add("identity", ind[e].tau == ident, None if ind[e].tau == ident else {"tau": ind[e].tau})

    gens = w_base.generator_indices()
    bad = next((g for g in gens if ind[g].matrix_on_hat @ ind[g].matrix_on_hat != RatMat.identity(h.M)), None)
    rep.add("generators_induce_involutions", bad is None, None if bad is None else {"element": w_base.elements[bad].key})

    def scan(pairs):
        for i, j in pairs:
            k = w_base.mul(i, j)
            if ind[k].tau != compose_perm(ind[i].tau, ind[j].tau):
                return {"a": w_base.elements[i].key, "b": w_base.elements[j].key,
                        "tau_ab": ind[k].tau, "composed": compose_perm(ind[i].tau, ind[j].tau)}
        return None

    w = scan((i, j) for i in gens for j in gens)
    rep.add("generator_pairs", w is None, w)
    w = scan((i, j) for i in range(n) for j in range(n))
    rep.add("full_table", w is None, w)

    bad = None
    for i in range(n):
        for j in gens:
            k = w_base.mul(i, j)
            if ind[k].matrix_on_hat != ind[i].matrix_on_hat @ ind[j].matrix_on_hat:
                bad = {"a": w_base.elements[i].key, "b": w_base.elements[j].key}
                break
        if bad:
            break
    rep.add("hat_matrices_multiplicative", bad is None, bad)
    return rep


# --- phi --------------------------------------------------------------------


@dataclass(frozen=True)
class PhiMap:
    """Conjugation by the lift T_tau, as an automorphism of the symplectic model."""

    tau: tuple
    lift: RatMat
    lift_inverse: RatMat

    def __call__(self, w: RatMat) -> RatMat:
        return self.lift @ w @ self.lift_inverse

    def on_group(self, w_script: FiniteGroup) -> tuple[int, ...]:
        out = []
        for el in w_script.elements:
            img = self(el.matrix)
            k = w_script.find(img)
            if k is None:
                raise InducedActionError("conjugation leaves the symplectic model", {"element": el.key, "image": img})
            out.append(k)
        if len(set(out)) != len(out):
            raise InducedActionError("conjugation is not injective on the symplectic model", {})
        return tuple(out)


def phi_of(ps: PhaseSpace, im: InducedMap) -> PhiMap:
    t = lift_permutation(ps, im.tau).matrix
    return PhiMap(im.tau, t, t.inverse())


def phi_table(ps: PhaseSpace, w_script: FiniteGroup, induced: Sequence[InducedMap]) -> list[tuple[int, ...]]:
    """phi[s][w]: index of phi_s(w) in w_script for every base element s.

    Conjugation only depends on tau, so equal taus share one row.
    """
    rows: dict[tuple, tuple[int, ...]] = {}
    out = []
    for im in induced:
        if im.tau not in rows:
            rows[im.tau] = phi_of(ps, im).on_group(w_script)
        out.append(rows[im.tau])
    return out


def conjugation_check(ps: PhaseSpace, induced: Sequence[InducedMap], w_base: FiniteGroup) -> Report:
    """T_tau S_i T_tau^-1 = S_tau(i) for the generators of W(R0) and every i."""
    rep = Report("conjugation")
    gens = [s_generator(ps, i) for i in range(ps.M)]
    bad = None
    lifts_ok = True
    for g in w_base.generator_indices():
        im = induced[g]
        t = lift_permutation(ps, im.tau).matrix
        lifts_ok &= ps.is_symplectic(t)
        tinv = t.inverse()
        for i in range(ps.M):
            if t @ gens[i].matrix @ tinv != gens[im.tau[i]].matrix:
                bad = {"element": w_base.elements[g].key, "i": i, "tau": im.tau}
                break
        if bad:
            break
    rep.add("lifts_symplectic", lifts_ok)
    rep.add("conjugates_generators", bad is None, bad)
    return rep


def phi_homomorphism_check(
    ps: PhaseSpace,
    w_script: FiniteGroup,
    w_base: FiniteGroup,
    induced: Sequence[InducedMap],
    table: Sequence[Sequence[int]] | None = None,
    all_pairs: bool = True,
) -> Report:
    rep = Report("phi homomorphism")
    phi = table if table is not None else phi_table(ps, w_script, induced)
    n, nw = w_base.order, w_script.order

    bad = None
    for s in range(n):
        for a in range(nw):
            for b in range(nw):
                if phi[s][w_script.mul(a, b)] != w_script.mul(phi[s][a], phi[s][b]):
                    bad = {"sigma": w_base.elements[s].key, "a": w_script.elements[a].key, "b": w_script.elements[b].key}
                    break
            if bad:
                break
        if bad:
            break
    rep.add("automorphisms", bad is None, bad)

    bad = None
    for s in w_base.generator_indices():
        for i in range(ps.M):
            want = w_script.find(s_generator(ps, induced[s].tau[i]))
            if phi[s][w_script.find(s_generator(ps, i))] != want:
                bad = {"sigma": w_base.elements[s].key, "i": i}
                break
        if bad:
            break
    rep.add("generator_images", bad is None, bad)

    firsts = range(n) if all_pairs else w_base.generator_indices()
    bad = None
    for s in firsts:
        for t in range(n):
            st = w_base.mul(s, t)
            for w in range(nw):
                if phi[st][w] != phi[s][phi[t][w]]:
                    bad = {"sigma": w_base.elements[s].key, "sigma_prime": w_base.elements[t].key, "w": w_script.elements[w].key}
                    break
            if bad:
                break
        if bad:
            break
    rep.add("homomorphism", bad is None, bad)
    return rep


# --- semidirect product ------------------------------------------------------


@dataclass(frozen=True, order=True)
class SdpElement:
    w: bytes
    sigma: bytes

    def to_dict(self) -> dict:
        return {"w": self.w.decode(), "sigma": self.sigma.decode()}


class SemidirectProduct:
    """W-script x W(R0) under (w, s) . (w', s') = (w phi_s(w'), s s').

    Internally elements are index pairs into the two factor groups.
    """

    def __init__(self, w_script: FiniteGroup, w_base: FiniteGroup, phi: Sequence[Sequence[int]], pairs: Sequence[tuple[int, int]], generators: Sequence[tuple[int, int]]):
        self.w_script = w_script
        self.w_base = w_base
        self.phi = phi
        self.pairs = sorted(pairs, key=lambda p: (w_script.elements[p[0]].key, w_base.elements[p[1]].key))
        self.index = {p: i for i, p in enumerate(self.pairs)}
        self.generators = list(generators)

    @property
    def order(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def identity(self) -> tuple[int, int]:
        return (self.w_script.identity_index, self.w_base.identity_index)

    def mul_pair(self, g: tuple[int, int], h: tuple[int, int]) -> tuple[int, int]:
        (w, s), (w2, s2) = g, h
        return (self.w_script.mul(w, self.phi[s][w2]), self.w_base.mul(s, s2))

    def inverse_pair(self, g: tuple[int, int]) -> tuple[int, int]:
        """(phi_{s^-1}(w^-1), s^-1)."""
        w, s = g
        sinv = self.w_base.inv(s)
        return (self.phi[sinv][self.w_script.inv(w)], sinv)

    def mul(self, i: int, j: int) -> Optional[int]:
        return self.index.get(self.mul_pair(self.pairs[i], self.pairs[j]))

    def element(self, i: int) -> SdpElement:
        w, s = self.pairs[i]
        return SdpElement(self.w_script.elements[w].key, self.w_base.elements[s].key)

    def resolve(self, g: SdpElement) -> tuple[int, int]:
        w = self.w_script.find(g.w)
        s = self.w_base.find(g.sigma)
        if w is None or s is None:
            raise ValueError(f"unresolved key in {g}")
        return (w, s)

    def wrap(self, p: tuple[int, int]) -> SdpElement:
        return SdpElement(self.w_script.elements[p[0]].key, self.w_base.elements[p[1]].key)

    def realize(self, p: tuple[int, int], ps: PhaseSpace, induced: Sequence[InducedMap]) -> RatMat:
        """Faithful matrix image diag(w T_tau(s), s) on Y (+) ambient space."""
        w, s = p
        t = lift_permutation(ps, induced[s].tau).matrix
        return RatMat.block_diag(self.w_script.elements[w].matrix @ t, self.w_base.elements[s].matrix)


def sdp_multiply(sdp: SemidirectProduct, g1: SdpElement, g2: SdpElement) -> SdpElement:
    return sdp.wrap(sdp.mul_pair(sdp.resolve(g1), sdp.resolve(g2)))


def build_semidirect(w_script: FiniteGroup, w_base: FiniteGroup, phi: Sequence[Sequence[int]], cap: int | None = None) -> SemidirectProduct:
    """Close {(1, s_alpha)} and {(S_i, 1)} under the twisted product."""
    if len(phi) != w_base.order:
        raise ValueError("phi table does not cover the base group")
    cap = default_cap() if cap is None else cap
    e_w, e_s = w_script.identity_index, w_base.identity_index
    gens = [(e_w, s) for s in w_base.generator_indices()] + [(w, e_s) for w in w_script.generator_indices()]
    probe = SemidirectProduct(w_script, w_base, phi, [], gens)
    seen = {(e_w, e_s)}
    frontier = [(e_w, e_s)]
    while frontier:
        fresh = set()
        for g in frontier:
            for s in gens:
                p = probe.mul_pair(g, s)
                if p not in seen:
                    fresh.add(p)
        seen |= fresh
        frontier = sorted(fresh)
        if len(seen) > cap:
            raise ClosureCapExceeded(f"semidirect closure exceeded {cap} elements")
    return SemidirectProduct(w_script, w_base, phi, list(seen), gens)


def verify_semidirect_axioms(sdp: SemidirectProduct, associativity: bool = True) -> Report:
    """Closure, identity, inverses by the explicit formula, and (optionally) associativity.

    Inverses are checked as (phi_{s^-1}(w^-1), s^-1), the formula the
    construction predicts, not found by search.
    """
    n = sdp.order
    e = sdp.index.get(sdp.identity)

    def inverse(i):
        return sdp.index.get(sdp.inverse_pair(sdp.pairs[i]))

    rep = check_table(
        n, sdp.mul, e, label=sdp.element, associativity=associativity, name="semidirect axioms", inverse=inverse
    )
    expected = sdp.w_script.order * sdp.w_base.order
    rep.add("order_is_product", n == expected, None if n == expected else {"order": n, "expected": expected})
    return rep


def exact_sequence_check(sdp: SemidirectProduct) -> Report:
    """Exactness of W-script -> sdp -> W(R0), normality of the image, and the splitting."""
    rep = Report("exact sequence")
    ws, wb = sdp.w_script, sdp.w_base
    e_w, e_s = ws.identity_index, wb.identity_index
    lam = [sdp.index.get((w, e_s)) for w in range(ws.order)]
    injective = None not in lam and len(set(lam)) == ws.order
    kernel = {i for i, (w, s) in enumerate(sdp.pairs) if s == e_s}
    rep.add("lambda_injective", injective)
    rep.add(
        "image_equals_kernel",
        injective and set(lam) == kernel,
        None if injective and set(lam) == kernel else {"image": len(set(lam) - {None}), "kernel": len(kernel)},
    )

    bad = None
    for i, g in enumerate(sdp.pairs):
        ginv = sdp.inverse_pair(g)
        for w in range(ws.order):
            c = sdp.mul_pair(sdp.mul_pair(g, (w, e_s)), ginv)
            if c[1] != e_s:
                bad = {"g": sdp.element(i), "w": ws.elements[w].key}
                break
        if bad:
            break
    rep.add("image_normal", bad is None, bad)

    bad = None
    for s in range(wb.order):
        for w in range(ws.order):
            if sdp.mul_pair(sdp.mul_pair((e_w, s), (w, e_s)), sdp.inverse_pair((e_w, s))) != (sdp.phi[s][w], e_s):
                bad = {"sigma": wb.elements[s].key, "w": ws.elements[w].key}
                break
        if bad:
            break
    rep.add("conjugation_reproduces_phi", bad is None, bad)

    gamma = [sdp.index.get((e_w, s)) for s in range(wb.order)]
    section = None not in gamma and all(sdp.pairs[gamma[s]][1] == s for s in range(wb.order))
    bad = None
    if section:
        for s in range(wb.order):
            for t in range(wb.order):
                if sdp.mul(gamma[s], gamma[t]) != gamma[wb.mul(s, t)]:
                    bad = {"a": wb.elements[s].key, "b": wb.elements[t].key}
                    break
            if bad:
                break
    indep = all(
        sdp.mul_pair((ws.inv(w), e_s), (w, s)) == (e_w, s) for w in range(ws.order) for s in range(wb.order)
    )
    split = section and bad is None and indep
    rep.add("splitting_ok", split, bad if bad else None if split else {"section": section, "independent_of_w": indep})

    gen_idx = [sdp.index[g] for g in sdp.generators]
    bad = next(
        (
            (i, j)
            for i in range(sdp.order)
            for j in gen_idx
            if sdp.pairs[sdp.mul(i, j)][1] != wb.mul(sdp.pairs[i][1], sdp.pairs[j][1])
        ),
        None,
    )
    rep.add("projection_homomorphism", bad is None, None if bad is None else {"a": sdp.element(bad[0]), "b": sdp.element(bad[1])})
    expected = ws.order * wb.order
    rep.add("order_product_ok", sdp.order == expected, None if sdp.order == expected else {"order": sdp.order, "expected": expected})
    return rep


def realization_check(sdp: SemidirectProduct, ps: PhaseSpace, induced: Sequence[InducedMap]) -> Report:
    """Compare the twisted product with products of block matrices, on all (element, generator) pairs."""
    rep = Report("matrix realization")
    mats = {p: sdp.realize(p, ps, induced) for p in sdp.pairs}
    distinct = len({m.key for m in mats.values()}) == sdp.order
    rep.add("faithful", distinct)
    bad = None
    for g in sdp.pairs:
        for s in sdp.generators:
            if mats[g] @ mats[s] != mats[sdp.mul_pair(g, s)]:
                bad = {"g": sdp.wrap(g), "generator": sdp.wrap(s)}
                break
        if bad:
            break
    rep.add("multiplicative_on_generators", bad is None, bad)
    return rep
