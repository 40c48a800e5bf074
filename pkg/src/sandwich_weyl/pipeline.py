"""End-to-end pipeline: configuration, bundle construction, the check registry, and alignment scans."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from fractions import Fraction
from math import gcd
from typing import Callable

from .checks import FAIL, PASS, SKIPPED, Report, encode
from .groups import FiniteGroup, default_cap, verify_group_axioms
from .rational import vec
from .roots import build_root_system, reflection_laws
from .sandwich import (
    AlignmentError,
    NotClassC,
    RestrictionError,
    align,
    base_weyl,
    hat_weyl,
    nilradical_center,
    restrict,
    sum_collapse_check,
    verify_axioms,
    verify_relations,
    verify_system,
)
from .semidirect import (
    SemidirectProduct,
    build_semidirect,
    check_rminus_stability,
    conjugation_check,
    exact_sequence_check,
    induced_table,
    phi_homomorphism_check,
    phi_table,
    tau_homomorphism_check,
    verify_semidirect_axioms,
)
from .serialize import Bundle
from .symplectic import build_phase_space, mu_isomorphism, script_w, verify_phase_space, verify_s_relations

REPORT_SCHEMA = "sandwich-report/1"

CHECKS = (
    "axioms",
    "sum_collapse",
    "reflections",
    "relations",
    "symplectic",
    "mu",
    "rminus_stability",
    "tau_homomorphism",
    "conjugation",
    "phi_homomorphism",
    "semidirect",
    "exact_sequence",
    "splitting",
)

# exhaustive table scans above these orders fall back to generator-based checks
ASSOCIATIVITY_LIMIT = 64
FULL_TABLE_LIMIT = 512


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    ambient_type: str
    rank: int | None
    h_star: list[int]
    checks: list[str] = field(default_factory=lambda: list(CHECKS))
    output_format: str = "json"
    seed_cap: int | None = None
    workers: int = 1

    def validate(self) -> None:
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
        if self.output_format not in ("json", "text"):
            raise ConfigError(f"output format must be json or text, got {self.output_format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.seed_cap is not None and self.seed_cap < 1:
            raise ConfigError("closure cap must be positive")

    def to_dict(self) -> dict:
        return {
            "ambient_type": self.ambient_type,
            "rank": self.rank,
            "h_star": encode(list(self.h_star)),
            "checks": list(self.checks),
            "output_format": self.output_format,
            "seed_cap": self.seed_cap,
        }


def build_bundle(ambient_type: str, rank: int | None, h_star) -> Bundle:
    """Raises ConfigError for bad input and NotClassC at the class-C gate."""
    try:
        ambient = build_root_system(ambient_type, rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        a = align(ambient, h_star)
    except AlignmentError as exc:
        raise ConfigError(str(exc)) from exc
    center = nilradical_center(a)
    h = restrict(a)
    return Bundle(ambient, a, center, h)


class Verifier:
    """Lazily builds the groups a check needs and runs registered checks."""

    def __init__(self, bundle: Bundle, cap: int | None = None, workers: int = 1):
        self.b = bundle
        self.a = bundle.alignment
        self.h = bundle.hat
        self.cap = default_cap() if cap is None else cap
        self.workers = workers
        self.registry: dict[str, Callable[[], Report]] = {
            "axioms": self._axioms,
            "sum_collapse": self._sum_collapse,
            "reflections": self._reflections,
            "relations": self._relations,
            "symplectic": self._symplectic,
            "mu": self._mu,
            "rminus_stability": self._rminus,
            "tau_homomorphism": self._tau,
            "conjugation": self._conjugation,
            "phi_homomorphism": self._phi_hom,
            "semidirect": self._semidirect,
            "exact_sequence": self._exact,
            "splitting": self._splitting,
        }

    # groups, built on first use
    @cached_property
    def w_hat(self) -> FiniteGroup:
        return hat_weyl(self.h, self.cap, self.workers)

    @cached_property
    def w_base(self) -> FiniteGroup:
        return base_weyl(self.a, self.cap, self.workers)

    @cached_property
    def phase_space(self):
        return build_phase_space(self.h)

    @cached_property
    def w_script(self) -> FiniteGroup:
        return script_w(self.phase_space, self.cap, self.workers)

    @cached_property
    def induced(self):
        return induced_table(self.a, self.h, self.w_base)

    @cached_property
    def phi(self):
        return phi_table(self.phase_space, self.w_script, self.induced)

    @cached_property
    def sdp(self) -> SemidirectProduct:
        return build_semidirect(self.w_script, self.w_base, self.phi, self.cap)

    @cached_property
    def _exact_report(self) -> Report:
        return exact_sequence_check(self.sdp)

    def orders(self) -> dict:
        got = self.__dict__
        return {
            "W_R": got["w_base"].order if "w_base" in got else None,
            "W_R_hat": got["w_hat"].order if "w_hat" in got else None,
            "W_script": got["w_script"].order if "w_script" in got else None,
            "W_R_tilde": got["sdp"].order if "sdp" in got else None,
        }

    def _axioms(self) -> Report:
        rep = Report("axioms")
        rep.extend(verify_axioms(self.h), "hat.")
        rep.extend(verify_system(self.a.r_zero, self.a.zero_simple, name="R0"), "r_zero.")
        a = self.a
        consistent = (
            a.r_zero == frozenset(r for r in a.ambient.roots if sum(x * y for x, y in zip(r, a.h_star)) == 0)
            and a.r_minus == frozenset(r for r in a.ambient.roots if sum(x * y for x, y in zip(r, a.h_star)) < 0)
        )
        rep.add("alignment_consistent", consistent)
        fibers_ok = all(
            a.restrict_vector(r) == tuple(sum((c * e[k] for c, e in zip(hv, self.h.embedding)), 0) for k in range(a.ambient.dim))
            for hv, rs in self.h.fibers.items()
            for r in rs
        )
        rep.add("fibers_consistent", fibers_ok)
        return rep

    def _sum_collapse(self) -> Report:
        rep = Report("sum collapse")
        rep.add("phi_sums_in_R_hat_are_zeta", sum_collapse_check(self.h))
        return rep

    def _reflections(self) -> Report:
        rep = Report("reflections")
        rep.extend(reflection_laws(self.h.phi, self.h.pi_hat), "hat.")
        rep.extend(reflection_laws(self.a.r_zero, self.a.zero_simple), "r_zero.")
        return rep

    def _relations(self) -> Report:
        rep = Report("relations")
        rep.extend(verify_group_axioms(self.w_hat), "group.")
        rep.extend(verify_relations(self.h, self.w_hat))
        return rep

    def _symplectic(self) -> Report:
        rep = Report("symplectic")
        rep.extend(verify_phase_space(self.phase_space), "phase_space.")
        rep.extend(verify_s_relations(self.phase_space), "generators.")
        m = self.h.M
        rep.add("order_2_to_M", self.w_script.order == 2**m, {"order": self.w_script.order} if self.w_script.order != 2**m else None)
        return rep

    def _mu(self) -> Report:
        rep = mu_isomorphism(self.w_hat, self.w_script)
        rep.data.clear()
        return rep

    def _rminus(self) -> Report:
        return check_rminus_stability(self.a, self.w_base.elements)

    def _tau(self) -> Report:
        return tau_homomorphism_check(self.a, self.h, self.w_base, self.induced)

    def _conjugation(self) -> Report:
        return conjugation_check(self.phase_space, self.induced, self.w_base)

    def _phi_hom(self) -> Report:
        return phi_homomorphism_check(
            self.phase_space, self.w_script, self.w_base, self.induced, self.phi,
            all_pairs=self.w_base.order <= FULL_TABLE_LIMIT,
        )

    def _semidirect(self) -> Report:
        n = self.sdp.order
        if n <= FULL_TABLE_LIMIT:
            rep = verify_semidirect_axioms(self.sdp, associativity=n <= ASSOCIATIVITY_LIMIT)
        else:
            rep = verify_semidirect_axioms_by_generators(self.sdp)
        return rep

    def _exact(self) -> Report:
        rep = Report("exact sequence")
        for c in self._exact_report.checks:
            if c.name != "splitting_ok":
                rep.checks.append(c)
        return rep

    def _splitting(self) -> Report:
        rep = Report("splitting")
        rep.checks.append(self._exact_report.get("splitting_ok"))
        return rep

    def run(self, checks) -> tuple[dict, dict]:
        verdicts, timing = {}, {}
        for name in CHECKS:
            if name not in checks:
                verdicts[name] = {"status": SKIPPED}
                continue
            t0 = time.perf_counter()
            try:
                rep = self.registry[name]()
                verdicts[name] = rep.to_dict()
                verdicts[name].pop("name", None)
            except Exception as exc:  # a verifier that cannot run is a failed verdict
                verdicts[name] = {"status": FAIL, "error": f"{type(exc).__name__}: {exc}",
                                  "witness": encode(getattr(exc, "witness", None))}
            timing[name] = round(time.perf_counter() - t0, 6)
        return verdicts, timing


def verify_semidirect_axioms_by_generators(sdp: SemidirectProduct) -> Report:
    """For large orders: closure under right multiplication by generators, identity, inverse formula.

    A finite set containing the identity and closed under right
    multiplication by a generating set is the whole generated group.
    """
    rep = Report("semidirect axioms")
    gens = [sdp.index[g] for g in sdp.generators]
    bad = next(((i, j) for i in range(sdp.order) for j in gens if sdp.mul(i, j) is None), None)
    rep.add("closure_under_generators", bad is None, None if bad is None else {"a": sdp.element(bad[0]), "b": sdp.element(bad[1])})
    e = sdp.index.get(sdp.identity)
    rep.add("identity", e is not None and all(sdp.mul(e, i) == i == sdp.mul(i, e) for i in range(sdp.order)))
    bad = None
    for i, g in enumerate(sdp.pairs):
        inv = sdp.inverse_pair(g)
        if sdp.mul_pair(g, inv) != sdp.identity or sdp.mul_pair(inv, g) != sdp.identity:
            bad = {"element": sdp.element(i)}
            break
    rep.add("inverses", bad is None, bad)
    expected = sdp.w_script.order * sdp.w_base.order
    rep.add("order_is_product", sdp.order == expected, None if sdp.order == expected else {"order": sdp.order, "expected": expected})
    return rep


def run_report(bundle: Bundle, checks=CHECKS, cap: int | None = None, workers: int = 1, config: dict | None = None) -> dict:
    t0 = time.perf_counter()
    v = Verifier(bundle, cap, workers)
    verdicts, timing = v.run(set(checks))
    timing["total"] = round(time.perf_counter() - t0, 6)
    h = bundle.hat
    return {
        "schema": REPORT_SCHEMA,
        "config": config or {},
        "ambient": {"type": bundle.ambient.type_label, "rank": bundle.ambient.rank},
        "alignment": {
            "h_star": encode(bundle.alignment.h_star),
            "r_zero": len(bundle.alignment.r_zero),
            "r_minus": len(bundle.alignment.r_minus),
        },
        "center": bundle.center.to_dict(),
        "hat": {"M": h.M, "roots": encode(sorted(h.roots))},
        "orders": v.orders(),
        "verdicts": verdicts,
        "passed": all(d["status"] != FAIL for d in verdicts.values()),
        "timing": timing,
    }


def canonicalize_report(report: dict) -> dict:
    """Drop timing so identical inputs compare byte-identical."""
    return {k: v for k, v in report.items() if k != "timing"}


def report_text(report: dict) -> str:
    lines = []
    amb = report["ambient"]
    h = ", ".join(str(Fraction(n, d)) for n, d in report["alignment"]["h_star"])
    lines.append(f"ambient {amb['type']}{amb['rank']}  h* = ({h})")
    lines.append(f"|R0| = {report['alignment']['r_zero']}  |R-| = {report['alignment']['r_minus']}")
    c = report["center"]
    lines.append(f"center dimension {c['dimension']}  class C: {'yes' if c['is_class_c'] else 'no'}")
    lines.append(f"M = {report['hat']['M']}")
    orders = ", ".join(f"|{k}| = {v}" for k, v in report["orders"].items() if v is not None)
    if orders:
        lines.append(orders)
    for name, d in report["verdicts"].items():
        lines.append(f"  {name:<18} {d['status']}")
        if d["status"] == FAIL:
            for ch in d.get("checks", []):
                if ch["status"] == FAIL:
                    lines.append(f"      {ch['name']}: {ch.get('witness')}")
            if "error" in d:
                lines.append(f"      {d['error']}")
    lines.append("PASS" if report["passed"] else "FAIL")
    return "\n".join(lines)


def _primitive(v: tuple[int, ...]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in v))
    return tuple(x // g for x in v)


def scan_alignments(ambient_type: str, rank: int | None, bound: int) -> list[dict]:
    """Integer grading vectors in [-bound, bound]^dim that pass the class-C gate.

    Vectors are deduplicated up to positive scaling.
    """
    if bound < 1:
        raise ConfigError("bound must be >= 1")
    try:
        ambient = build_root_system(ambient_type, rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    seen = set()
    found = []
    for h in product(range(-bound, bound + 1), repeat=ambient.dim):
        if not any(h):
            continue
        p = _primitive(h)
        if p in seen:
            continue
        seen.add(p)
        try:
            a = align(ambient, vec(p))
        except AlignmentError:
            continue
        if not nilradical_center(a).is_class_c:
            continue
        try:
            hat = restrict(a)
        except (NotClassC, RestrictionError):
            continue
        found.append({"h_star": list(p), "M": hat.M, "r_zero": len(a.r_zero), "r_minus": len(a.r_minus)})
    found.sort(key=lambda d: (d["M"], [-x for x in d["h_star"]]))
    return found


__all__ = [
    "CHECKS",
    "ConfigError",
    "NotClassC",
    "PASS",
    "PipelineConfig",
    "Verifier",
    "build_bundle",
    "canonicalize_report",
    "report_text",
    "run_report",
    "scan_alignments",
]
