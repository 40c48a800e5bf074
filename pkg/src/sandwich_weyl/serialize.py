"""JSON bundle format.

Rationals are ``[num, den]`` integer pairs; vectors are lists of pairs;
matrices are ``{"rows", "cols", "entries"}``. Sets are written sorted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .checks import encode
from .rational import RatMat, RatVec
from .roots import RootSystem
from .sandwich import Alignment, CenterReport, HatSystem

BUNDLE_SCHEMA = "sandwich-bundle/1"


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class Bundle:
    ambient: RootSystem
    alignment: Alignment
    center: CenterReport
    hat: HatSystem


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _rat(x) -> Fraction:
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(v, int) for v in x) and x[1] > 0):
        raise BundleError(f"bad rational {x!r}")
    f = Fraction(x[0], x[1])
    if (f.numerator, f.denominator) != tuple(x):
        raise BundleError(f"rational {x!r} is not reduced")
    return f


def _vec(v) -> RatVec:
    if not isinstance(v, list):
        raise BundleError(f"bad vector {v!r}")
    return tuple(_rat(x) for x in v)


def _vecs(vs) -> list[RatVec]:
    return [_vec(v) for v in vs]


def _mat(m) -> RatMat:
    try:
        rows = [[_rat(x) for x in r] for r in m["entries"]]
        if len(rows) != m["rows"] or any(len(r) != m["cols"] for r in rows):
            raise BundleError("matrix dimensions disagree with entries")
    except (KeyError, TypeError) as exc:
        raise BundleError(f"bad matrix: {exc}") from exc
    return RatMat.from_rows(rows)


def bundle_to_dict(b: Bundle) -> dict:
    a, h = b.alignment, b.hat
    return {
        "schema": BUNDLE_SCHEMA,
        "ambient": {
            "type": b.ambient.type_label,
            "rank": b.ambient.rank,
            "dim": b.ambient.dim,
            "roots": encode(sorted(b.ambient.roots)),
            "simple_roots": encode(b.ambient.simple_roots),
        },
        "alignment": {
            "h_star": encode(a.h_star),
            "r_zero": encode(sorted(a.r_zero)),
            "r_minus": encode(sorted(a.r_minus)),
            "zero_simple": encode(a.zero_simple),
            "restriction": encode(a.restriction),
        },
        "center": b.center.to_dict(),
        "hat": {
            "M": h.M,
            "zeta": encode(h.zeta),
            "phi": encode(sorted(h.phi)),
            "pi_hat": encode(h.pi_hat),
            "embedding": encode(h.embedding),
            "fibers": [
                {"hat_root": encode(k), "roots": encode(sorted(h.fibers[k]))} for k in sorted(h.fibers)
            ],
        },
    }


def bundle_from_dict(d: dict) -> Bundle:
    if not isinstance(d, dict) or d.get("schema") != BUNDLE_SCHEMA:
        raise BundleError(f"not a {BUNDLE_SCHEMA} document")
    try:
        am, al, ce, ha = d["ambient"], d["alignment"], d["center"], d["hat"]
        ambient = RootSystem(am["type"], int(am["rank"]), frozenset(_vecs(am["roots"])), tuple(_vecs(am["simple_roots"])))
        alignment = Alignment(
            ambient,
            _vec(al["h_star"]),
            frozenset(_vecs(al["r_zero"])),
            frozenset(_vecs(al["r_minus"])),
            _mat(al["restriction"]),
            tuple(_vecs(al["zero_simple"])),
        )
        center = CenterReport(frozenset(_vecs(ce["center_roots"])), int(ce["dimension"]), bool(ce["is_class_c"]))
        hat = HatSystem(
            int(ha["M"]),
            _vec(ha["zeta"]),
            frozenset(_vecs(ha["phi"])),
            tuple(_vecs(ha["pi_hat"])),
            {_vec(f["hat_root"]): frozenset(_vecs(f["roots"])) for f in ha["fibers"]},
            tuple(_vecs(ha["embedding"])),
        )
    except (KeyError, TypeError) as exc:
        raise BundleError(f"malformed bundle: missing or bad field {exc}") from exc
    return Bundle(ambient, alignment, center, hat)


def dumps_bundle(b: Bundle, indent: int | None = None) -> str:
    return json.dumps(bundle_to_dict(b), sort_keys=True, indent=indent)


def loads_bundle(text: str) -> Bundle:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"bundle is not valid JSON: {exc}") from exc
    return bundle_from_dict(d)
