"""JSON and text renderings of automorphism reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .aut import AutReport
from .lattice import IsometryMatrix, signature

SCHEMA_VERSION = "k3aut-report/1"
SAMPLE_ROOTS = 12

ORDER_NOTE = (
    "quadratic values are (a + b*sqrt(D))/(2*den) with D = -det taken literally "
    "(not reduced to its squarefree part); units live in the order of all "
    "(a + b*sqrt(D))/2 with a^2 = D b^2 (mod 4)"
)
CONVENTION_NOTE = "vectors are columns; an isometry M acts by v -> M v"


def matrix_json(M: IsometryMatrix) -> list[int]:
    return list(M.entries)


def aut_report_json(rep: AutReport) -> dict:
    roots = rep.roots
    ch = rep.chamber
    pres = rep.presentation
    return {
        "gram": [rep.gram.g00, rep.gram.g01, rep.gram.g11],
        "det": rep.gram.det,
        "signature": list(signature(rep.gram)),
        "family": None if rep.family is None else {"name": rep.family[0], "d": rep.family[1]},
        "roots": {
            "bound": roots.bound,
            "count_in_bound": len(roots.roots),
            "sample": [list(v) for v in sorted(roots.roots, key=lambda v: (abs(v.x) + abs(v.y), v))[:SAMPLE_ROOTS]],
            "proved_empty": roots.proved_empty,
            "finite": roots.finite,
            "certificate": roots.certificate,
        },
        "isotropic": {
            "vectors": [list(v) for v in rep.isotropic.vectors],
            "discriminant": rep.isotropic.discriminant,
        },
        "chamber": {
            "interior": list(ch.interior),
            "certified": ch.certified,
            "walls": [
                {
                    "kind": w.kind,
                    "ray": w.ray.to_json(),
                    "root": None if w.root is None else list(w.root),
                }
                for w in ch.walls
            ],
            "halfplanes": [list(h) for h in ch.halfplanes()],
        },
        "discriminant_group": {
            "invariant_factors": list(rep.discriminant.invariant_factors),
            "generators_dual_coordinates": [list(g) for g in rep.discriminant.generators],
        },
        "isometry_generators": {
            "verified": rep.isometry_generators.verified,
            "search_bound": rep.isometry_generators.search_bound,
            "matrices": {n: matrix_json(M) for n, M in rep.isometry_generators.items()},
        },
        "aut_generators": {n: matrix_json(M) for n, M in rep.aut_generators.items()},
        "presentation": {
            "structure": pres.structure,
            "certificate_depth": pres.certificate_depth,
            "relations": [str(r) for r in pres.relations],
            "notes": list(pres.notes),
        },
        "infinite": rep.infinite,
        "reference": rep.reference,
        "conventions": {"action": CONVENTION_NOTE, "quadratic_order": ORDER_NOTE},
    }


@dataclass
class ReportDocument:
    input: dict
    report: dict
    discrepancies: list[str] = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_aut(cls, rep: AutReport, input_echo: dict, seconds: float | None = None) -> ReportDocument:
        timing = {} if seconds is None else {"seconds": round(seconds, 6)}
        return cls(
            input=input_echo,
            report=aut_report_json(rep),
            discrepancies=list(rep.discrepancies),
            timing=timing,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, include_timing: bool = True) -> str:
        data = self.to_dict()
        if not include_timing:
            data.pop("timing")
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {data.get('schema_version')!r}")
        return cls(
            input=data["input"],
            report=data["report"],
            discrepancies=data.get("discrepancies", []),
            timing=data.get("timing", {}),
            schema_version=data["schema_version"],
        )


def _fmt_matrix(entries) -> str:
    a, b, c, d = entries
    return f"[[{a}, {b}], [{c}, {d}]]"


def _fmt_quad(q: dict) -> str:
    a, b, D, den = q["a"], q["b"], q["D"], q["den"]
    denom = 2 * den
    if not b:
        return str(Fraction(a, denom))
    sign = "-" if b < 0 else "+"
    coeff = "" if abs(b) == 1 else f"{abs(b)}*"
    return f"({a} {sign} {coeff}sqrt({D}))/{denom}"


def _fmt_halfplane(a: int, b: int) -> str:
    sign = "-" if b < 0 else "+"
    return f"{a}x {sign} {abs(b)}y > 0"


def render_text(doc: ReportDocument) -> str:
    r = doc.report
    lines = [f"schema: {doc.schema_version}"]
    g00, g01, g11 = r["gram"]
    fam = r["family"]
    title = f"Gram form [[{g00}, {g01}], [{g01}, {g11}]]  det={r['det']}  signature={tuple(r['signature'])}"
    if fam:
        title += f"  family {fam['name']}_{fam['d']}"
    lines.append(title)

    roots = r["roots"]
    if roots["proved_empty"]:
        lines.append(f"roots: none ({roots['certificate']})")
    else:
        sample = ", ".join(str(tuple(v)) for v in roots["sample"])
        lines.append(f"roots: {roots['count_in_bound']} classes with |x|,|y| <= {roots['bound']}: {sample}")
    iso = r["isotropic"]["vectors"]
    lines.append("isotropic: " + (", ".join(str(tuple(v)) for v in iso) if iso else "none"))

    ch = r["chamber"]
    lines.append(f"chamber (interior {tuple(ch['interior'])}, certified={ch['certified']}):")
    for w in ch["walls"]:
        ray = ", ".join(_fmt_quad(c) for c in w["ray"])
        extra = f" root {tuple(w['root'])}" if w["root"] else ""
        lines.append(f"  {w['kind']}: ray ({ray}){extra}")
    for a, b in ch["halfplanes"]:
        lines.append(f"  halfplane {_fmt_halfplane(a, b)}")

    dg = r["discriminant_group"]
    lines.append("discriminant group: " + (" x ".join(f"Z/{s}" for s in dg["invariant_factors"]) or "trivial"))
    ig = r["isometry_generators"]
    lines.append(f"O(L) generators (verified={ig['verified']}):")
    for n, m in ig["matrices"].items():
        lines.append(f"  {n} = {_fmt_matrix(m)}")
    lines.append("Aut generators:")
    for n, m in r["aut_generators"].items():
        lines.append(f"  {n} = {_fmt_matrix(m)}")
    pres = r["presentation"]
    lines.append(f"structure: {pres['structure']} (certified to depth {pres['certificate_depth']})")
    for rel in pres["relations"]:
        lines.append(f"  relation: {rel}")
    for note in pres["notes"]:
        lines.append(f"  note: {note}")
    lines.append(f"infinite (no roots, no isotropic vectors): {r['infinite']}")
    for d in doc.discrepancies:
        lines.append(f"DISCREPANCY: {d}")
    if doc.timing:
        lines.append(f"time: {doc.timing['seconds']:.3f}s")
    return "\n".join(lines) + "\n"
