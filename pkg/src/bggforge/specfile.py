"""Geometry spec files: a JSON schema with exact scalar literals.

A spec file carries everything needed to rebuild a homogeneous geometry:
signature, structure constants, the isotropy/complement split, the frame
map, an optional matrix realization, optional exponential-chart factor
tables, and identifiers binding charts/curves to built-in fixture code.
Serialization is canonical (sorted keys, fixed separators), so parsing
and re-serializing a canonical file is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exactfield import Scalar, ZERO, parse_scalar, format_scalar
from .lie import LieAlgebraData, build_so
from .extension import ExtensionSpec

__all__ = ["GeometrySpec", "parse_spec", "serialize_spec"]

SCHEMA = 1


@dataclass
class GeometrySpec:
    name: str
    p: int
    q: int
    kdim: int
    brackets: list                     # (i, j, k, Scalar) with i < j
    h_indices: list
    c_indices: list
    alpha_minus1: list                 # n x len(c_indices) Scalar matrix
    matrix_realization: list | None = None
    diota_rnstar: list | None = None   # per h basis: n covector coordinates
    lan_split: dict | None = None
    gauge: str = "a_zero"
    charts: list = field(default_factory=list)   # chart descriptors
    curves: list = field(default_factory=list)   # curve identifiers

    def bracket_table(self):
        d = self.kdim
        tb = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
        for (i, j, k, val) in self.brackets:
            tb[i][j][k] = val
            tb[j][i][k] = -val
        return tb

    def lie_algebra(self) -> LieAlgebraData:
        return LieAlgebraData(
            dim=self.kdim, bracket_table=self.bracket_table(),
            h_indices=list(self.h_indices), c_indices=list(self.c_indices),
            matrix_realization=self.matrix_realization,
            lan_split=self.lan_split)

    def extension_spec(self) -> ExtensionSpec:
        return ExtensionSpec(
            k=self.lie_algebra(), so=build_so(self.p, self.q),
            alpha_minus1=self.alpha_minus1, gauge=self.gauge,
            diota_rnstar=self.diota_rnstar)


def _fmt_matrix(m):
    return [[format_scalar(x) for x in row] for row in m]


def _parse_matrix(m):
    return [[parse_scalar(x) for x in row] for row in m]


def _fmt_charts(charts):
    out = []
    for ch in charts:
        doc = {"name": ch["name"]}
        if "factors" in ch:
            doc["factors"] = [{"coords": list(f["coords"]),
                               "gens": _fmt_matrix(f["gens"])}
                              for f in ch["factors"]]
        for key in ("base", "premap"):
            if key in ch:
                doc[key] = ch[key]
        out.append(doc)
    return out


def _parse_charts(charts):
    out = []
    for ch in charts:
        doc = {"name": ch["name"]}
        if "factors" in ch:
            doc["factors"] = [{"coords": list(f["coords"]),
                               "gens": _parse_matrix(f["gens"])}
                              for f in ch["factors"]]
        for key in ("base", "premap"):
            if key in ch:
                doc[key] = ch[key]
        out.append(doc)
    return out


def serialize_spec(spec: GeometrySpec) -> str:
    doc = {
        "schema": SCHEMA,
        "name": spec.name,
        "p": spec.p,
        "q": spec.q,
        "kdim": spec.kdim,
        "brackets": [[i, j, k, format_scalar(v)] for (i, j, k, v) in spec.brackets],
        "h_indices": list(spec.h_indices),
        "c_indices": list(spec.c_indices),
        "alpha_minus1": _fmt_matrix(spec.alpha_minus1),
        "gauge": spec.gauge,
        "charts": _fmt_charts(spec.charts),
        "curves": spec.curves,
    }
    if spec.matrix_realization is not None:
        doc["matrix_realization"] = [_fmt_matrix(m) for m in spec.matrix_realization]
    if spec.diota_rnstar is not None:
        doc["diota_rnstar"] = [[format_scalar(x) for x in row]
                               for row in spec.diota_rnstar]
    if spec.lan_split is not None:
        doc["lan_split"] = spec.lan_split
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse_spec(text: str) -> GeometrySpec:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError("unsupported spec schema %r" % doc.get("schema"))
    spec = GeometrySpec(
        name=doc["name"], p=doc["p"], q=doc["q"], kdim=doc["kdim"],
        brackets=[(i, j, k, parse_scalar(v)) for (i, j, k, v) in doc["brackets"]],
        h_indices=list(doc["h_indices"]), c_indices=list(doc["c_indices"]),
        alpha_minus1=_parse_matrix(doc["alpha_minus1"]),
        gauge=doc.get("gauge", "a_zero"),
        charts=_parse_charts(doc.get("charts", [])), curves=doc.get("curves", []))
    if "matrix_realization" in doc:
        spec.matrix_realization = [_parse_matrix(m)
                                   for m in doc["matrix_realization"]]
    if "diota_rnstar" in doc:
        spec.diota_rnstar = [[parse_scalar(x) for x in row]
                             for row in doc["diota_rnstar"]]
    if "lan_split" in doc:
        spec.lan_split = doc["lan_split"]
    n = spec.p + spec.q
    for (i, j, k, _) in spec.brackets:
        if not (0 <= i < spec.kdim and 0 <= j < spec.kdim and 0 <= k < spec.kdim):
            raise ValueError("bracket index out of range")
    for i in spec.h_indices + spec.c_indices:
        if not 0 <= i < spec.kdim:
            raise ValueError("basis index out of range")
    if sorted(spec.h_indices + spec.c_indices) != list(range(spec.kdim)):
        raise ValueError("h and c indices must partition the basis")
    if len(spec.alpha_minus1) != n:
        raise ValueError("alpha_minus1 must have n rows")
    return spec
