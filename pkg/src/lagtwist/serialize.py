"""Loading and serialization: lattice/datum configs and result encodings.

Matrices serialize as arrays of arrays of decimal integer strings so that
consumers with 64-bit JSON parsers never truncate entries.  Symbolic
groups use the token object {"Z": r, "Zn": [...], "C": a, "Cx": c,
"CmodZ": tau}; zero multiplicities are omitted.

Configs are JSON or TOML (by file extension), with the shape

    { "gram": [[...]], "vectors": { "h2": [...] }, "ns": [[...]] }

or a named lattice via "lattice": "cubic_h4_default".
"""

from __future__ import annotations

import json
from pathlib import Path

from .abelian import FinAbGroup, IntegerMatrix
from .analytic import AnalyticGroup, SSPage
from .brauer import BrauerDescriptor, K3HodgeDatum
from .lattices import Lattice, standard_lattice, standard_vectors


class ConfigError(ValueError):
    pass


# --- matrices -------------------------------------------------------------


def matrix_to_json(m: IntegerMatrix):
    return [[str(x) for x in row] for row in m.entries]


def matrix_from_json(data) -> IntegerMatrix:
    return IntegerMatrix([[int(x) for x in row] for row in data])


# --- groups ---------------------------------------------------------------


def group_to_json(g: FinAbGroup):
    return {"rank": g.free_rank, "torsion": list(g.torsion), "pretty": str(g)}


def analytic_to_json(g: AnalyticGroup):
    out = {}
    if g.free_rank:
        out["Z"] = g.free_rank
    if g.torsion:
        out["Zn"] = list(g.torsion)
    if g.cc:
        out["C"] = g.cc
    if g.cstar:
        out["Cx"] = g.cstar
    if g.torus_quots:
        quots = list(g.torus_quots)
        out["CmodZ"] = quots[0] if len(quots) == 1 else quots
    return out


def analytic_from_json(data) -> AnalyticGroup:
    quots = data.get("CmodZ", ())
    if isinstance(quots, int):
        quots = (quots,)
    return AnalyticGroup(
        free_rank=data.get("Z", 0),
        torsion=tuple(data.get("Zn", ())),
        cc=data.get("C", 0),
        cstar=data.get("Cx", 0),
        torus_quots=tuple(quots),
    )


def brauer_to_json(b: BrauerDescriptor):
    return {"corank": b.tau, "symbolic": b.symbolic_form}


# --- spectral sequence pages ----------------------------------------------


def page_to_json(page: SSPage):
    return {
        "page": page.page,
        "cells": [{"p": p, "q": q, "group": analytic_to_json(g)}
                  for (p, q), g in sorted(page.grid.items())],
    }


def render_page(page: SSPage) -> str:
    """Aligned text table of a finitely supported page, q rows descending."""
    if not page.grid:
        return "(empty page)"
    ps = [p for p, _ in page.grid]
    qs = [q for _, q in page.grid]
    p_range = range(min(ps), max(ps) + 1)
    q_range = range(max(qs), min(qs) - 1, -1)
    cells = {q: [str(page.group(p, q)) for p in p_range] for q in q_range}
    width = max((len(s) for row in cells.values() for s in row), default=1)
    width = max(width, 4)
    lines = [f"E_{page.page}:"]
    for q in q_range:
        row = "  ".join(s.rjust(width) for s in cells[q])
        lines.append(f"q={q:<2} | {row}")
    footer = "  ".join(str(p).rjust(width) for p in p_range)
    lines.append(f"       {'-' * len(footer)}")
    lines.append(f"  p    {footer}")
    return "\n".join(lines)


# --- configs ---------------------------------------------------------------


def _read_config(path) -> dict:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def load_lattice_config(path):
    """Read a lattice plus named vectors from a JSON/TOML file.

    Returns (Lattice, vectors dict, full config dict).  Symmetry of the
    Gram matrix and vector lengths are validated here.
    """
    config = _read_config(path)
    if "gram" in config:
        gram = IntegerMatrix([[int(x) for x in row] for row in config["gram"]])
        if gram.rows != gram.cols:
            raise ConfigError("gram matrix must be square")
        if gram != gram.transpose():
            raise ConfigError("gram matrix must be symmetric")
        lattice = Lattice(gram.rows, gram, str(config.get("label", "")))
        vectors = {}
    elif "lattice" in config:
        name = config["lattice"]
        lattice = standard_lattice(name)
        vectors = dict(standard_vectors(name))
    else:
        raise ConfigError("config needs a 'gram' matrix or a 'lattice' name")
    for key, value in config.get("vectors", {}).items():
        vectors[key] = tuple(int(x) for x in value)
    for key, vec in vectors.items():
        if len(vec) != lattice.rank:
            raise ConfigError(f"vector {key!r} has length {len(vec)}, "
                              f"rank is {lattice.rank}")
    return lattice, vectors, config


def load_k3_datum(path, weight_index=1):
    """Read a K3HodgeDatum (lattice + 'ns' list) from a config file."""
    lattice, vectors, config = load_lattice_config(path)
    ns = [tuple(int(x) for x in v) for v in config.get("ns", [])]
    for vec in ns:
        if len(vec) != lattice.rank:
            raise ConfigError("an 'ns' vector has the wrong length")
    datum = K3HodgeDatum.build(lattice, ns, weight_index=weight_index)
    return datum, vectors, config
