"""Report envelopes: JSON serialisation, the v1 schema, and text rendering.

Every command produces an envelope

    {"schema_version": 1, "tool": "cmtype", "tool_version": ..., "command": ...,
     "inputs": {...}, "results": {...}}

built from plain dicts in a fixed key order, so identical inputs give
byte-identical JSON.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import __version__
from .characters import FermatCharacter, HodgeVector
from .crystal import FrobeniusOrbit, NewtonPolygon
from .jacobi import SlopeReport
from .surface import CrystalSummary, OrbitType

SCHEMA_VERSION = 1
TOOL = "cmtype"


def envelope(command: str, inputs: dict, results: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL,
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def dumps(env: dict) -> str:
    return json.dumps(env, indent=2, ensure_ascii=False) + "\n"


# -- CrystalSummary ---------------------------------------------------------

def summary_to_dict(s: CrystalSummary, expand_disc: bool = False) -> dict:
    disc = None
    if s.disc_p_exponent is not None:
        disc = {"sign": s.disc_sign, "prime": s.p, "exponent": s.disc_p_exponent}
        if expand_disc:
            disc["value"] = str(s.disc_sign * s.p ** s.disc_p_exponent)
    d = {
        "m": s.m,
        "p": s.p,
        "b2": s.b2,
        "hodge": {"h20": s.hodge.h20, "h11": s.hodge.h11, "h02": s.hodge.h02},
        "n_orbits": s.n_orbits,
        "orbit_types": [
            {
                "tau_type": list(t.tau_type),
                "count": t.count,
                "length": t.length,
                "slope": str(t.slope),
                "base": list(t.base.b),
                "sigma0_contribution": t.sigma0_contribution,
            }
            for t in s.orbit_types
        ],
        "newton": s.newton.as_list(),
        "newton_above_hodge": s.newton_above_hodge,
        "supersingular": s.supersingular,
        "reason": s.reason,
        "sigma0": s.sigma0,
        "disc": disc,
    }
    if s.orbits is not None:
        d["orbits"] = [{"base": list(o.base.b), "tau": list(o.tau_sequence)} for o in s.orbits]
    return d


def summary_from_dict(d: dict) -> CrystalSummary:
    m = d["m"]
    disc = d["disc"]
    orbits = None
    if "orbits" in d:
        orbits = [FrobeniusOrbit(tuple(o["tau"]), 1, FermatCharacter(m, tuple(o["base"]))) for o in d["orbits"]]
    return CrystalSummary(
        m=m,
        p=d["p"],
        b2=d["b2"],
        hodge=HodgeVector(d["hodge"]["h20"], d["hodge"]["h11"], d["hodge"]["h02"]),
        orbit_types=[
            OrbitType(tuple(t["tau_type"]), t["count"], FermatCharacter(m, tuple(t["base"])),
                      t["sigma0_contribution"])
            for t in d["orbit_types"]
        ],
        newton=NewtonPolygon.from_list(d["newton"]),
        supersingular=d["supersingular"],
        reason=d["reason"],
        sigma0=d["sigma0"],
        disc_sign=disc["sign"] if disc else None,
        disc_p_exponent=disc["exponent"] if disc else None,
        newton_above_hodge=d["newton_above_hodge"],
        orbits=orbits,
    )


def slope_report_to_dict(r: SlopeReport) -> dict:
    return {
        "m": r.m,
        "p": r.p,
        "q": r.q,
        "f": r.f,
        "passed": r.passed,
        "rows": [row.as_dict() for row in r.rows],
    }


# -- text rendering -----------------------------------------------------------

def _tup(xs) -> str:
    return "(" + ",".join(str(x) for x in xs) + ")"


def render_summary(d: dict) -> str:
    h = d["hodge"]
    lines = [
        f"Fermat surface X_{d['m']} at p = {d['p']}",
        f"  b2             {d['b2']}",
        f"  Hodge numbers  h20={h['h20']} h11={h['h11']} h02={h['h02']}",
        f"  orbits         {d['n_orbits']}",
        "  orbit types:",
    ]
    for t in d["orbit_types"]:
        contrib = "-" if t["sigma0_contribution"] is None else t["sigma0_contribution"]
        lines.append(f"    {_tup(t['tau_type']):<24} x{t['count']:<6} slope {t['slope']:<6} "
                     f"sigma0 {contrib:<4} first base {_tup(t['base'])}")
    newton = ", ".join(f"{r['slope']} x{r['multiplicity']}" for r in d["newton"])
    lines.append(f"  Newton slopes  {newton}")
    lines.append(f"  Newton on/above Hodge: {'yes' if d['newton_above_hodge'] else 'NO'}")
    lines.append(f"  supersingular  {'yes' if d['supersingular'] else 'no'} ({d['reason']})")
    if d["disc"] is None:
        lines.append("  sigma0         absent (not supersingular)")
        lines.append("  disc NS        absent (rank NS < b2)")
    else:
        disc = d["disc"]
        sign = "+" if disc["sign"] > 0 else "-"
        lines.append(f"  sigma0         {d['sigma0']}")
        lines.append(f"  disc NS        {sign}{disc['prime']}^{disc['exponent']}")
        if "value" in disc:
            lines.append(f"                 = {disc['value']}")
    return "\n".join(lines)


def render_sigma0(d: dict) -> str:
    return "\n".join([
        f"tau            {_tup(d['tau'])}",
        f"partial sums   {_tup(d['partial_sums'])}",
        f"n              {d['n']}",
        f"m's            {_tup(d['m'])}",
        f"contribution   {d['contribution']}",
    ])


def render_dieudonne(d: dict) -> str:
    lines = [
        f"tau            {_tup(d['tau'])}",
        f"generators     {', '.join(d['generators']) or '-'}",
        f"relations      {d['text']}",
        f"dimension      {d['dimension']}",
    ]
    if d["truncated"]:
        lines.append("warning        a p-power survived to the V-adic truncation bound and was set to 0")
    return "\n".join(lines)


def render_quotient(d: dict) -> str:
    gens = "; ".join(_tup(g) for g in d["subgroup"]) or "trivial"
    head = [
        f"quotient of X_{d['m']} by <{gens}>",
        f"  invariant characters  {d['invariant_count']}",
        f"  exceptional lattice   {d['exceptional_lattice']}",
    ]
    return "\n".join(head) + "\n" + render_summary(d["invariant_part"])


def render_oracle(d: dict) -> str:
    lines = [f"Jacobi slope check m={d['m']} p={d['p']} q={d['q']} (f={d['f']})",
             f"  {'orbit base':<22}{'len':>4}{'slope':>8}{'v(J)':>6}{'f*slope':>9}  result"]
    for r in d["rows"]:
        expected = Fraction(r["expected_slope"]) * r["f"]
        lines.append(f"  {_tup(r['orbit_base']):<22}{r['orbit_length']:>4}{r['expected_slope']:>8}"
                     f"{r['measured_valuation']:>6}{str(expected):>9}  {'pass' if r['passed'] else 'FAIL'}")
    lines.append(f"{'PASS' if d['passed'] else 'FAIL'}: {len(d['rows'])} orbits checked")
    return "\n".join(lines)


# -- schema -------------------------------------------------------------------

_INT = {"type": "integer"}
_INTS = {"type": "array", "items": _INT}
_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

_SUMMARY = {
    "type": "object",
    "required": ["m", "p", "b2", "hodge", "n_orbits", "orbit_types", "newton", "newton_above_hodge",
                 "supersingular", "reason", "sigma0", "disc"],
    "properties": {
        "m": _INT,
        "p": _INT,
        "b2": _INT,
        "hodge": {
            "type": "object",
            "required": ["h20", "h11", "h02"],
            "properties": {"h20": _INT, "h11": _INT, "h02": _INT},
        },
        "n_orbits": _INT,
        "orbit_types": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["tau_type", "count", "length", "slope", "base", "sigma0_contribution"],
                "properties": {
                    "tau_type": _INTS,
                    "count": _INT,
                    "length": _INT,
                    "slope": _RATIONAL,
                    "base": {**_INTS, "minItems": 4, "maxItems": 4},
                    "sigma0_contribution": {"type": ["integer", "null"]},
                },
            },
        },
        "newton": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["slope", "multiplicity"],
                "properties": {"slope": _RATIONAL, "multiplicity": _INT},
            },
        },
        "newton_above_hodge": {"type": "boolean"},
        "supersingular": {"type": "boolean"},
        "reason": {"type": "string"},
        "sigma0": {"type": ["integer", "null"]},
        "disc": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["sign", "prime", "exponent"],
                    "properties": {
                        "sign": {"enum": [-1, 1]},
                        "prime": _INT,
                        "exponent": _INT,
                        "value": {"type": "string", "pattern": r"^-?\d+$"},
                    },
                },
            ]
        },
        "orbits": {
            "type": "array",
            "items": {"type": "object", "required": ["base", "tau"],
                      "properties": {"base": _INTS, "tau": _INTS}},
        },
    },
}

_SIGMA0 = {
    "type": "object",
    "required": ["tau", "partial_sums", "n", "m", "multiplicity", "contribution"],
    "properties": {
        "tau": _INTS, "partial_sums": _INTS, "n": _INT, "m": _INTS,
        "multiplicity": _INT, "contribution": _INT,
    },
}

_DIEUDONNE = {
    "type": "object",
    "required": ["tau", "generators", "relations", "dimension", "truncated", "text"],
    "properties": {
        "tau": _INTS,
        "generators": {"type": "array", "items": {"type": "string"}},
        "relations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["generator", "f_power", "rhs"],
                "properties": {
                    "generator": {"type": "string"},
                    "f_power": _INT,
                    "rhs": {
                        "oneOf": [
                            {"type": "null"},
                            {"type": "object", "required": ["v", "p", "f", "target"],
                             "properties": {"v": _INT, "p": _INT, "f": _INT, "target": {"type": "string"}}},
                        ]
                    },
                },
            },
        },
        "dimension": _INT,
        "truncated": {"type": "boolean"},
        "text": {"type": "string"},
    },
}

_QUOTIENT = {
    "type": "object",
    "required": ["m", "p", "subgroup", "invariant_count", "invariant_characters",
                 "exceptional_lattice", "invariant_part"],
    "properties": {
        "m": _INT,
        "p": _INT,
        "subgroup": {"type": "array", "items": _INTS},
        "invariant_count": _INT,
        "invariant_characters": {"type": "array", "items": _INTS},
        "exceptional_lattice": {"const": "not computed"},
        "invariant_part": _SUMMARY,
    },
}

_ORACLE = {
    "type": "object",
    "required": ["m", "p", "q", "f", "passed", "rows"],
    "properties": {
        "m": _INT, "p": _INT, "q": _INT, "f": _INT, "passed": {"type": "boolean"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["orbit_base", "orbit_length", "expected_slope", "measured_valuation", "f",
                             "max_purity_error", "passed"],
                "properties": {
                    "orbit_base": _INTS,
                    "orbit_length": _INT,
                    "expected_slope": _RATIONAL,
                    "measured_valuation": _INT,
                    "f": _INT,
                    "max_purity_error": {"type": "number"},
                    "passed": {"type": "boolean"},
                },
            },
        },
    },
}

RESULT_SCHEMAS = {
    "fermat analyze": _SUMMARY,
    "fermat quotient": _QUOTIENT,
    "orbit sigma0": _SIGMA0,
    "orbit dieudonne": _DIEUDONNE,
    "oracle jacobi": _ORACLE,
}

SCHEMA_V1 = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cmtype report envelope, version 1",
    "type": "object",
    "required": ["schema_version", "tool", "tool_version", "command", "inputs", "results"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool": {"const": TOOL},
        "tool_version": {"type": "string"},
        "command": {"enum": list(RESULT_SCHEMAS)},
        "inputs": {"type": "object"},
        "results": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"command": {"const": cmd}}}, "then": {"properties": {"results": schema}}}
        for cmd, schema in RESULT_SCHEMAS.items()
    ],
}

