"""JSON wire formats: input schemas, report serializers and published output schemas."""

from __future__ import annotations

from fractions import Fraction

from .kummer.equations import fprime
from .qfield import INF, format_place

VERSION = 1


def tag(name: str) -> str:
    return f"kummerlab.{name}/{VERSION}"


def rational_json(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def place_json(v):
    return "inf" if v == INF else v


# ----------------------------------------------------------------- inputs

_INT = {"type": "integer"}
_RATIONAL = {"oneOf": [{"type": "integer"},
                       {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}]}
_PLACE = {"oneOf": [{"type": "integer", "minimum": 2}, {"enum": ["inf"]}]}
_PAIR = {"type": "array", "items": _RATIONAL, "minItems": 2, "maxItems": 2}

CURVE_INPUT = {
    "type": "object",
    "properties": {
        "c": {"type": "array", "items": _INT, "minItems": 3, "maxItems": 3},
        "d": _INT,
    },
    "required": ["c"],
}

TWIST_SCAN_INPUT = {
    "type": "object",
    "properties": {
        "c": CURVE_INPUT["properties"]["c"],
        "twists": {"type": "array", "items": _INT},
        "bound": {"type": "integer", "minimum": 1},
    },
    "required": ["c"],
}

MAZUR_RUBIN_INPUT = {
    "type": "object",
    "properties": {
        "c": CURVE_INPUT["properties"]["c"],
        "d": _INT,
        "T": {"type": "array", "items": _PLACE},
    },
    "required": ["c", "d"],
}

TWO_STRUCTURE_INPUT = {
    "type": "object",
    "properties": {
        "c": {"type": "array", "items": _INT, "minItems": 3, "maxItems": 3},
        "a": {"type": "array", "items": _INT, "minItems": 6, "maxItems": 6},
        "M": {"type": "array", "items": _INT},
        "extended": {"type": "boolean"},
    },
    "required": ["M"],
    "oneOf": [{"required": ["c"]}, {"required": ["a"]}],
}

_ADM_FACTOR = {
    "type": "object",
    "properties": {
        "c": CURVE_INPUT["properties"]["c"],
        "M": {"type": "array", "items": _INT},
        "alpha": _PAIR,
    },
    "required": ["c", "M"],
}

ADMISSIBLE_INPUT = {
    "oneOf": [
        _ADM_FACTOR,
        {"type": "object",
         "properties": {"curves": {"type": "array", "items": _ADM_FACTOR, "minItems": 1}},
         "required": ["curves"]},
    ]
}

FIND_PRIME_INPUT = {
    "type": "object",
    "properties": {
        "conditions": {
            "type": "array",
            "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2},
        },
        "bound": {"type": "integer", "minimum": 3},
    },
    "required": ["conditions"],
}

KUMMER_INPUT = {
    "type": "object",
    "properties": {
        "a": {"type": "array", "items": _INT, "minItems": 6, "maxItems": 6},
        "b": {"type": "array", "items": _RATIONAL, "minItems": 6, "maxItems": 6},
        "M": {"type": "array", "items": _INT, "minItems": 5, "maxItems": 5},
    },
    "required": ["a", "b"],
}


# ---------------------------------------------------------------- outputs

def _report(name: str, props: dict, required: list) -> dict:
    return {
        "type": "object",
        "properties": {"schema": {"const": tag(name)}, **props},
        "required": ["schema", *required],
    }


_SQ_PAIR = {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}
_CURVE = {"type": "object", "properties": {"c": CURVE_INPUT["properties"]["c"], "d": _INT},
          "required": ["c", "d"]}

OUTPUT_SCHEMAS = {
    "hilbert": _report("hilbert", {"a": _RATIONAL, "b": _RATIONAL, "place": _PLACE,
                                   "symbol": {"enum": [1, -1]}},
                       ["a", "b", "place", "symbol"]),
    "selmer": _report("selmer", {
        "curve": _CURVE, "dim": {"type": "integer", "minimum": 0},
        "basis": {"type": "array", "items": _SQ_PAIR},
        "support": {"type": "array", "items": _INT},
        "torsion": {"type": "array", "items": _SQ_PAIR},
    }, ["curve", "dim", "basis", "support", "torsion"]),
    "twist-scan": _report("twist-scan", {
        "curve": _CURVE,
        "rows": {"type": "array", "items": {
            "type": "object",
            "properties": {"d": _INT, "dim_sel": _INT, "dim_sel_twist": _INT, "r": _INT,
                           "dim_V": _INT, "dim_V_twist": _INT, "gap": _INT,
                           "T": {"type": "array", "items": _PLACE}, "ok": {"type": "boolean"}},
            "required": ["d", "dim_sel", "dim_sel_twist", "r", "dim_V", "dim_V_twist", "gap",
                         "T", "ok"],
        }},
    }, ["curve", "rows"]),
    "mazur-rubin": _report("mazur-rubin", {
        "curve": _CURVE, "d": _INT, "T": {"type": "array", "items": _PLACE},
        "r": _INT, "dim_V": _INT, "dim_V_twist": _INT, "gap": _INT,
        "bound_holds": {"type": "boolean"}, "parity_holds": {"type": "boolean"},
        "places": {"type": "array", "items": {
            "type": "object",
            "properties": {"place": _PLACE, "W": {"type": "array", "items": _SQ_PAIR},
                           "W_twist": {"type": "array", "items": _SQ_PAIR},
                           "U": {"type": "array", "items": _SQ_PAIR}, "dim_bar": _INT},
            "required": ["place", "W", "W_twist", "U", "dim_bar"],
        }},
    }, ["curve", "d", "T", "r", "dim_V", "dim_V_twist", "gap", "places"]),
    "two-structure": _report("two-structure", {
        "accept": {"type": "boolean"}, "extended": {"type": "boolean"},
        "certificates": {"type": "array", "items": {
            "type": "object",
            "properties": {"place": _INT, "pair": {"type": "array", "items": _INT},
                           "point": {"type": "array", "items": _INT}},
            "required": ["place", "pair", "point"],
        }},
        "condition": {"type": "string"}, "place": {"type": ["integer", "string", "null"]},
        "detail": {"type": "string"},
    }, ["accept"]),
    "admissible": _report("admissible", {
        "admissible": {"type": "boolean"},
        "witness": {"oneOf": [{"type": "null"}, {
            "type": "object",
            "properties": {"f": {"type": "object"}, "h": {"type": "object"}},
            "required": ["f", "h"]}]},
    }, ["admissible", "witness"]),
    "find-prime": _report("find-prime", {
        "prime": {"type": ["integer", "null"]}, "error": {"type": "string"},
        "relation": {"type": "array", "items": _INT},
    }, ["prime"]),
    "kummer-build": _report("kummer-build", {
        "a": {"type": "array", "items": _INT}, "b": {"type": "array", "items": _RATIONAL},
        "d": _INT, "fprime": {"type": "array", "items": _INT},
        "forms": {"type": "array", "items": {"type": "array", "items": _INT,
                                             "minItems": 6, "maxItems": 6},
                  "minItems": 3, "maxItems": 3},
    }, ["a", "b", "d", "fprime", "forms"]),
    "kummer-check": _report("kummer-check", {
        "accept": {"type": "boolean"},
        "failed": {"type": "array", "items": {"type": "string"}},
        "items": {"type": "array", "items": {
            "type": "object",
            "properties": {"condition": {"type": "string"}, "ok": {"type": "boolean"},
                           "place": {"type": ["integer", "null"]},
                           "detail": {"type": "string"}},
            "required": ["condition", "ok", "place", "detail"],
        }},
    }, ["accept", "failed", "items"]),
    "kummer-els": _report("kummer-els", {
        "status": {"enum": ["els", "not-els", "undecided"]},
        "els": {"type": ["boolean", "null"]},
        "failing": {"type": "array", "items": _PLACE},
        "undecided": {"type": "array", "items": _PLACE},
        "bad_primes": {"type": "array", "items": _INT},
        "cutoff": _INT, "assumption": {"type": "string"},
        "places": {"type": "array", "items": {
            "type": "object",
            "properties": {
                "place": _PLACE, "soluble": {"type": "boolean"},
                "witness": {"oneOf": [{"type": "null"},
                                      {"type": "array", "items": _INT, "minItems": 6,
                                       "maxItems": 6}]},
                "precision": {"type": ["integer", "null"]},
                "squares": {"oneOf": [{"type": "null"},
                                      {"type": "array", "items": _INT, "minItems": 6,
                                       "maxItems": 6}]},
                "reason": {"type": "string"}, "certificate": {"type": "object"},
            },
            "required": ["place", "soluble", "witness", "precision", "squares", "reason",
                         "certificate"],
        }},
    }, ["status", "els", "failing", "undecided", "bad_primes", "cutoff", "places"]),
    "search-point": _report("search-point", {
        "height": _INT,
        "point": {"oneOf": [{"type": "null"},
                            {"type": "array", "items": _INT, "minItems": 6, "maxItems": 6}]},
    }, ["height", "point"]),
    "error": _report("error", {"error": {"type": "string"}, "pointer": {"type": "string"},
                               "place": _PLACE}, ["error"]),
}


# ------------------------------------------------------------ serializers

def curve_json(curve) -> dict:
    return {"c": list(curve.c), "d": curve.d}


def selmer_json(sel) -> dict:
    return {
        "schema": tag("selmer"),
        "curve": curve_json(sel.curve),
        "dim": sel.dim,
        "basis": [list(b) for b in sel.basis],
        "support": list(sel.support),
        "torsion": [list(t) for t in sel.curve.torsion_images()],
    }


def twist_row(report) -> dict:
    return {
        "d": report.d, "dim_sel": report.dim_sel, "dim_sel_twist": report.dim_sel_twist,
        "r": report.r, "dim_V": report.dim_V, "dim_V_twist": report.dim_V_twist,
        "gap": report.gap, "T": [place_json(v) for v in report.T], "ok": report.ok,
    }


def mazur_rubin_json(report) -> dict:
    return {
        "schema": tag("mazur-rubin"),
        "curve": curve_json(report.curve),
        "d": report.d,
        "T": [place_json(v) for v in report.T],
        "r": report.r, "dim_V": report.dim_V, "dim_V_twist": report.dim_V_twist,
        "gap": report.gap, "bound_holds": report.bound_holds,
        "parity_holds": report.parity_holds,
        "dim_sel": report.dim_sel, "dim_sel_twist": report.dim_sel_twist,
        "places": [
            {"place": place_json(c.place), "W": [list(b) for b in c.W.basis],
             "W_twist": [list(b) for b in c.W_twist.basis],
             "U": [list(b) for b in c.U.basis], "dim_bar": c.dim_bar}
            for c in report.places
        ],
    }


def structure_json(structure) -> dict:
    return {
        "schema": tag("two-structure"),
        "accept": True,
        "extended": structure.extended,
        "certificates": [
            {"place": c.place, "pair": list(c.pair), "point": list(c.point.indices)}
            for c in structure.certificates
        ],
    }


def rejection_json(exc) -> dict:
    place = exc.place
    return {
        "schema": tag("two-structure"),
        "accept": False,
        "condition": exc.condition,
        "place": format_place(place) if place == INF else place,
        "detail": str(exc),
    }


def forms_json(spec, forms) -> dict:
    return {
        "schema": tag("kummer-build"),
        "a": list(spec.a), "b": [rational_json(b) for b in spec.b], "d": spec.d,
        "fprime": fprime(spec.a), "forms": [list(f.coeffs) for f in forms],
    }


def hypotheses_json(report) -> dict:
    return {
        "schema": tag("kummer-check"),
        "accept": report.accept,
        "failed": report.failed,
        "items": [{"condition": i.condition, "ok": i.ok, "place": i.place, "detail": i.detail}
                  for i in report.items],
    }


def verdict_json(v) -> dict:
    return {
        "place": place_json(v.place), "soluble": v.soluble,
        "witness": list(v.witness) if v.witness is not None else None,
        "precision": v.precision,
        "squares": list(v.squares) if v.squares is not None else None,
        "reason": v.reason, "certificate": v.certificate,
    }


def certificate_json(cert) -> dict:
    return {
        "schema": tag("kummer-els"),
        "status": cert.status,
        "els": cert.els,
        "failing": [place_json(v) for v in cert.failing],
        "undecided": [place_json(v) for v in cert.undecided],
        "bad_primes": cert.bad_primes,
        "cutoff": cert.cutoff,
        "assumption": cert.assumption,
        "places": [verdict_json(v) for v in cert.verdicts],
    }
