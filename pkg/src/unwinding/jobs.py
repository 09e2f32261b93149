"""
Job descriptions for the command line and the JSON/CSV result format.

A job is a JSON object::

    {"function": {"poly": [[1, 0], [2, 0]]}            # or "rational", "preset"
     "strategy": {"kind": "fixed", "lambdas": [[0.5, 0]], "tail": "repeat_last"},
     "params": {"M": 256, "N": 1024, "p": 2, "max_terms": 50, "tol": 1e-10, "seed": 0},
     "format": "json", "out": "result.json"}

Complex numbers are ``[re, im]`` pairs; plain reals are accepted too.
"""

from __future__ import annotations

import csv
import io
import json
import numbers
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

import numpy as np
from scipy.signal import lfilter

from .errors import DomainError
from .hardy import DEFAULT_M, DEFAULT_N, AnalyticCoeffs, cauchy_kernel
from .multipliers import TAIL_RULES
from .strategies import ClassicalUnwinding, FixedSequence, GreedyAFD, Outer, Taylor

SCHEMA_VERSION = "1"
POLE_MARGIN = 1.05
DEFAULTS = {"M": DEFAULT_M, "N": DEFAULT_N, "p": 2.0, "max_terms": 50, "tol": 1e-10, "seed": 0}


class JobError(DomainError):
    """Malformed or inconsistent job description."""


def parse_complex(v) -> complex:
    if isinstance(v, numbers.Number) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, numbers.Real) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            pass
    raise JobError(f"cannot read {v!r} as a complex number")


def complex_pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


@dataclass
class JobSpec:
    function: Any
    strategy: Any = "taylor"
    M: int = DEFAULT_M
    N: int = DEFAULT_N
    p: float = 2.0
    max_terms: int = 50
    tol: float = 1e-10
    seed: int = 0
    format: str = "json"
    out: Optional[str] = None

    def validate(self):
        if not isinstance(self.M, int) or self.M < 1:
            raise JobError(f"M={self.M!r} must be a positive integer")
        if not isinstance(self.N, int) or self.N < 2 * self.M or self.N & (self.N - 1):
            raise JobError(f"N={self.N!r} must be a power of two with N >= 2M = {2 * self.M}")
        if not (1.0 < float(self.p) < np.inf):
            raise JobError(f"p={self.p!r} must lie in (1, inf)")
        if not isinstance(self.max_terms, int) or self.max_terms < 0:
            raise JobError(f"max_terms={self.max_terms!r} must be a nonnegative integer")
        if not float(self.tol) >= 0:
            raise JobError(f"tol={self.tol!r} must be nonnegative")
        if self.format not in ("json", "csv"):
            raise JobError(f"format={self.format!r} must be json or csv")
        return self


def parse_job(obj: Dict) -> JobSpec:
    if not isinstance(obj, dict):
        raise JobError("job must be a JSON object")
    unknown = set(obj) - {"function", "strategy", "params", "format", "out"}
    if unknown:
        raise JobError(f"unknown job keys: {sorted(unknown)}")
    if "function" not in obj:
        raise JobError("job needs a 'function' entry")
    params = dict(DEFAULTS)
    extra = obj.get("params", {}) or {}
    if not isinstance(extra, dict):
        raise JobError("'params' must be an object")
    bad = set(extra) - set(DEFAULTS)
    if bad:
        raise JobError(f"unknown params: {sorted(bad)}")
    params.update(extra)
    job = JobSpec(
        function=obj["function"],
        strategy=obj.get("strategy", "taylor"),
        M=params["M"],
        N=params["N"],
        p=float(params["p"]),
        max_terms=params["max_terms"],
        tol=float(params["tol"]),
        seed=params["seed"],
        format=obj.get("format", "json"),
        out=obj.get("out"),
    )
    return job.validate()


def override(job: JobSpec, **kwargs) -> JobSpec:
    changes = {k: v for k, v in kwargs.items() if v is not None}
    return replace(job, **changes).validate()


def rational_coeffs(num, den, M: int) -> AnalyticCoeffs:
    """Taylor coefficients of ``num/den`` (lowest degree first), truncated to ``M``."""
    num = np.array([parse_complex(v) for v in num], dtype=complex)
    den = np.array([parse_complex(v) for v in den], dtype=complex)
    if den.size == 0 or den[0] == 0:
        raise JobError("denominator must have a nonzero constant term")
    nz = np.nonzero(den)[0]
    den = den[: nz[-1] + 1]
    if den.size > 1:
        poles = np.roots(den[::-1])
        near = poles[np.abs(poles) <= POLE_MARGIN]
        if near.size:
            raise JobError(f"poles {near.tolist()} lie within |z| <= {POLE_MARGIN}")
    impulse = np.zeros(4 * M, dtype=complex)
    impulse[0] = 1.0
    h = lfilter(num, den, impulse)
    return AnalyticCoeffs(h[:M], float(np.linalg.norm(h[M:])))


def build_function(desc, M: int) -> AnalyticCoeffs:
    if isinstance(desc, list):
        desc = {"poly": desc}
    if isinstance(desc, str):
        desc = {"preset": desc}
    if not isinstance(desc, dict) or len(desc) != 1:
        raise JobError("function must be one of {'poly': ...}, {'rational': ...}, {'preset': ...}")
    (kind, val), = desc.items()
    if kind == "poly":
        if not isinstance(val, list) or not val:
            raise JobError("poly needs a nonempty coefficient list")
        c = [parse_complex(v) for v in val]
        if len(c) > M:
            raise JobError(f"polynomial of length {len(c)} exceeds truncation order M={M}")
        return AnalyticCoeffs.from_values(c, M)
    if kind == "rational":
        if not isinstance(val, dict) or set(val) != {"num", "den"}:
            raise JobError("rational needs exactly 'num' and 'den'")
        return rational_coeffs(val["num"], val["den"], M)
    if kind == "preset":
        name, _, arg = str(val).partition(":")
        if name == "cauchy":
            try:
                return cauchy_kernel(parse_complex(arg), M)
            except DomainError as exc:
                raise JobError(str(exc)) from None
        raise JobError(f"unknown preset {val!r}")
    raise JobError(f"unknown function kind {kind!r}")


def build_strategy(desc):
    if isinstance(desc, str):
        desc = {"kind": desc}
    if not isinstance(desc, dict) or "kind" not in desc:
        raise JobError("strategy must be a name or an object with 'kind'")
    d = dict(desc)
    kind = d.pop("kind")
    try:
        if kind == "taylor":
            return Taylor()
        if kind == "outer":
            return Outer()
        if kind == "fixed":
            lams = tuple(parse_complex(v) for v in d.pop("lambdas", []))
            tail = d.pop("tail", None)
            if tail is not None and tail not in TAIL_RULES:
                raise JobError(f"unknown tail rule {tail!r}")
            strategy = FixedSequence(lams, tail)
        elif kind == "greedy":
            strategy = GreedyAFD(int(d.pop("radii", 32)), int(d.pop("angles", 256)), float(d.pop("r_max", 0.95)))
        elif kind == "classical":
            strategy = ClassicalUnwinding(float(d.pop("eps_root", 1e-6)), int(d.pop("max_degree", 512)))
        else:
            raise JobError(f"unknown strategy kind {kind!r}")
    except DomainError as exc:
        raise JobError(str(exc)) from None
    if d:
        raise JobError(f"unexpected strategy keys: {sorted(d)}")
    return strategy


# output -----------------------------------------------------------------------

TRIM_ATOL = 1e-14


def coeff_pairs(f: AnalyticCoeffs) -> list:
    """``[re, im]`` pairs with trailing entries below ``TRIM_ATOL`` dropped (at least one kept)."""
    c = f.coeffs
    big = np.nonzero(np.abs(c) > TRIM_ATOL)[0]
    n = int(big[-1]) + 1 if big.size else 1
    return [complex_pair(z) for z in c[:n]]


def result_record(result, f: AnalyticCoeffs, config_extra: Optional[Dict] = None) -> Dict:
    from .expansion import verify_reconstruction

    config = result.config.as_dict()
    if config_extra:
        config.update(config_extra)
    terms = []
    for t in result.terms:
        rec = {"n": t.n, "coeffs": coeff_pairs(t.term_fn), "norm": float(t.norm)}
        if t.lam is not None:
            rec["lambda"] = complex_pair(t.lam)
        if t.scalar is not None:
            rec["scalar"] = complex_pair(t.scalar)
        terms.append(rec)
    out = {
        "version": SCHEMA_VERSION,
        "config": config,
        "terms": terms,
        "residual_norms": [float(x) for x in result.residual_norms],
        "dichotomy": result.dichotomy.value,
    }
    if result.model_term is not None:
        out["model_term"] = coeff_pairs(result.model_term)
    out["reconstruction_error"] = float(verify_reconstruction(result, f).error)
    return out


def dumps_json(record: Dict) -> str:
    return json.dumps(record, indent=1, allow_nan=True) + "\n"


def dumps_csv(result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "residual_norm", "term_norm"])
    for n, rn in enumerate(result.residual_norms):
        w.writerow([n, repr(float(rn)), repr(float(result.terms[n - 1].norm)) if n else ""])
    return buf.getvalue()


_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_COEFFS = {"type": "array", "items": _PAIR, "minItems": 1}

OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "config", "terms", "residual_norms", "dichotomy", "reconstruction_error"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "config": {
            "type": "object",
            "required": ["M", "N", "p", "max_terms", "tol", "strategy"],
        },
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "coeffs", "norm"],
                "properties": {
                    "n": {"type": "integer", "minimum": 1},
                    "coeffs": _COEFFS,
                    "norm": {"type": "number", "minimum": 0},
                    "lambda": _PAIR,
                    "scalar": _PAIR,
                },
                "additionalProperties": False,
            },
        },
        "residual_norms": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
        "dichotomy": {"enum": ["vanishing", "limit", "indeterminate"]},
        "model_term": _COEFFS,
        "reconstruction_error": {"type": "number", "minimum": 0},
        "unwinding": {
            "type": "object",
            "required": ["constants", "degrees", "excluded_roots"],
            "properties": {
                "constants": {"type": "array", "items": _PAIR},
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "excluded_roots": {"type": "array", "items": _PAIR},
            },
        },
        "afd": {
            "type": "object",
            "required": ["lambdas", "energy"],
            "properties": {
                "lambdas": {"type": "array", "items": _PAIR},
                "energy": {"type": "array", "items": {"type": "number", "minimum": 0}},
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "tol", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "value": {"type": "number"},
                    "tol": {"type": "number"},
                    "pass": {"type": "boolean"},
                },
            },
        },
    },
    "additionalProperties": False,
}
