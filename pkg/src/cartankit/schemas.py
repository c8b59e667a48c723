"""Problem-file and operator JSON schemas (versioned "cartankit/1").

A problem file bundles one Lie algebra, named representations, named
words and default settings.  Matrices are nested arrays whose entries
are numbers or "p/q" strings; indices are 0-based; structure constants
are listed for i < j only.
"""

import json
from dataclasses import dataclass, replace

from . import linalg, reps
from .graded import CochainComplex, GradedOperator, GradedVectorSpace
from .lie import LieAlgebra
from .linalg import EXACT, FLOAT

SCHEMA = "cartankit/1"


@dataclass
class Settings:
    mode: str = FLOAT
    tol: float = 1e-9
    order: int = 16
    series_cap: int = 60
    fd_step: float = 1e-4

    def override(self, **kwargs):
        live = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **live)


class ProblemError(ValueError):
    pass


def load_algebra(payload) -> LieAlgebra:
    n = payload["dim"]
    brackets = {}
    for item in payload.get("brackets", []):
        i, j = int(item["i"]), int(item["j"])
        coeffs = {int(k): linalg.parse_scalar(v, EXACT)
                  for k, v in item["coeffs"].items()}
        brackets[(i, j)] = coeffs
    return LieAlgebra(n, brackets, labels=payload.get("labels"),
                      name=payload.get("name", ""))


def dump_algebra(algebra: LieAlgebra):
    items = []
    for i in range(algebra.n):
        for j in range(i + 1, algebra.n):
            coeffs = {str(k): linalg.format_scalar(algebra.c[i, j, k])
                      for k in range(algebra.n) if algebra.c[i, j, k] != 0}
            if coeffs:
                items.append({"i": i, "j": j, "coeffs": coeffs})
    return {"dim": algebra.n, "brackets": items, "labels": algebra.labels,
            "name": algebra.name}


def _parse_blocks(payload, space, degree, mode):
    blocks = {}
    for key, rows in (payload or {}).items():
        k = int(key)
        mat = linalg.zeros((space.dim(k + degree), space.dim(k)), mode)
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                mat[r, c] = linalg.parse_scalar(v, mode)
        blocks[k] = mat
    return blocks


def load_operator(payload, space, degree, mode) -> GradedOperator:
    return GradedOperator(space, space, degree,
                          _parse_blocks(payload, space, degree, mode), mode=mode)


def dump_operator(op: GradedOperator):
    blocks = {}
    for k, b in op.blocks.items():
        blocks[str(k)] = [[linalg.format_scalar(v) for v in row] for row in b]
    return {"degree": op.degree, "blocks": blocks}


def load_explicit_cartan_rep(payload, algebra, mode) -> reps.CartanRep:
    space = GradedVectorSpace({int(k): int(d) for k, d in payload["degrees"].items()})
    delta = load_operator(payload.get("delta"), space, 1, mode)
    complex_ = CochainComplex(space, delta)
    L = [load_operator(p, space, 0, mode) for p in payload["L"]]
    B = [load_operator(p, space, -1, mode) for p in payload["B"]]
    return reps.CartanRep(algebra, complex_, L, B)


def load_explicit_lie_rep(payload, algebra, mode) -> reps.LieRep:
    space = GradedVectorSpace({int(k): int(d) for k, d in payload["degrees"].items()})
    delta = load_operator(payload.get("delta"), space, 1, mode)
    complex_ = CochainComplex(space, delta)
    ops = [load_operator(p, space, 0, mode) for p in payload["R"]]
    return reps.LieRep(algebra, complex_, ops)


def build_lie_rep(spec, algebra, mode) -> reps.LieRep:
    if spec == "trivial":
        return reps.trivial_lie_rep(algebra, mode=mode)
    if spec == "adjoint":
        return reps.adjoint_rep(algebra, mode=mode)
    if isinstance(spec, dict):
        return load_explicit_lie_rep(spec, algebra, mode)
    raise ProblemError(f"unknown coefficient spec {spec!r}")


def build_cartan_rep(spec, algebra, mode) -> reps.CartanRep:
    if spec == "trivial":
        return reps.trivial_cartan_rep(algebra, mode=mode)
    if isinstance(spec, dict) and "functor" in spec:
        coeff = build_lie_rep(spec.get("coefficients", "trivial"), algebra, mode)
        if spec["functor"] == "U":
            return reps.chain_rep(algebra, coeff)
        if spec["functor"] == "E":
            return reps.cochain_rep(algebra, coeff)
        raise ProblemError(f"unknown functor {spec['functor']!r}")
    if isinstance(spec, dict):
        return load_explicit_cartan_rep(spec, algebra, mode)
    raise ProblemError(f"unknown representation spec {spec!r}")


class Problem:
    def __init__(self, payload, settings: Settings):
        if payload.get("schema") != SCHEMA:
            raise ProblemError(f'problem file must declare "schema": "{SCHEMA}"')
        self.settings = settings
        self.algebra = load_algebra(payload["lie_algebra"])
        self._rep_specs = payload.get("representations", {})
        self._grep_specs = payload.get("lie_representations", {})
        self.words = {}
        for name, letters in payload.get("words", {}).items():
            self.words[name] = [
                self.algebra.vector([linalg.parse_scalar(v, settings.mode) for v in letter],
                                    settings.mode)
                for letter in letters
            ]

    def representation(self, name) -> reps.CartanRep:
        if name not in self._rep_specs:
            raise ProblemError(f"unknown representation {name!r}")
        return build_cartan_rep(self._rep_specs[name], self.algebra, self.settings.mode)

    def lie_representation(self, name) -> reps.LieRep:
        if name not in self._grep_specs:
            raise ProblemError(f"unknown Lie representation {name!r}")
        return build_lie_rep(self._grep_specs[name], self.algebra, self.settings.mode)

    def word(self, name):
        if name not in self.words:
            raise ProblemError(f"unknown word {name!r}")
        return self.words[name]


def load_problem(path, defaults: Settings = None, **overrides) -> Problem:
    """File settings override the defaults; keyword overrides win over both."""
    with open(path) as handle:
        payload = json.load(handle)
    base = defaults or Settings()
    merged = base.override(**payload.get("settings", {})).override(**overrides)
    return Problem(payload, merged)
