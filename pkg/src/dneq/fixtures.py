"""Golden cases and uniformizer recipes shipped as JSON data.

Files are written as ``json.dumps(obj, indent=2) + "\\n"``; loading and
re-serializing a file reproduces it byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .numth import rat, rat_str
from .weyl import DNMatrix, DPoly, WeylOp

__all__ = [
    "UnsupportedPair",
    "UnsupportedLevel",
    "GoldenFixture",
    "UniformizerSpec",
    "dumps",
    "load_golden",
    "golden",
    "golden_pairs",
    "load_uniformizers",
    "uniformizer_spec",
    "SUPPORTED_LEVELS",
]

SUPPORTED_LEVELS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 11)


class UnsupportedPair(LookupError):
    pass


class UnsupportedLevel(LookupError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read(name: str) -> str:
    return resources.files("dneq").joinpath("data", name).read_text()


@dataclass(frozen=True)
class GoldenFixture:
    N: int
    d: int
    c0: Fraction
    matrix: DNMatrix
    operator_terms: tuple  # ((tdeg, scale, ((coeffs), ...)), ...) as printed
    phi_combo: tuple | None  # ((j, e_j), ...) or None for sqrt(E4)
    sqrt_e4: int | None
    eta_product: tuple
    provenance: str

    @property
    def pair(self) -> tuple[int, int]:
        return (self.N, self.d)

    @property
    def operator(self) -> WeylOp:
        terms: dict[int, DPoly] = {}
        for k, scale, factors in self.operator_terms:
            p = DPoly.from_factors(scale, factors)
            terms[k] = terms[k] + p if k in terms else p
        return WeylOp(terms)

    @classmethod
    def from_json(cls, obj: dict) -> GoldenFixture:
        if obj.get("provenance") != "[PAPER]":
            raise ValueError("golden fixtures must carry provenance [PAPER]")
        N, d = obj["pair"]
        phi = obj["phi"]
        return cls(
            N=N,
            d=d,
            c0=rat(obj["c0"]),
            matrix=DNMatrix.from_rows(obj["matrix"]),
            operator_terms=tuple(
                (t["tdeg"], rat(t["scale"]), tuple(tuple(rat(c) for c in f) for f in t["factors"]))
                for t in obj["operator"]
            ),
            phi_combo=tuple((j, rat(e)) for j, e in phi["combo"]) if "combo" in phi else None,
            sqrt_e4=phi.get("sqrt_E4"),
            eta_product=tuple(tuple(x) for x in obj["eta_product"]),
            provenance=obj["provenance"],
        )

    def to_json(self) -> dict:
        if self.phi_combo is not None:
            phi = {"combo": [[j, rat_str(e)] for j, e in self.phi_combo]}
        else:
            phi = {"sqrt_E4": self.sqrt_e4}
        return {
            "pair": [self.N, self.d],
            "c0": rat_str(self.c0),
            "matrix": self.matrix.rows(),
            "phi": phi,
            "eta_product": [list(x) for x in self.eta_product],
            "operator": [
                {"tdeg": k, "scale": rat_str(s), "factors": [[rat_str(c) for c in f] for f in fs]}
                for k, s, fs in self.operator_terms
            ],
            "provenance": self.provenance,
        }


@lru_cache(maxsize=None)
def _golden_doc() -> dict:
    return json.loads(_read("golden.json"))


@lru_cache(maxsize=None)
def load_golden() -> tuple[GoldenFixture, ...]:
    return tuple(GoldenFixture.from_json(c) for c in _golden_doc()["cases"])


def golden_document(cases=None) -> dict:
    """The golden file as a JSON object (optionally with replacement cases)."""
    doc = dict(_golden_doc())
    doc["cases"] = [c.to_json() for c in (cases if cases is not None else load_golden())]
    return doc


def golden_pairs() -> list[tuple[int, int]]:
    return sorted(c.pair for c in load_golden())


def golden(N: int, d: int) -> GoldenFixture:
    for c in load_golden():
        if c.pair == (N, d):
            return c
    raise UnsupportedPair(f"({N},{d}) is not one of the tabulated pairs")


@dataclass(frozen=True)
class UniformizerSpec:
    """Eta-quotient recipe for the inverse uniformizer ``q^-1 + c0 + O(q)``.

    ``summands`` is a tuple of ``(scale, ((i, e_i), ...))``; empty for the
    level-1 ``j`` function.
    """

    N: int
    summands: tuple
    c0: Fraction | None = None

    @property
    def is_j(self) -> bool:
        return not self.summands

    def with_c0(self, c0) -> UniformizerSpec:
        return UniformizerSpec(self.N, self.summands, rat(c0))

    @classmethod
    def from_json(cls, obj: dict) -> UniformizerSpec:
        if obj.get("kind") == "j":
            return cls(obj["N"], ())
        return cls(
            obj["N"],
            tuple((rat(s["scale"]), tuple((i, e) for i, e in s["factors"])) for s in obj["summands"]),
        )

    def to_json(self) -> dict:
        if self.is_j:
            return {"N": self.N, "kind": "j"}
        return {
            "N": self.N,
            "summands": [
                {"scale": rat_str(s), "factors": [[i, e] for i, e in fs]} for s, fs in self.summands
            ],
        }


@lru_cache(maxsize=None)
def _uniformizer_doc() -> dict:
    return json.loads(_read("uniformizers.json"))


def uniformizers_document(specs=None) -> dict:
    doc = dict(_uniformizer_doc())
    doc["levels"] = [s.to_json() for s in (specs if specs is not None else load_uniformizers())]
    return doc


@lru_cache(maxsize=None)
def load_uniformizers() -> tuple[UniformizerSpec, ...]:
    return tuple(UniformizerSpec.from_json(x) for x in _uniformizer_doc()["levels"])


def uniformizer_spec(N: int, c0=None) -> UniformizerSpec:
    for s in load_uniformizers():
        if s.N == N:
            return s if c0 is None else s.with_c0(c0)
    raise UnsupportedLevel(f"no uniformizer recipe for level {N}")


def default_c0(N: int) -> Fraction:
    """``a11`` of the tabulated ``(N, 1)`` matrix."""
    return golden(N, 1).matrix[1, 1]
