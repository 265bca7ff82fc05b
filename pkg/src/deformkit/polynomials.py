"""Sparse multivariate complex polynomials and coefficient-space geometry.

A polynomial in ``n`` variables is stored as a finite map from exponent
tuples to nonzero complex coefficients::

    t1**2 * t2 - 1   ->   SparsePoly(2, {(2, 1): 1.0, (0, 0): -1.0})

Exact zeros are never stored, so ``support_size`` counts the terms that are
actually present.  All values are immutable after construction and every
operation is a pure function, so instances can be shared freely between
threads.

Coefficient-space distance is the sup norm over the union of the two
supports (absent terms count as zero), and ``q`` is a delta-deformation of
``p`` when that distance is strictly below delta.
"""

from __future__ import annotations

import cmath
import json
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "SparsePoly",
    "PolySystem",
    "PRUNE_TOL",
    "coeff_sup_distance",
    "is_delta_deformation",
    "degree_and_support",
    "random_deformation",
]

# Magnitude below which coefficients produced by arithmetic are dropped.
PRUNE_TOL = 1e-14


def _require_finite(c: complex, where: str) -> complex:
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"non-finite coefficient in {where}: {c!r}")
    return c


def _check_index(exps: Sequence[int], nvars: int) -> tuple[int, ...]:
    idx = tuple(int(e) for e in exps)
    if len(idx) != nvars:
        raise ValueError(
            f"exponent tuple {idx} has length {len(idx)}, expected {nvars}"
        )
    if any(e < 0 for e in idx):
        raise ValueError(f"negative exponent in {idx}")
    return idx


class SparsePoly:
    """Immutable sparse polynomial over the complex numbers.

    Parameters
    ----------
    nvars : int
        Number of variables (>= 1).
    terms : mapping from exponent tuple to complex, optional
        Coefficients; exact zeros are dropped.  Omit for the zero
        polynomial.
    """

    __slots__ = ("_nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], complex] | None = None):
        nvars = int(nvars)
        if nvars < 1:
            raise ValueError(f"nvars must be >= 1, got {nvars}")
        clean: dict[tuple[int, ...], complex] = {}
        if terms:
            for exps, coeff in terms.items():
                idx = _check_index(exps, nvars)
                if idx in clean:
                    raise ValueError(f"duplicate exponent tuple {idx}")
                c = _require_finite(coeff, f"term {idx}")
                if c != 0:
                    clean[idx] = c
        object.__setattr__(self, "_nvars", nvars)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # -- basic accessors ---------------------------------------------------

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict[tuple[int, ...], complex]:
        """Copy of the coefficient map."""
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], complex]]:
        """Terms in lexicographic exponent order (the canonical order)."""
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def coeff(self, exps: Sequence[int]) -> complex:
        return self._terms.get(_check_index(exps, self._nvars), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    def support_size(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        """Max total degree over the support; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(idx) for idx in self._terms)

    def degree_in(self, var: int) -> int:
        """Max exponent of variable ``var`` (0-based); -1 if zero."""
        if not self._terms:
            return -1
        return max(idx[var] for idx in self._terms)

    def coeff_inf_norm(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: complex) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, var: int) -> "SparsePoly":
        """The monomial ``t_var`` (0-based index)."""
        if not 0 <= var < nvars:
            raise ValueError(f"variable index {var} out of range for nvars={nvars}")
        exps = [0] * nvars
        exps[var] = 1
        return cls(nvars, {tuple(exps): 1.0 + 0j})

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point: Sequence[complex]) -> complex:
        """Evaluate at a point of length ``nvars``.

        Terms are summed in lexicographic exponent order so the result is
        reproducible across runs.
        """
        if len(point) != self._nvars:
            raise ValueError(
                f"point has dimension {len(point)}, polynomial has {self._nvars}"
            )
        zs = [complex(z) for z in point]
        total = 0j
        for idx, coeff in self.sorted_terms():
            mono = 1 + 0j
            for z, e in zip(zs, idx):
                if e:
                    mono *= z**e
            total += coeff * mono
        return total

    __call__ = evaluate

    # -- arithmetic (plumbing for jets and tests) --------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other._nvars != self._nvars:
                raise ValueError(
                    f"variable count mismatch: {self._nvars} vs {other._nvars}"
                )
            return other
        return SparsePoly.constant(self._nvars, other)

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for idx, c in other._terms.items():
            out[idx] = out.get(idx, 0j) + c
        return SparsePoly(self._nvars, out).prune()

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self._nvars, {i: -c for i, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(self._nvars, other)
        elif other._nvars != self._nvars:
            raise ValueError(
                f"variable count mismatch: {self._nvars} vs {other._nvars}"
            )
        out: dict[tuple[int, ...], complex] = {}
        for ia, ca in self._terms.items():
            for ib, cb in other._terms.items():
                idx = tuple(a + b for a, b in zip(ia, ib))
                out[idx] = out.get(idx, 0j) + ca * cb
        return SparsePoly(self._nvars, out).prune()

    __rmul__ = __mul__

    def prune(self, tol: float = PRUNE_TOL) -> "SparsePoly":
        """Drop coefficients of magnitude below ``tol``."""
        return SparsePoly(
            self._nvars, {i: c for i, c in self._terms.items() if abs(c) >= tol}
        )

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and self._nvars == other._nvars
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self._nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{idx}: {c}" for idx, c in self.sorted_terms())
        return f"SparsePoly({self._nvars}, {{{body}}})"

    # -- JSON (bit-exact round trip) ----------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "nvars": self._nvars,
            "terms": [
                {"exps": list(idx), "re": c.real, "im": c.imag}
                for idx, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SparsePoly":
        try:
            nvars = int(data["nvars"])
            raw_terms = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        terms: dict[tuple[int, ...], complex] = {}
        for entry in raw_terms:
            idx = _check_index(entry["exps"], nvars)
            if idx in terms:
                raise ValueError(f"duplicate exponent tuple {idx}")
            terms[idx] = complex(float(entry["re"]), float(entry["im"]))
        return cls(nvars, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "SparsePoly":
        return cls.from_json_dict(json.loads(text))


class PolySystem:
    """Finite family of polynomials sharing a variable count."""

    __slots__ = ("_polys",)

    def __init__(self, polys: Iterable[SparsePoly]):
        polys = tuple(polys)
        if not polys:
            raise ValueError("a polynomial system must be nonempty")
        nvars = polys[0].nvars
        for p in polys:
            if p.nvars != nvars:
                raise ValueError("all polynomials in a system must share nvars")
        object.__setattr__(self, "_polys", polys)

    def __setattr__(self, name, value):
        raise AttributeError("PolySystem is immutable")

    @property
    def polys(self) -> tuple[SparsePoly, ...]:
        return self._polys

    @property
    def nvars(self) -> int:
        return self._polys[0].nvars

    def __len__(self) -> int:
        return len(self._polys)

    def __iter__(self):
        return iter(self._polys)


# -- coefficient-space operations -------------------------------------------


def coeff_sup_distance(p: SparsePoly, q: SparsePoly) -> float:
    """Sup norm of the coefficient difference over the support union.

    Terms absent from one polynomial are treated as zero, so polynomials
    with different supports are compared on the zero-filled union.
    Restricted to a fixed support this is a metric.
    """
    if p.nvars != q.nvars:
        raise ValueError(f"variable count mismatch: {p.nvars} vs {q.nvars}")
    pt, qt = p.terms, q.terms
    best = 0.0
    for idx in pt.keys() | qt.keys():
        d = abs(qt.get(idx, 0j) - pt.get(idx, 0j))
        if d > best:
            best = d
    return best


def is_delta_deformation(p: SparsePoly, q: SparsePoly, delta: float) -> bool:
    """True iff every coefficient of ``q`` is strictly within ``delta`` of ``p``'s."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return coeff_sup_distance(p, q) < delta


def degree_and_support(p: SparsePoly) -> tuple[int, int]:
    """Total degree and number of present terms of a nonzero polynomial."""
    if p.is_zero():
        raise ValueError("degree_and_support requires a nonzero polynomial")
    return p.total_degree(), p.support_size()


def random_deformation(p: SparsePoly, delta: float, seed: int) -> SparsePoly:
    """Perturb every coefficient by an independent draw from the open disc.

    The perturbations are uniform on the disc of radius ``delta * (1 - 1e-9)``,
    so the output is always a strict delta-deformation with the same support.
    Deterministic for a fixed seed.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    rng = np.random.default_rng(seed)
    radius = delta * (1.0 - 1e-9)
    out: dict[tuple[int, ...], complex] = {}
    for idx, coeff in p.sorted_terms():
        u, v = rng.random(), rng.random()
        eta = radius * math.sqrt(u) * cmath.exp(2j * math.pi * v)
        out[idx] = coeff + eta
    return SparsePoly(p.nvars, out)
