"""Truncated Laurent series in a formal infinitesimal, with standard parts.

A ``Jet`` stores complex coefficients for powers ``eps**min_exp`` through
``eps**order`` of a formal symbol ``eps``.  Jets with ``min_exp >= 0`` model
finite quantities; a nonzero coefficient at a negative power marks an
infinite one, for which the standard part is the ``INFINITE`` sentinel
rather than a number.  A finite jet with zero constant term is
infinitesimal.  Taking standard parts coefficientwise turns a jet-coefficient
polynomial into an ordinary one, and that map is a ring homomorphism (the
property tests pin this down).

Arithmetic is exact within the model: addition, multiplication, and division
are Laurent arithmetic truncated at the common order, and mixed-order
operands are truncated to the smaller order first.  Division by a jet whose
leading term sits at power ``l`` shifts ``min_exp`` down by ``l``, which is
how infinite values such as ``1/eps`` arise.

``hensel_lift_root`` realizes infinitesimal root alignment constructively:
above each simple root of the standard-part polynomial it builds, order by
order, a jet root of the deformed polynomial whose standard part is the
original root.  Repeated roots would need fractional powers of ``eps``
(the roots of ``t**2 - eps`` are ``±eps**0.5``), which this representation
cannot express, so they are reported as skipped rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .polynomials import SparsePoly, _check_index, coeff_sup_distance
from .roots import UniPoly, cluster_multiplicities, find_roots

__all__ = [
    "Jet",
    "JetPoly",
    "INFINITE",
    "DEFAULT_ORDER",
    "MAX_ORDER",
    "MultipleRootError",
    "jet_arith",
    "standard_part",
    "approx",
    "st_poly",
    "approx_poly",
    "hensel_lift_root",
    "jet_align_roots",
    "JetAlignment",
    "APPROX_TOL",
]

DEFAULT_ORDER = 8
MAX_ORDER = 32
# Two finite jets are infinitely close when their standard parts agree to
# this absolute tolerance (coefficients are floating point).
APPROX_TOL = 1e-12


class _Infinite:
    """Marker for the standard part of an infinite quantity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"


INFINITE = _Infinite()


class MultipleRootError(ValueError):
    """Lifting was asked for at a root where the derivative vanishes."""


def _check_order(order: int) -> int:
    order = int(order)
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 1..{MAX_ORDER}, got {order}")
    return order


class Jet:
    """Truncated Laurent series ``sum_k coeffs[k - min_exp] * eps**k``.

    Coefficients cover powers ``min_exp .. order`` inclusive.  Construction
    normalizes away exactly-zero leading coefficients; the zero jet is
    canonically stored with ``min_exp == 0``.
    """

    __slots__ = ("_min_exp", "_coeffs", "_order")

    def __init__(self, min_exp: int, coeffs: Sequence[complex], order: int = DEFAULT_ORDER):
        order = _check_order(order)
        min_exp = int(min_exp)
        arr = np.asarray(list(coeffs), dtype=np.complex128)
        if arr.ndim != 1 or arr.size != order - min_exp + 1:
            raise ValueError(
                f"need {order - min_exp + 1} coefficients for powers "
                f"{min_exp}..{order}, got {arr.size}"
            )
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("jet coefficients must be finite")
        # Normalize: advance past exact leading zeros.
        nz = np.nonzero(arr)[0]
        if nz.size == 0:
            min_exp = 0
            arr = np.zeros(order + 1, dtype=np.complex128)
        else:
            min_exp += int(nz[0])
            arr = arr[nz[0] :].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "_min_exp", min_exp)
        object.__setattr__(self, "_coeffs", arr)
        object.__setattr__(self, "_order", order)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> "Jet":
        order = _check_order(order)
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(0, c, order)

    @classmethod
    def eps(cls, order: int = DEFAULT_ORDER, power: int = 1) -> "Jet":
        """The monomial ``eps**power`` (power may be negative)."""
        order = _check_order(order)
        power = int(power)
        if power > order:
            return cls.zero(order)
        c = np.zeros(order - power + 1, dtype=np.complex128)
        c[0] = 1.0
        return cls(power, c, order)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Jet":
        order = _check_order(order)
        return cls(0, np.zeros(order + 1), order)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex], order: int = DEFAULT_ORDER) -> "Jet":
        """Jet from coefficients starting at power 0 (padded/truncated)."""
        order = _check_order(order)
        c = np.zeros(order + 1, dtype=np.complex128)
        src = list(coeffs)[: order + 1]
        c[: len(src)] = src
        return cls(0, c, order)

    # -- accessors -----------------------------------------------------------

    @property
    def min_exp(self) -> int:
        return self._min_exp

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def coeff(self, power: int) -> complex:
        """Coefficient of ``eps**power`` (0 outside the stored window)."""
        i = power - self._min_exp
        if 0 <= i < self._coeffs.size:
            return complex(self._coeffs[i])
        return 0j

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def is_finite(self) -> bool:
        return self._min_exp >= 0

    def is_infinitesimal(self) -> bool:
        return self.is_finite() and self.coeff(0) == 0

    def truncate(self, order: int) -> "Jet":
        order = _check_order(order)
        if order >= self._order:
            if order == self._order:
                return self
            raise ValueError("cannot extend a jet to a higher order")
        if self._min_exp > order:
            return Jet.zero(order)
        return Jet(self._min_exp, self._coeffs[: order - self._min_exp + 1], order)

    def _window(self, min_exp: int, order: int) -> np.ndarray:
        """Coefficients for powers min_exp..order, zero-filled outside."""
        out = np.zeros(order - min_exp + 1, dtype=np.complex128)
        lo = max(min_exp, self._min_exp)
        hi = min(order, self._order)
        if lo <= hi:
            out[lo - min_exp : hi - min_exp + 1] = self._coeffs[
                lo - self._min_exp : hi - self._min_exp + 1
            ]
        return out

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(complex(other), self._order)

    def __add__(self, other) -> "Jet":
        other = self._coerce(other)
        order = min(self._order, other._order)
        m = min(self._min_exp, other._min_exp, order)
        return Jet(m, self._window(m, order) + other._window(m, order), order)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self._min_exp, -self._coeffs, self._order)

    def __sub__(self, other) -> "Jet":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        other = self._coerce(other)
        order = min(self._order, other._order)
        a = self.truncate(order)
        b = other.truncate(order)
        if a.is_zero() or b.is_zero():
            return Jet.zero(order)
        m = a._min_exp + b._min_exp
        if m > order:
            return Jet.zero(order)
        conv = np.convolve(a._coeffs, b._coeffs)[: order - m + 1]
        if conv.size < order - m + 1:
            conv = np.pad(conv, (0, order - m + 1 - conv.size))
        return Jet(m, conv, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        other = self._coerce(other)
        order = min(self._order, other._order)
        a = self.truncate(order)
        b = other.truncate(order)
        if b.is_zero():
            raise ZeroDivisionError("division by the zero jet")
        if a.is_zero():
            return Jet.zero(order)
        ell = b._min_exp
        q_min = a._min_exp - ell
        count = order - q_min + 1
        if count <= 0:
            return Jet.zero(order)
        num = np.zeros(count, dtype=np.complex128)
        src = a._coeffs[:count]
        num[: src.size] = src
        den = b._coeffs
        q = np.zeros(count, dtype=np.complex128)
        for k in range(count):
            acc = num[k]
            for j in range(1, min(k, den.size - 1) + 1):
                acc -= den[j] * q[k - j]
            q[k] = acc / den[0]
        return Jet(q_min, q, order)

    def __rtruediv__(self, other) -> "Jet":
        return Jet.constant(complex(other), self._order) / self

    def __pow__(self, n: int) -> "Jet":
        if not isinstance(n, int) or n < 0:
            raise ValueError("jet powers must be nonnegative integers")
        result = Jet.constant(1.0, self._order)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base if k >> 1 else base
            k >>= 1
        return result

    # -- comparison and serialization -------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Jet)
            and self._order == other._order
            and self._min_exp == other._min_exp
            and np.array_equal(self._coeffs, other._coeffs)
        )

    def __repr__(self) -> str:
        parts = []
        for i, c in enumerate(self._coeffs):
            if c != 0:
                parts.append(f"({c:g})e{self._min_exp + i}")
        return "Jet[" + (" + ".join(parts) or "0") + f"; K={self._order}]"

    def to_json_dict(self) -> dict:
        return {
            "min_exp": self._min_exp,
            "order": self._order,
            "coeffs": [{"re": c.real, "im": c.imag} for c in self._coeffs],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Jet":
        coeffs = [complex(float(c["re"]), float(c["im"])) for c in data["coeffs"]]
        return cls(int(data["min_exp"]), coeffs, int(data["order"]))


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Dispatch table for the four ring operations on jets."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}; expected add/sub/mul/div")


def standard_part(a: Jet):
    """Constant-term coefficient, or ``INFINITE`` for an infinite jet."""
    if not a.is_finite():
        return INFINITE
    return a.coeff(0)


def approx(a: Jet, b: Jet) -> bool:
    """True iff ``a - b`` is infinitesimal.  Defined for finite jets only."""
    if not (a.is_finite() and b.is_finite()):
        raise ValueError("infinitely close is only defined between finite jets")
    return abs(standard_part(a - b)) <= APPROX_TOL


class JetPoly:
    """Polynomial whose coefficients are jets sharing one truncation order."""

    __slots__ = ("_nvars", "_terms", "_order")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], Jet], order: int = DEFAULT_ORDER):
        nvars = int(nvars)
        if nvars < 1:
            raise ValueError(f"nvars must be >= 1, got {nvars}")
        order = _check_order(order)
        clean: dict[tuple[int, ...], Jet] = {}
        for exps, jet in terms.items():
            idx = _check_index(exps, nvars)
            if idx in clean:
                raise ValueError(f"duplicate exponent tuple {idx}")
            if not isinstance(jet, Jet):
                jet = Jet.constant(complex(jet), order)
            if jet.order != order:
                raise ValueError(
                    f"coefficient at {idx} has order {jet.order}, expected {order}"
                )
            if not jet.is_zero():
                clean[idx] = jet
        object.__setattr__(self, "_nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_order", order)

    def __setattr__(self, name, value):
        raise AttributeError("JetPoly is immutable")

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def order(self) -> int:
        return self._order

    @property
    def terms(self) -> dict[tuple[int, ...], Jet]:
        return dict(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    @classmethod
    def from_sparse(cls, p: SparsePoly, order: int = DEFAULT_ORDER) -> "JetPoly":
        return cls(
            p.nvars,
            {idx: Jet.constant(c, order) for idx, c in p.terms.items()},
            order,
        )

    def truncate(self, order: int) -> "JetPoly":
        if order == self._order:
            return self
        return JetPoly(
            self._nvars,
            {idx: j.truncate(order) for idx, j in self._terms.items()},
            order,
        )

    def __add__(self, other: "JetPoly") -> "JetPoly":
        if self._nvars != other._nvars:
            raise ValueError("variable count mismatch")
        order = min(self._order, other._order)
        a, b = self.truncate(order), other.truncate(order)
        out = dict(a._terms)
        for idx, jet in b._terms.items():
            out[idx] = out[idx] + jet if idx in out else jet
        return JetPoly(self._nvars, out, order)

    def __mul__(self, other: "JetPoly") -> "JetPoly":
        if self._nvars != other._nvars:
            raise ValueError("variable count mismatch")
        order = min(self._order, other._order)
        a, b = self.truncate(order), other.truncate(order)
        out: dict[tuple[int, ...], Jet] = {}
        for ia, ja in a._terms.items():
            for ib, jb in b._terms.items():
                idx = tuple(x + y for x, y in zip(ia, ib))
                prod = ja * jb
                out[idx] = out[idx] + prod if idx in out else prod
        return JetPoly(self._nvars, out, order)

    def evaluate(self, point: Sequence[Jet]) -> Jet:
        """Evaluate at a point whose coordinates are jets."""
        if len(point) != self._nvars:
            raise ValueError(
                f"point has dimension {len(point)}, polynomial has {self._nvars}"
            )
        order = min([self._order] + [w.order for w in point])
        pt = [w.truncate(order) for w in point]
        total = Jet.zero(order)
        for idx, coeff in self.sorted_terms():
            mono = coeff.truncate(order)
            for w, e in zip(pt, idx):
                if e:
                    mono = mono * w**e
            total = total + mono
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, JetPoly)
            and self._nvars == other._nvars
            and self._order == other._order
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{idx}: {jet!r}" for idx, jet in self.sorted_terms())
        return f"JetPoly({self._nvars}, {{{body}}}, K={self._order})"

    def to_json_dict(self) -> dict:
        return {
            "nvars": self._nvars,
            "order": self._order,
            "terms": [
                {"exps": list(idx), "jet": jet.to_json_dict()}
                for idx, jet in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "JetPoly":
        nvars = int(data["nvars"])
        order = int(data["order"])
        terms = {
            tuple(int(e) for e in entry["exps"]): Jet.from_json_dict(entry["jet"])
            for entry in data["terms"]
        }
        return cls(nvars, terms, order)


def approx_poly(g: JetPoly, h: JetPoly) -> bool:
    """True iff corresponding coefficients differ by infinitesimals only.

    Coefficients are compared over the union of the supports with the zero
    jet filling gaps.  Equivalent to equality of the standard-part
    polynomials; both directions are exercised by the property tests.
    """
    if g.nvars != h.nvars:
        raise ValueError("variable count mismatch")
    order = min(g.order, h.order)
    gt, ht = g.terms, h.terms
    for idx in gt.keys() | ht.keys():
        a = gt.get(idx, Jet.zero(order)).truncate(order)
        b = ht.get(idx, Jet.zero(order)).truncate(order)
        if not approx(a, b):
            return False
    return True


def st_poly(g: JetPoly) -> SparsePoly:
    """Coefficientwise standard part; requires every coefficient finite."""
    out: dict[tuple[int, ...], complex] = {}
    for idx, jet in g.terms.items():
        sp = standard_part(jet)
        if sp is INFINITE:
            raise ValueError(f"coefficient at {idx} is infinite; no standard part")
        out[idx] = sp
    return SparsePoly(g.nvars, out)


ST_MATCH_TOL = 1e-12
SIMPLE_ROOT_MIN_DERIV = 1e-6
LIFT_RESIDUAL_TOL = 1e-9


def _check_st_match(f: UniPoly, g: JetPoly) -> None:
    if g.nvars != 1:
        raise ValueError("lifting needs a univariate jet polynomial")
    if coeff_sup_distance(st_poly(g), f.to_sparse()) > ST_MATCH_TOL:
        raise ValueError(
            "standard part of the jet polynomial does not match the base polynomial"
        )


def hensel_lift_root(
    f: UniPoly, zeta: complex, g: JetPoly, order: int | None = None
) -> Jet:
    """Jet root of ``g`` above the simple root ``zeta`` of ``f``.

    Produces ``w = zeta + c_1 eps + ... + c_K eps**K`` with ``g(w)`` vanishing
    through ``eps**K``: each ``c_k`` is solved linearly from the order-k
    residual using ``f'(zeta)`` as the unit.  The standard part of the result
    is exactly ``zeta``.

    Raises
    ------
    MultipleRootError
        If ``|f'(zeta)|`` is below the simple-root threshold.
    """
    _check_st_match(f, g)
    K = g.order if order is None else _check_order(order)
    g = g.truncate(min(K, g.order))
    K = g.order
    zeta = complex(zeta)
    if abs(f(zeta)) > 1e-8 * max(1.0, float(np.max(np.abs(f.coeffs)))):
        raise ValueError(f"{zeta} is not a root of the base polynomial")
    deriv = f.deriv_at(zeta)
    if abs(deriv) < SIMPLE_ROOT_MIN_DERIV:
        raise MultipleRootError(
            f"|f'({zeta})| = {abs(deriv):.3e} is below {SIMPLE_ROOT_MIN_DERIV}; "
            "root is (numerically) multiple and cannot be lifted by integer-power jets"
        )
    omega = Jet.constant(zeta, K)
    for k in range(1, K + 1):
        residual = g.evaluate([omega])
        rk = residual.coeff(k)
        if rk == 0:
            continue
        correction = np.zeros(K - k + 1, dtype=np.complex128)
        correction[0] = -rk / deriv
        omega = omega + Jet(k, correction, K)
    final = g.evaluate([omega])
    worst = max((abs(final.coeff(j)) for j in range(final.min_exp, K + 1)), default=0.0)
    if worst > LIFT_RESIDUAL_TOL:
        raise ArithmeticError(
            f"lift residual {worst:.3e} exceeds {LIFT_RESIDUAL_TOL}"
        )
    return omega


@dataclass(frozen=True)
class JetAlignment:
    """Lifted (root, jet-root) pairs plus roots that could not be lifted."""

    pairs: tuple[tuple[complex, Jet], ...]
    skipped: tuple[tuple[complex, int, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "pairs": [
                {"root": {"re": z.real, "im": z.imag}, "lift": w.to_json_dict()}
                for z, w in self.pairs
            ],
            "skipped": [
                {"root": {"re": z.real, "im": z.imag}, "multiplicity": m, "reason": why}
                for z, m, why in self.skipped
            ],
        }


def jet_align_roots(
    f: UniPoly,
    g: JetPoly,
    order: int | None = None,
    cluster_radius: float = 1e-6,
    root_tol: float = 1e-12,
) -> JetAlignment:
    """Pair every simple root of ``f`` with its lifted jet root of ``g``.

    Roots of multiplicity above one are reported in ``skipped`` with their
    multiplicities: their deformation exponents are fractional, which the
    integer-power jet model deliberately does not represent.
    """
    _check_st_match(f, g)
    clustered = cluster_multiplicities(find_roots(f, root_tol), cluster_radius)
    pairs: list[tuple[complex, Jet]] = []
    skipped: list[tuple[complex, int, str]] = []
    for value, mult in clustered.roots:
        if mult > 1:
            skipped.append((value, mult, "multiple root"))
            continue
        try:
            pairs.append((value, hensel_lift_root(f, value, g, order)))
        except MultipleRootError:
            skipped.append((value, mult, "derivative below simple-root threshold"))
    return JetAlignment(pairs=tuple(pairs), skipped=tuple(skipped))
