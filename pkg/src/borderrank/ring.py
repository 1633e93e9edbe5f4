"""Combinatorics of the multigraded polynomial ring of a product of
projective spaces.

The ambient variety is X = P^{a_1} x ... x P^{a_w}.  Its coordinate ring is a
polynomial ring with one block of variables per factor, graded by
Pic(X) = Z^w; the degree of every variable in block j is the j-th unit
vector.  This module holds the purely combinatorial layer: shapes,
multidegrees, monomials, graded-piece dimensions and enumeration, and the
grevlex order used everywhere downstream.

Variable order is factor-major: all variables of factor 0 first, then
factor 1, and so on.  Nothing in the mathematics forces a cross-factor
order, but fixing one makes the monomial order and all serialized output
deterministic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product
from typing import Iterator, Sequence

from .errors import ParseError, ShapeMismatchError

# A multidegree is an element of Pic(X) = Z^w, stored as a plain tuple.
MultiDegree = tuple  # tuple[int, ...]

# Names for the variable blocks in the text format: a0,a1,... | b0,b1,... | ...
_BLOCK_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class FactorShape:
    """The product P^{a_1} x ... x P^{a_w}, recorded as (a_1, ..., a_w).

    Factor dimensions must be >= 1.  Point factors (a_j = 0) are only
    allowed through :meth:`with_point_factors`, which exists for degenerate
    test cases.
    """

    factors: tuple

    def __init__(self, factors: Sequence[int]):
        factors = tuple(int(a) for a in factors)
        if len(factors) == 0:
            raise ValueError("a product of projective spaces needs at least one factor")
        if any(a < 1 for a in factors):
            raise ValueError(
                "factor dimensions must be >= 1; use with_point_factors for P^0 factors"
            )
        object.__setattr__(self, "factors", factors)

    @classmethod
    def with_point_factors(cls, factors: Sequence[int]) -> "FactorShape":
        """Construct a shape allowing a_j = 0 factors (degenerate tests only)."""
        factors = tuple(int(a) for a in factors)
        if len(factors) == 0:
            raise ValueError("a product of projective spaces needs at least one factor")
        if any(a < 0 for a in factors):
            raise ValueError("factor dimensions must be >= 0")
        shape = object.__new__(cls)
        object.__setattr__(shape, "factors", factors)
        return shape

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    @property
    def num_variables(self) -> int:
        return sum(a + 1 for a in self.factors)

    def variables(self) -> Iterator[tuple]:
        """Yield (factor, index) for every variable, in factor-major order."""
        for j, a in enumerate(self.factors):
            for i in range(a + 1):
                yield (j, i)

    def unit_degree(self, factor: int) -> MultiDegree:
        """The multidegree of any variable in the given factor."""
        return tuple(1 if j == factor else 0 for j in range(len(self.factors)))

    def zero_degree(self) -> MultiDegree:
        return (0,) * len(self.factors)

    def check_degree(self, D: Sequence[int]) -> MultiDegree:
        """Validate the length of D against this shape and return it as a tuple."""
        D = tuple(int(d) for d in D)
        if len(D) != len(self.factors):
            raise ShapeMismatchError(
                f"multidegree {D} has {len(D)} entries, shape {self.factors} has "
                f"{len(self.factors)} factors"
            )
        return D


@dataclass(frozen=True, order=False)
class Monomial:
    """A monomial of the multigraded ring, as exponents grouped by factor.

    The same structure serves for divided-power monomials of the dual ring;
    the interpretation is up to the caller.  The multidegree is always
    recomputed from the exponents, never stored.
    """

    exponents: tuple  # tuple[tuple[int, ...], ...]

    def __init__(self, exponents: Sequence[Sequence[int]]):
        exps = tuple(tuple(int(e) for e in block) for block in exponents)
        if len(exps) == 0:
            raise ValueError("monomial needs at least one factor block")
        for block in exps:
            if len(block) == 0:
                raise ValueError("empty variable block in monomial")
            if any(e < 0 for e in block):
                raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def one(cls, shape: FactorShape) -> "Monomial":
        return cls(tuple((0,) * (a + 1) for a in shape.factors))

    @classmethod
    def variable(cls, shape: FactorShape, factor: int, index: int) -> "Monomial":
        """The single variable (factor, index) as a monomial."""
        exps = [[0] * (a + 1) for a in shape.factors]
        exps[factor][index] = 1
        return cls(exps)

    @property
    def degree(self) -> MultiDegree:
        return tuple(sum(block) for block in self.exponents)

    @property
    def total_degree(self) -> int:
        return sum(sum(block) for block in self.exponents)

    def flat(self) -> tuple:
        """Exponents as one tuple in factor-major variable order."""
        return tuple(e for block in self.exponents for e in block)

    def matches_shape(self, shape: FactorShape) -> bool:
        return tuple(len(b) - 1 for b in self.exponents) == shape.factors

    def __mul__(self, other: "Monomial") -> "Monomial":
        _check_same_structure(self, other)
        return Monomial(
            tuple(
                tuple(e + f for e, f in zip(b1, b2))
                for b1, b2 in zip(self.exponents, other.exponents)
            )
        )

    def divides(self, other: "Monomial") -> bool:
        _check_same_structure(self, other)
        return all(
            e <= f
            for b1, b2 in zip(self.exponents, other.exponents)
            for e, f in zip(b1, b2)
        )

    def grevlex_key(self):
        """Sort key: ascending by this key = descending grevlex."""
        return (-self.total_degree, tuple(reversed(self.flat())))


def _check_same_structure(m1: Monomial, m2: Monomial) -> None:
    if tuple(len(b) for b in m1.exponents) != tuple(len(b) for b in m2.exponents):
        raise ShapeMismatchError(f"monomials {m1} and {m2} live on different shapes")


# ---------------------------------------------------------------------------
# Degree arithmetic helpers
# ---------------------------------------------------------------------------

def degree_add(D: MultiDegree, E: MultiDegree) -> MultiDegree:
    return tuple(d + e for d, e in zip(D, E))


def degree_sub(D: MultiDegree, E: MultiDegree) -> MultiDegree:
    return tuple(d - e for d, e in zip(D, E))


def degree_is_effective(D: MultiDegree) -> bool:
    return all(d >= 0 for d in D)


def degree_le(D: MultiDegree, E: MultiDegree) -> bool:
    """Componentwise D <= E."""
    return all(d <= e for d, e in zip(D, E))


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------

def piece_dimension(shape: FactorShape, D: Sequence[int]):
    """dim of the graded piece S_D: the product of binomials C(a_j + d_j, a_j).

    Degrees with any negative entry give 0 rather than an error; catalecticant
    loops probe L - D freely and rely on this.  Exact big-integer arithmetic.
    """
    D = shape.check_degree(D)
    dim = 1
    for a, d in zip(shape.factors, D):
        if d < 0:
            return 0
        dim *= math.comb(a + d, a)
    return dim


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple:
    """All tuples of `parts` non-negative ints summing to `total`."""
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _enumerate_cached(factors: tuple, D: tuple) -> tuple:
    block_choices = [_compositions(d, a + 1) for a, d in zip(factors, D)]
    mons = [Monomial(blocks) for blocks in iter_product(*block_choices)]
    mons.sort(key=Monomial.grevlex_key)
    return tuple(mons)


def enumerate_monomials(shape: FactorShape, D: Sequence[int]) -> tuple:
    """All monomials of multidegree D, sorted descending in grevlex.

    The result length always equals piece_dimension(shape, D).
    """
    D = shape.check_degree(D)
    if not degree_is_effective(D):
        raise ValueError(f"cannot enumerate monomials of ineffective degree {D}")
    return _enumerate_cached(shape.factors, D)


def compare_grevlex(m1: Monomial, m2: Monomial) -> int:
    """Grevlex comparison: positive if m1 > m2, negative if m1 < m2, else 0.

    Larger total degree wins.  At equal total degree, m1 > m2 iff the last
    non-zero entry of exponents(m1) - exponents(m2) is negative, variables
    taken in factor-major order.
    """
    _check_same_structure(m1, m2)
    k1, k2 = m1.grevlex_key(), m2.grevlex_key()
    # ascending key order is descending grevlex, so the smaller key is greater
    if k1 < k2:
        return 1
    if k1 > k2:
        return -1
    return 0


# ---------------------------------------------------------------------------
# Text and JSON formats
# ---------------------------------------------------------------------------

_VAR_RE = re.compile(r"^([a-z])(\d+)(?:\^(\d+))?$")


def monomial_to_text(m: Monomial) -> str:
    """Render like `a0^2*a1|b0^3`; factors separated by `|`, trivial factor `1`."""
    if len(m.exponents) > len(_BLOCK_LETTERS):
        raise ValueError("text format supports at most 26 factors")
    segments = []
    for j, block in enumerate(m.exponents):
        letter = _BLOCK_LETTERS[j]
        parts = []
        for i, e in enumerate(block):
            if e == 1:
                parts.append(f"{letter}{i}")
            elif e > 1:
                parts.append(f"{letter}{i}^{e}")
        segments.append("*".join(parts) if parts else "1")
    return "|".join(segments)


def monomial_from_text(shape: FactorShape, text: str) -> Monomial:
    """Parse the output of monomial_to_text back, against a known shape."""
    segments = text.strip().split("|")
    if len(segments) != shape.num_factors:
        raise ParseError(
            f"monomial {text!r} has {len(segments)} factor segments, shape has "
            f"{shape.num_factors}"
        )
    exps = [[0] * (a + 1) for a in shape.factors]
    for j, segment in enumerate(segments):
        segment = segment.strip()
        if segment == "1":
            continue
        for token in segment.split("*"):
            match = _VAR_RE.match(token.strip())
            if match is None:
                raise ParseError(f"bad variable token {token!r} in {text!r}")
            letter, index, power = match.groups()
            if letter != _BLOCK_LETTERS[j]:
                raise ParseError(
                    f"variable {token!r} does not belong to factor {j} in {text!r}"
                )
            i = int(index)
            if i >= len(exps[j]):
                raise ParseError(f"variable index out of range in {text!r}")
            exps[j][i] += int(power) if power is not None else 1
    return Monomial(exps)


def monomial_to_json(m: Monomial) -> dict:
    return {"exponents": [list(block) for block in m.exponents]}


def monomial_from_json(data: dict) -> Monomial:
    if not isinstance(data, dict) or "exponents" not in data:
        raise ParseError(f"monomial JSON needs an 'exponents' key, got {data!r}")
    try:
        return Monomial(data["exponents"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad monomial JSON {data!r}: {exc}") from exc
