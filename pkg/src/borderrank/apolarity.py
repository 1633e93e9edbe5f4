"""Apolarity: the hook action, apolar ideals, catalecticants, conciseness.

A tensor F lives in the degree-L piece of the dual ring, which we treat as a
divided power algebra: the hook action of a ring monomial on a divided-power
monomial subtracts exponents with coefficient exactly 1 (never a multinomial
factor).  Inputs in the ordinary polynomial convention are converted on parse
by multiplying each coefficient with the factorial product of its exponents.

All kernels and ranks are exact: rational Gaussian elimination with the
pivot always the first non-zero entry in grevlex column order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import ParseError, PreconditionError, ShapeMismatchError
from .ring import (
    FactorShape,
    Monomial,
    MultiDegree,
    degree_is_effective,
    degree_le,
    degree_sub,
    enumerate_monomials,
    monomial_from_json,
    monomial_to_json,
    piece_dimension,
)

# A polynomial is a dict {Monomial: Fraction}; zero coefficients are dropped.
Poly = dict


def poly_degree(p: Poly) -> MultiDegree:
    """The common multidegree of a homogeneous polynomial; error otherwise."""
    if not p:
        raise PreconditionError("the zero polynomial has no degree")
    degrees = {m.degree for m in p}
    if len(degrees) > 1:
        raise PreconditionError(f"inhomogeneous polynomial with degrees {degrees}")
    return degrees.pop()


class Tensor:
    """A partially symmetric tensor: sparse exact-rational coefficients on
    divided-power monomials of one fixed multidegree L."""

    def __init__(self, shape: FactorShape, degree, coefficients, allow_zero=False):
        self.shape = shape
        self.degree = shape.check_degree(degree)
        cleaned = {}
        for mon, coeff in dict(coefficients).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if not mon.matches_shape(shape):
                raise ShapeMismatchError(f"term {mon} does not fit shape {shape.factors}")
            if mon.degree != self.degree:
                raise PreconditionError(
                    f"term {mon} has degree {mon.degree}, tensor degree is {self.degree}"
                )
            cleaned[mon] = coeff
        if not cleaned and not allow_zero:
            raise PreconditionError("zero tensor must be constructed via Tensor.zero")
        self._coeffs = cleaned

    @classmethod
    def zero(cls, shape: FactorShape, degree) -> "Tensor":
        return cls(shape, degree, {}, allow_zero=True)

    @classmethod
    def monomial(cls, shape: FactorShape, exponents, coeff=1) -> "Tensor":
        return cls(shape, Monomial(exponents).degree, {Monomial(exponents): coeff})

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def coefficient(self, mon: Monomial) -> Fraction:
        return self._coeffs.get(mon, Fraction(0))

    def terms(self):
        """(monomial, coefficient) pairs in descending grevlex order."""
        return tuple(
            (m, self._coeffs[m]) for m in sorted(self._coeffs, key=Monomial.grevlex_key)
        )

    def support_exponents(self) -> Monomial:
        """For a monomial tensor, its single divided-power monomial."""
        if not self.is_monomial:
            raise PreconditionError("tensor is not a monomial")
        return next(iter(self._coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, Tensor)
            and self.shape == other.shape
            and self.degree == other.degree
            and self._coeffs == other._coeffs
        )

    def __repr__(self):
        return f"Tensor(shape={self.shape.factors}, degree={self.degree}, terms={len(self._coeffs)})"


# ---------------------------------------------------------------------------
# The hook action
# ---------------------------------------------------------------------------

def hook(theta: Monomial, mon: Monomial):
    """theta ⌟ x^(a): exponent subtraction, coefficient exactly 1.

    Returns the divided-power monomial x^(a - e), or None when any exponent
    underflows.
    """
    if tuple(len(b) for b in theta.exponents) != tuple(len(b) for b in mon.exponents):
        raise ShapeMismatchError("hook operands live on different shapes")
    blocks = []
    for tb, mb in zip(theta.exponents, mon.exponents):
        block = tuple(m - t for t, m in zip(tb, mb))
        if any(e < 0 for e in block):
            return None
        blocks.append(block)
    return Monomial(blocks)


def hook_tensor(theta, F: Tensor) -> Tensor:
    """Bilinear extension of the hook: (theta ⌟ F)(psi) = F(theta * psi).

    theta may be a Monomial or a homogeneous {Monomial: coefficient} dict.
    """
    if isinstance(theta, Monomial):
        theta = {theta: Fraction(1)}
    D = poly_degree(theta)
    if len(D) != F.shape.num_factors:
        raise ShapeMismatchError("operator and tensor shapes differ")
    result = {}
    for tmon, tcoeff in theta.items():
        tcoeff = Fraction(tcoeff)
        for fmon, fcoeff in F._coeffs.items():
            hit = hook(tmon, fmon)
            if hit is not None:
                result[hit] = result.get(hit, Fraction(0)) + tcoeff * fcoeff
    result = {m: c for m, c in result.items() if c != 0}
    target = degree_sub(F.degree, D)
    return Tensor(F.shape, target, result, allow_zero=True)


# ---------------------------------------------------------------------------
# Catalecticants
# ---------------------------------------------------------------------------

@dataclass
class CatalecticantMatrix:
    """The matrix of S_D -> dual_{L-D}, theta |-> theta ⌟ F.

    Row basis: monomials of S_D; column basis: divided-power monomials of
    degree L - D; both in descending grevlex.  entry(e, m) = F[e + m].
    """

    shape: FactorShape
    D: MultiDegree
    row_basis: tuple
    col_basis: tuple
    rows: list

    def rank(self) -> int:
        return linalg.rank(self.rows)

    def kernel(self):
        """Basis of F^⊥_D as polynomials, deterministic RREF construction."""
        # kernel of the map = left null space of the matrix; transpose first
        transposed = [
            [self.rows[i][j] for i in range(len(self.row_basis))]
            for j in range(len(self.col_basis))
        ]
        vectors = linalg.kernel_basis(transposed, len(self.row_basis))
        out = []
        for vec in vectors:
            out.append({m: c for m, c in zip(self.row_basis, vec) if c != 0})
        return out


def catalecticant(F: Tensor, D) -> CatalecticantMatrix:
    D = F.shape.check_degree(D)
    if not degree_is_effective(D):
        raise PreconditionError(f"catalecticant degree {D} is not effective")
    row_basis = enumerate_monomials(F.shape, D)
    comp = degree_sub(F.degree, D)
    col_basis = enumerate_monomials(F.shape, comp) if degree_is_effective(comp) else ()
    rows = [
        [F.coefficient(e * m) for m in col_basis]
        for e in row_basis
    ]
    return CatalecticantMatrix(F.shape, D, row_basis, col_basis, rows)


def apolar_piece(F: Tensor, D):
    """Exact-rational basis of F^⊥_D = ker(catalecticant at D).

    For effective D not <= L componentwise the piece is all of S_D (nothing
    of degree L - D survives), so the full monomial basis comes back.
    """
    D = F.shape.check_degree(D)
    if not degree_is_effective(D):
        raise PreconditionError(f"degree {D} is not effective")
    if not degree_le(D, F.degree):
        return [{m: Fraction(1)} for m in enumerate_monomials(F.shape, D)]
    return catalecticant(F, D).kernel()


def apolar_piece_dimension(F: Tensor, D) -> int:
    """dim F^⊥_D without materializing the kernel basis."""
    D = F.shape.check_degree(D)
    dim = piece_dimension(F.shape, D)
    if not degree_le(D, F.degree):
        return dim
    if F.is_monomial:
        return dim - monomial_catalecticant_rank(F.support_exponents(), D)
    return dim - catalecticant(F, D).rank()


def apolar_of_monomial(F: Tensor):
    """F^⊥ of a monomial x^(a): the ideal (alpha_i^(a_i + 1) for every i)."""
    if not F.is_monomial:
        raise PreconditionError("apolar_of_monomial needs a monomial tensor")
    from .ideals import MonomialIdeal

    a = F.support_exponents()
    gens = []
    for j, block in enumerate(a.exponents):
        for i, e in enumerate(block):
            exps = [[0] * len(b) for b in a.exponents]
            exps[j][i] = e + 1
            gens.append(Monomial(exps))
    return MonomialIdeal(F.shape, gens)


def _bounded_compositions_count(bounds, total: int) -> int:
    # number of e with 0 <= e_i <= bounds_i and sum e_i = total, by a small DP
    counts = [1] + [0] * total
    for b in bounds:
        new = [0] * (total + 1)
        for s in range(total + 1):
            if counts[s]:
                for e in range(min(b, total - s) + 1):
                    new[s + e] += counts[s]
        counts = new
    return counts[total]


def monomial_catalecticant_rank(a: Monomial, D) -> int:
    """rank of the degree-D catalecticant of the monomial x^(a).

    The matrix is a partial permutation matrix, so the rank is the number of
    monomials e <= a componentwise with deg e = D: a bounded counting problem,
    solved per factor.
    """
    rank = 1
    for block, d in zip(a.exponents, D):
        if d < 0:
            return 0
        rank *= _bounded_compositions_count(block, d)
    return rank


def is_concise(F: Tensor) -> bool:
    """True iff F^⊥ has no forms in any variable degree."""
    for j in range(F.shape.num_factors):
        unit = F.shape.unit_degree(j)
        if apolar_piece_dimension(F, unit) != 0:
            return False
    return True


def catalecticant_lower_bound(F: Tensor) -> int:
    """max over effective D <= L of rank(catalecticant at D); bounds border rank."""
    if F.is_zero():
        raise PreconditionError("catalecticant bound needs a non-zero tensor")
    best = 0
    mono = F.support_exponents() if F.is_monomial else None
    for D in _degrees_up_to(F.degree):
        if mono is not None:
            r = monomial_catalecticant_rank(mono, D)
        else:
            r = catalecticant(F, D).rank()
        if r > best:
            best = r
    return best


def _degrees_up_to(L):
    """All effective multidegrees D <= L, ascending in total degree then lex."""
    from itertools import product as iter_product

    degrees = list(iter_product(*(range(l + 1) for l in L)))
    degrees.sort(key=lambda D: (sum(D), D))
    return degrees


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------

def tensor_to_json(F: Tensor) -> dict:
    terms = []
    for mon, coeff in F.terms():
        terms.append(
            {
                "exp": monomial_to_json(mon)["exponents"],
                "num": str(coeff.numerator),
                "den": str(coeff.denominator),
            }
        )
    return {
        "shape": list(F.shape.factors),
        "degree": list(F.degree),
        "convention": "divided",
        "terms": terms,
    }


def tensor_from_json(data: dict) -> Tensor:
    try:
        shape_list = data["shape"]
        degree = tuple(data["degree"])
        convention = data.get("convention", "divided")
        raw_terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"tensor JSON missing field: {exc}") from exc
    if convention not in ("divided", "plain"):
        raise ParseError(f"unknown coefficient convention {convention!r}")
    if any(a < 1 for a in shape_list):
        shape = FactorShape.with_point_factors(shape_list)
    else:
        shape = FactorShape(shape_list)
    coeffs = {}
    for term in raw_terms:
        try:
            mon = monomial_from_json({"exponents": term["exp"]})
            coeff = Fraction(int(term["num"]), int(term["den"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad tensor term {term!r}: {exc}") from exc
        if convention == "plain":
            # ordinary monomial x^a equals (prod a_i!) times the divided power x^(a)
            for e in mon.flat():
                coeff *= math.factorial(e)
        coeffs[mon] = coeffs.get(mon, Fraction(0)) + coeff
    try:
        return Tensor(shape, degree, coeffs, allow_zero=True)
    except (PreconditionError, ShapeMismatchError) as exc:
        raise ParseError(str(exc)) from exc
