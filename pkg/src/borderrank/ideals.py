"""Monomial ideals and generator-presented graded ideals.

MonomialIdeal keeps a minimal generating set and supports the exact
combinatorial operations (pieces, colon, saturation against the irrelevant
ideal).  GradedIdeal is a list of homogeneous generators with degree tags;
its graded pieces are computed freshly per degree by exact row reduction,
with no Gröbner machinery.

Saturation is exact for monomial ideals.  For graded ideals only a
degreewise defect probe is available: the subspaces (I : B^k)_D grow toward
the saturation degreewise, so any strict growth certifies that I is not
saturated, while finding none is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from . import linalg
from .apolarity import Tensor, apolar_piece, apolar_piece_dimension, poly_degree
from .errors import ParseError, PreconditionError, ShapeMismatchError
from .ring import (
    FactorShape,
    Monomial,
    MultiDegree,
    degree_add,
    degree_is_effective,
    degree_le,
    degree_sub,
    enumerate_monomials,
    monomial_from_json,
    monomial_to_json,
    piece_dimension,
)


def _minimalize(generators):
    """Drop every generator divisible by another; canonical grevlex order."""
    # filter in ascending total degree so divisors are seen before their
    # multiples; equal-degree distinct monomials never divide each other
    gens = sorted(set(generators), key=lambda m: (m.total_degree, m.grevlex_key()))
    kept = []
    for g in gens:
        if not any(h.divides(g) for h in kept):
            kept.append(g)
    kept.sort(key=Monomial.grevlex_key)
    return tuple(kept)


class MonomialIdeal:
    """An ideal generated by monomials, stored via its minimal generators."""

    def __init__(self, shape: FactorShape, generators):
        self.shape = shape
        for g in generators:
            if not g.matches_shape(shape):
                raise ShapeMismatchError(f"generator {g} does not fit {shape.factors}")
        self.generators = _minimalize(generators)

    def contains_monomial(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def __eq__(self, other):
        return (
            isinstance(other, MonomialIdeal)
            and self.shape == other.shape
            and self.generators == other.generators
        )

    def __repr__(self):
        return f"MonomialIdeal({self.shape.factors}, {len(self.generators)} gens)"


class GradedIdeal:
    """An ideal presented by homogeneous generators tagged with multidegrees."""

    def __init__(self, shape: FactorShape, generators):
        # generators: iterable of (degree, poly) or bare poly dicts
        self.shape = shape
        tagged = []
        for gen in generators:
            if isinstance(gen, tuple):
                degree, poly = gen
            else:
                degree, poly = None, gen
            poly = {m: Fraction(c) for m, c in dict(poly).items() if Fraction(c) != 0}
            if not poly:
                raise PreconditionError("zero polynomial cannot be an ideal generator")
            actual = poly_degree(poly)
            if degree is not None and shape.check_degree(degree) != actual:
                raise PreconditionError(
                    f"generator tagged {tuple(degree)} but is homogeneous of {actual}"
                )
            for m in poly:
                if not m.matches_shape(shape):
                    raise ShapeMismatchError(f"term {m} does not fit {shape.factors}")
            tagged.append((actual, poly))
        self.generators = tuple(tagged)

    def piece_rows(self, D) -> list:
        """Coefficient rows spanning I_D over the grevlex basis of S_D."""
        D = self.shape.check_degree(D)
        basis = enumerate_monomials(self.shape, D)
        index = {m: i for i, m in enumerate(basis)}
        rows = []
        for gen_degree, poly in self.generators:
            shift = degree_sub(D, gen_degree)
            if not degree_is_effective(shift):
                continue
            for mult in enumerate_monomials(self.shape, shift):
                row = [Fraction(0)] * len(basis)
                for m, c in poly.items():
                    row[index[m * mult]] += c
                rows.append(row)
        return rows

    def piece_dimension(self, D) -> int:
        return linalg.rank(self.piece_rows(D))

    def __repr__(self):
        return f"GradedIdeal({self.shape.factors}, {len(self.generators)} gens)"


@dataclass
class HilbertRecord:
    """Degreewise Hilbert data: D -> (dim I_D, dim (S/I)_D)."""

    shape: FactorShape
    values: dict

    def to_json(self) -> dict:
        return {
            "values": [
                {"degree": list(D), "ideal": di, "quotient": dq}
                for D, (di, dq) in sorted(
                    self.values.items(), key=lambda kv: (sum(kv[0]), kv[0])
                )
            ]
        }


# ---------------------------------------------------------------------------
# Graded pieces and Hilbert functions
# ---------------------------------------------------------------------------

def monomial_piece(I: MonomialIdeal, D) -> tuple:
    """All degree-D monomials divisible by some generator, grevlex order."""
    D = I.shape.check_degree(D)
    return tuple(m for m in enumerate_monomials(I.shape, D) if I.contains_monomial(m))


def hilbert_function(I, D) -> tuple:
    """(dim I_D, dim (S/I)_D); counting for monomial ideals, rank otherwise."""
    if isinstance(I, MonomialIdeal):
        D = I.shape.check_degree(D)
        total = piece_dimension(I.shape, D)
        di = len(monomial_piece(I, D))
    elif isinstance(I, GradedIdeal):
        D = I.shape.check_degree(D)
        total = piece_dimension(I.shape, D)
        di = I.piece_dimension(D)
    else:
        raise PreconditionError(f"unsupported ideal type {type(I).__name__}")
    return di, total - di


def hilbert_record(I, degrees) -> HilbertRecord:
    values = {}
    for D in degrees:
        values[tuple(D)] = hilbert_function(I, D)
    return HilbertRecord(I.shape, values)


# ---------------------------------------------------------------------------
# Colon and saturation (monomial ideals: exact)
# ---------------------------------------------------------------------------

def colon(I: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    """(I : m): each generator drops to max(g_i - m_i, 0), then minimalize."""
    gens = []
    for g in I.generators:
        blocks = tuple(
            tuple(max(e - f, 0) for e, f in zip(gb, mb))
            for gb, mb in zip(g.exponents, m.exponents)
        )
        gens.append(Monomial(blocks))
    return MonomialIdeal(I.shape, gens)


def _lcm(g: Monomial, h: Monomial) -> Monomial:
    return Monomial(
        tuple(
            tuple(max(e, f) for e, f in zip(gb, hb))
            for gb, hb in zip(g.exponents, h.exponents)
        )
    )


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """Intersection of monomial ideals via pairwise lcms of generators."""
    if I.shape != J.shape:
        raise ShapeMismatchError("cannot intersect ideals on different shapes")
    if I.is_zero() or J.is_zero():
        return MonomialIdeal(I.shape, ())
    gens = [_lcm(g, h) for g in I.generators for h in J.generators]
    return MonomialIdeal(I.shape, gens)


def irrelevant_generators(shape: FactorShape) -> tuple:
    """Generators of the irrelevant ideal B: one variable from each factor."""
    choices = [range(a + 1) for a in shape.factors]
    gens = []
    for pick in iter_product(*choices):
        exps = [[0] * (a + 1) for a in shape.factors]
        for j, i in enumerate(pick):
            exps[j][i] = 1
        gens.append(Monomial(exps))
    return tuple(gens)


def colon_irrelevant(I: MonomialIdeal) -> MonomialIdeal:
    """(I : B) as the intersection of (I : b) over the generators b of B."""
    result = None
    for b in irrelevant_generators(I.shape):
        piece = colon(I, b)
        result = piece if result is None else intersect(result, piece)
    return result


def saturate(I: MonomialIdeal) -> MonomialIdeal:
    """The smallest saturated ideal containing I: fixpoint of I -> (I : B)."""
    current = I
    while True:
        bigger = colon_irrelevant(current)
        if bigger == current:
            return current
        current = bigger


def is_saturated(I: MonomialIdeal) -> bool:
    return colon_irrelevant(I) == I


# ---------------------------------------------------------------------------
# Containment in an apolar ideal (checked in degree L only)
# ---------------------------------------------------------------------------

def contained_in_apolar(I, F: Tensor) -> bool:
    """I ⊆ F^⊥, decided degreewise at L = deg F.

    Containment of a homogeneous ideal in F^⊥ only needs checking in degree
    L: lower-degree elements annihilate F iff all their degree-L multiples
    do, and generators of degree not <= L annihilate F outright because
    nothing of degree L minus theirs survives in the dual.
    """
    L = F.degree
    if isinstance(I, MonomialIdeal):
        if I.shape != F.shape:
            raise ShapeMismatchError("ideal and tensor shapes differ")
        return all(F.coefficient(m) == 0 for m in monomial_piece(I, L))
    if isinstance(I, GradedIdeal):
        if I.shape != F.shape:
            raise ShapeMismatchError("ideal and tensor shapes differ")
        for gen_degree, poly in I.generators:
            shift = degree_sub(L, gen_degree)
            if not degree_is_effective(shift):
                continue  # annihilates automatically
            for mult in enumerate_monomials(F.shape, shift):
                value = sum((c * F.coefficient(m * mult) for m, c in poly.items()),
                            Fraction(0))
                if value != 0:
                    return False
        return True
    raise PreconditionError(f"unsupported ideal type {type(I).__name__}")


# ---------------------------------------------------------------------------
# Minimal generator counts
# ---------------------------------------------------------------------------

def _piece_info(I, D):
    """(dimension, basis rows or monomial set) of I_D for any supported I."""
    if isinstance(I, MonomialIdeal):
        mons = monomial_piece(I, D)
        return len(mons), mons
    if isinstance(I, GradedIdeal):
        rows = I.piece_rows(D)
        echelon, _ = linalg.row_echelon(rows)
        return len(echelon), echelon
    if isinstance(I, Tensor):
        # interpret a tensor as its apolar ideal
        polys = apolar_piece(I, D)
        basis = enumerate_monomials(I.shape, D)
        index = {m: i for i, m in enumerate(basis)}
        rows = []
        for p in polys:
            row = [Fraction(0)] * len(basis)
            for m, c in p.items():
                row[index[m]] = c
            rows.append(row)
        return len(rows), rows
    raise PreconditionError(f"unsupported ideal type {type(I).__name__}")


def minimal_generator_count(I, D) -> int:
    """Number of minimal generators of I in degree D:
    dim I_D - dim(sum over variables of I_{D - deg var} * var)."""
    shape = I.shape
    D = shape.check_degree(D)
    dim_piece, _ = _piece_info(I, D)

    if isinstance(I, MonomialIdeal):
        products = set()
        for j in range(shape.num_factors):
            lower = degree_sub(D, shape.unit_degree(j))
            if not degree_is_effective(lower):
                continue
            lower_mons = monomial_piece(I, lower)
            for i in range(shape.factors[j] + 1):
                var = Monomial.variable(shape, j, i)
                products.update(m * var for m in lower_mons)
        return dim_piece - len(products)

    basis = enumerate_monomials(shape, D)
    index = {m: i for i, m in enumerate(basis)}
    product_rows = []
    for j in range(shape.num_factors):
        lower_degree = degree_sub(D, shape.unit_degree(j))
        if not degree_is_effective(lower_degree):
            continue
        lower_basis = enumerate_monomials(shape, lower_degree)
        _, lower_rows = _piece_info(I, lower_degree)
        for row in lower_rows:
            for i in range(shape.factors[j] + 1):
                var = Monomial.variable(shape, j, i)
                prod = [Fraction(0)] * len(basis)
                for col, c in enumerate(row):
                    if c:
                        prod[index[lower_basis[col] * var]] += c
                product_rows.append(prod)
    return dim_piece - linalg.rank(product_rows)


# ---------------------------------------------------------------------------
# Degreewise saturation-defect probe for graded ideals
# ---------------------------------------------------------------------------

def _monomial_rows(mons, basis_index, size):
    rows = []
    for m in mons:
        row = [Fraction(0)] * size
        row[basis_index[m]] = Fraction(1)
        rows.append(row)
    return rows


def iterated_colon_piece(I, D, steps: int, _memo=None):
    """Echelon basis of (I : B^steps)_D, by the degreewise recursion
    V_k(D) = {f in S_D : f * b in V_{k-1}(D + (1,...,1)) for all B-generators b}."""
    shape = I.shape
    D = shape.check_degree(D)
    if _memo is None:
        _memo = {}
    key = (steps, D)
    if key in _memo:
        return _memo[key]

    if steps == 0:
        if isinstance(I, MonomialIdeal):
            basis = enumerate_monomials(shape, D)
            index = {m: i for i, m in enumerate(basis)}
            rows = _monomial_rows(monomial_piece(I, D), index, len(basis))
        else:
            rows, _ = linalg.row_echelon(I.piece_rows(D))
        _memo[key] = rows
        return rows

    ones = tuple(1 for _ in shape.factors)
    up = degree_add(D, ones)
    upper = iterated_colon_piece(I, up, steps - 1, _memo)
    basis = enumerate_monomials(shape, D)
    up_basis = enumerate_monomials(shape, up)
    up_index = {m: i for i, m in enumerate(up_basis)}
    # f in V iff f*b lands in span(upper) for every B-generator b; membership
    # in a span is vanishing against the null space of its row matrix
    normals = linalg.kernel_basis(upper, len(up_basis))
    constraints = []
    for b in irrelevant_generators(shape):
        shifted = [up_index[m * b] for m in basis]
        for normal in normals:
            constraints.append([normal[s] for s in shifted])
    vectors = linalg.kernel_basis(constraints, len(basis))
    rows, _ = linalg.row_echelon(vectors)
    _memo[key] = rows
    return rows


def saturation_defect(I, max_total_degree: int, max_steps: int = 3):
    """Search for a degreewise witness that I is not saturated.

    Returns {"degree": D, "steps": k, "dim_ideal": a, "dim_colon": b} for the
    first (k, D) with dim (I : B^k)_D > dim I_D, scanning k = 1..max_steps
    outer and D by ascending total degree inner; None when no defect shows
    (which proves nothing for a GradedIdeal).
    """
    shape = I.shape
    degrees = []
    for D in iter_product(*(range(max_total_degree + 1) for _ in shape.factors)):
        if sum(D) <= max_total_degree:
            degrees.append(D)
    degrees.sort(key=lambda D: (sum(D), D))
    memo = {}
    for k in range(1, max_steps + 1):
        for D in degrees:
            base = iterated_colon_piece(I, D, 0, memo)
            grown = iterated_colon_piece(I, D, k, memo)
            if len(grown) > len(base):
                return {
                    "degree": D,
                    "steps": k,
                    "dim_ideal": len(base),
                    "dim_colon": len(grown),
                }
    return None


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------

def ideal_to_json(I) -> dict:
    if isinstance(I, MonomialIdeal):
        return {
            "shape": list(I.shape.factors),
            "monomial_generators": [monomial_to_json(g)["exponents"] for g in I.generators],
        }
    if isinstance(I, GradedIdeal):
        gens = []
        for degree, poly in I.generators:
            terms = [
                {
                    "exp": monomial_to_json(m)["exponents"],
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
                for m, c in sorted(poly.items(), key=lambda mc: mc[0].grevlex_key())
            ]
            gens.append({"degree": list(degree), "terms": terms})
        return {"shape": list(I.shape.factors), "generators": gens}
    raise PreconditionError(f"unsupported ideal type {type(I).__name__}")


def _shape_from_json(shape_list) -> FactorShape:
    if any(a < 1 for a in shape_list):
        return FactorShape.with_point_factors(shape_list)
    return FactorShape(shape_list)


def ideal_from_json(data: dict):
    if not isinstance(data, dict) or "shape" not in data:
        raise ParseError("ideal JSON needs a 'shape' key")
    shape = _shape_from_json(data["shape"])
    if "monomial_generators" in data:
        gens = [monomial_from_json({"exponents": e}) for e in data["monomial_generators"]]
        return MonomialIdeal(shape, gens)
    if "generators" in data:
        tagged = []
        for gen in data["generators"]:
            try:
                degree = tuple(gen["degree"])
                poly = {}
                for term in gen["terms"]:
                    m = monomial_from_json({"exponents": term["exp"]})
                    poly[m] = poly.get(m, Fraction(0)) + Fraction(
                        int(term["num"]), int(term["den"])
                    )
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad ideal generator {gen!r}: {exc}") from exc
            tagged.append((degree, poly))
        try:
            return GradedIdeal(shape, tagged)
        except (PreconditionError, ShapeMismatchError) as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError("ideal JSON needs 'monomial_generators' or 'generators'")
