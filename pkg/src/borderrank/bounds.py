"""Border-rank bounds for monomials, and necessary tests for minimal
border rank of general tensors.

Lower bounds: the catalecticant bound, and the disjoint-module bound that
plays the Lex-bar growth cap against the required codimension jump between
two consecutive degrees.  Upper bound: the toric-chart bound (drop one
variable per factor).  On P^1, P^2 and P^2 x (P^1)^k the two sides meet and
the border rank of a monomial is known in closed form.

The disjoint-module rule implemented here is slightly sharper than a bare
growth comparison: when a generator module enters at degree d+1 that was
absent at degree d (some exponent a_j equals d), its single new monomial
alpha_j^(d+1) enlarges the reachable codimension by exactly one, so the
threshold is lexbar_growth + #{j : a_j = d}.  Without that term the rule
would overreach on monomials with one exponent equal to the probe degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .apolarity import (
    Tensor,
    apolar_piece,
    apolar_piece_dimension,
    catalecticant_lower_bound,
    is_concise,
)
from .errors import PreconditionError, UnsupportedShapeError
from .ideals import minimal_generator_count
from .macaulay import lexbar_growth
from .ring import (
    FactorShape,
    Monomial,
    degree_is_effective,
    degree_sub,
    enumerate_monomials,
    piece_dimension,
)


@dataclass(frozen=True)
class BoundReport:
    """A certified sandwich lower <= borderrank <= upper, with witnesses.

    upper is None for tensors where no upper bound is implemented."""

    lower: int
    lower_provenance: str  # catalecticant | disjoint-module | closed-form
    lower_witness: dict
    upper: int | None
    upper_provenance: str  # chart | closed-form | none
    upper_witness: dict
    components: dict  # every bound that was computed, for inspection

    def __post_init__(self):
        if self.upper is not None:
            assert self.lower <= self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "lower_provenance": self.lower_provenance,
            "lower_witness": self.lower_witness,
            "upper": self.upper,
            "upper_provenance": self.upper_provenance,
            "upper_witness": self.upper_witness,
            "components": self.components,
        }


def _monomial_exponents(F: Tensor) -> Monomial:
    if not F.is_monomial:
        raise PreconditionError("this bound is only defined for monomial tensors")
    return F.support_exponents()


def upper_bound_monomial(F: Tensor):
    """Toric chart bound: drop the largest exponent in each factor, multiply
    the remaining (exponent + 1).  Returns (value, witness)."""
    a = _monomial_exponents(F)
    value = 1
    dropped = []
    for j, block in enumerate(a.exponents):
        keep = max(range(len(block)), key=lambda i: block[i])
        dropped.append({"factor": j, "index": keep, "exponent": block[keep]})
        for i, e in enumerate(block):
            if i != keep:
                value *= e + 1
    return value, {"dropped": dropped}


def disjoint_module_lower_bound(F: Tensor):
    """Lower bound for monomials on one projective space via Lex-bar growth.

    For each candidate r below the chart bound and each degree d where the
    apolar pieces split as a direct sum of shifted polynomial modules, any
    move-fit ideal would need codimension c_d inside the apolar piece at d
    and c_{d+1} at d+1; if c_{d+1} exceeds the maximal reachable growth, r
    is impossible and the border rank is at least r + 1.

    Returns (value, witness); witness is None when the catalecticant bound
    was never improved.
    """
    a = _monomial_exponents(F)
    if F.shape.num_factors != 1:
        raise PreconditionError("disjoint-module bound applies to a single factor")
    exps = a.exponents[0]
    n = F.shape.factors[0]
    total = sum(exps)
    upper, _ = upper_bound_monomial(F)
    cat = catalecticant_lower_bound(F)

    # per-degree data, shared across all candidate ranks
    dim_s = {d: piece_dimension(F.shape, (d,)) for d in range(total + 2)}
    dim_perp = {d: apolar_piece_dimension(F, (d,)) for d in range(total + 2)}
    usable = {}
    for d in range(1, total + 1):
        modules = sorted(d - e - 1 for e in exps if d - e - 1 >= 0)
        if not modules:
            continue
        present = [e for e in exps if d - e - 1 >= 0]
        direct = all(
            present[i] + present[j] + 2 > d
            for i in range(len(present))
            for j in range(i + 1, len(present))
        )
        if not direct:
            continue
        new_modules = sum(1 for e in exps if e == d)
        usable[d] = (tuple(modules), new_modules)

    for r in range(upper - 1, cat - 1, -1):
        for d, (modules, new_modules) in usable.items():
            c_d = dim_perp[d] - (dim_s[d] - min(r, dim_s[d]))
            c_d1 = dim_perp[d + 1] - (dim_s[d + 1] - min(r, dim_s[d + 1]))
            assert 0 <= c_d <= dim_perp[d]
            growth = lexbar_growth(modules, n, c_d) + new_modules
            if c_d1 > growth:
                witness = {
                    "ruled_out_r": r,
                    "degree": d,
                    "codim_d": c_d,
                    "codim_d_plus_1": c_d1,
                    "max_growth": growth,
                    "new_modules": new_modules,
                    "dim_apolar_d": dim_perp[d],
                    "dim_s_d": dim_s[d],
                    "dim_apolar_d_plus_1": dim_perp[d + 1],
                    "dim_s_d_plus_1": dim_s[d + 1],
                }
                return max(r + 1, cat), witness
    return cat, None


def closed_form_border_rank(F: Tensor) -> int:
    """Exact border rank of a monomial on P^1, P^2 or P^2 x (P^1)^k.

    Sort the exponents within every factor descending; the border rank is
    the product of (exponent + 1) over all but the largest exponent in each
    factor.  Other shapes raise UnsupportedShapeError.
    """
    a = _monomial_exponents(F)
    factors = F.shape.factors
    twos = sum(1 for f in factors if f == 2)
    ones = sum(1 for f in factors if f == 1)
    single = len(factors) == 1 and factors[0] in (1, 2)
    product = twos == 1 and twos + ones == len(factors)
    if not (single or product):
        raise UnsupportedShapeError(
            f"no closed form on {factors}: supported shapes are P^1, P^2 and "
            "P^2 x (P^1)^k"
        )
    value = 1
    for block in a.exponents:
        for e in sorted(block, reverse=True)[1:]:
            value *= e + 1
    return value


def almost_unbalanced_check(F: Tensor):
    """Exact value for (almost) unbalanced monomials on one projective space.

    After sorting exponents descending, a_0 >= (a_1 + ... + a_n) - 1 gives
    border rank exactly (a_1+1)...(a_n+1); returns None otherwise.
    """
    a = _monomial_exponents(F)
    if F.shape.num_factors != 1:
        raise PreconditionError("almost-unbalanced check applies to a single factor")
    exps = sorted((e for e in a.exponents[0] if e > 0), reverse=True)
    if not exps:
        return 1
    rest = exps[1:]
    if exps[0] < sum(rest) - 1:
        return None
    value = 1
    for e in rest:
        value *= e + 1
    return value


# ---------------------------------------------------------------------------
# Necessary tests for minimal border rank (one-directional verdicts)
# ---------------------------------------------------------------------------

HOLDS = "holds"
NOT_MINIMAL = "not-minimal-border-rank"


def minimal_border_rank_generator_test(F: Tensor):
    """On (P^a)^w: minimal border rank forces >= a minimal generators of the
    apolar ideal in degree L.  Returns (count, verdict); a verdict of
    NOT_MINIMAL certifies that F is not of minimal border rank, while HOLDS
    decides nothing."""
    factors = set(F.shape.factors)
    if len(factors) != 1:
        raise PreconditionError(
            f"generator test needs a power of a single P^a, got {F.shape.factors}"
        )
    if not is_concise(F):
        raise PreconditionError("generator test needs a concise tensor")
    a = F.shape.factors[0]
    count = minimal_generator_count(F, F.degree)
    return count, (HOLDS if count >= a else NOT_MINIMAL)


def minimal_border_rank_quotient_test(F: Tensor, i: int = None):
    """dim(S_L / (F^⊥_{L - deg alpha_i} * S_{deg alpha_i})) for a factor i of
    maximal dimension; below dim S_{deg alpha_i} certifies not minimal border
    rank.  Returns (dimension, verdict)."""
    if not is_concise(F):
        raise PreconditionError("quotient test needs a concise tensor")
    max_dim = max(F.shape.factors)
    if i is None:
        i = F.shape.factors.index(max_dim)
    elif F.shape.factors[i] != max_dim:
        raise PreconditionError(
            f"factor {i} has dimension {F.shape.factors[i]}, not the maximal {max_dim}"
        )
    L = F.degree
    basis = enumerate_monomials(F.shape, L)
    index = {m: k for k, m in enumerate(basis)}
    lower_degree = degree_sub(L, F.shape.unit_degree(i))
    rows = []
    if degree_is_effective(lower_degree):
        for poly in apolar_piece(F, lower_degree):
            for v in range(F.shape.factors[i] + 1):
                var = Monomial.variable(F.shape, i, v)
                row = [Fraction(0)] * len(basis)
                for m, c in poly.items():
                    row[index[m * var]] += c
                rows.append(row)
    quotient_dim = len(basis) - linalg.rank(rows)
    threshold = max_dim + 1  # dim S_{deg alpha_i}
    return quotient_dim, (HOLDS if quotient_dim >= threshold else NOT_MINIMAL)


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------

def bounds_report(F: Tensor) -> BoundReport:
    """Compute every applicable bound for F and assemble the best sandwich."""
    components = {}
    cat = catalecticant_lower_bound(F)
    components["catalecticant"] = {"value": cat}

    if not F.is_monomial:
        # general tensors get the catalecticant floor and, where defined,
        # the two necessary minimal-border-rank tests
        if len(set(F.shape.factors)) == 1:
            try:
                count, verdict = minimal_border_rank_generator_test(F)
                components["minimal_generator_test"] = {
                    "count": count,
                    "threshold": F.shape.factors[0],
                    "verdict": verdict,
                }
            except PreconditionError:
                pass
        try:
            qdim, verdict = minimal_border_rank_quotient_test(F)
            components["minimal_quotient_test"] = {
                "dimension": qdim,
                "threshold": max(F.shape.factors) + 1,
                "verdict": verdict,
            }
        except PreconditionError:
            pass
        return BoundReport(
            lower=cat,
            lower_provenance="catalecticant",
            lower_witness={},
            upper=None,
            upper_provenance="none",
            upper_witness={"note": "no upper bound implemented for non-monomials"},
            components=components,
        )

    upper, upper_witness = upper_bound_monomial(F)
    components["chart_upper"] = {"value": upper, **upper_witness}

    lower, lower_provenance, lower_witness = cat, "catalecticant", {}
    if F.shape.num_factors == 1:
        dm, dm_witness = disjoint_module_lower_bound(F)
        components["disjoint_module"] = {"value": dm, "witness": dm_witness}
        if dm > lower:
            lower, lower_provenance, lower_witness = dm, "disjoint-module", dm_witness

        exact_unbalanced = almost_unbalanced_check(F)
        if exact_unbalanced is not None:
            components["almost_unbalanced"] = {"value": exact_unbalanced}

    try:
        closed = closed_form_border_rank(F)
        components["closed_form"] = {"value": closed}
    except UnsupportedShapeError:
        closed = None

    if closed is not None:
        lower, lower_provenance = closed, "closed-form"
        lower_witness = {"method": "sorted-exponent product"}
        upper, upper_provenance = closed, "closed-form"
        upper_witness = {"method": "sorted-exponent product"}
    elif F.shape.num_factors == 1 and components.get("almost_unbalanced"):
        value = components["almost_unbalanced"]["value"]
        lower, lower_provenance = value, "closed-form"
        lower_witness = {"method": "almost-unbalanced"}
        upper, upper_provenance = value, "closed-form"
        upper_witness = {"method": "almost-unbalanced"}
    else:
        upper_provenance = "chart"

    return BoundReport(
        lower=lower,
        lower_provenance=lower_provenance,
        lower_witness=lower_witness,
        upper=upper,
        upper_provenance=upper_provenance,
        upper_witness=upper_witness,
        components=components,
    )
