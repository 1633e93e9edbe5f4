"""Backtracking search for monomial ideals with the generic Hilbert function
inside the apolar ideal of a monomial.

A border-rank bound br(F) <= r forces an ideal I inside F^perp whose Hilbert
function is dim(S/I)_D = min(r, dim S_D) in every multidegree.  The search
enumerates candidate graded pieces degree by degree up to a horizon: each
piece must contain the shifts of all lower pieces (the ideal property), stay
inside the apolar piece, and have the exact forced dimension.

Exhausted is a certificate: no such truncated ideal exists, hence br(F) > r.
Found only produces a candidate; the flat-limit condition that would turn it
into an actual border-rank-r decomposition is NOT checked here, so Found
never certifies br(F) <= r.

Pieces are bitmasks over the descending-grevlex monomial list of each
multidegree, so the hot loop is integer arithmetic.  Symmetry pruning quotients
by variable permutations fixing the exponent vector; a state is discarded if
relabelling makes its piece sequence strictly smaller in the prefix order, which
keeps the lexicographically least member of every orbit and hence preserves
both the Exhausted status and the first candidate found.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .apolarity import Tensor, apolar_piece_dimension
from .errors import PreconditionError
from .ideals import (
    MonomialIdeal,
    contained_in_apolar,
    hilbert_function,
    is_saturated,
    saturate,
    saturation_defect,
)
from .macaulay import lexbar_growth
from .ring import (
    FactorShape,
    Monomial,
    degree_le,
    enumerate_monomials,
    piece_dimension,
)

EXHAUSTED = "Exhausted"
FOUND = "Found"
BUDGET_EXCEEDED = "BudgetExceeded"

FOUND_NOTE = (
    "candidate only: the Hilbert function, containment and ideal conditions "
    "hold up to the horizon, but the flat-limit condition for border rank "
    "<= r is not verified"
)

_SYMMETRY_GROUP_CAP = 720


@dataclass
class SearchConfig:
    r: int
    horizon: int | None = None  # defaults to the total degree of F
    symmetry_pruning: bool = True
    growth_pruning: bool = False
    parallel_width: int = 1
    node_budget: int | None = None  # per top-level subtree


@dataclass
class SearchStatistics:
    nodes: int = 0
    prunings: dict = field(default_factory=dict)
    wall_time_seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "prunings": dict(self.prunings),
            "wall_time_seconds": round(self.wall_time_seconds, 6),
        }


@dataclass
class SearchOutcome:
    status: str  # Exhausted | Found | BudgetExceeded
    r: int
    horizon: int
    candidate: MonomialIdeal | None
    candidate_pieces: dict | None  # MultiDegree -> tuple[Monomial, ...]
    note: str
    statistics: SearchStatistics

    def to_json(self) -> dict:
        from .ring import monomial_to_text

        pieces = None
        if self.candidate_pieces is not None:
            pieces = {
                ",".join(str(x) for x in d): [monomial_to_text(m) for m in mons]
                for d, mons in self.candidate_pieces.items()
            }
        return {
            "status": self.status,
            "r": self.r,
            "horizon": self.horizon,
            "candidate_generators": None
            if self.candidate is None
            else [monomial_to_text(g) for g in self.candidate.generators],
            "candidate_pieces": pieces,
            "note": self.note,
            "statistics": self.statistics.to_json(),
        }


def generic_hilbert(r: int, shape: FactorShape, D) -> int:
    """dim(S/I)_D forced on any ideal of a border-rank-r limit scheme."""
    return min(r, piece_dimension(shape, D))


# ---------------------------------------------------------------------------
# Plan: everything the hot loop needs, as plain picklable data
# ---------------------------------------------------------------------------

@dataclass
class _Plan:
    degrees: list  # MultiDegree, ascending (total, lex)
    dims: list  # dim S_D
    reqs: list  # dim I_D forced by the Hilbert function
    apolar_masks: list  # bitmask of monomials outside the divisor set of a
    sources: list  # per degree: list of (src_index, table) with table[p] = mask
    sym_tables: list  # per group element: per degree, table[p] = image bit
    growth_kill: dict | None  # witness when static growth rules out r


def _degree_schedule(shape: FactorShape, horizon: int):
    degrees = []
    w = shape.num_factors
    for total in range(1, horizon + 1):
        for split in itertools.product(range(total + 1), repeat=w):
            if sum(split) == total:
                degrees.append(split)
    degrees.sort(key=lambda d: (sum(d), d))
    return degrees


def _variable_permutations(a: Monomial):
    """All permutations of variables, factor by factor, fixing the exponent
    vector of a.  Returned as tuples of per-factor index maps, identity
    excluded; falls back to class transpositions if the group is large."""
    per_factor = []
    for block in a.exponents:
        classes = {}
        for i, e in enumerate(block):
            classes.setdefault(e, []).append(i)
        factor_perms = []
        for assignment in itertools.product(
            *(itertools.permutations(idxs) for idxs in classes.values())
        ):
            mapping = list(range(len(block)))
            for idxs, image in zip(classes.values(), assignment):
                for src, dst in zip(idxs, image):
                    mapping[src] = dst
            factor_perms.append(tuple(mapping))
        per_factor.append(factor_perms)

    order = math.prod(len(p) for p in per_factor)
    if order > _SYMMETRY_GROUP_CAP:
        # a generating set is still a sound (weaker) pruning group
        elements = set()
        for j, block in enumerate(a.exponents):
            classes = {}
            for i, e in enumerate(block):
                classes.setdefault(e, []).append(i)
            for idxs in classes.values():
                for s, t in zip(idxs, idxs[1:]):
                    mapping = list(range(len(block)))
                    mapping[s], mapping[t] = t, s
                    element = tuple(
                        tuple(mapping) if jj == j else tuple(range(len(b)))
                        for jj, b in enumerate(a.exponents)
                    )
                    elements.add(element)
        return sorted(elements)

    identity = tuple(tuple(range(len(b))) for b in a.exponents)
    elements = [
        e for e in itertools.product(*per_factor) if e != identity
    ]
    return elements


def _apply_variable_permutation(m: Monomial, element) -> Monomial:
    blocks = []
    for block, mapping in zip(m.exponents, element):
        new = [0] * len(block)
        for i, e in enumerate(block):
            new[mapping[i]] = e
        blocks.append(tuple(new))
    return Monomial(blocks)


def _static_growth_kill(a: Monomial, shape: FactorShape, r: int, horizon: int):
    """Choice-independent infeasibility test: at a degree d where the apolar
    pieces split as disjoint shifted modules, the required codimension jump
    c_d -> c_{d+1} may exceed the Lex-bar cap; then no ideal with the generic
    Hilbert function exists and the whole search is settled."""
    if shape.num_factors != 1:
        raise PreconditionError("growth pruning applies to single-factor shapes")
    exps = a.exponents[0]
    n = shape.factors[0]
    F = Tensor.monomial(shape, a.exponents)
    for d in range(1, horizon):
        modules = sorted(d - e - 1 for e in exps if d - e - 1 >= 0)
        if not modules:
            continue
        present = [e for e in exps if d - e - 1 >= 0]
        if any(
            present[i] + present[j] + 2 <= d
            for i in range(len(present))
            for j in range(i + 1, len(present))
        ):
            continue
        dim_d = piece_dimension(shape, (d,))
        dim_d1 = piece_dimension(shape, (d + 1,))
        c_d = apolar_piece_dimension(F, (d,)) - (dim_d - min(r, dim_d))
        c_d1 = apolar_piece_dimension(F, (d + 1,)) - (dim_d1 - min(r, dim_d1))
        if c_d < 0:
            # the catalecticant already rules r out; the dynamic walk will
            # report this as an insufficient-candidates dead end
            continue
        cap = lexbar_growth(modules, n, c_d) + sum(1 for e in exps if e == d)
        if c_d1 > cap:
            return {"degree": d, "codim_d": c_d, "codim_d_plus_1": c_d1, "cap": cap}
    return None


def _build_plan(F: Tensor, config: SearchConfig):
    if not F.is_monomial:
        raise PreconditionError("move-fit search needs a monomial tensor")
    a = F.support_exponents()
    shape = F.shape
    horizon = config.horizon if config.horizon is not None else sum(F.degree)
    if horizon < 1:
        raise PreconditionError(f"horizon must be >= 1, got {horizon}")
    if config.r < 1:
        raise PreconditionError(f"r must be >= 1, got {config.r}")
    dim_L = piece_dimension(shape, F.degree)
    if config.r > dim_L:
        raise PreconditionError(
            f"r = {config.r} exceeds dim S_L = {dim_L}; the hypothesis "
            "br(F) <= r is vacuous there"
        )
    if config.parallel_width < 1:
        raise PreconditionError("parallel width must be >= 1")
    if config.node_budget is not None and config.node_budget < 1:
        raise PreconditionError("node budget must be >= 1")

    degrees = _degree_schedule(shape, horizon)
    deg_index = {d: k for k, d in enumerate(degrees)}
    mons_by_degree = [enumerate_monomials(shape, d) for d in degrees]
    index_by_degree = [
        {m: p for p, m in enumerate(mons)} for mons in mons_by_degree
    ]

    dims, reqs, apolar_masks = [], [], []
    for mons in mons_by_degree:
        dim = len(mons)
        dims.append(dim)
        reqs.append(dim - min(config.r, dim))
        mask = 0
        for p, m in enumerate(mons):
            if not degree_le(m.flat(), a.flat()):
                mask |= 1 << p
        apolar_masks.append(mask)

    sources = [[] for _ in degrees]
    for src_k, d in enumerate(degrees):
        for j, nj in enumerate(shape.factors):
            target = tuple(
                x + (1 if jj == j else 0) for jj, x in enumerate(d)
            )
            tk = deg_index.get(target)
            if tk is None:
                continue
            tgt_index = index_by_degree[tk]
            table = []
            for m in mons_by_degree[src_k]:
                bits = 0
                for v in range(nj + 1):
                    bits |= 1 << tgt_index[m * Monomial.variable(shape, j, v)]
                table.append(bits)
            sources[tk].append((src_k, table))

    sym_tables = []
    if config.symmetry_pruning:
        for element in _variable_permutations(a):
            tables = []
            for mons, idx in zip(mons_by_degree, index_by_degree):
                tables.append(
                    [1 << idx[_apply_variable_permutation(m, element)] for m in mons]
                )
            sym_tables.append(tables)

    growth_kill = None
    if config.growth_pruning:
        growth_kill = _static_growth_kill(a, shape, config.r, horizon)

    plan = _Plan(
        degrees=degrees,
        dims=dims,
        reqs=reqs,
        apolar_masks=apolar_masks,
        sources=sources,
        sym_tables=sym_tables,
        growth_kill=growth_kill,
    )
    return plan, mons_by_degree


# ---------------------------------------------------------------------------
# Hot loop
# ---------------------------------------------------------------------------

def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mandatory(plan: _Plan, chosen: list, k: int) -> int:
    M = 0
    for src_k, table in plan.sources[k]:
        m = chosen[src_k]
        while m:
            low = m & -m
            M |= table[low.bit_length() - 1]
            m ^= low
    return M


def _image_smaller(img: int, cur: int) -> int:
    """-1 if img < cur in the set order matching ascending position tuples,
    0 if equal, +1 if greater."""
    x = img ^ cur
    if not x:
        return 0
    return -1 if (x & -x) & img else 1


class _BudgetHit(Exception):
    pass


class _Searcher:
    """Depth-first search below a fixed prefix, with its own node budget."""

    def __init__(self, plan: _Plan, budget, prunings: dict):
        self.plan = plan
        self.budget = budget  # remaining nodes, or None
        self.nodes = 0
        self.prunings = prunings

    def _spend(self):
        self.nodes += 1
        if self.budget is not None:
            self.budget -= 1
            if self.budget < 0:
                raise _BudgetHit()

    def _prune(self, cause):
        self.prunings[cause] = self.prunings.get(cause, 0) + 1

    def assign(self, chosen, active, k, piece: int):
        """Set piece at level k (counts a node), apply symmetry, descend."""
        self._spend()
        chosen[k] = piece
        if active:
            next_active = []
            for g in active:
                table = self.plan.sym_tables[g][k]
                img = 0
                m = piece
                while m:
                    low = m & -m
                    img |= table[low.bit_length() - 1]
                    m ^= low
                cmp = _image_smaller(img, piece)
                if cmp < 0:
                    self._prune("symmetry")
                    chosen[k] = 0
                    return None
                if cmp == 0:
                    next_active.append(g)
        else:
            next_active = active
        result = self.descend(chosen, next_active, k + 1)
        if result is None:
            chosen[k] = 0
        return result

    def descend(self, chosen, active, k):
        """Explore level k onward; returns chosen pieces on success else None."""
        plan = self.plan
        if k == len(plan.degrees):
            return list(chosen)
        M = _mandatory(plan, chosen, k)
        assert M & ~plan.apolar_masks[k] == 0
        req = plan.reqs[k]
        extra = req - M.bit_count()
        if extra < 0:
            self._prune("mandatory_overflow")
            return None
        free_mask = plan.apolar_masks[k] & ~M
        free = list(_bits(free_mask))
        if len(free) < extra:
            self._prune("insufficient_candidates")
            return None
        for combo in itertools.combinations(free, extra):
            piece = M
            for p in combo:
                piece |= 1 << p
            result = self.assign(chosen, active, k, piece)
            if result is not None:
                return result
        return None


def _initial_active(plan: _Plan):
    return list(range(len(plan.sym_tables)))


def _forced_walk(plan: _Plan, searcher: _Searcher):
    """Apply every level with a unique choice; stop at the first branch.

    Returns (chosen, k, free, extra) with k the branching level, or
    (chosen, None, None, None) when the walk settles the search: chosen is
    the full assignment (Found) or None (Exhausted)."""
    chosen = [0] * len(plan.degrees)
    for k in range(len(plan.degrees)):
        M = _mandatory(plan, chosen, k)
        assert M & ~plan.apolar_masks[k] == 0
        req = plan.reqs[k]
        extra = req - M.bit_count()
        if extra < 0:
            searcher._prune("mandatory_overflow")
            return None, None, None, None
        free_mask = plan.apolar_masks[k] & ~M
        free = list(_bits(free_mask))
        if len(free) < extra:
            searcher._prune("insufficient_candidates")
            return None, None, None, None
        if extra == 0:
            searcher._spend()
            chosen[k] = M
            continue
        if extra == len(free):
            searcher._spend()
            chosen[k] = M | free_mask
            continue
        return chosen, k, free, extra
    return chosen, None, None, None


# worker-side state, installed once per process
_WORKER_PLAN = None
_WORKER_ARGS = None


def _init_worker(plan, chosen, active, k, free, extra, budget):
    global _WORKER_PLAN, _WORKER_ARGS
    _WORKER_PLAN = plan
    _WORKER_ARGS = (chosen, active, k, free, extra, budget)


def _run_chunk(bounds_pair):
    """Explore top-level combos with absolute indices in [lo, hi).

    Each top-level subtree gets a fresh node budget.  Returns the lowest
    Found index with its pieces, whether any subtree hit the budget, and
    the accumulated statistics."""
    lo, hi = bounds_pair
    chosen, active, k, free, extra, budget = _WORKER_ARGS
    plan = _WORKER_PLAN
    prunings = {}
    nodes = 0
    budget_hit = False
    chosen = list(chosen)
    M = _mandatory(plan, chosen, k)
    for offset, combo in enumerate(
        itertools.islice(itertools.combinations(free, extra), lo, hi)
    ):
        searcher = _Searcher(plan, budget, prunings)
        piece = M
        for p in combo:
            piece |= 1 << p
        try:
            result = searcher.assign(chosen, list(active), k, piece)
        except _BudgetHit:
            budget_hit = True
            chosen[k] = 0
            result = None
        nodes += searcher.nodes
        if result is not None:
            return (lo + offset, result, budget_hit, nodes, prunings)
    return (None, None, budget_hit, nodes, prunings)


def _finish(plan, mons_by_degree, F, config, horizon, status, pieces, stats, t0):
    stats.wall_time_seconds = time.perf_counter() - t0
    candidate = None
    candidate_pieces = None
    note = ""
    if status == FOUND:
        candidate_pieces = {}
        monomials = []
        for k, degree in enumerate(plan.degrees):
            chosen = [mons_by_degree[k][p] for p in _bits(pieces[k])]
            chosen.sort(key=Monomial.grevlex_key)
            candidate_pieces[degree] = tuple(chosen)
            monomials.extend(chosen)
        candidate = MonomialIdeal(F.shape, monomials)
        note = FOUND_NOTE
    elif status == EXHAUSTED:
        note = (
            f"no ideal with the generic Hilbert function for r = {config.r} "
            f"exists inside the apolar ideal up to total degree {horizon}; "
            f"hence the border rank exceeds {config.r}"
        )
    else:
        note = "node budget exhausted before the search space was covered"
    return SearchOutcome(
        status=status,
        r=config.r,
        horizon=horizon,
        candidate=candidate,
        candidate_pieces=candidate_pieces,
        note=note,
        statistics=stats,
    )


@dataclass
class VerificationReport:
    r: int
    horizon: int
    rows: list  # per-degree dicts
    hilbert_ok: bool
    containment: bool
    saturation: dict
    passed: bool  # Hilbert function and containment; saturation is informational

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "horizon": self.horizon,
            "rows": self.rows,
            "hilbert_ok": self.hilbert_ok,
            "containment": self.containment,
            "saturation": self.saturation,
            "passed": self.passed,
        }


def verify_candidate(I, F: Tensor, r: int, horizon: int | None = None):
    """Replay the move-fit conditions for an explicit ideal.

    Checks, for every multidegree of total degree <= horizon, that
    dim(S/I)_D = min(r, dim S_D), and that I sits inside the apolar ideal of
    F.  A candidate passes on these two; saturation is reported alongside
    (exactly for monomial ideals, by the degreewise colon probe otherwise)
    but a candidate need not be saturated.
    """
    if horizon is None:
        horizon = sum(F.degree)
    schedule = [tuple(0 for _ in F.shape.factors)] + _degree_schedule(F.shape, horizon)

    rows = []
    hilbert_ok = True
    sat_I = saturate(I) if isinstance(I, MonomialIdeal) else None
    for D in schedule:
        dim_s = piece_dimension(F.shape, D)
        dim_ideal, dim_quotient = hilbert_function(I, D)
        required_quotient = min(r, dim_s)
        row = {
            "degree": list(D),
            "dim_s": dim_s,
            "required_quotient": required_quotient,
            "actual_quotient": dim_quotient,
            "required_ideal": dim_s - required_quotient,
            "actual_ideal": dim_ideal,
            "ok": dim_quotient == required_quotient,
        }
        if sat_I is not None:
            row["saturation_quotient"] = hilbert_function(sat_I, D)[1]
        hilbert_ok = hilbert_ok and row["ok"]
        rows.append(row)

    containment = contained_in_apolar(I, F)

    if isinstance(I, MonomialIdeal):
        saturation = {"kind": "exact", "saturated": is_saturated(I)}
    else:
        defect = saturation_defect(I, max_total_degree=horizon)
        saturation = {
            "kind": "degreewise-probe",
            "saturated": False if defect is not None else None,
            "defect": defect,
        }

    return VerificationReport(
        r=r,
        horizon=horizon,
        rows=rows,
        hilbert_ok=hilbert_ok,
        containment=containment,
        saturation=saturation,
        passed=hilbert_ok and containment,
    )


def search(F: Tensor, config: SearchConfig) -> SearchOutcome:
    """Run the move-fit search for border rank <= config.r.

    The outcome status is Exhausted (certificate: br > r up to the horizon
    constraints), Found (candidate ideal, nothing certified), or
    BudgetExceeded.  Given the same config the status and candidate are
    deterministic, independent of parallel_width; statistics are not.
    """
    t0 = time.perf_counter()
    plan, mons_by_degree = _build_plan(F, config)
    horizon = config.horizon if config.horizon is not None else sum(F.degree)
    stats = SearchStatistics()

    if plan.growth_kill is not None:
        stats.prunings["growth"] = 1
        outcome = _finish(
            plan, mons_by_degree, F, config, horizon, EXHAUSTED, None, stats, t0
        )
        outcome.note += (
            f" (settled by the growth cap at degree {plan.growth_kill['degree']})"
        )
        return outcome

    prefix_searcher = _Searcher(plan, config.node_budget, stats.prunings)
    try:
        chosen, k, free, extra = _forced_walk(plan, prefix_searcher)
    except _BudgetHit:
        stats.nodes = prefix_searcher.nodes
        return _finish(
            plan, mons_by_degree, F, config, horizon, BUDGET_EXCEEDED, None, stats, t0
        )
    stats.nodes = prefix_searcher.nodes

    if k is None:
        status = FOUND if chosen is not None else EXHAUSTED
        return _finish(
            plan, mons_by_degree, F, config, horizon, status, chosen, stats, t0
        )

    active = _initial_active(plan)
    total = math.comb(len(free), extra)
    workers = min(config.parallel_width, total)
    init_args = (plan, chosen, active, k, free, extra, config.node_budget)

    found_index = None
    found_pieces = None
    budget_hit = False

    if workers <= 1:
        _init_worker(*init_args)
        chunk = 1024
        for lo in range(0, total, chunk):
            idx, pieces, hit, nodes, prunings = _run_chunk((lo, min(lo + chunk, total)))
            stats.nodes += nodes
            budget_hit = budget_hit or hit
            for cause, count in prunings.items():
                stats.prunings[cause] = stats.prunings.get(cause, 0) + count
            if idx is not None:
                found_index, found_pieces = idx, pieces
                break
    else:
        chunk_count = max(workers * 4, 1)
        step = max(1, math.ceil(total / chunk_count))
        spans = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=init_args
        ) as pool:
            futures = [pool.submit(_run_chunk, span) for span in spans]
            for fut in futures:
                idx, pieces, hit, nodes, prunings = fut.result()
                stats.nodes += nodes
                budget_hit = budget_hit or hit
                for cause, count in prunings.items():
                    stats.prunings[cause] = stats.prunings.get(cause, 0) + count
                if idx is not None:
                    found_index, found_pieces = idx, pieces
                    for later in futures[futures.index(fut) + 1 :]:
                        later.cancel()
                    break

    if found_pieces is not None:
        status = FOUND
    elif budget_hit:
        status = BUDGET_EXCEEDED
    else:
        status = EXHAUSTED
    return _finish(
        plan, mons_by_degree, F, config, horizon, status, found_pieces, stats, t0
    )
