"""Exhaustive rank and symmetric-rank computation over small prime fields.

Rank search
-----------
The tensor is first reduced to its concise core in every mode (the factors of
any minimal decomposition can be projected into the column spaces of the
mode unfoldings without increasing the term count).  Unfolding the core along
its largest mode gives a matrix ``A`` with row space ``W`` of dimension ``m``.
A decomposition ``T = sum x_i ⊗ z_i`` with rank-one ``z_i`` exists with ``r``
terms exactly when some ``r``-dimensional ``U ⊇ W`` is spanned by the
rank-one points it contains.  Depth ``e = r - m`` therefore enumerates the
``e``-dimensional subspaces of the quotient by ``W`` (or, when that is
cheaper, ``e``-subsets of rank-one points), which covers every sum of ``r``
projectively normalized rank-one terms.

Symmetric rank search
---------------------
``srank S <= r`` exactly when ``S`` lies in the span of ``u^{⊗d}`` for some
``r`` projective points ``u``.  ``S`` is not expressible at all when it lies
outside the span of every such power.
"""

from __future__ import annotations

import math
import sys
import time
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations, product
from typing import Any, TextIO

import numpy as np

from .analysis import column_basis, concise_reduce, rank_a, unfold
from .errors import BudgetExceeded, InputError, UnsupportedField
from .fields import Field
from .linalg import batch_rank_mod_p, gaussian_binomial, matrix_rank, rref, rref_subspaces, solve
from .tensor import Decomposition, RankOneTerm, SymTensor, Tensor, mode_product, sym_index_orbits

DEFAULT_BUDGET = 5_000_000
# Largest symmetric space (number of tensors) for which GL-orbits are tabulated.
ORBIT_TABLE_LIMIT = 200_000
_CHUNK = 4_000_000


class _NotExpressible:
    def __repr__(self):
        return "NotExpressible"

    def __reduce__(self):
        return "NotExpressible"


NotExpressible = _NotExpressible()


def _require_finite(f: Field):
    if not f.is_finite:
        raise UnsupportedField(f"exhaustive search needs a finite field, got {f}")


@lru_cache(maxsize=None)
def projective_points(n: int, p: int) -> np.ndarray:
    """Nonzero vectors of GF(p)^n whose first nonzero coordinate is 1, in lexicographic order."""
    pts = [v for v in product(range(p), repeat=n) if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    out = np.array(pts, dtype=np.int64).reshape(-1, n)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _segre(dims: tuple[int, ...], p: int) -> tuple[np.ndarray, np.ndarray]:
    """Projective rank-one points of ``GF(p)^dims``: flattened tensors and per-mode point indices."""
    lists = [projective_points(m, p) for m in dims]
    idx = np.array(list(product(*(range(len(l)) for l in lists))), dtype=np.int64).reshape(-1, len(dims))
    flat = np.ones((len(idx), 1), dtype=np.int64)
    for k, l in enumerate(lists):
        flat = (flat[:, :, None] * l[idx[:, k]][:, None, :]).reshape(len(idx), -1) % p
    flat.setflags(write=False)
    idx.setflags(write=False)
    return flat, idx


@dataclass
class RankSearch:
    """Result of :func:`rank_search`.

    ``decompositions`` holds one witness, or every minimal decomposition
    (as sets of terms) when the search was asked for all of them.
    """

    rank: int
    decompositions: list[Decomposition]
    method: str = "exhaustive"
    candidates: int = 0

    @property
    def witness(self) -> Decomposition:
        return self.decompositions[0]


class _Core:
    """Concise core of a tensor together with the maps back to the original modes."""

    def __init__(self, t: Tensor):
        f = t.field
        self.field = f
        self.order = t.order
        self.dim = t.dim
        data = t.data
        self.bases = []
        lefts = []
        for k in range(t.order):
            A = np.moveaxis(data, k, 0).reshape(t.dim, -1)
            b, l = column_basis(A, f)
            self.bases.append(b)
            lefts.append(l)
        self.dims = tuple(b.shape[1] for b in self.bases)
        self.zero = 0 in self.dims
        if self.zero:
            return
        core = mode_product(data, lefts, f)
        self.lead = int(np.argmax(self.dims))
        self.others = tuple(m for k, m in enumerate(self.dims) if k != self.lead)
        self.A = np.moveaxis(core, self.lead, 0).reshape(self.dims[self.lead], -1)

    def term(self, x: np.ndarray, point: np.ndarray) -> RankOneTerm:
        """Map a lead-mode vector and a tuple of projective point indices back to a full term."""
        p = self.field.p
        other_modes = [k for k in range(self.order) if k != self.lead]
        factors = [None] * self.order
        factors[self.lead] = (self.bases[self.lead] @ x) % p
        for j, k in enumerate(other_modes):
            v = projective_points(self.others[j], p)[point[j]]
            factors[k] = (self.bases[k] @ v) % p
        return RankOneTerm(1, tuple(factors))


def _quotient(A: np.ndarray, P: np.ndarray, f: Field) -> np.ndarray:
    # Coordinates of each row of P modulo the row space of A, on the non-pivot columns.
    p = f.p
    R, piv = rref(A, f)
    red = (P - P[:, piv] @ R) % p
    keep = [c for c in range(A.shape[1]) if c not in set(piv)]
    return red[:, keep]


def _spans(mats: np.ndarray, target: int, p: int) -> np.ndarray:
    out = np.zeros(len(mats), dtype=bool)
    step = max(1, _CHUNK // max(1, mats[0].size if len(mats) else 1))
    for i in range(0, len(mats), step):
        out[i : i + step] = batch_rank_mod_p(mats[i : i + step], p) == target
    return out


def _members_by_subspaces(Q, e, p):
    """Yield boolean member masks (one row per ``e``-dim subspace of the quotient)."""
    q = Q.shape[1]
    H = rref_subspaces(q, q - e, p)
    N = len(Q)
    step = max(1, _CHUNK // max(1, (q - e) * N))
    for i in range(0, len(H), step):
        block = H[i : i + step]
        if q - e == 0:
            yield np.ones((len(block), N), dtype=bool)
            continue
        prod = np.einsum("kij,nj->kin", block, Q) % p
        yield ~prod.any(axis=1)


def _members_by_points(Q, e, p):
    """Yield member masks for spans of ``e`` quotient-independent rank-one points."""
    N, q = Q.shape
    classes = _projective_classes(Q, p)
    combos = np.array(list(combinations(range(len(classes)), e)), dtype=np.int64).reshape(-1, e)
    step = max(1, _CHUNK // max(1, (e + 1) * q * N))
    for i in range(0, len(combos), step):
        C = classes[combos[i : i + step]]
        ok = batch_rank_mod_p(C, p) == e
        C = C[ok]
        if not len(C):
            continue
        stacked = np.concatenate([np.repeat(C[:, None], N, axis=1), np.broadcast_to(Q[None, :, None, :], (len(C), N, 1, q))], axis=2)
        ranks = batch_rank_mod_p(stacked.reshape(-1, e + 1, q), p).reshape(len(C), N)
        yield ranks == e


def _projective_classes(Q: np.ndarray, p: int) -> np.ndarray:
    inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
    nz = Q[Q.any(axis=1)]
    if not len(nz):
        return nz
    lead = nz[np.arange(len(nz)), (nz != 0).argmax(axis=1)]
    normed = (nz * inv[lead][:, None]) % p
    return np.unique(normed, axis=0)


def rank_search(
    t: Tensor,
    budget: int = DEFAULT_BUDGET,
    find_all: bool = False,
    known: Decomposition | None = None,
) -> RankSearch:
    """Exact tensor rank over GF(p) by exhaustive search.

    ``known`` may supply any decomposition of ``t``; its length is then used
    as an upper bound and it becomes the witness if nothing shorter exists.
    ``budget`` caps the total number of candidate subspaces (or weighted
    point subsets) examined; exceeding it raises :class:`BudgetExceeded`.
    """
    f = t.field
    _require_finite(f)
    p = f.p
    upper = None
    if known is not None:
        if not known.reconstruct().data.tolist() == t.data.tolist():
            raise InputError("the supplied decomposition does not reconstruct the tensor")
        upper = len(known)
    core = _Core(t)
    empty = Decomposition([], f, t.order, t.dim, meta={"method": "exhaustive"})
    if core.zero:
        return RankSearch(0, [empty])
    P, idx = _segre(core.others, p)
    A = core.A
    m = A.shape[0]
    Q = _quotient(A, P, f)
    q = Q.shape[1]
    N = len(P)
    spent = 0
    for e in range(q + 1):
        r = m + e
        if upper is not None and r >= upper and not find_all:
            return RankSearch(upper, [known], "exhaustive", spent)
        n_sub = gaussian_binomial(q, e, p)
        n_classes = len(_projective_classes(Q, p))
        n_pts = math.comb(n_classes, e) * max(1, N // 8)
        cost = min(n_sub, n_pts)
        if spent + cost > budget:
            raise BudgetExceeded(
                f"rank search at depth {r} needs {cost} candidates; budget {budget} ({spent} spent)"
            )
        spent += cost
        gen = _members_by_subspaces(Q, e, p) if n_sub <= n_pts else _members_by_points(Q, e, p)
        found = []
        seen = set()
        for masks in gen:
            masks = masks[masks.sum(axis=1) >= r]
            if not len(masks):
                continue
            mats = np.where(masks[:, :, None], P[None], 0)
            good = masks[_spans(mats, r, p)]
            for mask in good:
                key = mask.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                found.append(np.flatnonzero(mask))
            if found and not find_all:
                break
        if not found:
            continue
        decs = []
        for members in found:
            for subset in _independent_subsets(P, members, r, p, find_all, budget):
                decs.append(_assemble(core, t, P, idx, subset))
        return RankSearch(r, decs, "exhaustive", spent)
    raise AssertionError("rank search exhausted the ambient space")  # unreachable: U = V always passes


def _independent_subsets(P, members, r, p, find_all, budget):
    if not find_all:
        R, piv = rref(P[members].T, Field.gf(p))
        yield members[piv]
        return
    if math.comb(len(members), r) > budget:
        raise BudgetExceeded(f"{math.comb(len(members), r)} subsets to enumerate for all decompositions")
    subs = np.array(list(combinations(members, r)), dtype=np.int64).reshape(-1, r)
    ok = _spans(P[subs], r, p)
    yield from subs[ok]


def _assemble(core: _Core, t: Tensor, P, idx, subset) -> Decomposition:
    f = core.field
    Z = P[subset]
    # A = X @ Z  with Z of full row rank.
    X = solve(Z.T, core.A.T, f).T
    terms = [core.term(X[:, i], idx[j]) for i, j in enumerate(subset)]
    dec = Decomposition(terms, f, t.order, t.dim, meta={"method": "exhaustive"})
    if dec.reconstruct().data.tolist() != t.data.tolist():
        raise AssertionError("exhaustive witness failed reconstruction")
    return dec


def brute_rank(t: Tensor, budget: int = DEFAULT_BUDGET, known: Decomposition | None = None) -> int:
    """Exact rank of a tensor over GF(p)."""
    return rank_search(t, budget, known=known).rank


@dataclass
class SrankResult:
    value: int | _NotExpressible
    witness: Decomposition | None = None

    @property
    def expressible(self) -> bool:
        return self.value is not NotExpressible

    def to_json(self) -> Any:
        return "not_expressible" if not self.expressible else self.value


def _sym_coords_of_powers(pts: np.ndarray, d: int, p: int) -> np.ndarray:
    orbits = sym_index_orbits(pts.shape[1], d)
    out = np.ones((len(pts), len(orbits)), dtype=np.int64)
    for j, idx in enumerate(orbits):
        for i in idx:
            out[:, j] = out[:, j] * pts[:, i] % p
    return out


def brute_srank(s: Tensor, budget: int = DEFAULT_BUDGET, lower: int = 0) -> SrankResult:
    """Minimal number of terms ``c u^{⊗d}`` summing to ``s`` over GF(p).

    ``lower`` is an optional proven lower bound on the answer (the search
    always starts at least from ``rank A(s)``).
    """
    f = s.field
    _require_finite(f)
    if not s.is_symmetric():
        raise InputError("symmetric rank needs a symmetric tensor")
    p = f.p
    d = s.order
    core, basis = concise_reduce(s)
    if core.is_zero():
        return SrankResult(0, Decomposition([], f, d, s.dim, meta={"method": "exhaustive"}))
    m = core.dim
    pts = projective_points(m, p)
    V = _sym_coords_of_powers(pts, d, p)
    target = np.array([int(x) for x in core.data[tuple(zip(*sym_index_orbits(m, d)))]], dtype=np.int64)
    full = matrix_rank(V, f)
    if matrix_rank(np.vstack([V, target]), f) != full:
        return SrankResult(NotExpressible)
    spent = 0
    for r in range(max(m, lower), min(len(pts), V.shape[1]) + 1):
        cost = math.comb(len(pts), r)
        if spent + cost > budget:
            raise BudgetExceeded(f"srank search at depth {r} needs {cost} subsets; budget {budget}")
        spent += cost
        hit = _first_spanning_subset(V, target, r, p)
        if hit is None:
            continue
        coef = solve(V[hit].T, target, f)
        terms = [
            RankOneTerm(int(c), ((basis @ pts[i]) % p,), True) for c, i in zip(coef, hit)
        ]
        dec = Decomposition(terms, f, d, s.dim, meta={"method": "exhaustive"})
        if dec.reconstruct().data.tolist() != s.data.tolist():
            raise AssertionError("srank witness failed reconstruction")
        return SrankResult(r, dec)
    raise AssertionError("expressible tensor with no spanning subset")  # unreachable by the span check


def _first_spanning_subset(V, target, r, p):
    n_pts = len(V)
    all_combos = combinations(range(n_pts), r)
    step = max(1, _CHUNK // ((r + 1) * V.shape[1]))
    while True:
        chunk = np.array(list(_take(all_combos, step)), dtype=np.int64).reshape(-1, r)
        if not len(chunk):
            return None
        sub = V[chunk]
        with_t = np.concatenate([sub, np.broadcast_to(target, (len(chunk), 1, len(target)))], axis=1)
        ok = batch_rank_mod_p(sub, p) == batch_rank_mod_p(with_t, p)
        ok &= batch_rank_mod_p(sub, p) == r
        if ok.any():
            return chunk[int(np.argmax(ok))]


def _take(it, k):
    for _, x in zip(range(k), it):
        yield x


# -- symmetric spaces, GL-orbits, census, sweeps ------------------------------


class SymmetricSpace:
    """All of ``S^d GF(p)^n`` indexed by base-p digits of the symmetric coordinates."""

    def __init__(self, field: Field, d: int, n: int):
        _require_finite(field)
        self.field = field
        self.d = d
        self.n = n
        self.orbits = sym_index_orbits(n, d)
        self.size = field.p ** len(self.orbits)

    def coords(self, index: int | np.ndarray) -> np.ndarray:
        p, c = self.field.p, len(self.orbits)
        index = np.asarray(index, dtype=np.int64)
        powers = p ** np.arange(c - 1, -1, -1, dtype=np.int64)
        return (index[..., None] // powers) % p

    def index(self, coords: np.ndarray) -> np.ndarray:
        p, c = self.field.p, len(self.orbits)
        powers = p ** np.arange(c - 1, -1, -1, dtype=np.int64)
        return (np.asarray(coords, dtype=np.int64) * powers).sum(axis=-1)

    def tensor(self, index: int) -> SymTensor:
        return SymTensor.from_sym_coords([int(x) for x in self.coords(index)], self.n, self.d, self.field)

    def __iter__(self):
        return (self.tensor(i) for i in range(self.size))

    def _action(self, g: np.ndarray) -> np.ndarray:
        # Matrix of u -> g u (on every mode) in symmetric coordinates.
        f = self.field
        c = len(self.orbits)
        M = np.zeros((c, c), dtype=np.int64)
        for j in range(c):
            e = [0] * c
            e[j] = 1
            basis = SymTensor.from_sym_coords(e, self.n, self.d, f)
            out = mode_product(basis.data, [g] * self.d, f)
            M[:, j] = [out[idx] for idx in self.orbits]
        return M

    def orbit_labels(self) -> np.ndarray:
        """Smallest index in the GL(n, p)-orbit of each tensor."""
        p, n = self.field.p, self.n
        gens = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    g = np.eye(n, dtype=np.int64)
                    g[i, j] = 1
                    gens.append(g)
        prim = next(a for a in range(1, p) if len({pow(a, k, p) for k in range(1, p)}) == p - 1)
        g = np.eye(n, dtype=np.int64)
        g[0, 0] = prim
        gens.append(g)
        allc = self.coords(np.arange(self.size))
        perms = [self.index((allc @ self._action(g).T) % p) for g in gens]
        labels = np.arange(self.size)
        while True:
            new = labels.copy()
            for perm in perms:
                new = np.minimum(new, labels[perm])
                np.minimum.at(new, perm, labels)
            new = new[new]
            if np.array_equal(new, labels):
                return labels
            labels = new


@dataclass
class Profile:
    """rank A, rank and srank of one symmetric tensor with witnesses."""

    rank_a: int
    rank: int
    srank: SrankResult
    rank_witness: Decomposition
    minimal_decompositions: int | None = None

    @property
    def chain_holds(self) -> bool:
        s = self.srank.value if self.srank.expressible else math.inf
        return self.rank_a <= self.rank <= s


def profile(s: SymTensor, budget: int = DEFAULT_BUDGET, count_minimal: bool = False) -> Profile:
    """All exhaustive quantities for one symmetric tensor.

    The symmetric search runs first; its witness then bounds the general
    rank search from above.
    """
    ra = rank_a(s)
    sr = brute_srank(s, budget)
    if count_minimal:
        res = rank_search(s, budget, find_all=True)
        return Profile(ra, res.rank, sr, res.witness, len(res.decompositions))
    res = rank_search(s, budget, known=sr.witness if sr.expressible else None)
    return Profile(ra, res.rank, sr, res.witness)


class _ProfileCache:
    """Profiles memoized per GL-orbit when the whole space is small enough to tabulate."""

    def __init__(self, space: SymmetricSpace, budget: int, use_orbits: bool, count_minimal: bool = False):
        self.space = space
        self.budget = budget
        self.count_minimal = count_minimal
        self.labels = space.orbit_labels() if use_orbits and space.size <= ORBIT_TABLE_LIMIT else None
        self.memo: dict[int, Profile] = {}

    def get(self, index: int) -> Profile:
        key = int(self.labels[index]) if self.labels is not None else int(index)
        if key not in self.memo:
            self.memo[key] = profile(self.space.tensor(key), self.budget, self.count_minimal)
        return self.memo[key]


@dataclass
class CensusReport:
    field: str
    d: int
    n: int
    total_symmetric: int
    expressible_nonzero: int
    not_expressible: int
    histogram: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        hist = [
            {"rank": r, "srank": "not_expressible" if s is None else s, "count": c}
            for (r, s), c in sorted(self.histogram.items(), key=lambda kv: (kv[0][0], math.inf if kv[0][1] is None else kv[0][1]))
        ]
        return {
            "field": self.field,
            "d": self.d,
            "n": self.n,
            "total": self.total_symmetric,
            "expressible_nonzero": self.expressible_nonzero,
            "not_expressible": self.not_expressible,
            "histogram": hist,
        }


def census(field: Field, d: int, n: int, budget: int = DEFAULT_BUDGET, use_orbits: bool = True) -> CensusReport:
    """Joint (rank, srank) histogram over every tensor of ``S^d GF(p)^n``."""
    space = SymmetricSpace(field, d, n)
    if space.size > budget:
        raise BudgetExceeded(f"{space.size} symmetric tensors exceed the budget {budget}")
    cache = _ProfileCache(space, budget, use_orbits)
    hist: Counter = Counter()
    for i in range(space.size):
        prof = cache.get(i)
        hist[(prof.rank, prof.srank.value if prof.srank.expressible else None)] += 1
    not_expr = sum(c for (r, s), c in hist.items() if s is None)
    return CensusReport(field.name, d, n, space.size, space.size - not_expr - 1, not_expr, dict(hist))


# theorem id -> minimum field size and the (d, n) range of the statement
THEOREMS = {
    "maintheo": dict(min_field=3, min_d=3, n=None),
    "eqcase": dict(min_field=2, min_d=3, n="ge2"),
    "rank2eq": dict(min_field=2, min_d=3, n=None),
    "case32": dict(min_field=3, min_d=3, n=2, d=3),
    "rank3symten": dict(min_field=3, min_d=3, n=None, d=3),
    "rank3case": dict(min_field=3, min_d=3, n="ge2"),
}


def _hypothesis(theorem: str, prof: Profile) -> bool:
    r, ra = prof.rank, prof.rank_a
    if theorem == "maintheo":
        return r <= ra + 1
    if theorem == "eqcase":
        return r == ra
    if theorem == "rank2eq":
        return r <= 2
    if theorem == "case32":
        return True
    if theorem == "rank3symten":
        return r == 3
    if theorem == "rank3case":
        return r <= 3 or (prof.srank.expressible and prof.srank.value <= 4)
    raise InputError(f"unknown theorem {theorem!r}")


def _conclusion(theorem: str, prof: Profile) -> bool:
    equal = prof.srank.expressible and prof.srank.value == prof.rank
    if theorem == "case32":
        return equal and prof.rank <= 3
    if theorem == "eqcase":
        return equal and prof.minimal_decompositions == 1
    return equal


@dataclass
class SweepReport:
    theorem: str
    field: str
    d: int
    n: int
    mode: str
    seed: int | None
    precondition_met: bool
    precondition_note: str = ""
    examined: int = 0
    hypothesis_met: int = 0
    conclusion_held: int = 0
    chain_violations: int = 0
    distinct_profiles: int = 0
    violations: list = dc_field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.precondition_met and not self.violations and not self.chain_violations

    def to_json(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__} | {"ok": self.ok}


def _precondition(theorem: str, field: Field, d: int, n: int) -> str:
    rule = THEOREMS.get(theorem)
    if rule is None:
        raise InputError(f"unknown theorem {theorem!r}; choose from {sorted(THEOREMS)}")
    problems = []
    if field.p < rule["min_field"]:
        problems.append(f"|F| >= {rule['min_field']} required")
    if d < rule["min_d"] or ("d" in rule and d != rule["d"]):
        problems.append(f"d = {d} outside the statement")
    if rule["n"] == "ge2" and n < 2 or isinstance(rule["n"], int) and n != rule["n"]:
        problems.append(f"n = {n} outside the statement")
    return "; ".join(problems)


def theorem_sweep(
    theorem: str,
    field: Field,
    d: int,
    n: int,
    sample_budget: int = 10_000,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    use_orbits: bool = True,
    progress: TextIO | None = None,
) -> SweepReport:
    """Check a theorem's implication on every tensor (or a seeded sample) of ``S^d GF(p)^n``.

    The space is swept exhaustively when it has at most ``sample_budget``
    tensors and sampled uniformly without replacement otherwise.  Exhaustive
    quantities are memoized per GL(n)-orbit (all of them are orbit invariants).
    """
    _require_finite(field)
    start = time.perf_counter()
    note = _precondition(theorem, field, d, n)
    space = SymmetricSpace(field, d, n)
    exhaustive = space.size <= sample_budget
    report = SweepReport(theorem, field.name, d, n, "exhaustive" if exhaustive else "sampled",
                         None if exhaustive else seed, not note, note)
    if note:
        return report
    if exhaustive:
        indices = np.arange(space.size)
    else:
        indices = np.sort(np.random.default_rng(seed).choice(space.size, size=sample_budget, replace=False))
    cache = _ProfileCache(space, budget, use_orbits, count_minimal=theorem == "eqcase")
    last = start
    for k, i in enumerate(indices, 1):
        prof = cache.get(int(i))
        report.examined += 1
        if not prof.chain_holds:
            report.chain_violations += 1
        if _hypothesis(theorem, prof):
            report.hypothesis_met += 1
            if _conclusion(theorem, prof):
                report.conclusion_held += 1
            else:
                report.violations.append(_violation(space.tensor(int(i)), prof))
        now = time.perf_counter()
        if progress is not None and (now - last > 1.0 or k == len(indices)):
            rate = k / max(now - start, 1e-9)
            progress.write(f"[{theorem}] {k}/{len(indices)} tensors, {rate:.0f}/s, orbits computed {len(cache.memo)}\n")
            progress.flush()
            last = now
    report.distinct_profiles = len(cache.memo)
    report.elapsed = time.perf_counter() - start
    return report


def _violation(s: SymTensor, prof: Profile) -> dict[str, Any]:
    return {
        "tensor": s.to_json(),
        "rank_a": prof.rank_a,
        "rank": prof.rank,
        "srank": prof.srank.to_json(),
        "rank_witness": prof.rank_witness.to_json(),
        "srank_witness": prof.srank.witness.to_json() if prof.srank.witness else None,
        "minimal_decompositions": prof.minimal_decompositions,
    }
