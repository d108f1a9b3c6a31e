import itertools
import json
import math
from collections import Counter

import numpy as np
import pytest

import oracles
from symrank.analysis import rank_a
from symrank.errors import BudgetExceeded, InputError, UnsupportedField
from symrank.fields import GF2, GF3, GF5, REAL, Field
from symrank.instances import w_tensor, z2_counterexample
from symrank.oracle import (
    NotExpressible,
    SymmetricSpace,
    brute_rank,
    brute_srank,
    census,
    rank_search,
    theorem_sweep,
)
from symrank.tensor import Decomposition, SymTensor, Tensor, sym_power, sym_term


def srank_value(res):
    return -1 if res.value is NotExpressible else res.value


@pytest.mark.parametrize("n,d,p", [(2, 2, 2), (2, 3, 2), (2, 3, 3), (2, 3, 5), (2, 4, 3)])
def test_srank_matches_closure_oracle(n, d, p):
    table = oracles.srank_table(n, d, p)
    space = SymmetricSpace(Field.gf(p), d, n)
    for i in range(space.size):
        s = space.tensor(i)
        res = brute_srank(s)
        assert srank_value(res) == table[i]
        if res.witness is not None:
            assert res.witness.reconstruct() == s
            assert len(res.witness) == res.value


@pytest.mark.parametrize("p", [2, 3])
def test_rank_matches_closure_oracle_on_all_2x2x2(p):
    table = oracles.rank_table_full(2, 3, p)
    f = Field.gf(p)
    for code, digits in enumerate(itertools.product(range(p), repeat=8)):
        t = Tensor(np.array(digits).reshape(2, 2, 2), f)
        res = rank_search(t)
        assert res.rank == table[code]
        assert res.witness.reconstruct() == t


def test_rank_of_binary_cubics_gf5():
    one, two = oracles.low_rank_sets(2, 3, 5)
    space = SymmetricSpace(GF5, 3, 2)
    for i in range(space.size):
        s = space.tensor(i)
        code = int(oracles.encode(s.data.reshape(-1), 5))
        expected = 0 if code == 0 else 1 if code in one else 2 if code in two else None
        r = brute_rank(s)
        if expected is None:
            # Not a sum of two rank-one tensors; the symmetric rank (<= 3) bounds it above.
            assert r == 3
        else:
            assert r == expected


def test_rank_inequality_chain_binary_cubics():
    for p in (2, 3):
        space = SymmetricSpace(Field.gf(p), 3, 2)
        for s in space:
            r = brute_rank(s)
            sr = brute_srank(s)
            assert rank_a(s) <= r
            assert not sr.expressible or r <= sr.value


def test_named_values():
    assert brute_rank(Tensor(np.zeros((2, 2, 2), dtype=int), GF3)) == 0
    z2 = z2_counterexample()
    assert brute_rank(z2) == 2
    assert brute_srank(z2).value == 3
    assert brute_rank(w_tensor(GF5)) == 3
    assert brute_srank(sym_power([1, 2], 3, GF3)).value == 1


def test_gf2_cubic_outside_expressible_set():
    # e1^2 e2 alone: every cube u^3 over GF(2) has s112 = s122.
    s = SymTensor.from_sym_coords([0, 1, 0, 0], 2, 3, GF2)
    assert brute_srank(s).value is NotExpressible
    assert brute_srank(s).to_json() == "not_expressible"


def test_gf3_binary_cubic_with_rank_below_symmetric_rank():
    # s122 = s222 = 1 over GF(3): the closure oracles give rank 3, srank 4.
    s = SymTensor.from_sym_coords([0, 0, 1, 1], 2, 3, GF3)
    assert oracles.rank_table_full(2, 3, 3)[oracles.encode(s.data.reshape(-1), 3)] == 3
    assert oracles.srank_table(2, 3, 3)[int(oracles.encode(np.array([0, 0, 1, 1]), 3))] == 4
    assert brute_rank(s) == 3
    assert brute_srank(s).value == 4


def test_census_gf2_cubics():
    rep = census(GF2, 3, 2)
    assert rep.total_symmetric == 16
    assert rep.expressible_nonzero == 7
    assert rep.not_expressible == 8


def test_census_gf3_cubics_against_oracles():
    rep = census(GF3, 3, 2)
    assert rep.total_symmetric == 81 and rep.expressible_nonzero == 80
    rank = oracles.rank_table_full(2, 3, 3)
    srank = oracles.srank_table(2, 3, 3)
    expected = Counter()
    for code in range(81):
        coords = oracles.sym_coords_from_code(code, 2, 3, 3)
        full = oracles.sym_to_full(coords, 2, 3).reshape(-1)
        expected[(int(rank[oracles.encode(full, 3)]), int(srank[code]))] += 1
    assert rep.histogram == dict(expected)
    assert rep.histogram == {(0, 0): 1, (1, 1): 8, (2, 2): 24, (3, 3): 32, (3, 4): 16}


def test_census_gf2_matrices_has_srank_three():
    rep = census(GF2, 2, 2)
    assert rep.total_symmetric == 8
    assert rep.histogram[(2, 3)] == 1


def test_census_ternary_cubics_srank_marginal():
    rep = census(GF3, 3, 3)
    marginal = Counter()
    for (_, s), c in rep.histogram.items():
        marginal[s] += c
    assert dict(marginal) == dict(Counter(oracles.srank_table(3, 3, 3).tolist()))
    json.dumps(rep.to_json())


def test_orbit_labels_are_gl_invariant():
    space = SymmetricSpace(GF3, 3, 3)
    labels = space.orbit_labels()
    assert len(np.unique(labels)) == 26
    rng = np.random.default_rng(5)
    for _ in range(50):
        while True:
            g = rng.integers(0, 3, (3, 3))
            if round(np.linalg.det(g)) % 3:
                break
        i = int(rng.integers(space.size))
        coords = space.coords(i)
        moved = (coords @ space._action(g).T) % 3
        assert labels[space.index(moved)] == labels[i]


def test_budget_and_field_errors():
    with pytest.raises(BudgetExceeded):
        rank_search(w_tensor(GF5), budget=1)
    with pytest.raises(BudgetExceeded):
        census(GF3, 3, 3, budget=100)
    with pytest.raises(UnsupportedField):
        brute_rank(Tensor(np.zeros((2, 2)), REAL))


def test_known_upper_bound_must_reconstruct():
    wrong = Decomposition([sym_term(1, [1, 0], GF3)], GF3, 3, 2)
    with pytest.raises(InputError):
        rank_search(w_tensor(GF3), known=wrong)


def test_find_all_counts_minimal_decompositions():
    # e1^3 + e2^3 over GF(3) has one minimal decomposition; the W tensor has several.
    diag = sym_power([1, 0], 3, GF3) + sym_power([0, 1], 3, GF3)
    assert len(rank_search(diag, find_all=True).decompositions) == 1
    assert len(rank_search(w_tensor(GF3), find_all=True).decompositions) > 1


def test_sweep_precondition_gate():
    rep = theorem_sweep("maintheo", GF2, 3, 2)
    assert not rep.precondition_met and rep.examined == 0
    assert "|F| >= 3" in rep.precondition_note
    with pytest.raises(InputError):
        theorem_sweep("nonsense", GF3, 3, 2)


def test_sweep_rank2eq_sampled():
    rep = theorem_sweep("rank2eq", GF3, 3, 3, sample_budget=10_000, seed=0)
    assert rep.mode == "sampled" and rep.seed == 0 and rep.examined == 10_000
    assert rep.violations == [] and rep.chain_violations == 0
    assert rep.ok
    json.dumps(rep.to_json())


def test_sweep_gf5_binary_cubics_clean():
    for theorem in ("maintheo", "case32", "rank3symten", "eqcase"):
        rep = theorem_sweep(theorem, GF5, 3, 2)
        assert rep.ok, theorem
