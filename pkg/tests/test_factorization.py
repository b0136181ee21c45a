import random
from fractions import Fraction

import pytest

from cyclift.errors import DomainError
from cyclift.factorization import (
    NonnegFactorization,
    column_select,
    construction_rank,
    even_rank_bound,
    factorize,
    factorize_2d,
    factorize_even,
    factorize_odd,
    hadamard_combine,
    rank_bound,
    size_bound_2d,
    trivial_factorization,
    verify,
)
from cyclift.geometry import (
    CyclicPolytope,
    GaleSet,
    enumerate_facets,
    gale_pair_partition,
    slack_matrix,
)

from oracles import slack_product


def test_bound_formulas():
    assert size_bound_2d(9) == 8
    assert size_bound_2d(1025) == 22
    assert rank_bound(1025, 2) == 44
    assert rank_bound(1025, 5) == 968
    assert rank_bound(9, 5) == 128
    assert rank_bound(8, 4) == 72
    assert even_rank_bound(8, 4) == 36
    assert even_rank_bound(17, 4) == 100
    with pytest.raises(DomainError):
        even_rank_bound(9, 3)
    with pytest.raises(DomainError):
        rank_bound(4, 4)


def test_construction_rank_matches_builds():
    cases = [(n, 2) for n in (3, 5, 7, 9, 33)]
    cases += [(8, 4), (10, 4), (9, 6), (5, 3), (9, 5), (12, 3)]
    for n, d in cases:
        assert factorize(n, d, allow_trivial=False).rank == construction_rank(n, d)


# ------------------------------------------------------------------ verify


def test_verify_trivial_factorization():
    M = slack_matrix(CyclicPolytope.standard(2, 5))
    rep = verify(M, trivial_factorization(M))
    assert rep.ok and rep.rank == 5 and rep.first_mismatch is None


def test_verify_reports_first_mismatch():
    M = slack_matrix(CyclicPolytope.standard(2, 5))
    F = trivial_factorization(M)
    beta = list(F.beta)
    beta[1] = tuple(x + 1 for x in beta[1])  # column {1, 5}
    rep = verify(M, NonnegFactorization(F.rank, F.alpha, tuple(beta), F.column_labels, F.target))
    assert not rep.ok
    i, S, expected, got = rep.first_mismatch
    assert i == 1 and S.members == (1, 5)
    # perturbed column adds the full row sum of vertex 1's slacks: 2 + 6 + 12
    assert expected == 0 and got == 20


def test_verify_rejects_negative_entries():
    M = slack_matrix(CyclicPolytope.standard(2, 5))
    F = trivial_factorization(M)
    alpha = list(F.alpha)
    alpha[0] = (-1,) + alpha[0][1:]
    rep = verify(M, NonnegFactorization(F.rank, tuple(alpha), F.beta, F.column_labels, F.target))
    assert not rep.ok and rep.first_mismatch is None


def test_verify_dimension_mismatch_is_domain_error():
    M5 = slack_matrix(CyclicPolytope.standard(2, 5))
    M6 = slack_matrix(CyclicPolytope.standard(2, 6))
    F = trivial_factorization(M6)
    with pytest.raises(DomainError):
        verify(M5, F)
    # same shape but wrong recorded target
    F5 = trivial_factorization(M5)
    relabeled = NonnegFactorization(
        F5.rank, F5.alpha, F5.beta, F5.column_labels, CyclicPolytope.standard(2, 6)
    )
    with pytest.raises(DomainError):
        verify(M5, relabeled)


def test_verify_handles_fractions():
    M = slack_matrix(CyclicPolytope.standard(2, 4))
    F = trivial_factorization(M)
    alpha = tuple(tuple(Fraction(x, 3) for x in vec) for vec in F.alpha)
    beta = tuple(tuple(3 * x for x in vec) for vec in F.beta)
    rep = verify(M, NonnegFactorization(F.rank, alpha, beta, F.column_labels, F.target))
    assert rep.ok


# ------------------------------------------------------- hadamard_combine


def _random_product_factorization(rng, rows, cols, rank, labels=None):
    A = [[rng.randint(0, 9) for _ in range(rank)] for _ in range(rows)]
    B = [[rng.randint(0, 9) for _ in range(rank)] for _ in range(cols)]
    F = NonnegFactorization(
        rank, tuple(tuple(r) for r in A), tuple(tuple(c) for c in B), labels
    )
    entries = [[F.entry(i, j) for j in range(cols)] for i in range(rows)]
    return F, entries


def test_hadamard_scalars():
    a = NonnegFactorization(1, ((2,),), ((1,),))
    b = NonnegFactorization(1, ((5,),), ((1,),))
    h = hadamard_combine(a, b)
    assert h.rank == 1 and h.entry(0, 0) == 10


def test_hadamard_rank_product():
    rng = random.Random(5)
    fa, _ = _random_product_factorization(rng, 4, 5, 3)
    fb, _ = _random_product_factorization(rng, 4, 5, 4)
    assert hadamard_combine(fa, fb).rank == 12


def test_hadamard_random_matrices():
    rng = random.Random(42)
    for _ in range(10):
        fa, ma = _random_product_factorization(rng, 6, 7, 2)
        fb, mb = _random_product_factorization(rng, 6, 7, 3)
        h = hadamard_combine(fa, fb)
        assert h.rank == 6
        for i in range(6):
            for j in range(7):
                assert h.entry(i, j) == ma[i][j] * mb[i][j]
        assert all(x >= 0 for vec in h.alpha + h.beta for x in vec)


def test_hadamard_shape_checks():
    rng = random.Random(1)
    fa, _ = _random_product_factorization(rng, 4, 5, 2)
    fb, _ = _random_product_factorization(rng, 5, 5, 2)
    with pytest.raises(DomainError):
        hadamard_combine(fa, fb)
    fc, _ = _random_product_factorization(rng, 4, 6, 2)
    with pytest.raises(DomainError):
        hadamard_combine(fa, fc)


# ---------------------------------------------------------- column_select


def test_column_select_identity_and_duplication():
    M = slack_matrix(CyclicPolytope.standard(2, 5))
    F = trivial_factorization(M)
    same = column_select(F, range(5))
    assert same.beta == F.beta and same.column_labels == F.column_labels
    dup = column_select(F, (0, 0))
    assert dup.n_cols == 2
    assert dup.beta[0] is dup.beta[1]
    for i in range(5):
        assert dup.entry(i, 0) == dup.entry(i, 1) == M.entries[i][0]
    with pytest.raises(DomainError):
        column_select(F, (5,))


def test_column_select_realizes_pair_matrices():
    # d=4, n=6: the matrix whose (i, j) entry is the slack of the j-th
    # facet's r-th pair, built directly, must match the selected columns
    P = CyclicPolytope.standard(4, 6)
    P2 = CyclicPolytope.standard(2, 6)
    F2 = factorize_2d(6)
    facets = enumerate_facets(P)
    col_of = {S: k for k, S in enumerate(F2.column_labels)}
    for r in range(2):
        pairs = [gale_pair_partition(S, P)[r] for S in facets]
        sel = column_select(F2, [col_of[g] for g in pairs])
        for ri, i in enumerate(P2.interval.indices()):
            for ci, g in enumerate(pairs):
                assert sel.entry(ri, ci) == slack_product(i, g.members)


# ------------------------------------------------------------ constructions


def test_factorize_2d_small_ranks():
    for n, rank in ((3, 3), (5, 5), (6, 6), (7, 6), (9, 7), (17, 9), (33, 11)):
        F = factorize_2d(n)
        assert F.rank == rank
        assert F.rank <= min(n, size_bound_2d(n))
        assert verify(slack_matrix(CyclicPolytope.standard(2, n)), F).ok
    with pytest.raises(DomainError):
        factorize_2d(2)


def test_factorize_even_single_factor_matches_2d():
    for n in (5, 8):
        fe = factorize_even(n, 1)
        f2 = factorize_2d(n)
        assert fe.alpha == f2.alpha
        assert fe.beta == f2.beta
        assert fe.column_labels == f2.column_labels
        assert fe.target == CyclicPolytope.standard(2, n)


def test_factorize_even_d4_n8():
    F = factorize_even(8, 2)
    M = slack_matrix(CyclicPolytope.standard(4, 8))
    assert F.rank == 36 and (M.n_rows, M.n_cols) == (8, 20)
    assert verify(M, F).ok


def test_factorize_even_d6_n9():
    F = factorize_even(9, 3)
    assert F.rank == 343  # 7^3; within the even-dimension bound 8^3
    assert F.rank <= even_rank_bound(9, 6)
    assert verify(slack_matrix(CyclicPolytope.standard(6, 9)), F).ok


def test_factorize_even_preconditions():
    with pytest.raises(DomainError):
        factorize_even(4, 2)
    with pytest.raises(DomainError):
        factorize_even(8, 0)


def test_factorize_odd_d3_n5_block_structure():
    P = CyclicPolytope.standard(3, 5)
    facets = enumerate_facets(P)
    assert len(facets) == 6
    assert all(1 in S or 5 in S for S in facets)
    F = factorize_odd(5, 1)
    assert F.rank == 2 * factorize_2d(4).rank == 8
    assert verify(slack_matrix(P), F).ok


def test_factorize_odd_zero_row_blocks():
    F = factorize_odd(7, 1)
    r = F.rank // 2
    assert all(x == 0 for x in F.alpha[0][:r])  # vertex 1: left block zeroed
    assert all(x == 0 for x in F.alpha[-1][r:])  # vertex n: right block zeroed


def test_factorize_odd_d5_n9():
    F = factorize_odd(9, 2)
    assert F.rank == 72
    assert verify(slack_matrix(CyclicPolytope.standard(5, 9)), F).ok


def test_factorize_odd_preconditions():
    with pytest.raises(DomainError):
        factorize_odd(5, 2)
    with pytest.raises(DomainError):
        factorize_odd(9, 0)


def test_factorize_dispatch_and_trivial_switch():
    # constructed rank 14 loses to the 10 vertices, so the default trims
    F = factorize(10, 3)
    assert F.rank == 10
    assert verify(slack_matrix(CyclicPolytope.standard(3, 10)), F).ok
    full = factorize(10, 3, allow_trivial=False)
    assert full.rank == construction_rank(10, 3) == 14
    assert verify(slack_matrix(CyclicPolytope.standard(3, 10)), full).ok
    with pytest.raises(DomainError):
        factorize(5, 5)
    with pytest.raises(DomainError):
        factorize(9, 1)


def test_trivial_factorization_shape():
    M = slack_matrix(CyclicPolytope.standard(3, 6))  # 6 rows, 8 columns
    F = trivial_factorization(M)
    assert F.rank == 6
    assert verify(M, F).ok


# ------------------------------------------------------------------- JSON


def test_json_round_trip():
    F = factorize_2d(9)
    back = NonnegFactorization.from_json_dict(F.to_json_dict())
    assert back == F


def test_json_round_trip_without_target():
    F = NonnegFactorization(1, ((2,), (Fraction(1, 2),)), ((3,),))
    back = NonnegFactorization.from_json_dict(F.to_json_dict())
    assert back == F


def test_json_rejects_malformed():
    with pytest.raises(DomainError):
        NonnegFactorization.from_json_dict({"rank": 1})
    with pytest.raises(DomainError):
        NonnegFactorization.from_json_dict(
            {"rank": 2, "alpha": [["1"]], "beta": [["1", "2"]], "target": None}
        )
