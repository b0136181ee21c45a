"""Exact nonnegative factorizations of cyclic-polytope slack matrices.

A factorization of the slack matrix M is a pair of nonnegative families
alpha_i (one vector per vertex) and beta_S (one per facet) of a common
length r, the rank, with <alpha_i, beta_S> = M(i, S) exactly.

Three constructions live here:

- factorize_2d: for the degree-2 polytope the recursive lifted description
  has O(log n) inequalities; its slack vectors and per-facet dual
  multipliers (lifting.factorization_from_ef) give rank
  <= 2*floor(log2(n-1)) + 2.
- factorize_even (d = 2q): every facet splits into q two-element facets of
  the degree-2 polytope on the same interval, so M is an entrywise product
  of q column-rearranged copies of the degree-2 slack matrix, and
  factorizations multiply through entrywise products: rank r2**q.
- factorize_odd (d = 2q + 1): every facet keeps an interval endpoint;
  removing it leaves a facet one degree down on one fewer point. Two
  suitably row-scaled copies of the even construction, concatenated on
  disjoint coordinates, cover the two endpoint blocks: rank 2 * r_even.

Ranks here are the lengths of the constructed vectors, i.e. what the
construction guarantees, not the (unknown) minimal nonnegative rank.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm

from .errors import DomainError, InternalError
from .geometry import (
    CyclicPolytope,
    GaleSet,
    Interval,
    SlackMatrix,
    enumerate_facets,
    gale_pair_partition,
    is_gale,
    slack_matrix,
)
from .rational import format_rational, parse_rational


def _floor_log2(x: int) -> int:
    return x.bit_length() - 1


def size_bound_2d(n: int) -> int:
    """Inequality count the degree-2 lifted description is guaranteed to meet."""
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    return 2 * _floor_log2(n - 1) + 2


def rank_bound(n: int, d: int) -> int:
    """Guaranteed rank of factorize(n, d): 2 * (2*floor(log2(n-1)) + 2)**(d//2)."""
    if d < 2 or n <= d:
        raise DomainError(f"need n > d >= 2, got n={n}, d={d}")
    return 2 * size_bound_2d(n) ** (d // 2)


def _size_2d(n: int) -> int:
    # inequality count of the recursive degree-2 lift: halving costs 2
    if n <= 6:
        return n
    return _size_2d((n + 1) // 2) + 2


def construction_rank(n: int, d: int) -> int:
    """Exact rank the recursive construction produces for (n, d), without
    building it; factorize(n, d, allow_trivial=False).rank equals this."""
    if d < 2 or n <= d:
        raise DomainError(f"need n > d >= 2, got n={n}, d={d}")
    if d == 2:
        return _size_2d(n)
    if d % 2 == 0:
        return _size_2d(n) ** (d // 2)
    return 2 * _size_2d(n - 1) ** (d // 2)


def even_rank_bound(n: int, d: int) -> int:
    """For even d the factor 2 is not needed: (2*floor(log2(n-1)) + 2)**(d//2)."""
    if d % 2:
        raise DomainError(f"even dimension required, got d={d}")
    if d < 2 or n <= d:
        raise DomainError(f"need n > d >= 2, got n={n}, d={d}")
    return size_bound_2d(n) ** (d // 2)


@dataclass(frozen=True)
class NonnegFactorization:
    """alpha: one vector per row (vertex, interval order); beta: one per
    column (facet, canonical order); all entries nonnegative rationals."""

    rank: int
    alpha: tuple
    beta: tuple
    column_labels: tuple | None = None
    target: CyclicPolytope | None = None

    @property
    def n_rows(self) -> int:
        return len(self.alpha)

    @property
    def n_cols(self) -> int:
        return len(self.beta)

    def entry(self, row_pos: int, col_pos: int):
        a, b = self.alpha[row_pos], self.beta[col_pos]
        return sum(x * y for x, y in zip(a, b))

    def to_json_dict(self) -> dict:
        target = None
        if self.target is not None:
            target = {
                "d": self.target.d,
                "t1": self.target.interval.t1,
                "t2": self.target.interval.t2,
            }
        return {
            "target": target,
            "rank": self.rank,
            "alpha": [[format_rational(x) for x in vec] for vec in self.alpha],
            "beta": [[format_rational(x) for x in vec] for vec in self.beta],
            "columns": None
            if self.column_labels is None
            else [list(S.members) for S in self.column_labels],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "NonnegFactorization":
        try:
            rank = int(data["rank"])
            alpha = tuple(tuple(parse_rational(x) for x in vec) for vec in data["alpha"])
            beta = tuple(tuple(parse_rational(x) for x in vec) for vec in data["beta"])
            raw_target = data.get("target")
            raw_columns = data.get("columns")
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed factorization JSON: {exc}") from exc
        target = None
        if raw_target is not None:
            target = CyclicPolytope(
                int(raw_target["d"]),
                Interval(int(raw_target["t1"]), int(raw_target["t2"])),
            )
        columns = None
        if raw_columns is not None:
            columns = tuple(GaleSet(tuple(int(m) for m in mem)) for mem in raw_columns)
        for vec in alpha + beta:
            if len(vec) != rank:
                raise DomainError(
                    f"vector of length {len(vec)} does not match rank {rank}"
                )
        return cls(rank, alpha, beta, columns, target)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    rank: int
    bound: int | None
    first_mismatch: tuple | None = None


def _scaled_ints(vec):
    """(integer vector, denominator) with vec == ints / den, exactly."""
    den = 1
    for x in vec:
        d = x.denominator
        if d != 1:
            den = lcm(den, d)
    return [x.numerator * (den // x.denominator) for x in vec], den


def verify(M: SlackMatrix, F: NonnegFactorization) -> VerificationReport:
    """Exact check that F reproduces M with nonnegative vectors.

    The inner product comparison runs on integer-rescaled vectors, so the
    million-entry degree-2 instances verify in seconds without ever leaving
    exact arithmetic. first_mismatch is (vertex index, facet, expected,
    got) for the first differing entry, scanning rows then columns.
    """
    P = M.polytope
    if F.target is not None and F.target != P:
        raise DomainError(
            f"factorization targets d={F.target.d} on "
            f"[{F.target.interval.t1}, {F.target.interval.t2}], matrix is "
            f"d={P.d} on [{P.interval.t1}, {P.interval.t2}]"
        )
    if F.n_rows != M.n_rows or F.n_cols != M.n_cols:
        raise DomainError(
            f"factorization is {F.n_rows}x{F.n_cols}, matrix is "
            f"{M.n_rows}x{M.n_cols}"
        )
    if F.column_labels is not None and tuple(F.column_labels) != tuple(M.columns):
        raise DomainError("column labels do not match the matrix's facet order")
    bound = rank_bound(P.n, P.d)
    for vec in F.alpha + F.beta:
        if len(vec) != F.rank:
            raise DomainError(f"vector length {len(vec)} does not match rank {F.rank}")
        for x in vec:
            if x < 0:
                return VerificationReport(False, F.rank, bound, None)
    rows = [_scaled_ints(vec) for vec in F.alpha]
    cols = [_scaled_ints(vec) for vec in F.beta]
    t1 = P.interval.t1
    for ri, (ai, da) in enumerate(rows):
        m_row = M.entries[ri]
        for ci, (bj, db) in enumerate(cols):
            s = 0
            for a, b in zip(ai, bj):
                if a:
                    s += a * b
            if s != m_row[ci] * da * db:
                label = M.columns[ci]
                got = Fraction(s, da * db)
                return VerificationReport(
                    False, F.rank, bound, (t1 + ri, label, m_row[ci], got)
                )
    return VerificationReport(True, F.rank, bound, None)


def hadamard_combine(
    fa: NonnegFactorization, fb: NonnegFactorization
) -> NonnegFactorization:
    """Factorization of the entrywise product from factorizations of the
    factors, via per-row and per-column tensor products; rank multiplies."""
    if fa.n_rows != fb.n_rows:
        raise DomainError(f"row counts differ: {fa.n_rows} vs {fb.n_rows}")
    if fa.n_cols != fb.n_cols:
        raise DomainError(f"column counts differ: {fa.n_cols} vs {fb.n_cols}")
    labels = fa.column_labels
    if labels is not None and fb.column_labels is not None:
        if tuple(labels) != tuple(fb.column_labels):
            raise DomainError("column labels disagree")
    elif labels is None:
        labels = fb.column_labels
    alpha = tuple(
        tuple(x * y for x in va for y in vb) for va, vb in zip(fa.alpha, fb.alpha)
    )
    beta = tuple(
        tuple(x * y for x in va for y in vb) for va, vb in zip(fa.beta, fb.beta)
    )
    return NonnegFactorization(fa.rank * fb.rank, alpha, beta, labels, None)


def column_select(
    fa: NonnegFactorization, mapping, labels=None
) -> NonnegFactorization:
    """Reuse a factorization for a matrix built by duplicating, dropping or
    reordering columns: beta vectors are shared by reference, never copied."""
    mapping = tuple(mapping)
    for k in mapping:
        if not 0 <= k < fa.n_cols:
            raise DomainError(f"column index {k} out of range 0..{fa.n_cols - 1}")
    if labels is None and fa.column_labels is not None:
        labels = tuple(fa.column_labels[k] for k in mapping)
    elif labels is not None:
        labels = tuple(labels)
        if len(labels) != len(mapping):
            raise DomainError("labels and mapping have different lengths")
    beta = tuple(fa.beta[k] for k in mapping)
    return NonnegFactorization(fa.rank, fa.alpha, beta, labels, None)


def trivial_factorization(M: SlackMatrix) -> NonnegFactorization:
    """Rank min(rows, columns), from unit vectors against rows or columns."""
    n, m = M.n_rows, M.n_cols
    if m <= n:
        alpha = tuple(tuple(row) for row in M.entries)
        beta = tuple(
            tuple(1 if k == j else 0 for k in range(m)) for j in range(m)
        )
        rank = m
    else:
        alpha = tuple(
            tuple(1 if k == i else 0 for k in range(n)) for i in range(n)
        )
        beta = tuple(
            tuple(M.entries[i][j] for i in range(n)) for j in range(m)
        )
        rank = n
    return NonnegFactorization(rank, alpha, beta, M.columns, M.polytope)


def factorize_2d(n: int) -> NonnegFactorization:
    """Degree-2 factorization with rank <= min(n, 2*floor(log2(n-1)) + 2).

    Up to n = 6 the facet description is already at the bound, so the
    trivial factorization is returned. Beyond that the recursive lifted
    description is built and its slack vectors and exact per-facet dual
    multipliers are extracted (lifting.factorization_from_ef).
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    P = CyclicPolytope.standard(2, n)
    if n <= 6:
        return trivial_factorization(slack_matrix(P))
    from .lifting import build_ef_2d, factorization_from_ef

    return factorization_from_ef(P, build_ef_2d(n))


def factorize_even(n: int, q: int) -> NonnegFactorization:
    """Dimension 2q via entrywise products of the degree-2 factorization.

    Each facet's pair partition tells which degree-2 column to use in each
    of the q factors; the factors are column_select views of one shared
    degree-2 factorization, folded with hadamard_combine.
    """
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    P = CyclicPolytope.standard(2 * q, n)
    f2 = factorize_2d(n)
    facets = enumerate_facets(P)
    col_of = {S: k for k, S in enumerate(f2.column_labels)}
    selections: list[list[int]] = [[] for _ in range(q)]
    for S in facets:
        pairs = gale_pair_partition(S, P)
        for r, pair in enumerate(pairs):
            selections[r].append(col_of[pair])
    out = column_select(f2, selections[0], labels=facets)
    for r in range(1, q):
        out = hadamard_combine(out, column_select(f2, selections[r], labels=facets))
    return replace(out, target=P)


def factorize_odd(n: int, q: int) -> NonnegFactorization:
    """Dimension 2q + 1 from two scaled copies of the even construction.

    A facet either contains 1 with the rest a facet on [2, n], or contains
    n with the rest a facet on [1, n-1] (sets qualifying for both go to the
    first block). Block-1 entries equal (i - 1) times the dimension-(2q)
    slack on [2, n], block-2 entries (n - i) times the slack on [1, n-1];
    translating [2, n] down by one lets a single factorization on [1, n-1]
    serve both blocks. Concatenation on disjoint coordinates adds ranks.
    """
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    d = 2 * q + 1
    P = CyclicPolytope.standard(d, n)
    fe = factorize_even(n - 1, q)
    r = fe.rank
    p_left = CyclicPolytope(2 * q, Interval(2, n))
    p_right = CyclicPolytope(2 * q, Interval(1, n - 1))
    col_of = {S: k for k, S in enumerate(fe.column_labels)}
    zero = (0,) * r
    alphas = []
    for i in range(1, n + 1):
        left = zero if i == 1 else tuple((i - 1) * a for a in fe.alpha[i - 2])
        right = zero if i == n else tuple((n - i) * a for a in fe.alpha[i - 1])
        alphas.append(left + right)
    facets = enumerate_facets(P)
    betas = []
    for S in facets:
        if 1 in S and is_gale(S.without(1), p_left):
            betas.append(fe.beta[col_of[S.without(1).shifted(-1)]] + zero)
        elif n in S and is_gale(S.without(n), p_right):
            betas.append(zero + fe.beta[col_of[S.without(n)]])
        else:
            raise InternalError(f"facet {S.members} fits neither endpoint block")
    return NonnegFactorization(2 * r, tuple(alphas), tuple(betas), facets, P)


def factorize(n: int, d: int, allow_trivial: bool = True) -> NonnegFactorization:
    """Factorization of the slack matrix of P^d_[1,n], rank <= rank_bound(n, d).

    Dispatches on the parity of d. The constructed rank can exceed n at
    desk scale; with allow_trivial (the default) the trivial rank-n
    factorization is returned whenever it is strictly smaller. Pass
    allow_trivial=False to get the recursive construction unconditionally.
    """
    if d < 2:
        raise DomainError(f"dimension must be at least 2, got {d}")
    if n <= d:
        raise DomainError(f"need n > d, got n={n}, d={d}")
    if d == 2:
        out = factorize_2d(n)
    elif d % 2 == 0:
        out = factorize_even(n, d // 2)
    else:
        out = factorize_odd(n, (d - 1) // 2)
    if allow_trivial and n < out.rank:
        out = trivial_factorization(slack_matrix(CyclicPolytope.standard(d, n)))
    return out
