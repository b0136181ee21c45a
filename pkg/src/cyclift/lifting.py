"""Lifted (extended) descriptions of cyclic polytopes, exactly.

An extended formulation of P is a polyhedron Q in more variables together
with an affine projection with projection(Q) = P; the size of Q counts
inequalities only, equations are free. Degree-2 cyclic polytopes on n
points admit a recursive lifted description of size <= 2*floor(log2(n-1))
+ 2 (build_ef_2d): halve the point set by folding the interval onto itself,
which costs two inequalities per halving.

The two classical translations between lifted descriptions and
nonnegative slack-matrix factorizations are here as well:
ef_from_factorization (rank-r factorization -> size-r lift) and
factorization_from_ef (size-f lift -> rank-f factorization, with the
beta vectors obtained as exact LP duals of the per-facet maximization).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError
from .exact_lp import OPTIMAL, UNBOUNDED, ReoptimizingSolver
from .factorization import NonnegFactorization, verify
from .geometry import (
    AffineMap,
    CyclicPolytope,
    Interval,
    enumerate_facets,
    facet_inequality,
    format_linear,
    slack_matrix,
    vertex,
)
from .rational import format_rational


@dataclass(frozen=True)
class Polyhedron:
    """{z : <c,z> = rhs for equations, <c,z> <= rhs for inequalities}.

    Constraints are (coefficient tuple, rhs) pairs over `variables`; size
    counts inequalities only.
    """

    variables: tuple
    equations: tuple
    inequalities: tuple

    @property
    def size(self) -> int:
        return len(self.inequalities)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def equation_residuals(self, point):
        return tuple(
            rhs - sum(c * x for c, x in zip(coeffs, point) if c)
            for coeffs, rhs in self.equations
        )

    def inequality_slacks(self, point):
        return tuple(
            rhs - sum(c * x for c, x in zip(coeffs, point) if c)
            for coeffs, rhs in self.inequalities
        )

    def contains(self, point) -> bool:
        if len(point) != self.nvars:
            raise DomainError(
                f"expected a point of length {self.nvars}, got {len(point)}"
            )
        return all(r == 0 for r in self.equation_residuals(point)) and all(
            s >= 0 for s in self.inequality_slacks(point)
        )


@dataclass(frozen=True)
class ExtendedFormulation:
    """A lifted polyhedron, the projection back down, and one preimage
    (witness) per vertex of the target polytope."""

    lifted: Polyhedron
    projection: AffineMap
    witnesses: dict
    target: CyclicPolytope

    @property
    def size(self) -> int:
        return self.lifted.size


def lift_vertex_2d(ef: ExtendedFormulation, i: int) -> tuple:
    """The stored lifted point above vertex i."""
    if i not in ef.witnesses:
        raise DomainError(f"no vertex {i} in [{ef.target.interval.t1}, {ef.target.interval.t2}]")
    return ef.witnesses[i]


def _facet_system(t1: int, t2: int):
    P = CyclicPolytope(2, Interval(t1, t2))
    ineqs = [(f.a, f.b) for f in map(lambda S: facet_inequality(P, S), enumerate_facets(P))]
    wits = {t: (t, t * t) for t in range(t1, t2 + 1)}
    return ["x1", "x2"], [], ineqs, wits


def _build(t1: int, t2: int, level: int):
    """System for P^2_[t1,t2] over variables (x1, x2, aux...).

    Folding works on the centered copy of the interval; the formulas below
    are those folds with the centering substitution x1 -> x1 - c,
    x2 -> x2 - 2c*x1 + c^2 already applied, so every level speaks the
    coordinates of its own interval and no final change of variables is
    needed. Each level appends its two new inequalities ahead of the
    sub-system's.
    """
    n = t2 - t1 + 1
    if n <= 6:
        return _facet_system(t1, t2)
    if n % 2:
        # odd count: fold [-m, m] at 0; the half interval keeps the second
        # coordinate, so the sub-system's x2 picks up the centering terms
        m = (n - 1) // 2
        c = t1 + m
        sub_vars, sub_eqs, sub_ineqs, sub_wits = _build(0, m, level + 1)
        z = f"z{level}_1"
        variables = ["x1", "x2", z] + sub_vars[2:]
        nv = len(variables)
        pad = (0,) * (nv - 3)

        def conv(coeffs, rhs):
            a1, a2 = coeffs[0], coeffs[1]
            return (
                (-2 * c * a2, a2, a1) + tuple(coeffs[2:]),
                rhs - a2 * c * c,
            )

        eqs = [conv(cf, r) for cf, r in sub_eqs]
        ineqs = [
            ((-1, 0, -1) + pad, -c),  # -(x1 - c) <= z
            ((1, 0, -1) + pad, c),  # x1 - c <= z
        ]
        ineqs += [conv(cf, r) for cf, r in sub_ineqs]
        wits = {}
        for t in range(t1, t2 + 1):
            u = abs(t - c)
            wits[t] = (t, t * t, u) + tuple(sub_wits[u][2:])
        return variables, eqs, ineqs, wits

    # even count: fold [-k+1, k] by the reflection t -> 1 - t, which on the
    # curve is a shear; (z1, z2) ranges over the half polytope and the pair
    # (x1 + x2, x2 - x1) is pinned to it by one equation and two cuts
    k = n // 2
    c = t1 + k - 1
    sub_vars, sub_eqs, sub_ineqs, sub_wits = _build(1, k, level + 1)
    z1, z2 = f"z{level}_1", f"z{level}_2"
    variables = ["x1", "x2", z1, z2] + sub_vars[2:]
    nv = len(variables)
    pad = (0,) * (nv - 4)

    def conv(coeffs, rhs):
        return (0, 0) + tuple(coeffs), rhs

    eqs = [((2 * c + 1, -1, -1, 1) + pad, c * c + c)]  # z2 - z1 = (x2 - x1) centered
    eqs += [conv(cf, r) for cf, r in sub_eqs]
    ineqs = [
        ((2 * c - 1, -1, -3, 1) + pad, c * c - c - 2),  # 2 - 3 z1 + z2 <= x1 + x2 ctr
        ((1 - 2 * c, 1, -1, -1) + pad, c - c * c),  # x1 + x2 ctr <= z1 + z2
    ]
    ineqs += [conv(cf, r) for cf, r in sub_ineqs]
    wits = {}
    for t in range(t1, t2 + 1):
        u = t - c
        s = u if u >= 1 else 1 - u
        wits[t] = (t, t * t) + tuple(sub_wits[s])
    return variables, eqs, ineqs, wits


def build_ef_2d(n: int) -> ExtendedFormulation:
    """Lifted description of P^2_[1,n] with at most 2*floor(log2(n-1)) + 2
    inequalities; n <= 6 keeps the plain n-facet description."""
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    variables, eqs, ineqs, wits = _build(1, n, 1)
    nv = len(variables)
    lifted = Polyhedron(tuple(variables), tuple(eqs), tuple(ineqs))
    projection = AffineMap(
        (
            tuple(1 if j == 0 else 0 for j in range(nv)),
            tuple(1 if j == 1 else 0 for j in range(nv)),
        ),
        (0, 0),
    )
    return ExtendedFormulation(lifted, projection, wits, CyclicPolytope.standard(2, n))


def ef_from_factorization(
    P: CyclicPolytope, F: NonnegFactorization
) -> ExtendedFormulation:
    """Size-rank(F) lift of P: variables (x, y), inequalities y >= 0 only,
    and per facet the equation <a_j, x> + <beta_j, y> = b_j; above vertex i
    the witness is (v_i, alpha_i)."""
    report = verify(slack_matrix(P), F)
    if not report.ok:
        raise DomainError("factorization does not verify against the slack matrix")
    d, r = P.d, F.rank
    variables = tuple(f"x{k}" for k in range(1, d + 1)) + tuple(
        f"y{t}" for t in range(1, r + 1)
    )
    zeros_x = (0,) * d
    ineqs = tuple(
        (zeros_x + tuple(-1 if k == t else 0 for k in range(r)), 0) for t in range(r)
    )
    eqs = []
    for j, S in enumerate(enumerate_facets(P)):
        f = facet_inequality(P, S)
        eqs.append((f.a + tuple(F.beta[j]), f.b))
    wits = {i: vertex(P, i) + tuple(F.alpha[i - P.interval.t1]) for i in P.interval.indices()}
    projection = AffineMap(
        tuple(
            tuple(1 if j == k else 0 for j in range(d + r)) for k in range(d)
        ),
        (0,) * d,
    )
    return ExtendedFormulation(Polyhedron(variables, tuple(eqs), ineqs), projection, wits, P)


def independent_equations(equations) -> tuple:
    """The first maximal independent subset, original rows untouched.

    Dependent rows must be implied exactly (a feasible point exists for
    every system handled here, so a contradictory dependent row means the
    caller's data is corrupt, not merely redundant).
    """
    basis = []  # (pivot column, reduced row, reduced rhs)
    kept = []
    for coeffs, rhs in equations:
        row = list(coeffs)
        r = rhs
        for pc, brow, brhs in basis:
            f = row[pc]
            if f:
                row = [x - f * y for x, y in zip(row, brow)]
                r = r - f * brhs
        pivot = next((j for j, x in enumerate(row) if x), None)
        if pivot is None:
            if r != 0:
                raise InternalError("dependent equation with nonzero residual")
            continue
        inv = Fraction(1) / row[pivot]
        basis.append((pivot, [x * inv for x in row], r * inv))
        kept.append((coeffs, rhs))
    return tuple(kept)


def lift_objective(ef: ExtendedFormulation, objective):
    """Pull an objective on the target's coordinates back through the
    projection: returns (coefficients over lifted variables, constant)."""
    rows = ef.projection.linear
    if len(objective) != len(rows):
        raise DomainError(
            f"objective has {len(objective)} coordinates, projection has {len(rows)}"
        )
    nv = ef.lifted.nvars
    coeffs = [0] * nv
    for ck, row in zip(objective, rows):
        if ck:
            for v in range(nv):
                if row[v]:
                    coeffs[v] += ck * row[v]
    const = sum(c * o for c, o in zip(objective, ef.projection.offset))
    return tuple(coeffs), const


class EfOptimizer:
    """Exact linear optimization over a lifted polyhedron, warm-started.

    One simplex tableau serves every objective; the first witness seeds a
    feasible basis so no phase-1 work is ever repeated. Objectives are
    given in the coordinates of the target polytope.
    """

    def __init__(self, ef: ExtendedFormulation):
        self.ef = ef
        if not ef.witnesses:
            raise DomainError("lifted system has no witnesses to start from")
        start = ef.witnesses[min(ef.witnesses)]
        self._solver = ReoptimizingSolver(
            ef.lifted.nvars,
            independent_equations(ef.lifted.equations),
            ef.lifted.inequalities,
            feasible_point=start,
        )

    def _run(self, objective, sense):
        coeffs, const = lift_objective(self.ef, objective)
        res = (
            self._solver.maximize(coeffs)
            if sense == "max"
            else self._solver.minimize(coeffs)
        )
        if res.status != OPTIMAL:
            raise DomainError(f"lifted optimization is {res.status}")
        return res, const

    def maximize(self, objective):
        """(optimal value, a lifted optimizer point)."""
        res, const = self._run(objective, "max")
        return res.value + const, res.primal

    def minimize(self, objective):
        res, const = self._run(objective, "min")
        return res.value + const, res.primal


def factorization_from_ef(
    P: CyclicPolytope, ef: ExtendedFormulation
) -> NonnegFactorization:
    """Rank-size(ef) factorization of P's slack matrix out of a lift of P.

    alpha_i is the witness's slack vector in the lifted inequalities. Each
    facet's inequality is maximized exactly over the lifted polyhedron; the
    optimum must come out at b_j (tightness: the lift really projects onto
    P), and the inequality duals of that solve are beta_j. On the lifted
    affine hull b_j - <a_j, projection(z)> = <beta_j, slacks(z)>, so pairing
    duals with witness slacks reproduces every slack-matrix entry; the
    result is re-verified entry by entry before it is returned.
    """
    if ef.target != P:
        raise DomainError("lift targets a different polytope")
    if ef.projection.output_dim != P.d:
        raise DomainError(
            f"projection lands in dimension {ef.projection.output_dim}, need {P.d}"
        )
    lifted = ef.lifted
    for i in P.interval.indices():
        if i not in ef.witnesses:
            raise DomainError(f"no witness for vertex {i}")
        w = ef.witnesses[i]
        if len(w) != lifted.nvars or not lifted.contains(w):
            raise DomainError(f"witness for vertex {i} is not in the lifted polyhedron")
        if ef.projection(w) != vertex(P, i):
            raise DomainError(f"witness for vertex {i} does not project to it")
    alphas = tuple(
        lifted.inequality_slacks(ef.witnesses[i]) for i in P.interval.indices()
    )
    optimizer = EfOptimizer(ef)
    facets = enumerate_facets(P)
    betas = []
    for S in facets:
        f = facet_inequality(P, S)
        coeffs, const = lift_objective(ef, f.a)
        res = optimizer._solver.maximize(coeffs)
        if res.status == UNBOUNDED:
            raise DomainError(
                f"lifted system is unbounded along the facet {S.members} normal"
            )
        if res.status != OPTIMAL:
            raise InternalError(f"facet LP ended {res.status} with a feasible start")
        if res.value + const != f.b:
            raise DomainError(
                f"lift does not project onto the polytope: facet {S.members} "
                f"maximum is {res.value + const}, boundary is at {f.b}"
            )
        betas.append(tuple(res.dual_ineq))
    out = NonnegFactorization(lifted.size, alphas, tuple(betas), facets, P)
    report = verify(slack_matrix(P), out)
    if not report.ok:
        raise InternalError(
            f"extracted factorization failed verification at {report.first_mismatch}"
        )
    return out


def ef_to_text(ef: ExtendedFormulation) -> str:
    """Deterministic plain-text listing of a lifted description."""
    lifted = ef.lifted
    names = lifted.variables
    P = ef.target
    lines = [
        f"target: degree {P.d} cyclic polytope on [{P.interval.t1}, {P.interval.t2}]"
        f" ({P.n} vertices)",
        f"size: {lifted.size} inequalities, {len(lifted.equations)} equations,"
        f" {lifted.nvars} variables",
        "variables: " + " ".join(names),
    ]
    if lifted.equations:
        lines.append("subject to (equations):")
        lines += [
            "  " + format_linear(coeffs, names, rhs, "=")
            for coeffs, rhs in lifted.equations
        ]
    lines.append("subject to (inequalities):")
    lines += [
        "  " + format_linear(coeffs, names, rhs, "<=")
        for coeffs, rhs in lifted.inequalities
    ]
    lines.append("projection:")
    for k, (row, off) in enumerate(zip(ef.projection.linear, ef.projection.offset), 1):
        terms = format_linear(row, names, off, "+")
        lhs, _, tail = terms.rpartition(" + ")
        expr = lhs if tail == "0" and lhs else terms
        lines.append(f"  p{k} = {expr}")
    return "\n".join(lines) + "\n"


def ef_to_json_dict(ef: ExtendedFormulation) -> dict:
    def side(rows):
        return [
            {"coeffs": [format_rational(c) for c in coeffs], "rhs": format_rational(r)}
            for coeffs, r in rows
        ]

    return {
        "target": {
            "d": ef.target.d,
            "t1": ef.target.interval.t1,
            "t2": ef.target.interval.t2,
        },
        "variables": list(ef.lifted.variables),
        "equations": side(ef.lifted.equations),
        "inequalities": side(ef.lifted.inequalities),
        "projection": {
            "linear": [[format_rational(c) for c in row] for row in ef.projection.linear],
            "offset": [format_rational(c) for c in ef.projection.offset],
        },
        "witnesses": {
            str(i): [format_rational(x) for x in w] for i, w in sorted(ef.witnesses.items())
        },
    }
