"""Exact rational linear programming.

A dense-tableau simplex over fractions.Fraction: two phases with explicit
artificial variables, Bland's smallest-index rule throughout (so degenerate
instances terminate), and dual multipliers read from the final tableau. No
tolerances anywhere; every comparison is exact.

Conventions. A program holds equations <c, x> = rhs and inequalities
<c, x> <= rhs over free variables. For a maximization the certificate
returned with an optimal result is

    objective = E^T mu + G^T beta,   beta >= 0,
    value     = <mu, eq rhs> + <beta, ineq rhs>,

with E, G the equation and inequality rows; for a minimization the sign of
beta's contribution flips (objective = E^T mu - G^T beta and
value = <mu, eq rhs> - <beta, ineq rhs>). certify() checks exactly this,
plus primal feasibility and complementary slackness.

ReoptimizingSolver keeps the tableau alive between solves so a family of
objectives over one constraint system (the per-facet programs of the
factorization extraction) pays for phase 1 once and then reoptimizes from
the previous basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

MAX = "max"
MIN = "min"


@dataclass(frozen=True)
class LinearProgram:
    """sense is "max" or "min"; equations and inequalities are sequences of
    (coefficients, rhs) with <coefficients, x> = rhs resp. <= rhs."""

    sense: str
    objective: tuple
    equations: tuple = ()
    inequalities: tuple = ()
    variables: tuple | None = None

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    primal: tuple | None = None
    dual_ineq: tuple | None = None
    dual_eq: tuple | None = None


def _check_rows(rows, nvars, what):
    for coeffs, _ in rows:
        if len(coeffs) != nvars:
            raise DomainError(
                f"{what} row has {len(coeffs)} coefficients, expected {nvars}"
            )


class ReoptimizingSolver:
    """Simplex over a fixed constraint system, reusable across objectives.

    If `feasible_point` is given, the system is translated so that point
    becomes the origin; every inequality row then has nonnegative rhs and
    starts with its slack variable basic, which removes phase-1 work for
    all-inequality systems entirely.
    """

    def __init__(self, nvars, equations=(), inequalities=(), feasible_point=None):
        equations = [(tuple(c), r) for c, r in equations]
        inequalities = [(tuple(c), r) for c, r in inequalities]
        _check_rows(equations, nvars, "equation")
        _check_rows(inequalities, nvars, "inequality")
        self._nv = nvars
        self._me = len(equations)
        self._mi = len(inequalities)
        self._m = self._me + self._mi
        self._shift = None
        if feasible_point is not None:
            if len(feasible_point) != nvars:
                raise DomainError("feasible point has the wrong dimension")
            self._shift = tuple(Fraction(x) for x in feasible_point)

        nv, mi, m = self._nv, self._mi, self._m
        self._slack0 = 2 * nv
        self._track0 = 2 * nv + mi
        self._ncols = 2 * nv + mi + m
        self._rhs = self._ncols

        rows: list[list[Fraction]] = []
        basis: list[int] = []
        rho: list[int] = []
        needs_artificial = False
        user_rows = [(c, r, False) for c, r in equations] + [
            (c, r, True) for c, r in inequalities
        ]
        for r_idx, (coeffs, rhs, is_ineq) in enumerate(user_rows):
            rhs = Fraction(rhs)
            if self._shift is not None:
                rhs -= sum(Fraction(c) * z for c, z in zip(coeffs, self._shift))
                if is_ineq and rhs < 0:
                    raise DomainError("feasible point violates an inequality")
                if not is_ineq and rhs != 0:
                    raise DomainError("feasible point violates an equation")
            sign = -1 if rhs < 0 else 1
            rho.append(sign)
            row = [Fraction(0)] * (self._ncols + 1)
            for j, c in enumerate(coeffs):
                if c:
                    row[j] = Fraction(sign * c)          # u_j
                    row[nv + j] = Fraction(-sign * c)    # w_j = negative part
            if is_ineq:
                row[self._slack0 + (r_idx - self._me)] = Fraction(sign)
            row[self._track0 + r_idx] = Fraction(1)
            row[self._rhs] = sign * rhs
            if is_ineq and sign == 1:
                basis.append(self._slack0 + (r_idx - self._me))
            else:
                basis.append(self._track0 + r_idx)
                needs_artificial = True
            rows.append(row)

        self._rows = rows
        self._basis = basis
        self._rho = rho
        self._infeasible = False
        if needs_artificial:
            self._phase1()
        # with a feasible shift there is nothing for phase 1 to do beyond
        # pivoting equation trackers out of the basis, handled above

    # -- tableau mechanics ------------------------------------------------

    def _pivot(self, pi: int, pc: int) -> None:
        rows = self._rows
        prow = rows[pi]
        piv = prow[pc]
        if piv != 1:
            inv = 1 / piv
            rows[pi] = prow = [x * inv for x in prow]
        for i, row in enumerate(rows):
            if i == pi:
                continue
            f = row[pc]
            if f:
                rows[i] = [a - f * b for a, b in zip(row, prow)]
        self._basis[pi] = pc

    def _price(self, cost) -> list[Fraction]:
        """Reduced costs of the real (enterable) columns under `cost`."""
        n_ent = self._track0
        rc = list(cost[:n_ent])
        for row, b in zip(self._rows, self._basis):
            cb = cost[b]
            if cb:
                for j in range(n_ent):
                    v = row[j]
                    if v:
                        rc[j] -= cb * v
        return rc

    def _simplex(self, cost) -> str:
        """Bland's rule until optimal or unbounded. cost indexes all columns."""
        rows, basis = self._rows, self._basis
        rhs = self._rhs
        while True:
            rc = self._price(cost)
            pc = next((j for j, v in enumerate(rc) if v < 0), None)
            if pc is None:
                return OPTIMAL
            best = None  # (ratio, basis var, row index)
            for i, row in enumerate(rows):
                v = row[pc]
                if v > 0:
                    ratio = row[rhs] / v
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self._pivot(best[1], pc)

    def _phase1(self) -> None:
        cost = [Fraction(0)] * (self._ncols + 1)
        for j in range(self._track0, self._ncols):
            cost[j] = Fraction(1)
        status = self._simplex(cost)
        if status != OPTIMAL:
            raise InternalError("phase 1 cannot be unbounded")
        value = sum(
            row[self._rhs]
            for row, b in zip(self._rows, self._basis)
            if b >= self._track0
        )
        if value > 0:
            self._infeasible = True
            return
        # drive zero-level artificials out of the basis; rows that cannot
        # pivot are linear combinations of the others and are dropped
        i = 0
        while i < len(self._basis):
            if self._basis[i] < self._track0:
                i += 1
                continue
            row = self._rows[i]
            if row[self._rhs] != 0:
                raise InternalError("artificial basic at nonzero level after phase 1")
            pc = next((j for j in range(self._track0) if row[j]), None)
            if pc is None:
                del self._rows[i]
                del self._basis[i]
            else:
                self._pivot(i, pc)
                i += 1

    # -- public solves ----------------------------------------------------

    def maximize(self, objective) -> LPResult:
        if len(objective) != self._nv:
            raise DomainError(
                f"objective has {len(objective)} entries, expected {self._nv}"
            )
        if self._infeasible:
            return LPResult(INFEASIBLE)
        nv = self._nv
        cost = [Fraction(0)] * (self._ncols + 1)
        for j, c in enumerate(objective):
            if c:
                cost[j] = Fraction(-c)
                cost[nv + j] = Fraction(c)
        status = self._simplex(cost)
        if status == UNBOUNDED:
            return LPResult(UNBOUNDED)
        return self._extract(cost, objective)

    def minimize(self, objective) -> LPResult:
        res = self.maximize([-c for c in objective])
        if res.status != OPTIMAL:
            return res
        return LPResult(
            OPTIMAL,
            -res.value,
            res.primal,
            res.dual_ineq,
            tuple(-m for m in res.dual_eq),
        )

    def _extract(self, cost, objective) -> LPResult:
        nv, rhs = self._nv, self._rhs
        basic = [
            (row, cost[b], b) for row, b in zip(self._rows, self._basis)
        ]
        value_internal = sum(cb * row[rhs] for row, cb, _ in basic if cb)
        x = [Fraction(0)] * nv
        for row, _, b in basic:
            if b < nv:
                x[b] += row[rhs]
            elif b < 2 * nv:
                x[b - nv] -= row[rhs]
        value = -value_internal
        if self._shift is not None:
            x = [xi + zi for xi, zi in zip(x, self._shift)]
            value += sum(Fraction(c) * z for c, z in zip(objective, self._shift))
        duals = []
        weighted = [(row, cb) for row, cb, _ in basic if cb]
        for r in range(self._m):
            tcol = self._track0 + r
            y = sum(cb * row[tcol] for row, cb in weighted)
            duals.append(-self._rho[r] * y)
        return LPResult(
            OPTIMAL,
            value,
            tuple(x),
            tuple(duals[self._me :]),
            tuple(duals[: self._me]),
        )


def solve(lp: LinearProgram, feasible_point=None) -> LPResult:
    """Solve one program. Returns status 'optimal' with exact value, primal
    point and dual multipliers, or 'infeasible' / 'unbounded'."""
    if lp.sense not in (MAX, MIN):
        raise DomainError(f"unknown sense {lp.sense!r}")
    solver = ReoptimizingSolver(
        lp.nvars, lp.equations, lp.inequalities, feasible_point=feasible_point
    )
    if lp.sense == MAX:
        return solver.maximize(lp.objective)
    return solver.minimize(lp.objective)


def certify(lp: LinearProgram, res: LPResult) -> bool:
    """Exact optimality certificate check; False on any defect.

    Verifies the primal point, dual signs, the stationarity identity, the
    zero duality gap and complementary slackness. Only optimal results can
    certify; infeasible/unbounded statuses return False.
    """
    if res.status != OPTIMAL:
        return False
    if res.primal is None or res.dual_ineq is None or res.dual_eq is None:
        return False
    n = lp.nvars
    if len(res.primal) != n:
        return False
    if len(res.dual_eq) != len(lp.equations):
        return False
    if len(res.dual_ineq) != len(lp.inequalities):
        return False
    x = res.primal
    for coeffs, rhs in lp.equations:
        if sum(c * xi for c, xi in zip(coeffs, x)) != rhs:
            return False
    slacks = []
    for coeffs, rhs in lp.inequalities:
        s = rhs - sum(c * xi for c, xi in zip(coeffs, x))
        if s < 0:
            return False
        slacks.append(s)
    if any(b < 0 for b in res.dual_ineq):
        return False
    if sum(c * xi for c, xi in zip(lp.objective, x)) != res.value:
        return False
    sign = 1 if lp.sense == MAX else -1
    for j in range(n):
        lhs = sum(mu * coeffs[j] for mu, (coeffs, _) in zip(res.dual_eq, lp.equations))
        lhs += sign * sum(
            b * coeffs[j] for b, (coeffs, _) in zip(res.dual_ineq, lp.inequalities)
        )
        if lhs != lp.objective[j]:
            return False
    gap = sum(mu * rhs for mu, (_, rhs) in zip(res.dual_eq, lp.equations))
    gap += sign * sum(
        b * rhs for b, (_, rhs) in zip(res.dual_ineq, lp.inequalities)
    )
    if gap != res.value:
        return False
    for b, s in zip(res.dual_ineq, slacks):
        if b * s != 0:
            return False
    return True
