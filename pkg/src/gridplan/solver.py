"""Solving LPInstances: a dense two-phase revised simplex with native
variable bounds, plus MPS export and a solution importer for running the
same problem through an external solver.

The simplex is sized for desk-scale problems (a few thousand columns),
which is exactly what the bundled fixtures produce. Larger studies are
expected to go through export_mps.
"""

from __future__ import annotations

import hashlib
import io
import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from gridplan.formulation import EQ, GE, LE, LPError, LPInstance

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_ITERATION_LIMIT = "iteration-limit"

_PIVOT_RULES = ("dantzig", "bland")


@dataclass(frozen=True)
class SolveOptions:
    """Tunables for the built-in simplex."""

    feasibility_tol: float = 1e-7
    optimality_tol: float = 1e-7
    max_iterations: int | None = None
    pivot_rule: str = "dantzig"
    scale: bool = True
    refactor_every: int = 100

    def __post_init__(self):
        if self.feasibility_tol <= 0.0 or self.optimality_tol <= 0.0:
            raise ValueError("tolerances must be > 0")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.pivot_rule not in _PIVOT_RULES:
            raise ValueError(
                f"pivot_rule must be one of {_PIVOT_RULES}, "
                f"got {self.pivot_rule!r}"
            )
        if self.refactor_every < 1:
            raise ValueError("refactor_every must be >= 1")


@dataclass(frozen=True)
class Solution:
    """Outcome of a solve or an imported external solution.

    ``slacks`` holds the signed row residual oriented so feasible
    inequality rows have slack >= 0 (headroom for <=, surplus for >=).
    ``duals`` are shadow prices: d(objective)/d(rhs).
    """

    status: str
    x: np.ndarray | None
    objective: float | None
    slacks: np.ndarray | None
    duals: np.ndarray | None
    iterations: int
    max_violation: float | None
    duality_gap: float | None
    message: str = ""

    def value(self, lp: LPInstance, name: str) -> float:
        if self.x is None:
            raise ValueError(f"no solution values (status={self.status})")
        return float(self.x[lp.column_index(name)])


def _signed_slacks(lp: LPInstance, x: np.ndarray) -> np.ndarray:
    out = np.empty(lp.n_rows)
    for i, row in enumerate(lp.rows):
        act = row.activity(x)
        out[i] = row.rhs - act if row.sense == LE else act - row.rhs
    return out


def _max_violation(lp: LPInstance, x: np.ndarray) -> float:
    worst = 0.0
    for row in lp.rows:
        act = row.activity(x)
        if row.sense == LE:
            worst = max(worst, act - row.rhs)
        elif row.sense == GE:
            worst = max(worst, row.rhs - act)
        else:
            worst = max(worst, abs(act - row.rhs))
    if lp.n_cols:
        worst = max(worst, float(np.max(lp.lower - x, initial=0.0)))
        finite = np.isfinite(lp.upper)
        if finite.any():
            worst = max(worst, float(np.max((x - lp.upper)[finite],
                                            initial=0.0)))
    return worst


class _Simplex:
    """Bounded-variable revised simplex over the working (scaled) problem.

    All variables have lower bound 0 in this space; each is nonbasic at
    0, nonbasic at its upper bound, or basic.
    """

    AT_LOWER, AT_UPPER, BASIC = 0, 1, 2

    def __init__(self, a, b, ub, opts: SolveOptions):
        self.a = np.asfortranarray(a)
        self.b = b.copy()
        self.ub = ub.copy()
        self.opts = opts
        self.m, self.n_all = self.a.shape
        self.iterations = 0
        self.pivots_since_refactor = 0
        self.vstat = np.full(self.n_all, self.AT_LOWER, dtype=np.int8)
        self.basis = np.empty(self.m, dtype=np.int64)
        self.binv = np.eye(self.m)
        self.xb = b.copy()

    def set_basis(self, cols):
        self.basis[:] = cols
        self.vstat[:] = self.AT_LOWER
        self.vstat[self.basis] = self.BASIC
        self.binv = np.eye(self.m)
        self.xb = self.b.copy()

    def refactor(self):
        bmat = self.a[:, self.basis]
        try:
            self.binv = np.linalg.solve(bmat, np.eye(self.m))
        except np.linalg.LinAlgError:
            self._repair_basis()
            self.binv = np.linalg.solve(self.a[:, self.basis],
                                        np.eye(self.m))
        at_ub = np.flatnonzero(self.vstat == self.AT_UPPER)
        rhs = self.b.copy()
        if at_ub.size:
            rhs -= self.a[:, at_ub] @ self.ub[at_ub]
        self.xb = self.binv @ rhs
        self.pivots_since_refactor = 0

    def _unit_columns(self) -> dict:
        """Row index -> a working column that is a multiple of that row's
        unit vector (slack or artificial), preferring the earliest."""
        out: dict[int, list[int]] = {}
        nonzero = self.a != 0.0
        singles = np.flatnonzero(nonzero.sum(axis=0) == 1)
        for j in singles.tolist():
            i = int(np.argmax(nonzero[:, j]))
            out.setdefault(i, []).append(j)
        return out

    def _repair_basis(self):
        """Swap numerically dependent basis columns for row unit columns.

        Reachable only when roundoff lets a dependent column into the
        basis; the follow-up refactor recomputes consistent basic values.
        """
        lu = self.a[:, self.basis].copy()
        used = np.zeros(self.m, dtype=bool)
        dependent = []
        for k in range(self.m):
            col = np.where(used, 0.0, lu[:, k])
            r = int(np.argmax(np.abs(col)))
            if abs(col[r]) < 1e-9:
                dependent.append(k)
                continue
            used[r] = True
            row = lu[r, :].copy()
            row[k] = 0.0
            touched = np.flatnonzero(row)
            if touched.size:
                lu[:, touched] -= np.outer(lu[:, k] / lu[r, k], row[touched])
        in_basis = set(self.basis.tolist())
        units = self._unit_columns()
        for k, i in zip(dependent, np.flatnonzero(~used).tolist()):
            j = next((j for j in units.get(int(i), ()) if j not in in_basis),
                     None)
            if j is None:
                raise ArithmeticError(
                    f"cannot repair a singular basis: no spare unit column "
                    f"for row {i}")
            old = int(self.basis[k])
            in_basis.discard(old)
            in_basis.add(j)
            self.vstat[old] = self.AT_LOWER
            self.basis[k] = j
            self.vstat[j] = self.BASIC

    def values(self) -> np.ndarray:
        x = np.where(self.vstat == self.AT_UPPER, self.ub, 0.0)
        x[self.basis] = self.xb
        return x

    def duals(self, c: np.ndarray) -> np.ndarray:
        return c[self.basis] @ self.binv

    def run(self, c: np.ndarray, phase: int, max_iterations: int) -> str:
        tol = self.opts.optimality_tol
        piv_tol = 1e-10
        reject_tol = 1e-7
        bland_always = self.opts.pivot_rule == "bland"
        bland = bland_always
        stalled = 0
        stall_limit = 3 * self.m + 10
        fixed = self.ub <= 0.0
        # Columns whose only available pivots are numerically zero for the
        # current basis; cleared whenever the basis changes.
        blocked = np.zeros(self.n_all, dtype=bool)
        # Static column norms turn Dantzig pricing into a cheap steepest-
        # edge approximation, which cuts iteration counts severalfold on
        # problems mixing capacity and hourly-dispatch scales.
        norms = np.sqrt((self.a * self.a).sum(axis=0)) + 1.0

        while True:
            if self.iterations >= max_iterations:
                return STATUS_ITERATION_LIMIT
            self.iterations += 1

            y = c[self.basis] @ self.binv
            d = c - y @ self.a
            can_rise = (self.vstat == self.AT_LOWER) & ~fixed & (d < -tol)
            can_fall = (self.vstat == self.AT_UPPER) & (d > tol)
            score = np.where(can_rise, -d, 0.0) + np.where(can_fall, d, 0.0)
            score /= norms
            candidates = np.flatnonzero((score > 0.0) & ~blocked)
            if candidates.size == 0:
                return STATUS_OPTIMAL
            if bland:
                q = int(candidates[0])
            else:
                q = int(candidates[np.argmax(score[candidates])])
            sigma = 1.0 if self.vstat[q] == self.AT_LOWER else -1.0

            w = self.binv @ self.a[:, q]
            denom = sigma * w
            # Distance each basic variable allows before hitting a bound.
            ratios = np.full(self.m, np.inf)
            hits_upper = np.zeros(self.m, dtype=bool)
            pos = denom > piv_tol
            ratios[pos] = np.maximum(self.xb[pos], 0.0) / denom[pos]
            neg = denom < -piv_tol
            ub_b = self.ub[self.basis]
            with np.errstate(invalid="ignore"):
                room = np.where(np.isfinite(ub_b),
                                np.maximum(ub_b - self.xb, 0.0), np.inf)
            ratios[neg] = np.where(np.isfinite(room[neg]),
                                   room[neg] / -denom[neg], np.inf)
            hits_upper[neg] = True

            t_flip = self.ub[q] if np.isfinite(self.ub[q]) else np.inf
            t_row = float(ratios.min()) if self.m else np.inf
            t_star = min(t_flip, t_row)
            if not np.isfinite(t_star):
                if phase == 1:
                    raise ArithmeticError(
                        "feasibility subproblem claims an unbounded "
                        "direction; numerical breakdown"
                    )
                return STATUS_UNBOUNDED

            if t_flip <= t_row:
                # Entering variable swings to its other bound; basis keeps.
                self.vstat[q] = (self.AT_UPPER if sigma > 0.0
                                 else self.AT_LOWER)
                self.xb -= t_star * sigma * w
            else:
                near = ratios <= t_star + 1e-12
                idx = np.flatnonzero(near)
                if bland:
                    r = int(idx[np.argmin(self.basis[idx])])
                else:
                    r = int(idx[np.argmax(np.abs(denom[idx]))])
                if abs(w[r]) < reject_tol:
                    # Pivoting here would make the basis numerically
                    # singular. With stale updates, refactor and retry;
                    # with a fresh factorization, shelve this column.
                    if self.pivots_since_refactor > 0:
                        self.refactor()
                    else:
                        blocked[q] = True
                    self.iterations -= 1
                    continue
                self.xb -= t_star * sigma * w
                leaving = int(self.basis[r])
                self.vstat[leaving] = (self.AT_UPPER if hits_upper[r]
                                       else self.AT_LOWER)
                self.basis[r] = q
                self.vstat[q] = self.BASIC
                self.xb[r] = t_star if sigma > 0.0 else self.ub[q] - t_star
                # Product-form update of the basis inverse.
                piv_row = self.binv[r, :] / w[r]
                wz = w.copy()
                wz[r] = 0.0
                self.binv -= np.outer(wz, piv_row)
                self.binv[r, :] = piv_row
                self.pivots_since_refactor += 1
                blocked[:] = False
                # Small pivots are accepted but poison the rolling inverse,
                # so refresh it immediately afterwards.
                if (self.pivots_since_refactor >= self.opts.refactor_every
                        or abs(w[r]) < 1e-3):
                    self.refactor()

            if t_star > 1e-10:
                stalled = 0
                bland = bland_always
            else:
                stalled += 1
                if stalled > stall_limit:
                    bland = True


def _infeasible(iterations: int, message: str) -> Solution:
    return Solution(status=STATUS_INFEASIBLE, x=None, objective=None,
                    slacks=None, duals=None, iterations=iterations,
                    max_violation=None, duality_gap=None, message=message)


def _no_solution(status: str, iterations: int, message: str) -> Solution:
    return Solution(status=status, x=None, objective=None, slacks=None,
                    duals=None, iterations=iterations, max_violation=None,
                    duality_gap=None, message=message)


def _finish(lp: LPInstance, x: np.ndarray, duals: np.ndarray,
            vstat: np.ndarray, iterations: int) -> Solution:
    x = np.clip(x, lp.lower, np.where(np.isfinite(lp.upper), lp.upper,
                                      np.inf))
    primal = float(lp.objective @ x)
    # Dual objective: rhs terms plus reduced-cost terms for every
    # nonbasic variable resting at a finite bound.
    reduced = lp.objective.copy()
    for i, row in enumerate(lp.rows):
        if duals[i] != 0.0:
            reduced[row.idx] -= duals[i] * row.val
    dual_obj = float(duals @ lp.rhs_vector()) if lp.n_rows else 0.0
    at_lower = vstat == _Simplex.AT_LOWER
    dual_obj += float(reduced[at_lower] @ lp.lower[at_lower])
    at_upper = (vstat == _Simplex.AT_UPPER) & np.isfinite(lp.upper)
    dual_obj += float(reduced[at_upper] @ lp.upper[at_upper])
    gap = abs(primal - dual_obj) / max(1.0, abs(primal))
    return Solution(
        status=STATUS_OPTIMAL,
        x=x,
        objective=primal + lp.offset,
        slacks=_signed_slacks(lp, x),
        duals=duals,
        iterations=iterations,
        max_violation=_max_violation(lp, x),
        duality_gap=gap,
    )


def _solve_boxed(lp: LPInstance) -> Solution:
    """Row-free problem: each column sits at whichever bound is cheaper."""
    c = lp.objective
    unbounded = (c < 0.0) & ~np.isfinite(lp.upper)
    if unbounded.any():
        j = int(np.argmax(unbounded))
        return _no_solution(
            STATUS_UNBOUNDED, 0,
            f"column {lp.col_names[j]!r} improves without bound")
    x = np.where(c < 0.0, lp.upper, lp.lower)
    vstat = np.where(c < 0.0, _Simplex.AT_UPPER, _Simplex.AT_LOWER)
    return _finish(lp, x, np.zeros(0), vstat.astype(np.int8), 0)


def solve(lp: LPInstance, options: SolveOptions | None = None) -> Solution:
    """Minimize the LPInstance with the built-in simplex.

    The returned point is verified against the original rows and bounds;
    if numerical drift left it violated beyond tolerance, the solve is
    repeated once with an aggressive refactorization cadence.
    """
    lp.validate()
    opts = options or SolveOptions()
    sol = _solve_once(lp, opts)
    if sol.status != STATUS_OPTIMAL or sol.max_violation is None:
        return sol
    rhs_scale = max(1.0, float(np.max(np.abs(lp.rhs_vector()), initial=0.0)))
    if sol.max_violation <= 10.0 * opts.feasibility_tol * rhs_scale:
        return sol
    retry = SolveOptions(
        feasibility_tol=opts.feasibility_tol,
        optimality_tol=opts.optimality_tol,
        max_iterations=opts.max_iterations,
        pivot_rule=opts.pivot_rule,
        scale=opts.scale,
        refactor_every=5,
    )
    again = _solve_once(lp, retry)
    if (again.status == STATUS_OPTIMAL and again.max_violation is not None
            and again.max_violation < sol.max_violation):
        return again
    return sol


def _solve_once(lp: LPInstance, opts: SolveOptions) -> Solution:
    m, n = lp.n_rows, lp.n_cols
    if m == 0:
        return _solve_boxed(lp)

    a = lp.dense_matrix()
    b = lp.rhs_vector()
    senses = list(lp.senses())
    lower = lp.lower.copy()
    upper = lp.upper.copy()

    # Shift lower bounds to zero.
    b_shift = b - a @ lower
    ub = upper - lower

    # Normalize to nonnegative rhs, tracking the sign for dual recovery.
    flip = np.ones(m)
    for i in range(m):
        if b_shift[i] < 0.0:
            flip[i] = -1.0
            a[i, :] *= -1.0
            b_shift[i] *= -1.0
            if senses[i] == LE:
                senses[i] = GE
            elif senses[i] == GE:
                senses[i] = LE

    # Geometric-mean equilibration: capital-cost and hourly-energy
    # coefficients differ by orders of magnitude otherwise.
    row_scale = np.ones(m)
    col_scale = np.ones(n)
    if opts.scale and n:
        mag = np.abs(a)
        for _ in range(2):
            for axis, scale in ((1, row_scale), (0, col_scale)):
                hi = mag.max(axis=axis, initial=0.0)
                lo = np.where(mag > 0.0, mag, np.inf).min(axis=axis,
                                                          initial=np.inf)
                with np.errstate(invalid="ignore", divide="ignore"):
                    f = np.where((hi > 0.0) & np.isfinite(lo),
                                 1.0 / np.sqrt(hi * lo), 1.0)
                mag *= f[:, None] if axis == 1 else f[None, :]
                scale *= f
        a = a * row_scale[:, None] * col_scale[None, :]
    b_w = b_shift * row_scale
    c_w = lp.objective * col_scale
    ub_w = ub / col_scale

    # Working columns: structural, slack/surplus, artificial.
    slack_rows = [i for i in range(m) if senses[i] != EQ]
    art_rows = [i for i in range(m) if senses[i] != LE]
    n_slack, n_art = len(slack_rows), len(art_rows)
    n_all = n + n_slack + n_art
    a_work = np.zeros((m, n_all))
    a_work[:, :n] = a
    for k, i in enumerate(slack_rows):
        a_work[i, n + k] = 1.0 if senses[i] == LE else -1.0
    for k, i in enumerate(art_rows):
        a_work[i, n + n_slack + k] = 1.0
    ub_work = np.concatenate([ub_w, np.full(n_slack + n_art, np.inf)])

    start_basis = np.empty(m, dtype=np.int64)
    slack_of = {i: n + k for k, i in enumerate(slack_rows)}
    art_of = {i: n + n_slack + k for k, i in enumerate(art_rows)}
    for i in range(m):
        start_basis[i] = art_of[i] if i in art_of else slack_of[i]

    sx = _Simplex(a_work, b_w, ub_work, opts)
    sx.set_basis(start_basis)
    max_iterations = opts.max_iterations
    if max_iterations is None:
        max_iterations = 50 * (m + n_all) + 200

    if n_art:
        c1 = np.zeros(n_all)
        c1[n + n_slack:] = 1.0
        status = sx.run(c1, phase=1, max_iterations=max_iterations)
        if status == STATUS_ITERATION_LIMIT:
            return _no_solution(
                status, sx.iterations,
                f"iteration limit {max_iterations} hit during the "
                "feasibility phase")
        art_level = float(c1[sx.basis] @ np.maximum(sx.xb, 0.0))
        feas_tol = opts.feasibility_tol * max(
            1.0, float(np.max(np.abs(b_w), initial=0.0)))
        if art_level > feas_tol:
            bad = [lp.rows[i].name for k, i in enumerate(art_rows)
                   if sx.vstat[n + n_slack + k] == _Simplex.BASIC
                   or (n + n_slack + k in sx.basis)][:5]
            return _infeasible(
                sx.iterations,
                f"no feasible point; residual {art_level:.3e} "
                f"concentrated in rows {bad}")
        sx.ub[n + n_slack:] = 0.0

    c2 = np.zeros(n_all)
    c2[:n] = c_w
    status = sx.run(c2, phase=2, max_iterations=max_iterations)
    if status == STATUS_ITERATION_LIMIT:
        return _no_solution(
            status, sx.iterations,
            f"iteration limit {max_iterations} hit while optimizing")
    if status == STATUS_UNBOUNDED:
        return _no_solution(
            status, sx.iterations,
            "objective improves without bound over the feasible set")

    sx.refactor()
    x = lower + sx.values()[:n] * col_scale
    duals = sx.duals(c2) * row_scale * flip
    return _finish(lp, x, duals, sx.vstat[:n].copy(), sx.iterations)


_BASE36 = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_RESERVED_MPS_NAMES = ("COST", "RHS", "BND")


def _hash36(name: str, length: int = 6) -> str:
    value = int.from_bytes(
        hashlib.blake2b(name.encode(), digest_size=8).digest(), "big")
    out = []
    for _ in range(length):
        value, digit = divmod(value, 36)
        out.append(_BASE36[digit])
    return "".join(out)


def _mangle(name: str) -> str:
    clean = re.sub(r"[^A-Za-z0-9]", "_", name)
    if len(clean) <= 8:
        return clean
    return clean[:2] + _hash36(name)


def mps_name_map(lp: LPInstance) -> dict:
    """Canonical original-name -> 8-char MPS name map (rows and columns).

    Raises LPError listing colliders if two names mangle identically.
    """
    taken = {reserved: reserved for reserved in _RESERVED_MPS_NAMES}
    mapping = {}
    for name in list(lp.col_names) + [row.name for row in lp.rows]:
        short = _mangle(name)
        other = taken.get(short)
        if other is not None and other != name:
            raise LPError(
                f"MPS name collision: {other!r} and {name!r} both mangle "
                f"to {short!r}")
        taken[short] = name
        mapping[name] = short
    return mapping


def export_mps(lp: LPInstance, problem_name: str = "GRIDPLAN") -> str:
    """Write the LP as fixed-format MPS text.

    The constant objective offset has no MPS representation, so it is
    recorded in a leading comment and re-added by import_solution.
    Coefficient values are written at full precision even where that
    overflows the historical 12-character value field; tokenizing
    readers (including every modern solver) accept this.
    """
    lp.validate()
    row_names = [row.name for row in lp.rows]
    if len(set(row_names)) != len(row_names):
        raise LPError("row names must be unique for MPS export")
    names = mps_name_map(lp)
    sense_code = {LE: "L", GE: "G", EQ: "E"}

    by_col = [[] for _ in range(lp.n_cols)]
    for row in lp.rows:
        short = names[row.name]
        for j, v in zip(row.idx, row.val):
            by_col[int(j)].append((short, float(v)))

    buf = io.StringIO()
    buf.write(f"* OFFSET {lp.offset!r}\n")
    buf.write(f"NAME          {problem_name}\n")
    buf.write("ROWS\n")
    buf.write(" N  COST\n")
    for row in lp.rows:
        buf.write(f" {sense_code[row.sense]}  {names[row.name]:<8}\n")
    buf.write("COLUMNS\n")
    for j in range(lp.n_cols):
        col = names[lp.col_names[j]]
        # Every column gets an objective entry, declaring it even when 0.
        buf.write(f"    {col:<8}  {'COST':<8}  {float(lp.objective[j])!r}\n")
        for short, value in by_col[j]:
            buf.write(f"    {col:<8}  {short:<8}  {value!r}\n")
    buf.write("RHS\n")
    for row in lp.rows:
        if row.rhs != 0.0:
            buf.write(f"    {'RHS':<8}  {names[row.name]:<8}  {row.rhs!r}\n")
    buf.write("BOUNDS\n")
    for j in range(lp.n_cols):
        col = names[lp.col_names[j]]
        lo, up = float(lp.lower[j]), float(lp.upper[j])
        if lo == up:
            buf.write(f" FX {'BND':<8}  {col:<8}  {lo!r}\n")
            continue
        if lo != 0.0:
            buf.write(f" LO {'BND':<8}  {col:<8}  {lo!r}\n")
        if np.isfinite(up):
            buf.write(f" UP {'BND':<8}  {col:<8}  {up!r}\n")
    buf.write("ENDATA\n")
    return buf.getvalue()


def _parse_solution_text(text: str) -> dict:
    values = {}
    for line in text.splitlines():
        if line.startswith("*") or not line.strip():
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise LPError(f"cannot parse solution line {line!r}")
        values[tokens[0]] = float(tokens[1])
    return values


def import_solution(lp: LPInstance, source,
                    options: SolveOptions | None = None) -> Solution:
    """Adopt externally solved values for this LP.

    ``source`` may be a mapping, NAME VALUE text, or a readable stream.
    Column names may be originals or their MPS-mangled forms. The
    objective and slacks are recomputed from the point itself; status
    "optimal" here asserts feasibility within tolerance, while a point
    violating any row beyond tolerance comes back "infeasible" with the
    offending rows named.
    """
    lp.validate()
    opts = options or SolveOptions()
    if isinstance(source, Mapping):
        raw = dict(source)
    else:
        text = source.read() if hasattr(source, "read") else str(source)
        raw = _parse_solution_text(text)

    known = set(lp.col_names)
    unmangle = {_mangle(name): name for name in lp.col_names}
    values = {}
    for name, value in raw.items():
        if name in known:
            values[name] = value
        elif name in unmangle:
            values[unmangle[name]] = value
        else:
            raise LPError(f"solution names unknown column {name!r}")
    missing = [name for name in lp.col_names if name not in values]
    if missing:
        raise LPError(f"solution is missing columns {missing[:5]}")

    x = np.array([values[name] for name in lp.col_names], dtype=float)
    violation = _max_violation(lp, x)
    if violation <= opts.feasibility_tol:
        status, message = STATUS_OPTIMAL, ""
    else:
        status = STATUS_INFEASIBLE
        bad = []
        for row in lp.rows:
            act = row.activity(x)
            off = (act - row.rhs if row.sense == LE
                   else row.rhs - act if row.sense == GE
                   else abs(act - row.rhs))
            if off > opts.feasibility_tol:
                bad.append(row.name)
        message = (f"imported point violates {len(bad)} rows "
                   f"(worst {violation:.3e}): {bad[:5]}")
    return Solution(
        status=status,
        x=x,
        objective=lp.objective_value(x),
        slacks=_signed_slacks(lp, x),
        duals=None,
        iterations=0,
        max_violation=violation,
        duality_gap=None,
        message=message,
    )
