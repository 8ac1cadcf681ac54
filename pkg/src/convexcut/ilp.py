"""0-1 integer linear programs with a growing constraint pool.

Two exact backends sit behind :func:`solve`:

``"bnb"``
    depth-first branch-and-bound over LP relaxations from :mod:`.simplex`
    (most-fractional branching, lowest index on ties).
``"highs"``
    the HiGHS MIP solver through :func:`scipy.optimize.milp`.

Both honour the relative gap target and report the proven lower bound.
"""
from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .simplex import solve_lp

TOL = 1e-6
GAP_FLOOR = 1e-9
SENSES = ("<=", ">=")


class IlpError(ValueError):
    pass


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[int, float], ...]
    sense: str
    rhs: float

    def __post_init__(self):
        if self.sense not in SENSES:
            raise IlpError(f"unknown sense {self.sense!r}")
        idx = [i for i, _ in self.terms]
        if len(set(idx)) != len(idx):
            raise IlpError("duplicate variable index in constraint")

    @classmethod
    def build(cls, coeffs: dict[int, float] | Iterable[tuple[int, float]], sense: str, rhs: float):
        """Merge repeated indices and drop zero coefficients."""
        merged: dict[int, float] = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for i, a in items:
            merged[int(i)] = merged.get(int(i), 0.0) + float(a)
        terms = tuple(sorted((i, a) for i, a in merged.items() if a != 0.0))
        return cls(terms, sense, float(rhs))

    def lhs(self, values) -> float:
        return float(sum(a * values[i] for i, a in self.terms))

    def satisfied(self, values, tol: float = TOL) -> bool:
        v = self.lhs(values)
        if self.sense == "<=":
            return v <= self.rhs + tol
        return v >= self.rhs - tol

    def key(self) -> tuple:
        return (self.terms, self.sense, self.rhs)

    def max_index(self) -> int:
        return max((i for i, _ in self.terms), default=-1)


@dataclass
class IlpInstance:
    """Minimise ``objective . x`` over binary ``x`` subject to the pool."""

    var_count: int
    objective: list[float]
    constraints: list[LinearConstraint] = field(default_factory=list)
    var_names: list[str] | None = None
    _keys: set = field(default_factory=set, repr=False, compare=False)

    def __post_init__(self):
        self.objective = [float(x) for x in self.objective]
        if len(self.objective) != self.var_count:
            raise IlpError("objective length does not match var_count")
        if not all(math.isfinite(x) for x in self.objective):
            raise IlpError("objective coefficients must be finite")
        pool, self.constraints = self.constraints, []
        self._keys = set()
        for con in pool:
            self.add(con)

    def add(self, con: LinearConstraint) -> bool:
        """Append ``con`` unless an identical constraint is already pooled."""
        if con.max_index() >= self.var_count:
            raise IlpError("constraint references an unknown variable")
        k = con.key()
        if k in self._keys:
            return False
        self._keys.add(k)
        self.constraints.append(con)
        return True

    def add_all(self, cons: Iterable[LinearConstraint]) -> int:
        return sum(self.add(c) for c in cons)

    def copy(self) -> "IlpInstance":
        names = list(self.var_names) if self.var_names is not None else None
        return IlpInstance(self.var_count, list(self.objective), list(self.constraints), names)

    def names(self) -> list[str]:
        if self.var_names is not None:
            return list(self.var_names)
        return [f"x{i}" for i in range(self.var_count)]

    def objective_value(self, values) -> float:
        return float(sum(c * v for c, v in zip(self.objective, values)))

    def is_feasible(self, values, tol: float = TOL) -> bool:
        return all(c.satisfied(values, tol) for c in self.constraints)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Constraint pool as ``A x <= b``."""
        A = np.zeros((len(self.constraints), self.var_count))
        b = np.zeros(len(self.constraints))
        for r, con in enumerate(self.constraints):
            sign = 1.0 if con.sense == "<=" else -1.0
            for i, a in con.terms:
                A[r, i] = sign * a
            b[r] = sign * con.rhs
        return A, b


@dataclass
class IlpSolution:
    values: tuple[int, ...] | None
    objective_value: float
    lower_bound: float
    gap: float
    status: str  # optimal | gap_reached | infeasible | timeout
    nodes: int = 0


def relative_gap(incumbent: float, bound: float) -> float:
    diff = incumbent - bound
    if diff <= 0.0:
        return 0.0
    return diff / max(abs(incumbent), GAP_FLOOR)


def _finish(values, obj, bound, epsilon, nodes, timed_out=False):
    bound = min(bound, obj)
    gap = relative_gap(obj, bound)
    if obj - bound <= TOL:
        gap = 0.0
    if timed_out:
        status = "timeout"
    elif gap == 0.0:
        status = "optimal"
    else:
        status = "gap_reached"
    return IlpSolution(tuple(int(v) for v in values), float(obj), float(bound), gap, status, nodes)


def _integral_objective(c) -> bool:
    return all(float(x).is_integer() for x in c)


def _solve_bnb(inst: IlpInstance, epsilon: float, deadline: float | None) -> IlpSolution:
    n = inst.var_count
    c = np.asarray(inst.objective, dtype=float)
    A, b = inst.dense()
    integral = _integral_objective(c)

    def relax(fixed):
        free = np.array([i for i in range(n) if i not in fixed], dtype=int)
        xfix = np.zeros(n)
        for i, v in fixed.items():
            xfix[i] = v
        rhs = b - A @ xfix
        const = float(c @ xfix)
        if free.size:
            sub = A[:, free]
            active = np.any(sub != 0.0, axis=1)
        else:
            sub = A[:, :0]
            active = np.zeros(len(b), dtype=bool)
        if np.any(rhs[~active] < -TOL):
            return None
        res = solve_lp(c[free], sub[active], rhs[active])
        if res.status != "optimal":
            return None
        x = xfix.copy()
        x[free] = res.x
        bound = res.objective + const
        if integral:
            bound = math.ceil(bound - TOL)
        return x, bound

    best_x = None
    best_obj = math.inf
    pruned_bound = math.inf
    nodes = 0
    stack: list[tuple[dict, float]] = [({}, -math.inf)]
    while stack:
        if deadline is not None and time.monotonic() > deadline:
            open_bound = min(bd for _, bd in stack)
            if best_x is None:
                return IlpSolution(None, math.inf, min(open_bound, pruned_bound), math.inf, "timeout", nodes)
            return _finish(best_x, best_obj, min(open_bound, pruned_bound), epsilon, nodes, timed_out=True)
        fixed, parent_bound = stack.pop()
        if best_x is not None and parent_bound >= best_obj - TOL:
            continue
        nodes += 1
        out = relax(fixed)
        if out is None:
            continue
        x, bound = out
        if best_x is not None:
            if bound >= best_obj - TOL:
                continue
            if relative_gap(best_obj, bound) <= epsilon:
                pruned_bound = min(pruned_bound, bound)
                continue
        frac = np.minimum(x - np.floor(x), np.ceil(x) - x)
        frac[list(fixed)] = 0.0
        j = int(np.argmax(frac))
        if frac[j] <= TOL:
            xi = np.round(x).astype(int)
            if inst.is_feasible(xi):
                obj = float(c @ xi)
                if obj < best_obj - 1e-12:
                    best_obj, best_x = obj, xi
            continue
        first = 1 if x[j] >= 0.5 else 0
        for val in (1 - first, first):
            child = dict(fixed)
            child[j] = val
            stack.append((child, bound))
    if best_x is None:
        return IlpSolution(None, math.inf, math.inf, 0.0, "infeasible", nodes)
    return _finish(best_x, best_obj, min(best_obj, pruned_bound), epsilon, nodes)


def _solve_highs(inst: IlpInstance, epsilon: float, time_limit: float | None) -> IlpSolution:
    from scipy.optimize import Bounds, LinearConstraint as SciConstraint, milp
    from scipy.sparse import csr_matrix

    n = inst.var_count
    c = np.asarray(inst.objective, dtype=float)
    rows, cols, data = [], [], []
    lo = np.empty(len(inst.constraints))
    hi = np.empty(len(inst.constraints))
    for r, con in enumerate(inst.constraints):
        for i, a in con.terms:
            rows.append(r)
            cols.append(i)
            data.append(a)
        if con.sense == "<=":
            lo[r], hi[r] = -np.inf, con.rhs
        else:
            lo[r], hi[r] = con.rhs, np.inf
    constraints = []
    if inst.constraints:
        A = csr_matrix((data, (rows, cols)), shape=(len(inst.constraints), n))
        constraints.append(SciConstraint(A, lo, hi))
    options = {"disp": False, "mip_rel_gap": float(epsilon)}
    if time_limit is not None:
        options["time_limit"] = max(float(time_limit), 1e-3)
    res = milp(c, constraints=constraints, integrality=np.ones(n), bounds=Bounds(0, 1), options=options)
    if res.status == 2:
        return IlpSolution(None, math.inf, math.inf, 0.0, "infeasible")
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    bound = getattr(res, "mip_dual_bound", None)
    if res.x is None:
        if res.status == 1:
            return IlpSolution(None, math.inf, -math.inf if bound is None else bound, math.inf, "timeout", nodes)
        raise IlpError(f"HiGHS failed: {res.message}")
    x = np.round(res.x).astype(int)
    if not inst.is_feasible(x):
        raise IlpError("HiGHS returned an assignment violating the constraint pool")
    obj = float(c @ x)
    if bound is None or not math.isfinite(bound):
        bound = obj
    if _integral_objective(c):
        bound = math.ceil(bound - TOL)
    return _finish(x, obj, bound, epsilon, nodes, timed_out=(res.status == 1))


BACKENDS = ("highs", "bnb")


def solve(inst: IlpInstance, epsilon: float = 0.0, time_limit: float | None = None,
          backend: str = "highs") -> IlpSolution:
    """Minimise ``inst`` to within relative gap ``epsilon``.

    A run cut short by ``time_limit`` returns status ``"timeout"`` with the
    incumbent (``values`` is None when no feasible point was found yet).
    """
    if epsilon < 0 or not math.isfinite(epsilon):
        raise IlpError("epsilon must be a finite nonnegative number")
    if backend not in BACKENDS:
        raise IlpError(f"unknown backend {backend!r}")
    if inst.var_count == 0:
        if all(c.satisfied([]) for c in inst.constraints):
            return IlpSolution((), 0.0, 0.0, 0.0, "optimal")
        return IlpSolution(None, math.inf, math.inf, 0.0, "infeasible")
    if backend == "bnb":
        deadline = None if time_limit is None else time.monotonic() + time_limit
        sol = _solve_bnb(inst, epsilon, deadline)
    else:
        sol = _solve_highs(inst, epsilon, time_limit)
        if sol.status == "gap_reached" and sol.gap > epsilon:
            # HiGHS measures its gap slightly differently; tighten once
            sol = _solve_highs(inst, 0.0, time_limit)
    return sol


# -- CPLEX LP text format ---------------------------------------------------

def _num(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _linear(terms: Sequence[tuple[int, float]], names: Sequence[str], per_line: int = 8) -> str:
    parts = []
    for k, (i, a) in enumerate(terms):
        mag = _num(abs(a))
        if k == 0:
            tok = f"- {mag} {names[i]}" if a < 0 else f"{mag} {names[i]}"
        else:
            tok = f"{'-' if a < 0 else '+'} {mag} {names[i]}"
        if k and k % per_line == 0:
            tok = "\n   " + tok
        parts.append(tok)
    return " ".join(parts)


def write_lp(inst: IlpInstance) -> str:
    names = inst.names()
    buf = io.StringIO()
    buf.write("\\ written by convexcut\n")
    buf.write("Minimize\n")
    obj_terms = [(i, a) for i, a in enumerate(inst.objective) if a != 0.0]
    if obj_terms:
        buf.write(f" obj: {_linear(obj_terms, names)}\n")
    elif names:
        buf.write(f" obj: 0 {names[0]}\n")
    else:
        buf.write(" obj:\n")
    buf.write("Subject To\n")
    for r, con in enumerate(inst.constraints):
        expr = _linear(con.terms, names) if con.terms else f"0 {names[0]}"
        buf.write(f" c{r}: {expr} {con.sense} {_num(con.rhs)}\n")
    buf.write("Bounds\n")
    for name in names:
        buf.write(f" 0 <= {name} <= 1\n")
    buf.write("Binaries\n")
    for k in range(0, len(names), 10):
        buf.write(" " + " ".join(names[k:k + 10]) + "\n")
    buf.write("End\n")
    return buf.getvalue()


def export_lp(inst: IlpInstance, sink) -> None:
    """Write ``inst`` in CPLEX-LP format to a path or a text stream."""
    text = write_lp(inst)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="ascii") as fh:
            fh.write(text)


def import_solution(text: str, inst: IlpInstance) -> tuple[int, ...]:
    """Parse whitespace-separated ``name=value`` pairs into a 0/1 vector."""
    index = {name: i for i, name in enumerate(inst.names())}
    values = [0] * inst.var_count
    for tok in text.split():
        if "=" not in tok:
            raise IlpError(f"malformed solution token {tok!r}")
        name, val = tok.split("=", 1)
        if name not in index:
            raise IlpError(f"unknown variable {name!r}")
        values[index[name]] = int(round(float(val)))
    return tuple(values)


def format_solution(values: Sequence[int], inst: IlpInstance) -> str:
    return " ".join(f"{n}={int(v)}" for n, v in zip(inst.names(), values))
