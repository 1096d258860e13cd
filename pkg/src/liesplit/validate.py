"""Numerical cross-checks of schemes on concrete matrix generators.

The splitting machinery never touches a matrix; this module closes the
loop.  It builds small generator sets (random, structured, or spin
chains assembled from the lattice partitions), applies a scheme as an
ordered product of matrix exponentials, and measures the distance to
the exact flow e^{tH}.  An order-p scheme must show error O(t^{p+1}),
so the log-log slope over the asymptotic window is the observable that
either confirms or refutes a claimed order — independently of all the
series algebra used to derive it.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .lattice import build_chain, partition
from .schemes import Scheme

__all__ = [
    "ComparisonRow",
    "GeneratorSet",
    "ScalingReport",
    "apply_scheme",
    "build_generators",
    "comparison_to_csv",
    "equal_cost_comparison",
    "operator_norm",
    "scaling_fit",
]

_CLASSES = ("random-antihermitian", "random-general",
            "spin-chain-even-odd", "commuting-pair")

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class GeneratorSet:
    """n square matrices standing in for the terms of H = A + B (+ C)."""

    n: int
    dim: int
    matrices: tuple[np.ndarray, ...]
    klass: str
    seed: int | None

    def __post_init__(self):
        if len(self.matrices) != self.n:
            raise ValueError("need one matrix per term")
        for mat in self.matrices:
            if mat.shape != (self.dim, self.dim):
                raise ValueError("all matrices must be dim x dim")

    def total(self) -> np.ndarray:
        return sum(self.matrices[1:], start=self.matrices[0].copy())


def operator_norm(mat: np.ndarray) -> float:
    """Largest singular value; exact (dense) at desk scale."""
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def _unit(mat: np.ndarray) -> np.ndarray:
    return mat / operator_norm(mat)


def build_generators(klass: str, n: int = 2, dim: int = 16,
                     seed: int = 0, chain_length: int = 6) -> GeneratorSet:
    """Deterministic generator sets of the four supported classes.

    Random matrices are drawn entrywise from a seeded normal distribution
    and scaled to unit operator norm so error grids carry across seeds.
    The spin chain is the nearest-neighbor Heisenberg model on an open
    chain, split into even and odd bonds by the lattice partitioner.
    """
    if klass not in _CLASSES:
        raise ValueError(f"unknown generator class {klass!r}; options: "
                         f"{_CLASSES}")
    if n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    if klass == "spin-chain-even-odd":
        return _spin_chain(n, chain_length, seed)
    if dim < 2:
        raise ValueError("dim must be at least 2")
    rng = np.random.default_rng(seed)

    def draw():
        return (rng.standard_normal((dim, dim))
                + 1j * rng.standard_normal((dim, dim)))

    if klass == "random-general":
        mats = tuple(_unit(draw()) for _ in range(n))
    elif klass == "random-antihermitian":
        mats = tuple(_unit((g - g.conj().T) / 2) for g in
                     (draw() for _ in range(n)))
    else:  # commuting-pair: polynomial functions of one seed matrix
        x = _unit(draw())
        polys = (x, x @ x + x, x @ x @ x - x)
        mats = tuple(_unit(m) for m in polys[:n])
    return GeneratorSet(n, dim, mats, klass, seed)


def _heisenberg_bond(i: int, j: int, length: int) -> np.ndarray:
    out = np.zeros((2 ** length, 2 ** length), dtype=complex)
    for axis in "xyz":
        ops = [np.eye(2, dtype=complex)] * length
        ops[i] = _PAULI[axis] / 2
        ops[j] = _PAULI[axis] / 2
        term = ops[0]
        for op in ops[1:]:
            term = np.kron(term, op)
        out += term
    return out


def _spin_chain(n: int, length: int, seed: int) -> GeneratorSet:
    if n != 2:
        raise ValueError("the even/odd spin chain splits into n = 2 terms")
    if not 4 <= length <= 10:
        raise ValueError("chain length must be between 4 and 10")
    graph = build_chain(length)
    part = partition(graph, "chain-parity")
    pos = graph.coords()
    mats = []
    for group in part.groups:
        term = np.zeros((2 ** length, 2 ** length), dtype=complex)
        for k in group:
            i, j = sorted(pos[s][0] for s in graph.interactions[k])
            term += _heisenberg_bond(i, j, length)
        mats.append(term)
    return GeneratorSet(2, 2 ** length, tuple(mats), "spin-chain-even-odd",
                        seed)


def apply_scheme(scheme: Scheme, params, gens: GeneratorSet,
                 t: float) -> np.ndarray:
    """Ordered product of matrix exponentials for one time step."""
    if scheme.n != gens.n:
        raise ValueError(f"scheme splits {scheme.n} terms but the "
                         f"generator set has {gens.n}")
    out = np.eye(gens.dim, dtype=complex)
    for g, coeff in scheme.resolve(params):
        out = out @ expm(float(coeff) * t * gens.matrices[g])
    return out


@dataclass(frozen=True)
class ScalingReport:
    """Error-vs-step-size measurement with a fitted log-log slope."""

    t_grid: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_slope: float
    window: tuple[int, ...]
    seed: int | None
    label: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# label={self.label} seed={self.seed} "
                  f"slope={self.fitted_slope:.17g}\n")
        buf.write("t,error\n")
        for t, e in zip(self.t_grid, self.errors):
            buf.write(f"{t:.17g},{e:.17g}\n")
        return buf.getvalue()


def scaling_fit(scheme: Scheme, params, gens: GeneratorSet,
                t_lo: float = 3e-3, t_hi: float = 0.7,
                points: int = 28) -> ScalingReport:
    """Fit the error order on a geometric grid of step sizes.

    The window drops the roundoff floor (error < 1e-13 dim) and the
    preasymptotic top (error > 0.1), then keeps the longest stretch
    whose point-to-point slopes agree within 0.1; the reported slope is
    the least-squares fit there.  An order-p scheme gives p + 1.
    """
    if points < 5:
        raise ValueError("need at least five grid points")
    grid = np.geomspace(t_lo, t_hi, points)
    h = gens.total()
    errors = []
    for t in grid:
        exact = expm(t * h)
        errors.append(operator_norm(apply_scheme(scheme, params, gens, t)
                                    - exact))
    errors_arr = np.array(errors)
    window = _stable_window(grid, errors_arr, 1e-13 * gens.dim, 1e-1)
    if window is None:
        raise ValueError("no valid scaling window: every grid point is "
                         "at the roundoff floor or preasymptotic")
    logs_t = np.log(grid[list(window)])
    logs_e = np.log(errors_arr[list(window)])
    slope = float(np.polyfit(logs_t, logs_e, 1)[0])
    return ScalingReport(tuple(float(t) for t in grid),
                         tuple(float(e) for e in errors),
                         slope, window, gens.seed, scheme.label())


def _stable_window(grid, errors, floor, top):
    valid = (errors > floor) & (errors < top)
    runs = []
    start = None
    for i, ok in enumerate(valid):
        if ok and start is None:
            start = i
        if not ok and start is not None:
            runs.append(range(start, i))
            start = None
    if start is not None:
        runs.append(range(start, len(valid)))

    best = None
    for run in runs:
        idx = list(run)
        if len(idx) < 5:
            continue
        slopes = np.diff(np.log(errors[idx])) / np.diff(np.log(grid[idx]))
        # longest sub-window with mutually consistent local slopes
        for size in range(len(idx), 4, -1):
            for off in range(len(idx) - size + 1):
                s = slopes[off:off + size - 1]
                if np.max(s) - np.min(s) <= 0.1:
                    cand = tuple(idx[off:off + size])
                    if best is None or len(cand) > len(best):
                        best = cand
                    break
            if best is not None and len(best) >= size:
                break
    return best


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    m: int
    steps: int
    t_step: float
    cost: int
    error: float
    rank: int


def equal_cost_comparison(entries: Sequence, gens: GeneratorSet,
                          total_time: float,
                          budget: int) -> tuple[ComparisonRow, ...]:
    """Final-time error of several schemes at one exponential budget.

    Every scheme gets about ``budget`` matrix exponentials: a scheme
    with m factors takes steps ~ budget/m of size t = T/steps, so
    cheaper-per-step schemes take more, smaller steps.  Rows keep the
    input order; the rank column orders by error.
    """
    items = []
    for entry in entries:
        scheme = entry.scheme
        params = entry.params
        label = getattr(entry, "name", scheme.label())
        if budget < scheme.m:
            raise ValueError(f"budget {budget} is below the factor count "
                             f"of {label} (m={scheme.m})")
        steps = max(1, round(budget / scheme.m))
        t_step = total_time / steps
        step_u = apply_scheme(scheme, params, gens, t_step)
        u = np.linalg.matrix_power(step_u, steps)
        err = operator_norm(u - expm(total_time * gens.total()))
        items.append((label, scheme.m, steps, t_step, steps * scheme.m,
                      err))
    order = sorted(range(len(items)), key=lambda i: items[i][5])
    ranks = {i: r + 1 for r, i in enumerate(order)}
    return tuple(ComparisonRow(*items[i], rank=ranks[i])
                 for i in range(len(items)))


def comparison_to_csv(rows: Sequence[ComparisonRow],
                      gens: GeneratorSet) -> str:
    buf = io.StringIO()
    buf.write(f"# class={gens.klass} seed={gens.seed} dim={gens.dim}\n")
    buf.write("label,m,steps,t_step,cost,error,rank\n")
    for r in rows:
        buf.write(f"{r.label},{r.m},{r.steps},{r.t_step:.17g},{r.cost},"
                  f"{r.error:.17g},{r.rank}\n")
    return buf.getvalue()
