"""Simulation-based ground truth for indiscernibility claims.

The oracle never looks at subspace algebra: it compares the natural
responses of the two systems directly, on a time grid through the matrix
exponential and over a range of matrix powers.  Both checks are normalized
by the propagator magnitude so that growing modes (spectral radius well
above 1) cannot mask or fake a divergence through floating-point roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Subspace, expm
from .network import NetworkSystem

DEFAULT_TIME_GRID = tuple(float(t) for t in np.linspace(0.0, 5.0, 51))


@dataclass(frozen=True)
class OracleConfig:
    """Sampling plan for the trajectory oracle.

    ``power_range`` defaults to twice the ambient dimension when left as
    None.  The sampler is a seeded PCG64 generator, so a fixed seed
    reproduces summaries bit-for-bit on one platform.
    """

    time_grid: tuple[float, ...] = DEFAULT_TIME_GRID
    power_range: int | None = None
    rel_tol: float = 1e-7
    sample_count: int = 100
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(t) for t in self.time_grid)
        if not grid:
            raise ValueError("time_grid must be nonempty")
        if any(t < 0 for t in grid):
            raise ValueError("time_grid entries must be nonnegative")
        object.__setattr__(self, "time_grid", grid)
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.power_range is not None and self.power_range < 1:
            raise ValueError("power_range must be >= 1")


def _check_pair(phi: NetworkSystem, phibar: NetworkSystem) -> None:
    if phi.phi.shape != phibar.phi.shape:
        raise ValueError(
            f"dimension mismatch: {phi.phi.shape} vs {phibar.phi.shape}"
        )


def _continuous_gap_table(
    phi: np.ndarray, phibar: np.ndarray, X: np.ndarray, time_grid
) -> np.ndarray:
    """Per-(t, sample) normalized trajectory gaps for unit columns X."""
    out = np.zeros((len(time_grid), X.shape[1]))
    for row, t in enumerate(time_grid):
        E = expm(phi, t)
        Eb = expm(phibar, t)
        scale = max(1.0, float(np.linalg.norm(E)), float(np.linalg.norm(Eb)))
        out[row] = np.linalg.norm((E - Eb) @ X, axis=0) / scale
    return out


def _discrete_gaps(
    phi: np.ndarray, phibar: np.ndarray, X: np.ndarray, power_range: int
) -> np.ndarray:
    """Per-sample max over k <= power_range of ||(Phi^k - Phibar^k) x||,
    normalized by max(1, ||Phi||^k) with the larger of the two norms."""
    nrm = max(
        float(np.linalg.norm(phi, 2)), float(np.linalg.norm(phibar, 2))
    )
    gaps = np.zeros(X.shape[1])
    P = X.astype(float, copy=True)
    Pb = X.astype(float, copy=True)
    for k in range(1, power_range + 1):
        P = phi @ P
        Pb = phibar @ Pb
        denom = max(1.0, nrm**k)
        gaps = np.maximum(gaps, np.linalg.norm(P - Pb, axis=0) / denom)
    return gaps


def _gap_columns(
    phi: NetworkSystem,
    phibar: NetworkSystem,
    X: np.ndarray,
    cfg: OracleConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """(per-sample gap, per-t continuous max over samples) for unit columns."""
    m = phi.phi.shape[0]
    K = cfg.power_range if cfg.power_range is not None else 2 * m
    table = _continuous_gap_table(phi.phi, phibar.phi, X, cfg.time_grid)
    gaps = np.maximum(
        table.max(axis=0), _discrete_gaps(phi.phi, phibar.phi, X, K)
    )
    return gaps, table.max(axis=1)


def trajectory_gap(
    phi: NetworkSystem,
    phibar: NetworkSystem,
    x0,
    cfg: OracleConfig | None = None,
) -> float:
    """Worst normalized divergence of the two natural responses from x0:
    the larger of the time-grid exponential check and the matrix-power
    check.  Zero (up to roundoff) exactly on indiscernible states."""
    cfg = cfg or OracleConfig()
    _check_pair(phi, phibar)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != phi.phi.shape[0]:
        raise ValueError(
            f"dimension mismatch: state has {x0.shape[0]} entries, "
            f"system has {phi.phi.shape[0]}"
        )
    nx = np.linalg.norm(x0)
    if nx == 0:
        raise ValueError("x0 must be nonzero")
    gaps, _ = _gap_columns(phi, phibar, (x0 / nx)[:, None], cfg)
    return float(gaps[0])


@dataclass(frozen=True)
class ValidationSummary:
    """Outcome of sampling a candidate indiscernible subspace against the
    trajectory oracle.  Inside samples must stay below rel_tol; samples
    with a component outside the subspace must exceed it."""

    rel_tol: float
    seed: int
    inside_total: int
    inside_pass: int
    inside_worst_gap: float
    outside_total: int
    outside_pass: int
    outside_worst_gap: float | None
    continuous_trace: tuple[tuple[float, float], ...]

    @property
    def passed(self) -> bool:
        return (
            self.inside_pass == self.inside_total
            and self.outside_pass == self.outside_total
        )


def _unit_columns(cols: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(cols, axis=0)
    if np.any(norms <= 1e-12):
        raise ValueError("degenerate sample draw")
    return cols / norms


def validate_subspace(
    phi: NetworkSystem,
    phibar: NetworkSystem,
    V: Subspace,
    cfg: OracleConfig | None = None,
) -> ValidationSummary:
    """Draw random unit states inside V (gap must be <= rel_tol) and unit
    states with an equal-weight component in V's orthocomplement (gap must
    exceed rel_tol), and report pass/fail counts with the worst gaps."""
    cfg = cfg or OracleConfig()
    _check_pair(phi, phibar)
    m = phi.phi.shape[0]
    if V.ambient_dim != m:
        raise ValueError(
            f"dimension mismatch: subspace ambient {V.ambient_dim}, system {m}"
        )
    rng = np.random.default_rng(cfg.seed)
    s = cfg.sample_count
    Q = V.basis
    if np.iscomplexobj(Q):
        if np.max(np.abs(Q.imag), initial=0.0) < 1e-12:
            Q = Q.real.copy()
        else:
            raise ValueError("validation expects a real subspace basis")

    samples: list[np.ndarray] = []
    inside_total = 0
    if V.dim > 0:
        inside = _unit_columns(Q @ rng.standard_normal((V.dim, s)))
        samples.append(inside)
        inside_total = s

    outside_total = 0
    if V.dim < m:
        Z = rng.standard_normal((m, s))
        U = _unit_columns(Z - Q @ (Q.conj().T @ Z)) if V.dim else _unit_columns(Z)
        if V.dim > 0:
            mix = _unit_columns(Q @ rng.standard_normal((V.dim, s)))
            outside = _unit_columns(U + mix)
        else:
            outside = U
        samples.append(outside)
        outside_total = s

    if not samples:
        raise ValueError("subspace admits neither inside nor outside samples")
    X = np.hstack(samples)
    gaps, trace = _gap_columns(phi, phibar, X, cfg)

    in_gaps = gaps[:inside_total]
    out_gaps = gaps[inside_total:]
    return ValidationSummary(
        rel_tol=cfg.rel_tol,
        seed=cfg.seed,
        inside_total=inside_total,
        inside_pass=int(np.sum(in_gaps <= cfg.rel_tol)),
        inside_worst_gap=float(in_gaps.max()) if inside_total else 0.0,
        outside_total=outside_total,
        outside_pass=int(np.sum(out_gaps > cfg.rel_tol)),
        outside_worst_gap=float(out_gaps.min()) if outside_total else None,
        continuous_trace=tuple(
            (float(t), float(gv)) for t, gv in zip(cfg.time_grid, trace)
        ),
    )
