"""Dense linear-algebra kernels and tolerance-aware subspace arithmetic.

Everything here operates on small dense matrices (desk scale, a few hundred
rows at most) and favors reproducibility: spectra are clustered at explicit
tolerances, subspaces carry orthonormal bases, and every rank decision goes
through a single relative singular-value threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Default tolerances.  Matrices in this problem domain are tiny and well
# conditioned, so conservative fixed relative tolerances are reproducible.
RANK_TOL = 1e-10    # relative singular-value cutoff for rank decisions
ANGLE_TOL = 1e-8    # radians, for subspace containment/equality
RESID_TOL = 1e-8    # eigenpair residual, relative to ||M||_2


def default_cluster_tol(M: np.ndarray) -> float:
    """Eigenvalue clustering width used when none is given."""
    return 1e-8 * max(1.0, float(np.linalg.norm(M, 2)))


def _as_square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


@dataclass(frozen=True)
class Eigenpair:
    """One eigenvalue cluster: representative value, independent unit
    eigenvectors (columns; may be fewer than the multiplicity when the
    matrix is defective), and the algebraic multiplicity."""

    value: complex
    vectors: np.ndarray
    algebraic_multiplicity: int


@dataclass(frozen=True)
class Spectrum:
    """Full spectrum of a square matrix, clustered at ``cluster_tol`` and
    sorted lexicographically by (real, imaginary) part."""

    eigenpairs: tuple[Eigenpair, ...]
    cluster_tol: float

    @property
    def values(self) -> np.ndarray:
        """Distinct (clustered) eigenvalues."""
        return np.array([p.value for p in self.eigenpairs])

    def values_with_multiplicity(self) -> np.ndarray:
        out: list[complex] = []
        for p in self.eigenpairs:
            out.extend([p.value] * p.algebraic_multiplicity)
        return np.array(out)

    def multiplicity_of(self, value: complex, tol: float | None = None) -> int:
        tol = self.cluster_tol if tol is None else tol
        for p in self.eigenpairs:
            if abs(p.value - value) <= tol:
                return p.algebraic_multiplicity
        return 0

    @property
    def dimension(self) -> int:
        return sum(p.algebraic_multiplicity for p in self.eigenpairs)


def _cluster_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clustering of complex values at absolute tolerance."""
    n = len(values)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) < tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-magnitude entry is real positive."""
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    if abs(pivot) == 0:
        return v
    w = v * (abs(pivot) / pivot) + 0.0  # "+ 0.0" clears negative zeros
    if not np.iscomplexobj(v):
        return w.real
    return w


def eig(M, cluster_tol: float | None = None) -> Spectrum:
    """Full spectrum of a square matrix with eigenvalues clustered into
    multiplicities.

    Hermitian inputs go through the symmetric solver for exactness; every
    other matrix is treated over the complex field (A - alpha*B can have
    complex eigenvalues even for real inputs).  Defective clusters report
    fewer independent vectors than their multiplicity instead of
    fabricating generalized eigenvectors.
    """
    M = _as_square(M)
    tol = default_cluster_tol(M) if cluster_tol is None else float(cluster_tol)
    scale = max(1.0, float(np.linalg.norm(M, 2)))

    if np.array_equal(M, M.conj().T):
        try:
            w, V = np.linalg.eigh(M)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise np.linalg.LinAlgError(f"eigensolver did not converge: {exc}")
        w = w.astype(complex)
    else:
        try:
            w, V = np.linalg.eig(M)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise np.linalg.LinAlgError(f"eigensolver did not converge: {exc}")

    pairs = []
    for idx in _cluster_indices(w, tol):
        rep = complex(np.mean(w[idx]))
        if abs(rep.imag) < tol:
            rep = complex(rep.real, 0.0)
        cols = V[:, idx]
        # Orthonormalize within the cluster; rank-truncation drops the
        # near-duplicate directions a defective matrix produces.
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        keep = u[:, s > RANK_TOL * s[0]] if s.size and s[0] > 0 else u[:, :0]
        good = []
        for c in range(keep.shape[1]):
            v = keep[:, c]
            if np.linalg.norm(M @ v - rep * v) <= RESID_TOL * scale:
                good.append(canonical_sign(v))
        if not good:
            # fall back to the best raw eigenvector of the cluster
            resids = [np.linalg.norm(M @ V[:, i] / np.linalg.norm(V[:, i]) - rep * V[:, i] / np.linalg.norm(V[:, i])) for i in idx]
            v = V[:, idx[int(np.argmin(resids))]]
            good.append(canonical_sign(v / np.linalg.norm(v)))
        vecs = np.column_stack(good)
        if np.iscomplexobj(vecs) and np.max(np.abs(vecs.imag)) < tol:
            vecs = vecs.real.copy()
        pairs.append(Eigenpair(rep, vecs, len(idx)))

    pairs.sort(key=lambda p: (p.value.real, p.value.imag))
    return Spectrum(tuple(pairs), tol)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace represented by an orthonormal column basis."""

    basis: np.ndarray
    tol: float = RANK_TOL

    def __post_init__(self):
        b = np.asarray(self.basis)
        if b.ndim != 2:
            raise ValueError(f"basis must be a 2-D array, got shape {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis entries must be finite")
        if b.shape[1] > b.shape[0]:
            raise ValueError("more basis columns than ambient dimensions")
        if b.shape[1]:
            gram = b.conj().T @ b
            if not np.allclose(gram, np.eye(b.shape[1]), atol=1e-8):
                raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int, tol: float = RANK_TOL) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0)), tol)

    @classmethod
    def full(cls, ambient_dim: int, tol: float = RANK_TOL) -> "Subspace":
        return cls(np.eye(ambient_dim), tol)

    @classmethod
    def from_spanning(cls, columns: np.ndarray, tol: float = RANK_TOL) -> "Subspace":
        """Orthonormalize an arbitrary spanning set (rank-truncated SVD)."""
        cols = np.asarray(columns)
        if cols.ndim == 1:
            cols = cols[:, None]
        if cols.shape[1] == 0:
            return cls.zero(cols.shape[0], tol)
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        if s.size == 0 or s[0] <= 0:
            return cls.zero(cols.shape[0], tol)
        basis = u[:, s > tol * s[0]]
        if np.iscomplexobj(basis) and np.max(np.abs(basis.imag), initial=0.0) < 1e-14:
            basis = basis.real.copy()
        return cls(basis, tol)


def _check_same_ambient(U: Subspace, V: Subspace) -> None:
    if U.ambient_dim != V.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: {U.ambient_dim} vs {V.ambient_dim}"
        )


def kernel(M, tol: float = RANK_TOL) -> Subspace:
    """Orthonormal basis of the null space at relative singular-value
    threshold ``tol * sigma_max``."""
    M = _as_matrix(M)
    ambient = M.shape[1]
    if M.shape[0] == 0:
        return Subspace.full(ambient, tol)
    _, s, vh = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0:
        return Subspace.full(ambient, tol)
    rank = int(np.sum(s > tol * s[0]))
    basis = vh[rank:].conj().T
    if np.iscomplexobj(basis) and np.max(np.abs(basis.imag), initial=0.0) < 1e-14:
        basis = basis.real.copy()
    return Subspace(basis, tol)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    """Orthonormal basis of span(U ∪ V)."""
    _check_same_ambient(U, V)
    tol = max(U.tol, V.tol)
    if U.dim == 0:
        return Subspace(V.basis, tol)
    if V.dim == 0:
        return Subspace(U.basis, tol)
    dtype = np.result_type(U.basis.dtype, V.basis.dtype)
    cols = np.hstack([U.basis.astype(dtype), V.basis.astype(dtype)])
    return Subspace.from_spanning(cols, tol)


def subspace_intersect(U: Subspace, V: Subspace) -> Subspace:
    """U ∩ V via the kernel of stacked complement projectors."""
    _check_same_ambient(U, V)
    tol = max(U.tol, V.tol)
    m = U.ambient_dim
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(m, tol)
    # full-space operands make the complement projector a pure-roundoff
    # matrix, which a relative rank threshold would misread
    if U.dim == m:
        return Subspace(V.basis, tol)
    if V.dim == m:
        return Subspace(U.basis, tol)
    dtype = np.result_type(U.basis.dtype, V.basis.dtype, float)
    eye = np.eye(m, dtype=dtype)
    pu = eye - U.basis @ U.basis.conj().T
    pv = eye - V.basis @ V.basis.conj().T
    return kernel(np.vstack([pu, pv]), tol)


def _residual_sine(container: Subspace, probe: np.ndarray) -> float:
    """Spectral norm of (I - QQ^H) applied to orthonormal probe columns,
    i.e. the sine of the largest principal angle.  Sine-based, so it stays
    accurate for angles far below arccos resolution."""
    if container.dim == 0:
        return 1.0 if probe.shape[1] else 0.0
    q = container.basis
    resid = probe - q @ (q.conj().T @ probe)
    if resid.shape[1] == 0:
        return 0.0
    return float(min(1.0, np.linalg.norm(resid, 2)))


def max_principal_angle(U: Subspace, V: Subspace) -> float:
    """Largest canonical angle between two subspaces (the smaller one is
    measured against its projection onto the other; for equal dimensions
    both directions are taken)."""
    _check_same_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        return 0.0
    if U.dim == V.dim:
        s = max(_residual_sine(U, V.basis), _residual_sine(V, U.basis))
    elif U.dim < V.dim:
        s = _residual_sine(V, U.basis)
    else:
        s = _residual_sine(U, V.basis)
    return float(np.arcsin(s))


def subspaces_equal(U: Subspace, V: Subspace, angle_tol: float = ANGLE_TOL) -> bool:
    _check_same_ambient(U, V)
    return U.dim == V.dim and max_principal_angle(U, V) <= angle_tol


def subspace_contains(U: Subspace, other, angle_tol: float = ANGLE_TOL) -> bool:
    """True iff ``other`` (a Subspace or a single vector) lies within U up
    to ``angle_tol`` radians.  Every subspace contains the zero vector."""
    if isinstance(other, Subspace):
        _check_same_ambient(U, other)
        if other.dim == 0:
            return True
        if other.dim > U.dim:
            return False
        return _residual_sine(U, other.basis) <= angle_tol
    v = np.asarray(other).reshape(-1)
    if v.shape[0] != U.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: {U.ambient_dim} vs {v.shape[0]}"
        )
    nv = np.linalg.norm(v)
    if nv <= 1e-300:
        return True
    return _residual_sine(U, (v / nv)[:, None]) <= angle_tol


def expm(M, t: float = 1.0) -> np.ndarray:
    """Matrix exponential e^{M t} (scaling-and-squaring with a fixed-order
    rational core, via SciPy).  Overflow is reported, never silent."""
    M = _as_square(M)
    with np.errstate(over="ignore"):  # overflow becomes the raise below
        E = scipy.linalg.expm(M * float(t))
    if not np.all(np.isfinite(E)):
        raise OverflowError(
            f"matrix exponential overflowed for ||M t|| = {np.linalg.norm(M * t, 2):.3e}"
        )
    return E


def realify(S: Subspace) -> Subspace:
    """Real form of a conjugation-closed complex subspace: the span of the
    real and imaginary parts of its basis.  Real subspaces pass through."""
    if not np.iscomplexobj(S.basis):
        return S
    cols = np.hstack([S.basis.real, S.basis.imag])
    return Subspace.from_spanning(cols, S.tol)
