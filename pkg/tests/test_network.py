"""Network assembly, modal matrices, invariant modes, modal eigenstructure."""

import numpy as np
import pytest

from netdiscern import (
    NodeDynamics,
    assemble_transition,
    eig,
    laplacian,
    modal_eigenstructure,
    modal_matrix,
    network_invariant_modes,
    subspace_contains,
    sync_manifold,
)
from netdiscern.example import EXAMPLE_A, EXAMPLE_B

from conftest import random_graph

P2_LAPLACIAN = np.array([[1.0, -1.0], [-1.0, 1.0]])


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def test_assembly_entry_formula():
    # phi[(p)n + r, (q)n + s] == (p == q) A[r,s] - L[p,q] B[r,s], exactly
    rng = np.random.default_rng(31)
    N, n = 4, 3
    A = rng.standard_normal((n, n))
    B = rng.standard_normal((n, n))
    L = laplacian(random_graph(rng, N))
    phi = assemble_transition(NodeDynamics(A, B), L).phi
    for _ in range(1000):
        p, q = rng.integers(N, size=2)
        r, s = rng.integers(n, size=2)
        expected = (p == q) * A[r, s] - L[p, q] * B[r, s]
        assert phi[p * n + r, q * n + s] == expected


def test_single_node_network_is_node_dynamics():
    dyn = NodeDynamics(EXAMPLE_A, EXAMPLE_B)
    sys = assemble_transition(dyn, np.zeros((1, 1)))
    assert np.array_equal(sys.phi, EXAMPLE_A)


def test_zero_coupling_gives_block_diagonal():
    A = np.diag([2.0, 3.0])
    dyn = NodeDynamics(A, np.zeros((2, 2)))
    L = laplacian(random_graph(np.random.default_rng(7), 3))
    sys = assemble_transition(dyn, L)
    assert np.array_equal(sys.phi, np.kron(np.eye(3), A))
    spec = eig(sys.phi)
    assert spec.multiplicity_of(2.0) == 3
    assert spec.multiplicity_of(3.0) == 3


def test_demo_network_spectrum_contains_sync_values(demo):
    values = eig(demo.phi.phi).values
    for lam in (0.0, 1.0, 7.0):
        assert np.min(np.abs(values - lam)) < 1e-9


def test_reconstruction_is_exact(demo):
    rebuilt = np.kron(np.eye(4), demo.dyn.A) - np.kron(demo.L, demo.dyn.B)
    assert np.array_equal(demo.phi.phi, rebuilt)


def test_trace_identity():
    rng = np.random.default_rng(33)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        N = int(rng.integers(2, 6))
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((n, n))
        L = laplacian(random_graph(rng, N))
        phi = assemble_transition(NodeDynamics(A, B), L).phi
        expected = N * np.trace(A) - np.trace(L) * np.trace(B)
        assert abs(np.trace(phi) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_assembly_rejects_mismatched_dims():
    with pytest.raises(ValueError):
        NodeDynamics(EXAMPLE_A, np.zeros((2, 2)))
    with pytest.raises(ValueError):
        assemble_transition(NodeDynamics(EXAMPLE_A, EXAMPLE_B), np.ones((2, 3)))


# ---------------------------------------------------------------------------
# modal matrices
# ---------------------------------------------------------------------------


def test_modal_matrix_at_zero_is_a(demo):
    assert np.array_equal(modal_matrix(demo.dyn, 0.0), EXAMPLE_A)
    # char poly of A: lambda^3 - 8 lambda^2 + 7 lambda, roots {0, 1, 7}
    assert np.allclose(np.poly(EXAMPLE_A), [1.0, -8.0, 7.0, 0.0], atol=1e-12)
    values = np.sort(eig(EXAMPLE_A).values.real)
    assert np.allclose(values, [0.0, 1.0, 7.0], atol=1e-9)


def test_modal_matrix_at_one(demo):
    expected = np.array([[6.0, -1.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
    assert np.array_equal(modal_matrix(demo.dyn, 1.0), expected)


def test_modal_matrix_general_alpha(demo):
    # closed form [[7-a, -a, a], [0, a, 1-a], [1, 0, 1]]
    for a in (0.5, 3.0, 2.0 - np.sqrt(2.0)):
        expected = np.array(
            [[7.0 - a, -a, a], [0.0, a, 1.0 - a], [1.0, 0.0, 1.0]]
        )
        assert np.allclose(modal_matrix(demo.dyn, a), expected, atol=1e-14)
    complex_case = modal_matrix(demo.dyn, 1.0 + 2.0j)
    assert np.iscomplexobj(complex_case)
    assert complex_case[0, 0] == 7.0 - (1.0 + 2.0j)


# ---------------------------------------------------------------------------
# network-invariant modes
# ---------------------------------------------------------------------------


def test_demo_dynamics_have_one_invariant_mode(demo):
    modes = network_invariant_modes(demo.dyn)
    assert len(modes) == 1
    mode = modes[0]
    assert abs(mode.value - 1.0) < 1e-10
    target = np.array([0.0, 1.0, 1.0]) / np.sqrt(2.0)
    assert abs(abs(np.dot(mode.vector, target)) - 1.0) < 1e-10
    assert np.linalg.norm(EXAMPLE_A @ mode.vector - mode.vector) <= 1e-10
    assert np.linalg.norm(EXAMPLE_B @ mode.vector) <= 1e-10


def test_invertible_b_has_no_invariant_modes():
    dyn = NodeDynamics(np.array([[1.0, 2.0], [3.0, 4.0]]), np.eye(2))
    assert network_invariant_modes(dyn) == []


def test_zero_b_makes_every_eigenpair_invariant():
    A = np.diag([2.0, 5.0, -1.0])
    modes = network_invariant_modes(NodeDynamics(A, np.zeros((3, 3))))
    assert sorted(m.value.real for m in modes) == [-1.0, 2.0, 5.0]


def test_invariant_mode_spans_network_eigenvectors(demo):
    # a (x) v is an eigenvector of the assembled network for ANY Laplacian
    rng = np.random.default_rng(34)
    mode = network_invariant_modes(demo.dyn)[0]
    for _ in range(20):
        L = laplacian(random_graph(rng, 4))
        phi = assemble_transition(demo.dyn, L).phi
        a = rng.standard_normal(4)
        x = np.kron(a, mode.vector)
        resid = np.linalg.norm(phi @ x - mode.value * x)
        assert resid <= 1e-9 * np.linalg.norm(phi, 2) * np.linalg.norm(x)


# ---------------------------------------------------------------------------
# sync manifold
# ---------------------------------------------------------------------------


def test_sync_manifold_dimensions():
    S = sync_manifold(4, 3)
    assert S.ambient_dim == 12
    assert S.dim == 3


def test_sync_manifold_single_node_is_full():
    S = sync_manifold(1, 3)
    assert S.dim == 3 == S.ambient_dim


def test_sync_manifold_contains_uniform_states():
    S = sync_manifold(4, 3)
    x = np.kron(np.ones(4), np.array([0.0, 1.0, 1.0]))
    assert subspace_contains(S, x / np.linalg.norm(x), 1e-10)


# ---------------------------------------------------------------------------
# modal eigenstructure
# ---------------------------------------------------------------------------


def test_demo_modal_eigenstructure(demo):
    ms = modal_eigenstructure(demo.dyn, demo.L)
    assert len(ms.blocks) == 4
    for block in ms.blocks:
        assert np.min(np.abs(block.modal.values - 1.0)) < 1e-9
    # every pair of distinct alphas collides (at least at lambda = 1)
    pairs = {(round(ai, 6), round(aj, 6)) for ai, aj, _ in ms.cross_block_collisions}
    assert len(pairs) == 6
    assert all(
        any(abs(lam - 1.0) < 1e-6 for ai2, aj2, lam in ms.cross_block_collisions
            if (round(ai2, 6), round(aj2, 6)) == pair)
        for pair in pairs
    )
    assert ms.complete  # blocks are diagonalizable, the Kronecker family spans
    assert ms.kron_rank == 12
    assert eig(demo.phi.phi).multiplicity_of(1.0) == 4


def test_decoupled_modal_structure():
    dyn = NodeDynamics(np.diag([2.0, 3.0]), np.zeros((2, 2)))
    L = laplacian(random_graph(np.random.default_rng(35), 3))
    ms = modal_eigenstructure(dyn, L)
    for block in ms.blocks:
        assert np.allclose(np.sort(block.modal.values.real), [2.0, 3.0], atol=1e-9)
    n_blocks = len(ms.blocks)
    assert len(ms.cross_block_collisions) >= n_blocks * (n_blocks - 1)  # both values collide
    assert ms.complete


def test_disjoint_modal_spectra():
    dyn = NodeDynamics(np.diag([1.0, 10.0]), np.eye(2))
    ms = modal_eigenstructure(dyn, P2_LAPLACIAN)
    assert [round(b.alpha, 9) for b in ms.blocks] == [0.0, 2.0]
    assert np.allclose(np.sort(ms.blocks[0].modal.values.real), [1.0, 10.0])
    assert np.allclose(np.sort(ms.blocks[1].modal.values.real), [-1.0, 8.0])
    assert ms.cross_block_collisions == ()
    assert ms.min_cross_gap >= 2.0 - 1e-9
    assert ms.complete


def test_defective_block_reported():
    dyn = NodeDynamics(np.array([[1.0, 1.0], [0.0, 1.0]]), np.zeros((2, 2)))
    ms = modal_eigenstructure(dyn, P2_LAPLACIAN)
    assert not ms.complete
    assert len(ms.deficient_alphas) == 2
    assert ms.kron_rank == 2  # one true eigenvector per Jordan block


def test_kronecker_eigenvector_identity():
    # Phi (v (x) w) == lambda (v (x) w) for Laplacian eigenpair (alpha, v)
    # and modal eigenpair (lambda, w)
    rng = np.random.default_rng(36)
    for _ in range(20):
        N = int(rng.integers(2, 5))
        n = int(rng.integers(1, 4))
        dyn = NodeDynamics(rng.standard_normal((n, n)), rng.standard_normal((n, n)))
        L = laplacian(random_graph(rng, N))
        phi = assemble_transition(dyn, L).phi
        scale = np.linalg.norm(phi, 2)
        alphas, V = np.linalg.eigh(L)
        for i, alpha in enumerate(alphas):
            w_vals, W = np.linalg.eig(modal_matrix(dyn, alpha))
            for j, lam in enumerate(w_vals):
                x = np.kron(V[:, i], W[:, j])
                assert np.linalg.norm(phi @ x - lam * x) <= 1e-9 * max(scale, 1.0)


def test_modal_eigenstructure_requires_symmetric_laplacian(demo):
    with pytest.raises(ValueError):
        modal_eigenstructure(demo.dyn, np.array([[1.0, -1.0], [0.0, 0.0]]))
