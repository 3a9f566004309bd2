"""Shared fixtures, random algebra generators and independent oracles.

The oracles here deliberately avoid the library's decision paths: the
Killing form is rebuilt from adjoint matrices, common eigenvectors are
found by enumerating eigenspace intersections of every basis matrix
(no derived-algebra reduction), and existence is decided by testing
candidate witnesses directly against the Koszul identity.
"""

from __future__ import annotations

import numpy as np

from realcalc import cncalc, liealg
from realcalc.matlin import DEFAULT_TOL, Tolerance

# ---------------------------------------------------------------------------
# Concrete algebras


def su2_mats() -> list[np.ndarray]:
    return [
        np.array([[0, 1j], [1j, 0]]),
        np.array([[0, 1], [-1, 0]], dtype=complex),
        np.array([[1j, 0], [0, -1j]]),
    ]


def su4_family() -> dict[str, list[np.ndarray]]:
    """The three su(4) subalgebras built from doubled/cornered su(2)."""
    s = su2_mats()
    Z = np.zeros((2, 2), dtype=complex)
    I2 = np.eye(2, dtype=complex)
    d0 = np.block([[1j * I2, Z], [Z, -1j * I2]])
    dj = [np.block([[m, Z], [Z, m]]) for m in s]
    dpj = [np.block([[Z, Z], [Z, m]]) for m in s]
    return {
        "ga": dpj,
        "gb": [d0] + dj,
        "gc": [d0] + dpj,
        "d0": d0,
        "dj": dj,
        "dpj": dpj,
    }


def su_basis(N: int) -> list[np.ndarray]:
    """Standard basis of su(N): pair rotations, pair phases, Cartan."""
    out = []
    for i in range(N):
        for j in range(i + 1, N):
            a = np.zeros((N, N), dtype=complex)
            a[i, j], a[j, i] = 1.0, -1.0
            out.append(a)
            b = np.zeros((N, N), dtype=complex)
            b[i, j] = b[j, i] = 1j
            out.append(b)
    for k in range(N - 1):
        c = np.zeros((N, N), dtype=complex)
        c[k, k], c[k + 1, k + 1] = 1j, -1j
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# Randomized closed subalgebras of su(N)


def random_unitary(rng: np.random.Generator, N: int) -> np.ndarray:
    z = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def conjugate(mats: list[np.ndarray], U: np.ndarray) -> list[np.ndarray]:
    return [U.conj().T @ D @ U for D in mats]


def mix_basis(rng: np.random.Generator, mats: list[np.ndarray]) -> list[np.ndarray]:
    """Replace the basis by a well-conditioned random real combination."""
    n = len(mats)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    scale = np.diag(rng.uniform(0.5, 2.0, size=n))
    T = q @ scale
    stack = np.array(mats)
    return list(np.einsum("ai,irs->ars", T, stack))


def _embed(mats: list[np.ndarray], N: int, offset: int) -> list[np.ndarray]:
    out = []
    k = mats[0].shape[0]
    for m in mats:
        big = np.zeros((N, N), dtype=complex)
        big[offset : offset + k, offset : offset + k] = m
        out.append(big)
    return out


def _cartan_subspace(rng: np.random.Generator, N: int, m: int) -> list[np.ndarray]:
    basis = su_basis(N)[-(N - 1) :]
    q, _ = np.linalg.qr(rng.standard_normal((N - 1, N - 1)))
    coeffs = q[:m]
    stack = np.array(basis)
    return list(np.einsum("ai,irs->ars", coeffs, stack))


def _balancing_center(N: int, offset: int, k: int) -> np.ndarray:
    """Trace-free diagonal commuting with the su(k) block at offset."""
    diag = np.full(N, -k, dtype=complex)
    diag[offset : offset + k] = N - k
    return 1j * np.diag(diag)


def random_subalgebra(
    rng: np.random.Generator, sizes=(2, 3, 4, 5)
) -> tuple[str, list[np.ndarray]]:
    """One random closed subalgebra of su(N), N drawn from sizes.

    Kinds: the full algebra, Cartan (abelian) subspaces, corner block
    embeddings with or without a balancing center, doubled su(2)
    embeddings with or without center, and two-block direct sums. The
    result is conjugated by a random unitary and re-expressed in a
    random well-conditioned basis, so every structural computation runs
    on a generic presentation.
    """
    N = int(rng.choice(sizes))
    kinds = ["full", "cartan", "block"]
    if N >= 3:
        kinds += ["block_center"]
    if N >= 4:
        kinds += ["double", "double_center", "two_blocks"]
    kind = str(rng.choice(kinds))
    su2 = su2_mats()
    if kind == "full":
        mats = su_basis(N)
    elif kind == "cartan":
        m = int(rng.integers(1, N))
        mats = _cartan_subspace(rng, N, m)
    elif kind == "block":
        k = int(rng.integers(2, N + 1))
        offset = int(rng.integers(0, N - k + 1))
        mats = _embed(su_basis(k), N, offset)
    elif kind == "block_center":
        k = int(rng.integers(2, N))
        offset = int(rng.integers(0, N - k + 1))
        mats = _embed(su_basis(k), N, offset) + [_balancing_center(N, offset, k)]
    elif kind == "double":
        mats = [_embed([m], N, 0)[0] + _embed([m], N, 2)[0] for m in su2]
    elif kind == "double_center":
        doubled = [_embed([m], N, 0)[0] + _embed([m], N, 2)[0] for m in su2]
        diag = np.full(N, -4, dtype=complex)
        diag[:4] = N - 4
        if N == 4:
            diag = np.array([1, 1, -1, -1], dtype=complex)
        mats = doubled + [1j * np.diag(diag)]
    else:  # two_blocks
        k = 2 if N == 4 else int(rng.integers(2, N - 1))
        mats = _embed(su_basis(k), N, 0) + _embed(su_basis(N - k), N, k)
    U = random_unitary(rng, N)
    return f"{kind}-su{N}", mix_basis(rng, conjugate(mats, U))


def random_trivial_data(rng: np.random.Generator, sizes=(2, 3)):
    """Trivial projection over a random subalgebra with a random block metric.

    The metric blocks are hermitian, symmetric in their indices and made
    invertible by a diagonal shift, so the grid of inverse blocks is the
    blockwise inverse of the stacked matrix.
    """
    from realcalc import projcalc

    label, mats = random_subalgebra(rng, sizes=sizes)
    basis = liealg.LieBasis(mats)
    f = liealg.structure_constants(basis)
    n, N = basis.n, basis.N
    big = np.zeros((n * N, n * N), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            g = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
            block = 0.5 * (g + g.conj().T)
            big[i * N : (i + 1) * N, j * N : (j + 1) * N] = block
            big[j * N : (j + 1) * N, i * N : (i + 1) * N] = block
    big += (np.linalg.norm(big, 2) + 1.0) * np.eye(n * N)
    inv = np.linalg.inv(big)
    h = big.reshape(n, N, n, N).transpose(0, 2, 1, 3)
    h_inv = inv.reshape(n, N, n, N).transpose(0, 2, 1, 3)
    p = np.einsum("ki,ab->kiab", np.eye(n), np.eye(N, dtype=complex))
    data = projcalc.ProjectiveCalculusData(basis, f, p, h, h_inv)
    return label, data


# ---------------------------------------------------------------------------
# Independent oracles


def killing_by_ad(f: np.ndarray) -> np.ndarray:
    """Killing matrix from explicit adjoint matrices, tr(ad_i ad_j)."""
    n = f.shape[0]
    ads = [f[:, i, :] for i in range(n)]
    B = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            B[i, j] = np.trace(ads[i] @ ads[j]).real
    return B


def _left_eigenspaces(D: np.ndarray, tol: Tolerance) -> list[tuple[complex, np.ndarray]]:
    """Left eigenspaces of an antihermitian matrix via the hermitian solver."""
    herm = 1j * D
    herm = 0.5 * (herm + herm.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    width = 1e-6 * (float(vals[-1] - vals[0]) + 1.0)
    out = []
    start = 0
    for stop in range(1, len(vals) + 1):
        if stop == len(vals) or vals[stop] - vals[stop - 1] > width:
            out.append((-1j * float(np.mean(vals[start:stop])), vecs[:, start:stop].conj().T))
            start = stop
    return out


def intersect_rowspans(A: np.ndarray, B: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal row basis of rowspan(A) & rowspan(B).

    A row x = c A lies in rowspan(B) exactly when x annihilates the
    projector complement I - B^dagger B, so the coefficient rows c form
    the left nullspace of A (I - B^dagger B). With orthonormal inputs
    the combined rows are orthonormal as well.
    """
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=complex)
    N = A.shape[1]
    K = A @ (np.eye(N) - B.conj().T @ B)
    u, s, _ = np.linalg.svd(K, full_matrices=True)
    cutoff = tol.cut(s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    coeff = u[:, rank:].conj().T
    return coeff @ A


def eigenspace_chains(mats: list[np.ndarray], tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """All maximal common eigenspaces, by direct eigenspace intersection.

    Enumerates, matrix by matrix, every chain of eigenspace choices with
    a nonzero intersection. The result is empty exactly when the family
    has no common (left) eigenvector.
    """
    N = mats[0].shape[0]
    spaces = [np.eye(N, dtype=complex)]
    for D in mats:
        eig = _left_eigenspaces(D, tol)
        refined = []
        for S in spaces:
            for _, rows in eig:
                inter = intersect_rowspans(S, rows, tol)
                if inter.shape[0] > 0:
                    refined.append(inter)
        spaces = refined
        if not spaces:
            return []
    return spaces


def oracle_existence(mats: list[np.ndarray], x: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> str:
    """Desk-scale existence decision by exhaustive witness testing.

    Candidates: every common eigenspace from direct intersection
    enumeration crossed with a basis of the mu solution space (solved
    from the stacked bracket system with one SVD). Each candidate is
    tested against torsion, the connection-calculus condition, metric
    compatibility and the Koszul identity; existence holds when some
    candidate passes everything.
    """
    basis = liealg.LieBasis(mats, tol)
    f = liealg.structure_constants(basis, tol)
    pre = cncalc.MetricPreCalculus(basis, x)
    chains = eigenspace_chains(mats, tol)
    if not chains:
        return cncalc.NONEXISTENT
    n = basis.n
    system = f.f.transpose(1, 2, 0).reshape(n * n, n)
    _, s, vh = np.linalg.svd(system, full_matrices=True)
    cutoff = tol.cut(s[0] if s.size else 0.0)
    mu_basis = vh[int(np.sum(s > cutoff)) :]
    if mu_basis.shape[0] == 0:
        return cncalc.NONEXISTENT
    scale = max(1.0, max(float(np.max(np.abs(D))) for D in mats))
    thr = 100.0 * tol.cut(scale * max(1.0, abs(x)))
    for space in chains:
        v0 = space[0] / np.linalg.norm(space[0])
        lambdas = np.array([(v0.conj() @ (v0 @ D)).imag for D in mats])
        conn = cncalc.Connection(lambdas)
        for mu in mu_basis:
            anchor = cncalc.AnchorMap(v0, mu, tol)
            torsion_norm = float(
                np.max(np.linalg.norm(cncalc.torsion(pre, conn, f, anchor), axis=2))
            )
            if torsion_norm > thr:
                continue
            if not cncalc.rcc_check(conn, basis, anchor, tol):
                continue
            if cncalc.metric_compat_residual(pre, conn, 16, tol) > thr:
                continue
            if cncalc.koszul_residual(pre, conn, f, anchor) > thr:
                continue
            return cncalc.EXISTS
    return cncalc.NONEXISTENT
