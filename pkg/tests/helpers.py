"""Shared random-state generators and brute-force oracles for the test suite."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize

from negentropy.quantum import psd_sqrt


# ---------------------------------------------------------------------------
# random objects
# ---------------------------------------------------------------------------

def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt-type random mixed state of the given rank."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_channel_on_second(rho: np.ndarray, ds: int, dm: int, rng: np.random.Generator) -> np.ndarray:
    """Apply a random Stinespring channel (memory ⊗ qubit ancilla, Haar unitary, trace ancilla)."""
    from negentropy.quantum import haar_unitary

    u = haar_unitary(dm * 2, rng)
    anc = np.zeros((2, 2), complex)
    anc[0, 0] = 1.0
    big = np.kron(rho, anc)  # S, M, E
    full_u = np.kron(np.eye(ds), u)
    out = full_u @ big @ full_u.conj().T
    out = out.reshape(ds, dm, 2, ds, dm, 2)
    return np.einsum("abecde->abcd", out).reshape(ds * dm, ds * dm)


# ---------------------------------------------------------------------------
# Bloch-grid oracles for a qubit memory
# ---------------------------------------------------------------------------

def _bloch(v) -> np.ndarray:
    """Qubit state with Bloch vector ``v``; vectors outside the ball are projected onto it."""
    x, y, z = np.asarray(v, float)
    r = math.sqrt(x * x + y * y + z * z)
    if r > 1:
        x, y, z = x / r, y / r, z / r
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


def _grid(step: float = 0.25, n_sphere: int = 200):
    """Cubic grid inside the Bloch ball plus a Fibonacci lattice on its surface."""
    ax = np.arange(-1.0, 1.0 + 1e-9, step)
    for x in ax:
        for y in ax:
            for z in ax:
                if x * x + y * y + z * z <= 1 + 1e-12:
                    yield np.array([x, y, z])
    golden = math.pi * (3 - math.sqrt(5))
    for k in range(n_sphere):
        z = 1 - 2 * (k + 0.5) / n_sphere
        r = math.sqrt(1 - z * z)
        yield np.array([r * math.cos(golden * k), r * math.sin(golden * k), z])
    for v in np.eye(3):
        yield v
        yield -v


def _search(f) -> float:
    """Grid search followed by Nelder-Mead polishing from the best few grid points."""
    pts = sorted(_grid(), key=f)[:3]
    best = f(pts[0])
    for x0 in pts:
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-15, "maxiter": 6000})
        best = min(best, res.fun)
    return best


def _min_scale(rho: np.ndarray, ds: int, tau: np.ndarray) -> float:
    """Smallest t with t (1 ⊗ tau) >= rho.

    Full-rank ``tau`` has the closed form ``lambda_max(op^{-1/2} rho op^{-1/2})``;
    rank-deficient ``tau`` on the sphere falls back to bisection.
    """
    op = np.kron(np.eye(ds), tau)
    w, v = np.linalg.eigh(op)
    if w[0] > 1e-6:
        isq = (v / np.sqrt(w)) @ v.conj().T
        return float(np.linalg.eigvalsh(isq @ rho @ isq)[-1])

    def ok(t):
        return np.linalg.eigvalsh(t * op - rho)[0] >= -1e-13

    hi = 1.0
    while not ok(hi):
        hi *= 2
        if hi > 1e8:
            return math.inf
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def bloch_oracle_hmin(rho: np.ndarray, ds: int) -> float:
    """``Hmin(S|O)`` for a qubit O: minimize the scale of ``1 ⊗ tau`` over the Bloch ball."""
    return -math.log2(_search(lambda v: _min_scale(rho, ds, _bloch(v))))


def bloch_oracle_hmax(rho: np.ndarray, ds: int) -> float:
    """``Hmax(S|O) = max_tau log2 F(rho, 1 ⊗ tau)^2`` for a qubit O over the Bloch ball."""
    sq = psd_sqrt(rho)
    return 2 * math.log2(-_search(lambda v: -_root_fid(sq, ds, _bloch(v))))


def _root_fid(sq_rho: np.ndarray, ds: int, tau: np.ndarray) -> float:
    s = np.kron(np.eye(ds), psd_sqrt(tau))
    return float(np.sum(np.linalg.svd(sq_rho @ s, compute_uv=False)))


# ---------------------------------------------------------------------------
# classical smoothing oracle
# ---------------------------------------------------------------------------

def classical_smoothing_oracle(p: np.ndarray, eps: float, starts: int = 12, seed: int = 0) -> float:
    """Smooth max-entropy of a joint table ``p[s, o]`` by direct constrained optimization.

    Variables ``x = sqrt(q)`` with ``q`` subnormalized and diagonal; the purified
    distance constraint ``<sqrt p, x> >= sqrt(1 - eps^2)`` is the generalized
    fidelity condition for diagonal states.
    """
    p = np.asarray(p, float)
    if p.ndim == 1:
        p = p[:, None]
    w = np.sqrt(p.ravel())
    shape = p.shape
    c = math.sqrt(1 - eps**2)

    def obj(x):
        cols = x.reshape(shape).sum(axis=0)
        return float(np.sum(cols**2))

    cons = [
        {"type": "ineq", "fun": lambda x: float(w @ x) - c},
        {"type": "ineq", "fun": lambda x: 1.0 - float(x @ x)},
    ]
    rng = np.random.default_rng(seed)
    best = obj(w)
    for k in range(starts):
        x0 = w if k == 0 else np.abs(w + 0.3 * rng.normal(size=w.size))
        x0 = x0 / max(np.linalg.norm(x0), 1e-12)
        res = minimize(obj, x0, method="SLSQP", bounds=[(0, None)] * w.size, constraints=cons,
                       options={"ftol": 1e-15, "maxiter": 1000})
        if res.success and float(w @ res.x) >= c - 1e-9 and res.x @ res.x <= 1 + 1e-9:
            best = min(best, res.fun)
    return math.log2(best)


def binary_entropy(p: float) -> float:
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)

