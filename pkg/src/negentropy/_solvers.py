"""Small dense convex solvers for conditional min- and max-entropies.

Both solvers return certified two-sided bounds so the reported gap is a
proof, not an estimate:

* min-entropy: ``2^{-Hmin} = min{tr s : 1 ⊗ s >= rho}``. A log-barrier
  Newton method follows the central path; any strictly feasible ``s`` bounds
  the optimum from above and the rescaled barrier gradient ``Y`` (``Y >= 0``,
  ``tr_A Y <= 1``) bounds it from below through ``tr(rho Y)``.
* max-entropy: ``2^{Hmax} = max_s F(rho, 1 ⊗ s)^2`` over density operators
  ``s``. Quasi-Newton ascent on a factor of ``s`` gives the lower bound.
  The map ``s -> F(rho, 1 ⊗ s)`` is concave, so its linearization at the
  final iterate, maximized over the state space (the Frank-Wolfe gap),
  bounds the optimum from above.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .exceptions import SolverError

GAP_TARGET = 1e-6  # hard acceptance threshold on the certified gap (bits)
GAP_AIM = 1e-9  # solvers keep iterating towards this when they can
MAX_ITER = 100_000


@dataclass
class SolveResult:
    value: float  # bits
    sigma: np.ndarray  # optimal operator on the conditioning system
    gap: float  # certified bound on |value - optimum| in bits
    iterations: int


def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of d x d Hermitian matrices."""
    out = []
    for i in range(d):
        e = np.zeros((d, d), complex)
        e[i, i] = 1
        out.append(e)
    s = 1 / math.sqrt(2)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d), complex)
            e[i, j] = e[j, i] = s
            out.append(e)
            e = np.zeros((d, d), complex)
            e[i, j] = -1j * s
            e[j, i] = 1j * s
            out.append(e)
    return np.array(out)


def _tr_a(mat: np.ndarray, da: int, db: int) -> np.ndarray:
    return np.einsum("ajak->jk", mat.reshape(da, db, da, db))


def _lift(sig: np.ndarray, da: int) -> np.ndarray:
    return np.kron(np.eye(da), sig)


def _coeffs(basis: np.ndarray, x: np.ndarray) -> np.ndarray:
    # <E_k, X> for Hermitian X
    return np.einsum("kij,ji->k", basis, x).real


def _chol_ok(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(m)
        return True
    except np.linalg.LinAlgError:
        return False


# ---------------------------------------------------------------------------
# min-entropy
# ---------------------------------------------------------------------------

def _hmin_bounds(rho, sig, w_inv, da, db):
    """Certified (upper, lower) bounds on 2^{-Hmin} from a primal/dual pair."""
    upper = float(np.trace(sig).real)
    y = w_inv
    scale = np.linalg.eigvalsh(_tr_a(y, da, db))[-1]
    lower = float(np.real(np.trace(rho @ y))) / scale
    return upper, lower


def solve_hmin(
    rho: np.ndarray, da: int, db: int, gap_target: float = GAP_TARGET, max_iter: int = MAX_ITER
) -> SolveResult:
    """Barrier method for ``min tr s  s.t.  1_A ⊗ s - rho > 0`` (rho ordered A ⊗ B)."""
    d = da * db
    basis = hermitian_basis(db)
    lifted = np.array([_lift(e, da) for e in basis])
    a = np.array([np.trace(e).real for e in basis])
    lam_max = max(np.linalg.eigvalsh(rho)[-1], 0.0)
    x = (lam_max + 0.1) * a  # sigma = c * identity
    m_dim = d

    def sigma(x):
        return np.einsum("k,kij->ij", x, basis)

    t = m_dim / max(lam_max, 1e-3)
    mu = 10.0
    it = 0
    history = {}
    upper, lower, best_sigma = math.inf, 0.0, None
    prev_gap = math.inf
    while True:
        # centering step
        for _ in range(200):
            it += 1
            if it > max_iter:
                raise SolverError("min-entropy barrier exceeded the iteration cap", history)
            m = _lift(sigma(x), da) - rho
            w = np.linalg.inv(m)
            w = 0.5 * (w + w.conj().T)
            g = t * a - _coeffs(basis, _tr_a(w, da, db))
            z = w @ lifted @ w  # batched W L_k W
            h = np.einsum("kij,lji->kl", z, lifted).real
            h = 0.5 * (h + h.T)
            try:
                step = -np.linalg.solve(h, g)
            except np.linalg.LinAlgError:
                step = -np.linalg.lstsq(h, g, rcond=None)[0]
            dec = float(-g @ step)
            if dec / 2 < 1e-12:
                break
            s = 1.0
            f0 = t * a @ x - np.linalg.slogdet(m)[1]
            accepted = False
            while s > 1e-14:
                xn = x + s * step
                mn = _lift(sigma(xn), da) - rho
                if _chol_ok(mn):
                    fn = t * a @ xn - np.linalg.slogdet(mn)[1]
                    if fn <= f0 - 0.25 * s * dec:
                        accepted = True
                        break
                s *= 0.5
            if not accepted:
                break
            x = xn
        m = _lift(sigma(x), da) - rho
        w = np.linalg.inv(m)
        w = 0.5 * (w + w.conj().T)
        up, lo = _hmin_bounds(rho, sigma(x), w / t, da, db)
        if up < upper:
            upper, best_sigma = up, sigma(x)
        lower = max(lower, lo)
        gap = math.log2(upper / lower) if lower > 0 else math.inf
        history = {"t": t, "upper": upper, "lower": lower, "gap_bits": gap}
        if gap <= GAP_AIM:
            break
        # the dual certificate stops improving once the centering is limited by round-off
        stalled = gap > 0.5 * prev_gap
        prev_gap = min(prev_gap, gap)
        if stalled and gap <= gap_target:
            break
        if m_dim / t < 1e-13 * upper or it > max_iter // 2:
            if gap <= gap_target:
                break
            raise SolverError("min-entropy barrier stalled before reaching target gap", history)
        t *= mu
    sig = best_sigma
    return SolveResult(-math.log2(upper), 0.5 * (sig + sig.conj().T), gap, it)


# ---------------------------------------------------------------------------
# max-entropy
# ---------------------------------------------------------------------------

class _FidelityObjective:
    """``F(rho, 1 ⊗ s)`` restricted to the support of rho, with its gradient in s."""

    def __init__(self, rho: np.ndarray, da: int, db: int):
        w, v = np.linalg.eigh(rho)
        keep = w > 1e-14 * max(w[-1], 1e-300)
        self.v = v[:, keep]
        self.sw = np.sqrt(w[keep])
        # columns sqrt(l_i) |v_i>
        self.b = self.v * self.sw
        self.da, self.db = da, db

    def value_grad(self, sig: np.ndarray):
        b = self.b
        k = b.conj().T @ _lift(sig, self.da) @ b
        k = 0.5 * (k + k.conj().T)
        kw, kv = np.linalg.eigh(k)
        kw = np.clip(kw, 1e-300, None)
        f = float(np.sum(np.sqrt(kw)))
        kinv_half = (kv / np.sqrt(kw)) @ kv.conj().T
        dq = 0.5 * b @ kinv_half @ b.conj().T
        grad = _tr_a(dq, self.da, self.db)
        return f, 0.5 * (grad + grad.conj().T)

    def value(self, sig: np.ndarray) -> float:
        b = self.b
        k = b.conj().T @ _lift(sig, self.da) @ b
        kw = np.clip(np.linalg.eigvalsh(0.5 * (k + k.conj().T)), 0.0, None)
        return float(np.sum(np.sqrt(kw)))


def _concave_upper(obj: "_FidelityObjective", sig: np.ndarray) -> tuple[float, float]:
    """(F(sig), certified upper bound on max F) from the concavity of s -> F(rho, 1 ⊗ s).

    For concave F and any state t, F(t) <= F(s) + <G, t - s> with G the
    gradient at s; maximizing the right side over t gives the bound.
    """
    db = sig.shape[0]
    sig = (1 - 1e-12) * sig + 1e-12 * np.eye(db) / db
    f, g = obj.value_grad(sig)
    slack = np.linalg.eigvalsh(g)[-1] - float(np.trace(g @ sig).real)
    return f, f + max(slack, 0.0)


def solve_hmax(
    rho: np.ndarray, da: int, db: int, gap_target: float = GAP_TARGET, max_iter: int = MAX_ITER
) -> SolveResult:
    """Maximize ``F(rho, 1 ⊗ s)^2`` over density operators ``s`` on B (rho ordered A ⊗ B)."""
    obj = _FidelityObjective(rho, da, db)
    n = db * db

    def unpack(z):
        a = (z[:n] + 1j * z[n:]).reshape(db, db)
        return a

    def fun(z):
        a = unpack(z)
        s_norm = float(np.vdot(a, a).real)
        sig = a @ a.conj().T / s_norm
        f, g = obj.value_grad(sig)
        # d(-log F)/dA via sigma = A A^dag / tr(A A^dag)
        mgrad = (g @ a - np.trace(g @ sig).real * a) / s_norm
        grad_a = -2 * mgrad / f
        return -math.log(max(f, 1e-300)), np.concatenate([grad_a.real.ravel(), grad_a.imag.ravel()])

    # start from the marginal of rho on B, slightly mixed
    rho_b = _tr_a(rho, da, db)
    start = rho_b + 1e-3 * np.eye(db)
    w, v = np.linalg.eigh(0.5 * (start + start.conj().T))
    a0 = (v * np.sqrt(np.clip(w, 1e-12, None))) @ v.conj().T
    z = np.concatenate([a0.real.ravel(), a0.imag.ravel()])

    iterations = 0
    gap = math.inf
    for _attempt in range(6):
        res = optimize.minimize(
            fun, z, jac=True, method="L-BFGS-B",
            options={"maxiter": min(5000, max_iter), "ftol": 1e-16, "gtol": 1e-13, "maxcor": 30},
        )
        iterations += int(res.nit)
        z = res.x
        a = unpack(z)
        sig = a @ a.conj().T / float(np.vdot(a, a).real)
        sig = 0.5 * (sig + sig.conj().T)
        f, ub = _concave_upper(obj, sig)
        gap = 2 * math.log2(ub / f) if f > 0 else math.inf
        if gap <= GAP_AIM or iterations >= max_iter:
            break
        sig = _multiplicative_polish(obj, sig, 200)
        a = np.linalg.cholesky(sig + 1e-15 * np.eye(db))
        z = np.concatenate([a.real.ravel(), a.imag.ravel()])
    sig = (1 - 1e-12) * sig + 1e-12 * np.eye(db) / db
    f, ub = _concave_upper(obj, sig)
    gap = 2 * math.log2(ub / f) if f > 0 else math.inf
    if not gap <= gap_target:
        raise SolverError(
            "max-entropy ascent did not certify the target gap",
            {"lower_bits": 2 * math.log2(f), "upper_bits": 2 * math.log2(ub), "gap_bits": gap},
        )
    return SolveResult(2 * math.log2(f), sig, gap, iterations)


def _multiplicative_polish(obj: _FidelityObjective, sig: np.ndarray, steps: int) -> np.ndarray:
    """Fixed-point update s <- s^{1/2} G s^{1/2} / tr(.) where G is the fidelity gradient."""
    for _ in range(steps):
        _, g = obj.value_grad(sig)
        w, v = np.linalg.eigh(sig)
        sh = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
        new = sh @ g @ sh
        new = 0.5 * (new + new.conj().T)
        sig = new / np.trace(new).real
    return sig
