"""Random-unitary decoupling and the purification step that follows it.

A unitary ``U`` on the system S is applied, S is split into its first ``m``
qubits S1 and the rest S2, and S1 is compared with a fully mixed block that
is independent of the environment Gamma. Once S1 is decoupled, a block P of
``S2 ⊗ O`` (the purifier) holds its purification; :func:`find_purifier`
builds the unitary on ``S2 ⊗ O`` that moves that purification onto a fixed
set of qubits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, InfeasibleError, InvalidStateError
from .quantum import (
    DensityOperator,
    PureState,
    RegisterLayout,
    apply_on_factors,
    haar_unitary,
    maximally_entangled,
    permute_matrix,
    permute_vector,
    ptrace_matrix,
    trace_distance,
)

DEFAULT_SAMPLES = 64


@dataclass
class DecouplingResult:
    """Outcome of a sampling experiment; ``distance`` is the best sample's."""

    m: int
    unitary_seed: int
    distance: float
    bound: float
    samples: int
    mean_distance: float
    stderr: float
    hmin: float

    def unitary(self, n_qubits: int) -> np.ndarray:
        """Regenerate the selected unitary on an ``n_qubits`` system."""
        return haar_unitary(2**n_qubits, self.unitary_seed)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "unitary_seed": self.unitary_seed,
            "distance": self.distance,
            "bound": self.bound,
            "samples": self.samples,
            "mean_distance": self.mean_distance,
            "stderr": self.stderr,
            "hmin": self.hmin,
        }


def _as_density(state: DensityOperator | PureState) -> DensityOperator:
    return DensityOperator.from_pure(state) if isinstance(state, PureState) else state


def _system_env_marginal(
    state: DensityOperator | PureState, layout: RegisterLayout, system: str, env: str | None
) -> tuple[np.ndarray, int, int]:
    """``rho_{S Gamma}`` with S first, plus the qubit counts of S and Gamma."""
    rho = _as_density(state)
    if rho.dim != layout.dimension:
        raise DimensionError(f"state dimension {rho.dim} does not match layout dimension {layout.dimension}")
    s_idx = layout.qubit_indices([system])
    g_idx = layout.qubit_indices([env]) if env is not None else []
    keep = sorted(s_idx + g_idx)
    mat = ptrace_matrix(rho.matrix, [2] * layout.total_qubits, keep)
    pos = {q: i for i, q in enumerate(keep)}
    order = [pos[q] for q in s_idx] + [pos[q] for q in g_idx]
    if order != sorted(order):
        mat = permute_matrix(mat, [2] * len(keep), order)
    return mat, len(s_idx), len(g_idx)


def _env_name(layout: RegisterLayout, env: str | None) -> str | None:
    if env is None or env not in layout.names or layout.qubits(env) == 0:
        return None
    return env


def _distance_from_marginal(rho_sg: np.ndarray, n: int, g: int, u: np.ndarray | None, m: int) -> float:
    if u is not None:
        rho_sg = apply_on_factors(rho_sg, u, [2] * (n + g), list(range(n)))
    keep = list(range(m)) + list(range(n, n + g))
    rho_s1g = ptrace_matrix(rho_sg, [2] * (n + g), keep)
    rho_g = ptrace_matrix(rho_sg, [2] * (n + g), list(range(n, n + g)))
    target = np.kron(np.eye(2**m) / 2**m, rho_g)
    w = np.linalg.eigvalsh(rho_s1g - target)
    return 0.5 * float(np.sum(np.abs(w)))


def decoupled_distance(
    state: DensityOperator | PureState,
    layout: RegisterLayout,
    u: np.ndarray | None,
    m: int,
    system: str = "S",
    env: str | None = "Gamma",
) -> float:
    """Trace distance of ``rho_{S1 Gamma}`` after ``U`` from ``1/2^m ⊗ rho_Gamma``.

    S1 is the first ``m`` qubits of the system block. ``u=None`` means the
    identity.
    """
    n = layout.qubits(system)
    if not 0 <= m <= n:
        raise DimensionError(f"cannot decouple {m} qubits from a {n}-qubit system")
    env = _env_name(layout, env)
    rho_sg, n, g = _system_env_marginal(state, layout, system, env)
    if u is not None and np.asarray(u).shape != (2**n, 2**n):
        raise DimensionError(f"unitary of shape {np.asarray(u).shape} does not act on {n} qubits")
    return _distance_from_marginal(rho_sg, n, g, u, m)


def average_decoupling_bound(n: int, m: int, hmin_S_Gamma: float, epsilon: float = 0.0) -> float:
    """Upper bound on the Haar-average decoupled distance.

    ``2^{-(n - 2m + 2)/2 - Hmin(S|Gamma)/2} + 6 eps``.
    """
    return 2.0 ** (-(n - 2 * m + 2) / 2 - hmin_S_Gamma / 2) + 6 * epsilon


def max_decoupled_size(n: int, hmax_eps_S_O: float, delta_prime: float, epsilon: float = 0.0) -> int:
    """Number of qubits guaranteed to be ``delta_prime``-decoupled by a good unitary.

    ``floor((n - Hmax^eps(S|O)) / 2 + log2(2 delta' - 12 eps))`` clamped to ``[0, n]``.
    """
    slack = 2 * delta_prime - 12 * epsilon
    if not slack > 0:
        raise InfeasibleError(
            f"need 2*delta' > 12*eps, got 2*{delta_prime} <= 12*{epsilon}"
        )
    raw = (n - hmax_eps_S_O) / 2 + math.log2(slack)
    # guard against round-off just below an integer
    m = math.floor(raw + 1e-9)
    return int(min(max(m, 0), n))


def _hmin_system_env(rho_sg: np.ndarray, n: int, g: int) -> float:
    from .entropy import _hmin_matrix

    return _hmin_matrix(rho_sg, 2**n, 2**g).value


def sample_decoupling(
    state: DensityOperator | PureState,
    layout: RegisterLayout,
    m: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    system: str = "S",
    env: str | None = "Gamma",
    epsilon: float = 0.0,
    hmin_S_Gamma: float | None = None,
) -> DecouplingResult:
    """Draw ``samples`` Haar unitaries on S and keep the one with the smallest distance.

    Sample ``i`` uses seed ``seed + i``; ties go to the lower index. The bound
    is evaluated with ``Hmin(S|Gamma)`` computed from the state unless given.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    n = layout.qubits(system)
    if not 0 <= m <= n:
        raise DimensionError(f"cannot decouple {m} qubits from a {n}-qubit system")
    env = _env_name(layout, env)
    rho_sg, n, g = _system_env_marginal(state, layout, system, env)
    if hmin_S_Gamma is None:
        hmin_S_Gamma = _hmin_system_env(rho_sg, n, g)
    dists = np.empty(samples)
    for i in range(samples):
        u = haar_unitary(2**n, seed + i)
        dists[i] = _distance_from_marginal(rho_sg, n, g, u, m)
    best = int(np.argmin(dists))
    stderr = float(dists.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return DecouplingResult(
        m=m,
        unitary_seed=seed + best,
        distance=float(dists[best]),
        bound=average_decoupling_bound(n, m, hmin_S_Gamma, epsilon),
        samples=samples,
        mean_distance=float(dists.mean()),
        stderr=stderr,
        hmin=float(hmin_S_Gamma),
    )


# ---------------------------------------------------------------------------
# purification
# ---------------------------------------------------------------------------

@dataclass
class PurifierResult:
    """Unitary on the purifier register and how well it worked.

    ``register`` lists the blocks the unitary acts on, in layout order; the
    purifier P is the first ``m`` qubits of that register. ``residual`` is
    the trace distance of the resulting ``S1 P`` state from the canonical
    maximally entangled state.
    """

    unitary: np.ndarray
    register: list[str]
    m: int
    residual: float
    overlap: float


def _canonical_purification(rho: np.ndarray, anc_dim: int) -> np.ndarray:
    """Vector in ancilla ⊗ system purifying (a rank truncation of) ``rho``."""
    d = rho.shape[0]
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = np.clip(w, 0.0, None)[::-1]
    v = v[:, ::-1]
    k = min(anc_dim, d)
    amp = np.zeros((anc_dim, d), complex)
    for i in range(k):
        amp[i] = math.sqrt(w[i]) * v[:, i]
    nrm = np.linalg.norm(amp)
    return (amp / nrm).reshape(-1) if nrm > 0 else amp.reshape(-1)


def find_purifier(
    global_pure: PureState,
    layout: RegisterLayout,
    s1: str,
    register: Sequence[str] | None = None,
    env: str | None = "Gamma",
) -> PurifierResult:
    """Uhlmann unitary on ``register`` (default: every block except ``s1`` and ``env``).

    The target global state is ``|Phi>_{S1 P} ⊗ |chi>_{P' Gamma}`` where
    ``Phi`` is the canonical maximally entangled state, P the first
    ``qubits(s1)`` qubits of the register, and ``chi`` a purification of
    ``rho_Gamma`` on the remaining register qubits P'. The returned unitary
    maximizes the overlap with that target, so the ``S1 P`` state is within
    ``sqrt(1 - F^2)`` of ``Phi`` where ``F`` is the fidelity of ``rho_{S1 Gamma}``
    with ``1/2^m ⊗ rho_Gamma``.
    """
    if not isinstance(global_pure, PureState):
        raise InvalidStateError("find_purifier needs a pure global state")
    env = _env_name(layout, env)
    if register is None:
        register = [b for b in layout.names if b not in (s1, env)]
    register = [b for b in layout.names if b in set(register)]
    m = layout.qubits(s1)
    r_idx = layout.qubit_indices(register)
    if len(r_idx) < m:
        raise DimensionError(
            f"purifier register has {len(r_idx)} qubits, fewer than the {m} qubits of {s1!r}"
        )
    s_idx = layout.qubit_indices([s1])
    g_idx = layout.qubit_indices([env]) if env is not None else []
    covered = set(s_idx + r_idx + g_idx)
    if len(covered) != layout.total_qubits:
        raise DimensionError("s1, register and env must cover the whole layout")
    dims = [2] * layout.total_qubits
    ds, dr, dg = 2**m, 2 ** len(r_idx), 2 ** len(g_idx)
    # psi as a matrix: rows (S1, Gamma), columns register
    vec = permute_vector(global_pure.amplitudes, dims, s_idx + g_idx + r_idx)
    x = vec.reshape(ds * dg, dr)
    # target: Phi_{S1 P} ⊗ chi_{P' Gamma}, laid out as rows (S1, Gamma), columns (P, P')
    rho_g = ptrace_matrix(np.outer(vec, vec.conj()), [ds, dg, dr], [1])
    d_rest = dr // ds
    chi = _canonical_purification(rho_g, d_rest).reshape(d_rest, dg)  # [p', g]
    phi = np.eye(ds) / math.sqrt(ds)  # [s1, p]
    t = np.einsum("sp,qg->sgpq", phi, chi).reshape(ds * dg, dr)
    # maximize |tr(T^dag X V^T)| over unitaries V
    w_, sv, zh = np.linalg.svd(t.conj().T @ x)
    vt = zh.conj().T @ w_.conj().T
    v = vt.T
    overlap = float(np.sum(sv))
    # resulting S1 P state
    new = (x @ vt).reshape(ds, dg, ds, d_rest)  # [s1, g, p, p']
    rho_s1p = np.einsum("sgpq,tgrq->sptr", new, new.conj()).reshape(ds * ds, ds * ds)
    target = DensityOperator.from_pure(maximally_entangled(m)) if m else None
    if m:
        residual = trace_distance(DensityOperator(rho_s1p, check=False), target)
    else:
        residual = 0.0
    return PurifierResult(v, register, m, residual, overlap)
