"""Conditional von Neumann, min- and max-entropies, with optional smoothing.

All values are in bits. The conditional min- and max-entropies of a state
``rho_SM`` (system S, conditioning block M) are

    Hmin(S|M) = -log2 min{ tr s : s >= 0, 1_S ⊗ s >= rho_SM }
    Hmax(S|M) = max_s log2 F(rho_SM, 1_S ⊗ s)^2      (s a density operator)

with ``F`` the root fidelity. Both are evaluated by the certified solvers in
:mod:`negentropy._solvers`; the reported value is always the side of the
certified interval that is attained by an explicit operator, and the width
of the interval is stored as ``solver_gap``.

Smoothing over the purified-distance ball is exact for states that are
diagonal in the product basis (``classicalExact``) and a declared heuristic
otherwise (``truncationHeuristic``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from . import _solvers
from .exceptions import CapacityError, DimensionError, InvalidStateError
from .quantum import (
    DensityOperator,
    RegisterLayout,
    permute_matrix,
    ptrace_matrix,
    psd_sqrt,
    purified_distance,
)

KINDS = ("vonNeumann", "min", "max")
METHODS = ("closedForm", "convexSolve", "truncationHeuristic", "classicalExact")
SOLVER_DIM_CAP = 64
QUANTUM_AEP_DIM_CAP = 64
PROB_TOL = 1e-10


@dataclass
class EntropyReport:
    """An entropy value together with how it was obtained.

    ``certificate`` is the optimal conditioning operator, normalized to unit
    trace. For ``kind="min"`` the unnormalized optimum has trace
    ``2**(-value)``. ``smoothed_state`` is the state the value refers to when
    smoothing moved it away from the input, and ``smoothing_distance`` its
    purified distance to the input.
    """

    value: float
    epsilon: float
    kind: str
    method: str
    certificate: DensityOperator | None = None
    solver_gap: float = 0.0
    smoothed_state: DensityOperator | None = None
    smoothing_distance: float = 0.0
    iterations: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown entropy kind {self.kind!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method in ("convexSolve", "closedForm") and self.epsilon != 0:
            raise ValueError("exact reports carry epsilon = 0")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "epsilon": self.epsilon,
            "kind": self.kind,
            "method": self.method,
            "solver_gap": self.solver_gap,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "smoothed_state": None if self.smoothed_state is None else self.smoothed_state.to_dict(),
            "smoothing_distance": self.smoothing_distance,
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, data: dict) -> EntropyReport:
        cert = data.get("certificate")
        smoothed = data.get("smoothed_state")
        return cls(
            value=float(data["value"]),
            epsilon=float(data["epsilon"]),
            kind=data["kind"],
            method=data["method"],
            certificate=None if cert is None else DensityOperator.from_dict(cert),
            solver_gap=float(data.get("solver_gap", 0.0)),
            smoothed_state=None if smoothed is None else DensityOperator.from_dict(smoothed),
            smoothing_distance=float(data.get("smoothing_distance", 0.0)),
            iterations=int(data.get("iterations", 0)),
        )


@dataclass(frozen=True)
class ClassicalDistribution:
    """Probability table, either over one alphabet or a joint table ``p[s, o]``."""

    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.ndim not in (1, 2) or p.size == 0:
            raise InvalidStateError("probabilities must be a non-empty vector or matrix")
        if np.any(p < -PROB_TOL) or not np.all(np.isfinite(p)):
            raise InvalidStateError("probabilities must be finite and non-negative")
        if abs(p.sum() - 1) > PROB_TOL:
            raise InvalidStateError(f"probabilities sum to {p.sum():.12g}, not 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @classmethod
    def bernoulli(cls, p: float) -> ClassicalDistribution:
        return cls(np.array([1 - p, p]))

    @property
    def joint(self) -> np.ndarray:
        """The table as ``p[s, o]``; a plain vector has a trivial O alphabet."""
        p = self.probabilities
        return p[:, None] if p.ndim == 1 else p

    def shannon(self) -> float:
        return _shannon(self.probabilities.ravel())

    def conditional_shannon(self) -> float:
        """H(S|O) of the joint table."""
        j = self.joint
        return _shannon(j.ravel()) - _shannon(j.sum(axis=0))


def _shannon(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(p: float) -> float:
    return _shannon(np.array([p, 1 - p]))


# ---------------------------------------------------------------------------
# layout plumbing
# ---------------------------------------------------------------------------

def _bipartite(
    rho: DensityOperator,
    layout: RegisterLayout | None,
    system: str | Sequence[str],
    memory: str | Sequence[str] | None,
) -> tuple[np.ndarray, int, int]:
    """Return the S ⊗ M matrix and the two dimensions.

    Without a layout the state must carry exactly two subsystems in
    ``rho.dims`` (or one, read as S with trivial M).
    """
    if layout is None:
        dims = list(rho.dims)
        if len(dims) == 1:
            return rho.matrix, dims[0], 1
        if len(dims) != 2:
            raise DimensionError(f"need a layout to split a state with dims {tuple(dims)}")
        return rho.matrix, dims[0], dims[1]
    sys_names = [system] if isinstance(system, str) else list(system)
    if memory is None:
        mem_names = [n for n in layout.names if n not in sys_names]
    else:
        mem_names = [memory] if isinstance(memory, str) else list(memory)
    if rho.dim != layout.dimension:
        raise DimensionError(f"state dimension {rho.dim} does not match layout dimension {layout.dimension}")
    s_idx = layout.qubit_indices(sys_names)
    m_idx = layout.qubit_indices(mem_names)
    if set(s_idx) & set(m_idx):
        raise DimensionError("system and memory blocks overlap")
    dims = [2] * layout.total_qubits
    keep = sorted(s_idx + m_idx)
    mat = ptrace_matrix(rho.matrix, dims, keep) if len(keep) < len(dims) else rho.matrix
    # positions of S and M qubits inside the reduced register
    pos = {q: i for i, q in enumerate(keep)}
    order = [pos[q] for q in s_idx] + [pos[q] for q in m_idx]
    if len(keep):
        mat = permute_matrix(mat, [2] * len(keep), order)
    return mat, 2 ** len(s_idx), 2 ** len(m_idx)


def _require_normalized(rho: DensityOperator) -> None:
    if abs(rho.norm - 1) > 1e-9:
        raise InvalidStateError(f"entropy needs a normalized state, trace is {rho.norm:.12g}")


def _eig(mat: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    return np.clip(np.where(np.abs(w) <= 1e-10, 0.0, w), 0.0, None)


def _vn_bits(mat: np.ndarray) -> float:
    return _shannon(_eig(mat))


def _cert(sig: np.ndarray) -> DensityOperator:
    sig = 0.5 * (sig + sig.conj().T)
    tr = float(np.trace(sig).real)
    return DensityOperator(sig / tr if tr > 0 else sig, check=False)


def max_entropy_objective(rho_sm: np.ndarray, sigma: np.ndarray, ds: int) -> float:
    """``log2 F(rho, 1_S ⊗ sigma)^2`` for raw matrices (used to check certificates)."""
    lifted = np.kron(np.eye(ds), sigma)
    sv = np.linalg.svd(psd_sqrt(rho_sm) @ psd_sqrt(lifted), compute_uv=False)
    return 2 * math.log2(float(np.sum(sv)))


def min_entropy_feasibility(rho_sm: np.ndarray, sigma: np.ndarray, ds: int) -> float:
    """Smallest eigenvalue of ``1_S ⊗ sigma - rho``; non-negative for feasible ``sigma``."""
    return float(np.linalg.eigvalsh(np.kron(np.eye(ds), sigma) - rho_sm)[0])


# ---------------------------------------------------------------------------
# von Neumann
# ---------------------------------------------------------------------------

def von_neumann(rho: DensityOperator) -> EntropyReport:
    _require_normalized(rho)
    return EntropyReport(_vn_bits(rho.matrix), 0.0, "vonNeumann", "closedForm")


def conditional_von_neumann(
    rho_SO: DensityOperator,
    layout: RegisterLayout | None = None,
    system: str | Sequence[str] = "S",
    memory: str | Sequence[str] | None = None,
) -> EntropyReport:
    """H(S|O) = H(SO) - H(O)."""
    _require_normalized(rho_SO)
    mat, ds, dm = _bipartite(rho_SO, layout, system, memory)
    rho_m = np.einsum("ajak->jk", mat.reshape(ds, dm, ds, dm))
    return EntropyReport(_vn_bits(mat) - _vn_bits(rho_m), 0.0, "vonNeumann", "closedForm")


# ---------------------------------------------------------------------------
# min- and max-entropy at epsilon = 0
# ---------------------------------------------------------------------------

def _check_solver_dim(d: int) -> None:
    if d > SOLVER_DIM_CAP:
        raise CapacityError(f"combined dimension {d} exceeds the solver cap of {SOLVER_DIM_CAP}")


def _is_pure(mat: np.ndarray) -> bool:
    w = _eig(mat)
    return abs(w[-1] - 1) <= 1e-10


def _reduced_b(mat: np.ndarray, ds: int, dm: int) -> np.ndarray:
    return np.einsum("ajak->jk", mat.reshape(ds, dm, ds, dm))


def _hmin_matrix(mat: np.ndarray, ds: int, dm: int) -> EntropyReport:
    if dm == 1:
        lam = _eig(mat)[-1]
        return EntropyReport(-math.log2(lam), 0.0, "min", "closedForm", _cert(np.eye(1)))
    if _is_pure(mat):
        # Hmin(S|M) of a pure state is -2 log2 of the sum of its Schmidt coefficients;
        # sigma = (tr sqrt r) sqrt r with r the marginal on M attains it.
        root = psd_sqrt(_reduced_b(mat, ds, dm))
        t = float(np.trace(root).real)
        return EntropyReport(-2 * math.log2(t), 0.0, "min", "closedForm", _cert(t * root))
    _check_solver_dim(ds * dm)
    res = _solvers.solve_hmin(mat, ds, dm)
    return EntropyReport(res.value, 0.0, "min", "convexSolve", _cert(res.sigma), res.gap,
                         iterations=res.iterations)


def _hmax_matrix(mat: np.ndarray, ds: int, dm: int) -> EntropyReport:
    if dm == 1:
        t = float(np.sum(np.sqrt(_eig(mat))))
        return EntropyReport(2 * math.log2(t), 0.0, "max", "closedForm", _cert(np.eye(1)))
    if _is_pure(mat):
        # F(psi, 1 ⊗ s)^2 = tr(r s): maximized by the top eigenvector of r
        w, v = np.linalg.eigh(_reduced_b(mat, ds, dm))
        top = np.outer(v[:, -1], v[:, -1].conj())
        return EntropyReport(math.log2(max(w[-1], 1e-300)), 0.0, "max", "closedForm", _cert(top))
    _check_solver_dim(ds * dm)
    res = _solvers.solve_hmax(mat, ds, dm)
    return EntropyReport(res.value, 0.0, "max", "convexSolve", _cert(res.sigma), res.gap,
                         iterations=res.iterations)


def hmin(
    rho_SO: DensityOperator,
    layout: RegisterLayout | None = None,
    system: str | Sequence[str] = "S",
    memory: str | Sequence[str] | None = None,
) -> EntropyReport:
    """Conditional min-entropy ``Hmin(S|M)``; ``memory`` defaults to every other block."""
    _require_normalized(rho_SO)
    mat, ds, dm = _bipartite(rho_SO, layout, system, memory)
    return _hmin_matrix(mat, ds, dm)


def hmax(
    rho_SO: DensityOperator,
    layout: RegisterLayout | None = None,
    system: str | Sequence[str] = "S",
    memory: str | Sequence[str] | None = None,
) -> EntropyReport:
    """Conditional max-entropy ``Hmax(S|M)``; ``memory`` defaults to every other block."""
    _require_normalized(rho_SO)
    mat, ds, dm = _bipartite(rho_SO, layout, system, memory)
    return _hmax_matrix(mat, ds, dm)


# ---------------------------------------------------------------------------
# classical smoothing
# ---------------------------------------------------------------------------

def _check_epsilon(epsilon: float) -> None:
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")


@dataclass
class _Atoms:
    """Amplitudes ``w = sqrt(p)`` grouped into conditioning blocks.

    ``w[b]`` are the distinct amplitudes inside one block class, ``mult[b]``
    how often each occurs inside a block, and ``copies[b]`` how many
    identical blocks the class stands for.
    """

    w: list[np.ndarray]
    mult: list[np.ndarray]
    copies: np.ndarray


def _atoms_single(joint: np.ndarray) -> _Atoms:
    w, mult = [], []
    for o in np.flatnonzero(joint.sum(axis=0) > 0):
        col = joint[:, o]
        col = col[col > 0]
        w.append(np.sqrt(col))
        mult.append(np.ones(col.size))
    return _Atoms(w, mult, np.ones(len(w)))


def _compositions(n: int, k: int) -> Iterable[tuple[int, ...]]:
    """All k-tuples of non-negative integers summing to n."""
    for bars in combinations_with_replacement(range(n + 1), k - 1):
        prev, out = 0, []
        for b in bars:
            out.append(b - prev)
            prev = b
        out.append(n - prev)
        yield tuple(out)


def _log_multinomial(counts: Sequence[int]) -> float:
    return float(special.gammaln(sum(counts) + 1) - sum(special.gammaln(c + 1) for c in counts))


def _atoms_iid(joint: np.ndarray, copies: int) -> _Atoms:
    """Type-class grouping of ``joint^{⊗copies}`` (blocks are O-sequences)."""
    joint = joint[:, joint.sum(axis=0) > 0]
    ds, do = joint.shape
    cols = [np.flatnonzero(joint[:, o] > 0) for o in range(do)]
    log_p = [np.log(joint[c, o]) for o, c in enumerate(cols)]
    w_all, m_all, c_all = [], [], []
    for o_counts in _compositions(copies, do):
        # distinct atoms in this block class: one S-type per O symbol
        per_o = []
        for o, n_o in enumerate(o_counts):
            entries = []
            for s_counts in _compositions(n_o, cols[o].size):
                lp = float(np.dot(s_counts, log_p[o]))
                lm = _log_multinomial(s_counts)
                entries.append((lp, lm))
            per_o.append(np.array(entries).reshape(-1, 2))
        lp = np.zeros(1)
        lm = np.zeros(1)
        for arr in per_o:
            lp = (lp[:, None] + arr[None, :, 0]).ravel()
            lm = (lm[:, None] + arr[None, :, 1]).ravel()
        w_all.append(0.5 * lp)
        m_all.append(np.exp(lm))
        c_all.append(_log_multinomial(o_counts))
    # amplitudes can underflow for long sequences; rescale by the largest one
    log_scale = max(float(x.max()) for x in w_all)
    w = [np.exp(x - log_scale) for x in w_all]
    # fold the scale back so that sum mult*copies*w^2 = 1
    total = sum(float(np.sum(m * wb**2)) * math.exp(c) for wb, m, c in zip(w, m_all, c_all))
    norm = math.sqrt(total)
    w = [wb / norm for wb in w]
    return _Atoms(w, m_all, np.exp(np.array(c_all)))


def _block_sums(atoms: _Atoms, kappa: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Solve ``B = sum_i m_i (w_i - kappa B)_+ / 2`` in every block.

    Returns the block sums and the per-atom values ``y_i = (w_i - kappa B)_+ / 2``.
    """
    sums, ys = [], []
    for w, m in zip(atoms.w, atoms.mult):
        order = np.argsort(-w, kind="stable")
        ws, ms = w[order], m[order]
        cw = np.cumsum(ms * ws)
        cm = np.cumsum(ms)
        # with the top j atoms active, B = W_j / (2 + kappa M_j)
        b = cw / (2 + kappa * cm)
        nxt = np.append(ws[1:], 0.0)
        ok = (ws > kappa * b) & (kappa * b >= nxt)
        j = int(np.argmax(ok)) if ok.any() else len(ws) - 1
        bj = float(b[j])
        sums.append(bj)
        ys.append(np.clip(w - kappa * bj, 0.0, None) / 2)
    return np.array(sums), ys


def _cosine(atoms: _Atoms, ys: list[np.ndarray]) -> tuple[float, float]:
    """(cosine between y and w, inner product <w, y>) with multiplicities."""
    inner = sum(c * float(np.sum(m * w * y)) for w, m, y, c in zip(atoms.w, atoms.mult, ys, atoms.copies))
    norm2 = sum(c * float(np.sum(m * y * y)) for m, y, c in zip(atoms.mult, ys, atoms.copies))
    if norm2 <= 0:
        return 0.0, 0.0
    return inner / math.sqrt(norm2), inner


def _limit_direction(atoms: _Atoms) -> list[np.ndarray]:
    """The ``kappa -> inf`` end of the family: each block keeps only its largest atoms.

    Block sums are proportional to the block's largest amplitude and spread
    evenly over ties.
    """
    ys = []
    for w, m in zip(atoms.w, atoms.mult):
        top = w.max()
        is_top = w >= top * (1 - 1e-12)
        g = float(np.sum(m[is_top]))
        ys.append(np.where(is_top, top / g, 0.0))
    return ys


def _smoothed_solution(atoms: _Atoms, epsilon: float) -> tuple[float, list[np.ndarray]]:
    """Exact max-entropy after smoothing over diagonal states.

    With ``x = sqrt(q)`` the problem is to minimize ``sum_o (sum_s x_so)^2``
    subject to ``<w, x> >= sqrt(1 - eps^2)``, ``|x| <= 1`` and ``x >= 0``.
    The optimality conditions put the minimizer on the one-parameter family
    ``x ∝ y(kappa)`` computed by :func:`_block_sums`. Either the norm
    constraint is slack, and the minimizer is the ``kappa -> inf`` end of
    the family, or it binds and ``kappa`` is fixed by requiring the cosine
    between ``x`` and ``w`` to equal ``sqrt(1 - eps^2)``.

    Returns the value in bits and the optimal ``x`` per block.
    """
    c = math.sqrt(1 - epsilon**2)

    def finish(ys):
        _, inner = _cosine(atoms, ys)
        t = c / inner
        xs = [t * y for y in ys]
        sums = np.array([float(np.sum(m * x)) for m, x in zip(atoms.mult, xs)])
        return math.log2(float(np.sum(atoms.copies * sums**2))), xs

    if epsilon == 0:
        return finish(_block_sums(atoms, 0.0)[1])
    limit = _limit_direction(atoms)
    if _cosine(atoms, limit)[0] >= c:
        return finish(limit)

    def cos(kappa):
        return _cosine(atoms, _block_sums(atoms, kappa)[1])[0]

    hi = 1.0
    while cos(hi) >= c:
        hi *= 4
    lo = 0.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if cos(mid) >= c:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return finish(_block_sums(atoms, lo)[1])


def classical_hmax_smooth(p: ClassicalDistribution | np.ndarray, epsilon: float, copies: int = 1) -> float:
    """Smooth max-entropy (bits) of a classical table under purified distance.

    ``p`` is a probability vector (trivial conditioning) or a joint table
    ``p[s, o]``. ``copies > 1`` evaluates the i.i.d. power through type
    classes, so the cost grows polynomially in ``copies``. The optimum is
    taken over all subnormalized diagonal states in the ball and is exact
    for that class.
    """
    _check_epsilon(epsilon)
    if not isinstance(p, ClassicalDistribution):
        p = ClassicalDistribution(p)
    if copies < 1:
        raise ValueError("copies must be at least 1")
    joint = p.joint
    atoms = _atoms_single(joint) if copies == 1 else _atoms_iid(joint, copies)
    return _smoothed_solution(atoms, epsilon)[0]


def _classical_smoothed_state(joint: np.ndarray, epsilon: float) -> np.ndarray:
    """The optimal diagonal smoothed table for a single copy."""
    _, xs = _smoothed_solution(_atoms_single(joint), epsilon)
    q = np.zeros_like(joint)
    for k, o in enumerate(np.flatnonzero(joint.sum(axis=0) > 0)):
        rows = np.flatnonzero(joint[:, o] > 0)
        q[rows, o] = xs[k] ** 2
    return q


# ---------------------------------------------------------------------------
# smoothing of general states
# ---------------------------------------------------------------------------

def _diagonal_table(mat: np.ndarray, ds: int, dm: int) -> np.ndarray | None:
    off = mat - np.diag(np.diag(mat))
    if np.max(np.abs(off), initial=0.0) > 1e-12:
        return None
    return np.real(np.diag(mat)).clip(0.0, None).reshape(ds, dm)


def _truncations(mat: np.ndarray, epsilon: float) -> list[tuple[np.ndarray, float]]:
    """Eigenvalue-tail truncations whose renormalized result lies in the ball.

    Dropping eigenvalues of total weight ``r`` and renormalizing gives purified
    distance ``sqrt(r)``; all depths with ``r <= eps^2`` are returned,
    starting with the untouched state.
    """
    w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    w = np.clip(w, 0.0, None)
    out = [(mat, 0.0)]
    removed = 0.0
    for k in range(len(w) - 1):
        removed += w[k]
        if removed > epsilon**2 + 1e-15:
            break
        if w[k] == 0:
            continue
        keep = w[k + 1:] / (1 - removed)
        vk = v[:, k + 1:]
        out.append(((vk * keep) @ vk.conj().T, math.sqrt(removed)))
    return out


def hmax_smooth(
    rho_SO: DensityOperator,
    layout: RegisterLayout | None,
    epsilon: float,
    system: str | Sequence[str] = "S",
    memory: str | Sequence[str] | None = None,
) -> EntropyReport:
    """Smooth max-entropy ``Hmax^eps(S|M)``.

    States diagonal in the product basis are smoothed exactly over diagonal
    states (``classicalExact``). Anything else uses eigenvalue-tail
    truncation (``truncationHeuristic``): the result is attained by the
    returned smoothed state, so it upper-bounds the true smoothed value and
    never exceeds the unsmoothed max-entropy.
    """
    _check_epsilon(epsilon)
    _require_normalized(rho_SO)
    mat, ds, dm = _bipartite(rho_SO, layout, system, memory)
    if epsilon == 0:
        return _hmax_matrix(mat, ds, dm)
    table = _diagonal_table(mat, ds, dm)
    if table is not None:
        q = _classical_smoothed_state(table, epsilon)
        value = classical_hmax_smooth(ClassicalDistribution(table / table.sum()), epsilon)
        smoothed = DensityOperator(np.diag(q.ravel()).astype(complex), (ds, dm), check=False)
        # the optimal conditioning operator of a diagonal table: s_o ∝ (sum_s sqrt q_so)^2
        col = np.sum(np.sqrt(q), axis=0) ** 2
        cert = _cert(np.diag(col).astype(complex))
        dist = purified_distance(DensityOperator(mat, (ds, dm), check=False), smoothed)
        return EntropyReport(value, epsilon, "max", "classicalExact", cert, 0.0, smoothed, dist)
    best = None
    for cand, dist in _truncations(mat, epsilon):
        rep = _hmax_matrix(cand, ds, dm)
        if best is None or rep.value < best[0].value:
            best = (rep, cand, dist)
    rep, cand, dist = best
    return EntropyReport(
        rep.value, epsilon, "max", "truncationHeuristic", rep.certificate, rep.solver_gap,
        DensityOperator(cand, (ds, dm), check=False), dist, rep.iterations,
    )


def hmin_smooth(
    rho: DensityOperator,
    layout: RegisterLayout | None,
    epsilon: float,
    system: str | Sequence[str] = "S",
    memory: str | Sequence[str] | None = None,
    dual: str | Sequence[str] | None = None,
) -> EntropyReport:
    """Smooth min-entropy ``Hmin^eps(S|M)``.

    With ``dual`` set, ``rho`` must be a global pure state over ``layout`` and
    the value is obtained from the complementary block through
    ``Hmin^eps(S|M) = -Hmax^eps(S|dual)``. Otherwise the eigenvalue-tail
    truncation heuristic is applied directly to ``rho_SM`` (a lower bound on
    the true smoothed value).
    """
    _check_epsilon(epsilon)
    _require_normalized(rho)
    if dual is not None:
        if layout is None:
            raise DimensionError("the duality path needs a layout")
        if not _is_pure(rho.matrix):
            raise InvalidStateError("the duality path needs a pure global state")
        sys_names = [system] if isinstance(system, str) else list(system)
        dual_names = [dual] if isinstance(dual, str) else list(dual)
        mem_names = (
            [n for n in layout.names if n not in sys_names + dual_names] if memory is None
            else ([memory] if isinstance(memory, str) else list(memory))
        )
        if sorted(sys_names + dual_names + mem_names) != sorted(layout.names):
            raise DimensionError("system, memory and dual blocks must partition the layout")
        rep = hmax_smooth(rho, layout, epsilon, system=sys_names, memory=dual_names)
        return EntropyReport(
            -rep.value, epsilon, "min", rep.method, rep.certificate, rep.solver_gap,
            rep.smoothed_state, rep.smoothing_distance, rep.iterations,
        )
    mat, ds, dm = _bipartite(rho, layout, system, memory)
    if epsilon == 0:
        return _hmin_matrix(mat, ds, dm)
    best = None
    for cand, dist in _truncations(mat, epsilon):
        rep = _hmin_matrix(cand, ds, dm)
        if best is None or rep.value > best[0].value:
            best = (rep, cand, dist)
    rep, cand, dist = best
    return EntropyReport(
        rep.value, epsilon, "min", "truncationHeuristic", rep.certificate, rep.solver_gap,
        DensityOperator(cand, (ds, dm), check=False), dist, rep.iterations,
    )


# ---------------------------------------------------------------------------
# asymptotic equipartition
# ---------------------------------------------------------------------------

def iid_power(mat: np.ndarray, ds: int, dm: int, copies: int) -> np.ndarray:
    """``(rho_SM)^{⊗n}`` reordered to ``S^n ⊗ M^n``."""
    out = np.ones((1, 1), complex)
    for _ in range(copies):
        out = np.kron(out, mat)
    dims = [ds, dm] * copies
    order = list(range(0, 2 * copies, 2)) + list(range(1, 2 * copies, 2))
    return permute_matrix(out, dims, order)


def aep_rate(
    sigma_SO: DensityOperator,
    layout: RegisterLayout | None,
    copies: int,
    epsilon: float,
    system: str | Sequence[str] = "S",
    memory: str | Sequence[str] | None = None,
) -> float:
    """Per-copy smooth max-entropy ``Hmax^eps(S^n|M^n) / n`` of an i.i.d. state.

    States diagonal in the product basis go through the exact classical
    type-class evaluation for any ``copies``; other states are expanded
    densely, which is limited to a total dimension of 64.
    """
    _check_epsilon(epsilon)
    _require_normalized(sigma_SO)
    if copies < 1:
        raise ValueError("copies must be at least 1")
    mat, ds, dm = _bipartite(sigma_SO, layout, system, memory)
    table = _diagonal_table(mat, ds, dm)
    if table is not None:
        p = ClassicalDistribution(table / table.sum())
        return classical_hmax_smooth(p, epsilon, copies) / copies
    total = (ds * dm) ** copies
    if total > QUANTUM_AEP_DIM_CAP:
        raise CapacityError(
            f"{copies} copies of a non-diagonal state need dimension {total} > {QUANTUM_AEP_DIM_CAP}"
        )
    big = iid_power(mat, ds, dm, copies)
    rho = DensityOperator(big, (ds**copies, dm**copies), check=False)
    return hmax_smooth(rho, None, epsilon).value / copies
