"""Dense finite-dimensional state algebra.

Every object here is immutable after construction. Registers are addressed
through :class:`RegisterLayout`, an ordered list of named qubit blocks; the
global Hilbert space is the tensor product of the blocks in that order with
qubit 0 as the most significant tensor factor.
"""
from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    AddressingError,
    CapacityError,
    DimensionError,
    InvalidStateError,
)

MAX_QUBITS = 10
MAX_DIM = 2**MAX_QUBITS
TOL_HERM = 1e-10
TOL_EIG = 1e-10
TOL_NORM = 1e-10


# ---------------------------------------------------------------------------
# low-level tensor helpers
# ---------------------------------------------------------------------------

def _check_capacity(dim: int) -> None:
    if dim > MAX_DIM:
        raise CapacityError(
            f"dimension {dim} exceeds the dense capacity of {MAX_DIM} ({MAX_QUBITS} qubits)"
        )


def _default_dims(d: int) -> tuple[int, ...]:
    if d > 1 and d & (d - 1) == 0:
        return (2,) * (d.bit_length() - 1)
    return (d,) if d > 1 else ()


def _clean_dims(dims: Iterable[int] | None, d: int) -> tuple[int, ...]:
    if dims is None:
        return _default_dims(d)
    dims = tuple(int(x) for x in dims if int(x) != 1)
    if any(x < 1 for x in dims):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    if math.prod(dims) != d:
        raise DimensionError(f"dims {dims} do not multiply to matrix dimension {d}")
    return dims


def ptrace_matrix(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of ``mat`` over all subsystems not listed in ``keep``.

    Kept subsystems appear in the order given by ``keep``.
    """
    dims = list(dims)
    n = len(dims)
    keep = list(keep)
    traced = [i for i in range(n) if i not in keep]
    t = mat.reshape(dims + dims)
    perm = keep + traced
    t = t.transpose(perm + [n + i for i in perm])
    dk = math.prod(dims[i] for i in keep)
    dt = math.prod(dims[i] for i in traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def permute_matrix(mat: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator; factor ``order[k]`` moves to slot ``k``."""
    dims = list(dims)
    n = len(dims)
    t = mat.reshape(dims + dims).transpose(list(order) + [n + i for i in order])
    d = math.prod(dims)
    return t.reshape(d, d)


def permute_vector(vec: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    return vec.reshape(list(dims)).transpose(list(order)).reshape(-1)


def apply_on_factors(
    mat: np.ndarray, op: np.ndarray, dims: Sequence[int], targets: Sequence[int]
) -> np.ndarray:
    """Return ``(op ⊗ id) mat (op ⊗ id)^†`` with ``op`` acting on factors ``targets``."""
    dims = list(dims)
    n = len(dims)
    targets = list(targets)
    k = len(targets)
    dt = math.prod(dims[i] for i in targets)
    if op.shape != (dt, dt):
        raise DimensionError(f"operator of shape {op.shape} does not match target dimension {dt}")
    opt = op.reshape([dims[i] for i in targets] * 2)
    t = mat.reshape(dims + dims)
    # ket side
    t = np.tensordot(opt, t, axes=(list(range(k, 2 * k)), targets))
    rest = [i for i in range(2 * n) if i not in targets]
    inv = np.argsort(targets + rest)
    t = t.transpose(inv)
    # bra side
    bra = [n + i for i in targets]
    t = np.tensordot(t, opt.conj(), axes=(bra, list(range(k, 2 * k))))
    rest = [i for i in range(2 * n) if i not in bra]
    inv = np.argsort(rest + bra)
    t = t.transpose(inv)
    d = math.prod(dims)
    return t.reshape(d, d)


def apply_on_vector(
    vec: np.ndarray, op: np.ndarray, dims: Sequence[int], targets: Sequence[int]
) -> np.ndarray:
    dims = list(dims)
    targets = list(targets)
    k = len(targets)
    opt = op.reshape([dims[i] for i in targets] * 2)
    t = np.tensordot(opt, vec.reshape(dims), axes=(list(range(k, 2 * k)), targets))
    rest = [i for i in range(len(dims)) if i not in targets]
    return t.transpose(np.argsort(targets + rest)).reshape(-1)


def psd_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


# ---------------------------------------------------------------------------
# register layout
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegisterLayout:
    """Ordered, named partition of a qubit register.

    >>> lay = RegisterLayout.of(S=1, O=2, Gamma=1)
    >>> lay.qubit_indices(["O"])
    [1, 2]
    """

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        blocks = tuple((str(name), int(q)) for name, q in self.blocks)
        names = [b[0] for b in blocks]
        if len(set(names)) != len(names):
            raise AddressingError(f"duplicate block names in {names}")
        if any(q < 0 for _, q in blocks):
            raise AddressingError("qubit counts must be non-negative")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, **blocks: int) -> RegisterLayout:
        return cls(tuple(blocks.items()))

    @property
    def names(self) -> list[str]:
        return [b[0] for b in self.blocks]

    @property
    def total_qubits(self) -> int:
        return sum(q for _, q in self.blocks)

    @property
    def dimension(self) -> int:
        return 2**self.total_qubits

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def qubits(self, name: str) -> int:
        for b, q in self.blocks:
            if b == name:
                return q
        raise AddressingError(f"unknown block {name!r}; layout has {self.names}")

    def dim(self, *names: str) -> int:
        return 2 ** sum(self.qubits(n) for n in names)

    def _check(self, names: Iterable[str]) -> list[str]:
        names = list(names)
        for n in names:
            if n not in self.names:
                raise AddressingError(f"unknown block {n!r}; layout has {self.names}")
        return names

    def qubit_indices(self, names: Iterable[str]) -> list[int]:
        """Qubit positions of ``names``, in layout order."""
        wanted = set(self._check(names))
        out, pos = [], 0
        for b, q in self.blocks:
            if b in wanted:
                out.extend(range(pos, pos + q))
            pos += q
        return out

    def sub(self, names: Iterable[str]) -> RegisterLayout:
        """Layout restricted to ``names`` (kept in layout order)."""
        wanted = set(self._check(names))
        return RegisterLayout(tuple(b for b in self.blocks if b[0] in wanted))

    def split(self, name: str, parts: Sequence[tuple[str, int]]) -> RegisterLayout:
        """Replace block ``name`` by consecutive sub-blocks ``parts``."""
        q = self.qubits(name)
        if sum(p[1] for p in parts) != q:
            raise AddressingError(f"parts of {name!r} must sum to {q} qubits")
        new = []
        for b in self.blocks:
            new.extend(parts if b[0] == name else [b])
        return RegisterLayout(tuple(new))

    def concat(self, other: RegisterLayout) -> RegisterLayout:
        return RegisterLayout(self.blocks + other.blocks)

    def to_list(self) -> list[dict]:
        return [{"name": n, "qubits": q} for n, q in self.blocks]

    @classmethod
    def from_list(cls, items: Sequence[dict]) -> RegisterLayout:
        return cls(tuple((d["name"], int(d["qubits"])) for d in items))


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def check_density(matrix: np.ndarray) -> None:
    """Raise :class:`InvalidStateError` unless ``matrix`` is a (sub)normalized state."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidStateError(f"density operator must be square, got shape {matrix.shape}")
    dev = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
    if dev > TOL_HERM:
        raise InvalidStateError(f"operator is not Hermitian (max deviation {dev:.3g})")
    w = np.linalg.eigvalsh(matrix)
    if w.size and w[0] < -TOL_EIG:
        raise InvalidStateError(f"operator has negative eigenvalue {w[0]:.3g}")
    tr = float(np.real(np.trace(matrix)))
    if tr > 1 + TOL_NORM:
        raise InvalidStateError(f"trace {tr:.12g} exceeds 1")


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive semidefinite operator with trace at most one.

    ``dims`` lists subsystem dimensions; when omitted a power-of-two matrix
    is read as a qubit register.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None
    check: InitVar[bool] = True

    def __post_init__(self, check):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density operator must be square, got shape {m.shape}")
        _check_capacity(m.shape[0])
        dims = _clean_dims(self.dims, m.shape[0])
        if check:
            check_density(m)
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with the tolerance band clamped to zero."""
        w = np.linalg.eigvalsh(self.matrix)
        return np.where(np.abs(w) <= TOL_EIG, 0.0, w).clip(min=0.0)

    def is_pure(self, tol: float = 1e-9) -> bool:
        w = self.eigenvalues()
        return abs(self.norm - 1) <= tol and abs(w[-1] - 1) <= tol

    # constructors ---------------------------------------------------------
    @classmethod
    def from_pure(cls, psi: PureState | np.ndarray, dims=None) -> DensityOperator:
        if isinstance(psi, PureState):
            v, dims = psi.amplitudes, psi.dims
        else:
            v = np.asarray(psi, dtype=complex)
        return cls(np.outer(v, v.conj()), dims, check=False)

    @classmethod
    def maximally_mixed(cls, qubits: int) -> DensityOperator:
        d = 2**qubits
        return cls(np.eye(d) / d, (2,) * qubits, check=False)

    @classmethod
    def basis(cls, bits: str) -> DensityOperator:
        """Computational-basis projector, e.g. ``basis("01")``."""
        return cls.from_pure(PureState.basis(bits))

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "re": np.real(self.matrix).tolist(),
            "im": np.imag(self.matrix).tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> DensityOperator:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
        return cls(re + 1j * im, data.get("dims"))

    def __repr__(self) -> str:
        return f"DensityOperator(dims={self.dims}, trace={self.norm:.6g})"


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector together with its subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        _check_capacity(v.size)
        nrm = float(np.vdot(v, v).real)
        if abs(nrm - 1) > TOL_NORM:
            raise InvalidStateError(f"pure state must have unit norm, got {nrm:.12g}")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", _clean_dims(self.dims, v.size))

    @classmethod
    def basis(cls, bits: str) -> PureState:
        v = np.zeros(2 ** len(bits), dtype=complex)
        v[int(bits, 2) if bits else 0] = 1
        return cls(v, (2,) * len(bits))

    @classmethod
    def bell(cls) -> PureState:
        return cls(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))

    def density(self) -> DensityOperator:
        return DensityOperator.from_pure(self)

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims})"


def maximally_entangled(qubits: int) -> PureState:
    """Canonical state 2^{-m/2} sum_k |k>|k> on two m-qubit halves."""
    d = 2**qubits
    v = np.eye(d).reshape(-1) / math.sqrt(d)
    return PureState(v, (2,) * (2 * qubits))


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray  # columns
    right_basis: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        return np.einsum("k,ik,jk->ij", self.coefficients, self.left_basis, self.right_basis).reshape(-1)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    return DensityOperator(np.kron(a.matrix, b.matrix), a.dims + b.dims, check=False)


def _layout_factors(rho_dim: int, layout: RegisterLayout) -> list[int]:
    if rho_dim != layout.dimension:
        raise DimensionError(
            f"state dimension {rho_dim} does not match layout dimension {layout.dimension}"
        )
    return [2] * layout.total_qubits


def partial_trace(
    rho: DensityOperator, layout: RegisterLayout | None, keep: Iterable
) -> DensityOperator:
    """Reduce ``rho`` to the blocks in ``keep``.

    With a layout, ``keep`` holds block names; with ``layout=None`` it holds
    indices into ``rho.dims``.
    """
    if layout is None:
        keep = sorted(int(k) for k in keep)
        if any(k < 0 or k >= len(rho.dims) for k in keep):
            raise AddressingError(f"subsystem indices {keep} out of range for dims {rho.dims}")
        dims = list(rho.dims)
        out = ptrace_matrix(rho.matrix, dims, keep)
        return DensityOperator(out, [dims[k] for k in keep], check=False)
    dims = _layout_factors(rho.dim, layout)
    idx = layout.qubit_indices(keep)
    out = ptrace_matrix(rho.matrix, dims, idx)
    return DensityOperator(out, (2,) * len(idx), check=False)


def reorder(rho: DensityOperator, layout: RegisterLayout, names: Sequence[str]) -> tuple[DensityOperator, RegisterLayout]:
    """Permute blocks of ``rho`` into the order ``names`` (which must list every block)."""
    if sorted(names) != sorted(layout.names):
        raise AddressingError(f"reorder needs every block exactly once, got {names}")
    dims = _layout_factors(rho.dim, layout)
    order = []
    for n in names:
        order.extend(layout.qubit_indices([n]))
    new_layout = RegisterLayout(tuple((n, layout.qubits(n)) for n in names))
    out = permute_matrix(rho.matrix, dims, order)
    return DensityOperator(out, (2,) * layout.total_qubits, check=False), new_layout


def purify(rho: DensityOperator) -> PureState:
    """Canonical purification sum_i sqrt(l_i) |e_i>|i> on system ⊗ copy-of-system."""
    if abs(rho.norm - 1) > 1e-9:
        raise InvalidStateError(f"purify needs a normalized state, trace is {rho.norm:.12g}")
    w, v = np.linalg.eigh(rho.matrix)
    w = np.clip(w, 0.0, None)
    d = rho.dim
    amp = (v * np.sqrt(w)).reshape(d, d)  # row: system index, column: ancilla index
    amp = amp / np.linalg.norm(amp)
    return PureState(amp.reshape(-1), rho.dims + rho.dims)


def _require_psd(*ops: DensityOperator) -> None:
    for op in ops:
        w = np.linalg.eigvalsh(op.matrix)
        if w.size and w[0] < -TOL_EIG:
            raise InvalidStateError(f"operator is not positive semidefinite (eigenvalue {w[0]:.3g})")


def _same_dim(a: DensityOperator, b: DensityOperator) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def fidelity(r: DensityOperator, s: DensityOperator) -> float:
    """Root fidelity ``|| sqrt(r) sqrt(s) ||_1`` (no square)."""
    _same_dim(r, s)
    _require_psd(r, s)
    sv = np.linalg.svd(psd_sqrt(r.matrix) @ psd_sqrt(s.matrix), compute_uv=False)
    return float(np.sum(sv))


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    _same_dim(rho, sigma)
    w = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return 0.5 * float(np.sum(np.abs(w)))


def generalized_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    extra = math.sqrt(max(0.0, 1 - rho.norm) * max(0.0, 1 - sigma.norm))
    return fidelity(rho, sigma) + extra


def purified_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    f = min(1.0, generalized_fidelity(rho, sigma))
    return math.sqrt(max(0.0, 1 - f * f))


def haar_unitary(dimension: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The diagonal of R is divided out so the distribution is exactly Haar.
    """
    if dimension < 1:
        raise DimensionError("dimension must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dimension, dimension)) + 1j * rng.standard_normal((dimension, dimension))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _targets(layout: RegisterLayout, target) -> list[int]:
    names = [target] if isinstance(target, str) else list(target)
    return layout.qubit_indices(names)


def apply_unitary(
    rho: DensityOperator, u: np.ndarray, layout: RegisterLayout, target
) -> DensityOperator:
    """Conjugate ``rho`` by ``u`` acting on block(s) ``target``."""
    dims = _layout_factors(rho.dim, layout)
    idx = _targets(layout, target)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2 ** len(idx),) * 2:
        raise DimensionError(f"unitary of shape {u.shape} does not act on {2 ** len(idx)}-dim target {target!r}")
    if not idx:
        return rho
    out = apply_on_factors(rho.matrix, u, dims, idx)
    return DensityOperator(out, rho.dims, check=False)


def apply_unitary_pure(psi: PureState, u: np.ndarray, layout: RegisterLayout, target) -> PureState:
    dims = _layout_factors(psi.amplitudes.size, layout)
    idx = _targets(layout, target)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2 ** len(idx),) * 2:
        raise DimensionError(f"unitary of shape {u.shape} does not act on target {target!r}")
    if not idx:
        return psi
    v = apply_on_vector(psi.amplitudes, u, dims, idx)
    return PureState(v / np.linalg.norm(v), psi.dims)


def schmidt_decompose(
    psi: PureState, layout: RegisterLayout | None, cut: Iterable
) -> SchmidtDecomposition:
    """Schmidt decomposition across ``cut`` | rest.

    ``cut`` holds block names (with a layout) or subsystem indices of
    ``psi.dims`` (without). Coefficients are the singular values, so their
    squares sum to one.
    """
    if layout is None:
        dims = list(psi.dims)
        left = sorted(int(c) for c in cut)
    else:
        dims = _layout_factors(psi.amplitudes.size, layout)
        left = layout.qubit_indices(cut)
    right = [i for i in range(len(dims)) if i not in left]
    dl = math.prod(dims[i] for i in left)
    mat = permute_vector(psi.amplitudes, dims, left + right).reshape(dl, -1)
    uu, s, vh = np.linalg.svd(mat, full_matrices=False)
    return SchmidtDecomposition(s, uu, vh.T)


def gibbs_state(level_energies, beta: float, dims=None) -> DensityOperator:
    """Diagonal thermal state with weights ``exp(-beta * E_i)``.

    Energies are shifted by their minimum first so that large ``beta``
    degrades gracefully into the ground-state projector.
    """
    e = np.asarray(level_energies, dtype=float)
    if not np.all(np.isfinite(e)):
        raise ValueError("level energies must be finite")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    w = np.exp(-beta * (e - e.min()))
    p = w / w.sum()
    return DensityOperator(np.diag(p).astype(complex), dims, check=False)
