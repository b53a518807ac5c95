"""Dense complex linear algebra and quantum channel primitives.

Everything operates on plain ``numpy`` arrays.  States, unitaries and
effects are carried as square complex matrices; the only structured type
is :class:`ChoiMatrix`, which pins down the input/output dimensions and
factor ordering of a channel representation.

Conventions used throughout the package:

* vectorization is row-major (lexicographical), so ``vec(I_d)`` is the
  unnormalized maximally entangled vector with ones at positions
  ``i*d + i``;
* Choi matrices live on output ⊗ input, output factor first, and are
  unnormalized (trace ``d_in`` for trace-preserving maps).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
import scipy.linalg as sla

# Tolerances for validating invariants of states / unitaries / channels.
# Double-precision eigendecompositions at the dimensions used here
# (<= 4096) keep numerical error well below these.
TOL_HERM = 1e-10
TOL_UNITARY = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
TOL_CPTP = 1e-9


def as_operator(x) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def _require_square(m: np.ndarray) -> int:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


def vec(x) -> np.ndarray:
    """Row-major vectorization: component ``i*cols + j`` is ``x[i, j]``."""
    return np.asarray(x, dtype=complex).reshape(-1)


def unvec(v, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``rows x cols`` matrix."""
    v = np.asarray(v, dtype=complex)
    if v.size != rows * cols:
        raise ValueError(f"vector of size {v.size} cannot fill {rows}x{cols}")
    return v.reshape(rows, cols)


def kron(a, b) -> np.ndarray:
    """Kronecker product (row-major block convention)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def swap_operator(d: int) -> np.ndarray:
    """Swap of two d-dimensional factors: S|i>|j> = |j>|i>."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


def partial_trace(m, dims: Iterable[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` gives the factor dimensions in order; their product must
    equal the matrix dimension.  Kept factors retain their relative
    order.  The total trace is preserved.
    """
    m = as_operator(m)
    n = _require_square(m)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != n:
        raise ValueError(f"prod(dims)={np.prod(dims)} does not match matrix dim {n}")
    nfac = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= nfac for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {nfac} factors")
    traced = [i for i in range(nfac) if i not in keep]
    t = m.reshape(*dims, *dims)
    remaining = nfac
    for ax in sorted(traced, reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + remaining)
        remaining -= 1
    dkeep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dkeep, dkeep)


def dephase(x) -> np.ndarray:
    """Zero all off-diagonal entries (computational-basis dephasing)."""
    x = as_operator(x)
    _require_square(x)
    return np.diag(np.diag(x))


def depolarize(x, d: int) -> np.ndarray:
    """Completely depolarizing channel: X -> Tr(X) * I/d."""
    x = as_operator(x)
    if x.shape != (d, d):
        raise ValueError(f"expected {d}x{d} input, got {x.shape}")
    return np.trace(x) / d * np.eye(d, dtype=complex)


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * max(1.0, np.max(np.abs(m))))


def assert_unitary(u, tol: float = TOL_UNITARY) -> np.ndarray:
    """Validate u†u = I entrywise within ``tol`` and return u."""
    u = as_operator(u)
    d = _require_square(u)
    err = np.max(np.abs(u.conj().T @ u - np.eye(d)))
    if err > tol:
        raise ValueError(f"matrix is not unitary (deviation {err:.3e})")
    return u


def assert_density(rho, tol_herm: float = TOL_HERM, tol_psd: float = TOL_PSD,
                   tol_tr: float = TOL_TRACE) -> np.ndarray:
    """Validate Hermiticity, positivity and unit trace of a state."""
    rho = as_operator(rho)
    _require_square(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol_herm:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol_tr or abs(np.trace(rho).imag) > tol_tr:
        raise ValueError(f"density matrix has trace {np.trace(rho)}, expected 1")
    wmin = np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2))
    if wmin < -tol_psd:
        raise ValueError(f"density matrix has negative eigenvalue {wmin:.3e}")
    return rho


def projector(v) -> np.ndarray:
    """Rank-1 projector |v><v| from a (not necessarily normalized) vector."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def vn_outcome_probs(u, rho) -> np.ndarray:
    """Outcome distribution of the rank-1 measurement onto the columns of u.

    Entry i is <u_i| rho |u_i>, the probability of observing label i.
    """
    u = as_operator(u)
    rho = as_operator(rho)
    if u.shape[0] != rho.shape[0]:
        raise ValueError(f"dimension mismatch: basis {u.shape} vs state {rho.shape}")
    return np.real(np.einsum("ki,kl,li->i", u.conj(), rho, u))


def vn_measure_channel(u, rho) -> np.ndarray:
    """Measurement-as-channel: diagonal matrix of outcome probabilities.

    Equals dephase(u† rho u) for any unitary basis u.
    """
    return np.diag(vn_outcome_probs(u, rho)).astype(complex)


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi representation of a linear map, output factor first.

    ``matrix`` is (dim_out*dim_in) x (dim_out*dim_in); row index
    ``a*dim_in + x`` pairs output index ``a`` with input index ``x``.
    """

    matrix: np.ndarray
    dim_out: int
    dim_in: int

    def __post_init__(self):
        m = as_operator(self.matrix)
        n = _require_square(m)
        if n != self.dim_out * self.dim_in:
            raise ValueError(
                f"matrix dim {n} does not equal dim_out*dim_in = "
                f"{self.dim_out * self.dim_in}")
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def output_marginal(self) -> np.ndarray:
        """Partial trace over the input factor."""
        return partial_trace(self.matrix, [self.dim_out, self.dim_in], keep=[0])

    def input_marginal(self) -> np.ndarray:
        """Partial trace over the output factor (= identity for CPTP maps)."""
        return partial_trace(self.matrix, [self.dim_out, self.dim_in], keep=[1])

    def is_cptp(self, tol: float = TOL_CPTP) -> bool:
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > tol:
            return False
        if np.min(np.linalg.eigvalsh(m)) < -tol:
            return False
        return bool(np.max(np.abs(self.input_marginal() - np.eye(self.dim_in))) <= tol)


def choi_of_map(apply: Callable[[np.ndarray], np.ndarray], d_in: int,
                d_out: int) -> ChoiMatrix:
    """Choi matrix of a linear map given as a callable on d_in x d_in matrices.

    J = sum_ij apply(|i><j|) ⊗ |i><j|, so Tr(J) = d_in for
    trace-preserving maps.
    """
    j = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for i in range(d_in):
        for k in range(d_in):
            e = np.zeros((d_in, d_in), dtype=complex)
            e[i, k] = 1.0
            block = as_operator(apply(e))
            if block.shape != (d_out, d_out):
                raise ValueError(
                    f"map returned shape {block.shape}, expected {(d_out, d_out)}")
            eik = np.zeros((d_in, d_in), dtype=complex)
            eik[i, k] = 1.0
            j += np.kron(block, eik)
    return ChoiMatrix(j, d_out, d_in)


def apply_from_choi(j: ChoiMatrix, rho) -> np.ndarray:
    """Recover the channel action from a Choi matrix.

    Returns Tr_in[J (I ⊗ rho^T)]; rho^T is the plain transpose, not the
    adjoint.
    """
    rho = as_operator(rho)
    if rho.shape != (j.dim_in, j.dim_in):
        raise ValueError(
            f"state shape {rho.shape} does not match input dim {j.dim_in}")
    j4 = j.matrix.reshape(j.dim_out, j.dim_in, j.dim_out, j.dim_in)
    # the transpose inside the sandwich cancels against the trace index
    # pairing, leaving a plain contraction against rho
    return np.einsum("axby,xy->ab", j4, rho)


def trace_norm(m) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|."""
    m = as_operator(m)
    if m.shape[0] == m.shape[1] and is_hermitian(m):
        return float(np.sum(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def operator_norm(m) -> float:
    """Largest singular value."""
    m = as_operator(m)
    return float(np.linalg.norm(m, 2))


def hermitian_eig(m, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, rejecting non-Hermitian input.

    Uses LAPACK's RRR driver, which is markedly faster than the default
    at the 4096-dimensional sizes reached for d = 8.
    """
    m = as_operator(m)
    _require_square(m)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = sla.eigh((m + m.conj().T) / 2, driver="evr")
    return w, v


def abs_hermitian(m, tol: float = TOL_HERM) -> np.ndarray:
    """|M| = sqrt(M†M) for Hermitian M: absolute values of the spectrum."""
    w, v = hermitian_eig(m, tol)
    return (v * np.abs(w)) @ v.conj().T
