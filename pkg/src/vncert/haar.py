"""Haar-random unitaries and closed-form Haar-averaged Choi matrices.

The closed forms are exact linear combinations of the identity, the swap
operator S and its dephased version T = Δ(S).  A Monte Carlo averaging
oracle validates them in the test suite; it is never used at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import ChoiMatrix, dephase, swap_operator, vec


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream: (seed, stream) pins the sample sequence.

    Distinct stream indices under the same seed yield statistically
    independent generators, which is what parallel Monte Carlo batches
    use to stay deterministic regardless of worker count.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)}")


def sample_haar_unitaries(d: int, n: int, rng) -> np.ndarray:
    """Stack of n Haar-random d x d unitaries, shape (n, d, d).

    Ginibre matrix followed by QR with the phase fix: each column of Q
    is divided by the phase of the corresponding diagonal entry of R.
    Plain QR alone is not Haar-distributed.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    gen = _as_generator(rng)
    z = (gen.standard_normal((n, d, d)) + 1j * gen.standard_normal((n, d, d)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.einsum("nii->ni", r)
    q *= (diag / np.abs(diag))[:, None, :]
    return q


def sample_haar_unitary(d: int, rng) -> np.ndarray:
    """Single Haar-random d x d unitary."""
    return sample_haar_unitaries(d, 1, rng)[0]


def dephased_swap(d: int) -> np.ndarray:
    """T = Δ(S): diagonal projector onto the |ii> states."""
    return dephase(swap_operator(d))


def _require_d2(d: int):
    if d < 2:
        raise ValueError("dimension must be >= 2 (formula singular at d = 1)")


def avg_choi_unitary_uu(d: int) -> ChoiMatrix:
    """Choi matrix of the Haar average of Φ_U ⊗ Φ_U (same U on both factors).

    Equals (I⊗I + S⊗S)/(d²−1) − (S⊗I + I⊗S)/(d(d²−1)), output factor
    first, identities of dimension d².
    """
    _require_d2(d)
    s = swap_operator(d)
    eye = np.eye(d * d, dtype=complex)
    m = (np.kron(eye, eye) + np.kron(s, s)) / (d * d - 1)
    m -= (np.kron(s, eye) + np.kron(eye, s)) / (d * (d * d - 1))
    return ChoiMatrix(m, d * d, d * d)


def avg_choi_unitary_uv(d: int) -> ChoiMatrix:
    """Choi matrix of the Haar average of Φ_U ⊗ Φ_V (independent U, V)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return ChoiMatrix(np.eye(d ** 4, dtype=complex) / (d * d), d * d, d * d)


def avg_choi_meas_uu(d: int) -> ChoiMatrix:
    """Choi matrix of the Haar average of P_U ⊗ P_U (same unknown basis).

    Closed form [I ⊗ (I − S/d) + T ⊗ (S − I/d)] / (d²−1); the first
    tensor factor is the (dephased) output pair, the second the inputs.
    """
    _require_d2(d)
    s = swap_operator(d)
    t = dephased_swap(d)
    eye = np.eye(d * d, dtype=complex)
    m = (np.kron(eye, eye - s / d) + np.kron(t, s - eye / d)) / (d * d - 1)
    return ChoiMatrix(m, d * d, d * d)


def avg_choi_meas_uv(d: int) -> ChoiMatrix:
    """Choi matrix of the Haar average of P_U ⊗ P_V (independent bases)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return ChoiMatrix(np.eye(d ** 4, dtype=complex) / (d * d), d * d, d * d)


def choi_difference(d: int) -> ChoiMatrix:
    """Difference of the averaged measurement Choi matrices (same minus
    independent): [I ⊗ (I/d² − S/d) + T ⊗ (S − I/d)] / (d²−1).

    Traceless and Hermitian; its diamond-norm bounds drive the
    both-unknown discrimination results.
    """
    _require_d2(d)
    s = swap_operator(d)
    t = dephased_swap(d)
    eye = np.eye(d * d, dtype=complex)
    m = (np.kron(eye, eye / (d * d) - s / d) + np.kron(t, s - eye / d)) / (d * d - 1)
    return ChoiMatrix(m, d * d, d * d)


def dephase_output_factor(j: ChoiMatrix) -> ChoiMatrix:
    """Apply computational-basis dephasing to the output factor of a Choi.

    Zeroes every entry whose row and column output indices differ; this
    turns the Choi of Φ into the Choi of Δ∘Φ.
    """
    j4 = j.matrix.reshape(j.dim_out, j.dim_in, j.dim_out, j.dim_in).copy()
    out_eq = np.eye(j.dim_out, dtype=bool)
    j4 *= out_eq[:, None, :, None]
    return ChoiMatrix(j4.reshape(j.matrix.shape), j.dim_out, j.dim_in)


def choi_unitary_channel(u) -> np.ndarray:
    """Choi matrix of the unitary channel X -> U X U† as a raw array.

    With row-major vectorization this is the rank-1 outer product
    vec(U) vec(U)†.
    """
    v = vec(u)
    return np.outer(v, v.conj())


def choi_vn_measurement(u) -> np.ndarray:
    """Choi matrix of the measurement channel of the basis U (raw array).

    The measurement channel factorizes as Δ ∘ Φ_{U†}, so the Choi is the
    output-dephased Choi of Φ_{U†}.
    """
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    j = ChoiMatrix(choi_unitary_channel(u.conj().T), d, d)
    return dephase_output_factor(j).matrix


def mc_average_choi(sampler, n: int, rng) -> np.ndarray:
    """Arithmetic mean of n sampled Choi matrices (raw arrays).

    ``sampler`` is called with the generator and must return one Choi
    matrix per call.  Test-time validation oracle for the closed forms.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    gen = _as_generator(rng)
    acc = np.array(sampler(gen), dtype=complex, copy=True)
    for _ in range(n - 1):
        acc += sampler(gen)
    return acc / n
