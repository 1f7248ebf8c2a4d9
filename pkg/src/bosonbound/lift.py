"""The n-boson representation of a single-photon unitary.

``lift(U, n)[S, T] = Per(U[S, T]) / sqrt(prod s_i! prod t_j!)`` where
``U[S, T]`` repeats row i ``s_i`` times and column j ``t_j`` times. This map
is multiplicative, ``lift(U @ V) = lift(U) @ lift(V)``, and ``lift(U, 1) = U``.

States propagate as row vectors, matching the row-input convention of
:mod:`bosonbound.fock`: the output of ``psi0`` is ``psi0 @ lift(U)``. For
``psi0 = |1_n>`` this reproduces :func:`bosonbound.fock.output_amplitudes`.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DimensionError, SizeLimitError
from .fock import factorial_products, num_outcomes, outcome_index, outcome_table
from .linalg import as_square, unitary_eigenphases, wrap_phase
from .permanent import batch_permanents

SIZE_CAP_ENV = "BOSONBOUND_SIZE_CAP"
DEFAULT_SIZE_CAP = 5000
NORM_TOL = 1e-9


def size_cap():
    """Largest lifted dimension N allowed; ``$BOSONBOUND_SIZE_CAP`` overrides the default."""
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SizeLimitError(f"{SIZE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise SizeLimitError(f"{SIZE_CAP_ENV} must be positive, got {cap}")
    return cap


def check_size(m, n):
    N = num_outcomes(m, n)
    cap = size_cap()
    if N > cap:
        raise SizeLimitError(f"lifted dimension C({m + n - 1}, {n}) = {N} exceeds cap {cap}")
    return N


@dataclass
class BosonState:
    """Pure n-boson state: amplitudes over the outcome order of ``(m, n)``."""

    m: int
    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (num_outcomes(self.m, self.n),):
            raise DimensionError(
                f"expected {num_outcomes(self.m, self.n)} amplitudes, got shape {amps.shape}"
            )
        self.amplitudes = amps

    @classmethod
    def fock(cls, counts):
        counts = tuple(int(c) for c in counts)
        m, n = len(counts), sum(counts)
        amps = np.zeros(num_outcomes(m, n), dtype=np.complex128)
        amps[outcome_index(m, n)[counts]] = 1.0
        return cls(m, n, amps)

    @classmethod
    def input_state(cls, m, n):
        """``|1_n>``: one photon in each of the first n modes."""
        return cls.fock((1,) * n + (0,) * (m - n))

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def _lift_rows(U, n, row_indices):
    """Rows ``row_indices`` of lift(U, n), shape (len(row_indices), N)."""
    m = U.shape[0]
    counts, modes = outcome_table(m, n)
    N = modes.shape[0]
    norms = np.sqrt(factorial_products(counts))
    out = np.empty((len(row_indices), N), dtype=np.complex128)
    for r, T in enumerate(row_indices):
        rows = np.broadcast_to(modes[T], modes.shape)
        out[r] = batch_permanents(U, rows, modes) / (norms[T] * norms)
    return out


def lift(U, n):
    """Dense N x N matrix of ``U`` acting on n identical photons."""
    A = as_square(U)
    m = A.shape[0]
    N = check_size(m, n)
    return _lift_rows(A, n, range(N))


def lifted_phase_array(phases, n):
    """Vectorized core of :func:`lifted_eigenphases`: (counts, wrapped phase sums)."""
    phases = np.asarray(phases, dtype=np.float64)
    counts, _ = outcome_table(phases.size, n)
    return counts, wrap_phase(counts @ phases)


def lifted_eigenphases(phases, n):
    """Eigenphases of ``lift(M, n)`` from those of M.

    Each outcome S contributes the eigenvalue ``prod lambda_i^{s_i}``, i.e. the
    phase ``sum s_i theta_i`` reduced to (-pi, pi].
    """
    counts, lifted = lifted_phase_array(phases, n)
    return [(tuple(int(x) for x in row), float(p)) for row, p in zip(counts, lifted)]


def lifted_operator_distance(U, Ut, n):
    """``||lift(Ut) - lift(U)||_op`` without building either lift.

    The lifted operators differ by ``lift(Ut U^-1)``, whose eigenvalues are
    ``lambda^S`` for the eigenvalues lambda of ``Ut U^-1``; the distance is
    ``max_S |lambda^S - 1|`` over all outcome states S, maximized exhaustively.
    """
    A = as_square(U, "U")
    B = as_square(Ut, "Ut")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    if np.array_equal(A, B):
        return 0.0
    phases = unitary_eigenphases(B @ A.conj().T)
    _, lifted = lifted_phase_array(phases, n)
    return float(np.max(2.0 * np.abs(np.sin(lifted / 2.0))))


def lifted_operator_distance_dense(U, Ut, n):
    """Reference path: SVD of the difference of the two dense lifts."""
    return float(np.linalg.norm(lift(Ut, n) - lift(U, n), 2))


def evolve(U, n, psi0):
    """Propagate ``psi0`` through ``U``: returns ``psi0 @ lift(U, n)``.

    Only the lift rows where ``psi0`` is nonzero are computed, so a Fock input
    costs N permanents rather than N^2.
    """
    A = as_square(U)
    m = A.shape[0]
    if not isinstance(psi0, BosonState):
        psi0 = BosonState(m, n, psi0)
    if (psi0.m, psi0.n) != (m, n):
        raise DimensionError(f"state is for (m={psi0.m}, n={psi0.n}), operator for (m={m}, n={n})")
    defect = abs(psi0.norm() - 1.0)
    if defect > NORM_TOL:
        raise ContractError(f"input state norm defect {defect:.3e} > {NORM_TOL:.0e}")
    check_size(m, n)
    support = np.flatnonzero(psi0.amplitudes)
    rows = _lift_rows(A, n, support)
    return BosonState(m, n, psi0.amplitudes[support] @ rows)
