"""Distances between outcome distributions and pure states, and the bound chain."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ContractError, DimensionError
from .fock import OutcomeDistribution
from .lift import BosonState, evolve, lifted_operator_distance, lifted_operator_distance_dense
from .linalg import as_square, is_unitary, operator_distance

CHAIN_SLACK = 1e-10
NORM_TOL = 1e-9


def _fsum_vdot(a, b):
    """``<a|b>`` with exactly rounded (fsum) accumulation."""
    prod = np.conj(a) * b
    return complex(math.fsum(prod.real), math.fsum(prod.imag))


def _fsum_norm(v):
    return math.sqrt(math.fsum(np.abs(v) ** 2))


def l1_distance(p, q):
    """Unhalved L1 distance ``sum_S |p(S) - q(S)|``."""
    if (p.m, p.n) != (q.m, q.n):
        raise DimensionError(f"distributions over different spaces: (m={p.m}, n={p.n}) vs (m={q.m}, n={q.n})")
    return math.fsum(np.abs(p.probs - q.probs))


def tv_distance(p, q):
    return 0.5 * l1_distance(p, q)


def _amplitudes(state):
    return state.amplitudes if isinstance(state, BosonState) else np.asarray(state, dtype=np.complex128)


def trace_distance_pure(psi, phi):
    """``sqrt(1 - |<psi|phi>|^2)`` for normalized pure states, clamped to [0, 1].

    Evaluated as the norm of the component of ``phi`` orthogonal to ``psi``,
    which is algebraically identical but stays accurate when the states
    nearly coincide (no cancellation in ``1 - |<psi|phi>|^2``).
    """
    a, b = _amplitudes(psi), _amplitudes(phi)
    if a.shape != b.shape:
        raise DimensionError(f"state shapes differ: {a.shape} vs {b.shape}")
    for name, v in (("psi", a), ("phi", b)):
        defect = abs(_fsum_norm(v) - 1.0)
        if defect > NORM_TOL:
            raise ContractError(f"{name} norm defect {defect:.3e} > {NORM_TOL:.0e}")
    if np.array_equal(a, b):
        return 0.0
    a = a / _fsum_norm(a)
    b = b / _fsum_norm(b)
    residual = b - _fsum_vdot(a, b) * a
    return min(1.0, _fsum_norm(residual))


@dataclass(frozen=True)
class DistanceReport:
    """Every quantity in the distribution-error bound for one ``(U, Ut, n, psi0)``.

    ``unitary`` is False when ``Ut`` is not unitary; the chain is then not
    guaranteed and ``op_dist_lifted`` comes from dense SVD, ``trace_dist`` and
    the distributions from the renormalized output state.
    """

    l1: float
    tv: float
    state_euclid: float
    trace_dist: float
    op_dist_lifted: float
    op_dist_base: float
    n: int
    unitary: bool = True

    @property
    def bound_rhs(self):
        return self.n * self.op_dist_base

    @property
    def chain_ok(self):
        s = CHAIN_SLACK
        return (
            self.tv <= self.trace_dist + s
            and self.trace_dist <= self.state_euclid + s
            and self.state_euclid <= self.op_dist_lifted + s
            and self.op_dist_lifted <= self.bound_rhs + s
        )

    @property
    def l1_paper_ok(self):
        """Unhalved form ``l1 <= n ||Ut - U||_op``; recorded, not guaranteed."""
        return self.l1 <= self.bound_rhs + CHAIN_SLACK

    @property
    def ratio(self):
        """``l1 / (n ||Ut - U||_op)``, or None when the denominator vanishes."""
        rhs = self.bound_rhs
        return self.l1 / rhs if rhs > 0 else None


def chain_report(U, Ut, n, psi0=None):
    """Measure ``tv <= trace <= euclid <= op_lifted <= n op_base`` for one instance.

    ``psi0`` defaults to ``|1_n>``.
    """
    A = as_square(U, "U")
    B = as_square(Ut, "Ut")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    m = A.shape[0]
    if psi0 is None:
        psi0 = BosonState.input_state(m, n)
    psi = evolve(A, n, psi0).amplitudes
    psi_t = evolve(B, n, psi0).amplitudes
    unitary = is_unitary(B, 1e-10)

    euclid = _fsum_norm(psi_t - psi)
    if unitary:
        op_lifted = lifted_operator_distance(A, B, n)
        psi_t_meas = psi_t
    else:
        op_lifted = lifted_operator_distance_dense(A, B, n)
        psi_t_meas = psi_t / _fsum_norm(psi_t)
    p = OutcomeDistribution(m, n, np.abs(psi) ** 2)
    q = OutcomeDistribution(m, n, np.abs(psi_t_meas) ** 2)
    l1 = l1_distance(p, q)
    return DistanceReport(
        l1=l1,
        tv=0.5 * l1,
        state_euclid=euclid,
        trace_dist=trace_distance_pure(psi, psi_t_meas),
        op_dist_lifted=op_lifted,
        op_dist_base=operator_distance(A, B),
        n=n,
        unitary=unitary,
    )
