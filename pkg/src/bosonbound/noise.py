"""Whole-matrix noise models and seed derivation."""

from dataclasses import asdict, dataclass
import json
import math

import numpy as np

from .errors import DecompositionError, ParameterError
from .linalg import as_square, require_unitary

MODELS = ("rotation", "gaussian", "component")

_MASK64 = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(*parts):
    """Fold integers into one 64-bit seed with the splitmix64 finalizer.

    ``mix_seed(a, b, c) = f(f(f(0 ^ a) ^ b) ^ c)`` with ``f`` = splitmix64.
    Order matters; negative inputs are taken modulo 2^64.
    """
    state = 0
    for p in parts:
        state = _splitmix64(state ^ (int(p) & _MASK64))
    return state


@dataclass(frozen=True)
class NoiseSpec:
    model: str
    epsilon: float
    seed: int

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"unknown noise model {self.model!r}; expected one of {MODELS}")
        if not self.epsilon >= 0:
            raise ParameterError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.model == "rotation" and self.epsilon > 2:
            raise ParameterError(f"rotation noise needs epsilon <= 2, got {self.epsilon}")

    def to_json(self):
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(str(data["model"]), float(data["epsilon"]), int(data["seed"]))


def complex_gaussian(rng, shape):
    """i.i.d. standard complex normals, ``E|g|^2 = 1``."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def perturb_unitary(U, eps, seed):
    """Rotate ``U`` by a random unitary to land at operator distance exactly ``eps``.

    ``Ut = U W`` with ``W = V diag(e^{i mu}) V*``: V diagonalizes a GUE draw
    and its eigenvalues are rescaled so that ``max |mu_j| = 2 arcsin(eps/2)``,
    hence ``||Ut - U||_op = max |e^{i mu_j} - 1| = eps``.
    """
    A = require_unitary(U)
    if not 0.0 <= eps <= 2.0:
        raise ParameterError(f"no two unitaries are {eps} apart; need 0 <= eps <= 2")
    if eps == 0.0:
        return A.copy()
    m = A.shape[0]
    rng = np.random.default_rng(seed)
    G = complex_gaussian(rng, (m, m))
    h, V = np.linalg.eigh((G + G.conj().T) / 2.0)
    mu = h * (2.0 * math.asin(eps / 2.0) / np.max(np.abs(h)))
    W = (V * np.exp(1j * mu)) @ V.conj().T
    return A @ W


def gaussian_perturb(U, eps, seed):
    """Additive Gaussian noise ``sqrt(1-eps) U + sqrt(eps) G / sqrt(m)``.

    The result is not unitary in general; see :func:`nearest_unitary`.
    """
    A = as_square(U)
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"gaussian noise needs 0 <= eps <= 1, got {eps}")
    m = A.shape[0]
    G = complex_gaussian(np.random.default_rng(seed), (m, m))
    return math.sqrt(1.0 - eps) * A + math.sqrt(eps) * G / math.sqrt(m)


def nearest_unitary(M, rcond=1e-12):
    """Unitary polar factor W of ``M = W P``, the closest unitary in operator norm."""
    A = as_square(M)
    X, s, Yh = np.linalg.svd(A)
    if s[-1] <= rcond * max(s[0], 1.0):
        raise DecompositionError(f"matrix is singular (smallest singular value {s[-1]:.3e})")
    return X @ Yh


def gaussian_opnorm_stat(m, trials, seed, scale=1.0):
    """Median over trials of ``||scale * G||_op / sqrt(m)`` for complex Ginibre G.

    Trial t draws from ``default_rng(mix_seed(seed, t))``.
    """
    if m < 8:
        raise ParameterError(f"m must be >= 8, got {m}")
    if trials < 10:
        raise ParameterError(f"trials must be >= 10, got {trials}")
    ratios = []
    for t in range(trials):
        G = scale * complex_gaussian(np.random.default_rng(mix_seed(seed, t)), (m, m))
        ratios.append(np.linalg.norm(G, 2) / math.sqrt(m))
    return float(np.median(ratios))
