"""Rectangular beamsplitter meshes: decomposition, recomposition, component noise.

A beamsplitter on adjacent modes ``(i, i+1)`` acts by the 2 x 2 block

    T(theta, phi) = [[e^{i phi} cos(theta), -sin(theta)],
                     [e^{i phi} sin(theta),  cos(theta)]]

and a network composes as ``diag(e^{i output_phases}) @ L_K @ ... @ L_1``,
layer 1 acting first. :func:`decompose` follows the rectangular nulling
scheme of Clements et al.: alternate column and row eliminations along
anti-diagonals, then commute the residual diagonal to the output.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ParameterError, StructureError
from .linalg import require_unitary


@dataclass(frozen=True)
class Beamsplitter:
    mode: int
    theta: float
    phi: float

    @property
    def modes(self):
        return (self.mode, self.mode + 1)

    def block(self):
        c, s = math.cos(self.theta), math.sin(self.theta)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([[e * c, -s], [e * s, c]], dtype=np.complex128)

    def embed(self, m):
        out = np.eye(m, dtype=np.complex128)
        i = self.mode
        out[i : i + 2, i : i + 2] = self.block()
        return out

    def to_dict(self):
        return {"type": "bs", "modes": [self.mode, self.mode + 1], "theta": self.theta, "phi": self.phi}


@dataclass(frozen=True)
class Phaseshifter:
    mode: int
    phase: float

    @property
    def modes(self):
        return (self.mode,)

    def embed(self, m):
        out = np.eye(m, dtype=np.complex128)
        out[self.mode, self.mode] = complex(math.cos(self.phase), math.sin(self.phase))
        return out

    def to_dict(self):
        return {"type": "ps", "mode": self.mode, "phase": self.phase}


@dataclass(frozen=True)
class InterferometerNetwork:
    m: int
    layers: tuple = ()
    output_phases: tuple = field(default=None)

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        for k, layer in enumerate(layers):
            used = set()
            for comp in layer:
                if any(q < 0 or q >= self.m for q in comp.modes):
                    raise StructureError(f"layer {k}: component {comp} outside modes 0..{self.m - 1}")
                if used.intersection(comp.modes):
                    raise StructureError(f"layer {k}: components overlap on modes {comp.modes}")
                used.update(comp.modes)
        phases = self.output_phases
        phases = (0.0,) * self.m if phases is None else tuple(float(p) for p in phases)
        if len(phases) != self.m:
            raise StructureError(f"need {self.m} output phases, got {len(phases)}")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "output_phases", phases)

    @property
    def depth(self):
        """Number of component layers (the output phase screen is not counted)."""
        return len(self.layers)

    @property
    def noisy_depth(self):
        """Layers that :func:`perturb_network` touches: the mesh plus the output phase screen."""
        return self.depth + 1

    def components(self):
        return [comp for layer in self.layers for comp in layer]

    def count(self, kind):
        return sum(isinstance(c, kind) for c in self.components())

    def to_dict(self):
        return {
            "m": self.m,
            "layers": [[c.to_dict() for c in layer] for layer in self.layers],
            "output_phases": list(self.output_phases),
        }

    @classmethod
    def from_dict(cls, data):
        layers = []
        for layer in data["layers"]:
            comps = []
            for c in layer:
                if c["type"] == "bs":
                    i, j = c["modes"]
                    if j != i + 1:
                        raise StructureError(f"beamsplitter modes must be adjacent, got {c['modes']}")
                    comps.append(Beamsplitter(int(i), float(c["theta"]), float(c["phi"])))
                elif c["type"] == "ps":
                    comps.append(Phaseshifter(int(c["mode"]), float(c["phase"])))
                else:
                    raise StructureError(f"unknown component type {c['type']!r}")
            layers.append(comps)
        return cls(int(data["m"]), layers, data.get("output_phases"))


def compose(net):
    """Unitary implemented by ``net``."""
    m = net.m
    U = np.eye(m, dtype=np.complex128)
    for layer in net.layers:
        L = np.eye(m, dtype=np.complex128)
        for comp in layer:
            idx = list(comp.modes)
            L[np.ix_(idx, idx)] = comp.embed(m)[np.ix_(idx, idx)]
        U = L @ U
    return np.exp(1j * np.asarray(net.output_phases))[:, None] * U


def _null_from_right(U, row, k):
    # T^-1 on columns (k, k+1) zeroing U[row, k]
    a, b = U[row, k], U[row, k + 1]
    if a == 0:
        return Beamsplitter(k, 0.0, 0.0)
    if b == 0:
        return Beamsplitter(k, math.pi / 2, 0.0)
    return Beamsplitter(k, math.atan2(abs(a), abs(b)), float(np.angle(a) - np.angle(b)))


def _null_from_left(U, col, k):
    # T on rows (k, k+1) zeroing U[k+1, col]
    a, b = U[k, col], U[k + 1, col]
    if b == 0:
        return Beamsplitter(k, 0.0, 0.0)
    if a == 0:
        return Beamsplitter(k, math.pi / 2, 0.0)
    return Beamsplitter(k, math.atan2(abs(b), abs(a)), float(math.pi + np.angle(b) - np.angle(a)))


def _apply_cols_inverse(U, bs):
    i = bs.mode
    U[:, i : i + 2] = U[:, i : i + 2] @ bs.block().conj().T


def _apply_rows(U, bs):
    i = bs.mode
    U[i : i + 2, :] = bs.block() @ U[i : i + 2, :]


def _schedule(m, sequence):
    """ASAP layering of components given in application order."""
    ready = [0] * m
    layers = []
    for comp in sequence:
        lvl = max(ready[q] for q in comp.modes)
        if lvl == len(layers):
            layers.append([])
        layers[lvl].append(comp)
        for q in comp.modes:
            ready[q] = lvl + 1
    return layers


def decompose(U):
    """Rectangular mesh of at most m(m-1)/2 beamsplitters realizing ``U``."""
    A = require_unitary(U).copy()
    m = A.shape[0]
    right, left = [], []
    for i in range(m - 1):
        if i % 2 == 0:
            for j in range(i + 1):
                bs = _null_from_right(A, m - 1 - j, i - j)
                _apply_cols_inverse(A, bs)
                right.append(bs)
        else:
            for j in range(i + 1):
                bs = _null_from_left(A, j, m - 2 - i + j)
                _apply_rows(A, bs)
                left.append(bs)
    # now (left_K ... left_1) U (right_1^-1 ... right_K^-1) = D
    d = np.diagonal(A).copy()
    pushed = []
    for bs in reversed(left):
        # T^-1(theta, phi) D = D' T(-theta, arg(d1/d2)), d1' = e^{-i phi} d2
        i = bs.mode
        if bs.theta == 0.0:
            # T(0, phi) is diagonal: fold it into D and keep an idle mesh site
            d[i] *= complex(math.cos(bs.phi), -math.sin(bs.phi))
            pushed.append(Beamsplitter(i, 0.0, 0.0))
            continue
        d1, d2 = d[i], d[i + 1]
        pushed.append(Beamsplitter(i, -bs.theta, float(np.angle(d1 / d2))))
        d[i] = complex(math.cos(bs.phi), -math.sin(bs.phi)) * d2
    # U = D' . pushed[-1] ... pushed[0] . right_K ... right_1
    sequence = right + pushed
    return InterferometerNetwork(m, _schedule(m, sequence), tuple(np.angle(d).tolist()))


def _bs_distance(theta0, phi0, theta, phi):
    T0 = Beamsplitter(0, theta0, phi0).block()
    T1 = Beamsplitter(0, theta, phi).block()
    return float(np.linalg.norm(T1 - T0, 2))


def _ray_limit(theta, phi, direction, eps, t_max=2 * math.pi, grid=256, iters=60):
    """Smallest t with ||T(params + t*direction) - T(params)|| = eps (t_max if never reached)."""
    dist = lambda t: _bs_distance(theta, phi, theta + t * direction[0], phi + t * direction[1])
    lo = 0.0
    for hi in np.linspace(0.0, t_max, grid + 1)[1:]:
        if dist(hi) >= eps:
            break
        lo = hi
    else:
        return t_max
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if dist(mid) >= eps:
            hi = mid
        else:
            lo = mid
    return lo


def perturb_network(net, eps, seed):
    """Independently jitter every component so that ``||A~ - A||_op <= eps``.

    Beamsplitters draw an offset uniformly from the unit disk in
    ``(theta, phi)`` space, scaled so that the disk boundary along the drawn
    direction sits exactly at operator distance ``eps``. Phaseshifters,
    including the output phase screen, draw a phase offset uniformly from
    ``[-a, a]`` with ``|e^{ia} - 1| = eps``.
    """
    if not 0.0 <= eps <= 2.0:
        raise ParameterError(f"eps must lie in [0, 2], got {eps}")
    if eps == 0.0:
        return net
    rng = np.random.default_rng(seed)
    max_shift = 2.0 * math.asin(eps / 2.0)

    def jitter_phase(p):
        return p + max_shift * rng.uniform(-1.0, 1.0)

    layers = []
    for layer in net.layers:
        new = []
        for comp in layer:
            if isinstance(comp, Beamsplitter):
                angle = rng.uniform(0.0, 2 * math.pi)
                radius = math.sqrt(rng.uniform())
                direction = (math.cos(angle), math.sin(angle))
                t = radius * _ray_limit(comp.theta, comp.phi, direction, eps)
                new.append(Beamsplitter(comp.mode, comp.theta + t * direction[0], comp.phi + t * direction[1]))
            else:
                new.append(Phaseshifter(comp.mode, jitter_phase(comp.phase)))
        layers.append(new)
    phases = tuple(jitter_phase(p) for p in net.output_phases)
    return InterferometerNetwork(net.m, layers, phases)


def component_errors(net, noisy):
    """Per-component operator distances between two networks of equal structure."""
    m = net.m
    errs = []
    for layer_a, layer_b in zip(net.layers, noisy.layers):
        for a, b in zip(layer_a, layer_b):
            errs.append(float(np.linalg.norm(b.embed(m) - a.embed(m), 2)))
    for pa, pb in zip(net.output_phases, noisy.output_phases):
        errs.append(abs(np.exp(1j * pb) - np.exp(1j * pa)))
    return errs


def layer_unitaries(net):
    """Each layer as an m x m unitary, followed by the output phase screen."""
    m = net.m
    mats = []
    for layer in net.layers:
        sub = InterferometerNetwork(m, [layer])
        mats.append(compose(sub))
    mats.append(np.diag(np.exp(1j * np.asarray(net.output_phases))))
    return mats
