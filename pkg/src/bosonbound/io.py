"""File formats: matrix JSON, lifted-matrix JSON, distribution CSV, network JSON."""

import csv
import io
import json

import numpy as np

from .errors import ContractError, DimensionError
from .fock import OutcomeDistribution, enumerate_outcomes
from .interferometer import InterferometerNetwork


def _reject_constant(name):
    raise ContractError(f"non-finite value {name} in matrix file")


def matrix_to_dict(M):
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError("refusing to serialize NaN/Inf entries")
    rows, cols = A.shape
    return {
        "rows": rows,
        "cols": cols,
        "entries": [[float(z.real), float(z.imag)] for z in A.ravel()],
    }


def matrix_from_dict(data):
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = data["entries"]
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise DimensionError(f"{len(entries)} entries do not fill a {rows}x{cols} matrix")
    arr = np.array(entries, dtype=np.float64)
    if arr.shape != (rows * cols, 2):
        raise DimensionError("each entry must be a [re, im] pair")
    if not np.all(np.isfinite(arr)):
        raise ContractError("matrix file contains NaN/Inf")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(rows, cols)


def loads_matrix(text):
    return matrix_from_dict(json.loads(text, parse_constant=_reject_constant))


def dumps_matrix(M, **header):
    data = dict(header)
    data.update(matrix_to_dict(M))
    return json.dumps(data)


def load_matrix(path):
    with open(path) as fh:
        return loads_matrix(fh.read())


def save_matrix(path, M, **header):
    with open(path, "w") as fh:
        fh.write(dumps_matrix(M, **header))
        fh.write("\n")


def dumps_lifted(L, m, n):
    """Lifted matrix in the matrix format plus ``{"m", "n", "ordering": "lex"}``."""
    return dumps_matrix(L, m=m, n=n, ordering="lex")


def format_outcome(state):
    return "|".join(str(int(s)) for s in state)


def parse_outcome(text):
    return tuple(int(s) for s in text.split("|"))


def dumps_distribution(dist):
    """CSV with header ``outcome,probability``; probabilities to 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["outcome", "probability"])
    for state, p in zip(enumerate_outcomes(dist.m, dist.n), dist.probs):
        writer.writerow([format_outcome(state), format(float(p), ".17g")])
    return buf.getvalue()


def loads_distribution(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["outcome", "probability"]:
        raise ContractError(f"unexpected distribution header {header}")
    rows = [(parse_outcome(o), float(p)) for o, p in reader]
    if not rows:
        raise ContractError("empty distribution file")
    m, n = len(rows[0][0]), sum(rows[0][0])
    probs = np.zeros(len(enumerate_outcomes(m, n)))
    order = {s: i for i, s in enumerate(enumerate_outcomes(m, n))}
    for state, p in rows:
        if state not in order:
            raise ContractError(f"outcome {state} is not an (m={m}, n={n}) state")
        probs[order[state]] = p
    return OutcomeDistribution(m, n, probs)


def dumps_network(net):
    return json.dumps(net.to_dict())


def loads_network(text):
    return InterferometerNetwork.from_dict(json.loads(text, parse_constant=_reject_constant))
