"""Multipartite density matrices: reductions, partial transpose, purification,
complements, entropies, and conditioned marginals.

Conventions (these matter for partial trace/transpose):
  * ``dims`` lists subsystem dimensions left to right in tensor-factor order.
  * Flattening is row-major, so basis state |a b e> sits at index
    ``(a * d_B + b) * d_E + e``.
  * Subsystems are indexed from 0.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from math import prod, sqrt
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    NotNormalizedError,
    StateFormatError,
    SubsystemError,
)
from .kernels import DEFAULT_RANK_TOL, hermitian_eig

#: Validation tolerances for density-matrix invariants.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10

#: Unit-norm tolerance for pure-state amplitude vectors.
NORM_TOL = 1e-12

#: Default threshold on the partial-transpose witness eigenvalue.
DEFAULT_PPT_TOL = 1e-9


def _validated_dims(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise StateFormatError(f"subsystem dimensions must all be >= 1, got {out}")
    return out


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive unit-trace Hermitian matrix over a list of subsystems.

    Construction validates the state invariants: Hermiticity within 1e-10,
    unit trace within 1e-10, and eigenvalues >= -1e-10.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _validated_dims(self.dims)
        arr = np.array(self.matrix, dtype=np.complex128)
        d = prod(dims)
        if arr.shape != (d, d):
            raise StateFormatError(
                f"matrix shape {arr.shape} does not match dims {dims} (total {d})"
            )
        if not np.all(np.isfinite(arr)):
            raise StateFormatError("matrix contains non-finite entries")
        if np.max(np.abs(arr - arr.conj().T)) > HERMITICITY_TOL:
            raise StateFormatError(f"matrix is not Hermitian within {HERMITICITY_TOL:g}")
        tr = arr.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateFormatError(f"trace {tr:.12g} is not 1 within {TRACE_TOL:g}")
        min_eig = float(np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)[0])
        if min_eig < EIGENVALUE_FLOOR:
            raise StateFormatError(
                f"matrix has negative eigenvalue {min_eig:.3e} below {EIGENVALUE_FLOOR:g}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    @staticmethod
    def from_pure(vector, dims: Sequence[int]) -> "DensityMatrix":
        """Rank-one state |v><v| from a unit amplitude vector."""
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-9:
            raise NotNormalizedError(f"vector norm {nrm:.12g} is not 1")
        return DensityMatrix(tuple(dims), np.outer(v, v.conj()))

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }


@dataclass(frozen=True, eq=False)
class TripartitePureState:
    """Unit vector over A (x) B (x) E with ``dims = (d_A, d_B, d_E)``."""

    dims: tuple[int, int, int]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _validated_dims(self.dims)
        if len(dims) != 3:
            raise StateFormatError(f"expected three subsystem dimensions, got {dims}")
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amp.size != prod(dims):
            raise StateFormatError(
                f"amplitude count {amp.size} does not match dims {dims}"
            )
        if not np.all(np.isfinite(amp)):
            raise StateFormatError("amplitude vector contains non-finite entries")
        nrm = float(np.linalg.norm(amp))
        if abs(nrm - 1.0) > NORM_TOL:
            raise NotNormalizedError(f"state norm {nrm:.15g} is not 1 within {NORM_TOL:g}")
        amp.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amp)

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "vector": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }


class PptVerdict(NamedTuple):
    """PPT decision plus the minimum partial-transpose eigenvalue as witness.

    ``marginal`` flags near-boundary verdicts with ``|witness| < 10 * tol``.
    """

    is_ppt: bool
    witness: float
    marginal: bool


def _check_subsystems(dims: tuple[int, ...], subsystems: Iterable[int]) -> tuple[int, ...]:
    subs = tuple(int(s) for s in subsystems)
    if not subs:
        raise SubsystemError("subsystem set must be nonempty")
    if len(set(subs)) != len(subs):
        raise SubsystemError(f"duplicate subsystem indices in {subs}")
    if any(s < 0 or s >= len(dims) for s in subs):
        raise SubsystemError(f"subsystem indices {subs} out of range for dims {dims}")
    return subs


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not in ``keep``.

    Kept subsystems stay in ascending index order.
    """
    keep_set = sorted(_check_subsystems(rho.dims, keep))
    n = len(rho.dims)
    tensor = rho.matrix.reshape(*rho.dims, *rho.dims)
    row = list(string.ascii_lowercase[:n])
    col = list(string.ascii_lowercase[n : 2 * n])
    for i in range(n):
        if i not in keep_set:
            col[i] = row[i]
    out = "".join(row[i] for i in keep_set) + "".join(col[i] for i in keep_set)
    reduced = np.einsum("".join(row + col) + "->" + out, tensor)
    d_keep = prod(rho.dims[i] for i in keep_set)
    return DensityMatrix(
        tuple(rho.dims[i] for i in keep_set), reduced.reshape(d_keep, d_keep)
    )


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose one tensor factor; returns a plain (possibly non-PSD) matrix."""
    (sub,) = _check_subsystems(rho.dims, (subsystem,))
    n = len(rho.dims)
    tensor = rho.matrix.reshape(*rho.dims, *rho.dims)
    transposed = np.swapaxes(tensor, sub, n + sub)
    return np.ascontiguousarray(transposed.reshape(rho.dim, rho.dim))


def is_ppt(rho: DensityMatrix, tol: float = DEFAULT_PPT_TOL) -> PptVerdict:
    """PPT test for a bipartite state: min partial-transpose eigenvalue >= -tol."""
    if len(rho.dims) != 2:
        raise SubsystemError(f"PPT test needs a bipartite state, got dims {rho.dims}")
    witness = float(hermitian_eig(partial_transpose(rho, 1)).eigenvalues[-1])
    return PptVerdict(witness >= -tol, witness, abs(witness) < 10.0 * tol)


def von_neumann_entropy(rho: DensityMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """Entropy -Tr(rho log2 rho) in bits; eigenvalues below the cutoff contribute 0."""
    spectrum = hermitian_eig(rho.matrix)
    k = spectrum.retained_count(rank_tol)
    lams = spectrum.eigenvalues[:k]
    return float(-np.sum(lams * np.log2(lams))) if k else 0.0


def coherent_information(rho: DensityMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """S(second marginal) - S(state) in bits; the hashing rate toward the second party."""
    if len(rho.dims) != 2:
        raise SubsystemError(f"coherent information needs a bipartite state, got dims {rho.dims}")
    return von_neumann_entropy(partial_trace(rho, (1,)), rank_tol) - von_neumann_entropy(
        rho, rank_tol
    )


def purify(rho: DensityMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> TripartitePureState:
    """Canonical purification of a bipartite state.

    The purifying register E has dimension rank(rho) and carries the standard
    basis paired with eigenvalues in descending order, which pins down the
    isometric freedom and makes the output reproducible. Degenerate
    eigenvalues keep the eigensolver's order.
    """
    if len(rho.dims) != 2:
        raise SubsystemError(f"purification needs a bipartite state, got dims {rho.dims}")
    spectrum = hermitian_eig(rho.matrix)
    k = spectrum.retained_count(rank_tol)
    lams = spectrum.eigenvalues[:k]
    vecs = spectrum.eigenvectors[:, :k]
    # amp[(a*dB + b), e] = sqrt(lam_e) <ab|e_e>; C-order ravel is (a, b, e) row-major.
    amp = (vecs * np.sqrt(lams)).ravel()
    amp = amp / np.linalg.norm(amp)
    return TripartitePureState((rho.dims[0], rho.dims[1], k), amp)


def complement(rho: DensityMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> DensityMatrix:
    """AE reduction of the canonical purification of a bipartite state."""
    psi = purify(rho, rank_tol)
    return partial_trace(psi.density_matrix(), (0, 2))


def conditional_marginal(rho: DensityMatrix, phi) -> np.ndarray:
    """Unnormalized B-marginal after projecting A onto |phi>.

    Returns Tr_A[(|phi><phi| (x) 1_B) rho] as a PSD matrix with trace
    <phi|rho_A|phi> <= 1. Left unnormalized on purpose: its rank is the
    quantity of interest and the trace can be arbitrarily small.
    """
    if len(rho.dims) != 2:
        raise SubsystemError(f"conditioned marginal needs a bipartite state, got dims {rho.dims}")
    v = np.asarray(phi, dtype=np.complex128).reshape(-1)
    if v.size != rho.dims[0]:
        raise SubsystemError(
            f"conditioning vector has length {v.size}, expected d_A = {rho.dims[0]}"
        )
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-9:
        raise NotNormalizedError(f"conditioning vector norm {nrm:.12g} is not 1")
    tensor = rho.matrix.reshape(*rho.dims, *rho.dims)
    return np.einsum("a,abcd,c->bd", v.conj(), tensor, v)


def schmidt_rank(vector, dims: Sequence[int], rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical Schmidt rank of a bipartite unit vector.

    The vector is reshaped to a ``dims[0] x dims[1]`` coefficient matrix and
    the singular values above ``rank_tol * s_max`` are counted.
    """
    d1, d2 = (int(d) for d in dims)
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    if v.size != d1 * d2:
        raise SubsystemError(f"vector of length {v.size} does not match bipartition {d1}x{d2}")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-9:
        raise NotNormalizedError(f"vector norm {nrm:.12g} is not 1")
    s = np.linalg.svd(v.reshape(d1, d2), compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


# --- named small states used across tests and the CLI ---------------------


def bell_state() -> DensityMatrix:
    """(|00> + |11>)/sqrt(2) as a two-qubit density matrix."""
    v = np.zeros(4, dtype=np.complex128)
    v[0] = v[3] = 1.0 / sqrt(2.0)
    return DensityMatrix.from_pure(v, (2, 2))


def ghz_state() -> TripartitePureState:
    """(|000> + |111>)/sqrt(2) on three qubits."""
    v = np.zeros(8, dtype=np.complex128)
    v[0] = v[7] = 1.0 / sqrt(2.0)
    return TripartitePureState((2, 2, 2), v)


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    d = prod(int(x) for x in dims)
    return DensityMatrix(tuple(dims), np.eye(d, dtype=np.complex128) / d)


# --- JSON document handling -------------------------------------------------


def _pairs_to_complex(entries, what: str) -> np.ndarray:
    try:
        arr = np.asarray(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise StateFormatError(f"{what}: entries must be [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise StateFormatError(f"{what}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def density_matrix_from_dict(doc: dict) -> DensityMatrix:
    if "dims" not in doc or "matrix" not in doc:
        raise StateFormatError('density-matrix document needs "dims" and "matrix" keys')
    matrix = _pairs_to_complex(doc["matrix"], "matrix")
    if matrix.ndim != 2:
        raise StateFormatError("matrix must be a list of rows of [re, im] pairs")
    return DensityMatrix(tuple(doc["dims"]), matrix)


def pure_state_from_dict(doc: dict) -> TripartitePureState:
    if "dims" not in doc or "vector" not in doc:
        raise StateFormatError('pure-state document needs "dims" and "vector" keys')
    vector = _pairs_to_complex(doc["vector"], "vector")
    if vector.ndim != 1:
        raise StateFormatError("vector must be a flat list of [re, im] pairs")
    if len(doc["dims"]) != 3:
        raise StateFormatError('pure-state ("vector") documents must declare three dims')
    return TripartitePureState(tuple(doc["dims"]), vector)


def state_from_dict(doc) -> DensityMatrix | TripartitePureState:
    """Schema-discriminated load: "matrix" -> DensityMatrix, "vector" -> pure state."""
    if not isinstance(doc, dict):
        raise StateFormatError("state document must be a JSON object")
    if "matrix" in doc:
        return density_matrix_from_dict(doc)
    if "vector" in doc:
        return pure_state_from_dict(doc)
    raise StateFormatError('state document needs a "matrix" or "vector" key')
