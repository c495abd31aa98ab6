"""Structural and unitary operations on fuzzy matrices and spaces.

Includes the direct sum, the z-ordering permutation between the direct-sum
and block-entry layouts, lifts of constant small unitaries, interlacing,
partial (block) transformations, coefficient-level unitary conjugation of
matrix-valued functions, polynomial/entrywise coordinate recipes, and the
sorted-eigenbasis transformation with a fixed phase convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructureError
from .fourier import FourierFunction, MatrixFourierFunction
from .regularize import FuzzyMatrix, FuzzySpace

_SQ2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class SmallUnitary:
    """An S x S unitary acting on the block index."""

    matrix: np.ndarray

    def __post_init__(self):
        U = np.ascontiguousarray(self.matrix, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise StructureError("unitary must be square")
        err = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
        if err > 1e-12:
            raise StructureError(f"matrix is not unitary (deviation {err:.2e})")
        U.setflags(write=False)
        object.__setattr__(self, "matrix", U)

    @property
    def S(self) -> int:
        return self.matrix.shape[0]


def interlacing_unitary() -> SmallUnitary:
    """The 2x2 rotation mixing a mirror pair into antidiagonal form."""
    return SmallUnitary(_SQ2 * np.array([[1.0, -1.0], [1.0, 1.0]]))


def direct_sum_matrices(A: FuzzyMatrix, B: FuzzyMatrix) -> FuzzyMatrix:
    data = np.zeros((A.dim + B.dim, A.dim + B.dim), dtype=complex)
    data[: A.dim, : A.dim] = A.data
    data[A.dim :, A.dim :] = B.data
    return FuzzyMatrix(data, A.dim + B.dim, 1)


def direct_sum(s1: FuzzySpace, s2: FuzzySpace) -> FuzzySpace:
    if s1.d != s2.d:
        raise StructureError(f"coordinate counts differ: {s1.d} vs {s2.d}")
    coords = tuple(
        direct_sum_matrices(a, b) for a, b in zip(s1.coordinates, s2.coordinates)
    )
    return FuzzySpace(f"{s1.name}+{s2.name}", coords)


def _z_perm(N: int, S: int) -> np.ndarray:
    """perm[n*S + a] = a*N + n."""
    n = np.arange(N)
    perm = np.empty(N * S, dtype=int)
    for a in range(S):
        perm[n * S + a] = a * N + n
    return perm


def z_order(M: FuzzyMatrix, S: int) -> FuzzyMatrix:
    """Reindex a direct-sum layout (a, n) into the interleaved layout (n, a)."""
    S = int(S)
    if S < 1 or M.dim % S:
        raise StructureError(f"dimension {M.dim} not divisible by S = {S}")
    if S == 1:
        return M
    N = M.dim // S
    perm = _z_perm(N, S)
    return FuzzyMatrix(M.data[np.ix_(perm, perm)], N, S, M.hermitian, M.source)


def z_order_inverse(M: FuzzyMatrix, S: int) -> FuzzyMatrix:
    S = int(S)
    if S < 1 or M.dim % S:
        raise StructureError(f"dimension {M.dim} not divisible by S = {S}")
    if S == 1:
        return M
    N = M.dim // S
    inv = np.argsort(_z_perm(N, S))
    return FuzzyMatrix(M.data[np.ix_(inv, inv)], M.dim, 1, M.hermitian, M.source)


def lift_constant_unitary(U: SmallUnitary, N: int) -> FuzzyMatrix:
    """U acting on every block index: kron(I_N, U) in interleaved layout."""
    data = np.kron(np.eye(int(N)), U.matrix)
    return FuzzyMatrix(data, int(N), U.S)


def conjugate(M: FuzzyMatrix, V: FuzzyMatrix) -> FuzzyMatrix:
    """V† M V."""
    if M.dim != V.dim:
        raise StructureError("dimension mismatch")
    return FuzzyMatrix(V.data.conj().T @ M.data @ V.data, M.N, M.S, None, M.source)


def interlace(space: FuzzySpace) -> FuzzySpace:
    """Conjugate every coordinate by the lifted interlacing rotation (S = 2)."""
    first = space.coordinates[0]
    if first.S != 2:
        raise StructureError("interlacing acts on S = 2 block structure")
    V = lift_constant_unitary(interlacing_unitary(), first.N)
    coords = tuple(conjugate(c, V) for c in space.coordinates)
    generators = None
    if space.generators is not None:
        generators = tuple(interlace_function(F) for F in space.generators)
    return FuzzySpace(f"interlaced({space.name})", coords, generators, space.grid)


def constant_conjugate_function(
    F: MatrixFourierFunction, U: np.ndarray
) -> MatrixFourierFunction:
    """U† F U at coefficient level for a constant S x S matrix U."""
    U = np.asarray(U, dtype=complex)
    S = F.S
    if U.shape != (S, S):
        raise StructureError("size mismatch between U and F")
    rows = []
    for a in range(S):
        row = []
        for b in range(S):
            acc = FourierFunction(F.interval, {})
            for j in range(S):
                for k in range(S):
                    w = np.conj(U[j, a]) * U[k, b]
                    if w != 0:
                        acc = acc + F.entries[j][k] * w
            row.append(acc)
        rows.append(row)
    return MatrixFourierFunction(F.interval, rows)


def interlace_function(F: MatrixFourierFunction) -> MatrixFourierFunction:
    if F.S != 2:
        raise StructureError("interlacing acts on S = 2 block structure")
    return constant_conjugate_function(F, interlacing_unitary().matrix)


def block_transform(M: FuzzyMatrix, U: SmallUnitary, n0: int) -> FuzzyMatrix:
    """Conjugate by U on block indices n0..N-1 only, identity above.

    n0 = 0 is the full constant conjugation; n0 = N leaves M unchanged.
    """
    S = U.S
    if M.dim % S:
        raise StructureError(f"dimension {M.dim} not divisible by S = {S}")
    N = M.dim // S
    n0 = int(n0)
    if not 0 <= n0 <= N:
        raise StructureError(f"block split {n0} outside 0..{N}")
    data = np.eye(M.dim, dtype=complex)
    if n0 < N:
        data[n0 * S :, n0 * S :] = np.kron(np.eye(N - n0), U.matrix)
    V = FuzzyMatrix(data, N, S)
    out = conjugate(FuzzyMatrix(M.data, N, S, M.hermitian, M.source), V)
    return out


def function_unitary_conjugate(
    F: MatrixFourierFunction, U: MatrixFourierFunction, check_tol: float = 1e-10
) -> MatrixFourierFunction:
    """U F U† at coefficient level; U must be pointwise unitary on samples."""
    if U.S != F.S:
        raise StructureError("size mismatch between U and F")
    qs = np.linspace(F.interval[0], F.interval[1], 17)
    phis = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    vals = U.eval(qs[:, None], phis[None, :])
    gram = vals @ np.conj(np.swapaxes(vals, -1, -2))
    err = np.max(np.abs(gram - np.eye(U.S)))
    if err > check_tol:
        raise StructureError(f"U is not pointwise unitary (deviation {err:.2e})")
    return U.matmul(F).matmul(U.conjugate_transpose())


@dataclass
class TransformReport:
    """What a recipe did: one record per step, with any singular rows."""

    steps: list = field(default_factory=list)

    def add(self, op: str, singular_rows=()):
        self.steps.append({"op": op, "singular_rows": list(map(int, singular_rows))})

    @property
    def singular_rows(self):
        out = []
        for s in self.steps:
            out.extend(s["singular_rows"])
        return out


def matrix_poly_transform(space: FuzzySpace, recipe, return_report: bool = False):
    """Apply a list of coordinate-recipe steps and return the new space.

    Step forms:
      {"op": "poly", "terms": [{"coeff": c, "indices": [i, ...]}, ...],
       "target": index or "append"}
          new coordinate = sum of c * product of the listed coordinates.
      {"op": "reciprocal-diag", "source": i, "shift": s, "scale": c,
       "target": ..., "singular_tol": 1e-9}
          new diagonal coordinate with entries c / (s + M_nn); rows where
          |s + M_nn| < singular_tol are reported and their output set to 0.

    Entrywise steps require the source coordinate to be diagonal.
    """
    coords = list(space.coordinates)
    report = TransformReport()
    for step in recipe:
        op = step.get("op")
        if op == "poly":
            acc = np.zeros((space.dim, space.dim), dtype=complex)
            for term in step["terms"]:
                part = np.eye(space.dim, dtype=complex)
                for idx in term["indices"]:
                    part = part @ coords[idx].data
                acc += complex(term.get("coeff", 1.0)) * part
            new = FuzzyMatrix(acc, coords[0].N, coords[0].S)
            report.add("poly")
        elif op == "reciprocal-diag":
            src = coords[step["source"]]
            offdiag = src.data - np.diag(np.diag(src.data))
            if np.max(np.abs(offdiag)) > 1e-12:
                raise StructureError("entrywise recipe needs a diagonal source coordinate")
            shift = float(step.get("shift", 1.0))
            scale = float(step.get("scale", 1.0))
            tol = float(step.get("singular_tol", 1e-9))
            denom = shift + np.diag(src.data)
            bad = np.flatnonzero(np.abs(denom) < tol)
            vals = np.zeros(space.dim, dtype=complex)
            good = np.setdiff1d(np.arange(space.dim), bad)
            vals[good] = scale / denom[good]
            new = FuzzyMatrix(np.diag(vals), src.N, src.S)
            report.add("reciprocal-diag", bad)
        else:
            raise DomainError(f"unknown recipe op {op!r}")
        target = step.get("target", "append")
        if target == "append":
            coords.append(new)
        else:
            coords[int(target)] = new
    out = FuzzySpace(f"{space.name}*", tuple(coords), space.generators, space.grid)
    if return_report:
        return out, report
    return out


@dataclass(frozen=True)
class DiagonalizationReport:
    """Record of a sorted-eigenbasis transformation."""

    eigenvalues: np.ndarray
    permutation: tuple
    policy: str
    residual: float
    identity: bool = False


PHASE_POLICY = "real-anchor-v1"


def _phase_fix(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive."""
    W = np.array(V)
    for j in range(W.shape[1]):
        col = W[:, j]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        if pivot != 0:
            W[:, j] = col * (np.conj(pivot) / abs(pivot))
    return W


def diagonalize_coordinate(space: FuzzySpace, index: int):
    """Sort one Hermitian coordinate's eigenbasis and conjugate all coordinates.

    Eigenvalues ascend; each eigenvector's largest-magnitude component is made
    real positive (policy "real-anchor-v1").  For a real symmetric coordinate
    the eigenvector matrix is kept real, which renders conjugated real
    symmetric coordinates real and purely imaginary ones purely imaginary.
    """
    M = space.coordinates[index]
    if not M.is_hermitian(1e-10):
        raise StructureError(f"coordinate {index} is not Hermitian")
    A = M.data
    diag = np.diag(A)
    offdiag_max = np.max(np.abs(A - np.diag(diag))) if M.dim > 1 else 0.0
    if offdiag_max == 0.0 and np.all(np.diff(diag.real) >= 0):
        report = DiagonalizationReport(
            diag.real.copy(), tuple(range(M.dim)), PHASE_POLICY, 0.0, identity=True
        )
        return space, report
    if np.max(np.abs(A.imag)) < 1e-12:
        w, V = np.linalg.eigh(A.real)
        V = V.astype(complex)
    else:
        w, V = np.linalg.eigh(A)
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    V = _phase_fix(V)
    residual = float(np.max(np.abs(A - (V * w) @ V.conj().T)))
    if residual > 1e-10 * max(1.0, float(np.max(np.abs(w)))):
        raise StructureError(f"eigendecomposition residual too large: {residual:.2e}")
    P = FuzzyMatrix(V, M.N, M.S)
    coords = tuple(conjugate(c, P) for c in space.coordinates)
    report = DiagonalizationReport(w, tuple(int(i) for i in order), PHASE_POLICY, residual)
    return space.with_coordinates(coords, name=f"diag({space.name})"), report
