"""Classical surface export.

Samples a tuple of matrix-valued coordinate functions on a (q, phi) grid,
diagonalizes the sheet structure pointwise, and emits one CSV row per sheet
and sample with the coordinate values plus a diagonality figure of merit.

Only makes sense when the coordinate functions commute to good accuracy as
matrix functions; the export refuses otherwise.
"""

from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from .errors import CapabilityError, DomainError
from .fourier import MatrixFourierFunction
from .verify import matrix_fn_commutator_sup

_DIAG_TOL = 1e-12


def _sample_grid(interval, shape):
    nq, nphi = shape
    if nq < 1 or nphi < 1:
        raise DomainError("surface grid must have at least one sample per axis")
    q1, q2 = interval
    qs = np.linspace(q1, q2, nq)
    phis = np.linspace(0.0, 2.0 * np.pi, nphi, endpoint=False)
    return qs, phis


def check_commutation(coords: Sequence[MatrixFourierFunction], bound: float,
                      samples: int = 48):
    """Pairwise sup-norm commutators; raise with a diagnostic above bound."""
    worst = 0.0
    worst_pair = None
    for i in range(len(coords)):
        for j in range(i + 1, len(coords)):
            sup = matrix_fn_commutator_sup(coords[i], coords[j], samples=samples)
            if sup > worst:
                worst = sup
                worst_pair = (i, j)
    if worst_pair is not None and worst > bound:
        i, j = worst_pair
        raise CapabilityError(
            f"coordinate functions {i} and {j} do not commute as matrix "
            f"functions: sup-norm commutator {worst:.3e} exceeds bound {bound:.3e}"
        )
    return worst


def _pick_resolving(values: np.ndarray) -> int:
    """Index of the first coordinate whose samples are not all scalar.

    values has shape (d, nq, nphi, S, S).
    """
    d, _, _, S, _ = values.shape
    eye = np.eye(S)
    for k in range(d):
        v = values[k]
        scal = np.trace(v, axis1=-2, axis2=-1)[..., None, None] / S * eye
        if np.max(np.abs(v - scal)) > 1e-10:
            return k
    return 0


def export_classical_surface(coords: Sequence[MatrixFourierFunction],
                             grid: Tuple[int, int] = (33, 32),
                             bound: float = 1e-2,
                             commutator_samples: int = 48):
    """Rows (sheet, q, phi, x_1..x_d, offdiag) for the diagonalized sheets.

    Returns (header, rows) where rows is a list of float tuples.  The first
    coordinate with genuine sheet structure picks the eigenbasis at each
    sample; samples where it is already diagonal keep their index order, so
    sheet k then reads entry (k, k) directly.
    """
    coords = tuple(coords)
    if not coords:
        raise DomainError("need at least one coordinate function")
    S = coords[0].S
    interval = coords[0].interval
    for c in coords[1:]:
        if c.S != S or c.interval != interval:
            raise DomainError("coordinate functions must share block size and interval")
    check_commutation(coords, bound, samples=commutator_samples)
    qs, phis = _sample_grid(interval, grid)
    Q, P = np.meshgrid(qs, phis, indexing="ij")
    values = np.stack([c.eval(Q, P) for c in coords])  # (d, nq, nphi, S, S)
    d = len(coords)
    anchor = _pick_resolving(values)
    header = ["sheet", "q", "phi"] + [f"x{k + 1}" for k in range(d)] + ["offdiag"]
    rows = []
    for iq in range(len(qs)):
        for ip in range(len(phis)):
            A = values[anchor, iq, ip]
            off = A - np.diag(np.diagonal(A))
            if np.max(np.abs(off)) <= _DIAG_TOL:
                V = np.eye(S)
            else:
                _, V = np.linalg.eigh(A)
            rotated = np.einsum("as,kab,bt->kst", V.conj(), values[:, iq, ip], V)
            diag_entries = rotated[:, np.arange(S), np.arange(S)]  # (d, S)
            offmax = float(np.max(np.abs(
                rotated - diag_entries[:, :, None] * np.eye(S))))
            diag = np.real(diag_entries)
            for s in range(S):
                rows.append((float(s), float(qs[iq]), float(phis[ip]),
                             *[float(diag[k, s]) for k in range(d)], offmax))
    return header, rows


def surface_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = [f"{int(row[0])}"] + [f"{v:.10g}" for v in row[1:]]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_surface_csv(path, coords, grid=(33, 32), bound=1e-2):
    header, rows = export_classical_surface(coords, grid=grid, bound=bound)
    text = surface_csv(header, rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return len(rows)
