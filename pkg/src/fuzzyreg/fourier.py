"""Fourier functions on the cylinder [q1,q2] x [0,2pi).

A `FourierFunction` is a finite series f(q,phi) = sum_n f_n(q) e^{i n phi}
whose coefficients are `ComplexProfile`s of q.  Products, phi-derivatives,
q-derivatives and Poisson brackets act on the coefficient tables exactly.

`MatrixFourierFunction` is an SxS grid of such series sharing one interval.
"""

from __future__ import annotations

import numpy as np

from .errors import CapabilityError, DomainError
from .profiles import ComplexProfile, profile_from_dict

_INTERVAL_TOL = 1e-12


def _check_same_interval(a, b):
    if abs(a.interval[0] - b.interval[0]) > _INTERVAL_TOL or abs(
        a.interval[1] - b.interval[1]
    ) > _INTERVAL_TOL:
        raise DomainError(f"interval mismatch: {a.interval} vs {b.interval}")


class FourierFunction:
    """Finite Fourier series in phi with q-dependent coefficients."""

    def __init__(self, interval, coeffs):
        q1, q2 = float(interval[0]), float(interval[1])
        if not q1 < q2:
            raise DomainError(f"empty interval [{q1}, {q2}]")
        self.interval = (q1, q2)
        table = {}
        for n, c in coeffs.items():
            c = ComplexProfile.coerce(c)
            if not c.is_zero():
                table[int(n)] = c
        self.coeffs = table

    # --- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, interval, value=1.0):
        return cls(interval, {0: ComplexProfile.from_const(value)})

    @classmethod
    def single_mode(cls, interval, n, coeff=1.0):
        return cls(interval, {n: ComplexProfile.coerce(coeff)})

    @classmethod
    def from_profile(cls, interval, profile):
        """phi-independent function f(q) as a mode-0 series."""
        return cls(interval, {0: ComplexProfile.coerce(profile)})

    @classmethod
    def cosine(cls, interval, n, amplitude=1.0):
        """amplitude(q) * cos(n*phi)."""
        amp = ComplexProfile.coerce(amplitude)
        half = amp * 0.5
        return cls(interval, {n: half, -n: half})

    @classmethod
    def sine(cls, interval, n, amplitude=1.0):
        """amplitude(q) * sin(n*phi)."""
        amp = ComplexProfile.coerce(amplitude)
        return cls(interval, {n: amp * (-0.5j), -n: amp * (0.5j)})

    # --- basic queries --------------------------------------------------------

    @property
    def cutoff(self):
        """Largest |n| with a stored coefficient (0 for the zero function)."""
        return max((abs(n) for n in self.coeffs), default=0)

    def modes(self):
        return sorted(self.coeffs)

    def coeff(self, n) -> ComplexProfile:
        return self.coeffs.get(n, ComplexProfile.from_const(0.0))

    def _check_q(self, q):
        qa = np.asarray(q, dtype=float)
        lo, hi = self.interval
        pad = _INTERVAL_TOL * max(1.0, abs(lo), abs(hi))
        if np.any(qa < lo - pad) or np.any(qa > hi + pad):
            raise DomainError(f"q outside interval {self.interval}")
        return qa

    def eval(self, q, phi):
        """Direct summation sum_n f_n(q) e^{i n phi}."""
        qa = self._check_q(q)
        pa = np.asarray(phi, dtype=float)
        out = np.zeros(np.broadcast(qa, pa).shape, dtype=complex)
        for n, c in self.coeffs.items():
            out = out + c(qa) * np.exp(1j * n * pa)
        return out

    def coeff_values(self, q):
        """Evaluate all coefficients at q; returns {n: complex array}."""
        qa = self._check_q(q)
        return {n: c(qa) for n, c in self.coeffs.items()}

    def is_real_valued(self, q_samples=None, tol=1e-12) -> bool:
        """Check conj(f_n) = f_{-n} on a sample grid."""
        if q_samples is None:
            q_samples = np.linspace(self.interval[0], self.interval[1], 17)
        qa = np.asarray(q_samples, dtype=float)
        for n in self.coeffs:
            a = self.coeff(n)(qa)
            b = self.coeff(-n)(qa)
            if np.max(np.abs(np.conj(a) - b)) > tol:
                return False
        return True

    # --- coefficient algebra ---------------------------------------------------

    def d_phi(self) -> "FourierFunction":
        """phi-derivative: mode n picks up a factor i*n."""
        return FourierFunction(
            self.interval, {n: c.times_i() * float(n) for n, c in self.coeffs.items()}
        )

    def d_q(self) -> "FourierFunction":
        """q-derivative of every coefficient profile (exact)."""
        for n, c in self.coeffs.items():
            if not c.differentiable:
                raise CapabilityError(f"coefficient of mode {n} is not differentiable")
        return FourierFunction(
            self.interval, {n: c.derivative() for n, c in self.coeffs.items()}
        )

    def __add__(self, other):
        _check_same_interval(self, other)
        table = dict(self.coeffs)
        for n, c in other.coeffs.items():
            table[n] = table[n] + c if n in table else c
        return FourierFunction(self.interval, table)

    def __neg__(self):
        return self * (-1.0)

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, other):
        if np.isscalar(other):
            return FourierFunction(
                self.interval, {n: c * other for n, c in self.coeffs.items()}
            )
        return mul(self, other)

    __rmul__ = __mul__

    def conjugate(self) -> "FourierFunction":
        """Pointwise complex conjugate: coefficient n becomes conj(f_{-n})."""
        return FourierFunction(
            self.interval, {-n: c.conjugate() for n, c in self.coeffs.items()}
        )

    def truncate(self, delta: int) -> "FourierFunction":
        """Drop modes with |n| > delta (explicit, never silent)."""
        return FourierFunction(
            self.interval, {n: c for n, c in self.coeffs.items() if abs(n) <= delta}
        )

    def shift_modes(self, k: int) -> "FourierFunction":
        """Multiply by e^{i k phi}: coefficient n moves to n+k."""
        return FourierFunction(self.interval, {n + k: c for n, c in self.coeffs.items()})

    # --- serialization ----------------------------------------------------------

    def to_dict(self):
        return {
            "interval": list(self.interval),
            "coeffs": [{"n": n, **self.coeffs[n].to_dict()} for n in self.modes()],
        }

    @classmethod
    def from_dict(cls, d):
        table = {
            int(entry["n"]): ComplexProfile(
                profile_from_dict(entry["re"]), profile_from_dict(entry["im"])
            )
            for entry in d["coeffs"]
        }
        return cls(tuple(d["interval"]), table)

    def __repr__(self):
        return f"FourierFunction({self.interval}, modes={self.modes()})"


def mul(f: FourierFunction, g: FourierFunction) -> FourierFunction:
    """Pointwise product via coefficient convolution; cutoff grows to d_f + d_g."""
    _check_same_interval(f, g)
    table = {}
    for j, cf in f.coeffs.items():
        for k, cg in g.coeffs.items():
            n = j + k
            term = cf * cg
            table[n] = table[n] + term if n in table else term
    return FourierFunction(f.interval, table)


def poisson_bracket(f: FourierFunction, g: FourierFunction) -> FourierFunction:
    """{f,g} = d_phi(f) d_q(g) - d_q(f) d_phi(g)  (so {q, phi} = -1)."""
    return mul(f.d_phi(), g.d_q()) - mul(f.d_q(), g.d_phi())


class MatrixFourierFunction:
    """S x S matrix of FourierFunctions on one interval."""

    def __init__(self, interval, entries):
        q1, q2 = float(interval[0]), float(interval[1])
        if not q1 < q2:
            raise DomainError(f"empty interval [{q1}, {q2}]")
        self.interval = (q1, q2)
        S = len(entries)
        grid = []
        for row in entries:
            if len(row) != S:
                raise DomainError("entries must form a square grid")
            grid_row = []
            for e in row:
                if e is None:
                    e = FourierFunction(self.interval, {})
                _check_same_interval(self, e)
                grid_row.append(e)
            grid.append(tuple(grid_row))
        self.entries = tuple(grid)
        self.S = S

    @classmethod
    def diagonal(cls, fns):
        """diag(f_1, ..., f_S)."""
        fns = list(fns)
        S = len(fns)
        interval = fns[0].interval
        rows = [[fns[a] if a == b else None for b in range(S)] for a in range(S)]
        return cls(interval, rows)

    @classmethod
    def from_scalar(cls, f: FourierFunction):
        return cls(f.interval, [[f]])

    @property
    def cutoff(self):
        return max((e.cutoff for row in self.entries for e in row), default=0)

    def entry(self, a, b) -> FourierFunction:
        return self.entries[a][b]

    def eval(self, q, phi):
        """S x S complex array (extra leading axes for array-valued q, phi)."""
        qa = np.asarray(q, dtype=float)
        pa = np.asarray(phi, dtype=float)
        shape = np.broadcast(qa, pa).shape
        out = np.zeros(shape + (self.S, self.S), dtype=complex)
        for a in range(self.S):
            for b in range(self.S):
                e = self.entries[a][b]
                if e.coeffs:
                    out[..., a, b] = e.eval(qa, pa)
        return out

    def conjugate_transpose(self) -> "MatrixFourierFunction":
        rows = [
            [self.entries[b][a].conjugate() for b in range(self.S)] for a in range(self.S)
        ]
        return MatrixFourierFunction(self.interval, rows)

    def is_hermitian(self, q_samples=None, tol=1e-12) -> bool:
        """Coefficient-level check F_{ab,n} = conj(F_{ba,-n}) on sampled q."""
        if q_samples is None:
            q_samples = np.linspace(self.interval[0], self.interval[1], 17)
        qa = np.asarray(q_samples, dtype=float)
        for a in range(self.S):
            for b in range(self.S):
                e = self.entries[a][b]
                other = self.entries[b][a]
                for n in set(e.coeffs) | {-m for m in other.coeffs}:
                    lhs = e.coeff(n)(qa)
                    rhs = np.conj(other.coeff(-n)(qa))
                    if np.max(np.abs(lhs - rhs)) > tol:
                        return False
        return True

    def matmul(self, other: "MatrixFourierFunction") -> "MatrixFourierFunction":
        _check_same_interval(self, other)
        if self.S != other.S:
            raise DomainError("matrix size mismatch")
        S = self.S
        rows = []
        for a in range(S):
            row = []
            for b in range(S):
                acc = FourierFunction(self.interval, {})
                for k in range(S):
                    acc = acc + mul(self.entries[a][k], other.entries[k][b])
                row.append(acc)
            rows.append(row)
        return MatrixFourierFunction(self.interval, rows)

    def map_entries(self, fn) -> "MatrixFourierFunction":
        rows = [[fn(e) for e in row] for row in self.entries]
        return MatrixFourierFunction(self.interval, rows)

    def __add__(self, other):
        _check_same_interval(self, other)
        if self.S != other.S:
            raise DomainError("matrix size mismatch")
        rows = [
            [self.entries[a][b] + other.entries[a][b] for b in range(self.S)]
            for a in range(self.S)
        ]
        return MatrixFourierFunction(self.interval, rows)

    def __sub__(self, other):
        return self + other.map_entries(lambda e: e * (-1.0))

    def __mul__(self, scalar):
        return self.map_entries(lambda e: e * scalar)

    __rmul__ = __mul__

    def truncate(self, delta: int) -> "MatrixFourierFunction":
        return self.map_entries(lambda e: e.truncate(delta))

    def to_dict(self):
        return {
            "interval": list(self.interval),
            "S": self.S,
            "entries": [[e.to_dict() for e in row] for row in self.entries],
        }

    @classmethod
    def from_dict(cls, d):
        rows = [[FourierFunction.from_dict(e) for e in row] for row in d["entries"]]
        return cls(tuple(d["interval"]), rows)

    def __repr__(self):
        return f"MatrixFourierFunction(S={self.S}, interval={self.interval})"
