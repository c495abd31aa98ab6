"""Real-valued profile functions of the slow coordinate q.

Fourier coefficient tables store one profile per mode.  Profiles form a
small expression tree (constants, polynomials, clamped Hermite splines,
affine reparameterizations, sums and products), so q-derivatives are exact
rather than numerical.  Complex coefficients are handled by `ComplexProfile`,
a pair of real profiles.

All profiles accept scalars or numpy arrays and return numpy arrays of the
broadcast shape.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .errors import CapabilityError


def _asfloat(q):
    return np.asarray(q, dtype=float)


class Profile:
    """Base class: a real function of q with an optional exact derivative."""

    differentiable = True

    def __call__(self, q):
        raise NotImplementedError

    def derivative(self) -> "Profile":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise CapabilityError(f"{type(self).__name__} is not serializable")

    # --- composition helpers -------------------------------------------------

    def compose_affine(self, scale: float, shift: float) -> "Profile":
        """Profile of q -> self(scale*q + shift)."""
        if scale == 1.0 and shift == 0.0:
            return self
        return ComposedProfile(self, scale, shift)

    # --- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = as_profile(other)
        if isinstance(self, ConstantProfile) and isinstance(other, ConstantProfile):
            return ConstantProfile(self.value + other.value)
        if isinstance(other, ConstantProfile) and other.value == 0.0:
            return self
        if isinstance(self, ConstantProfile) and self.value == 0.0:
            return other
        return SumProfile((self, other))

    __radd__ = __add__

    def __neg__(self):
        return ScaledProfile(-1.0, self)

    def __sub__(self, other):
        return self + (-as_profile(other))

    def __rsub__(self, other):
        return as_profile(other) + (-self)

    def __mul__(self, other):
        if np.isscalar(other):
            other = float(other)
            if other == 1.0:
                return self
            if other == 0.0:
                return ConstantProfile(0.0)
            return ScaledProfile(other, self)
        other = as_profile(other)
        if isinstance(self, ConstantProfile):
            return other * self.value
        if isinstance(other, ConstantProfile):
            return self * other.value
        return ProductProfile(self, other)

    __rmul__ = __mul__


class ConstantProfile(Profile):
    def __init__(self, value: float):
        self.value = float(value)

    def __call__(self, q):
        return np.full(np.shape(_asfloat(q)), self.value)

    def derivative(self):
        return ConstantProfile(0.0)

    def to_dict(self):
        return {"kind": "constant", "value": self.value}

    def __repr__(self):
        return f"ConstantProfile({self.value})"


class AffineProfile(Profile):
    """a0 + a1*q."""

    def __init__(self, a0: float, a1: float):
        self.a0 = float(a0)
        self.a1 = float(a1)

    def __call__(self, q):
        return self.a0 + self.a1 * _asfloat(q)

    def derivative(self):
        return ConstantProfile(self.a1)

    def to_dict(self):
        return {"kind": "affine", "a0": self.a0, "a1": self.a1}

    def __repr__(self):
        return f"AffineProfile({self.a0}, {self.a1})"


class PolyProfile(Profile):
    """Polynomial with coefficients in ascending order of degree."""

    def __init__(self, coeffs):
        self.coeffs = [float(c) for c in coeffs]
        if not self.coeffs:
            self.coeffs = [0.0]

    def __call__(self, q):
        return np.polynomial.polynomial.polyval(_asfloat(q), self.coeffs)

    def derivative(self):
        if len(self.coeffs) == 1:
            return ConstantProfile(0.0)
        return PolyProfile(np.polynomial.polynomial.polyder(self.coeffs))

    def to_dict(self):
        return {"kind": "poly", "coeffs": list(self.coeffs)}

    def __repr__(self):
        return f"PolyProfile({self.coeffs})"


class SplineProfile(Profile):
    """C^1 cubic Hermite spline, clamped to its boundary values outside the knots."""

    def __init__(self, knots_x, knots_y, slopes):
        self.knots_x = np.asarray(knots_x, dtype=float)
        self.knots_y = np.asarray(knots_y, dtype=float)
        self.slopes = np.asarray(slopes, dtype=float)
        if self.knots_x.ndim != 1 or len(self.knots_x) < 2:
            raise ValueError("need at least two knots")
        if not (len(self.knots_x) == len(self.knots_y) == len(self.slopes)):
            raise ValueError("knots_x, knots_y, slopes must have equal length")
        self._spl = CubicHermiteSpline(self.knots_x, self.knots_y, self.slopes)

    @classmethod
    def pchip(cls, knots_x, knots_y):
        """Monotone (PCHIP) slope choice for the given knots."""
        x = np.asarray(knots_x, dtype=float)
        y = np.asarray(knots_y, dtype=float)
        slopes = PchipInterpolator(x, y).derivative()(x)
        return cls(x, y, slopes)

    def __call__(self, q):
        qa = _asfloat(q)
        # evaluating at clipped arguments clamps to the boundary knot values
        return self._spl(np.clip(qa, self.knots_x[0], self.knots_x[-1]))

    def derivative(self):
        return _SplineDerivativeProfile(self)

    def to_dict(self):
        return {
            "kind": "cubic-spline",
            "knots_x": self.knots_x.tolist(),
            "knots_y": self.knots_y.tolist(),
            "slopes": self.slopes.tolist(),
        }

    def __repr__(self):
        return f"SplineProfile({self.knots_x.tolist()}, {self.knots_y.tolist()})"


class _SplineDerivativeProfile(Profile):
    """Derivative of a clamped spline: spline derivative inside, 0 outside."""

    def __init__(self, base: SplineProfile):
        self.base = base
        self._dspl = base._spl.derivative()

    def __call__(self, q):
        qa = _asfloat(q)
        x0, x1 = self.base.knots_x[0], self.base.knots_x[-1]
        inside = (qa >= x0) & (qa <= x1)
        vals = self._dspl(np.clip(qa, x0, x1))
        return np.where(inside, vals, 0.0)

    def derivative(self):
        raise CapabilityError("second derivatives of clamped splines are not provided")

    def to_dict(self):
        return {"kind": "spline-derivative", "base": self.base.to_dict()}


class ComposedProfile(Profile):
    """outer(scale*q + shift)."""

    def __init__(self, outer: Profile, scale: float, shift: float):
        self.outer = outer
        self.scale = float(scale)
        self.shift = float(shift)

    @property
    def differentiable(self):
        return self.outer.differentiable

    def __call__(self, q):
        return self.outer(self.scale * _asfloat(q) + self.shift)

    def derivative(self):
        inner = ComposedProfile(self.outer.derivative(), self.scale, self.shift)
        return ScaledProfile(self.scale, inner)

    def to_dict(self):
        return {
            "kind": "composed",
            "outer": self.outer.to_dict(),
            "scale": self.scale,
            "shift": self.shift,
        }


class SumProfile(Profile):
    def __init__(self, terms):
        self.terms = tuple(terms)

    @property
    def differentiable(self):
        return all(t.differentiable for t in self.terms)

    def __call__(self, q):
        qa = _asfloat(q)
        out = np.zeros(qa.shape)
        for t in self.terms:
            out = out + t(qa)
        return out

    def derivative(self):
        return SumProfile(tuple(t.derivative() for t in self.terms))

    def to_dict(self):
        return {"kind": "sum", "terms": [t.to_dict() for t in self.terms]}


class ProductProfile(Profile):
    def __init__(self, left: Profile, right: Profile):
        self.left = left
        self.right = right

    @property
    def differentiable(self):
        return self.left.differentiable and self.right.differentiable

    def __call__(self, q):
        qa = _asfloat(q)
        return self.left(qa) * self.right(qa)

    def derivative(self):
        return SumProfile(
            (
                ProductProfile(self.left.derivative(), self.right),
                ProductProfile(self.left, self.right.derivative()),
            )
        )

    def to_dict(self):
        return {"kind": "product", "left": self.left.to_dict(), "right": self.right.to_dict()}


class ScaledProfile(Profile):
    def __init__(self, factor: float, base: Profile):
        self.factor = float(factor)
        self.base = base

    @property
    def differentiable(self):
        return self.base.differentiable

    def __call__(self, q):
        return self.factor * self.base(_asfloat(q))

    def derivative(self):
        return ScaledProfile(self.factor, self.base.derivative())

    def to_dict(self):
        return {"kind": "scaled", "factor": self.factor, "base": self.base.to_dict()}


class MirrorProfile(Profile):
    """base(q) below the pivot, base(2*pivot - q) above it."""

    def __init__(self, base: Profile, pivot: float):
        self.base = base
        self.pivot = float(pivot)

    @property
    def differentiable(self):
        return self.base.differentiable

    def _fold(self, qa):
        return np.where(qa <= self.pivot, qa, 2.0 * self.pivot - qa)

    def __call__(self, q):
        return self.base(self._fold(_asfloat(q)))

    def derivative(self):
        return _MirrorDerivativeProfile(self)

    def to_dict(self):
        return {"kind": "mirror", "pivot": self.pivot, "base": self.base.to_dict()}


class _MirrorDerivativeProfile(Profile):
    """Chain rule for MirrorProfile: the reflected branch flips sign."""

    def __init__(self, mirror: MirrorProfile):
        self.mirror = mirror
        self._dbase = mirror.base.derivative()

    def __call__(self, q):
        qa = _asfloat(q)
        vals = self._dbase(self.mirror._fold(qa))
        return np.where(qa <= self.mirror.pivot, vals, -vals)

    def derivative(self):
        raise CapabilityError("mirrored profiles are differentiated once only")

    def to_dict(self):
        return {"kind": "mirror-derivative", "base": self.mirror.to_dict()}


class CallableProfile(Profile):
    """Wraps an arbitrary vectorized callable.  Evaluation only.

    Used for coefficient families that exist as closed-form evaluations
    (e.g. interpolated vertex coefficients) where no exact derivative tree
    is available.
    """

    differentiable = False

    def __init__(self, fn, label: str = ""):
        self.fn = fn
        self.label = label

    def __call__(self, q):
        return np.asarray(self.fn(_asfloat(q)), dtype=float)

    def derivative(self):
        raise CapabilityError(f"profile {self.label or self.fn!r} supports evaluation only")

    def __repr__(self):
        return f"CallableProfile({self.label or self.fn!r})"


def profile_from_dict(d: dict) -> Profile:
    kind = d["kind"]
    if kind == "constant":
        return ConstantProfile(d["value"])
    if kind == "affine":
        return AffineProfile(d["a0"], d["a1"])
    if kind == "poly":
        return PolyProfile(d["coeffs"])
    if kind == "cubic-spline":
        return SplineProfile(d["knots_x"], d["knots_y"], d["slopes"])
    if kind == "composed":
        return ComposedProfile(profile_from_dict(d["outer"]), d["scale"], d["shift"])
    if kind == "sum":
        return SumProfile(tuple(profile_from_dict(t) for t in d["terms"]))
    if kind == "product":
        return ProductProfile(profile_from_dict(d["left"]), profile_from_dict(d["right"]))
    if kind == "scaled":
        return ScaledProfile(d["factor"], profile_from_dict(d["base"]))
    if kind == "mirror":
        return MirrorProfile(profile_from_dict(d["base"]), d["pivot"])
    raise ValueError(f"unknown profile kind {kind!r}")


def as_profile(value) -> Profile:
    """Coerce numbers to ConstantProfile; pass profiles through."""
    if isinstance(value, Profile):
        return value
    if np.isscalar(value):
        return ConstantProfile(float(value))
    raise TypeError(f"cannot interpret {value!r} as a profile")


def is_zero_profile(p: Profile) -> bool:
    """Structural zero test (constants only; no symbolic simplification)."""
    return isinstance(p, ConstantProfile) and p.value == 0.0


class ComplexProfile:
    """A complex-valued function of q stored as a (re, im) profile pair."""

    __slots__ = ("re", "im")

    def __init__(self, re: Profile, im: Profile | None = None):
        self.re = as_profile(re)
        self.im = as_profile(im) if im is not None else ConstantProfile(0.0)

    @classmethod
    def from_const(cls, z) -> "ComplexProfile":
        z = complex(z)
        return cls(ConstantProfile(z.real), ConstantProfile(z.imag))

    @classmethod
    def coerce(cls, value) -> "ComplexProfile":
        if isinstance(value, ComplexProfile):
            return value
        if isinstance(value, Profile):
            return cls(value)
        return cls.from_const(value)

    @property
    def differentiable(self):
        return self.re.differentiable and self.im.differentiable

    def __call__(self, q):
        return self.re(q) + 1j * self.im(q)

    def derivative(self) -> "ComplexProfile":
        return ComplexProfile(self.re.derivative(), self.im.derivative())

    def conjugate(self) -> "ComplexProfile":
        return ComplexProfile(self.re, -self.im)

    def __add__(self, other):
        other = ComplexProfile.coerce(other)
        return ComplexProfile(self.re + other.re, self.im + other.im)

    def __neg__(self):
        return ComplexProfile(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ComplexProfile.coerce(other))

    def __mul__(self, other):
        if np.isscalar(other):
            z = complex(other)
            if z.imag == 0.0:
                return ComplexProfile(self.re * z.real, self.im * z.real)
            other = ComplexProfile.from_const(z)
        other = ComplexProfile.coerce(other)
        re = ProductProfile(self.re, other.re) - ProductProfile(self.im, other.im)
        im = ProductProfile(self.re, other.im) + ProductProfile(self.im, other.re)
        return ComplexProfile(re, im)

    __rmul__ = __mul__

    def times_i(self) -> "ComplexProfile":
        return ComplexProfile(-self.im, self.re)

    def is_zero(self) -> bool:
        return is_zero_profile(self.re) and is_zero_profile(self.im)

    def to_dict(self):
        return {"re": self.re.to_dict(), "im": self.im.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(profile_from_dict(d["re"]), profile_from_dict(d["im"]))


_H_KNOTS_X = (-1.0, -0.5, 0.0, 0.5, 1.0)
_H_KNOTS_Y = (0.0, 0.1, 0.5, 0.9, 1.0)

_h_spline = None


def smooth_step() -> SplineProfile:
    """The monotone transition spline h.

    C^1 cubic through (-1,0), (-0.5,0.1), (0,0.5), (0.5,0.9), (1,1) with
    monotone (PCHIP) slopes; the end slopes come out exactly 0, so the
    clamped continuation (0 below -1, 1 above +1) is C^1 as well.
    """
    global _h_spline
    if _h_spline is None:
        _h_spline = SplineProfile.pchip(_H_KNOTS_X, _H_KNOTS_Y)
    return _h_spline


def spline_h(q):
    """Evaluate the transition spline h at q (clamped outside [-1, 1])."""
    return smooth_step()(q)
