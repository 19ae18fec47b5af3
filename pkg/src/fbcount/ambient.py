"""Periodic ambient vector functions F: R -> R^3 with exact derivatives.

A projective curve is the image of ``t -> [F(t)]``; nothing here normalises.
Every backend implements ``derivs(t, order)`` returning an array of shape
``(order + 1, len(t), 3)`` holding F, F', ..., F^(order).
"""
from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import make_interp_spline


class Ambient:
    period: float

    def derivs(self, t, order: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t) -> np.ndarray:
        return self.derivs(t, 0)[0]


class TrigAmbient(Ambient):
    """Trigonometric polynomial ``sum_k a_k cos(k w t) + b_k sin(k w t)``."""

    def __init__(self, a, b, period: float = 2 * math.pi):
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_2d(np.asarray(b, dtype=float))
        if a.shape != b.shape or a.shape[1] != 3:
            raise ValueError("coefficient arrays must both be (K+1, 3)")
        self.a = a
        self.b = b
        self.period = float(period)
        self._z = a - 1j * b
        self._k = np.arange(a.shape[0]) * (2 * math.pi / self.period)

    @classmethod
    def from_function(cls, f, degree: int, period: float = 2 * math.pi, drop: float = 1e-14):
        """Exact coefficients of a band-limited ``f`` (degree <= ``degree``) by FFT."""
        n = 2 * degree + 2
        t = np.arange(n) * (period / n)
        vals = np.asarray(f(t), dtype=float)
        if vals.shape == (3, n):
            vals = vals.T
        X = np.fft.rfft(vals, axis=0) / n
        X = X[: degree + 1]
        a = 2 * X.real
        b = -2 * X.imag
        a[0] = X[0].real
        b[0] = 0.0
        scale = max(np.abs(a).max(), np.abs(b).max())
        a[np.abs(a) < drop * scale] = 0.0
        b[np.abs(b) < drop * scale] = 0.0
        return cls(a, b, period)

    @property
    def degree(self) -> int:
        return self.a.shape[0] - 1

    def harmonics_parity(self) -> str:
        """'odd' if only odd harmonics are present, 'even' if only even ones, else 'mixed'."""
        nz = np.flatnonzero((np.abs(self.a) + np.abs(self.b)).sum(axis=1) > 0)
        if len(nz) and np.all(nz % 2 == 1):
            return "odd"
        if len(nz) and np.all(nz % 2 == 0):
            return "even"
        return "mixed"

    def derivs(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        E = np.exp(1j * np.outer(t, self._k))
        out = np.empty((order + 1, len(t), 3))
        ik = 1j * self._k
        for m in range(order + 1):
            out[m] = (E @ ((ik ** m)[:, None] * self._z)).real
        return out


class SplineAmbient(Ambient):
    """Periodic interpolating B-spline through ``values`` at uniform nodes."""

    def __init__(self, values, period: float, k: int = 5):
        values = np.asarray(values, dtype=float)
        n = len(values)
        x = np.linspace(0.0, period, n + 1)
        y = np.vstack([values, values[:1]])
        self._spl = make_interp_spline(x, y, k=k, bc_type="periodic")
        self.k = k
        self.period = float(period)

    def derivs(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float)) % self.period
        out = np.zeros((order + 1, len(t), 3))
        for m in range(min(order, self.k) + 1):
            out[m] = self._spl(t, m)
        return out


class Cross(Ambient):
    """Pointwise cross product A x B; derivatives by the Leibniz rule."""

    def __init__(self, A: Ambient, B: Ambient):
        self.A = A
        self.B = B
        self.period = A.period

    def derivs(self, t, order):
        a = self.A.derivs(t, order)
        b = self.B.derivs(t, order)
        out = np.zeros_like(a)
        for m in range(order + 1):
            for j in range(m + 1):
                out[m] += math.comb(m, j) * np.cross(a[j], b[m - j])
        return out


class Deriv(Ambient):
    def __init__(self, A: Ambient):
        self.A = A
        self.period = A.period

    def derivs(self, t, order):
        return self.A.derivs(t, order + 1)[1:]


class Linear(Ambient):
    """``M @ F(t)`` for a fixed 3x3 matrix."""

    def __init__(self, A: Ambient, M):
        self.A = A
        self.M = np.asarray(M, dtype=float)
        self.period = A.period

    def derivs(self, t, order):
        return self.A.derivs(t, order) @ self.M.T


class Reversed(Ambient):
    def __init__(self, A: Ambient):
        self.A = A
        self.period = A.period

    def derivs(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        d = self.A.derivs(-t, order)
        sign = (-1.0) ** np.arange(order + 1)
        return d * sign[:, None, None]


def dual_of(A: Ambient) -> Ambient:
    """Ambient lift of the dual curve, ``F x F'``."""
    return Cross(A, Deriv(A))


def indicatrix_of(A: Ambient) -> Ambient:
    """Ambient lift of the unit tangent, ``(F x F') x F``."""
    return Cross(dual_of(A), A)
