"""Closed curves in RP^2 and their local differential data.

A :class:`CurveModel` wraps an ambient periodic function F (see
:mod:`fbcount.ambient`); the curve is ``t -> [F(t)]`` on the parameter circle
``[0, L)``, with ``F(t + L) = sigma * F(t)``.  ``sigma = -1`` marks a one-sided
curve whose sphere lift closes only after two passes.
"""
from __future__ import annotations

import inspect
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ambient as amb
from .config import DEFAULT, Config
from .errors import (AtCusp, AtInflection, DoubleZero, EmptyInput, GapTooLarge, NotClosed,
                     SpecError, TooFewSamples)
from .projective import ProjectivePoint
from .roots import circ_dist, periodic_grid, sign_change_roots


def _unit_rows(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@dataclass(frozen=True)
class Local:
    """Vectorised local data of a curve at an array of parameters."""
    t: np.ndarray
    F: np.ndarray
    p: np.ndarray        # unit lift of the point
    T: np.ndarray        # unit tangent in the direction of motion
    N: np.ndarray        # unit pole of the tangent geodesic, p x T
    det: np.ndarray      # det(F, F', F''), sign of geodesic curvature
    speed: np.ndarray    # |gamma'| of the normalised lift
    kg: np.ndarray       # geodesic curvature

    @property
    def n(self):
        """Oriented normal: the curve bends toward it."""
        return np.sign(self.det)[:, None] * self.N

    @property
    def rho(self):
        return np.arctan2(1.0, np.abs(self.kg))

    @property
    def center(self):
        r = self.rho[:, None]
        return np.cos(r) * self.p + np.sin(r) * self.n


@dataclass(frozen=True)
class CurveModel:
    ambient: amb.Ambient
    L: float
    sigma: int = 1
    cusps: tuple = ()
    name: str = ""
    source: dict | None = field(default=None, compare=False)
    config: Config = field(default=DEFAULT, compare=False)

    @property
    def delta_cusp(self) -> float:
        return self.config.cusp_frac * self.L

    def derivs(self, t, order: int = 2) -> np.ndarray:
        return self.ambient.derivs(t, order)

    def point(self, t) -> np.ndarray:
        return _unit_rows(self.ambient.derivs(t, 0)[0])

    def local(self, t) -> Local:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        F, F1, F2 = self.ambient.derivs(t, 2)
        D = np.cross(F, F1)
        nF = np.linalg.norm(F, axis=-1)
        nD = np.linalg.norm(D, axis=-1)
        det = np.einsum("ij,ij->i", D, F2)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = F / nF[:, None]
            N = D / nD[:, None]
            T = np.cross(N, p)
            speed = nD / nF ** 2
            kg = det * nF ** 3 / nD ** 3
        return Local(t, F, p, T, N, det, speed, kg)

    def gamma_derivs(self, t):
        """Unit lift and its first two derivatives (quotient rule on F)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        F, F1, F2 = self.ambient.derivs(t, 2)
        r = np.linalg.norm(F, axis=-1)[:, None]
        g = np.einsum("ij,ij->i", F, F1)[:, None]
        g1 = (np.einsum("ij,ij->i", F1, F1) + np.einsum("ij,ij->i", F, F2))[:, None]
        G = F / r
        G1 = F1 / r - F * g / r ** 3
        G2 = F2 / r - 2 * F1 * g / r ** 3 - F * g1 / r ** 3 + 3 * F * g ** 2 / r ** 5
        return G, G1, G2

    def near_cusp(self, t, tol: float | None = None) -> bool:
        tol = self.delta_cusp if tol is None else tol
        return any(circ_dist(t, c, self.L) < tol for c in self.cusps)

    def with_cusps(self, cusps) -> "CurveModel":
        return CurveModel(self.ambient, self.L, self.sigma, tuple(sorted(float(c) % self.L for c in cusps)),
                          self.name, self.source, self.config)

    def with_config(self, config: Config) -> "CurveModel":
        return CurveModel(self.ambient, self.L, self.sigma, self.cusps, self.name, self.source, config)

    def rotated(self, R) -> "CurveModel":
        return CurveModel(amb.Linear(self.ambient, R), self.L, self.sigma, self.cusps,
                          self.name + "+rot", None, self.config)

    def reversed(self) -> "CurveModel":
        cusps = tuple(sorted((-c) % self.L for c in self.cusps))
        return CurveModel(amb.Reversed(self.ambient), self.L, self.sigma, cusps,
                          self.name + "+rev", None, self.config)


def detect_closure(A: amb.Ambient, L: float, probes: int = 7) -> int:
    t = np.linspace(0.1, L - 0.1, probes) * 0.37 + 0.11
    a = _unit_rows(A.derivs(t, 0)[0])
    b = _unit_rows(A.derivs(t + L, 0)[0])
    d = np.einsum("ij,ij->i", a, b)
    if np.all(d > 1 - 1e-9):
        return 1
    if np.all(d < -1 + 1e-9):
        return -1
    raise NotClosed("ambient function does not close projectively over the given period")


def make_model(A: amb.Ambient, L: float | None = None, cusps=(), name="", source=None,
               config: Config = DEFAULT) -> CurveModel:
    """Wrap an ambient function, detecting the projective period and closure sign."""
    if L is None:
        L = A.period
        if isinstance(A, amb.TrigAmbient):
            parity = A.harmonics_parity()
            if parity in ("odd", "even"):
                L = A.period / 2
    sigma = detect_closure(A, L)
    cusps = tuple(sorted(float(c) % L for c in cusps))
    return CurveModel(A, float(L), sigma, cusps, name, source, config)


# ---------------------------------------------------------------- construction

def _align(points: np.ndarray) -> np.ndarray:
    out = points.copy()
    for i in range(1, len(out)):
        if out[i] @ out[i - 1] < 0:
            out[i] = -out[i]
    return out


def from_samples(points, closed: bool = True, cusps=(), name="samples", config: Config = DEFAULT) -> CurveModel:
    """Periodic spline through projective samples on the unit sphere.

    ``cusps`` are given as sample indices scaled to the parameter circle
    ``[0, 2*pi)`` (sample ``i`` of ``n`` sits at ``2*pi*i/n``).
    """
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3:
        raise ValueError("samples must be an (n, 3) array")
    if not closed:
        raise NotClosed("open curves are not supported")
    if len(P) > 1 and np.allclose(P[0], P[-1]):
        P = P[:-1]
    if len(P) < 16:
        raise TooFewSamples(f"{len(P)} samples; at least 16 required")
    P = _align(_unit_rows(P))
    closure = 1 if P[-1] @ P[0] >= 0 else -1
    steps = np.einsum("ij,ij->i", P, np.roll(P, -1, axis=0) * np.r_[np.ones(len(P) - 1), closure][:, None])
    if np.any(np.arccos(np.clip(steps, -1, 1)) > math.pi / 8):
        raise GapTooLarge("consecutive samples farther apart than pi/8")
    L = 2 * math.pi
    if closure == 1:
        A = amb.SplineAmbient(P, L)
    else:
        A = amb.SplineAmbient(np.vstack([P, -P]), 2 * L)
    return CurveModel(A, L, closure, tuple(sorted(float(c) % L for c in cusps)), name, None, config)


def _planar_scale(xy: np.ndarray, cap: float):
    if not 0 < cap < math.pi / 2:
        raise ValueError("cap radius must lie in (0, pi/2)")
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    c = (lo + hi) / 2
    R = np.linalg.norm(xy - c, axis=1).max()
    if R == 0:
        raise EmptyInput("planar input has zero extent")
    return c, math.tan(cap) / R


def _check_margin(margin):
    if not 0 < margin < math.pi / 4:
        raise ValueError("margin must lie in (0, pi/4)")
    return math.pi / 4 - margin


def lift_planar(points2d, margin: float = 0.5, cusps=(), name="planar", config: Config = DEFAULT) -> CurveModel:
    """Gnomonic lift ``(x, y) -> [x, y, 1]`` of a closed planar polyline.

    The polyline is centred and scaled so the lift fits in a cap of radius
    ``pi/4 - margin``; lines of the plane map to geodesics.
    """
    xy = np.asarray(points2d, dtype=float)
    if xy.size == 0:
        raise EmptyInput("no points")
    xy = xy.reshape(-1, 2)
    if len(xy) > 1 and np.allclose(xy[0], xy[-1]):
        xy = xy[:-1]
    if len(xy) < 16:
        raise TooFewSamples(f"{len(xy)} samples; at least 16 required")
    c, s = _planar_scale(xy, _check_margin(margin))
    F = np.column_stack([(xy - c) * s, np.ones(len(xy))])
    L = 2 * math.pi
    return CurveModel(amb.SplineAmbient(F, L), L, 1, tuple(sorted(float(c) % L for c in cusps)),
                      name, None, config)


def lift_planar_function(fxy, degree: int, cap: float = math.pi / 4 - 0.5, cusps=(), name="planar",
                         config: Config = DEFAULT, source=None) -> CurveModel:
    """Exact gnomonic lift of a planar trigonometric curve ``t -> fxy(t)``.

    The curve is centred and scaled to fit a spherical cap of radius ``cap``.
    """
    tt = np.linspace(0, 2 * math.pi, 4096, endpoint=False)
    xy = np.asarray(fxy(tt)).T
    c, s = _planar_scale(xy, cap)

    def F(t):
        x, y = fxy(t)
        return np.column_stack([(x - c[0]) * s, (y - c[1]) * s, np.ones_like(t)])

    A = amb.TrigAmbient.from_function(F, degree)
    return CurveModel(A, 2 * math.pi, 1, tuple(sorted(float(u) % (2 * math.pi) for u in cusps)),
                      name, source, config)


# ---------------------------------------------------------------- frames

@dataclass(frozen=True)
class FramedPoint:
    t: float
    p: ProjectivePoint
    T: np.ndarray
    n: np.ndarray
    k_g: float
    rho: float
    c_p: ProjectivePoint
    a_p: ProjectivePoint
    p_dual: ProjectivePoint
    lift: np.ndarray     # unit sphere representative the vectors above refer to


def frame_at(K: CurveModel, t: float) -> FramedPoint:
    if K.near_cusp(t):
        raise AtCusp(f"t={t:.6g} within delta_cusp of a cusp")
    loc = K.local([t])
    kg = float(loc.kg[0])
    if not math.isfinite(kg) or abs(kg) <= K.config.tol_kg:
        raise AtInflection(f"|k_g| = {abs(kg):.3g} at t={t:.6g}")
    p = loc.p[0]
    T = loc.T[0]
    n = loc.n[0]
    rho = math.atan2(1.0, abs(kg))
    c = math.cos(rho) * p + math.sin(rho) * n
    return FramedPoint(float(t), ProjectivePoint(p), T, n, kg, rho,
                       ProjectivePoint(c), ProjectivePoint(T), ProjectivePoint(n), p)


def inflection_params(K: CurveModel, n: int | None = None) -> np.ndarray:
    """Simple zeros of the geodesic curvature (sign changes of det(F, F', F''))."""
    n = n or 8 * K.config.grid

    def det(t):
        F, F1, F2 = K.ambient.derivs(t, 2)
        return np.einsum("ij,ij->i", np.cross(F, F1), F2)

    t = periodic_grid(K.L, n)
    scale = np.linalg.norm(K.ambient.derivs(t, 2), axis=-1).prod(axis=0)
    if np.all(np.abs(det(t)) <= 1e-10 * scale):
        raise DoubleZero("geodesic curvature vanishes identically (K is a geodesic)")
    # det is cubic in F so it picks up sigma**3 = sigma across the seam
    roots = sign_change_roots(det, K.L, n, closure=K.sigma)
    if K.cusps:
        keep = [r for r in roots if not K.near_cusp(r)]
        roots = np.asarray(keep)
    return roots


def dual_curve(K: CurveModel) -> CurveModel:
    """The curve of tangent-geodesic poles; inflections of K become its cusps."""
    A = amb.dual_of(K.ambient)
    cusps = inflection_params(K)
    return make_model(A, K.L, cusps=cusps, name=K.name + "'", config=K.config)


def tangent_indicatrix(K: CurveModel) -> CurveModel:
    return make_model(amb.indicatrix_of(K.ambient), K.L, name=K.name + "/T", config=K.config)


# ---------------------------------------------------------------- builtins

def latitude_circle(theta: float = math.pi / 4, **_) -> CurveModel:
    s, c = math.sin(theta), math.cos(theta)
    A = amb.TrigAmbient([[0, 0, c], [s, 0, 0]], [[0, 0, 0], [0, s, 0]])
    return make_model(A, name=f"latitude_circle({theta:.4g})",
                      source={"name": "latitude_circle", "params": {"theta": theta}})


def wavy_great_circle(amplitude=0.2, harmonics=3, phase=0.0, **_) -> CurveModel:
    """Great circle in the xy-plane with a sum of sinusoidal z-ripples."""
    hs = [harmonics] if isinstance(harmonics, (int, float)) else list(harmonics)
    amps = [amplitude] * len(hs) if isinstance(amplitude, (int, float)) else list(amplitude)
    K = max(1, max(int(h) for h in hs))
    a = np.zeros((K + 1, 3))
    b = np.zeros((K + 1, 3))
    a[1, 0] = 1.0
    b[1, 1] = 1.0
    for h, A_ in zip(hs, amps):
        h = int(h)
        b[h, 2] += A_ * math.cos(h * phase)
        a[h, 2] += A_ * math.sin(h * phase)
    return make_model(amb.TrigAmbient(a, b), name=f"wavy_great_circle({amplitude},{harmonics})",
                      source={"name": "wavy_great_circle",
                              "params": {"amplitude": amplitude, "harmonics": harmonics, "phase": phase}})


def _planar_builtin(name, params, fxy, degree, cap=math.pi / 4 - 0.5, cusps=()):
    return lift_planar_function(fxy, degree, cap=cap, cusps=cusps, name=name,
                                source={"name": name, "params": params})


def limacon(a: float = 1.0, b: float = 0.5, margin: float = 0.5, **_) -> CurveModel:
    """Planar limacon r = b + a cos(t); an inner loop when a > b."""
    return _planar_builtin("limacon", {"a": a, "b": b, "margin": margin},
                           lambda t: ((b + a * np.cos(t)) * np.cos(t), (b + a * np.cos(t)) * np.sin(t)),
                           2, _check_margin(margin))


def planar_fourier(x=(), y=(), margin: float = 0.5, **_) -> CurveModel:
    """Planar trigonometric curve; ``x`` and ``y`` are lists of [k, cos_coef, sin_coef]."""
    x = [tuple(r) for r in x]
    y = [tuple(r) for r in y]
    deg = max([int(r[0]) for r in x + y] + [1])

    def fxy(t):
        X = sum(c * np.cos(k * t) + s * np.sin(k * t) for k, c, s in x) + 0 * t
        Y = sum(c * np.cos(k * t) + s * np.sin(k * t) for k, c, s in y) + 0 * t
        return X, Y

    return _planar_builtin("planar_fourier", {"x": [list(r) for r in x], "y": [list(r) for r in y],
                                              "margin": margin}, fxy, deg, _check_margin(margin))


def epicycloid(cusps: int = 1, radius: float = 0.3, **_) -> CurveModel:
    """Epicycloid with ``cusps`` cusps (cardioid for 1, nephroid for 2), lifted.

    ``radius`` is the angular radius of the cap containing it; large values
    make it a genuinely spherical curve.
    """
    k = int(cusps)
    cp = [2 * math.pi * j / k for j in range(k)]
    return _planar_builtin("epicycloid", {"cusps": k, "radius": radius},
                           lambda t: ((k + 1) * np.cos(t) - np.cos((k + 1) * t),
                                      (k + 1) * np.sin(t) - np.sin((k + 1) * t)),
                           k + 1, radius, cp)


def cusped_hypocycloid(cusps: int = 3, radius: float = 0.3, **_) -> CurveModel:
    """Hypocycloid with ``cusps`` >= 3 cusps (deltoid for 3), lifted to a cap of ``radius``."""
    k = int(cusps)
    if k < 3:
        raise ValueError("hypocycloids need at least 3 cusps")
    cp = [2 * math.pi * j / k for j in range(k)]
    return _planar_builtin("cusped_hypocycloid", {"cusps": k, "radius": radius},
                           lambda t: ((k - 1) * np.cos(t) + np.cos((k - 1) * t),
                                      (k - 1) * np.sin(t) - np.sin((k - 1) * t)),
                           k - 1, radius, cp)


def two_cusp(c: float = 0.2, d: float = 0.1, radius: float = 0.3, **_) -> CurveModel:
    """Closed planar curve with ordinary cusps at t = 0 and t = pi.

    Its velocity is sin(t) (cos 2t + c, sin 2t + d), so it stops exactly twice
    and, for |(c, d)| < 1, nowhere else.
    """
    if math.hypot(c, d) >= 1:
        raise ValueError("need hypot(c, d) < 1")
    return _planar_builtin("two_cusp", {"c": c, "d": d, "radius": radius},
                           lambda t: (-np.cos(3 * t) / 6 + (0.5 - c) * np.cos(t),
                                      np.sin(t) / 2 - np.sin(3 * t) / 6 - d * np.cos(t)),
                           3, radius, [0.0, math.pi])


def _fig7_samples(b: float, wobble: float, samples: int):
    t = np.linspace(0, 2 * math.pi, samples, endpoint=False)
    r = b + np.cos(t) + wobble * np.sin(2 * t)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def _fig7(name, b, wobble, samples, margin):
    K = lift_planar(_fig7_samples(b, wobble, int(samples)), margin=margin, name=name)
    return CurveModel(K.ambient, K.L, K.sigma, K.cusps, name,
                      {"name": name, "params": {"samples": int(samples), "margin": margin}}, K.config)


def fig7_left(samples: int = 256, margin: float = 0.5, **_) -> CurveModel:
    """Sampled looped curve whose crossing is type 2 and which has four normal-tangent pairs."""
    return _fig7("fig7_left", 0.8, 0.04, samples, margin)


def fig7_right(samples: int = 256, margin: float = 0.5, **_) -> CurveModel:
    """Sampled looped curve with a type 1 crossing and no normal-tangent pairs."""
    return _fig7("fig7_right", 0.3, 0.04, samples, margin)


def dual(of=None, **_) -> CurveModel:
    """The dual of the curve described by the spec ``of``; cusps come from its inflections."""
    if not isinstance(of, dict):
        raise SpecError("builtin.params.of", "must be a curve spec object")
    K = load_spec(of)
    D = dual_curve(K)
    return CurveModel(D.ambient, D.L, D.sigma, D.cusps, D.name,
                      {"name": "dual", "params": {"of": of}}, D.config)


def spec_of(K: CurveModel) -> dict:
    """A spec mapping that rebuilds ``K``."""
    src = K.source or {}
    if "samples" in src:
        spec = {"kind": src.get("kind", "spherical"), "samples": src["samples"]}
    elif "name" in src:
        spec = {"kind": "spherical", "builtin": {"name": src["name"], "params": src.get("params", {})}}
    else:
        raise SpecError("source", f"curve {K.name!r} has no recorded spec")
    if K.name:
        spec["name"] = K.name
    return spec


BUILTINS = {
    "dual": dual,
    "fig7_left": fig7_left,
    "fig7_right": fig7_right,
    "two_cusp": two_cusp,
    "latitude_circle": latitude_circle,
    "wavy_great_circle": wavy_great_circle,
    "limacon": limacon,
    "planar_fourier": planar_fourier,
    "epicycloid": epicycloid,
    "cusped_hypocycloid": cusped_hypocycloid,
}


# A fixed, asymmetric matrix used by the ``skew`` option.  Projective maps keep
# cusps, crossings and inflections but break mirror and rotational symmetries,
# which otherwise make several of the builtins non-generic.
SKEW_DIRECTION = np.array([[0.31, -0.47, 0.22],
                           [0.13, 0.19, -0.38],
                           [-0.29, 0.41, 0.07]])


def skewed(K: CurveModel, skew: float) -> CurveModel:
    M = np.eye(3) + skew * SKEW_DIRECTION
    if abs(np.linalg.det(M)) < 1e-6:
        raise SpecError("builtin.params.skew", "skew makes the transform singular")
    return CurveModel(amb.Linear(K.ambient, M), K.L, K.sigma, K.cusps, K.name, K.source, K.config)


def builtin(name: str, skew: float = 0.0, **params) -> CurveModel:
    try:
        fn = BUILTINS[name]
    except KeyError:
        raise SpecError("builtin.name", f"unknown builtin {name!r}") from None
    accepted = {n for n, prm in inspect.signature(fn).parameters.items()
                if prm.kind is not inspect.Parameter.VAR_KEYWORD}
    for key in params:
        if key not in accepted:
            raise SpecError(f"builtin.params.{key}", f"not a parameter of {name!r}")
    K = fn(**params)
    if skew:
        K = skewed(K, float(skew))
    src = dict(K.source or {})
    src["params"] = dict(src.get("params", params), **({"skew": skew} if skew else {}))
    return CurveModel(K.ambient, K.L, K.sigma, K.cusps, K.name, src, K.config)


# ---------------------------------------------------------------- spec files

def load_spec(spec, config: Config = DEFAULT) -> CurveModel:
    """Build a curve from a spec mapping or a path to a JSON spec file."""
    if isinstance(spec, (str, Path)):
        try:
            spec = json.loads(Path(spec).read_text())
        except json.JSONDecodeError as exc:
            raise SpecError("<file>", f"invalid JSON: {exc}") from None
    if not isinstance(spec, dict):
        raise SpecError("<root>", "spec must be a JSON object")
    kind = spec.get("kind", "spherical")
    if kind not in ("spherical", "planar"):
        raise SpecError("kind", f"expected 'spherical' or 'planar', got {kind!r}")
    cusps = spec.get("cusps", [])
    if not isinstance(cusps, list) or not all(isinstance(c, (int, float)) for c in cusps):
        raise SpecError("cusps", "must be a list of numbers")
    name = spec.get("name", "")
    if "builtin" in spec:
        b = spec["builtin"]
        if not isinstance(b, dict) or "name" not in b:
            raise SpecError("builtin", "must be an object with a 'name'")
        params = b.get("params", {})
        if not isinstance(params, dict):
            raise SpecError("builtin.params", "must be an object")
        try:
            K = builtin(b["name"], **params)
        except TypeError as exc:
            raise SpecError("builtin.params", str(exc)) from None
        if cusps:
            K = K.with_cusps(cusps)
    elif "samples" in spec:
        S = spec["samples"]
        try:
            arr = np.asarray(S, dtype=float)
        except (TypeError, ValueError):
            raise SpecError("samples", "must be a list of numeric coordinate lists") from None
        want = 2 if kind == "planar" else 3
        if arr.ndim != 2 or arr.shape[1] != want:
            raise SpecError("samples", f"{kind} samples need {want} coordinates each")
        if kind == "planar":
            K = lift_planar(arr, margin=spec.get("margin", 0.5), cusps=cusps, name=name or "planar")
        else:
            K = from_samples(arr, closed=spec.get("closed", True), cusps=cusps, name=name or "samples")
        K = CurveModel(K.ambient, K.L, K.sigma, K.cusps, K.name,
                       {"samples": arr.tolist(), "kind": kind}, K.config)
    else:
        raise SpecError("builtin", "spec needs either 'builtin' or 'samples'")
    if name:
        K = CurveModel(K.ambient, K.L, K.sigma, K.cusps, name, K.source, K.config)
    return K.with_config(config)
