"""Integration over the boundary ``R^3 x H^m`` of the Siegel domain.

Points of the boundary are group elements ``(w, z')`` with ``w`` in ``Im H``
(stored as a length-3 vector) and ``z'`` in ``H^m``; the measure is Lebesgue
measure in these coordinates.  The main rule is a tensor product of
block-spherical Gauss rules: for each of the blocks ``R^3`` and ``R^{4m}`` a
compactified Gauss-Legendre radial rule times a Gauss-Jacobi product rule on
the sphere.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from . import quaternion as qt
from .constants import F_e_closed
from .errors import NonFinite, TailTooFat
from .kernel import KernelContext, kernel_arg_arr, s_unnorm_arr, _complex_profile
from .quaternion import Quaternion
from .siegel import HeisenbergElement, SiegelPoint, defining_r, dilate, points_to_arrays

METHODS = ("tensor_gauss", "adaptive", "monte_carlo")
CHUNK = 1 << 18
MC_SHARD = 1 << 16
TAIL_DIRECTIONS = 64
TAIL_CHECK_RADIUS = 1e3


@dataclass(frozen=True)
class QuadratureSpec:
    """Everything that determines a boundary integral.

    ``radial_scale`` sets the length unit of the compactification
    ``r = L t/(1-t)``: ``L = radial_scale`` on ``z'`` and ``radial_scale**2``
    on ``w`` (the parabolic scaling of the group).
    """

    method: str = "tensor_gauss"
    radial_nodes: int = 24
    angular_nodes: int = 8
    truncation_radius: float = math.inf
    mc_samples: int = 1 << 18
    seed: int = 0
    target_rel_tol: float = 1e-6
    radial_scale: float = 1.0
    max_levels: int = 4

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown quadrature method {self.method!r}; expected one of {METHODS}")
        for name in ("radial_nodes", "angular_nodes", "mc_samples", "max_levels"):
            if int(getattr(self, name)) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.target_rel_tol < 1:
            raise ValueError("target_rel_tol must lie in (0, 1)")
        if not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive")
        if not self.radial_scale > 0:
            raise ValueError("radial_scale must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_json(self) -> dict:
        d = asdict(self)
        if math.isinf(d["truncation_radius"]):
            d["truncation_radius"] = "inf"
        return d

    def spec_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class QuadResult:
    value: Quaternion
    abs_error_estimate: float
    spec_hash: str
    details: dict = field(default_factory=dict, compare=False)

    @property
    def real(self) -> float:
        return float(self.value.x1)

    def to_json(self) -> dict:
        return {
            "value": [float(c) for c in self.value.components],
            "abs_error_estimate": float(self.abs_error_estimate),
            "spec_hash": self.spec_hash,
        }


class BoundaryFunction:
    """Function on the boundary group, evaluated on arrays.

    ``func(w, z)`` receives ``w`` of shape ``(N, 3)`` and ``z`` of shape
    ``(N, m, 4)`` and returns ``(N, 4)`` (quaternion values) or ``(N,)``
    (real values).
    """

    def __init__(self, func: Callable[[np.ndarray, np.ndarray], np.ndarray], m: int):
        self.func = func
        self.m = m

    def evaluate(self, w: np.ndarray, z: np.ndarray) -> np.ndarray:
        out = np.asarray(self.func(w, z), dtype=float)
        if out.ndim == 1:
            full = np.zeros(out.shape + (4,))
            full[:, 0] = out
            return full
        return out

    def __call__(self, h: HeisenbergElement) -> Quaternion:
        w = np.array([[float(h.w.x2), float(h.w.x3), float(h.w.x4)]])
        z = np.array([[zz.to_array() for zz in h.zprime]]).reshape(1, self.m, 4)
        return Quaternion(*(float(x) for x in self.evaluate(w, z)[0]))

    @classmethod
    def pointwise(cls, fn: Callable[[HeisenbergElement], Quaternion], m: int) -> "BoundaryFunction":
        """Wrap a scalar ``HeisenbergElement -> Quaternion`` callable (slow path)."""

        def arr(w, z):
            out = np.empty((w.shape[0], 4))
            for i in range(w.shape[0]):
                h = HeisenbergElement(Quaternion(0.0, *w[i]), tuple(Quaternion(*zz) for zz in z[i]))
                out[i] = fn(h).to_array()
            return out

        return cls(arr, m)


# --- one-dimensional and spherical rules ------------------------------------


def radial_rule(nodes: int, dim: int, scale: float, truncation: float = math.inf):
    """Nodes/weights for ``int_0^R g(r) r^{dim-1} dr`` with ``r = scale t/(1-t)``."""
    x, wx = roots_legendre(nodes)
    tmax = 1.0 if math.isinf(truncation) else truncation / (truncation + scale)
    t = (x + 1) * (tmax / 2)
    wt = wx * (tmax / 2)
    r = scale * t / (1 - t)
    w = wt * scale / (1 - t) ** 2 * r ** (dim - 1)
    return r, w


@lru_cache(maxsize=None)
def sphere_rule(dim: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Product rule on ``S^{dim-1}`` exact for polynomials of degree ``< 2k``.

    Recursion ``x1 = cos t``, remaining coordinates ``sin t * S^{dim-2}``, with
    Gauss-Jacobi nodes for the ``(1-x^2)^{(dim-3)/2}`` weight.
    """
    if dim < 2:
        raise ValueError("sphere dimension must be >= 2")
    if dim == 2:
        phi = 2 * math.pi * (np.arange(2 * k) + 0.5) / (2 * k)
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1), np.full(2 * k, math.pi / k)
    a = (dim - 3) / 2
    x, wx = roots_legendre(k) if a == 0 else roots_jacobi(k, a, a)
    sub, wsub = sphere_rule(dim - 1, k)
    s = np.sqrt(1 - x * x)
    pts = np.concatenate([np.repeat(x, len(sub))[:, None], (s[:, None, None] * sub[None]).reshape(-1, dim - 1)], axis=1)
    return pts, np.outer(wx, wsub).ravel()


def sphere_area(dim: int) -> float:
    """Area of the unit sphere in ``R^dim``."""
    return 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def ball_rule(dim: int, radial_nodes: int, angular_nodes: int, scale: float, truncation: float = math.inf):
    r, wr = radial_rule(radial_nodes, dim, scale, truncation)
    d, wd = sphere_rule(dim, angular_nodes)
    pts = (r[:, None, None] * d[None]).reshape(-1, dim)
    return pts, np.outer(wr, wd).ravel()


# --- group plumbing ----------------------------------------------------------


def _group_translate(center: Optional[HeisenbergElement], w: np.ndarray, z: np.ndarray):
    """Left translate ``(w, z)`` arrays by ``center``."""
    if center is None:
        return w, z
    cw = np.array([float(center.w.x2), float(center.w.x3), float(center.w.x4)])
    if center.m == 0:
        return w + cw, z
    cz = np.array([zz.to_array() for zz in center.zprime], dtype=float).reshape(center.m, 4)
    cross = np.sum(qt.qmul_arr(qt.qconj_arr(np.broadcast_to(cz, z.shape)), z), axis=-2)
    return w + cw + 2 * cross[..., 1:], z + cz


def _blocks(m: int, spec: QuadratureSpec, scale: float, radial_nodes: int, angular_nodes: int):
    wv, ww = ball_rule(3, radial_nodes, angular_nodes, scale * scale, spec.truncation_radius * scale * scale)
    if m == 0:
        return wv, ww, np.zeros((1, 0)), np.ones(1)
    zv, zw = ball_rule(4 * m, radial_nodes, angular_nodes, scale, spec.truncation_radius * scale)
    return wv, ww, zv, zw


def _tail_check(f: BoundaryFunction, m: int, spec: QuadratureSpec, scale: float, center, value_norm: float) -> dict:
    dim = 3 + 4 * m
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([0x5EED, dim])))
    dirs = rng.normal(size=(TAIL_DIRECTIONS, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radius = spec.truncation_radius if math.isfinite(spec.truncation_radius) else TAIL_CHECK_RADIUS

    def shell_mean(R):
        w = dirs[:, :3] * (R * scale * scale)
        z = (dirs[:, 3:] * (R * scale)).reshape(TAIL_DIRECTIONS, m, 4)
        vals = f.evaluate(*_group_translate(center, w, z))
        if not np.all(np.isfinite(vals)):
            raise NonFinite(f"integrand not finite on the shell of radius {R}")
        return float(np.mean(np.linalg.norm(vals, axis=-1)))

    m1, m2 = shell_mean(radius), shell_mean(2 * radius)
    info = {"radius": radius, "decay_exponent": None, "tail_estimate": 0.0}
    if m1 == 0.0:
        return info
    if m2 == 0.0:
        info["decay_exponent"] = math.inf
        return info
    p = math.log2(m1 / m2)
    info["decay_exponent"] = p
    if p <= dim:
        raise TailTooFat(f"integrand decays like r^-{p:.2f}, not integrable in dimension {dim}")
    tail = sphere_area(dim) * m1 * radius**dim / (p - dim) * scale ** (6 + 4 * m)
    info["tail_estimate"] = tail
    if math.isfinite(spec.truncation_radius) and tail > spec.target_rel_tol * max(value_norm, 1e-300):
        raise TailTooFat(f"estimated tail {tail:.3e} exceeds tolerance relative to {value_norm:.3e}")
    return info


def _tensor(f: BoundaryFunction, m: int, spec: QuadratureSpec, scale: float, center, radial_nodes: int, angular_nodes: int):
    wv, ww, zv, zw = _blocks(m, spec, scale, radial_nodes, angular_nodes)
    nz = len(zw)
    zarr = zv.reshape(nz, m, 4)
    rows = max(1, CHUNK // nz)
    total = np.zeros(4)
    for start in range(0, len(ww), rows):
        stop = min(start + rows, len(ww))
        k = stop - start
        w = np.repeat(wv[start:stop], nz, axis=0)
        z = np.tile(zarr, (k, 1, 1))
        weights = np.outer(ww[start:stop], zw).ravel()
        vals = f.evaluate(*_group_translate(center, w, z))
        if not np.all(np.isfinite(vals)):
            raise NonFinite("integrand returned a non-finite value on the grid")
        total += weights @ vals
    return total


def _monte_carlo(f: BoundaryFunction, m: int, spec: QuadratureSpec, scale: float, center):
    n = spec.mc_samples
    s1 = np.zeros(4)
    s2 = np.zeros(4)
    for shard, start in enumerate(range(0, n, MC_SHARD)):
        k = min(MC_SHARD, n - start)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([spec.seed, shard])))
        w, jw = _mc_block(rng, k, 3, scale * scale)
        if m:
            zf, jz = _mc_block(rng, k, 4 * m, scale)
            z = zf.reshape(k, m, 4)
        else:
            z, jz = np.zeros((k, 0, 4)), 1.0
        vals = f.evaluate(*_group_translate(center, w, z)) * (jw * jz)[:, None]
        if not np.all(np.isfinite(vals)):
            raise NonFinite("integrand returned a non-finite value at a sample")
        s1 += vals.sum(axis=0)
        s2 += (vals * vals).sum(axis=0)
    mean = s1 / n
    var = np.maximum(s2 / n - mean * mean, 0.0)
    return mean, float(np.linalg.norm(np.sqrt(var / n)))


def _mc_block(rng: np.random.Generator, k: int, dim: int, scale: float):
    t = rng.random(k)
    d = rng.normal(size=(k, dim))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = scale * t / (1 - t)
    jac = sphere_area(dim) * r ** (dim - 1) * scale / (1 - t) ** 2
    return d * r[:, None], jac


def integrate_boundary(
    f: BoundaryFunction,
    m: int,
    spec: QuadratureSpec = QuadratureSpec(),
    center: Optional[HeisenbergElement] = None,
    scale: Optional[float] = None,
) -> QuadResult:
    """``int f d(beta)`` over ``R^3 x H^m``.

    ``center`` shifts the grid by a left translation (unit Jacobian) so the
    nodes cluster where the integrand lives; ``scale`` overrides
    ``spec.radial_scale``.
    """
    if f.m != m:
        raise ValueError(f"function expects m={f.m}, integrating over m={m}")
    scale = spec.radial_scale if scale is None else scale
    if spec.method == "monte_carlo":
        val, err = _monte_carlo(f, m, spec, scale, center)
        details = {"samples": spec.mc_samples}
    elif spec.method == "tensor_gauss":
        val = _tensor(f, m, spec, scale, center, spec.radial_nodes, spec.angular_nodes)
        coarse = _tensor(f, m, spec, scale, center, max(2, (2 * spec.radial_nodes) // 3), spec.angular_nodes)
        err = float(np.linalg.norm(val - coarse))
        details = {"radial_nodes": spec.radial_nodes, "angular_nodes": spec.angular_nodes}
    else:
        rn, an = spec.radial_nodes, spec.angular_nodes
        prev = _tensor(f, m, spec, scale, center, rn, an)
        err = math.inf
        levels = 1
        while levels < spec.max_levels:
            rn, an = 2 * rn, 2 * an
            val = _tensor(f, m, spec, scale, center, rn, an)
            levels += 1
            err = float(np.linalg.norm(val - prev))
            prev = val
            if err <= spec.target_rel_tol * np.linalg.norm(val):
                break
        val = prev
        details = {"levels": levels, "radial_nodes": rn, "angular_nodes": an}
    norm = float(np.linalg.norm(val))
    details["tail"] = _tail_check(f, m, spec, scale, center, norm)
    return QuadResult(Quaternion(*(float(x) for x in val)), err, spec.spec_hash(), details)


# --- symmetry reduction ------------------------------------------------------


@dataclass(frozen=True)
class ReducedIntegral:
    """``int g(|w|, |z'|) d(beta)`` as a radial integral.

    Weight ``4 pi r^2 * A ρ^{4m-1}`` with ``A`` the area of ``S^{4m-1}``;
    for ``m = 0`` only the ``r`` integral remains.
    """

    m: int

    @property
    def sphere_area(self) -> float:
        return sphere_area(4 * self.m) if self.m else 1.0

    def integrate(self, g: Callable[[np.ndarray, np.ndarray], np.ndarray], nodes: int = 96, scale: float = 1.0) -> float:
        r, wr = radial_rule(nodes, 3, scale * scale)
        wr = wr * 4 * math.pi
        if self.m == 0:
            return float(wr @ g(r, np.zeros_like(r)))
        rho, wrho = radial_rule(nodes, 4 * self.m, scale)
        wrho = wrho * self.sphere_area
        R, P = np.meshgrid(r, rho, indexing="ij")
        return float(wr @ g(R, P) @ wrho)


def symmetry_reduce(n: int) -> ReducedIntegral:
    return ReducedIntegral(n)


def check_symmetry(f: BoundaryFunction, m: int, rng: np.random.Generator, rotations: int = 8, rtol: float = 1e-10) -> float:
    """Compare ``f`` at random points and at rotated copies; raise if it is not radial.

    ``w`` is rotated by a random element of SO(3), ``z'`` by a random Sp(m) matrix.
    """
    worst = 0.0
    for _ in range(rotations):
        w = rng.normal(size=(1, 3))
        z = rng.normal(size=(1, m, 4)) * 0.7
        u = qt.random_unit(rng).to_array()
        w_rot = qt.qmul_arr(qt.qmul_arr(qt.qconj_arr(u), np.concatenate([[0.0], w[0]])), u)[1:][None]
        if m:
            a = qt.random_sp(m, rng)
            z_rot = np.array([[qt.mat_apply(a, tuple(Quaternion(*zz) for zz in z[0]))[i].to_array() for i in range(m)]])
        else:
            z_rot = z
        v0 = f.evaluate(w, z)[0]
        v1 = f.evaluate(w_rot, z_rot)[0]
        dev = float(np.linalg.norm(v0 - v1) / max(np.linalg.norm(v0), 1e-300))
        worst = max(worst, dev)
    if worst > rtol:
        raise ValueError(f"integrand is not invariant under rotations (relative deviation {worst:.3e})")
    return worst


def normalization_integrand(n: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """``|s_unnorm(1 + conj(Q1))|^2`` as a function of ``(|Im Q1|, |Q'|)``."""

    def g(r, rho):
        return np.abs(_complex_profile((1 + rho * rho) + 1j * r, n)) ** 2

    return g


def normalization_boundary_function(n: int) -> BoundaryFunction:
    """Same integrand on the full boundary, for the unreduced paths."""

    def f(w, z):
        q1 = np.empty(w.shape[:-1] + (4,))
        q1[..., 0] = 1 + (np.sum(z * z, axis=(-1, -2)) if n else 0.0)
        q1[..., 1:] = -w
        s = s_unnorm_arr(q1, n)
        return np.sum(s * s, axis=-1)

    return BoundaryFunction(f, n)


@dataclass(frozen=True)
class EmpiricalConstant:
    n: int
    value: float
    A: float
    abs_error_estimate: float
    spec_hash: str
    ratio_to_paper: Optional[float]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "c_emp": self.value,
            "A": self.A,
            "abs_error_estimate": self.abs_error_estimate,
            "spec_hash": self.spec_hash,
            "ratio_to_paper": self.ratio_to_paper,
        }


def c_emp(n: int, spec: Optional[QuadratureSpec] = None, reduced: bool = True) -> EmpiricalConstant:
    """Empirical normalisation ``F_e_closed(n) / A(n)``.

    ``A(n) = int |s_unnorm(1 + conj(Q1))|^2 d(beta)`` with ``m = n``; by default
    through the radial reduction, otherwise through :func:`integrate_boundary`.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    spec = spec or QuadratureSpec(radial_nodes=96)
    if reduced:
        check_symmetry(normalization_boundary_function(n), n, np.random.default_rng(spec.seed))
        red = symmetry_reduce(n)
        g = normalization_integrand(n)
        A = red.integrate(g, spec.radial_nodes, spec.radial_scale)
        coarse = red.integrate(g, max(2, (2 * spec.radial_nodes) // 3), spec.radial_scale)
        err_A = abs(A - coarse)
    else:
        res = integrate_boundary(normalization_boundary_function(n), n, spec)
        A, err_A = res.real, res.abs_error_estimate
    if not (math.isfinite(A) and A > 0):
        raise NonFinite(f"normalisation integral is {A}")
    value = float(F_e_closed(n)) / A
    ratio = None
    if n >= 1:
        ratio = value / KernelContext(n).c_paper_float
    return EmpiricalConstant(n, value, A, value * err_A / A, spec.spec_hash(), ratio)


# --- projection and Hardy norm -------------------------------------------------


def _interior_arrays(q: SiegelPoint):
    q1, qp = points_to_arrays(q)
    return q1.astype(float), qp.astype(float)


def kernel_section(p0: SiegelPoint, ctx: KernelContext) -> BoundaryFunction:
    """Boundary trace of ``Q -> s_unnorm(kernel_arg(Q, p0))``."""
    p1, pp = _interior_arrays(p0)

    def f(w, z):
        Q1 = np.empty(w.shape[:-1] + (4,))
        Q1[..., 0] = np.sum(z * z, axis=(-1, -2)) if z.shape[-2] else 0.0
        Q1[..., 1:] = w
        return s_unnorm_arr(kernel_arg_arr(Q1, z, p1, pp), ctx.n)

    return BoundaryFunction(f, ctx.m)


def kernel_section_interior(p0: SiegelPoint, ctx: KernelContext) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """``(Q1, Q') -> s_unnorm(kernel_arg(Q, p0))`` on interior arrays."""
    p1, pp = _interior_arrays(p0)

    def F(Q1, Qp):
        return s_unnorm_arr(kernel_arg_arr(Q1, Qp, p1, pp), ctx.n)

    return F


def natural_center(q: SiegelPoint) -> HeisenbergElement:
    """Group element below ``q``: ``(Im q1, q')``."""
    return HeisenbergElement(q.q1.to_float().imag, tuple(z.to_float() for z in q.qprime))


def szego_project(
    fb: BoundaryFunction,
    q: SiegelPoint,
    ctx: KernelContext,
    spec: QuadratureSpec = QuadratureSpec(),
    normalization: str = "empirical",
    anchors: Optional[Sequence[tuple[HeisenbergElement, float]]] = None,
) -> QuadResult:
    """``int S(q, Q) fb(Q) d(beta)(Q)`` with the product in that order.

    ``anchors`` lists ``(center, scale)`` grids for :func:`integrate_split`;
    by default a single grid centred below ``q``.
    """
    if q.m != ctx.m or fb.m != ctx.m:
        raise ValueError(f"context expects m={ctx.m}")
    const = ctx.constant(normalization)
    q1, qp = _interior_arrays(q)

    def integrand(w, z):
        Q1 = np.empty(w.shape[:-1] + (4,))
        Q1[..., 0] = np.sum(z * z, axis=(-1, -2)) if z.shape[-2] else 0.0
        Q1[..., 1:] = w
        S = s_unnorm_arr(kernel_arg_arr(q1, qp, Q1, z), ctx.n) * const
        return qt.qmul_arr(S, fb.evaluate(w, z))

    if anchors is None:
        anchors = [(natural_center(q), math.sqrt(float(defining_r(q))))]
    return integrate_split(BoundaryFunction(integrand, ctx.m), ctx.m, spec, anchors)


@dataclass(frozen=True)
class ReproductionCheck:
    q0: SiegelPoint
    p0: SiegelPoint
    direct: Quaternion
    projected: Quaternion
    rel_error: float
    abs_error_estimate: float

    def to_json(self) -> dict:
        return {
            "direct": [float(c) for c in self.direct.components],
            "projected": [float(c) for c in self.projected.components],
            "rel_error": self.rel_error,
            "abs_error_estimate": self.abs_error_estimate,
        }


def _anchor_offsets(anchor: HeisenbergElement, w: np.ndarray, z: np.ndarray) -> np.ndarray:
    aw = np.array([float(anchor.w.x2), float(anchor.w.x3), float(anchor.w.x4)])
    dw = np.sum((w - aw) ** 2, axis=-1)
    if anchor.m == 0:
        return dw
    az = np.array([zz.to_array() for zz in anchor.zprime], dtype=float).reshape(anchor.m, 4)
    dz = np.sum((z - az) ** 2, axis=(-1, -2))
    return dw + dz * dz


def integrate_split(
    f: BoundaryFunction,
    m: int,
    spec: QuadratureSpec,
    anchors: Sequence[tuple[HeisenbergElement, float]],
) -> QuadResult:
    """Integrate ``f`` as a sum of pieces, one grid per ``(center, scale)`` anchor.

    The pieces come from the smooth partition of unity
    ``chi_i = prod_{j != i} D_j / sum_k prod_{l != k} D_l`` with
    ``D_i = 1 + (|dw|^2 + |dz|^4) / scale_i^4``, so each grid only sees the
    part of ``f`` near its own anchor.
    """
    anchors = list(anchors)
    if len(anchors) == 1:
        c, sc = anchors[0]
        return integrate_boundary(f, m, spec, center=c, scale=sc)

    def weights(w, z):
        D = np.stack([1 + _anchor_offsets(c, w, z) / sc**4 for c, sc in anchors])
        prods = np.stack([np.prod(np.delete(D, i, axis=0), axis=0) for i in range(len(anchors))])
        return prods / prods.sum(axis=0)

    total = np.zeros(4)
    err = 0.0
    details = {"pieces": []}
    for i, (c, sc) in enumerate(anchors):
        piece = BoundaryFunction(lambda w, z, i=i: f.evaluate(w, z) * weights(w, z)[i][:, None], m)
        res = integrate_boundary(piece, m, spec, center=c, scale=sc)
        total += res.value.to_array()
        err += res.abs_error_estimate
        details["pieces"].append(res.details)
    return QuadResult(Quaternion(*(float(x) for x in total)), err, spec.spec_hash(), details)


def reproduction_check(q0: SiegelPoint, p0: SiegelPoint, ctx: KernelContext, spec: QuadratureSpec, normalization: str = "empirical") -> ReproductionCheck:
    """Compare ``F(q0)`` with its Szego projection for ``F = s_unnorm(kernel_arg(., p0))``.

    The grid is centred below whichever point is closer to the boundary (the
    sharper of the two factors) and scaled to its height.
    """
    F = kernel_section_interior(p0, ctx)
    q1, qp = _interior_arrays(q0)
    direct = F(q1[None], qp[None])[0]
    low = min((q0, p0), key=lambda x: float(defining_r(x)))
    anchors = [(natural_center(low), math.sqrt(float(defining_r(low))))]
    res = szego_project(kernel_section(p0, ctx), q0, ctx, spec, normalization, anchors)
    proj = res.value.to_array()
    rel = float(np.linalg.norm(proj - direct) / np.linalg.norm(direct))
    return ReproductionCheck(q0, p0, Quaternion(*direct), res.value, rel, res.abs_error_estimate)


@dataclass(frozen=True)
class HardyResult:
    value: float
    eps_grid: tuple
    values: tuple
    monotone: bool
    spec_hash: str


def hardy_norm_sq(
    F: Callable[[np.ndarray, np.ndarray], np.ndarray],
    m: int,
    spec: QuadratureSpec,
    eps_grid: Sequence[float],
    center: Optional[HeisenbergElement] = None,
    scale: Optional[float] = None,
) -> HardyResult:
    """``max_eps int |F(Q + eps e)|^2 d(beta)`` over a decreasing grid of ``eps``.

    ``F`` takes interior arrays ``(Q1 (N,4), Q' (N,m,4))`` and returns ``(N,4)``.
    ``monotone`` records whether the integrals grow as ``eps`` decreases.
    """
    eps_grid = tuple(float(e) for e in eps_grid)
    if not eps_grid:
        raise ValueError("eps_grid must be nonempty")
    if any(e <= 0 for e in eps_grid) or any(a <= b for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps_grid must be positive and strictly decreasing")
    vals = []
    for eps in eps_grid:

        def f(w, z, eps=eps):
            Q1 = np.empty(w.shape[:-1] + (4,))
            Q1[..., 0] = (np.sum(z * z, axis=(-1, -2)) if m else 0.0) + eps
            Q1[..., 1:] = w
            v = F(Q1, z)
            return np.sum(v * v, axis=-1)

        vals.append(integrate_boundary(BoundaryFunction(f, m), m, spec, center=center, scale=scale).real)
    monotone = all(b >= a * (1 - 1e-9) for a, b in zip(vals, vals[1:]))
    return HardyResult(max(vals), eps_grid, tuple(vals), monotone, spec.spec_hash())


def decay_bound_holds(n: int, w: np.ndarray, z: np.ndarray, x0: float, eps: float) -> bool:
    """``|s_unnorm(Q1 + x0 + eps)|^2 <= C/((|z|^2 + x0 + eps)^2 + |w|^2)^{2n+3}`` at every point.

    ``C = ((2n+2)!/2)^2`` bounds the coefficient sum of the expansion.
    """
    re = (np.sum(z * z, axis=(-1, -2)) if z.shape[-2] else 0.0) + x0 + eps
    sig = np.concatenate([np.asarray(re)[..., None] * np.ones(w.shape[:-1] + (1,)), w], axis=-1)
    lhs = np.sum(s_unnorm_arr(sig, n) ** 2, axis=-1)
    C = (math.factorial(2 * n + 2) / 2) ** 2
    rhs = C / (re * re + np.sum(w * w, axis=-1)) ** (2 * n + 3)
    return bool(np.all(lhs <= rhs * (1 + 1e-12)))


def dilation_factor(n: int, m: int, q0: SiegelPoint, p0: SiegelPoint, r: float, spec: QuadratureSpec) -> dict:
    """Projection/direct norm ratio at ``(q0, p0)`` and at the dilated pair.

    With ``m = n`` the unnormalised ratio is dilation invariant; otherwise it
    picks up ``r^{4(m-n)}``.  Returns both ratios and their quotient.
    """
    ctx = KernelContext(n, m=m, allow_mismatched_dimension=True)
    base = reproduction_check(q0, p0, ctx, spec, "unnormalized")
    moved = reproduction_check(dilate(r, q0), dilate(r, p0), ctx, spec, "unnormalized")
    ratio0 = abs(base.projected) / abs(base.direct)
    ratio1 = abs(moved.projected) / abs(moved.direct)
    factor = ratio1 / ratio0
    return {
        "n": n,
        "m": m,
        "r": r,
        "ratio_base": ratio0,
        "ratio_dilated": ratio1,
        "factor": factor,
        "fitted_exponent": math.log(factor) / math.log(r),
        "expected_exponent": 4 * (m - n),
    }
