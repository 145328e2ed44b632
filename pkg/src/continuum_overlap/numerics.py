"""Low-level numerical kernel.

Adaptive Gauss-Kronrod quadrature for complex-valued (possibly oscillatory)
integrands, Cauchy principal values, the finite-interval Dirichlet kernel
2 sin(dk*L)/dk, the Airy function Ai, and the complex log-gamma function.

Everything here is a pure function; no global mutable state apart from a
lazily built, immutable-once-built node cache for the Airy evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NonConvergence",
    "PoleOutsideInterval",
    "PoleOfGamma",
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "integrate_complex",
    "principal_value",
    "dirichlet_kernel",
    "airy_ai",
    "airy_ai_prime",
    "log_gamma_complex",
]


class NonConvergence(RuntimeError):
    """Subdivision budget exhausted before the error target was met."""


class PoleOutsideInterval(ValueError):
    """Principal-value pole does not lie strictly inside the interval."""


class PoleOfGamma(ValueError):
    """log-gamma evaluated at a non-positive integer."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Error targets and work budget for the adaptive integrator."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()

# 15-point Kronrod extension of 7-point Gauss (QUADPACK values, [-1, 1]).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full symmetric node/weight tables on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 ascending
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WGFULL = np.zeros(15)
_WGFULL[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])    # Gauss nodes sit at odd slots


def _panel_estimates(f, lo: np.ndarray, hi: np.ndarray):
    """Vectorised GK15 on a batch of panels. Returns (kronrod, error) per panel."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    xs = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(xs.ravel()), dtype=complex).reshape(xs.shape)
    if not np.all(np.isfinite(vals)):
        raise NonConvergence("integrand returned a non-finite value")
    k15 = half * (vals @ _WK)
    g7 = half * (vals @ _WGFULL)
    return k15, np.abs(k15 - g7)


def integrate_complex(f, x1: float, x2: float,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                      osc_scale: float | None = None) -> complex:
    """Adaptive complex-valued integral of ``f`` over [x1, x2].

    ``f`` must accept a 1-D ndarray of abscissae and return the complex
    integrand values.  ``osc_scale`` is an optional dominant wavenumber of
    the integrand; panels are pre-split to half oscillation periods so the
    Kronrod error estimate is trustworthy on long oscillatory ranges.

    Raises :class:`NonConvergence` when the subdivision budget runs out.
    """
    if not x1 < x2:
        raise ValueError("need x1 < x2")
    npre = 1
    if osc_scale is not None and osc_scale > 0:
        # one panel per half period once kappa * panel exceeds 2*pi
        if osc_scale * (x2 - x1) > 2.0 * math.pi:
            npre = int(math.ceil(osc_scale * (x2 - x1) / math.pi))
    npre = min(max(npre, 1), max(cfg.max_subdivisions // 2, 1))
    edges = np.linspace(x1, x2, npre + 1)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    k15, err = _panel_estimates(f, lo, hi)
    used = npre
    while True:
        total = k15.sum()
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err.sum() <= tol:
            return complex(total)
        if used >= cfg.max_subdivisions:
            raise NonConvergence(
                f"quadrature error {err.sum():.3e} > {tol:.3e} after "
                f"{used} panels; integrand too oscillatory for this config")
        # split every panel holding more than its equal share of the budget
        bad = err > tol / max(len(err), 1)
        if not bad.any():
            bad = err == err.max()
        nbad = int(bad.sum())
        room = cfg.max_subdivisions - used
        if nbad > room:
            order = np.argsort(err)[::-1]
            keep = order[:room]
            bad = np.zeros_like(bad)
            bad[keep] = True
            nbad = room
        mid = 0.5 * (lo[bad] + hi[bad])
        new_lo = np.concatenate([lo[~bad], lo[bad], mid])
        new_hi = np.concatenate([hi[~bad], mid, hi[bad]])
        k15_new, err_new = _panel_estimates(f, new_lo[len(lo[~bad]):], new_hi[len(hi[~bad]):])
        k15 = np.concatenate([k15[~bad], k15_new])
        err = np.concatenate([err[~bad], err_new])
        lo, hi = new_lo, new_hi
        used += nbad


def principal_value(f, pole: float, x1: float, x2: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> complex:
    """Cauchy principal value of ``integral f(x)/(x - pole) dx`` over [x1, x2].

    The symmetric neighbourhood of the pole is folded to the regular
    integrand ``(f(pole+u) - f(pole-u))/u``; the remainder is integrated
    directly.  ``f`` itself must be smooth at the pole.
    """
    if not (x1 < pole < x2):
        raise PoleOutsideInterval(f"pole {pole} not inside ({x1}, {x2})")
    delta = min(pole - x1, x2 - pole)

    def folded(u):
        u = np.asarray(u)
        return (np.asarray(f(pole + u), dtype=complex)
                - np.asarray(f(pole - u), dtype=complex)) / u

    out = integrate_complex(folded, delta * 1e-14, delta, cfg)
    if pole - delta > x1:
        out += integrate_complex(
            lambda x: np.asarray(f(x), dtype=complex) / (x - pole), x1, pole - delta, cfg)
    if pole + delta < x2:
        out += integrate_complex(
            lambda x: np.asarray(f(x), dtype=complex) / (x - pole), pole + delta, x2, cfg)
    return out


_DIRICHLET_BRANCH = 1e-8


def dirichlet_kernel(dk, lam: float):
    """Finite-interval delta surrogate 2 sin(dk*lam)/dk.

    Tends to 2*pi*delta(dk) as lam grows.  Near dk = 0 the Taylor branch
    2*lam*(1 - (dk*lam)^2/6) avoids the 0/0 cancellation; the branch
    threshold is |dk*lam| < 1e-8 where the two expressions agree to 1e-12.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    dk = np.asarray(dk, dtype=float)
    scalar = dk.ndim == 0
    dk = np.atleast_1d(dk)
    out = np.empty_like(dk)
    small = np.abs(dk * lam) < _DIRICHLET_BRANCH
    out[small] = 2.0 * lam * (1.0 - (dk[small] * lam) ** 2 / 6.0)
    out[~small] = 2.0 * np.sin(dk[~small] * lam) / dk[~small]
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Airy function
# ---------------------------------------------------------------------------

_AI0 = 0.3550280538878172392600631860041831763980
_AIP0 = -0.2588194037928067984051835601892039634793
_SERIES_EDGE = 4.0
_ASYM_EDGE = 12.0
_NODE_STEP = 0.25


def _airy_series(x: np.ndarray):
    """Maclaurin evaluation, reliable for |x| <= ~4.5. Returns (Ai, Ai')."""
    x = np.asarray(x, dtype=float)
    f = np.ones_like(x)
    g = x.copy()
    fp = np.zeros_like(x)      # d/dx of f-series
    gp = np.ones_like(x)
    tf = np.ones_like(x)
    tg = x.copy()
    x3 = x ** 3
    for n in range(40):
        tf = tf * x3 / ((3 * n + 2) * (3 * n + 3))
        tg = tg * x3 / ((3 * n + 3) * (3 * n + 4))
        f += tf
        g += tg
        fp += tf * (3 * n + 3) / np.where(x == 0.0, 1.0, x)
        gp += tg * (3 * n + 4) / np.where(x == 0.0, 1.0, x)
        if np.all(np.abs(tf) + np.abs(tg) < 1e-18 * (np.abs(f) + np.abs(g) + 1)):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    aip = np.where(x == 0.0, _AIP0, aip)
    return ai, aip


def _asym_u(nterms: int) -> np.ndarray:
    u = np.empty(nterms)
    u[0] = 1.0
    for k in range(1, nterms):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
    return u


_U = _asym_u(28)
_V = np.empty_like(_U)
_V[0] = 1.0
_V[1:] = -_U[1:] * (6 * np.arange(1, len(_U)) + 1) / (6 * np.arange(1, len(_U)) - 1)


def _airy_asym_pos(x: np.ndarray):
    """Exponentially decaying asymptotics for x >= ~10. Returns (Ai, Ai')."""
    zeta = (2.0 / 3.0) * x ** 1.5
    inv = 1.0 / zeta
    s = np.zeros_like(x)
    sp = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(len(_U)):
        s += term * _U[k] * (-1) ** k
        sp += term * _V[k] * (-1) ** k
        term = term * inv
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25)
    ai = pref * s
    aip = -np.exp(-zeta) * x ** 0.25 / (2.0 * math.sqrt(math.pi)) * sp
    return ai, aip


def _airy_asym_neg(x: np.ndarray):
    """Oscillatory asymptotics for x <= ~-7. Returns (Ai, Ai')."""
    t = -x
    zeta = (2.0 / 3.0) * t ** 1.5
    inv2 = 1.0 / zeta ** 2
    seven = np.zeros_like(t)
    sodd = np.zeros_like(t)
    pev = np.zeros_like(t)
    podd = np.zeros_like(t)
    term = np.ones_like(t)
    for j in range(len(_U) // 2):
        seven += term * _U[2 * j] * (-1) ** j
        sodd += term * _U[2 * j + 1] * (-1) ** j
        pev += term * _V[2 * j] * (-1) ** j
        podd += term * _V[2 * j + 1] * (-1) ** j
        term = term * inv2
    sodd = sodd / zeta
    podd = podd / zeta
    arg = zeta - 0.25 * math.pi
    c, s = np.cos(arg), np.sin(arg)
    pref = 1.0 / (math.sqrt(math.pi) * t ** 0.25)
    ai = pref * (c * seven + s * sodd)
    aip = t ** 0.25 / math.sqrt(math.pi) * (s * pev - c * podd)
    return ai, aip


def _build_airy_nodes() -> dict:
    """Taylor-march (Ai, Ai') onto nodes covering 4 <= |x| <= 12.5.

    The positive side is marched inward from the asymptotic anchor at
    x = 12.75 (the stable direction for the decaying solution); the
    negative, oscillatory side is marched outward from the series anchor
    at x = -4.
    """
    nodes: dict[float, tuple[float, float]] = {}

    def taylor_step(x0, ai, aip, h):
        c = [ai, aip]
        for n in range(30):
            nxt = (x0 * c[n] + (c[n - 1] if n >= 1 else 0.0)) / ((n + 1) * (n + 2))
            c.append(nxt)
        val = 0.0
        dval = 0.0
        for n in range(len(c) - 1, -1, -1):
            val = val * h + c[n]
        for n in range(len(c) - 1, 0, -1):
            dval = dval * h + n * c[n]
        return val, dval

    x = 12.75
    arr = np.array([x])
    ai, aip = _airy_asym_pos(arr)
    ai, aip = float(ai[0]), float(aip[0])
    nodes[round(x, 4)] = (ai, aip)
    while x > _SERIES_EDGE - 0.3:
        ai, aip = taylor_step(x, ai, aip, -_NODE_STEP)
        x -= _NODE_STEP
        nodes[round(x, 4)] = (ai, aip)

    x = -_SERIES_EDGE
    arr = np.array([x])
    ai, aip = _airy_series(arr)
    ai, aip = float(ai[0]), float(aip[0])
    nodes[round(x, 4)] = (ai, aip)
    while x > -_ASYM_EDGE - 0.8:
        ai, aip = taylor_step(x, ai, aip, -_NODE_STEP)
        x -= _NODE_STEP
        nodes[round(x, 4)] = (ai, aip)
    return nodes


_AIRY_NODES: dict | None = None


def _airy_band(x: np.ndarray):
    """Node-cache Taylor evaluation on 4 <= |x| <= 12.5. Returns (Ai, Ai')."""
    global _AIRY_NODES
    if _AIRY_NODES is None:
        _AIRY_NODES = _build_airy_nodes()
    near = np.round(x / _NODE_STEP) * _NODE_STEP
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    for x0 in np.unique(near):
        key = round(float(x0), 4)
        a0, ap0 = _AIRY_NODES[key]
        sel = near == x0
        h = x[sel] - x0
        c = [a0, ap0]
        for n in range(22):
            c.append((x0 * c[n] + (c[n - 1] if n >= 1 else 0.0)) / ((n + 1) * (n + 2)))
        val = np.zeros_like(h)
        dval = np.zeros_like(h)
        for n in range(len(c) - 1, -1, -1):
            val = val * h + c[n]
        for n in range(len(c) - 1, 0, -1):
            dval = dval * h + n * c[n]
        ai[sel] = val
        aip[sel] = dval
    return ai, aip


def _airy_pair(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    if not np.all(np.isfinite(x)):
        raise ValueError("airy argument must be finite")
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    core = np.abs(x) <= _SERIES_EDGE
    band = (~core) & (np.abs(x) <= _ASYM_EDGE)
    pos = x > _ASYM_EDGE
    neg = x < -_ASYM_EDGE
    if core.any():
        ai[core], aip[core] = _airy_series(x[core])
    if band.any():
        ai[band], aip[band] = _airy_band(x[band])
    if pos.any():
        ai[pos], aip[pos] = _airy_asym_pos(x[pos])
    if neg.any():
        ai[neg], aip[neg] = _airy_asym_neg(x[neg])
    if scalar:
        return float(ai[0]), float(aip[0])
    return ai, aip


def airy_ai(x):
    """Airy function Ai(x); scalar or ndarray argument."""
    return _airy_pair(x)[0]


def airy_ai_prime(x):
    """Derivative Ai'(x); shares the evaluation machinery of :func:`airy_ai`."""
    return _airy_pair(x)[1]


# ---------------------------------------------------------------------------
# complex log-gamma (Lanczos, g = 7, 9 coefficients)
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma_complex(z) -> complex:
    """Principal-branch log Gamma(z) for complex z.

    Lanczos rational approximation with the reflection formula for
    Re z < 0.5; raises :class:`PoleOfGamma` at non-positive integers.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise PoleOfGamma(f"Gamma pole at z = {z.real:g}")
    if z.imag < 0.0:
        return complex(np.conj(log_gamma_complex(np.conj(z))))
    if z.real < 0.5:
        # reflection on the standard branch; _log_sin_pi is continuous on Im z >= 0
        refl = math.log(math.pi) - _log_sin_pi(z) - log_gamma_complex(1.0 - z)
        return complex(refl)
    zz = z - 1.0
    x = _LANCZOS_C[0] + np.sum(_LANCZOS_C[1:] / (zz + np.arange(1, 9)))
    t = zz + _LANCZOS_G + 0.5
    return complex(_LN_SQRT_2PI + (zz + 0.5) * np.log(t) - t + np.log(x))


def _log_sin_pi(z: complex) -> complex:
    """Branch of log sin(pi z), continuous on the upper half plane.

    Uses sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}); for Im z >= 0 the
    principal log of (1 - e^{2 pi i z}) never crosses its cut, which makes
    the reflection formula land on the standard log-gamma branch.
    """
    w = np.exp(2j * math.pi * z)
    return complex(-math.log(2.0) + 0.5j * math.pi - 1j * math.pi * z + np.log(1.0 - w))
