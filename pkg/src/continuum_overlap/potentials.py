"""Catalog of exactly solvable 1D potentials.

Each entry supplies closed-form reflection/transmission coefficients and the
stationary scattering wavefunction with plane-wave asymptotics

    phi(k, x) = e^{ikx} + R(k) e^{-ikx}   on the incoming side,
    phi(k, x) = T(k) e^{ikx}              on the transmitted side,

in units hbar = 1 with particle mass ``m`` (default 1).  The rectangular
barrier/well keeps its interior amplitudes A+/A- and the secular denominator
D(k); the 1/cosh^2 profile gets its coefficients from gamma-function ratios.
All closed forms are entire in the interior wavenumber, so the evanescent
regime E < V0 is handled by the same expressions with complex k_hat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import airy_ai, log_gamma_complex

__all__ = [
    "DividesByZeroD",
    "PotentialSpec",
    "ScatteringCoefficients",
    "Wavenumbers",
    "interior_wavenumber",
    "coefficients",
    "coefficient_arrays",
    "wavefunction",
    "wavefunction_derivative",
    "airy_state",
]

KINDS = ("free", "delta", "square_well", "poschl_teller", "linear")


class DividesByZeroD(ZeroDivisionError):
    """Secular denominator D(k) vanished exactly."""


@dataclass(frozen=True)
class PotentialSpec:
    """Tagged description of one solvable potential.

    ``square_well`` is the rectangular profile of height ``V0`` on
    (-a/2, a/2]; ``delta`` is g*delta(x); ``poschl_teller`` is
    V0 / cosh^2(mu x); ``linear`` is m*g_accel*z (uniform force).
    """

    kind: str
    g: Optional[float] = None
    V0: Optional[float] = None
    a: Optional[float] = None
    mu: Optional[float] = None
    nu: Optional[complex] = None
    g_accel: Optional[float] = None
    m: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.m <= 0:
            raise ValueError("mass must be positive")
        if self.kind == "delta" and self.g is None:
            raise ValueError("delta potential needs g")
        if self.kind == "square_well":
            if self.V0 is None or self.a is None:
                raise ValueError("square well needs V0 and a")
            if self.a <= 0:
                raise ValueError("well width a must be positive")
        if self.kind == "poschl_teller":
            if self.mu is None:
                object.__setattr__(self, "mu", 1.0)
            if self.mu <= 0:
                raise ValueError("mu must be positive")
            if self.V0 is None and self.nu is None:
                raise ValueError("poschl_teller needs V0 or nu")
            if self.nu is None:
                # nu(nu+1) = -2 m V0 / mu^2, root with Re nu >= -1/2
                c = -2.0 * self.m * self.V0 / self.mu ** 2
                object.__setattr__(
                    self, "nu", (-1.0 + np.sqrt(complex(1.0 + 4.0 * c))) / 2.0)
        if self.kind == "linear" and self.g_accel is None:
            raise ValueError("linear potential needs g_accel")

    # -- constructors ------------------------------------------------------
    @classmethod
    def free(cls, m: float = 1.0) -> "PotentialSpec":
        return cls(kind="free", m=m)

    @classmethod
    def delta(cls, g: float, m: float = 1.0) -> "PotentialSpec":
        return cls(kind="delta", g=g, m=m)

    @classmethod
    def square_well(cls, V0: float, a: float, m: float = 1.0) -> "PotentialSpec":
        return cls(kind="square_well", V0=V0, a=a, m=m)

    @classmethod
    def poschl_teller(cls, V0: float | None = None, mu: float = 1.0,
                      nu: complex | None = None, m: float = 1.0) -> "PotentialSpec":
        return cls(kind="poschl_teller", V0=V0, mu=mu, nu=nu, m=m)

    @classmethod
    def linear(cls, g_accel: float, m: float = 1.0) -> "PotentialSpec":
        return cls(kind="linear", g_accel=g_accel, m=m)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        out = {"kind": self.kind, "m": self.m}
        for name in ("g", "V0", "a", "mu", "g_accel"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        if self.kind == "poschl_teller" and self.V0 is None:
            out["nu"] = [self.nu.real, self.nu.imag]
        return out

    @classmethod
    def from_json(cls, obj: dict | str) -> "PotentialSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        allowed = {"kind", "g", "V0", "a", "mu", "nu", "g_accel", "m"}
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown potential keys: {sorted(unknown)}")
        kw = dict(obj)
        nu = kw.get("nu")
        if isinstance(nu, (list, tuple)):
            kw["nu"] = complex(nu[0], nu[1])
        return cls(**kw)

    def region_edges(self) -> tuple[float, float]:
        """Interval outside which the potential is (numerically) zero."""
        if self.kind == "square_well":
            return (-self.a / 2.0, self.a / 2.0)
        if self.kind == "delta":
            return (0.0, 0.0)
        if self.kind == "poschl_teller":
            reach = 40.0 / self.mu  # sech^2 below 1e-34 beyond this
            return (-reach, reach)
        return (0.0, 0.0)


@dataclass(frozen=True)
class Wavenumbers:
    """Exterior wavenumber k, interior k_hat and the shared energy E."""

    k: float
    k_hat: complex
    energy: float


@dataclass(frozen=True)
class ScatteringCoefficients:
    R: complex
    T: complex
    A_plus: Optional[complex] = None
    A_minus: Optional[complex] = None
    D: Optional[complex] = None

    @property
    def unitarity_defect(self) -> float:
        return abs(abs(self.R) ** 2 + abs(self.T) ** 2 - 1.0)


def interior_wavenumber(spec: PotentialSpec, k) -> Wavenumbers:
    """Interior wavenumber from E = k^2/(2m) = k_hat^2/(2m) + V0.

    Principal square root: Re k_hat >= 0, and Im k_hat >= 0 on the
    evanescent branch E < V0 (decaying interior solutions).
    """
    if spec.kind != "square_well":
        kh = complex(k)
    else:
        kh = np.sqrt(complex(k) ** 2 - 2.0 * spec.m * spec.V0 + 0j)
        if kh.real < 0 or (kh.real == 0 and kh.imag < 0):
            kh = -kh
    kf = complex(k)
    energy = (kf ** 2).real / (2.0 * spec.m) if kf.imag == 0 else float("nan")
    return Wavenumbers(k=kf.real if kf.imag == 0 else kf, k_hat=kh, energy=energy)


def _square_well_coeffs(spec: PotentialSpec, k) -> ScatteringCoefficients:
    a = spec.a
    k = complex(k)
    kh = interior_wavenumber(spec, k).k_hat
    if kh == 0:
        # D(k) = 0 exactly; R, T have a finite limit but A+/A- do not
        raise DividesByZeroD(f"D(k) = 0 at k = {k} (k_hat = 0)")
    # sin(kh a)/kh via series near kh = 0 so D/kh stays cancellation-free
    if abs(kh * a) < 1e-4:
        z2 = (kh * a) ** 2
        sinc = a * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    else:
        sinc = np.sin(kh * a) / kh
    c = np.cos(kh * a)
    Dred = (k * k + kh * kh) * sinc + 2j * k * c      # D(k)/kh
    Dfull = kh * Dred
    if Dred == 0:
        raise DividesByZeroD(f"D(k) = 0 at k = {k}")
    phase = np.exp(-1j * k * a)
    R = phase * (k * k - kh * kh) * sinc / Dred
    T = phase * 2j * k / Dred
    # (1 +- k/kh) * i k kh / D ==  i k (kh +- k) / D
    Ap = np.exp(-1j * (k + kh) * a / 2) * 1j * k * (kh + k) / Dfull
    Am = np.exp(-1j * (k - kh) * a / 2) * 1j * k * (kh - k) / Dfull
    return ScatteringCoefficients(R=complex(R), T=complex(T), A_plus=complex(Ap),
                                  A_minus=complex(Am), D=complex(Dfull))


def _poschl_teller_coeffs(spec: PotentialSpec, k) -> ScatteringCoefficients:
    # closed forms are stated for mu = 1; general mu rescales length
    kk = complex(k) / spec.mu
    nu = spec.nu
    ik = 1j * kk
    lg = log_gamma_complex
    lT = lg(1 + nu - ik) + lg(-nu - ik) - lg(-ik) - lg(1 - ik)
    T = np.exp(lT)
    # R/T = Gamma(ik) Gamma(1-ik) / (Gamma(1+nu) Gamma(-nu)); reflectionless
    # at non-negative integer nu where 1/Gamma(-nu) = 0
    nu_int = abs(nu.imag) < 1e-12 and abs(nu.real - round(nu.real)) < 1e-12 and nu.real >= 0
    if nu_int:
        R = complex(0.0)
    else:
        lratio = lg(ik) + lg(1 - ik) - lg(1 + nu) - lg(-nu)
        R = np.exp(lT + lratio)
    return ScatteringCoefficients(R=complex(R), T=complex(T))


def coefficients(spec: PotentialSpec, k) -> ScatteringCoefficients:
    """Closed-form scattering coefficients of the catalog potential at k."""
    if spec.kind == "free":
        return ScatteringCoefficients(R=0j, T=1 + 0j)
    if spec.kind == "delta":
        g = spec.g
        k = complex(k)
        return ScatteringCoefficients(R=-1j * g / (k + 1j * g), T=k / (k + 1j * g))
    if spec.kind == "square_well":
        return _square_well_coeffs(spec, k)
    if spec.kind == "poschl_teller":
        return _poschl_teller_coeffs(spec, k)
    raise ValueError(f"no scattering coefficients for kind {spec.kind!r}")


def coefficient_arrays(spec: PotentialSpec, k):
    """Vectorised (R, T) over an array of momenta."""
    k = np.asarray(k)
    if spec.kind == "free":
        return np.zeros(k.shape, dtype=complex), np.ones(k.shape, dtype=complex)
    if spec.kind == "delta":
        g = spec.g
        return -1j * g / (k + 1j * g), k / (k + 1j * g)
    if spec.kind == "square_well":
        a = spec.a
        kk = k.astype(complex)
        kh = np.sqrt(kk * kk - 2.0 * spec.m * spec.V0 + 0j)
        s, c = np.sin(kh * a), np.cos(kh * a)
        D = (kk * kk + kh * kh) * s + 2j * kk * kh * c
        phase = np.exp(-1j * kk * a)
        return phase * (kk * kk - kh * kh) * s / D, phase * 2j * kk * kh / D
    # gamma-function coefficients evaluate pointwise
    R = np.empty(k.shape, dtype=complex)
    T = np.empty(k.shape, dtype=complex)
    flat = k.ravel()
    Rf, Tf = R.ravel(), T.ravel()
    for i, kv in enumerate(flat):
        co = coefficients(spec, float(kv))
        Rf[i], Tf[i] = co.R, co.T
    return R, T


def wavefunction(spec: PotentialSpec, k: float, x):
    """Stationary scattering state phi(k, x), piecewise by region.

    Vectorised over ``x``; returns a complex scalar for scalar input.
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    out = _phi_raw(spec, k, x_arr, derivative=False)
    return complex(out[0]) if scalar else out


def wavefunction_derivative(spec: PotentialSpec, k: float, x):
    """Analytic d/dx of :func:`wavefunction` (region-wise closed form)."""
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    out = _phi_raw(spec, k, x_arr, derivative=True)
    return complex(out[0]) if scalar else out


def _phi_raw(spec: PotentialSpec, k: float, x: np.ndarray, derivative: bool) -> np.ndarray:
    if spec.kind == "free":
        base = np.exp(1j * k * x)
        return 1j * k * base if derivative else base
    if spec.kind == "delta":
        co = coefficients(spec, k)
        out = np.empty(x.shape, dtype=complex)
        left = x < 0
        if derivative:
            out[left] = 1j * k * (np.exp(1j * k * x[left]) - co.R * np.exp(-1j * k * x[left]))
            out[~left] = 1j * k * co.T * np.exp(1j * k * x[~left])
        else:
            out[left] = np.exp(1j * k * x[left]) + co.R * np.exp(-1j * k * x[left])
            out[~left] = co.T * np.exp(1j * k * x[~left])
        return out
    if spec.kind == "square_well":
        co = coefficients(spec, k)
        kh = interior_wavenumber(spec, k).k_hat
        half = spec.a / 2.0
        out = np.empty(x.shape, dtype=complex)
        left = x <= -half
        right = x > half
        mid = ~(left | right)
        if derivative:
            out[left] = 1j * k * (np.exp(1j * k * x[left]) - co.R * np.exp(-1j * k * x[left]))
            out[mid] = 1j * kh * (co.A_plus * np.exp(1j * kh * x[mid])
                                  - co.A_minus * np.exp(-1j * kh * x[mid]))
            out[right] = 1j * k * co.T * np.exp(1j * k * x[right])
        else:
            out[left] = np.exp(1j * k * x[left]) + co.R * np.exp(-1j * k * x[left])
            out[mid] = (co.A_plus * np.exp(1j * kh * x[mid])
                        + co.A_minus * np.exp(-1j * kh * x[mid]))
            out[right] = co.T * np.exp(1j * k * x[right])
        return out
    raise ValueError(f"no closed-form wavefunction for kind {spec.kind!r}")


def airy_state(spec: PotentialSpec, E: float, z):
    """Uniform-force stationary state Ai((z - E/(m g)) / c), c = (2 m^2 g)^{-1/3}."""
    if spec.kind != "linear":
        raise ValueError("airy_state needs a linear potential spec")
    mg = spec.m * spec.g_accel
    c = (1.0 / (2.0 * spec.m ** 2 * spec.g_accel)) ** (1.0 / 3.0)
    return airy_ai((np.asarray(z, dtype=float) - E / mg) / c)
