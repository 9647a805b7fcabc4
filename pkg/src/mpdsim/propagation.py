"""Free-particle kernel and closed-form path wave functions.

A path through the slit cascade contributes a complex-Gaussian amplitude

    psi(x) = upsilon * exp(quad * x^2) * exp(xv^T H xv) * exp((lin . xv) x)

where xv is the vector of slit centers the path passed through. The
coefficient sets for evaluation at plane 1 (source only), plane 2 (one
diffraction plane) and plane 3 (two diffraction planes) are built here in
closed form; the nested Fresnel quadrature in the test suite serves as the
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .geometry import InvalidSetupError, PathIndex, PhysicalSetup
from .units import Constants


def kernel(x1: float, t1: float, x0: float, t0: float, k: Constants) -> complex:
    """Free evolution amplitude from (x0, t0) to (x1, t1).

    sqrt(m/(2*pi*i*hbar*dt)) * exp(i*m*(x1-x0)^2/(2*hbar*dt)); vectorizes
    over the position arguments.
    """
    dt = t1 - t0
    if dt <= 0:
        raise InvalidSetupError(f"kernel needs t1 > t0, got dt = {dt}")
    m, hbar = k.m, k.hbar
    dx = np.asarray(x1) - np.asarray(x0)
    return np.sqrt(m / (2j * np.pi * hbar * dt)) * np.exp(1j * m * dx**2 / (2 * hbar * dt))


def source_amplitude(x, sigma0: float):
    """Normalized Gaussian source wave exp(-x^2/(2 sigma0^2)) / (sigma0 sqrt(pi))^(1/2)."""
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (2.0 * sigma0**2)) / np.sqrt(sigma0 * np.sqrt(np.pi))


@dataclass(frozen=True)
class PathCoefficients:
    """Closed-form coefficients of the path amplitude at one plane.

    plane is 1-based: the wave arrives at this plane having diffracted
    through planes 1..plane-1. H has shape (plane-1, plane-1) and lin
    length plane-1. extras carries every named intermediate of the
    derivation for debugging and the probability closed forms.
    """

    plane: int
    upsilon: complex
    quad: complex
    H: np.ndarray
    lin: np.ndarray
    slit_centers: tuple[tuple[float, ...], ...]
    extras: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.plane - 1
        if self.H.shape != (n, n) or self.lin.shape != (n,):
            raise InvalidSetupError(
                f"coefficient shapes {self.H.shape}/{self.lin.shape} do not "
                f"match evaluation plane {self.plane}"
            )
        if self.quad.real >= 0:
            raise InvalidSetupError(
                f"non-normalizable amplitude: Re(quad) = {self.quad.real} >= 0"
            )
        self.H.flags.writeable = False
        self.lin.flags.writeable = False


def source_coeffs(setup: PhysicalSetup) -> PathCoefficients:
    """Wave arriving at plane 1: a spreading Gaussian, no slits yet."""
    m, hbar = setup.constants.m, setup.constants.hbar
    s0, t01 = setup.sigma0, setup.times[0]
    a = hbar**2 * t01**2 + m**2 * s0**4
    A0 = -(m**2) * s0**2 / (2.0 * a)
    B0 = hbar * m * t01 / (2.0 * a)
    chi0 = np.pi**-0.25 * np.sqrt(m * s0 / (m * s0**2 + 1j * hbar * t01))
    return PathCoefficients(
        plane=1,
        upsilon=chi0,
        quad=complex(A0, B0),
        H=np.zeros((0, 0), dtype=complex),
        lin=np.zeros(0, dtype=complex),
        slit_centers=(),
        extras={"a": a, "A0": A0, "B0": B0, "chi0": chi0},
    )


def two_plane_coeffs(setup: PhysicalSetup) -> PathCoefficients:
    """Wave at plane 2 after one Gaussian slit, with the full intermediate
    table needed by the probability closed forms (which also involve the
    plane-2 slit parameter)."""
    if setup.n_planes < 2:
        raise InvalidSetupError("two-plane coefficients need at least 2 planes")
    m, hbar = setup.constants.m, setup.constants.hbar
    s0 = setup.sigma0
    b1, b2 = setup.planes[0].beta, setup.planes[1].beta
    t01, t12 = setup.times[0], setup.times[1]

    a = hbar**2 * t01**2 + m**2 * s0**4
    bt = hbar**2 * (t01 + t12) ** 2
    c_ts = hbar**2 * s0**2 * t12**2
    Xi1 = b1**2 + s0**2
    Xi2 = b2**2 + s0**2
    d_ts = a / (m**2 * s0**2)
    alpha = b1**4 * m**2 * (bt + m**2 * s0**4) + 2 * b1**2 * m**2 * c_ts + hbar**2 * t12**2 * a
    k11 = (b1**4 * m**2 * (m**2 * s0**2 * Xi2 + bt)
           + b1**2 * m**2 * (b2**2 * a + 2 * c_ts) + hbar**2 * t12**2 * a)
    k1 = -hbar * m * t12 * (a + hbar**2 * t01 * t12) / (2 * k11)
    k2 = hbar * m**3 * s0**2 * t12 * (b1**2 + d_ts) / k11
    k3 = -(b1**2) * m**2 * (a + hbar**2 * t01 * t12) / k11
    k4 = b1**2 * m**4 * s0**2 * (b1**2 + d_ts) / k11
    k5 = -(m**2) * (b1**2 * (m**2 * s0**2 * Xi2 + bt) + c_ts) / k11
    k6 = (-(m**2) * 2 * b1**2 * (m**2 * s0**2 * Xi2 + bt) + m**2 * (-(b2**2) * a - 2 * c_ts)) / (4 * k11)
    k7 = b2**2 * m**2 * a / (2 * k11)
    k8 = -0.25 * (1 / b1**2 + 1 / (b1**2 + d_ts))
    k9 = 0.5 * (1 / b1**2 - 1 / (b1**2 + d_ts))
    k10 = -1 / (b1**2 + d_ts)

    theta = m * s0**2 + 1j * hbar * t01
    chi0 = np.pi**-0.25 * np.sqrt(m * s0 / theta)
    xi1 = b1**2 * m * theta / (b1**2 * m * (m * s0**2 + 1j * np.sqrt(bt)) + 1j * hbar * t12 * theta)
    A1 = -(b1**2) * m**2 * (hbar**2 * t01**2 + m**2 * s0**2 * Xi1) / (2 * alpha)
    B1 = (b1**4 * m**3 * hbar * t01 + m * hbar * t12 * (hbar**2 * t01**2 + m**2 * Xi1**2)) / (2 * alpha)
    HR1 = -(m**2) * (b1**2 * (bt + m**2 * s0**4) + c_ts) / (2 * alpha)
    HI1 = m * hbar * t12 * (a + hbar**2 * t01 * t12) / (2 * alpha)
    c1 = b1**2 * m**2 * (a + hbar**2 * t01 * t12) / alpha
    d1 = -m * hbar * t12 * (hbar**2 * t01**2 + m**2 * s0**2 * Xi1) / alpha

    extras = dict(a=a, bt=bt, c_ts=c_ts, d_ts=d_ts, Xi1=Xi1, Xi2=Xi2, alpha=alpha,
                  theta=theta, chi0=chi0, xi1=xi1, A1=A1, B1=B1, HR1=HR1, HI1=HI1,
                  c1=c1, d1=d1,
                  k=(k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11))
    return PathCoefficients(
        plane=2,
        upsilon=chi0 * np.sqrt(xi1),
        quad=complex(A1, B1),
        H=np.array([[HR1 + 1j * HI1]]),
        lin=np.array([c1 + 1j * d1]),
        slit_centers=(setup.planes[0].slit_centers,),
        extras=extras,
    )


def _slit_step(A_prev: float, B_prev: float, beta: float, t: float,
               m: float, hbar: float) -> dict[str, Any]:
    """One diffraction-plane update of the recursive coefficient chain."""
    rho = 4 * beta**4 * (A_prev**2 + B_prev**2) - 4 * A_prev * beta**2 + 1
    zeta = 4 * B_prev * beta**4 * hbar * m * t + beta**4 * m**2 + hbar**2 * t**2 * rho
    zeta_c = (2 * B_prev * hbar * m * t * beta**2 + beta**2 * m**2) / zeta
    zeta_d = hbar * m * t * (2 * A_prev * beta**2 - 1) / zeta
    A = beta**2 * m**2 * (2 * A_prev * beta**2 - 1) / (2 * zeta)
    B = (2 * B_prev * beta**4 * m**2 + hbar * m * t * rho) / (2 * zeta)
    varsigma = hbar * t * (2 * beta**2 * (B_prev - 1j * A_prev) + 1j) + beta**2 * m
    xi = beta**2 * m / varsigma
    return dict(rho=rho, zeta=zeta, zeta_c=zeta_c, zeta_d=zeta_d,
                A=A, B=B, varsigma=varsigma, xi=xi)


def three_plane_coeffs(setup: PhysicalSetup) -> PathCoefficients:
    """Wave at plane 3 after two Gaussian slits, via the two-step recursion."""
    if setup.n_planes < 3:
        raise InvalidSetupError("three-plane coefficients need at least 3 planes")
    m, hbar = setup.constants.m, setup.constants.hbar
    b1, b2 = setup.planes[0].beta, setup.planes[1].beta
    t12, t23 = setup.times[1], setup.times[2]

    src = source_coeffs(setup)
    A0, B0 = src.quad.real, src.quad.imag
    chi0 = src.extras["chi0"]
    s1 = _slit_step(A0, B0, b1, t12, m, hbar)
    s2 = _slit_step(s1["A"], s1["B"], b2, t23, m, hbar)

    nu1_1 = -(2 * hbar * t12 * (A0 + 1j * B0) + 1j * m) / (2j * s1["varsigma"])
    nu1_2 = -(2 * hbar * t23 * (s1["A"] + 1j * s1["B"]) + 1j * m) / (2j * s2["varsigma"])
    nu2_2 = -(b2**2) * hbar * t23 / (2j * s2["varsigma"])
    nu3_2 = -hbar * t23 / (1j * s2["varsigma"])
    nu4_2 = b2**2 * s2["zeta_c"]
    nu5_2 = -2 * hbar * t23 * s2["A"] / m
    r1 = s1["zeta_c"] + 1j * s1["zeta_d"]

    H2 = np.array([[nu2_2 * r1**2 + nu1_1, 0.0],
                   [nu3_2 * r1, nu1_2]])
    lin2 = np.array([(nu4_2 - 1j * nu5_2) * r1, s2["zeta_c"] + 1j * s2["zeta_d"]])
    upsilon = chi0 * np.sqrt(s1["xi"]) * np.sqrt(s2["xi"])

    extras = dict(A0=A0, B0=B0, chi0=chi0, step1=s1, step2=s2,
                  nu1_1=nu1_1, nu1_2=nu1_2, nu2_2=nu2_2, nu3_2=nu3_2,
                  nu4_2=nu4_2, nu5_2=nu5_2)
    return PathCoefficients(
        plane=3,
        upsilon=upsilon,
        quad=complex(s2["A"], s2["B"]),
        H=H2,
        lin=lin2,
        slit_centers=(setup.planes[0].slit_centers, setup.planes[1].slit_centers),
        extras=extras,
    )


def coeffs_for_plane(setup: PhysicalSetup, plane: int) -> PathCoefficients:
    """Coefficient set for evaluating the wave at a given 1-based plane."""
    if plane == 1:
        return source_coeffs(setup)
    if plane == 2:
        return two_plane_coeffs(setup)
    if plane == 3:
        return three_plane_coeffs(setup)
    raise InvalidSetupError(f"no closed form beyond three planes (requested plane {plane})")


def path_wavefunction(coeffs: PathCoefficients, path: PathIndex, x):
    """Amplitude of a single slit-choice path at positions x on the
    coefficient plane."""
    n = coeffs.plane - 1
    if len(path.slit_choices) != n:
        raise InvalidSetupError(
            f"path visits {len(path.slit_choices)} slits but plane "
            f"{coeffs.plane} coefficients expect {n}"
        )
    for j, s in enumerate(path.slit_choices):
        if not 0 <= s < len(coeffs.slit_centers[j]):
            raise InvalidSetupError(f"slit index {s} invalid on plane {j + 1}")
    xv = np.array([coeffs.slit_centers[j][s] for j, s in enumerate(path.slit_choices)])
    x = np.asarray(x, dtype=float)
    phase = coeffs.quad * x**2
    if n:
        phase = phase + xv @ coeffs.H @ xv + (coeffs.lin @ xv) * x
    return coeffs.upsilon * np.exp(phase)


def superposed_wavefunction(coeffs: PathCoefficients, paths, x):
    """Coherent sum of path amplitudes over a path collection."""
    paths = list(paths)
    if not paths:
        raise InvalidSetupError("empty path set")
    total = path_wavefunction(coeffs, paths[0], x)
    for p in paths[1:]:
        total = total + path_wavefunction(coeffs, p, x)
    return total
