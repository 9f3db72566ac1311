"""Direct time-integration oracles.

Three independent routes to the survival amplitude/probability: the
truncated real-space lattice equations, the momentum-space discretization
of the same model, and the full master equation in the single-excitation
sector. These cross-validate the closed-form spectral route.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy.integrate import solve_ivp

from ._kernels import active as _k
from .errors import DimensionTooLarge, ReflectionRisk, ToleranceNotMet
from .spectral import ModelParams, Pole

_MAX_STEPS = 5_000_000


class Boundary(enum.Enum):
    HARD_WALL = "hard-wall"
    ABSORBING = "absorbing"


@dataclasses.dataclass(frozen=True)
class LatticeConfig:
    """Truncation and integrator settings for the real-space oracle.

    Under HARD_WALL the wavefront (group velocity <= 2J) must not return
    within the horizon: n_sites >= 2*J*t_max + margin.
    """

    n_sites: int
    t_max: float
    rtol: float = 1.0e-10
    atol: float = 1.0e-12
    boundary: Boundary = Boundary.HARD_WALL
    margin: float = 50.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be at least 2")
        if self.t_max <= 0:
            raise ValueError("t_max must be positive")


def default_n_sites(J: float, t_max: float, margin: float = 50.0) -> int:
    return int(math.ceil(2.0 * J * t_max)) + int(margin)


@dataclasses.dataclass(frozen=True)
class TimeSeries:
    """Sampled amplitude, survival probability, and probability bookkeeping.

    p_s = |c_a|^2 by construction; loss_accum is the leaked probability
    integrated alongside the state, so |c_a|^2 + b_norm + loss_accum = 1
    holds only to integrator accuracy (a real consistency check).
    """

    t: np.ndarray
    c_a: np.ndarray
    p_s: np.ndarray
    b_norm: np.ndarray
    loss_accum: np.ndarray

    @classmethod
    def assemble(cls, t, c_a, b_norm, loss_accum):
        return cls(
            t=np.asarray(t, float),
            c_a=np.asarray(c_a, complex),
            p_s=np.abs(np.asarray(c_a, complex)) ** 2,
            b_norm=np.asarray(b_norm, float),
            loss_accum=np.asarray(loss_accum, float),
        )


@dataclasses.dataclass(frozen=True)
class LindbladResult:
    series: TimeSeries
    rho: np.ndarray  # (n_times, dim, dim)


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if t[0] < 0 or np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be non-decreasing and non-negative")
    return t


def evolve_lattice(params: ModelParams, config: LatticeConfig, t_grid) -> TimeSeries:
    """Integrate the truncated edge-coupled chain from the excited emitter."""
    t = _check_grid(t_grid)
    if t[-1] > config.t_max * (1 + 1e-12):
        raise ValueError(f"t_grid extends past config.t_max = {config.t_max}")
    if config.boundary is Boundary.HARD_WALL:
        needed = 2.0 * params.J * config.t_max + config.margin
        if config.n_sites < needed:
            raise ReflectionRisk(
                f"n_sites = {config.n_sites} < 2*J*t_max + margin = {needed:.1f}"
            )
    n = config.n_sites
    gamma_sites = np.full(n, params.gamma)
    if config.boundary is Boundary.ABSORBING:
        ramp = min(20, n)
        gamma_sites[n - ramp :] += 2.0 * params.J * (np.arange(1, ramp + 1) / ramp)

    y0 = np.zeros(n + 2, np.complex128)
    y0[0] = 1.0
    fpar = np.array([params.g0, params.J, params.delta_omega0])
    states, status = _k.evolve_lattice(
        y0, t, fpar, gamma_sites, np.zeros(0, np.complex128), config.rtol, config.atol, _MAX_STEPS
    )
    if status != 0:
        raise ToleranceNotMet(f"lattice integrator failed with status {status}")
    c_a = states[:, 0]
    b_norm = np.sum(np.abs(states[:, 1 : n + 1]) ** 2, axis=1)
    return TimeSeries.assemble(t, c_a, b_norm, states[:, n + 1].real)


def evolve_momentum(
    params: ModelParams,
    n_modes: int,
    t_grid,
    rtol: float = 1.0e-10,
    atol: float = 1.0e-12,
) -> TimeSeries:
    """Integrate the momentum-space form on a midpoint k-grid over (0, pi).

    Midpoint placement avoids the band edges where the coupling vanishes and
    gives second-order convergence in 1/n_modes toward the lattice result.
    """
    t = _check_grid(t_grid)
    if n_modes < 64:
        raise ValueError(f"n_modes must be >= 64, got {n_modes}")
    m = np.arange(n_modes)
    dk = np.pi / n_modes
    kk = (m + 0.5) * dk
    g_k = np.sqrt(2.0 / np.pi) * params.g0 * np.sin(kk)
    om_k = -2.0 * params.J * np.cos(kk) - 1j * params.gamma

    y0 = np.zeros(n_modes + 2, np.complex128)
    y0[0] = 1.0
    fpar = np.array([params.delta_omega0, dk, params.gamma])
    states, status = _k.evolve_momentum(
        y0, t, fpar, g_k, om_k.astype(np.complex128), rtol, atol, _MAX_STEPS
    )
    if status != 0:
        raise ToleranceNotMet(f"momentum integrator failed with status {status}")
    c_a = states[:, 0]
    b_norm = dk * np.sum(np.abs(states[:, 1 : n_modes + 1]) ** 2, axis=1)
    return TimeSeries.assemble(t, c_a, b_norm, states[:, n_modes + 1].real)


def _lindblad_operators(params: ModelParams, n_sites: int):
    dim = n_sites + 2
    h = np.zeros((dim, dim), np.complex128)
    h[0, 0] = params.delta_omega0
    h[0, 1] = h[1, 0] = params.g0
    for i in range(1, n_sites):
        h[i, i + 1] = h[i + 1, i] = -params.J
    photon = np.zeros(dim)
    photon[1 : n_sites + 1] = 1.0
    return h, photon


def evolve_lindblad(
    params: ModelParams,
    n_sites: int,
    t_grid,
    rtol: float = 1.0e-10,
    atol: float = 1.0e-12,
) -> LindbladResult:
    """Full master equation in the basis {excited, one photon on site n, ground}.

    Quantum jumps only feed the ground-vacuum state, so the emitter
    population must coincide with |c_a|^2 from the non-Hermitian evolution
    at the same truncation.
    """
    t = _check_grid(t_grid)
    if n_sites > 12:
        raise DimensionTooLarge(f"n_sites = {n_sites} exceeds the dense cap of 12")
    if n_sites < 2:
        raise ValueError("n_sites must be at least 2")
    dim = n_sites + 2
    h, photon = _lindblad_operators(params, n_sites)
    gamma = params.gamma

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        drho = -1j * (h @ rho - rho @ h)
        drho -= gamma * (photon[:, None] * rho + rho * photon[None, :])
        drho[dim - 1, dim - 1] += 2.0 * gamma * np.sum(rho.diagonal()[1 : n_sites + 1]).real
        return drho.reshape(-1)

    rho0 = np.zeros((dim, dim), np.complex128)
    rho0[0, 0] = 1.0
    span = (0.0, max(t[-1], 1e-12))
    sol = solve_ivp(rhs, span, rho0.reshape(-1), t_eval=t, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise ToleranceNotMet(f"master-equation integrator failed: {sol.message}")
    rho = sol.y.T.reshape(len(t), dim, dim)
    p_e = rho[:, 0, 0].real
    b_norm = np.einsum("tnn->t", rho[:, 1 : n_sites + 1, 1 : n_sites + 1]).real
    loss = rho[:, dim - 1, dim - 1].real
    series = TimeSeries.assemble(t, np.sqrt(np.clip(p_e, 0.0, None)).astype(complex), b_norm, loss)
    return LindbladResult(series=series, rho=rho)


def siegert_profile(pole: Pole, params: ModelParams, n_sites: int):
    """Edge eigenstate b_n = exp(i k n) and its emitter amplitude.

    Bound poles give geometrically decaying profiles, resonant/anti-resonant
    ones grow (outgoing/incoming Siegert solutions).
    """
    x = np.exp(1j * pole.k)
    b = x ** np.arange(1, n_sites + 1)
    c_a = params.g0 * b[0] / (pole.z - params.delta_omega0)
    return c_a, b


def siegert_residual(pole: Pole, params: ModelParams, n_sites: int) -> np.ndarray:
    """Per-equation residuals of the eigenvalue system, normalized row-wise.

    Row magnitudes grow geometrically for resonant profiles, so each row is
    scaled by its largest term before the residual is reported.
    """
    c_a, b = siegert_profile(pole, params, n_sites)
    z = pole.z
    g0, J, gam, dw = params.g0, params.J, params.gamma, params.delta_omega0
    x = np.exp(1j * pole.k)
    b_ext = np.concatenate([b, [x ** (n_sites + 1)]])
    res = np.empty(n_sites + 1)

    terms = (z * c_a, dw * c_a, g0 * b[0])
    res[0] = abs(z * c_a - dw * c_a - g0 * b[0]) / max(max(abs(v) for v in terms), 1e-300)
    terms = (z * b[0], g0 * c_a, J * b[1], 1j * gam * b[0])
    res[1] = abs(z * b[0] - g0 * c_a + J * b[1] + 1j * gam * b[0]) / max(
        max(abs(v) for v in terms), 1e-300
    )
    for n in range(2, n_sites + 1):
        lhs = z * b[n - 1] + J * (b_ext[n] + b[n - 2]) + 1j * gam * b[n - 1]
        scale = max(abs(z * b[n - 1]), abs(J * b_ext[n]), abs(J * b[n - 2]), 1e-300)
        res[n] = abs(lhs) / scale
    return res
