"""Exact time-domain reconstruction of the survival amplitude.

The inverse transform splits into contributing pole terms r*exp(s*t), the
two branch-cut (Hankel-path) integrals H1, H2 wrapping the horizontal rays
from the band edges, and, inside a small window around a pole coalescence,
a confluent (A + B t) exp(s0 t) term built from contour moments. The
Bromwich 1/(2 pi i) prefactor is folded into C1, C2 so the pieces sum
plainly and c_a(0+) -> 1.
"""

from __future__ import annotations

import dataclasses
import enum

import numpy as np

from ._kernels import active as _k
from .errors import DetunedCriticality, PoleOnPath, TimeTooSmall
from .spectral import (
    ModelParams,
    Pole,
    SheetLabel,
    StateKind,
    find_poles,
)

DEFAULT_T_MIN = 1.0e-2
DEFAULT_TOL = 1.0e-9
DEFAULT_EP_WINDOW = 1.0e-3
RAY_TOL = 1.0e-6
_MAX_PANELS = 400


class CutEdge(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class Channel(enum.Enum):
    HANKEL_ENVELOPE = "hankel-envelope"
    BOUND_POLE = "bound-pole"
    BOUND_POLE_OSCILLATING = "bound-pole-oscillating"


@dataclasses.dataclass(frozen=True)
class HankelPair:
    """Branch-cut contributions at one time: H1/H2 and their prefactors C1/C2."""

    h1: complex
    h2: complex
    c1: complex
    c2: complex
    quadrature_error: float
    warning: bool = False


@dataclasses.dataclass(frozen=True)
class ConfluentTerm:
    a0: complex
    a1: complex
    s0: complex


@dataclasses.dataclass(frozen=True)
class AsymptoticModel:
    channel: Channel
    rate: float
    frequency: float | None


@dataclasses.dataclass(frozen=True)
class DecayDecomposition:
    """All pieces of the reconstructed amplitude on a time grid."""

    t: np.ndarray
    poles: tuple[Pole, ...]
    pole_terms: tuple[tuple[Pole, np.ndarray], ...]
    confluent: ConfluentTerm | None
    confluent_values: np.ndarray | None
    c1: np.ndarray
    c2: np.ndarray
    hankel1: np.ndarray
    hankel2: np.ndarray
    quadrature_error: np.ndarray
    total: np.ndarray
    warnings: tuple[str, ...]

    @property
    def survival(self) -> np.ndarray:
        return np.abs(self.total) ** 2

    def term_census(self) -> dict[str, int]:
        counts = {"bound": 0, "resonant": 0, "confluent": 0}
        for pole, _ in self.pole_terms:
            if pole.kind is StateKind.BOUND:
                counts["bound"] += 1
            elif pole.kind is StateKind.RESONANT:
                counts["resonant"] += 1
        if self.confluent is not None:
            counts["confluent"] = 2
        return counts


def _ray_distance(s: complex, params: ModelParams) -> float:
    d = np.inf
    for sign in (1.0, -1.0):
        dy = abs(s.imag - sign * 2.0 * params.J)
        if s.real <= -params.gamma:
            d = min(d, dy)
        else:
            d = min(d, np.hypot(s.real + params.gamma, dy))
    return d


def _min_ray_distance(params: ModelParams) -> float:
    poles = find_poles(params)
    if not poles:
        return np.inf
    return min(_ray_distance(p.s, params) for p in poles)


def _clear_of_rays(params: ModelParams, ray_tol: float):
    """Nudge gamma until no pole sits within ray_tol of an integration ray.

    Measure-zero parameter points only; the nudged problem is solved exactly
    and the result flagged rather than attempting a singular quadrature.
    """
    warned = False
    for _ in range(8):
        if _min_ray_distance(params) >= ray_tol * params.J:
            return params, warned
        warned = True
        bump = max(10.0 * ray_tol * params.J, 1e-12)
        params = params.with_gamma(params.gamma + bump)
    raise PoleOnPath("could not nudge the loss rate clear of the integration rays")


def cut_discontinuity(
    x: float, params: ModelParams, edge: CutEdge, ray_tol: float = RAY_TOL
) -> complex:
    """Sheet discontinuity across one horizontal ray at offset x >= 0.

    Upper edge: continued minus first-sheet transform; lower edge: the
    reverse order, matching the orientation of the two path integrals.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if ray_tol > 0 and _min_ray_distance(params) < ray_tol * params.J:
        raise PoleOnPath("a pole lies within tolerance of the integration ray")
    sign = 1.0 if edge is CutEdge.UPPER else -1.0
    return _k.cut_jump(float(x), params.g0, params.J, params.gamma, params.delta_omega0, sign)


def _hankel_arrays(t: np.ndarray, params: ModelParams, tol: float):
    c1, c2, err, status = _k.hankel_batch(
        t, params.g0, params.J, params.gamma, params.delta_omega0, tol, _MAX_PANELS
    )
    scale = 1.0 / (2j * np.pi)
    c1 = c1 * scale
    c2 = c2 * scale
    err = err / (2.0 * np.pi)
    up = np.exp((-params.gamma + 2j * params.J) * t)
    dn = np.exp((-params.gamma - 2j * params.J) * t)
    return c1, c2, c1 * up, c2 * dn, err, status


def hankel_contributions(
    t: float,
    params: ModelParams,
    tol: float = DEFAULT_TOL,
    t_min: float | None = None,
) -> HankelPair:
    """Both branch-cut contributions at a single time."""
    t_min = DEFAULT_T_MIN / params.J if t_min is None else t_min
    if t < t_min:
        raise TimeTooSmall(f"t = {t} below the spectral route minimum {t_min}")
    safe, warned = _clear_of_rays(params, RAY_TOL)
    c1, c2, h1, h2, err, status = _hankel_arrays(np.array([float(t)]), safe, tol)
    return HankelPair(
        h1=h1[0],
        h2=h2[0],
        c1=c1[0],
        c2=c2[0],
        quadrature_error=float(err[0]),
        warning=bool(warned or status[0] != 0),
    )


def double_pole_moments(
    s0: complex,
    params: ModelParams,
    sheet: SheetLabel,
    radius: float,
    nodes: int = 128,
) -> tuple[complex, complex]:
    """Zeroth and first contour moments of the transform around s0.

    For two simple poles inside the circle these equal r1 + r2 and
    r1 (s1 - s0) + r2 (s2 - s0); both stay finite through the coalescence,
    unlike the individual residues.
    """
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    ring = np.exp(1j * theta)
    second = sheet is SheetLabel.SECOND
    vals = np.empty(nodes, np.complex128)
    for i in range(nodes):
        vals[i] = 1.0 / _k.amp_denominator(
            s0 + radius * ring[i], params.g0, params.J, params.gamma, params.delta_omega0, second
        )
    m0 = radius / nodes * np.sum(vals * ring)
    m1 = radius**2 / nodes * np.sum(vals * ring**2)
    return m0, m1


def survival_amplitude_spectral(
    t_grid,
    params: ModelParams,
    tol: float = DEFAULT_TOL,
    ep_window: float = DEFAULT_EP_WINDOW,
    t_min: float | None = None,
) -> DecayDecomposition:
    """Reconstruct c_a on a time grid from poles, cut integrals, and, near a
    coalescence, the confluent two-pole term."""
    t = np.asarray(t_grid, float)
    t_min = DEFAULT_T_MIN / params.J if t_min is None else t_min
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if np.any(t < t_min):
        raise TimeTooSmall(f"all grid times must be >= {t_min}")

    warnings: list[str] = []
    safe, warned = _clear_of_rays(params, RAY_TOL)
    if warned:
        warnings.append(
            f"pole within {RAY_TOL:g}*J of an integration ray; "
            f"loss rate nudged to {safe.gamma!r}"
        )
    params = safe

    poles = find_poles(params)
    contributing = tuple(p for p in poles if p.contributes)

    c1, c2, h1, h2, err, status = _hankel_arrays(t, params, tol)
    if np.any(status != 0):
        warnings.append("quadrature error target not met on some grid points")

    pole_terms: list[tuple[Pole, np.ndarray]] = []
    confluent = None
    confluent_values = None
    if (
        len(contributing) == 2
        and abs(contributing[0].s - contributing[1].s) < ep_window * params.J
    ):
        pa, pb = contributing
        s0 = 0.5 * (pa.s + pb.s)
        radius = 10.0 * ep_window * params.J
        if abs(s0.real + params.gamma) < radius:
            warnings.append(
                "coalescence sits on the branch cut; confluent moments unreliable"
            )
        m0, m1 = double_pole_moments(s0, params, pa.sheet, radius)
        confluent = ConfluentTerm(a0=m0, a1=m1, s0=s0)
        confluent_values = (m0 + m1 * t) * np.exp(s0 * t)
    else:
        for p in contributing:
            r = p.residue
            if r is None:
                raise RuntimeError(
                    "missing residue outside the confluent window; should not happen"
                )
            pole_terms.append((p, r * np.exp(p.s * t)))

    total = h1 + h2
    for _, vals in pole_terms:
        total = total + vals
    if confluent_values is not None:
        total = total + confluent_values

    return DecayDecomposition(
        t=t,
        poles=poles,
        pole_terms=tuple(pole_terms),
        confluent=confluent,
        confluent_values=confluent_values,
        c1=c1,
        c2=c2,
        hankel1=h1,
        hankel2=h2,
        quadrature_error=err,
        total=total,
        warnings=tuple(warnings),
    )


def asymptotic_model(params: ModelParams) -> AsymptoticModel:
    """Predicted long-time decay channel.

    With no contributing bound pole the cut dominates: envelope
    t^(-3/2) exp(-gamma t) beating at 4J. Otherwise the slowest bound pole
    wins; a complex-conjugate bound pair relaxes through damped
    oscillations at twice its imaginary part.
    """
    if params.delta_omega0 != 0.0:
        raise DetunedCriticality("asymptotic channel analysis requires delta_omega0 = 0")
    poles = find_poles(params)
    bound = [p for p in poles if p.contributes and p.kind is StateKind.BOUND]
    rate = min([params.gamma] + [abs(p.s.real) for p in bound])
    if not bound:
        return AsymptoticModel(Channel.HANKEL_ENVELOPE, rate=rate, frequency=4.0 * params.J)
    if len(bound) == 2 and abs(bound[0].s.imag) > 1.0e-9 * params.J:
        return AsymptoticModel(
            Channel.BOUND_POLE_OSCILLATING,
            rate=abs(bound[0].s.real),
            frequency=2.0 * abs(bound[0].s.imag),
        )
    return AsymptoticModel(Channel.BOUND_POLE, rate=rate, frequency=None)
