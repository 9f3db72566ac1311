"""Closed-form spectral quantities of the emitter-lattice problem.

The Laplace transform of the excited-state amplitude is
``c_hat(s) = 1 / (s + i*dw + i*Sigma(s))`` with the lossy-band self-energy
``Sigma(s) = i*sigma*(s + gamma - sqrt(4 J^2 + (s + gamma)^2))``,
``sigma = g0^2 / (2 J^2)``. Its analytic continuation through the vertical
cut at Re(s) = -gamma defines a second Riemann sheet whose poles are the
resonant / anti-resonant states; first-sheet poles are atom-photon bound
states. This module finds and classifies those poles, evaluates residues,
and locates the two critical loss rates and pole-coalescence (exceptional)
points.
"""

from __future__ import annotations

import cmath
import dataclasses
import enum
import math

import numpy as np

from ._kernels import active as _k
from .errors import (
    BranchCutEvaluation,
    DetunedCriticality,
    DetuningSingularity,
    NearDegenerate,
    PoleEvaluation,
)

SQRT2 = math.sqrt(2.0)


class SheetLabel(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class StateKind(enum.Enum):
    BOUND = "bound"
    RESONANT = "resonant"
    ANTI_RESONANT = "anti-resonant"


class Regime(enum.Enum):
    WEAK = "weak"
    MODERATE = "moderate"
    STRONG = "strong"


class EpKind(enum.Enum):
    PHYSICAL = "physical"
    VIRTUAL = "virtual"


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """Physical rates, all in units of the hopping rate J.

    g0: emitter-lattice coupling, J: hopping (the energy unit), gamma:
    uniform photon loss rate, delta_omega0: emitter-band detuning.
    """

    g0: float
    J: float = 1.0
    gamma: float = 0.0
    delta_omega0: float = 0.0

    def __post_init__(self):
        for name in ("g0", "J", "gamma", "delta_omega0"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.g0 <= 0.0:
            raise ValueError(f"g0 must be positive, got {self.g0}")
        if self.J <= 0.0:
            raise ValueError(f"J must be positive, got {self.J}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")

    @property
    def sigma(self) -> float:
        """Dimensionless coupling g0^2 / (2 J^2), always derived."""
        return self.g0 * self.g0 / (2.0 * self.J * self.J)

    def with_gamma(self, gamma: float) -> "ModelParams":
        return dataclasses.replace(self, gamma=gamma)


@dataclasses.dataclass(frozen=True)
class Pole:
    """A pole of the (continued) amplitude transform.

    s is the Laplace-plane location, z = i*s the complex energy, k the
    complex Bloch wavenumber of the associated edge eigenstate. ``residue``
    is None when the pole pair is too close to a coalescence for the simple
    closed form (use the confluent route). ``contributes`` is Re(s) <= 0;
    ``boundary`` marks poles sitting on the cut / continuum edge within
    tolerance; ``degenerate`` marks the single root of the linear equation
    at g0 = J.
    """

    s: complex
    z: complex
    k: complex
    sheet: SheetLabel
    kind: StateKind
    residue: complex | None
    contributes: bool
    boundary: bool = False
    degenerate: bool = False


@dataclasses.dataclass(frozen=True)
class CriticalRates:
    gamma_c1: float
    gamma_c2: float | None


@dataclasses.dataclass(frozen=True)
class EpRecord:
    gamma_ep: float
    s_ep: complex
    kind: EpKind
    regime: Regime


def _on_cut(s: complex, params: ModelParams, tol: float) -> bool:
    return abs(s.real + params.gamma) <= tol and abs(s.imag) <= 2.0 * params.J + tol


def self_energy(
    s: complex,
    params: ModelParams,
    sheet: SheetLabel = SheetLabel.FIRST,
    cut_tol: float = 0.0,
) -> complex:
    """Self-energy on the requested Riemann sheet.

    With cut_tol > 0, points within that distance of the branch cut raise
    BranchCutEvaluation. At cut_tol = 0 (default) on-cut evaluation returns
    the right-side (Bromwich-side) limit, e.g. -i g0^2/J at s = -gamma.
    """
    s = complex(s)
    if cut_tol > 0.0 and _on_cut(s, params, cut_tol):
        raise BranchCutEvaluation(f"s={s} lies within {cut_tol} of the branch cut")
    return _k.self_energy(s, params.g0, params.J, params.gamma, sheet is SheetLabel.SECOND)


def laplace_denominator(s: complex, params: ModelParams, sheet: SheetLabel = SheetLabel.FIRST) -> complex:
    return _k.amp_denominator(
        complex(s), params.g0, params.J, params.gamma, params.delta_omega0, sheet is SheetLabel.SECOND
    )


def laplace_amplitude(
    s: complex,
    params: ModelParams,
    sheet: SheetLabel = SheetLabel.FIRST,
    pole_tol: float = 1.0e-12,
    cut_tol: float = 0.0,
) -> complex:
    """Laplace transform of the excited-state amplitude on the given sheet."""
    s = complex(s)
    if cut_tol > 0.0 and _on_cut(s, params, cut_tol):
        raise BranchCutEvaluation(f"s={s} lies within {cut_tol} of the branch cut")
    d = laplace_denominator(s, params, sheet)
    if abs(d) < pole_tol * params.J:
        raise PoleEvaluation(f"denominator {abs(d):.3e} below tolerance at s={s}")
    return 1.0 / d


def resolvent_ee(
    z: complex,
    params: ModelParams,
    sheet: SheetLabel = SheetLabel.FIRST,
    pole_tol: float = 1.0e-12,
    cut_tol: float = 0.0,
) -> complex:
    """Emitter diagonal element of the resolvent, G_ee(z) = -i c_hat(-i z)."""
    return -1j * laplace_amplitude(-1j * complex(z), params, sheet, pole_tol, cut_tol)


def bloch_wavenumber(z: complex, params: ModelParams, tol: float = 1.0e-12) -> complex:
    """Complex Bloch wavenumber of the edge eigenstate at energy z.

    k = -i log X with X = (g0^2/(z - dw) - z - i gamma)/J, principal branch,
    so Re(k) lies in (-pi, pi].
    """
    z = complex(z)
    dz = z - params.delta_omega0
    if abs(dz) < tol * params.J:
        raise DetuningSingularity(f"|z - delta_omega0| = {abs(dz):.3e} below tolerance")
    x = (params.g0**2 / dz - z - 1j * params.gamma) / params.J
    return -1j * cmath.log(x)


def classify_state(k: complex, tol: float = 1.0e-9) -> tuple[StateKind, bool]:
    """Classify by the sign of Im(k) and Re(k); returns (kind, on_boundary).

    |Im(k)| <= tol sits on the continuum edge: classified bound, flagged.
    """
    k = complex(k)
    if k.imag > tol:
        return StateKind.BOUND, False
    if k.imag < -tol:
        if k.real >= 0.0:
            return StateKind.RESONANT, False
        return StateKind.ANTI_RESONANT, False
    return StateKind.BOUND, True


def _residue_at(s: complex, params: ModelParams, tol: float) -> complex:
    sig = params.sigma
    dw = params.delta_omega0
    den = (2.0 * sig - 1.0) * s + sig * params.gamma - 1j * (1.0 - sig) * dw
    if abs(den) < tol * params.J:
        raise NearDegenerate(f"residue denominator {abs(den):.3e} below tolerance (near coalescence)")
    return ((sig - 1.0) * s + sig * params.gamma - 1j * dw) / den


def residue(pole: Pole, params: ModelParams, tol: float = 1.0e-8) -> complex:
    """Closed-form residue of the amplitude transform at a simple pole."""
    return _residue_at(pole.s, params, tol)


def contour_residue(
    s0: complex,
    params: ModelParams,
    sheet: SheetLabel,
    radius: float = 1.0e-4,
    nodes: int = 64,
) -> complex:
    """Residue by trapezoidal contour quadrature on a small circle around s0.

    Independent of the closed form; spectrally accurate for analytic
    integrands, so 64 nodes give ~machine precision at radius 1e-4 J.
    """
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    ring = np.exp(1j * theta)
    second = sheet is SheetLabel.SECOND
    vals = np.empty(nodes, np.complex128)
    for i in range(nodes):
        d = _k.amp_denominator(
            s0 + radius * params.J * ring[i],
            params.g0,
            params.J,
            params.gamma,
            params.delta_omega0,
            second,
        )
        vals[i] = 1.0 / d
    return radius * params.J / nodes * np.sum(vals * ring)


def _stable_quadratic_roots(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    # larger-magnitude root first via the sign choice that avoids cancellation
    disc = cmath.sqrt(b * b - 4.0 * a * c)
    if (b.conjugate() * disc).real < 0.0:
        disc = -disc
    q = -0.5 * (b + disc)
    if q == 0:
        return 0.0 + 0.0j, -b / a
    return q / a, c / q


def _pole_coefficients(params: ModelParams) -> tuple[complex, complex, complex]:
    sig = params.sigma
    g = params.gamma
    dw = params.delta_omega0
    a = complex(1.0 - 2.0 * sig)
    b = -2.0 * (g * sig + 1j * dw * (sig - 1.0))
    c = -4.0 * sig * sig * params.J**2 - dw * dw - 2j * g * sig * dw
    return a, b, c


def find_poles(params: ModelParams, boundary_tol: float = 1.0e-9) -> tuple[Pole, ...]:
    """Solve the pole equation and classify each root.

    Returns 2 poles, or 1 when the quadratic degenerates to linear at
    g0 = J (flagged), or 0 in the corner g0 = J, gamma = 0, dw = 0 where
    both roots escape to infinity. Residues are attached where the simple
    closed form is valid, None within the near-coalescence window.
    """
    a, b, c = _pole_coefficients(params)
    degenerate = abs(a) < 1.0e-12
    if degenerate:
        if b == 0:
            return ()
        roots = [-c / b]
    else:
        roots = list(_stable_quadratic_roots(a, b, c))
        roots.sort(key=lambda s: (s.real, s.imag))

    poles = []
    for s in roots:
        z = 1j * s
        k = bloch_wavenumber(z, params)
        kind, on_edge = classify_state(k)
        if abs(s.real + params.gamma) < boundary_tol * params.J:
            # inclusive first sheet: on-cut poles count as bound
            kind, on_edge = StateKind.BOUND, True
        sheet = SheetLabel.FIRST if kind is StateKind.BOUND else SheetLabel.SECOND
        try:
            res = _residue_at(s, params, tol=1.0e-8)
        except NearDegenerate:
            res = None
        poles.append(
            Pole(
                s=s,
                z=z,
                k=k,
                sheet=sheet,
                kind=kind,
                residue=res,
                contributes=s.real <= 0.0,
                boundary=on_edge,
                degenerate=degenerate,
            )
        )
    return tuple(poles)


def closed_form_poles(params: ModelParams) -> tuple[complex, complex]:
    """Resonance-condition roots for zero detuning, for cross-checking."""
    if params.delta_omega0 != 0.0:
        raise DetunedCriticality("closed-form roots require delta_omega0 = 0")
    g, J, g0 = params.gamma, params.J, params.g0
    d = cmath.sqrt(g * g + 4.0 * (J * J - g0 * g0))
    den = 2.0 * (J * J / (g0 * g0) - 1.0)
    return (g + d) / den, (g - d) / den


def critical_gammas(params: ModelParams) -> CriticalRates:
    """Cut-crossing rate g0^2/J and, for g0 > J, the coalescence rate 2 sqrt(g0^2 - J^2)."""
    if params.delta_omega0 != 0.0:
        raise DetunedCriticality("critical rates are defined at delta_omega0 = 0 only")
    c1 = params.g0**2 / params.J
    c2 = 2.0 * math.sqrt(params.g0**2 - params.J**2) if params.g0 > params.J else None
    return CriticalRates(gamma_c1=c1, gamma_c2=c2)


def coupling_regime(params: ModelParams, boundary_tol: float = 1.0e-12) -> tuple[Regime, bool]:
    """(regime, on_boundary); boundary ratios 1 and sqrt(2) map to the lower regime."""
    r = params.g0 / params.J
    if abs(r - 1.0) <= boundary_tol:
        return Regime.WEAK, True
    if r < 1.0:
        return Regime.WEAK, False
    if abs(r - SQRT2) <= boundary_tol:
        return Regime.MODERATE, True
    if r < SQRT2:
        return Regime.MODERATE, False
    return Regime.STRONG, False


def detect_ep(params: ModelParams) -> EpRecord | None:
    """Locate the pole coalescence in gamma, if one exists for real gamma >= 0.

    The loss rate of `params` is ignored (it is the search variable). The
    physical/virtual label comes from classifying the double root itself and
    is cross-checked against the coupling-regime rule.
    """
    if params.delta_omega0 != 0.0:
        raise DetunedCriticality("coalescence analysis requires delta_omega0 = 0")
    if params.g0 <= params.J:
        return None
    gamma_ep = 2.0 * math.sqrt(params.g0**2 - params.J**2)
    s_ep = complex(gamma_ep / (2.0 * (params.J**2 / params.g0**2 - 1.0)))
    at_ep = params.with_gamma(gamma_ep)
    kind_state, _ = classify_state(bloch_wavenumber(1j * s_ep, at_ep))
    if abs(s_ep.real + gamma_ep) < 1.0e-9 * params.J:
        kind_state = StateKind.BOUND
    kind = EpKind.PHYSICAL if kind_state is StateKind.BOUND else EpKind.VIRTUAL
    regime, on_boundary = coupling_regime(params)
    expected = EpKind.VIRTUAL if regime is Regime.MODERATE and not on_boundary else EpKind.PHYSICAL
    if not on_boundary and kind is not expected:
        raise RuntimeError(
            f"sheet classification ({kind}) disagrees with the regime rule ({expected})"
        )
    return EpRecord(gamma_ep=gamma_ep, s_ep=s_ep, kind=kind, regime=regime)
