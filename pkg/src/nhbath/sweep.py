"""Parameter sweeps: pole trajectories in the loss rate, critical-event
bisection, optimal-dissipation search, and regime/phase maps."""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .errors import DetunedCriticality
from .inversion import AsymptoticModel, Channel, asymptotic_model
from .spectral import (
    EpRecord,
    ModelParams,
    Pole,
    Regime,
    StateKind,
    _pole_coefficients,
    coupling_regime,
    critical_gammas,
    detect_ep,
    find_poles,
)

BISECT_TOL = 1.0e-8


class EventKind(enum.Enum):
    SHEET_CROSSING = "sheet-crossing"
    COALESCENCE = "coalescence"


@dataclasses.dataclass(frozen=True)
class SweepEvent:
    kind: EventKind
    gamma: float
    s: complex


@dataclasses.dataclass(frozen=True)
class PoleTrajectory:
    """Poles tracked along a loss-rate grid with located critical events.

    Identities are matched between neighbouring grid points by nearest
    distance in the complex plane; right after a coalescence the labels are
    re-anchored by sorting on (Im s, Re s), since encircling an exceptional
    point genuinely exchanges them.
    """

    gamma_grid: np.ndarray
    poles_at_gamma: tuple[tuple[Pole, ...], ...]
    events: tuple[SweepEvent, ...]


def _match(prev: tuple[Pole, ...], new: tuple[Pole, ...]) -> tuple[Pole, ...]:
    if len(prev) != 2 or len(new) != 2:
        return new
    direct = abs(new[0].s - prev[0].s) + abs(new[1].s - prev[1].s)
    swapped = abs(new[1].s - prev[0].s) + abs(new[0].s - prev[1].s)
    return new if direct <= swapped else (new[1], new[0])


def _nearest(poles: tuple[Pole, ...], s_ref: complex) -> Pole:
    return min(poles, key=lambda p: abs(p.s - s_ref))


def _discriminant(params: ModelParams) -> float:
    a, b, c = _pole_coefficients(params)
    return (b * b - 4.0 * a * c).real


def _bisect_crossing(make, s_ref, glo, ghi, tol):
    p_lo = _nearest(find_poles(make(glo)), s_ref)
    f_lo = p_lo.s.real + glo
    while ghi - glo > tol:
        gm = 0.5 * (glo + ghi)
        p_m = _nearest(find_poles(make(gm)), p_lo.s)
        f_m = p_m.s.real + gm
        if (f_m > 0) == (f_lo > 0):
            glo, p_lo, f_lo = gm, p_m, f_m
        else:
            ghi = gm
    g_star = 0.5 * (glo + ghi)
    return g_star, _nearest(find_poles(make(g_star)), p_lo.s).s


def _bisect_coalescence(make, glo, ghi, tol):
    d_lo = _discriminant(make(glo))
    while ghi - glo > tol:
        gm = 0.5 * (glo + ghi)
        d_m = _discriminant(make(gm))
        if (d_m > 0) == (d_lo > 0):
            glo, d_lo = gm, d_m
        else:
            ghi = gm
    g_star = 0.5 * (glo + ghi)
    a, b, _ = _pole_coefficients(make(g_star))
    return g_star, -b / (2.0 * a)


def sweep_gamma(
    g0: float,
    J: float,
    gamma_range,
    delta_omega0: float = 0.0,
    bisect_tol: float = BISECT_TOL,
) -> PoleTrajectory:
    """Track the poles over a loss-rate grid and bisect critical events.

    gamma_range is (lo, hi, n) or an explicit increasing grid. Sheet
    crossings are located on Re(s) + gamma = 0; coalescences (at zero
    detuning) on the sign change of the pole-equation discriminant.
    """
    if isinstance(gamma_range, tuple) and len(gamma_range) == 3:
        lo, hi, n = gamma_range
        if n < 2:
            raise ValueError("gamma grid needs at least 2 points")
        grid = np.linspace(lo, hi, int(n))
    else:
        grid = np.asarray(gamma_range, float)
        if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("gamma grid must be strictly increasing with >= 2 points")

    def make(g):
        return ModelParams(g0=g0, J=J, gamma=float(g), delta_omega0=delta_omega0)

    cells: list[tuple[Pole, ...]] = []
    for g in grid:
        new = find_poles(make(g))
        cells.append(_match(cells[-1], new) if cells else new)

    events: list[SweepEvent] = []
    tol = bisect_tol * J

    if delta_omega0 == 0.0 and abs(g0 - J) > 0:
        d = np.array([_discriminant(make(g)) for g in grid])
        for j in range(len(grid) - 1):
            if d[j] == 0.0:
                a, b, _ = _pole_coefficients(make(grid[j]))
                events.append(SweepEvent(EventKind.COALESCENCE, float(grid[j]), -b / (2 * a)))
            elif (d[j] < 0) != (d[j + 1] < 0):
                g_star, s_star = _bisect_coalescence(make, grid[j], grid[j + 1], tol)
                events.append(SweepEvent(EventKind.COALESCENCE, g_star, s_star))

    n_poles = max((len(c) for c in cells), default=0)
    for slot in range(n_poles):
        f_prev = None
        for j, g in enumerate(grid):
            if slot >= len(cells[j]):
                f_prev = None
                continue
            f = cells[j][slot].s.real + g
            if f_prev is not None and (f > 0) != (f_prev > 0):
                g_star, s_star = _bisect_crossing(
                    make, cells[j - 1][slot].s, grid[j - 1], grid[j], tol
                )
                events.append(SweepEvent(EventKind.SHEET_CROSSING, g_star, s_star))
            f_prev = f

    # re-anchor labels right after each coalescence
    for ev in (e for e in events if e.kind is EventKind.COALESCENCE):
        after = int(np.searchsorted(grid, ev.gamma, side="right"))
        if after < len(cells) and len(cells[after]) == 2:
            cells[after] = tuple(
                sorted(cells[after], key=lambda p: (p.s.imag, p.s.real))
            )
            for j in range(after + 1, len(cells)):
                cells[j] = _match(cells[j - 1], cells[j])

    events.sort(key=lambda e: e.gamma)
    return PoleTrajectory(
        gamma_grid=grid, poles_at_gamma=tuple(cells), events=tuple(events)
    )


@dataclasses.dataclass(frozen=True)
class OptimalDissipation:
    gamma_star: float
    rate_star: float
    predicted_gamma: float | None
    matches_prediction: bool | None


def decay_rate(params: ModelParams) -> float:
    return asymptotic_model(params).rate


def optimal_dissipation(
    g0: float,
    J: float,
    gamma_search: tuple[float, float],
    resolution: float = 1.0e-6,
) -> OptimalDissipation:
    """Maximize the asymptotic decay rate over the loss rate.

    Coarse scan plus golden-section refinement around the grid maximum (the
    rate profile has a cusp at its peak, which golden section handles). The
    closed-form candidate (gamma_c1 below strong coupling, gamma_c2 above)
    is compared against, never substituted for, the measured maximum.
    """
    lo, hi = gamma_search
    if not (0.0 <= lo < hi):
        raise ValueError("gamma_search must satisfy 0 <= lo < hi")

    def rate(g):
        return decay_rate(ModelParams(g0=g0, J=J, gamma=float(g)))

    grid = np.linspace(lo, hi, 257)
    rates = np.array([rate(g) for g in grid])
    i = int(np.argmax(rates))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = rate(x1), rate(x2)
    while b - a > 0.5 * resolution * J:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = rate(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = rate(x2)
    gamma_star = 0.5 * (a + b)
    rate_star = rate(gamma_star)

    regime, _ = coupling_regime(ModelParams(g0=g0, J=J))
    crit = critical_gammas(ModelParams(g0=g0, J=J))
    predicted = crit.gamma_c2 if regime is Regime.STRONG else crit.gamma_c1
    matches = None if predicted is None else abs(gamma_star - predicted) <= resolution * J
    return OptimalDissipation(
        gamma_star=gamma_star,
        rate_star=rate_star,
        predicted_gamma=predicted,
        matches_prediction=matches,
    )


@dataclasses.dataclass(frozen=True)
class PhaseCell:
    g0: float
    gamma: float
    regime: Regime
    n_bound: int
    n_resonant: int
    n_antiresonant: int
    channel: Channel


@dataclasses.dataclass(frozen=True)
class PhaseDiagram:
    g0_values: np.ndarray
    gamma_values: np.ndarray
    cells: tuple[tuple[PhaseCell, ...], ...]  # indexed [i_g0][i_gamma]


def phase_diagram(g0_values, gamma_values, J: float = 1.0) -> PhaseDiagram:
    """Pole census, regime, and dominant channel over a (g0, gamma) grid."""
    g0s = np.asarray(g0_values, float)
    gammas = np.asarray(gamma_values, float)
    rows = []
    for g0 in g0s:
        regime, _ = coupling_regime(ModelParams(g0=g0, J=J))
        row = []
        for gam in gammas:
            params = ModelParams(g0=g0, J=J, gamma=float(gam))
            poles = find_poles(params)
            counts = {k: 0 for k in StateKind}
            for p in poles:
                counts[p.kind] += 1
            row.append(
                PhaseCell(
                    g0=float(g0),
                    gamma=float(gam),
                    regime=regime,
                    n_bound=counts[StateKind.BOUND],
                    n_resonant=counts[StateKind.RESONANT],
                    n_antiresonant=counts[StateKind.ANTI_RESONANT],
                    channel=asymptotic_model(params).channel,
                )
            )
        rows.append(tuple(row))
    return PhaseDiagram(g0_values=g0s, gamma_values=gammas, cells=tuple(rows))


@dataclasses.dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    regime_boundary: bool
    gamma_c1: float
    gamma_c2: float | None
    ep: EpRecord | None
    optimal: OptimalDissipation
    gamma_grid: np.ndarray
    channel_map: tuple[AsymptoticModel, ...]


def regime_report(g0: float, J: float, gamma_grid) -> RegimeReport:
    """One-stop summary for a coupling: critical rates, EP, optimum, channels."""
    grid = np.asarray(gamma_grid, float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("gamma_grid must have at least 2 points")
    base = ModelParams(g0=g0, J=J)
    if base.delta_omega0 != 0.0:
        raise DetunedCriticality("regime report requires zero detuning")
    regime, boundary = coupling_regime(base)
    crit = critical_gammas(base)
    ep = detect_ep(base)
    optimal = optimal_dissipation(g0, J, (float(grid[0]), float(grid[-1])))
    channels = tuple(
        asymptotic_model(ModelParams(g0=g0, J=J, gamma=float(g))) for g in grid
    )
    return RegimeReport(
        regime=regime,
        regime_boundary=boundary,
        gamma_c1=crit.gamma_c1,
        gamma_c2=crit.gamma_c2,
        ep=ep,
        optimal=optimal,
        gamma_grid=grid,
        channel_map=channels,
    )
