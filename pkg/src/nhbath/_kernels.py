"""Hot numerical kernels.

Everything here is built twice from a single source through
``build_kernels``: once as plain numpy (``numpy_kernels``) and, when the
backend allows it, once compiled with numba (``numba_kernels``). ``active``
points at the selected variant; see ``_backend`` for the env flag.

Contents: the closed-form spectral scalars (self-energy on both sheets and
the transform denominator), the branch-cut discontinuity and its adaptive
Gauss-Kronrod quadrature against the exp(-x t) weight, and an embedded
Dormand-Prince 5(4) driver for the lattice and momentum-space systems.
"""

from types import SimpleNamespace

import numpy as np

from ._backend import jit_compile, jit_enabled

# Gauss-Kronrod 7/15 pair on [-1, 1] (positive half; Kronrod nodes at odd
# indices are the Gauss-Legendre 7 nodes). Validated in the test suite
# against numpy's leggauss and degree-22 polynomial exactness.
_XGK_HALF = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
)
_WGK_HALF = (
    0.02293532201052922,
    0.06309209262997855,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
)
_WG_HALF = (
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
)


def _full_rule():
    xk = np.array(_XGK_HALF)
    wk = np.array(_WGK_HALF)
    nodes = np.concatenate([-xk[:-1], xk[::-1]])
    wkron = np.concatenate([wk[:-1], wk[::-1]])
    wgauss = np.zeros(15)
    # Gauss weights sit at the embedded G7 nodes (every other Kronrod node).
    wgauss[1:14:2] = np.array(
        [_WG_HALF[0], _WG_HALF[1], _WG_HALF[2], _WG_HALF[3], _WG_HALF[2], _WG_HALF[1], _WG_HALF[0]]
    )
    return nodes, wkron, wgauss


GK_NODES, GK_WEIGHTS, G7_WEIGHTS = _full_rule()

# Dormand-Prince 5(4) tableau.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    5179.0 / 57600.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
)


def build_kernels(decorate):
    """Build the full kernel namespace, wrapping each function with `decorate`."""
    gk_nodes = GK_NODES.copy()
    gk_weights = GK_WEIGHTS.copy()
    g7_weights = G7_WEIGHTS.copy()

    @decorate
    def band_sqrt(w, J):
        # Square-root branch with the cut on the vertical band segment
        # Re(w) = 0, |Im(w)| < 2J, behaving like +w at both real infinities
        # (this makes the self-energy vanish for Re(s) -> +-inf). On the
        # vertical axis itself the principal form gives the right-side limit.
        if w.real != 0.0:
            return w * np.sqrt(1.0 + 4.0 * J * J / (w * w))
        return np.sqrt(4.0 * J * J + w * w)

    @decorate
    def self_energy(s, g0, J, gamma, second):
        sig = g0 * g0 / (2.0 * J * J)
        w = s + gamma
        root = band_sqrt(w, J)
        out = 1j * sig * (w - root)
        if second:
            out = out + 2j * sig * root
        return out

    @decorate
    def amp_denominator(s, g0, J, gamma, domega, second):
        return s + 1j * domega + 1j * self_energy(s, g0, J, gamma, second)

    @decorate
    def cut_jump(x, g0, J, gamma, domega, edge):
        # Sheet discontinuity along the horizontal ray s = -gamma - x + edge*2iJ.
        s = complex(-gamma - x, edge * 2.0 * J)
        d1 = amp_denominator(s, g0, J, gamma, domega, False)
        d2 = amp_denominator(s, g0, J, gamma, domega, True)
        if edge > 0.0:
            return 1.0 / d2 - 1.0 / d1
        return 1.0 / d1 - 1.0 / d2

    @decorate
    def _panel(kind, a, b, t, g0, J, gamma, domega, edge):
        # One GK15 panel; kind 0 integrates in u = x*t, kind 1 in v = sqrt(x).
        c = 0.5 * (a + b)
        hw = 0.5 * (b - a)
        acc_k = 0.0 + 0.0j
        acc_g = 0.0 + 0.0j
        for i in range(15):
            xx = c + hw * gk_nodes[i]
            if kind == 0:
                val = cut_jump(xx / t, g0, J, gamma, domega, edge) * np.exp(-xx) / t
            else:
                val = cut_jump(xx * xx, g0, J, gamma, domega, edge) * np.exp(-xx * xx * t) * 2.0 * xx
            acc_k += gk_weights[i] * val
            acc_g += g7_weights[i] * val
        return acc_k * hw, abs(acc_k - acc_g) * hw

    @decorate
    def cut_integral(t, g0, J, gamma, domega, edge, tol, max_seg):
        """Integral of the sheet discontinuity against exp(-x t) over x in (0, inf).

        Returns (value, error_estimate, status); status 1 means the error
        target was not reached within max_seg panels.
        """
        delta = 1.0e-3 * J
        kinds = np.empty(max_seg, np.int64)
        lo = np.empty(max_seg)
        hi = np.empty(max_seg)
        vals = np.empty(max_seg, np.complex128)
        errs = np.empty(max_seg)

        # sqrt-adapted edge panel on x in (0, delta)
        kinds[0] = 1
        lo[0] = 0.0
        hi[0] = np.sqrt(delta)
        ns = 1
        # geometric panels in u = x*t over (delta*t, max(50, 10*J*t))
        ulo = delta * t
        uhi = max(50.0, 10.0 * J * t)
        n0 = int(np.ceil(np.log(uhi / ulo) / np.log(8.0)))
        if n0 < 1:
            n0 = 1
        if n0 > 20:
            n0 = 20
        ratio = (uhi / ulo) ** (1.0 / n0)
        left = ulo
        for i in range(n0):
            right = ulo * ratio ** (i + 1) if i + 1 < n0 else uhi
            kinds[ns] = 0
            lo[ns] = left
            hi[ns] = right
            ns += 1
            left = right
        for i in range(ns):
            v, e = _panel(kinds[i], lo[i], hi[i], t, g0, J, gamma, domega, edge)
            vals[i] = v
            errs[i] = e

        status = 0
        while True:
            toterr = 0.0
            for i in range(ns):
                toterr += errs[i]
            if toterr <= tol:
                break
            if ns >= max_seg:
                status = 1
                break
            worst = 0
            emax = errs[0]
            for i in range(1, ns):
                if errs[i] > emax:
                    emax = errs[i]
                    worst = i
            a = lo[worst]
            b = hi[worst]
            m = 0.5 * (a + b)
            v1, e1 = _panel(kinds[worst], a, m, t, g0, J, gamma, domega, edge)
            v2, e2 = _panel(kinds[worst], m, b, t, g0, J, gamma, domega, edge)
            hi[worst] = m
            vals[worst] = v1
            errs[worst] = e1
            kinds[ns] = kinds[worst]
            lo[ns] = m
            hi[ns] = b
            vals[ns] = v2
            errs[ns] = e2
            ns += 1

        total = 0.0 + 0.0j
        toterr = 0.0
        for i in range(ns):
            total += vals[i]
            toterr += errs[i]
        return total, toterr, status

    @decorate
    def hankel_batch(t_arr, g0, J, gamma, domega, tol, max_seg):
        n = t_arr.shape[0]
        c1 = np.empty(n, np.complex128)
        c2 = np.empty(n, np.complex128)
        err = np.empty(n)
        status = np.zeros(n, np.int64)
        for i in range(n):
            v1, e1, s1 = cut_integral(t_arr[i], g0, J, gamma, domega, 1.0, tol, max_seg)
            v2, e2, s2 = cut_integral(t_arr[i], g0, J, gamma, domega, -1.0, tol, max_seg)
            c1[i] = v1
            c2[i] = v2
            err[i] = e1 + e2
            status[i] = s1 + s2
        return c1, c2, err, status

    @decorate
    def lattice_rhs(y, fpar, farr, carr):
        # y = [c_a, b_1..b_N, leak accumulator]; fpar = [g0, J, domega];
        # farr = per-site loss rates (length N). carr unused.
        g0 = fpar[0]
        J = fpar[1]
        domega = fpar[2]
        n = y.shape[0] - 2
        dy = np.empty_like(y)
        dy[0] = -1j * (domega * y[0] + g0 * y[1])
        dy[1] = -1j * (g0 * y[0] - J * y[2]) - farr[0] * y[1]
        dy[2:n] = 1j * J * (y[3 : n + 1] + y[1 : n - 1]) - farr[1 : n - 1] * y[2:n]
        dy[n] = 1j * J * y[n - 1] - farr[n - 1] * y[n]
        b = y[1 : n + 1]
        dy[n + 1] = 2.0 * np.sum(farr * (b.real**2 + b.imag**2))
        return dy

    @decorate
    def momentum_rhs(y, fpar, farr, carr):
        # y = [c_a, c_k(1..M), leak accumulator]; fpar = [domega, dk, gamma];
        # farr = g(k); carr = omega(k).
        domega = fpar[0]
        dk = fpar[1]
        gamma = fpar[2]
        m = y.shape[0] - 2
        dy = np.empty_like(y)
        ck = y[1 : m + 1]
        dy[0] = -1j * (domega * y[0] + dk * np.sum(farr * ck))
        dy[1 : m + 1] = -1j * (carr * ck + farr * y[0])
        dy[m + 1] = 2.0 * gamma * dk * np.sum(ck.real**2 + ck.imag**2)
        return dy

    def _make_driver(rhs):
        def driver(y0, t_grid, fpar, farr, carr, rtol, atol, max_steps):
            n = y0.shape[0]
            nt = t_grid.shape[0]
            out = np.empty((nt, n), np.complex128)
            y = y0.copy()
            t = 0.0
            h = 1.0e-6
            k1 = rhs(y, fpar, farr, carr)
            idx = 0
            status = 0
            steps = 0
            while idx < nt:
                target = t_grid[idx]
                if target <= t + 1.0e-14 * (1.0 + abs(t)):
                    out[idx] = y
                    idx += 1
                    continue
                h_try = h
                clamped = False
                if t + h_try >= target:
                    h_try = target - t
                    clamped = True
                k2 = rhs(y + h_try * (_A21 * k1), fpar, farr, carr)
                k3 = rhs(y + h_try * (_A31 * k1 + _A32 * k2), fpar, farr, carr)
                k4 = rhs(y + h_try * (_A41 * k1 + _A42 * k2 + _A43 * k3), fpar, farr, carr)
                k5 = rhs(
                    y + h_try * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4),
                    fpar,
                    farr,
                    carr,
                )
                k6 = rhs(
                    y + h_try * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5),
                    fpar,
                    farr,
                    carr,
                )
                ynew = y + h_try * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
                k7 = rhs(ynew, fpar, farr, carr)
                y4 = y + h_try * (
                    _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
                )
                sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
                q = np.abs(ynew - y4) / sc
                errnorm = np.sqrt(np.mean(q * q))
                accepted = errnorm <= 1.0
                if accepted:
                    t = target if clamped else t + h_try
                    y = ynew
                    k1 = k7
                    if clamped:
                        out[idx] = y
                        idx += 1
                if errnorm > 1.0e-300:
                    fac = 0.9 * errnorm ** (-0.2)
                else:
                    fac = 5.0
                if fac > 5.0:
                    fac = 5.0
                if fac < 0.2:
                    fac = 0.2
                if not accepted or not clamped:
                    h = h_try * fac
                elif fac < 1.0:
                    # clamped accepted step: only ever shrink the proposal
                    h = min(h, h_try * fac)
                if h < 1.0e-12 * (1.0 + t):
                    status = 1
                    break
                steps += 1
                if steps >= max_steps:
                    status = 2
                    break
            return out, status

        return driver

    evolve_lattice = decorate(_make_driver(lattice_rhs))
    evolve_momentum = decorate(_make_driver(momentum_rhs))

    return SimpleNamespace(
        band_sqrt=band_sqrt,
        self_energy=self_energy,
        amp_denominator=amp_denominator,
        cut_jump=cut_jump,
        cut_integral=cut_integral,
        hankel_batch=hankel_batch,
        lattice_rhs=lattice_rhs,
        momentum_rhs=momentum_rhs,
        evolve_lattice=evolve_lattice,
        evolve_momentum=evolve_momentum,
    )


numpy_kernels = build_kernels(lambda f: f)
numba_kernels = build_kernels(jit_compile) if jit_enabled() else None
active = numba_kernels if numba_kernels is not None else numpy_kernels
