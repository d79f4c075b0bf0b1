"""Gamma factors, AFE weights V1/V2 and Voronoi kernels G+- / Psi+-.

All weight functions are inverse Mellin transforms evaluated by quadrature on
a vertical segment [c - iH, c + iH].  Truncation heights come from Stirling
tail bounds; panel counts are doubled until two refinements agree, which is
the a-posteriori certificate demanded of every contour integral here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import PoleError, QuadratureFailure

TWO_PI = 2.0 * math.pi
SQRT_PI = math.sqrt(math.pi)

# ---------------------------------------------------------------------------
# complex gamma (Lanczos, g = 7, with reflection)

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


def _loggamma_core(z):
    """log Gamma for Re(z) >= 0.5 (vectorized, Lanczos)."""
    z = np.asarray(z, dtype=complex) - 1.0
    x = np.full(z.shape, _LANCZOS_C[0], dtype=complex)
    for i in range(1, len(_LANCZOS_C)):
        x = x + _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * np.log(t) - t + np.log(x)


def complex_loggamma(s):
    """log Gamma(s) up to an additive multiple of 2*pi*i.

    Only ever used inside exp() of sums/differences, where the branch is
    immaterial.
    """
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.shape, dtype=complex)
    left = s.real < 0.5
    if np.any(~left):
        out[~left] = _loggamma_core(s[~left])
    if np.any(left):
        z = s[left]
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z), with an
        # overflow-safe log sin for large |Im z|
        out[left] = math.log(math.pi) - _log_sin_pi(z) - _loggamma_core(1.0 - z)
    return out


def _log_sin_pi(z):
    """log sin(pi z), stable for large |Im z| (branch irrelevant for our use)."""
    z = np.asarray(z, dtype=complex)
    y = z.imag
    sgn = np.where(y >= 0, 1.0, -1.0)
    # sin(pi z) = e^{-i pi z sgn} (e^{2 i pi z sgn} - 1) * sgn / (2 i)
    small = np.exp(2j * np.pi * z * sgn)      # magnitude e^{-2 pi |y|} <= 1
    return (-1j * np.pi * z * sgn) + np.log((small - 1.0) * sgn / 2j)


def complex_gamma(s):
    """Gamma(s) for complex s, vectorized; PoleError at non-positive integers."""
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    pole = (arr.imag == 0) & (arr.real <= 0) & (arr.real == np.round(arr.real))
    if np.any(pole):
        raise PoleError(f"gamma pole at {arr[pole][0]}")
    out = np.exp(complex_loggamma(arr))
    return complex(out[0]) if scalar else out


def gamma_line_bound(sigma: float, y: float) -> float:
    """Upper bound for |Gamma(sigma + iy)|, |y| >= 2, 0 <= sigma <= 2.5.

    Classical vertical-decay estimate with a safety factor of 2.
    """
    y = abs(y)
    if y < 2:
        raise ValueError("bound valid for |y| >= 2")
    if not 0.0 <= sigma <= 2.5:
        raise ValueError("bound coded for 0 <= sigma <= 2.5")
    return 2.0 * math.sqrt(2 * math.pi) * (y ** (sigma - 0.5)) * math.exp(-math.pi * y / 2 + 1.0 / (6 * y))


# ---------------------------------------------------------------------------
# quadrature on a vertical segment

@dataclass(frozen=True)
class WeightSpec:
    """Numerical realization of one contour-integral weight."""

    kind: str                  # V1 | V2 | PsiPlus | PsiMinus
    c: float                   # contour abscissa
    tol: float                 # target absolute accuracy
    T_f: float = 0.0           # spectral parameter (unused for V1)
    H: float | None = None     # truncation height; None = choose per call
    gl_order: int = 24
    max_panels: int = 4096

    def __post_init__(self):
        if self.kind in ("V1", "V2") and self.c <= 0:
            raise ValueError("V-integrals need abscissa c > 0")
        if self.kind in ("PsiPlus", "PsiMinus") and self.c <= -1:
            raise ValueError("Psi integrals need abscissa > -1")


DEFAULT_V1 = WeightSpec(kind="V1", c=1.0, tol=1e-10)
DEFAULT_PSI_TOL = 1e-9


def default_v2_spec(T_f: float) -> WeightSpec:
    return WeightSpec(kind="V2", c=1.0, tol=1e-10, T_f=T_f)


def default_psi_spec(sign: int, T_f: float) -> WeightSpec:
    return WeightSpec(kind="PsiPlus" if sign > 0 else "PsiMinus",
                      c=0.0, tol=DEFAULT_PSI_TOL, T_f=T_f)


@lru_cache(maxsize=16)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def line_integral(fun, c: float, H: float, tol: float,
                  gl_order: int = 24, max_panels: int = 4096,
                  min_panels: int = 8) -> complex:
    """(1/2*pi) * integral over t in [-H, H] of fun(c + i t) dt.

    This equals (1/2*pi*i) * integral of fun over the segment [c-iH, c+iH].
    Composite Gauss-Legendre with panel doubling; two successive refinements
    must agree within tol/2.
    """
    x0, w0 = _gl_nodes(gl_order)
    panels = min_panels
    prev = None
    while panels <= max_panels:
        edges = np.linspace(-H, H, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        t = (mid[:, None] + half * x0[None, :]).ravel()
        w = np.broadcast_to(half * w0[None, :], (panels, gl_order)).ravel()
        fv = fun(c + 1j * t)
        val = np.sum(w * fv) / TWO_PI
        # rounding floor of the compensated-free sum; refinement cannot be
        # expected to agree below it
        floor = 4e-15 * float(np.sum(np.abs(w * fv))) / TWO_PI
        if prev is not None and abs(val - prev) <= tol / 2 + floor:
            return complex(val)
        prev = val
        panels *= 2
    raise QuadratureFailure(
        f"no convergence to tol={tol:g} within {max_panels} panels at c={c}, H={H}")


def _grow_height(tail_bound, tol: float, h0: float = 20.0, hmax: float = 6000.0) -> float:
    """Smallest height (by doubling) with certified tail below tol/10."""
    H = h0
    while H <= hmax:
        if tail_bound(H) < tol / 10:
            return H
        H *= 1.5
    raise QuadratureFailure("tail bound does not reach tolerance; integrand decays too slowly")


# ---------------------------------------------------------------------------
# V1 and V2

def _v1_integrand(x: float):
    lg_norm = _loggamma_core(np.array([0.25 + 0j]))[0]
    L = math.log(SQRT_PI * x)

    def fun(s):
        return np.exp(complex_loggamma((2 * s + 1) / 4) - lg_norm - s * L) / s
    return fun


def _v1_tail_bound(x: float, c: float):
    g14 = math.gamma(0.25)

    def bound(H):
        # |Gamma((2c+1)/4 + it/2)| decays like e^{-pi t/4}
        sig = (2 * c + 1) / 4
        amp = (SQRT_PI * x) ** (-c) * gamma_line_bound(sig, H / 2) / (g14 * H)
        return amp * (4 / math.pi) / TWO_PI
    return bound


def v1(x: float, spec: WeightSpec = DEFAULT_V1) -> float:
    """V1(x): inverse Mellin of Gamma((2s+1)/4)/(Gamma(1/4) s) at (sqrt(pi) x)."""
    if spec.kind != "V1":
        raise ValueError("spec.kind must be V1")
    if x <= 0:
        raise ValueError("x must be positive")
    H = spec.H if spec.H is not None else _grow_height(_v1_tail_bound(x, spec.c), spec.tol)
    val = line_integral(_v1_integrand(x), spec.c, H, spec.tol,
                        spec.gl_order, spec.max_panels)
    if abs(val.imag) > spec.tol:
        raise QuadratureFailure(f"V1 imaginary residual {val.imag:.2e} exceeds tol")
    return val.real


def _v2_integrand(x: float, T_f: float):
    a = 2j * T_f
    lg_norm = complex(complex_loggamma(np.array([(1 + a) / 4]))[0]
                      + complex_loggamma(np.array([(1 - a) / 4]))[0])
    L = math.log(math.pi * x)

    def fun(s):
        lg = (complex_loggamma((2 * s + 1 + a) / 4)
              + complex_loggamma((2 * s + 1 - a) / 4) - lg_norm)
        return np.exp(lg - s * L) / s
    return fun


def _v2_tail_bound(x: float, T_f: float, c: float):
    a = 2 * abs(T_f)
    denom = abs(complex_gamma((1 + 2j * T_f) / 4)) ** 2

    def bound(H):
        if H <= a + 8:
            return math.inf
        sig = (2 * c + 1) / 4
        amp = ((math.pi * x) ** (-c)
               * gamma_line_bound(sig, (H + a) / 2)
               * gamma_line_bound(sig, (H - a) / 2) / (denom * H))
        return amp * (2 / math.pi) / TWO_PI
    return bound


def v2(x: float, T_f: float, spec: WeightSpec | None = None) -> float:
    """V2(x): inverse Mellin of the two-gamma ratio for the twisted L-function."""
    if spec is None:
        spec = default_v2_spec(T_f)
    if spec.kind != "V2":
        raise ValueError("spec.kind must be V2")
    if x <= 0:
        raise ValueError("x must be positive")
    H = spec.H if spec.H is not None else _grow_height(_v2_tail_bound(x, T_f, spec.c), spec.tol)
    val = line_integral(_v2_integrand(x, T_f), spec.c, H, spec.tol,
                        spec.gl_order, spec.max_panels)
    if abs(val.imag) > spec.tol:
        raise QuadratureFailure(f"V2 imaginary residual {val.imag:.2e} exceeds tol")
    return val.real


# ---------------------------------------------------------------------------
# smooth bump test function and its Mellin transform

class TestFunction:
    """Canonical smooth bump supported on [1,2].

    psi(x) = exp(4 - 1/(u(1-u))), u = x-1, extended by zero.  Derivatives are
    generated symbolically once and cached; their L1 norms feed the decay
    certificates for the Mellin transform.
    """

    support = (1.0, 2.0)
    name = "canonical_bump"
    __test__ = False

    def __init__(self, n_derivs: int = 10):
        self.n_derivs = n_derivs
        self._derivs = None  # lazy sympy build

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape if x.ndim else (1,))
        xs = np.atleast_1d(x)
        inside = (xs > 1.0) & (xs < 2.0)
        u = xs[inside] - 1.0
        out_in = np.exp(4.0 - 1.0 / (u * (1.0 - u)))
        res = np.zeros(xs.shape)
        res[inside] = out_in
        return float(res[0]) if x.ndim == 0 else res

    def _build_derivs(self):
        if self._derivs is not None:
            return
        import sympy as sp
        xv = sp.symbols("x")
        u = xv - 1
        expr = sp.exp(4 - 1 / (u * (1 - u)))
        funcs = []
        cur = expr
        for _ in range(self.n_derivs + 1):
            funcs.append(sp.lambdify(xv, cur, modules="numpy"))
            cur = sp.diff(cur, xv)
        self._derivs = funcs

    def derivative(self, k: int, x):
        """k-th derivative of psi (0 outside the open support)."""
        if k == 0:
            return self(x)
        self._build_derivs()
        x = np.asarray(x, dtype=float)
        xs = np.atleast_1d(x)
        res = np.zeros(xs.shape)
        inside = (xs > 1.0) & (xs < 2.0)
        if np.any(inside):
            res[inside] = self._derivs[k](xs[inside])
        return float(res[0]) if x.ndim == 0 else res

    @lru_cache(maxsize=16)
    def deriv_l1(self, k: int) -> float:
        """integral over [1,2] of |psi^(k)|, by dense trapezoid (certificate input)."""
        x = np.linspace(1.0, 2.0, 40001)
        y = np.abs(self.derivative(k, x))
        return float(np.trapezoid(y, x))

    def mellin(self, s, tol: float = 1e-12):
        """Mellin transform psi~(s) = integral psi(x) x^{s-1} dx, vectorized in s.

        Composite Gauss-Legendre on the support, panels doubled until the
        refinement agrees within tol.
        """
        s_arr = np.asarray(s, dtype=complex)
        scalar = s_arr.ndim == 0
        s_flat = np.atleast_1d(s_arr).ravel()
        tmax = float(np.max(np.abs(s_flat.imag))) if s_flat.size else 0.0
        panels = max(4, int(0.12 * tmax / 4) + 2)
        order = 16
        x0, w0 = _gl_nodes(order)

        def evaluate(p):
            edges = np.linspace(1.0, 2.0, p + 1)
            mid = 0.5 * (edges[:-1] + edges[1:])
            half = 0.5 * (edges[1] - edges[0])
            x = (mid[:, None] + half * x0[None, :]).ravel()
            base = np.broadcast_to(half * w0[None, :], (p, order)).ravel() * self(x)
            lx = np.log(x)
            out = np.empty(s_flat.shape, dtype=complex)
            for i0 in range(0, s_flat.size, 4096):
                blk = s_flat[i0:i0 + 4096]
                out[i0:i0 + 4096] = np.exp(lx[None, :] * (blk[:, None] - 1)) @ base
            return out

        prev = None
        for _ in range(12):
            val = evaluate(panels)
            if prev is not None and float(np.max(np.abs(val - prev))) <= tol:
                out = val.reshape(np.atleast_1d(s_arr).shape)
                return complex(out.ravel()[0]) if scalar else out
            prev = val
            panels *= 2
        raise QuadratureFailure("Mellin transform refinement did not converge")

    def mellin_line_bound(self, sigma_w: float, k: int = 8):
        """Bound |psi~(sigma_w + i t)| <= C_k / |t|^k from k-fold integration by parts."""
        ck = self.deriv_l1(k) * 2.0 ** (sigma_w + k - 1)

        def bound(t):
            t = abs(t)
            # |w (w+1) ... (w+k-1)| >= t^k
            return ck / t ** k if t > 0 else math.inf
        return bound


@lru_cache(maxsize=1)
def default_bump() -> TestFunction:
    return TestFunction()


def mellin(psi: TestFunction, s, tol: float = 1e-12):
    return psi.mellin(s, tol=tol)


# ---------------------------------------------------------------------------
# Voronoi kernels G+- and Psi+-

def g_pm(s, T_f: float, sign: int):
    """G_{+-}(s), assembled from the two four-gamma ratio terms.

    2*pi*G_{+-}(s) = ratio(s) +- ratio(s+1-shift form) exactly as the dual-sum
    kernel requires; sign=+1 selects the plus kernel.
    """
    s_arr = np.asarray(s, dtype=complex)
    scalar = s_arr.ndim == 0
    s_flat = np.atleast_1d(s_arr)
    a = 1j * T_f

    def ratio(shift):
        lg = (complex_loggamma((1 + s_flat + a + shift) / 2)
              + complex_loggamma((1 + s_flat - a + shift) / 2)
              - complex_loggamma((-s_flat + a + shift) / 2)
              - complex_loggamma((-s_flat - a + shift) / 2))
        return np.exp(lg)

    val = (ratio(0.0) + sign * ratio(1.0)) / TWO_PI
    return complex(val[0]) if scalar else val


@lru_cache(maxsize=8)
def _g_envelope(T_f: float, sigma: float, sign: int) -> float:
    """Empirical envelope constant: |G(sigma+it)| <= C (1+|t|)^{2 sigma+1}.

    Stirling gives the power; the constant is measured on a dense sample up
    to |t| = 400 and doubled.
    """
    t = np.linspace(0.37, 400.0, 3000)
    vals = np.abs(g_pm(sigma + 1j * t, T_f, sign))
    env = vals / (1 + t) ** (2 * sigma + 1)
    # avoid the immediate vicinity of gamma poles on the real axis
    return 2.0 * float(np.max(env))


def _fixed_mellin_evaluator(psi: TestFunction, tmax: float, tol: float):
    """Closure computing psi~(s) on arrays with |Im s| <= tmax, validated once
    by panel doubling at the worst-case frequency."""
    order = 16
    panels = max(4, int(0.12 * tmax / 4) + 2)
    x0, w0 = _gl_nodes(order)

    def build(p):
        edges = np.linspace(1.0, 2.0, p + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        x = (mid[:, None] + half * x0[None, :]).ravel()
        base = np.broadcast_to(half * w0[None, :], (p, order)).ravel() * psi(x)
        return np.log(x), base

    def apply(lx, base, s):
        out = np.empty(s.shape, dtype=complex)
        for i0 in range(0, s.size, 4096):
            blk = s[i0:i0 + 4096]
            out[i0:i0 + 4096] = np.exp(lx[None, :] * (blk[:, None] - 1)) @ base
        return out

    probe = np.array([1.0 - 1j * tmax, -1.0 - 1j * tmax, -1j * tmax * 0.7])
    while True:
        lx, base = build(panels)
        lx2, base2 = build(2 * panels)
        if np.max(np.abs(apply(lx, base, probe) - apply(lx2, base2, probe))) <= tol:
            return lambda s: apply(lx2, base2, np.asarray(s, dtype=complex))
        panels *= 2
        if panels > 4096:
            raise QuadratureFailure("Mellin node rule did not validate")


@lru_cache(maxsize=16)
def _psi_height_table(sigma: float, T_f: float, sign: int):
    """Tail integrals of |G(sigma+it) psi~(-sigma-it)| as a function of height.

    Returns (t_grid, tail) with tail[i] = integral from t_grid[i] to infinity.
    The bump transform is taken from its FFT line down to the numerical floor
    and continued beyond it by the measured stretched-exponential decay
    (softened by 0.8) under a measured kernel envelope.
    """
    t, aF = _bump_mellin_line(sigma)
    floor = max(1e-14 * float(aF.max()), 1e-16)
    above = np.nonzero(aF > floor)[0]
    cut = int(above.max())
    tt = t[: cut + 1]
    gv = np.abs(g_pm(sigma + 1j * tt, T_f, sign))
    body = gv * aF[: cut + 1]
    i1 = int(np.searchsorted(t, 0.25 * t[cut]))
    w = 60
    a1 = float(np.max(aF[max(0, i1 - w): i1 + w]))
    a2 = float(np.max(aF[max(0, cut - w): cut + 1]))
    slope = (math.log(a1) - math.log(a2)) / (math.sqrt(t[cut]) - math.sqrt(t[i1]))
    a_safe = 0.8 * slope
    env = 1.05 * float(np.max(gv / (1.0 + tt) ** (2 * sigma + 1)))
    te = np.geomspace(t[cut], 400.0 * t[cut], 4001)[1:]
    ext = (env * (1.0 + te) ** (2 * sigma + 1)
           * a2 * np.exp(-a_safe * (np.sqrt(te) - math.sqrt(t[cut]))))
    tg = np.concatenate([tt, te])
    vals = np.concatenate([body, ext])
    seg = 0.5 * (vals[1:] + vals[:-1]) * np.diff(tg)
    tail = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    return tg, tail


def psi_pm(x: float, psi: TestFunction, T_f: float, sign: int,
           spec: WeightSpec | None = None) -> complex:
    """Psi_{+-}(x) = (1/2 pi i) * integral (pi^2 x)^{-s} G_{+-}(s) psi~(-s) ds.

    The truncation height comes from a precomputed tail table of the
    integrand envelope (the bump's Mellin transform decays like
    exp(-c sqrt t), which no fixed integration-by-parts order captures).
    """
    if spec is None:
        spec = default_psi_spec(sign, T_f)
    if spec.kind not in ("PsiPlus", "PsiMinus"):
        raise ValueError("spec.kind must be PsiPlus or PsiMinus")
    want_sign = +1 if spec.kind == "PsiPlus" else -1
    if want_sign != sign:
        raise ValueError("spec.kind does not match sign")
    if x <= 0:
        raise ValueError("x must be positive")
    sigma = spec.c
    L = math.log(math.pi ** 2 * x)
    pref = (math.pi ** 2 * x) ** (-sigma)

    if spec.H is not None:
        H = spec.H
    else:
        tg, tail = _psi_height_table(sigma, T_f, sign)
        # discarded tail of the contour integral is below pref * 2*tail(H) / 2pi
        ok = np.nonzero(pref * 2.0 * tail / TWO_PI < spec.tol / 10)[0]
        if ok.size == 0:
            raise QuadratureFailure("Psi integrand tail does not reach tolerance")
        H = float(tg[int(ok.min())])

    mell = _fixed_mellin_evaluator(psi, 1.001 * H, spec.tol / 100)

    def fun(s):
        return np.exp(-s * L) * g_pm(s, T_f, sign) * mell(-s)

    # panel count from the oscillation budget of (pi^2 x)^{-it}
    cycles = abs(L) * H / TWO_PI + H / 40.0
    start = max(8, int(cycles / 6) + 4)
    return line_integral(fun, sigma, H, spec.tol, spec.gl_order,
                         max_panels=max(spec.max_panels, 4 * start),
                         min_panels=start)


# ---------------------------------------------------------------------------
# certified power-decay bounds (contour-shift ladder)

_LADDER_CS = (2.0, 4.0, 8.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0, 160.0)


def _abs_line_integral(fun_abs, c: float, rel: float = 1e-3) -> float:
    """(1/2 pi) integral of |fun(c+it)| dt, growing the height until stable."""
    H = 40.0
    prev = None
    for _ in range(14):
        n = min(160001, 2 * int(40 * H) + 1)
        t = np.linspace(-H, H, n)
        vals = fun_abs(c + 1j * t)
        cur = float(np.trapezoid(vals, t)) / TWO_PI
        if prev is not None and abs(cur - prev) <= rel * max(abs(cur), 1e-300):
            return cur * (1 + 2 * rel)
        prev = cur
        H *= 1.6
    raise QuadratureFailure("absolute line integral did not stabilize")


@lru_cache(maxsize=8)
def v2_decay_ladder(T_f: float) -> tuple:
    """(C, B_C) pairs with |V2(x)| <= B_C * (pi x)^{-C} from shifting right to Re s = C."""
    a = 2j * T_f
    lg_norm = complex(complex_loggamma(np.array([(1 + a) / 4]))[0]
                      + complex_loggamma(np.array([(1 - a) / 4]))[0])

    def make_abs(C):
        def fun_abs(s):
            lg = (complex_loggamma((2 * s + 1 + a) / 4)
                  + complex_loggamma((2 * s + 1 - a) / 4) - lg_norm)
            return np.abs(np.exp(lg) / s)
        return fun_abs

    out = []
    for C in _LADDER_CS:
        out.append((C, _abs_line_integral(make_abs(C), C)))
    return tuple(out)


def v2_bound(x: float, T_f: float) -> float:
    """Certified upper bound for |V2(x)|, sharp enough to be exponentially small."""
    best = math.inf
    for C, B in v2_decay_ladder(T_f):
        best = min(best, B * (math.pi * x) ** (-C))
    return min(best, 1.2)  # |V2| <= ~1 + O(sqrt x); 1.2 is a safe cap for x<1


def v1_bound(x: float) -> float:
    """|V1(x)| = Q(1/4, pi x^2) <= (pi x^2)^{-3/4} e^{-pi x^2} / Gamma(1/4), plus cap."""
    z = math.pi * x * x
    if z < 1.0:
        return 1.0
    return min(1.0, z ** (-0.75) * math.exp(-z) / math.gamma(0.25))


_PSI_LADDER_CS = (-0.9, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 14.0)


@lru_cache(maxsize=32)
def _bump_mellin_line(C: float, n_fft: int = 1 << 20, pad: int = 64):
    """|psi~(-C - i t)| for the canonical bump, sampled on an FFT frequency grid.

    In the log variable v = log x the Mellin transform along the vertical line
    Re s = -C is a plain Fourier integral of the smooth, compactly supported
    profile psi(e^v) e^{-C v}, so one zero-padded FFT delivers the whole line
    with spectral accuracy.  Returns (t, |psi~(-C-it)|) for t >= 0.
    """
    psi = default_bump()
    L = pad * math.log(2.0)
    h = L / n_fft
    v = np.arange(n_fft) * h
    g = np.zeros(n_fft)
    m = v < math.log(2.0)
    g[m] = psi(np.exp(v[m])) * np.exp(-C * v[m])
    F = h * np.fft.rfft(g)
    t = np.arange(F.size) * (TWO_PI / L)
    return t, np.abs(F)


@lru_cache(maxsize=8)
def psi_decay_ladder(T_f: float, sign: int) -> tuple:
    """(C, B_C) with |Psi_{+-}(x)| <= B_C (pi^2 x)^{-C}.

    B_C = (1/2 pi) integral over the line Re s = C of |G(s) psi~(-s)|.  The
    kernel grows like t^{2C+1} while psi~ decays like exp(-a sqrt(t)), so the
    integrand is integrated out to where psi~ meets its double-precision
    floor; the remainder is covered by extrapolating the measured
    stretched-exponential decay (empirical, with a safety margin).
    """
    out = []
    for C in _PSI_LADDER_CS:
        t, aF = _bump_mellin_line(C)
        floor = max(1e-14 * float(aF.max()), 1e-16)
        above = np.nonzero(aF > floor)[0]
        cut = int(above.max())
        tt = t[: cut + 1]
        gv = np.abs(g_pm(C + 1j * tt, T_f, sign))
        vals = gv * aF[: cut + 1]
        body = 2.0 * float(np.trapezoid(vals, tt)) / TWO_PI
        # tail beyond the floor: measured decay slope of log|psi~| in sqrt(t),
        # softened by 0.8, against a kernel envelope measured on the same line
        i1 = int(np.searchsorted(t, 0.25 * t[cut]))
        # windowed maxima so the slope is fit to the envelope of |psi~|, not
        # to one of its near-zeros
        w = 60
        a1 = float(np.max(aF[max(0, i1 - w): i1 + w]))
        a2 = float(np.max(aF[max(0, cut - w): cut + 1]))
        slope = (math.log(a1) - math.log(a2)) / (
            math.sqrt(t[cut]) - math.sqrt(t[i1]))
        a_safe = 0.8 * slope
        env = 1.05 * float(np.max(gv / (1.0 + tt) ** (2 * C + 1)))
        te = np.geomspace(t[cut], 400.0 * t[cut], 4001)
        tail_int = float(np.trapezoid(
            env * (1.0 + te) ** (2 * C + 1)
            * a2 * np.exp(-a_safe * (np.sqrt(te) - math.sqrt(t[cut]))), te))
        tail = 2.0 * tail_int / TWO_PI
        out.append((C, (body + tail) * 1.001))
    return tuple(out)


def psi_bound(x: float, T_f: float, sign: int) -> float:
    best = math.inf
    for C, B in psi_decay_ladder(T_f, sign):
        best = min(best, B * (math.pi ** 2 * x) ** (-C))
    return best


# ---------------------------------------------------------------------------
# batch evaluation: one contour, one node rule, many arguments

def _batch_line(base: float, xs: np.ndarray, c: float, H: float, tol: float,
                kernel, gl_order: int = 24, min_panels: int = 8,
                max_panels: int = 4096) -> np.ndarray:
    """Evaluate (1/2 pi) integral of (base*x)^{-s} kernel(s) dt at s = c+it
    for every x in xs at once.  Panel doubling with a per-x acceptance test.
    """
    x0, w0 = _gl_nodes(gl_order)
    lx = np.log(base * xs)
    panels = min_panels
    prev = None
    while panels <= max_panels:
        edges = np.linspace(-H, H, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        t = (mid[:, None] + half * x0[None, :]).ravel()
        w = np.broadcast_to(half * w0[None, :], (panels, gl_order)).ravel()
        s = c + 1j * t
        wk = w * kernel(s)
        absw = float(np.sum(np.abs(wk)))
        out = np.empty(xs.shape, dtype=complex)
        for i0 in range(0, xs.size, 512):
            blk = lx[i0:i0 + 512]
            out[i0:i0 + 512] = np.exp(-np.outer(blk, s)) @ wk
        out /= TWO_PI
        floor = 4e-15 * absw * np.exp(-c * lx) / TWO_PI
        if prev is not None and np.all(np.abs(out - prev) <= tol / 2 + floor):
            return out, floor
        prev = out
        panels *= 2
    raise QuadratureFailure(
        f"batch contour integral did not converge within {max_panels} panels")


def v1_many(xs, spec: WeightSpec = DEFAULT_V1) -> np.ndarray:
    """V1 on an array of arguments via one shared contour rule."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.zeros(0)
    if np.any(xs <= 0):
        raise ValueError("arguments must be positive")
    c = spec.c
    H = _grow_height(_v1_tail_bound(float(xs.min()), c), spec.tol)
    lg_norm = _loggamma_core(np.array([0.25 + 0j]))[0]

    def kernel(s):
        return np.exp(complex_loggamma((2 * s + 1) / 4) - lg_norm) / s

    out, floor = _batch_line(SQRT_PI, xs, c, H, spec.tol, kernel, spec.gl_order,
                             min_panels=max(8, int(H / 6)),
                             max_panels=spec.max_panels)
    if np.any(np.abs(out.imag) > spec.tol + floor):
        raise QuadratureFailure("V1 batch imaginary residual exceeds tol")
    return out.real


def v2_many(xs, T_f: float, spec: WeightSpec | None = None) -> np.ndarray:
    """V2 on an array of arguments via one shared contour rule."""
    if spec is None:
        spec = default_v2_spec(T_f)
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.zeros(0)
    if np.any(xs <= 0):
        raise ValueError("arguments must be positive")
    c = spec.c
    H = _grow_height(_v2_tail_bound(float(xs.min()), T_f, c), spec.tol,
                     h0=2 * abs(T_f) + 20.0)
    a = 2j * T_f
    lg_norm = complex(complex_loggamma(np.array([(1 + a) / 4]))[0]
                      + complex_loggamma(np.array([(1 - a) / 4]))[0])

    def kernel(s):
        lg = (complex_loggamma((2 * s + 1 + a) / 4)
              + complex_loggamma((2 * s + 1 - a) / 4) - lg_norm)
        return np.exp(lg) / s

    out, floor = _batch_line(math.pi, xs, c, H, spec.tol, kernel, spec.gl_order,
                             min_panels=max(8, int(H / 6)),
                             max_panels=spec.max_panels)
    if np.any(np.abs(out.imag) > spec.tol + floor):
        raise QuadratureFailure("V2 batch imaginary residual exceeds tol")
    return out.real


def psi_pm_many(xs, psi: TestFunction, T_f: float,
                tol: float = DEFAULT_PSI_TOL,
                sigma: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """(Psi_plus, Psi_minus) on an array of arguments, sharing one contour
    rule at abscissa sigma and one Mellin node rule across all x and both
    signs."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.zeros(0, complex), np.zeros(0, complex)
    if np.any(xs <= 0):
        raise ValueError("arguments must be positive")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    pref_max = float(np.max((math.pi ** 2 * xs) ** (-sigma)))
    H = 0.0
    for sign in (+1, -1):
        tg, tail = _psi_height_table(sigma, T_f, sign)
        ok = np.nonzero(pref_max * 2.0 * tail / TWO_PI < tol / 10)[0]
        if ok.size == 0:
            raise QuadratureFailure("Psi integrand tail does not reach tolerance")
        H = max(H, float(tg[int(ok.min())]))
    mell = _fixed_mellin_evaluator(psi, 1.001 * H, tol / 100)
    Lmax = float(np.max(np.abs(np.log(math.pi ** 2 * xs))))
    cycles = Lmax * H / TWO_PI + H / 40.0
    start = max(8, int(cycles / 6) + 4)

    def kernel_pair(s):
        m = mell(-s)
        return g_pm(s, T_f, +1) * m, g_pm(s, T_f, -1) * m

    x0, w0 = _gl_nodes(24)
    lx = np.log(math.pi ** 2 * xs)
    pref = np.exp(-sigma * lx)
    panels = start
    prev = None
    while panels <= max(4096, 4 * start):
        edges = np.linspace(-H, H, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        t = (mid[:, None] + half * x0[None, :]).ravel()
        w = np.broadcast_to(half * w0[None, :], (panels, 24)).ravel()
        s = sigma + 1j * t
        kp, km = kernel_pair(s)
        wkp, wkm = w * kp, w * km
        outp = np.empty(xs.shape, dtype=complex)
        outm = np.empty(xs.shape, dtype=complex)
        for i0 in range(0, xs.size, 512):
            ph = np.exp(-1j * np.outer(lx[i0:i0 + 512], t))
            outp[i0:i0 + 512] = ph @ wkp
            outm[i0:i0 + 512] = ph @ wkm
        outp *= pref / TWO_PI
        outm *= pref / TWO_PI
        floor = pref_max * 4e-15 * max(float(np.sum(np.abs(wkp))),
                                       float(np.sum(np.abs(wkm)))) / TWO_PI
        if prev is not None:
            dp = float(np.max(np.abs(outp - prev[0])))
            dm = float(np.max(np.abs(outm - prev[1])))
            if max(dp, dm) <= tol / 2 + floor:
                return outp, outm
        prev = (outp, outm)
        panels *= 2
    raise QuadratureFailure("Psi batch contour integral did not converge")
