"""Exact Gauss, Kloosterman and Ramanujan sums modulo a prime.

Everything is computed by direct O(q) summation over the unit group; a bulk
DFT path over the discrete-log line is provided for sweeps and must agree
with the direct path.
"""

from __future__ import annotations

import math

import numpy as np

from .characters import DirichletCharacter, PrimeModulus
from .errors import NumericalError

_IMAG_TOL = 1e-10


def _e_q(a: np.ndarray, q: int) -> np.ndarray:
    """e(a/q) elementwise."""
    return np.exp(2j * np.pi * (np.asarray(a) % q) / q)


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum over a=1..q-1 of chi(a) e(a/q), by direct summation."""
    q = chi.q
    a = np.arange(1, q)
    return complex(np.sum(chi.values(a) * _e_q(a, q)))


def gauss_sums_all(mod: PrimeModulus) -> np.ndarray:
    """tau(chi_k) for all k at once via a length-(q-1) DFT over the dlog line.

    With u[j] = e(g^j / q), tau(chi_k) = sum_j u[j] e(k j/(q-1)), which is the
    inverse-orientation DFT of u.
    """
    q = mod.q
    powers = np.empty(q - 1, dtype=np.int64)
    a = 1
    for j in range(q - 1):
        powers[j] = a
        a = (a * mod.g) % q
    u = _e_q(powers, q)
    # fft computes sum_j u[j] e(-kj/(q-1)); we want the +kj orientation
    return np.conj(np.fft.fft(np.conj(u)))


def kloosterman(a: int, b: int, mod: PrimeModulus) -> float:
    """S(a,b;q) = sum over units x of e((a x + b xbar)/q); returned as a real.

    The imaginary part cancels under x <-> -x; its residual is asserted
    below 1e-10 and discarded.
    """
    q = mod.q
    inv = mod.inverse_table()
    x = np.arange(1, q)
    s = complex(np.sum(_e_q(a * x + b * inv[x], q)))
    if abs(s.imag) > _IMAG_TOL * max(1.0, abs(s.real)):
        raise NumericalError(f"Kloosterman imaginary residual {s.imag:.3e} too large")
    return s.real


def kloosterman_table(mod: PrimeModulus) -> np.ndarray:
    """S(a,b;q) for all 0<=a,b<q via the reduction S(a,b) = S(1,ab) (x -> a^{-1}x).

    Row/column 0 degenerate cases are filled from the Ramanujan sum.
    """
    q = mod.q
    inv = mod.inverse_table()
    x = np.arange(1, q)
    # base[c] = S(1, c; q), computed directly for each c
    phases = np.exp(2j * np.pi * np.arange(q) / q)
    base = np.empty(q)
    for c in range(q):
        s = np.sum(phases[(x + c * inv[x]) % q])
        base[c] = s.real
    tab = np.empty((q, q))
    ab = (np.outer(np.arange(q), np.arange(q))) % q
    tab[:, :] = base[ab]
    # S(a,0) = S(0,a) = Ramanujan sum: q-1 if q|a else -1
    tab[0, :] = np.where(np.arange(q) % q == 0, q - 1, -1)
    tab[:, 0] = np.where(np.arange(q) % q == 0, q - 1, -1)
    tab[0, 0] = q - 1
    return tab


def ramanujan_sum(n: int, mod: PrimeModulus) -> int:
    """Sum over units a of e(a n/q), rounded to the nearest integer.

    Equals q-1 when q | n and -1 otherwise.
    """
    q = mod.q
    a = np.arange(1, q)
    s = complex(np.sum(_e_q(a * n, q)))
    r = round(s.real)
    if abs(s - r) > _IMAG_TOL:
        raise NumericalError(f"Ramanujan sum residual {abs(s - r):.3e} too large")
    return int(r)


def weil_bound(mod: PrimeModulus) -> float:
    return 2.0 * math.sqrt(mod.q)
