import math

import numpy as np
import pytest

from lmoment.characters import DirichletCharacter, build_modulus
from lmoment.errors import NotCoprime
from lmoment.expsums import (gauss_sum, gauss_sums_all, kloosterman,
                             kloosterman_table, ramanujan_sum, weil_bound)


def test_gauss_sum_modulus_squared():
    for q in (5, 7, 13, 101):
        mod = build_modulus(q)
        for k in range(1, q - 1):
            tau = gauss_sum(DirichletCharacter(mod, k))
            assert abs(abs(tau) ** 2 - q) < 1e-10


def test_gauss_sum_pair_identity():
    # tau(chi) tau(conj chi) = chi(-1) q for primitive chi
    for q in (7, 11, 31):
        mod = build_modulus(q)
        for k in range(1, q - 1):
            chi = DirichletCharacter(mod, k)
            prod = gauss_sum(chi) * gauss_sum(chi.conj())
            want = chi(-1 % q) * q
            assert abs(prod - want) < 1e-9


def test_gauss_bulk_matches_direct():
    for q in (5, 13, 101):
        mod = build_modulus(q)
        bulk = gauss_sums_all(mod)
        for k in range(q - 1):
            direct = gauss_sum(DirichletCharacter(mod, k))
            assert abs(bulk[k] - direct) < 1e-9
        # principal character: tau(chi_0) = Ramanujan sum c_q(1) = -1
        assert abs(bulk[0] + 1) < 1e-9


def test_kloosterman_symmetry_and_bound():
    for q in (5, 13, 37):
        mod = build_modulus(q)
        bound = weil_bound(mod)
        for a in range(1, q):
            for b in range(1, q):
                s = kloosterman(a, b, mod)
                assert abs(s) <= bound + 1e-9
                assert abs(s - kloosterman(b, a, mod)) < 1e-9


def test_kloosterman_table_matches_pointwise():
    for q in (7, 23):
        mod = build_modulus(q)
        tab = kloosterman_table(mod)
        for a in range(q):
            for b in range(q):
                if a == 0 or b == 0:
                    n = a + b
                    want = q - 1 if n % q == 0 else -1
                    assert abs(tab[a, b] - want) < 1e-9
                else:
                    assert abs(tab[a, b] - kloosterman(a, b, mod)) < 1e-9


def test_degenerate_kloosterman_is_ramanujan():
    mod = build_modulus(11)
    tab = kloosterman_table(mod)
    assert round(tab[0, 1]) == -1
    assert round(tab[0, 0]) == 10
    for n in (1, 5, 11, 22):
        want = 10 if n % 11 == 0 else -1
        assert ramanujan_sum(n, mod) == want


def test_weil_bound_value():
    assert abs(weil_bound(build_modulus(7)) - 2 * math.sqrt(7)) < 1e-14
