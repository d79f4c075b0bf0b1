import math

import numpy as np
import pytest

from lmoment.characters import (DirichletCharacter, build_modulus,
                                even_primitive_indices, primes_in_range)
from lmoment.errors import ModulusTooSmall
from lmoment.lvalues import (WeightSpec, dirichlet_central_afe,
                             twist_central_afe)
from lmoment.moment import (CROSS_KEYS, cross_term_decomposition,
                            nonvanishing_search, prime_scan, twisted_moment)
from lmoment.weights import v1_many, v2_many


def test_q5_single_product(real_f):
    # only one even primitive character mod 5, so the moment is one product
    mod = build_modulus(5)
    rep = twisted_moment(real_f, mod)
    assert rep.n_characters == 1
    chi = DirichletCharacter(mod, 2)
    prod = (twist_central_afe(real_f, chi).value
            * dirichlet_central_afe(chi).value)
    assert abs(rep.moment - prod) < 1e-10


def test_character_census(real_f):
    for q in (5, 13, 61, 101):
        rep = twisted_moment(real_f, build_modulus(q))
        assert rep.n_characters == (q - 1) // 2 - 1
        assert rep.n_characters == len(even_primitive_indices(build_modulus(q)))


def test_moment_is_real(real_f):
    for q in (13, 101):
        rep = twisted_moment(real_f, build_modulus(q))
        assert abs(rep.moment.imag) < 1e-10 * (1 + abs(rep.moment.real))


def test_decomposition_adds_up(real_f):
    mod = build_modulus(101)
    rep = twisted_moment(real_f, mod)
    cross = cross_term_decomposition(real_f, mod)
    assert set(cross) == set(CROSS_KEYS)
    total = sum(cross.values())
    assert abs(total - rep.moment) < 1e-9 * (1 + abs(rep.moment))


def test_hurwitz_oracle_consistency(real_f):
    # replace the Dirichlet factor with the independent Hurwitz route
    mod = build_modulus(101)
    a = twisted_moment(real_f, mod).moment
    b = twisted_moment(real_f, mod, dirichlet_method="hurwitz").moment
    assert abs(a - b) <= 50 * 1e-8


def test_diagonal_term_dominates(real_f):
    # S1S3 carries the diagonal n = m mass and should be the largest block,
    # within 25 percent of the closed diagonal sum
    q = 101
    rep = twisted_moment(real_f, build_modulus(q))
    n = np.arange(1, real_f.P_max + 1)
    lam = real_f.coefficients_upto(real_f.P_max)[1:]
    diag = (q - 2) / 2.0 * np.sum(
        lam / n * v1_many(n / math.sqrt(q), WeightSpec(kind="V1", c=1.0, tol=1e-12))
        * v2_many(n / q, real_f.T_f))
    s13 = rep.cross_terms["S1S3"].real
    assert abs(s13 - diag) < 0.25 * abs(diag)
    assert abs(rep.cross_terms["S1S3"]) == max(
        abs(rep.cross_terms[key]) for key in CROSS_KEYS)


def test_dual_block_stays_small(real_f):
    # the fully dualized block S2S4 is oscillatory and should sit well below
    # the main term
    for q in (61, 101, 199):
        rep = twisted_moment(real_f, build_modulus(q))
        assert abs(rep.cross_terms["S2S4"]) < q ** 0.95


def test_modulus_too_small(real_f):
    with pytest.raises(ModulusTooSmall):
        twisted_moment(real_f, build_modulus(3))


def test_nonvanishing_search(real_f):
    mod = build_modulus(101)
    wits = nonvanishing_search(real_f, mod, 1e-6)
    assert wits
    # sorted by the smaller magnitude, descending
    keys = [min(t, d) for _, t, d in wits]
    assert keys == sorted(keys, reverse=True)
    with pytest.raises(ValueError):
        nonvanishing_search(real_f, mod, -1.0)
    # threshold zero keeps every character whose values clear the error bars
    rep = twisted_moment(real_f, mod, witness_threshold=0.0)
    assert len(rep.witnesses) >= len(wits)


def test_witness_magnitudes_match_oracle(real_f):
    mod = build_modulus(13)
    k, tmag, dmag = twisted_moment(real_f, mod).witnesses[0]
    chi = DirichletCharacter(mod, k)
    assert abs(tmag - abs(twist_central_afe(real_f, chi).value)) < 1e-10
    assert abs(dmag - abs(dirichlet_central_afe(chi).value)) < 1e-10


def test_prime_scan_order_and_cutoffs(real_f):
    reps = prime_scan(real_f, 5, 30)
    assert [r.q for r in reps] == primes_in_range(5, 30)
    cuts = [r.cutoffs["N_cut"] for r in reps]
    assert cuts == sorted(cuts)
    # l_one is shared across the scan
    assert len({r.l_one_value for r in reps}) == 1


def test_prime_scan_deterministic_across_workers(real_f):
    a = prime_scan(real_f, 5, 30, workers=1)
    b = prime_scan(real_f, 5, 30, workers=2)
    for ra, rb in zip(a, b):
        assert ra.q == rb.q
        assert ra.moment == rb.moment
        assert ra.witnesses == rb.witnesses
