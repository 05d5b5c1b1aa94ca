"""Tests for covers, envelopes, minimal resolutions and complete resolutions."""

import numpy as np

from homct.algmod import (
    direct_sum,
    dual_module,
    is_isomorphic,
    quotient_module,
    regular_module,
)
from homct.fixtures import (
    algebra_a1,
    algebra_a2,
    algebra_a3,
    algebra_a4,
    a3_mod_x,
    simple_k,
)
from homct.resolve import (
    CompleteResolution,
    CompleteResolutionFailure,
    check_total_acyclicity_window,
    complete_resolution,
    detect_periodicity,
    injective_envelope,
    is_injective,
    is_projective,
    is_self_injective,
    lift_module_map,
    min_inj_resolution,
    min_proj_resolution,
    projective_cover,
)


# --- covers -----------------------------------------------------------------

def test_cover_of_k_over_a1():
    a1 = algebra_a1()
    k = simple_k(a1)
    cover, pi = projective_cover(k)
    assert cover.dim == 2 and pi.is_surjective()
    ker = pi.kernel()
    assert ker.dim == 1 and ker.contains(np.array([0, 1]))


def test_cover_of_projective_is_identity():
    a2 = algebra_a2()
    reg = regular_module(a2, "left")
    cover, pi = projective_cover(reg)
    assert cover is reg and pi.matrix == pi.matrix.identity(2, 3)


def test_cover_of_k2_over_a2():
    a2 = algebra_a2()
    k = simple_k(a2)
    k2 = direct_sum([k, k])
    cover, pi = projective_cover(k2)
    assert cover.dim == 6
    assert pi.kernel().dim == 4


# --- envelopes -----------------------------------------------------------------

def test_envelope_of_k_over_a1():
    a1 = algebra_a1()
    k = simple_k(a1)
    env, iota = injective_envelope(k)
    assert env.dim == 2 and iota.is_injective()
    coker, _ = quotient_module(env, iota.image())
    assert coker.dim == 1


def test_envelope_of_injective_is_identity():
    a1 = algebra_a1()
    reg = regular_module(a1, "left")  # A1 self-injective
    env, iota = injective_envelope(reg)
    assert env is reg


def test_envelope_of_k_over_a2():
    a2 = algebra_a2()
    k = simple_k(a2)
    env, iota = injective_envelope(k)
    assert env.dim == 3
    # E(k) = D(A2): socle of the dual is the dual of the top, so dim 1
    from homct.algmod import socle

    assert socle(env).dim == 1


# --- minimal projective resolutions ----------------------------------------------

def test_resolution_k_a1_periodic():
    a1 = algebra_a1()
    k = simple_k(a1)
    res = min_proj_resolution(k, 4)
    assert res.betti_table(4) == [1, 1, 1, 1, 1]
    for j in range(1, 5):
        assert is_isomorphic(res.syzygy(j), k).status == "isomorphic"


def test_resolution_projective_length_zero():
    a1 = algebra_a1()
    reg = regular_module(a1, "left")
    res = min_proj_resolution(reg, 3)
    assert res.proj(0).dim == reg.dim
    assert res.syzygy(1).dim == 0
    assert all(res.proj(k).dim == 0 for k in range(1, 4))


def test_resolution_k_a2_betti_doubling():
    a2 = algebra_a2()
    k = simple_k(a2)
    res = min_proj_resolution(k, 3)
    assert res.betti_table(3) == [1, 2, 4, 8]
    for j in range(4):
        assert res.syzygy(j).dim == 2**j if j else res.syzygy(0).dim == 1
    assert res.syzygy(1).dim == 2 and res.syzygy(2).dim == 4 and res.syzygy(3).dim == 8


def test_resolution_exactness_and_minimality():
    a3 = algebra_a3()
    k = simple_k(a3)
    res = min_proj_resolution(k, 4)
    from homct.algmod import radical_submodule
    from homct.exactla import image_basis, kernel_basis

    for j in range(1, 4):
        d_j = res.differential(j)
        d_next = res.differential(j + 1)
        assert (d_j.matrix @ d_next.matrix).is_zero()
        assert kernel_basis(d_j.matrix) == image_basis(d_next.matrix)
        assert radical_submodule(res.proj(j - 1)).contains_subspace(d_j.image())


def test_memoization_extends_in_place():
    a1 = algebra_a1()
    k = simple_k(a1)
    r1 = min_proj_resolution(k, 2)
    r2 = min_proj_resolution(k, 5)
    assert r1 is r2 and r2.depth >= 5


# --- minimal injective resolutions ------------------------------------------------

def test_inj_resolution_k_a1():
    a1 = algebra_a1()
    k = simple_k(a1)
    inj = min_inj_resolution(k, 4)
    assert np.array_equal(inj.cosyzygy(0).action[0].a, k.action[0].a)
    for j in range(1, 5):
        assert is_isomorphic(inj.cosyzygy(j), k).status == "isomorphic"


def test_inj_resolution_of_injective_length_zero():
    a1 = algebra_a1()
    reg = regular_module(a1, "left")
    inj = min_inj_resolution(reg, 2)
    assert inj.space(0).dim == 2 and inj.space(1).dim == 0


def test_inj_resolution_k_a2_cosyzygies():
    a2 = algebra_a2()
    k = simple_k(a2)
    inj = min_inj_resolution(k, 2)
    om1 = inj.cosyzygy(1)
    assert om1.dim == 2
    k2 = direct_sum([k, k])
    assert is_isomorphic(om1, k2).status == "isomorphic"
    assert inj.cosyzygy(2).dim == 4


def test_cosyzygy_ses_is_exact():
    a3 = algebra_a3()
    k = simple_k(a3)
    inj = min_inj_resolution(k, 3)
    for j in range(1, 3):
        om_prev, mid, om_next, incl, proj = inj.cosyzygy_ses(j)
        assert incl.is_injective() and proj.is_surjective()
        assert incl.image() == proj.kernel()


def test_duality_intertwines_sides():
    # dim Omega^j(N) over A equals dim Omega_j(D N) over the opposite side
    a2 = algebra_a2()
    k = simple_k(a2, "left")
    inj = min_inj_resolution(k, 3)
    res = min_proj_resolution(dual_module(k), 3)
    for j in range(4):
        assert inj.cosyzygy(j).dim == res.syzygy(j).dim


# --- periodicity / self-injectivity ----------------------------------------------

def test_periodicity_k_a1():
    k = simple_k(algebra_a1())
    cert = detect_periodicity(min_proj_resolution(k, 4), 4)
    assert cert is not None and (cert.offset, cert.period) == (0, 1)
    assert cert.witness.is_isomorphism()


def test_periodicity_a3_mod_x():
    m = a3_mod_x()
    cert = detect_periodicity(min_proj_resolution(m, 4), 4)
    assert cert is not None and (cert.offset, cert.period) == (0, 1)


def test_periodicity_k_a4_period_two():
    k = simple_k(algebra_a4())
    cert = detect_periodicity(min_proj_resolution(k, 4), 4)
    assert cert is not None and (cert.offset, cert.period) == (0, 2)


def test_no_periodicity_k_a2():
    k = simple_k(algebra_a2())
    assert detect_periodicity(min_proj_resolution(k, 6), 6) is None


def test_self_injectivity_verdicts():
    assert is_self_injective(algebra_a1())[0]
    assert not is_self_injective(algebra_a2())[0]
    assert is_self_injective(algebra_a3())[0]
    assert is_self_injective(algebra_a4())[0]


def test_is_projective_is_injective():
    a1 = algebra_a1()
    assert is_projective(regular_module(a1, "left"))
    assert not is_projective(simple_k(a1))
    assert is_injective(regular_module(a1, "left"))
    a2 = algebra_a2()
    assert not is_injective(regular_module(a2, "left"))
    assert is_injective(dual_module(regular_module(a2, "right")))


# --- complete resolutions ----------------------------------------------------------

def test_complete_resolution_k_a1_splice():
    k = simple_k(algebra_a1())
    t = complete_resolution(k, 4)
    assert isinstance(t, CompleteResolution) and t.mode == "splice"
    for j in range(-4, 5):
        assert t.space(j).dim == 2
    rep = check_total_acyclicity_window(t, 3)
    assert rep.ok


def test_complete_resolution_k_a2_fails():
    k = simple_k(algebra_a2())
    t = complete_resolution(k, 5)
    assert isinstance(t, CompleteResolutionFailure)
    assert "no complete resolution certified" in t.reason


def test_complete_resolution_a3_mod_x():
    m = a3_mod_x()
    t = complete_resolution(m, 4)
    assert isinstance(t, CompleteResolution)
    for j in range(-4, 5):
        assert t.space(j).dim == 4
    rep = check_total_acyclicity_window(t, 3)
    assert rep.ok


def test_complete_resolution_k_a4():
    k = simple_k(algebra_a4())
    t = complete_resolution(k, 4)
    assert isinstance(t, CompleteResolution)
    rep = check_total_acyclicity_window(t, 3)
    assert rep.ok


def test_splice_agrees_with_projective_resolution_in_nonneg_degrees():
    k = simple_k(algebra_a3())
    t = complete_resolution(k, 3)
    res = min_proj_resolution(k, 3)
    for j in range(0, 4):
        assert t.space(j).dim == res.proj(j).dim
        if j >= 1:
            assert t.differential(j).matrix == res.differential(j).matrix


# --- comparison lifts -----------------------------------------------------------

def test_lift_module_map_commutes():
    a3 = algebra_a3()
    k = simple_k(a3)
    m = a3_mod_x()
    from homct.algmod import hom_over_algebra, hom_map_from_vec

    hom = hom_over_algebra(m, k)
    assert hom.dim >= 1
    f = hom_map_from_vec(m, k, hom.basis.a[0])
    res_m = min_proj_resolution(m, 3)
    res_k = min_proj_resolution(k, 3)
    phis = lift_module_map(f, res_m, res_k, 3)
    eps_m, eps_k = res_m.cover_map(0), res_k.cover_map(0)
    assert (eps_k.matrix @ phis[0].matrix) == (f.matrix @ eps_m.matrix)
    for j in range(1, 4):
        lhs = res_k.differential(j).matrix @ phis[j].matrix
        rhs = phis[j - 1].matrix @ res_m.differential(j).matrix
        assert lhs == rhs
