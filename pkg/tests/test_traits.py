import math

import numpy as np
import pytest

from coevo import TraitModel, TraitDomainError, trait_eval


def gauss(**kw):
    base = dict(family="gaussian", K01=1.0, K02=1.0, a0=5.0,
                sigma_K1=1.0, sigma_K2=1.0, sigma_a=0.5)
    base.update(kw)
    return TraitModel(**base)


def quartic(**kw):
    base = dict(family="bounded_quartic", K01=2.0, K02=3.0, a0=1.5,
                sigma_K1=0.7, sigma_K2=1.3, sigma_a=0.9, c=1.5)
    base.update(kw)
    return TraitModel(**base)


def asym(**kw):
    base = dict(family="asymmetric_gaussian_a", K01=1.0, K02=1.0, a0=2.0,
                sigma_K1=1.0, sigma_K2=1.0, sigma_a=0.8, beta=0.6)
    base.update(kw)
    return TraitModel(**base)


def test_gaussian_K_peak():
    m = gauss(K01=1.0, sigma_K1=0.5)
    val = trait_eval(m, "K1", 0.0)
    assert val.value == 1.0
    assert val.d1 == 0.0
    assert val.d2 == -1.0 / 0.25


def test_quartic_K_ends():
    m = quartic()
    for which, K0, sig in (("K1", m.K01, m.sigma_K1), ("K2", m.K02, m.sigma_K2)):
        for v in (0.0, m.c):
            val = trait_eval(m, which, v)
            assert val.value == pytest.approx(K0, rel=1e-14)
            assert val.d1 == 0.0
            assert val.d2 == pytest.approx(-K0 * m.c ** 2 / sig ** 2, rel=1e-13)


def test_quartic_efficiency_values():
    m = quartic()
    c, sa = m.c, m.sigma_a
    # matched traits: reduced efficiency, positive curvature
    ev = trait_eval(m, "a", (0.0, 0.0))
    expect = m.a0 * math.exp(-c ** 4 / (2.0 * sa ** 4))
    assert ev.value == pytest.approx(expect, rel=1e-14)
    assert ev.dv1 == 0.0 and ev.dv2 == 0.0
    assert ev.dv1v1 == pytest.approx(2.0 * c ** 2 / sa ** 4 * expect, rel=1e-13)
    assert ev.dv1v1 > 0
    # opposite corners: peak efficiency, negative curvature
    ev = trait_eval(m, "a", (0.0, c))
    assert ev.value == pytest.approx(m.a0, rel=1e-14)
    assert ev.dv2 == 0.0
    assert ev.dv2v2 == pytest.approx(-4.0 * m.a0 * c ** 2 / sa ** 4, rel=1e-13)
    assert ev.dv2v2 < 0
    assert ev.dv1v2 == -ev.dv2v2


def test_quartic_death_rate():
    m = quartic(d0=2.1, sigma_d=1.05, c=1.0)
    d0, sd, c = 2.1, 1.05, 1.0
    lo = trait_eval(m, "d", 0.0)
    hi = trait_eval(m, "d", c)
    assert lo.value == pytest.approx(d0 * math.exp(-c ** 4 / (2 * sd ** 2)),
                                     rel=1e-14)
    assert hi.value == pytest.approx(d0, rel=1e-14)
    assert lo.d1 == 0.0 and hi.d1 == 0.0
    assert lo.d2 > 0
    assert hi.d2 == pytest.approx(-4.0 * d0 * c ** 2 / sd ** 2, rel=1e-13)


@pytest.mark.parametrize("model,lo,hi", [
    (gauss(), -3.0, 3.0),
    (quartic(), 0.0, 1.5),
    (asym(), -3.0, 3.0),
])
def test_derivatives_match_finite_differences(model, lo, hi):
    rng = np.random.default_rng(7)
    step = 1e-5

    def fd2(fun, v):
        f0, fp, fm = fun(v), fun(v + step), fun(v - step)
        return (fp - fm) / (2 * step), (fp - 2 * f0 + fm) / step ** 2

    for _ in range(100):
        v = rng.uniform(lo + 2 * step, hi - 2 * step)
        w = rng.uniform(lo + 2 * step, hi - 2 * step)
        for which in ("K1", "K2"):
            got = trait_eval(model, which, v)
            d1, d2 = fd2(lambda z: trait_eval(model, which, z).value, v)
            assert got.d1 == pytest.approx(d1, rel=1e-5, abs=1e-7)
            assert got.d2 == pytest.approx(d2, rel=1e-4, abs=1e-4)
        if model.has_trait_death:
            got = trait_eval(model, "d", w)
            d1, d2 = fd2(lambda z: trait_eval(model, "d", z).value, w)
            assert got.d1 == pytest.approx(d1, rel=1e-5, abs=1e-7)
        ev = trait_eval(model, "a", (v, w))
        d1v, d2v = fd2(lambda z: trait_eval(model, "a", (z, w)).value, v)
        assert ev.dv1 == pytest.approx(d1v, rel=1e-5, abs=1e-7)
        assert ev.dv1v1 == pytest.approx(d2v, rel=1e-4, abs=1e-4)
        d1w, d2w = fd2(lambda z: trait_eval(model, "a", (v, z)).value, w)
        assert ev.dv2 == pytest.approx(d1w, rel=1e-5, abs=1e-7)
        assert ev.dv2v2 == pytest.approx(d2w, rel=1e-4, abs=1e-4)
        mixed = (trait_eval(model, "a", (v + step, w + step)).value
                 - trait_eval(model, "a", (v + step, w - step)).value
                 - trait_eval(model, "a", (v - step, w + step)).value
                 + trait_eval(model, "a", (v - step, w - step)).value
                 ) / (4 * step * step)
        assert ev.dv1v2 == pytest.approx(mixed, rel=1e-4, abs=1e-4)


def test_bounded_domain_errors():
    m = quartic()
    with pytest.raises(TraitDomainError):
        trait_eval(m, "K1", -0.1)
    with pytest.raises(TraitDomainError):
        trait_eval(m, "K2", m.c + 0.1)
    with pytest.raises(TraitDomainError):
        trait_eval(m, "a", (0.5, m.c + 0.2))
    # the unbounded family accepts anything
    trait_eval(gauss(), "K1", 40.0)


def test_validation_errors():
    with pytest.raises(ValueError):
        gauss(sigma_a=0.0)
    with pytest.raises(ValueError):
        quartic(c=None)
    with pytest.raises(ValueError):
        quartic(d0=1.0)          # sigma_d missing
    with pytest.raises(ValueError):
        gauss(c=1.0)             # c only for the bounded family
    with pytest.raises(ValueError):
        asym(beta=None)
    with pytest.raises(ValueError):
        trait_eval(gauss(), "d", 0.0)  # no trait-dependent death here


def test_round_trip():
    for m in (gauss(), quartic(d0=2.0, sigma_d=1.0), asym()):
        again = TraitModel.from_dict(m.to_dict())
        assert again == m
    with pytest.raises(ValueError):
        TraitModel.from_dict({"family": "gaussian", "bogus": 1.0})
