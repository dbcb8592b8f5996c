"""Model parameters, gauge/matter actions, and the two-picture scaling."""

import numpy as np
import pytest

from boselgt.actions import (FIELD_KINDS, GaugeConfig, ModelParams,
                             ScalingFactors, bose_action,
                             bose_action_unscaled, field_transform,
                             gauge_transform, plaquette_actions,
                             plaquette_holonomies, wilson_action)
from boselgt.errors import UsageError
from boselgt.haar import haar_sample

RNG = np.random.default_rng(2024)


def small_params(**kw):
    base = dict(d=2, L=3, n=1, kind="U", a=0.7, g_sq=1.3)
    base.update(kw)
    return ModelParams(**base)


def random_field(params, rng):
    shape = (params.lattice.n_sites, params.n)
    if params.field_kind == "complex":
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return rng.standard_normal(shape)


# ------------------------------------------------------------------ scaling

def test_kappa_sq_massless_limit():
    for d in (2, 3, 4):
        p = ModelParams(d=d, L=2, m_u=0.0, kappa_u_sq=2.5)
        assert p.scaling.kappa_sq == pytest.approx(1.0 / (2.0 * d), rel=1e-15)


def test_kappa_sq_decoupled_limit():
    p = ModelParams(d=3, L=2, m_u=1.5, kappa_u_sq=0.0)
    assert p.scaling.kappa_sq == 0.0


def test_scaling_factors_hand_values():
    p = ModelParams(d=3, L=2, a=0.5, g_sq=2.0, m_u=2.0, kappa_u_sq=0.7)
    s = p.scaling
    # s_B^2 = a^{d-2} (m^2 a^2 + 2 d kappa_u^2) = 0.5 * (1.0 + 4.2)
    assert s.bose_scale == pytest.approx(np.sqrt(0.5 * 5.2), rel=1e-15)
    assert s.gauge_scale == pytest.approx(0.5 ** (-0.5) / np.sqrt(2.0), rel=1e-15)
    assert s.coupling == pytest.approx(0.5 ** (-1) / 2.0, rel=1e-15)
    u = 0.7 / 4.0
    assert s.kappa_sq == pytest.approx(u / (0.25 + 6.0 * u), rel=1e-15)


def test_kappa_sq_stays_below_free_boundary():
    # kappa^2 < 1/(2d) strictly for m_u > 0, approaching it as m_u -> 0.
    vals = [ModelParams(d=3, L=2, a=1.0, m_u=m, kappa_u_sq=1.0).scaling.kappa_sq
            for m in (2.0, 0.5, 0.01, 0.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(1.0 / 6.0)
    assert vals[-2] < 1.0 / 6.0


@pytest.mark.parametrize("field_kind", FIELD_KINDS)
def test_two_pictures_give_the_same_action(field_kind):
    p = small_params(field_kind=field_kind, n=2, a=0.3, m_u=1.2, kappa_u_sq=0.8)
    rng = np.random.default_rng(10)
    cfg = GaugeConfig.random(p.lattice, rng, n=2)
    phi_u = random_field(p, rng)
    s_b = p.scaling.bose_scale
    assert bose_action_unscaled(p, cfg, phi_u) == pytest.approx(
        bose_action(p, cfg, s_b * phi_u), rel=1e-12)


# ------------------------------------------------------------- gauge sector

def test_identity_config_has_zero_action():
    p = small_params(n=2)
    cfg = GaugeConfig.identity(p.lattice, n=2)
    assert wilson_action(p, cfg) == 0.0
    assert np.all(plaquette_actions(p.lattice, cfg.bonds) == 0.0)


def test_plaquette_action_range():
    p = ModelParams(d=3, L=3, n=2, kind="SU")
    cfg = GaugeConfig.random(p.lattice, np.random.default_rng(4), n=2, kind="SU")
    acts = plaquette_actions(p.lattice, cfg.bonds)
    assert acts.shape == (p.lattice.n_plaquettes,)
    assert np.all(acts >= 0.0)
    assert np.all(acts <= 4.0 * p.n)


def test_u1_holonomy_signs():
    # One plaquette: phases add along the walk, subtract on the return legs.
    p = ModelParams(d=2, L=2)
    lat = p.lattice
    theta = np.array([0.31, -0.52, 0.17, 0.08])
    bonds = np.ones((lat.n_bonds, 1, 1), dtype=complex)
    b1, b2, b3, b4 = lat.plaq_bonds[0]
    for b, t in zip((b1, b2, b3, b4), theta):
        bonds[b, 0, 0] = np.exp(1j * t)
    total = theta[0] + theta[1] - theta[2] - theta[3]
    hol = plaquette_holonomies(lat, bonds)[0, 0, 0]
    assert hol == pytest.approx(np.exp(1j * total), rel=1e-14)
    act = plaquette_actions(lat, bonds)[0]
    assert act == pytest.approx(2.0 * (1.0 - np.cos(total)), rel=1e-13)


def test_wilson_action_coupling_prefactor():
    p = small_params(a=0.5, g_sq=2.0)  # c = a^{-2}/g^2 = 2
    cfg = GaugeConfig.random(p.lattice, np.random.default_rng(8))
    raw = float(np.sum(plaquette_actions(p.lattice, cfg.bonds)))
    assert wilson_action(p, cfg) == pytest.approx(2.0 * raw, rel=1e-13)


def test_wilson_action_is_gauge_invariant():
    p = ModelParams(d=3, L=2, n=2)
    rng = np.random.default_rng(12)
    cfg = GaugeConfig.random(p.lattice, rng, n=2)
    rots = haar_sample(rng, 2, size=(p.lattice.n_sites,))
    moved = gauge_transform(cfg, rots)
    assert wilson_action(p, moved) == pytest.approx(wilson_action(p, cfg), rel=1e-10)


def test_bose_action_gauge_covariance_complex():
    p = ModelParams(d=2, L=3, n=2, field_kind="complex", m_u=0.4, kappa_u_sq=1.1)
    rng = np.random.default_rng(13)
    cfg = GaugeConfig.random(p.lattice, rng, n=2)
    phi = random_field(p, rng)
    rots = haar_sample(rng, 2, size=(p.lattice.n_sites,))
    val = bose_action(p, gauge_transform(cfg, rots), field_transform(phi, rots))
    assert val == pytest.approx(bose_action(p, cfg, phi), rel=1e-12)


def test_bose_action_gauge_covariance_real():
    # Real model: rotate with real orthogonal matrices so the field stays real.
    p = ModelParams(d=2, L=3, n=2, field_kind="real", m_u=0.4, kappa_u_sq=1.1)
    rng = np.random.default_rng(14)
    cfg = GaugeConfig.random(p.lattice, rng, n=2)
    phi = random_field(p, rng)
    q, r = np.linalg.qr(rng.standard_normal((p.lattice.n_sites, 2, 2)))
    q = q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[:, None, :]
    val = bose_action(p, gauge_transform(cfg, q), field_transform(phi, q))
    assert val == pytest.approx(bose_action(p, cfg, phi), rel=1e-12)


def test_decoupled_action_is_pure_gaussian():
    p = small_params(m_u=1.0, kappa_u_sq=0.0)
    cfg = GaugeConfig.random(p.lattice, np.random.default_rng(3))
    phi = random_field(p, np.random.default_rng(4))
    assert bose_action(p, cfg, phi) == pytest.approx(
        0.5 * float(np.sum(phi * phi)), rel=1e-14)


# ------------------------------------------------------------- construction

def test_params_validation():
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, kind="O")
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, kind="SU", n=1)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, n=0)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, g_sq=8.0, g0_sq=4.0)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, g_sq=-1.0)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, m_u=0.0, kappa_u_sq=0.0)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, m_u=-0.5)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, n_flavors=0)
    with pytest.raises(UsageError):
        ModelParams(d=2, L=2, field_kind="quaternion")
    with pytest.raises(Exception):
        ModelParams(d=5, L=2)
    with pytest.raises(Exception):
        ModelParams(d=2, L=2, a=1.5)


def test_with_replaces_and_revalidates():
    p = small_params()
    q = p.with_(a=0.1)
    assert q.a == 0.1 and p.a == 0.7
    assert q.lattice.a == 0.1
    with pytest.raises(UsageError):
        p.with_(g_sq=100.0)


def test_gauge_config_shape_check():
    lat = ModelParams(d=2, L=2).lattice
    with pytest.raises(ValueError):
        GaugeConfig(lattice=lat, kind="U", n=1, bonds=np.ones((3, 1, 1)))
    cfg = GaugeConfig.identity(lat, n=2)
    assert cfg.bonds.shape == (lat.n_bonds, 2, 2)
    assert np.all(cfg.bonds == np.eye(2))


def test_field_checks():
    p = small_params(field_kind="real")
    cfg = GaugeConfig.identity(p.lattice)
    with pytest.raises(ValueError):
        bose_action(p, cfg, np.zeros((3, 1)))
    with pytest.raises(ValueError):
        bose_action(p, cfg, np.zeros((p.lattice.n_sites, 1), dtype=complex))


def test_field_transform_keeps_real_fields_real():
    phi = RNG.standard_normal((4, 2))
    rots = np.broadcast_to(np.eye(2), (4, 2, 2))
    out = field_transform(phi, rots)
    assert not np.iscomplexobj(out)
    assert np.array_equal(out, phi)
