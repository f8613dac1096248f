import math

import numpy as np
import pytest

from tcsm.dual_paths import (
    dual_grad_and_second_log_psi0,
    dual_phi_eval,
)
from tcsm.model import derive_params
from tcsm.oracle import sample_positions
from tcsm.wavefunction import (
    COMBO,
    COS_SUM,
    E1,
    EN,
    ENM1,
    GROUND,
    NONDEG_ZERO,
    SIN_SUM,
    BOOSTED,
    Configuration,
    NodeProximityError,
    StateSpec,
    grad_log_psi0,
    laplacian_ratio_psi0,
    log_psi0,
    phi_eval,
    phi_eval_batch,
)

L = 2.0 * math.pi


def equispaced(n, length=L):
    return np.arange(n) * length / n


def test_log_psi0_closed_form():
    # N=4, r=1: four nearest-neighbor gaps of L/4, each factor sin(pi/4)
    p = derive_params(4, 1, beta=1.0)
    val = log_psi0(p, equispaced(4))
    assert val == pytest.approx(-2.0 * math.log(2.0), rel=1e-14)


def test_log_psi0_linear_in_beta():
    p1 = derive_params(6, 2, beta=1.0)
    p2 = derive_params(6, 2, beta=2.0)
    x = sample_positions(p1, 20, seed=5)
    np.testing.assert_allclose(2.0 * log_psi0(p1, x), log_psi0(p2, x), rtol=1e-14)


def test_log_psi0_rotation_and_relabel_invariance():
    p = derive_params(7, 2, beta=1.7)
    x = sample_positions(p, 50, seed=9)
    np.testing.assert_allclose(log_psi0(p, x), log_psi0(p, (x + 1.3) % L), rtol=1e-12)
    np.testing.assert_allclose(log_psi0(p, x), log_psi0(p, np.roll(x, 2, axis=-1)), rtol=1e-12)


def test_full_regime_permutation_invariance():
    p = derive_params(6, 3, beta=1.3)
    assert not p.truncated
    x = sample_positions(p, 30, seed=11)
    rng = np.random.default_rng(0)
    perm = rng.permutation(6)
    np.testing.assert_allclose(log_psi0(p, x), log_psi0(p, x[..., perm]), rtol=1e-12)


def test_truncated_regime_not_fully_symmetric():
    p = derive_params(7, 2, beta=1.0)
    x = sample_positions(p, 1, seed=3)[0]
    swapped = x.copy()
    swapped[[0, 3]] = swapped[[3, 0]]  # distance-3 swap is not a dihedral relabeling
    assert abs(log_psi0(p, x) - log_psi0(p, swapped)) > 1e-8


def test_gradient_zero_at_equispaced():
    for n, r in [(5, 1), (6, 2), (8, 3)]:
        p = derive_params(n, r, beta=1.5)
        g = grad_log_psi0(p, equispaced(n))
        np.testing.assert_allclose(g, 0.0, atol=1e-12)


def test_gradient_components_sum_to_zero():
    p = derive_params(8, 3, beta=2.5)
    x = sample_positions(p, 100, seed=2)
    g = grad_log_psi0(p, x)
    np.testing.assert_allclose(g.sum(axis=-1), 0.0, atol=1e-10)


def test_gradient_matches_finite_differences():
    p = derive_params(6, 2, beta=1.5)
    x = sample_positions(p, 5, seed=8, min_sep_frac=5e-3)
    h = 1e-6 * L
    g = grad_log_psi0(p, x)
    for m in range(6):
        xp, xm = x.copy(), x.copy()
        xp[..., m] += h
        xm[..., m] -= h
        fd = (log_psi0(p, xp) - log_psi0(p, xm)) / (2 * h)
        np.testing.assert_allclose(g[..., m], fd, rtol=1e-6, atol=1e-8)


def test_laplacian_matches_finite_differences():
    p = derive_params(5, 2, beta=2.0)
    x = sample_positions(p, 3, seed=4, min_sep_frac=2e-2)
    h = 1e-5 * L
    lap = laplacian_ratio_psi0(p, x)
    approx = np.zeros_like(lap)
    f0 = log_psi0(p, x)
    g = grad_log_psi0(p, x)
    for m in range(5):
        xp, xm = x.copy(), x.copy()
        xp[..., m] += h
        xm[..., m] -= h
        second = (log_psi0(p, xp) - 2 * f0 + log_psi0(p, xm)) / h**2
        approx += second + g[..., m] ** 2
    np.testing.assert_allclose(lap, approx, rtol=1e-5)


def test_laplacian_scaling():
    p1 = derive_params(6, 2, beta=1.0, length=L)
    p2 = derive_params(6, 2, beta=1.0, length=2 * L)
    x = sample_positions(p1, 10, seed=6)
    np.testing.assert_allclose(
        laplacian_ratio_psi0(p2, 2 * x), laplacian_ratio_psi0(p1, x) / 4.0, rtol=1e-12
    )


# -- excitation factors ----------------------------------------------------

def test_phi_ground_identity():
    p = derive_params(6, 2)
    cfg = Configuration.from_positions(sample_positions(p, 1, seed=1)[0], p.length)
    phi, gr, lr = phi_eval(StateSpec(GROUND), p, cfg)
    assert phi == 1.0 + 0j
    np.testing.assert_allclose(gr, 0.0)
    assert lr == 0.0


def test_phi_e1_node_at_equispaced():
    p = derive_params(6, 2)
    cfg = Configuration.from_positions(equispaced(6), p.length)
    with pytest.raises(NodeProximityError):
        phi_eval(StateSpec(E1), p, cfg)


def test_phi_en_closed_form():
    p = derive_params(6, 2)
    cfg = Configuration.from_positions(sample_positions(p, 1, seed=7)[0], p.length)
    phi, gr, lr = phi_eval(StateSpec(EN), p, cfg)
    w = 2j * math.pi / p.length
    np.testing.assert_allclose(gr, np.full(6, w), rtol=1e-12)
    assert lr == pytest.approx(-6 * (2 * math.pi / p.length) ** 2, rel=1e-12)
    assert abs(phi) == pytest.approx(1.0, rel=1e-12)


def test_nondeg_state_parity_invariant():
    # z -> 1/z is x -> L - x; the kappa = 0 state must not change
    p = derive_params(6, 2, beta=1.7)
    x = sample_positions(p, 40, seed=13)
    spec = StateSpec(NONDEG_ZERO)
    phi1, _, _, _ = phi_eval_batch(spec, p, x)
    phi2, _, _, _ = phi_eval_batch(spec, p, (p.length - x) % p.length)
    np.testing.assert_allclose(phi1, phi2, rtol=1e-10)


ALL_STATES = [
    StateSpec(E1),
    StateSpec(ENM1),
    StateSpec(EN),
    StateSpec(COMBO),
    StateSpec(COS_SUM),
    StateSpec(SIN_SUM),
    StateSpec(NONDEG_ZERO),
    StateSpec(BOOSTED, q=1, base=StateSpec(E1)),
    StateSpec(BOOSTED, q=-1, base=StateSpec(ENM1)),
]


@pytest.mark.parametrize("spec", ALL_STATES, ids=lambda s: s.label())
def test_phi_dual_number_cross_check(spec):
    p = derive_params(6, 2, beta=2.5)
    x = sample_positions(p, 100, seed=17)
    phi, grad_ratio, lap_ratio, nodes = phi_eval_batch(spec, p, x)
    phid, dphi, d2phi = dual_phi_eval(spec, p, x)
    keep = ~nodes
    np.testing.assert_allclose(phi[keep], phid[keep], rtol=1e-12, atol=1e-12)
    got = dphi[keep] / phid[keep][..., None]
    scale = np.abs(grad_ratio[keep]).max() + 1.0
    assert np.abs(grad_ratio[keep] - got).max() / scale < 1e-10
    got_lap = d2phi[keep].sum(axis=-1) / phid[keep]
    scale = np.abs(lap_ratio[keep]).max() + 1.0
    assert np.abs(lap_ratio[keep] - got_lap).max() / scale < 1e-10


def test_dual_log_psi0_cross_check():
    for n, r, beta in [(5, 1, 0.5), (6, 2, 1.0), (9, 4, 2.5)]:
        p = derive_params(n, r, beta=beta)
        x = sample_positions(p, 200, seed=19)
        ga = grad_log_psi0(p, x)
        la = laplacian_ratio_psi0(p, x)
        gd, sd = dual_grad_and_second_log_psi0(p, x)
        ld = (gd * gd).sum(axis=-1) + sd.sum(axis=-1)
        assert np.abs(ga - gd).max() / (np.abs(ga).max() + 1.0) < 1e-12
        assert np.abs(la - ld).max() / (np.abs(la).max() + 1.0) < 1e-12


def test_configuration_min_sep():
    cfg = Configuration.from_positions([0.0, 1.0, 2.0, 3.5], L)
    assert cfg.min_sep == pytest.approx(1.0)
