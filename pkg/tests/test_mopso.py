import dataclasses

import numpy as np
import pytest

import oracles
from talmopso.archive import nondominated_mask
from talmopso.cost import check_constraints, decode, evaluate_positions
from talmopso.fuzzy import best_compromise
from talmopso.mopso import (
    MopsoParams,
    run,
    update_inertia,
    update_position,
    update_velocity,
    v_max,
)
from talmopso.network import ConfigError, NetworkConfig, build_mobility

from conftest import tiny_config


@pytest.fixture(scope="module")
def small():
    cfg = NetworkConfig(num_cells=12, num_lists=3, list_size=5, grid_rows=3, grid_cols=4)
    return cfg, build_mobility(cfg, 12.0)


def test_v_max():
    assert v_max(MopsoParams(intervals=5)) == pytest.approx(0.2)
    assert v_max(MopsoParams(intervals=1)) == pytest.approx(1.0)
    assert v_max(MopsoParams(x_min=0.3, x_max=0.3)) == 0.0


def test_velocity_hand_example():
    p = MopsoParams()
    v = update_velocity(0.0, 0.5, 0.7, 0.3, alpha=1.0, params=p, r1=0.5, r2=0.5)
    assert v == pytest.approx(0.0)


def test_velocity_consensus_is_stationary():
    p = MopsoParams()
    rng = np.random.default_rng(0)
    x = rng.random(10)
    assert not update_velocity(np.zeros(10), x, x, x, 1.0, p, rng).any()


def test_velocity_clamped():
    p = MopsoParams()
    rng = np.random.default_rng(1)
    v = update_velocity(rng.uniform(-5, 5, 1000), rng.random(1000), rng.random(1000), rng.random(1000), 1.0, p, rng)
    assert np.abs(v).max() <= 0.2 + 1e-15


@pytest.mark.parametrize("x,v,expected", [(0.5, 0.1, 0.6), (0.95, 0.2, 1.0), (0.4, 0.0, 0.4), (0.05, -0.2, 0.0)])
def test_position_update(x, v, expected):
    assert update_position(x, v, MopsoParams()) == pytest.approx(expected)


def test_inertia_schedule():
    a = [1.0]
    for _ in range(5):
        a.append(update_inertia(a[-1]))
    assert a[1] == pytest.approx(0.99)
    assert a[2] == pytest.approx(0.9801)
    assert a == pytest.approx([0.99**t for t in range(6)])
    assert all(x > y > 0 for x, y in zip(a, a[1:]))


@pytest.mark.parametrize("kw", [dict(population=1), dict(local_cap=0), dict(k1=-1), dict(intervals=0), dict(x_min=2.0)])
def test_params_validation(kw):
    with pytest.raises(ConfigError):
        MopsoParams(**kw)


def test_single_iteration_returns_initial_front(small):
    cfg, mob = small
    params = MopsoParams(population=30, iterations=1, global_cap=100, seed=5)
    res = run(cfg, mob, params)
    # rebuild the initial population from the same streams
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(5).spawn(30)]
    X = np.stack([g.uniform(np.zeros(cfg.num_params), np.ones(cfg.num_params)) for g in streams])
    F, _ = evaluate_positions(X, mob, cfg)
    expected = sorted(oracles.nondominated([tuple(f) for f in F.tolist()]))
    assert sorted(e.objectives for e in res.front) == expected
    assert len(res.history) == 1


def test_seeded_runs_are_identical(small):
    cfg, mob = small
    params = MopsoParams(population=20, iterations=15, seed=11)
    a, b = run(cfg, mob, params), run(cfg, mob, params)
    assert [e.objectives for e in a.front] == [e.objectives for e in b.front]
    assert all(np.array_equal(x.position, y.position) for x, y in zip(a.front, b.front))
    assert a.compromise == b.compromise
    c = run(cfg, mob, dataclasses.replace(params, seed=12))
    assert [e.objectives for e in c.front] != [e.objectives for e in a.front]


def test_frozen_dynamics(small):
    cfg, mob = small
    params = MopsoParams(population=10, iterations=4, k1=0, k2=0, inertia=0.0, seed=2)
    seen = []
    run(cfg, mob, params, callback=lambda s: seen.append((s.positions.copy(), s.velocities.copy())))
    for x, v in seen[1:]:
        assert not v.any()
        assert np.array_equal(x, seen[1][0])


def test_swarm_invariants_every_iteration(small):
    cfg, mob = small
    params = MopsoParams(population=25, iterations=30, seed=3)
    vm = v_max(params)
    mins = []

    def check(state):
        assert ((state.positions >= 0) & (state.positions <= 1)).all()
        assert np.abs(state.velocities).max() <= vm + 1e-15
        assert state.alpha == pytest.approx(0.99 ** (state.iteration - 1))
        for arch in state.local:
            assert 1 <= len(arch) <= params.local_cap
            assert nondominated_mask(arch.objectives()).all()
        g = state.global_archive.objectives()
        assert 1 <= len(g) <= params.global_cap
        assert nondominated_mask(g).all()
        mins.append(g.min(axis=0))
        for x in state.positions[:5]:
            assert check_constraints(decode(x, cfg), cfg).ok

    res = run(cfg, mob, params, callback=check)
    mins = np.array(mins)
    assert (np.diff(mins, axis=0) <= 0).all()
    assert [h.min_j1 for h in res.history] == pytest.approx(mins[:, 0].tolist())
    assert len(res.history) == 30
    assert res.evaluations == 25 * 30
    mu = oracles_membership(res.front_objectives())
    assert mu[res.compromise] == max(mu)
    assert res.compromise == best_compromise(res.front_objectives())


def oracles_membership(front):
    """Normalized fuzzy membership recomputed from scratch."""
    j = [list(col) for col in zip(*front.tolist())]
    mus = []
    for row in front.tolist():
        m = 0.0
        for c, v in enumerate(row):
            lo, hi = min(j[c]), max(j[c])
            m += 1.0 if hi == lo else (1.0 if v <= lo else 0.0 if v >= hi else (hi - v) / (hi - lo))
        mus.append(m)
    total = sum(mus)
    return [m / total for m in mus]


def test_evaluations_match_objectives(small):
    cfg, mob = small
    res = run(cfg, mob, MopsoParams(population=10, iterations=5, seed=1))
    for e in res.front:
        F, power = evaluate_positions(e.position[None], mob, cfg)
        assert tuple(F[0]) == e.objectives
        assert power[0] == e.power


def test_front_is_weakly_dominated_by_oracle():
    from talmopso.oracle import hypervolume, true_pareto_front

    cfg = tiny_config(num_lists=2, users_per_cell=(50.0, 300.0, 120.0, 80.0))
    mob = build_mobility(cfg, 20.0)
    truth = true_pareto_front(cfg, mob)
    assert len(truth.true_front) == 4
    exact = truth.objectives()
    res = run(cfg, mob, MopsoParams(population=50, iterations=50, seed=0))
    for j1, j2 in res.front_objectives():
        assert any(a <= j1 + 1e-9 and b <= j2 + 1e-9 for a, b in exact)
    assert hypervolume(res.front_objectives(), truth.reference_point) >= 0.9 * truth.hypervolume
