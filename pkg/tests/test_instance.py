import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diskcover.instance import (
    GeneratorConfig,
    Instance,
    InstanceError,
    derive_seed,
    dumps,
    generate,
    load,
    loads,
    make_suite,
    save,
    suite_plan,
)


def test_generate_contract():
    inst = generate(20, 20, GeneratorConfig(seed=1))
    assert inst.n == 20 and inst.m == 20
    assert all(0 <= p.x < 100 and 0 <= p.y < 100 for p in inst.points)
    assert set(inst.kappa) <= {1, 2, 3}


def test_generate_deterministic_bytes():
    a = dumps(generate(30, 7, GeneratorConfig(seed=9)))
    b = dumps(generate(30, 7, GeneratorConfig(seed=9)))
    assert a == b
    assert a != dumps(generate(30, 7, GeneratorConfig(seed=10)))


def test_generate_single_point():
    inst = generate(1, 1, GeneratorConfig(kappa_choices=(1,), seed=3))
    assert inst.n == 1 and inst.kappa == (1,)


@given(st.integers(1, 80), st.integers(1, 10), st.integers(0, 2**32),
       st.sets(st.integers(1, 5), min_size=1), st.floats(1, 500), st.floats(1, 500))
def test_generated_values_in_canvas_and_choices(n, m, seed, kap, w, h):
    inst = generate(n, m, GeneratorConfig(w, h, tuple(kap), seed))
    assert all(0 <= p.x < w and 0 <= p.y < h for p in inst.points)
    assert set(inst.kappa) <= kap


def test_generator_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(width=0)
    with pytest.raises(ValueError):
        GeneratorConfig(kappa_choices=(0, 1))


def test_uni_sm_has_95_instances():
    suite = make_suite("uni_sm", 1)
    assert len(suite) == 95
    assert {i.m for i in suite} == {20}
    assert sorted({i.n for i in suite}) == list(range(20, 201, 10))


def test_uni_lg_plan():
    plan = suite_plan("uni_lg")
    assert len(plan) == 28 and {m for _, m in plan} == {30}
    assert plan[0][0] == 30 and plan[-1][0] == 300


def test_uni_fix_n_all_n_250():
    plan = suite_plan("uni_fix_n")
    assert len(plan) == 20 and {n for n, _ in plan} == {250}
    assert [m for _, m in plan] == list(range(5, 101, 5))


def test_small_scale_caps_n():
    for fam in ("uni_sm", "uni_lg", "uni_fix_n"):
        assert all(n <= 60 for n, _ in suite_plan(fam, "small"))


def test_unknown_family():
    with pytest.raises(ValueError):
        make_suite("uni_xy", 0)


def test_suite_determinism_and_distinct_seeds():
    a = [dumps(i) for i in make_suite("uni_sm", 5, "small")]
    b = [dumps(i) for i in make_suite("uni_sm", 5, "small")]
    assert a == b
    seeds = [i.seed for i in make_suite("uni_sm", 5, "small")]
    assert len(set(seeds)) == len(seeds)
    assert derive_seed(5, "uni_sm", 0, 0) == derive_seed(5, "uni_sm", 0, 0) >= 0


def test_round_trip_file(tmp_path):
    inst = generate(25, 4, GeneratorConfig(seed=2)).with_ell(5.0)
    save(inst, tmp_path / "i.json")
    assert load(tmp_path / "i.json") == inst


@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), min_size=1, max_size=20),
       st.data())
def test_round_trip_property(pts, data):
    kap = data.draw(st.lists(st.integers(1, 4), min_size=len(pts), max_size=len(pts)))
    m = data.draw(st.integers(1, 10))
    ell = data.draw(st.one_of(st.none(), st.floats(0, 50)))
    inst = Instance(pts, kap, m, ell, "x", data.draw(st.one_of(st.none(), st.integers(0, 2**62))))
    assert loads(dumps(inst)) == inst


def test_json_keys():
    d = json.loads(dumps(generate(3, 2, GeneratorConfig(seed=0))))
    assert set(d) == {"name", "n", "m", "ell", "points", "kappa", "seed"}
    assert d["ell"] is None


def _doc(**over):
    d = {"name": "t", "n": 2, "m": 2, "ell": None, "points": [[0, 0], [1, 1]], "kappa": [1, 1], "seed": None}
    d.update(over)
    return json.dumps(d)


@pytest.mark.parametrize("over,field", [
    ({"kappa": [1]}, "kappa"),
    ({"kappa": [1, 0]}, "kappa"),
    ({"m": 0}, "'m'"),
    ({"n": 3}, "'n'"),
    ({"points": [[0, 0], [1]]}, "points"),
])
def test_validation_errors_name_field(over, field):
    with pytest.raises(InstanceError, match=field):
        loads(_doc(**over))


def test_malformed_json():
    with pytest.raises(InstanceError):
        loads("{not json")


def test_feasibility_flag():
    assert Instance([(0, 0)], [3], 3).gmc_feasible
    assert not Instance([(0, 0)], [3], 2).gmc_feasible
