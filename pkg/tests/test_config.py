import pytest

from lfc_egbo.config import apply_override, load_settings, parse_overrides
from lfc_egbo.optimizers import ConfigError


def write(tmp_path, text):
    p = tmp_path / "cfg.toml"
    p.write_text(text)
    return p


def test_defaults_use_full_profile():
    s = load_settings()
    assert s.profile == "full"
    assert (s.optimizer.population, s.optimizer.max_iterations, s.runs_per_cell) == (100, 500, 30)
    assert s.plant.coefficient_source == "appendix_c"
    assert s.sim.t_final == 40.0
    assert s.plan_cases == (1, 2, 3, 4, 5)


def test_desk_profile_budget():
    s = load_settings(profile="desk")
    assert (s.optimizer.population, s.optimizer.max_iterations, s.runs_per_cell) == (50, 100, 5)


def test_explicit_keys_beat_profile(tmp_path):
    p = write(tmp_path, "[optimizers]\npopulation = 20\n[plan]\nprofile = 'desk'\nruns_per_cell = 3\n")
    s = load_settings(p)
    assert (s.optimizer.population, s.optimizer.max_iterations, s.runs_per_cell) == (20, 100, 3)


def test_overrides_beat_file(tmp_path):
    p = write(tmp_path, "[sim]\nt_final = 30.0\n")
    s = load_settings(p, overrides=["sim.t_final=20", "plan.algorithms=['EGBO', 'gbo']"])
    assert s.sim.t_final == 20
    assert s.algorithms == ("egbo", "gbo")


def test_case_overrides_and_additions(tmp_path):
    p = write(tmp_path, "[cases.case-1]\nw1 = 0.0\n[cases.case-9]\nw1 = 0.1\nw2 = 0.2\n")
    s = load_settings(p)
    assert s.case("case-1").w1 == 0.0 and s.case(1).w2 == 0.15
    assert s.case("case-9").w2 == 0.2


def test_nested_optimizer_parameters():
    s = load_settings(overrides=["optimizers.egbo.lc0=0.3", "optimizers.pso.c1=1.5"])
    assert s.optimizer.egbo.lc0 == 0.3
    assert s.optimizer.pso.c1 == 1.5


def test_plan_round_trip():
    s = load_settings(profile="desk", overrides=["plan.cases=[1, 5]", "plan.base_seed=10"])
    plan = s.plan()
    assert [c.id for c in plan.cases] == [1, 5]
    assert plan.seed(0) == 10
    assert plan.runs_per_cell == 5


@pytest.mark.parametrize("text", [
    "[nonsense]\nx = 1\n",
    "[sim]\nstep = 0.1\n",
    "[plant]\nr9 = 1\n",
    "[optimizers.gwo]\nalpha = 1\n",
    "[plan]\nalgorithms = ['xyz']\n",
    "[plan]\nprofile = 'huge'\n",
    "[cases.first]\nw1 = 0.1\n",
    "[sim]\ndt = -1.0\n",
    "[search_space]\nlower = [0, 0]\nupper = [1, 1]\n",
    "not = [valid toml",
])
def test_bad_configs_raise(tmp_path, text):
    with pytest.raises(ConfigError):
        load_settings(write(tmp_path, text))


def test_missing_file_raises(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "absent.toml")


def test_unknown_case_lookup():
    with pytest.raises(ConfigError):
        load_settings().case("case-42")


def test_parse_overrides():
    tree = parse_overrides(["a.b=1", "a.c=x", "d=[1,2]"])
    assert tree == {"a": {"b": 1, "c": "x"}, "d": [1, 2]}
    with pytest.raises(ConfigError):
        parse_overrides(["novalue"])
    t = {"a": 1}
    with pytest.raises(ConfigError):
        apply_override(t, "a.b", 2)
