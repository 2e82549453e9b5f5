"""Configuration validation, INI round-tripping, and sweep enumeration."""

import pytest

from manetsim.aomdv import AomdvConfig
from manetsim.config import (
    ConfigError,
    ScenarioConfig,
    SweepSpec,
    from_ini,
    load_config,
    to_ini,
)
from manetsim.radio import RadioConfig
from manetsim.traffic import Flow


def test_defaults_describe_the_reference_scenario():
    cfg = ScenarioConfig()
    assert cfg.model == "rwp"
    assert cfg.n_nodes == 50
    assert cfg.speed == 10.0
    assert (cfg.area_width, cfg.area_height) == (1000.0, 1000.0)
    assert cfg.horizon == 1000.0
    assert cfg.radio.range_m == 250.0
    assert cfg.radio.bandwidth_bps == 2e6
    assert cfg.routing.k_replies == 3
    assert cfg.n_flows == 10
    assert cfg.packet_size == 512


def test_validation_reports_every_problem_with_field_prefixes():
    with pytest.raises(ConfigError) as err:
        ScenarioConfig(model="teleport", n_nodes=0, speed=-2.0, horizon=0.0)
    msg = str(err.value)
    for needle in ("model:", "n_nodes:", "speed:", "horizon:"):
        assert needle in msg


def test_flow_count_is_checked_against_the_pair_budget():
    with pytest.raises(ConfigError, match="n_flows"):
        ScenarioConfig(n_nodes=3, n_flows=7)
    ScenarioConfig(n_nodes=3, n_flows=6)  # exactly the budget is fine


def test_empty_send_window_is_rejected():
    with pytest.raises(ConfigError, match="traffic_stop"):
        ScenarioConfig(traffic_start=50.0, traffic_stop=50.0)
    # zero flows: the window is irrelevant
    ScenarioConfig(traffic_start=50.0, traffic_stop=50.0, n_flows=0)
    # explicit flows carry their own windows
    ScenarioConfig(
        traffic_start=50.0,
        traffic_stop=50.0,
        flows=(Flow(0, 1, 4.0, 512, 1.0, 2.0),),
    )


def test_stop_time_defaults_to_ten_seconds_before_the_horizon():
    assert ScenarioConfig(horizon=200.0).stop_time == 190.0
    assert ScenarioConfig(horizon=200.0, traffic_stop=55.0).stop_time == 55.0


def test_ini_round_trip_preserves_every_scalar_field():
    cfg = ScenarioConfig(
        model="prw",
        n_nodes=17,
        speed=23.5,
        seed=99,
        area_width=640.0,
        area_height=480.0,
        horizon=321.0,
        pause=2.5,
        walk_step=0.75,
        walk_matrix=((0.2, 0.4, 0.4), (0.1, 0.8, 0.1), (0.3, 0.3, 0.4)),
        radio=RadioConfig(
            range_m=175.0,
            bandwidth_bps=1e6,
            queue_capacity=20,
            jitter_max=0.002,
            loss_prob=0.05,
        ),
        routing=AomdvConfig(
            k_replies=2,
            max_paths=2,
            route_lifetime=7.5,
            discovery_timeout=1.5,
            rreq_retries=1,
            seen_window=12.0,
            ttl=9,
            intermediate_rrep=False,
            control_size_bytes=48,
        ),
        n_flows=5,
        rate_pps=2.0,
        packet_size=256,
        traffic_start=4.0,
        traffic_stop=300.0,
    )
    assert from_ini(to_ini(cfg)) == cfg


def test_omitted_stop_round_trips_as_none():
    cfg = ScenarioConfig(horizon=50.0)
    text = to_ini(cfg)
    assert "stop" not in [
        line.split("=")[0].strip() for line in text.splitlines() if "=" in line
    ]
    assert from_ini(text).traffic_stop is None


def test_unknown_sections_and_keys_are_errors():
    with pytest.raises(ConfigError, match=r"unknown section \[radioo\]"):
        from_ini("[radioo]\nrange_m = 100\n")
    with pytest.raises(ConfigError, match="unknown key 'jitter'"):
        from_ini("[radio]\njitter = 0.001\n")


def test_boolean_keys_accept_the_usual_spellings():
    for raw, want in (("on", True), ("1", True), ("TRUE", True),
                      ("off", False), ("0", False), ("no", False)):
        cfg = from_ini(f"[routing]\nintermediate_rrep = {raw}\n")
        assert cfg.routing.intermediate_rrep is want
    with pytest.raises(ConfigError, match="not a boolean"):
        from_ini("[routing]\nintermediate_rrep = maybe\n")


def test_partial_overlay_keeps_the_base_values():
    base = ScenarioConfig(speed=33.0, n_nodes=7, n_flows=3, horizon=80.0)
    cfg = from_ini("[scenario]\nhorizon = 120.0\n", base)
    assert cfg.horizon == 120.0
    assert cfg.speed == 33.0
    assert cfg.n_nodes == 7
    assert cfg.n_flows == 3


def test_unparseable_values_name_the_key():
    with pytest.raises(ConfigError, match="nodes"):
        from_ini("[scenario]\nnodes = many\n")
    with pytest.raises(ConfigError, match="INI syntax"):
        from_ini("flows = 3\n")  # key before any section header


def test_semantic_errors_surface_after_parsing():
    with pytest.raises(ConfigError, match="horizon"):
        from_ini("[scenario]\nhorizon = -5\n")
    with pytest.raises(ConfigError, match="k_replies"):
        from_ini("[routing]\nk_replies = 0\n")


def test_load_config_reads_a_file(tmp_path):
    text = "[scenario]\nmodel = rd\nnodes = 12\n[traffic]\nflows = 4\n"
    path = tmp_path / "scenario.ini"
    path.write_text(text)
    cfg = load_config(str(path))
    assert cfg == from_ini(text)
    assert (cfg.model, cfg.n_nodes, cfg.n_flows) == ("rd", 12, 4)


# -- sweeps ----------------------------------------------------------------------


def test_default_sweep_covers_the_full_grid():
    spec = SweepSpec()
    assert spec.models == ("rwp", "rd", "prw")
    assert spec.node_counts == (10, 20, 30, 40, 50, 60, 70, 80, 90, 100)
    assert spec.speeds == (10.0, 20.0, 30.0, 40.0)
    assert spec.seeds_per_point == 10
    assert spec.n_runs == 1200


def test_configs_iterate_in_canonical_order_with_derived_seeds():
    base = ScenarioConfig(horizon=60.0, n_flows=5)
    spec = SweepSpec(
        base=base,
        models=("rd", "rwp"),
        node_counts=(4, 6),
        speeds=(2.0,),
        seeds_per_point=2,
        master_seed=10,
    )
    got = [(c.model, c.n_nodes, c.speed, c.seed) for c in spec.configs()]
    assert got == [
        ("rd", 4, 2.0, 10), ("rd", 4, 2.0, 11),
        ("rd", 6, 2.0, 10), ("rd", 6, 2.0, 11),
        ("rwp", 4, 2.0, 10), ("rwp", 4, 2.0, 11),
        ("rwp", 6, 2.0, 10), ("rwp", 6, 2.0, 11),
    ]
    assert spec.n_runs == len(got)
    assert all(c.horizon == 60.0 and c.n_flows == 5 for c in spec.configs())


def test_sweep_validation_lists_every_problem():
    with pytest.raises(ConfigError) as err:
        SweepSpec(models=("warp",), node_counts=(), speeds=(0.0,), seeds_per_point=0)
    msg = str(err.value)
    for needle in ("models:", "node_counts:", "speeds:", "seeds_per_point:"):
        assert needle in msg
