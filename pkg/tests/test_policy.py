"""Tests for the policy layer and run configuration"""
import pytest
from pydantic import ValidationError

from src.config import (
    THREADS_ENV,
    RunConfig,
    build_config,
    load_config_file,
    threads_from_env,
)
from src.policy import ConfigPolicy, ConfigViolation


def test_allowed_certifier(policy):
    """Both shipped certifiers pass the allowlist"""
    assert policy.check_certifier_allowed("fp") is True
    assert policy.check_certifier_allowed("heights") is True


def test_blocked_certifier(policy):
    with pytest.raises(ConfigViolation, match="not in allowlist"):
        policy.check_certifier_allowed("descent")


@pytest.mark.parametrize("s,n", [(1, 3), (13, 3), (2, 0), (2, 9)])
def test_construction_ranges(policy, s, n):
    with pytest.raises(ConfigViolation):
        policy.check_construction(s, n)


def test_end_rank_must_be_positive(policy):
    assert policy.check_construction(2, 3, end_rank=2)
    with pytest.raises(ConfigViolation):
        policy.check_construction(2, 3, end_rank=0)


@pytest.mark.parametrize("primes", [[], [3], [11, 15], [2, 11]])
def test_bad_primes(policy, primes):
    with pytest.raises(ConfigViolation):
        policy.check_primes(primes)


def test_good_primes(policy):
    assert policy.check_primes([5, 11, 13, 17])


@pytest.mark.parametrize("tol", ["0", "-1e-8", "0.5", "tiny"])
def test_bad_tolerance(policy, tol):
    with pytest.raises(ConfigViolation):
        policy.check_tolerance(tol)


def test_elliptic_only_for_s2_cubic(policy):
    assert policy.check_elliptic(2, 3)
    with pytest.raises(ConfigViolation, match="s = 2 with deg f = 3"):
        policy.check_elliptic(3, 3)
    with pytest.raises(ConfigViolation):
        policy.check_elliptic(2, 4)


def test_grid_cell_notes(policy):
    assert policy.grid_cell_note(2, 3, 4) is None
    assert policy.grid_cell_note(3, 3, 3) is None
    assert policy.grid_cell_note(3, 2, 4) == "s = 3 exceeds r = 2"
    assert policy.grid_cell_note(2, 4, 3) == "r = 4 exceeds n = 3"


def test_validate_run(policy):
    config = RunConfig(n=2)
    assert policy.validate_run(config, ["fp", "heights"])
    with pytest.raises(ConfigViolation, match="M = 11"):
        policy.validate_run(RunConfig(M=11), ["fp"])
    with pytest.raises(ConfigViolation, match="coefficient vectors"):
        policy.validate_run(RunConfig(M=10, n=5), ["fp"])
    # heights parameters are not checked when only fp runs
    assert policy.validate_run(RunConfig(tol="1"), ["fp"])
    with pytest.raises(ConfigViolation):
        policy.validate_run(RunConfig(tol="1"), ["heights"])


def test_default_config():
    config = RunConfig()
    assert config.f == ["0", "-1", "0", "1"]
    assert config.primes == [11, 13, 17]
    assert config.certifier_names() == ["fp"]
    assert RunConfig(certifier="both").certifier_names() == ["fp", "heights"]


def test_strict_default_depends_on_command():
    config = RunConfig()
    assert config.strict_for("construct")
    assert config.strict_for("grid")
    assert not config.strict_for("certify")
    assert RunConfig(strict=True).strict_for("certify")
    assert not RunConfig(strict=False).strict_for("construct")


def test_coefficients_are_exact():
    assert RunConfig(f="0, -2/4, 0, 1").f == ["0", "-1/2", "0", "1"]
    assert RunConfig(f=[0, -1, 0, 1]).f == ["0", "-1", "0", "1"]
    with pytest.raises(ValidationError):
        RunConfig(f=[0.5, 1])
    with pytest.raises(ValidationError):
        RunConfig(f="1.5,1")
    with pytest.raises(ValidationError):
        RunConfig(t1=2.0)
    assert RunConfig(t1=3).t1 == "3"


def test_unknown_field_is_rejected():
    with pytest.raises(ValidationError):
        RunConfig(colour="red")


def test_points_and_pair():
    config = RunConfig(points=[["25/4", "-35/8"]], dependent_pair=[1, 2])
    assert config.heights_params()["points"] == [["25/4", "-35/8"]]
    assert config.fp_params()["dependent_pair"] == [1, 2]
    with pytest.raises(ValidationError):
        RunConfig(dependent_pair=[1, 2, 3])


def test_grid_polynomial_defaults_to_x_r_minus_x():
    config = RunConfig(grid_f={4: ["1", "0", "0", "0", "1"]})
    assert config.grid_polynomial(3) == ["0", "-1", "0", "1"]
    assert config.grid_polynomial(5) == ["0", "-1", "0", "0", "0", "1"]
    assert config.grid_polynomial(4) == ["1", "0", "0", "0", "1"]


def test_report_dict_leaves_out_plumbing():
    data = RunConfig(out="report.json", threads=3).report_dict()
    assert "out" not in data and "threads" not in data
    assert data["seed"] == 0


def test_threads_from_env():
    assert threads_from_env({}) == 4
    assert threads_from_env({THREADS_ENV: "2"}) == 2
    with pytest.raises(ConfigViolation):
        threads_from_env({THREADS_ENV: "zero"})
    with pytest.raises(ConfigViolation):
        threads_from_env({THREADS_ENV: "0"})


def test_config_file_sections(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        '[construction]\ns = 2\nn = 2\nf = ["0", "-1", "0", "1"]\n\n'
        '[certify]\ncertifier = "both"\nM = 3\nprimes = [11, 13]\n\n'
        '[grid]\ns = [2]\nr = [3]\nn = [3]\n\n'
        '[output]\nformat = "text"\n',
        encoding="utf-8",
    )
    values = load_config_file(str(path))
    assert values["grid_s"] == [2]
    assert values["certifier"] == "both"

    config = build_config(str(path), {"M": 4, "seed": None}, environ={THREADS_ENV: "1"})
    assert config.M == 4
    assert config.seed == 0
    assert config.n == 2
    assert config.threads == 1
    assert config.format == "text"


@pytest.mark.parametrize(
    "text,match",
    [
        ("[extras]\nx = 1\n", "unknown section"),
        ("[certify]\ncolour = 1\n", "unknown key"),
        ("[construction\n", "run.toml"),
    ],
)
def test_bad_config_files(tmp_path, text, match):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigViolation, match=match):
        load_config_file(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigViolation, match="cannot read"):
        load_config_file(str(tmp_path / "absent.toml"))


def test_policy_instances_are_independent():
    first, second = ConfigPolicy(), ConfigPolicy()
    first.allowed_certifiers.discard("fp")
    assert second.check_certifier_allowed("fp")
