import json

import pytest
from click.testing import CliRunner

from spinsum.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_validate_algebra_builtin(runner):
    res = runner.invoke(main, ["validate-algebra", "--builtin", "clifford"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["all"] is True


def test_validate_algebra_requires_one_source(runner):
    res = runner.invoke(main, ["validate-algebra"])
    assert res.exit_code == 2


def test_amplitude_with_oracle(runner):
    res = runner.invoke(main, ["amplitude", "--algebra", "clifford",
                               "--surface", "cylinder", "--spin", "NS+",
                               "--oracle"])
    assert res.exit_code == 0
    assert json.loads(res.output)["oracle"] == "equal"


def test_amplitude_torus_raw_scalar(runner):
    res = runner.invoke(main, ["amplitude", "--algebra", "clifford",
                               "--surface", "torus", "--spin", "R+",
                               "--raw"])
    assert res.exit_code == 0
    assert json.loads(res.output)["amplitude"]["scalar"] == "-1"


def test_amplitude_rejects_bad_selector(runner):
    res = runner.invoke(main, ["amplitude", "--algebra", "clifford",
                               "--surface", "cylinder", "--spin", "X+"])
    assert res.exit_code == 2


def test_classify_torus(runner):
    res = runner.invoke(main, ["classify", "--surface", "torus"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["count"] == 4
    assert sorted(c["arf"] for c in report["classes"]) == [-1, 1, 1, 1]


def test_classify_sphere(runner):
    res = runner.invoke(main, ["classify", "--surface", "sphere"])
    report = json.loads(res.output)
    assert report["count"] == 1
    assert report["classes"][0]["arf"] == 1


def test_pachner_fuzz_passes(runner):
    res = runner.invoke(main, ["pachner-fuzz", "--algebra", "clifford",
                               "--surface", "cylinder", "--spin", "NS+",
                               "--seed", "3", "--moves", "40"])
    assert res.exit_code == 0
    assert json.loads(res.output)["result"] == "pass"


def test_sign_scan_torus(runner):
    res = runner.invoke(main, ["sign-scan", "--algebra", "clifford",
                               "--surface", "torus"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["equal"] is True
    assert report["weighted_sum"] == "1"
    assert sorted(report["class_amplitudes"]) == ["-1", "1", "1", "1"]


def test_deterministic_output(runner):
    args = ["pachner-fuzz", "--algebra", "clifford", "--surface", "cylinder",
            "--spin", "R-", "--seed", "9", "--moves", "30"]
    out1 = runner.invoke(main, args).output
    out2 = runner.invoke(main, args).output
    assert out1 == out2
