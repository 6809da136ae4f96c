from __future__ import annotations

import logging
from pathlib import Path

import orjson
import pytest

from rebac_miner.application.dtos.documents import PolicyInfo
from rebac_miner.core.config import Settings
from rebac_miner.core.logging import PACKAGE_LOGGER, configure_logging
from rebac_miner.domain.entities import AtomicConstraint, make_rule
from rebac_miner.domain.enums import ConstraintOperator
from rebac_miner.infrastructure.persistence import FileBundleRepository
from rebac_miner.interfaces.cli.main import EXIT_OK, EXIT_VALIDATION, main

SAME_DEPT = AtomicConstraint(("dept",), ConstraintOperator.equal, ("dept",))
SAME_DEPT_RULE = make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT})


@pytest.fixture
def settings() -> Settings:
    return Settings(LOG_LEVEL="WARNING", REBAC_MINER_MAX_WORKERS=1)


@pytest.fixture
def bundle(tmp_path, dept_acl) -> Path:
    directory = tmp_path / "dept"
    FileBundleRepository().save(
        directory,
        info=PolicyInfo(name="dept"),
        acl=dept_acl,
        rules=frozenset({SAME_DEPT_RULE}),
        reference_rules=frozenset({SAME_DEPT_RULE}),
    )
    return directory


def run(settings: Settings, *argv: str) -> int:
    return main(list(argv), settings=settings)


def test_generate_writes_a_complete_bundle(tmp_path, settings, capsys) -> None:
    out = tmp_path / "hc"

    code = run(settings, "generate", "--policy", "healthcare", "--n", "1", "--out", str(out))

    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == str(out)
    for name in ("policy.json", "class_model.json", "object_model.json", "acl.json"):
        assert (out / name).is_file()
    assert (out / "rules.txt").read_text().count("rule(") == 9
    info = orjson.loads((out / "policy.json").read_bytes())
    assert info["name"] == "healthcare"


def test_mine_then_compare(tmp_path, settings, bundle, capsys) -> None:
    mined = tmp_path / "mined.txt"

    code = run(settings, "mine", "--algorithm", "greedy", "--in", str(bundle), "--out", str(mined))

    assert code == EXIT_OK
    assert mined.read_text() == f"{SAME_DEPT_RULE}\n"
    metadata = orjson.loads((tmp_path / "mined.txt.run.json").read_bytes())
    assert metadata["consistent"] is True
    assert metadata["rule_count"] == 1
    assert metadata["algorithm"] == "greedy"
    capsys.readouterr()

    report = tmp_path / "report.json"
    code = run(
        settings, "compare", "--mined", str(mined), "--bundle", str(bundle), "--out", str(report)
    )

    assert code == EXIT_OK
    assert "SynSim   1.0000" in capsys.readouterr().out
    assert orjson.loads(report.read_bytes())["rsem_sim"] == 1.0


def test_mine_seed_overrides_params_file(tmp_path, settings, bundle) -> None:
    params = tmp_path / "params.json"
    params.write_bytes(
        orjson.dumps(
            {
                "evolutionary": {
                    "pop_size": 8,
                    "n_generations_search": 15,
                    "n_tournament": 3,
                    "n_generations_improve": 10,
                    "seed": 3,
                }
            }
        )
    )
    mined = tmp_path / "evo.txt"

    code = run(
        settings,
        "mine",
        "--algorithm",
        "evolutionary",
        "--in",
        str(bundle),
        "--params",
        str(params),
        "--seed",
        "11",
        "--out",
        str(mined),
    )

    assert code == EXIT_OK
    metadata = orjson.loads((tmp_path / "evo.txt.run.json").read_bytes())
    assert metadata["seed"] == 11
    assert metadata["consistent"] is True
    assert set(metadata["phase_seconds"]) == {"search", "improve"}


@pytest.mark.parametrize(
    ("subject", "resource", "label"), [("u1", "doc1", "permit"), ("u1", "doc2", "deny")]
)
def test_evaluate(settings, bundle, capsys, subject, resource, label) -> None:
    code = run(
        settings,
        "evaluate",
        "--bundle",
        str(bundle),
        "--subject",
        subject,
        "--resource",
        resource,
        "--action",
        "read",
        "--explain",
    )

    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == label
    assert lines[1:] == ([f"  {SAME_DEPT_RULE}"] if label == "permit" else [])


def test_evaluate_unknown_object_is_a_validation_error(settings, bundle) -> None:
    code = run(
        settings,
        "evaluate",
        "--bundle",
        str(bundle),
        "--subject",
        "ghost",
        "--resource",
        "doc1",
        "--action",
        "read",
    )

    assert code == EXIT_VALIDATION


def test_stats_json(settings, bundle, capsys) -> None:
    code = run(settings, "stats", "--bundle", str(bundle), str(bundle), "--json")

    row = orjson.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert row["rules"] == 1
    assert row["constraints_per_rule"] == 1
    assert row["objects"] == 6
    assert row["fields_per_object"] == pytest.approx(10 / 6)
    assert row["bundles"] == 2


def test_stats_table(settings, bundle, capsys) -> None:
    assert run(settings, "stats", "--bundle", str(bundle)) == EXIT_OK
    assert capsys.readouterr().out.startswith("#rules")


def test_missing_bundle_exits_with_validation_code(tmp_path, settings) -> None:
    code = run(
        settings,
        "mine",
        "--algorithm",
        "greedy",
        "--in",
        str(tmp_path / "missing"),
        "--out",
        str(tmp_path / "out.txt"),
    )

    assert code == EXIT_VALIDATION
    assert not (tmp_path / "out.txt").exists()


def test_malformed_rules_exit_with_validation_code(tmp_path, settings, bundle) -> None:
    mined = tmp_path / "broken.txt"
    mined.write_text("rule(User; true; Doc\n")

    code = run(settings, "compare", "--mined", str(mined), "--bundle", str(bundle))

    assert code == EXIT_VALIDATION


def test_errors_are_logged_to_stderr_only(tmp_path, settings, capsys) -> None:
    missing = str(tmp_path / "missing")
    code = run(settings, "compare", "--mined", missing, "--bundle", missing)

    captured = capsys.readouterr()
    assert code == EXIT_VALIDATION
    assert captured.out == ""
    assert captured.err.startswith("ERROR rebac_miner.")
    assert logging.getLogger(PACKAGE_LOGGER).level == logging.WARNING


def test_verbose_forces_debug_level(settings) -> None:
    configure_logging(settings.log_level, verbose=True)
    assert logging.getLogger(PACKAGE_LOGGER).level == logging.DEBUG

    configure_logging("error")
    assert logging.getLogger(PACKAGE_LOGGER).level == logging.ERROR


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--policy", "workforce", "--out", "x"],
        ["generate", "--policy", "emr", "--n", "0", "--out", "x"],
        ["mine", "--algorithm", "greedy"],
        [],
    ],
)
def test_bad_arguments_exit_with_validation_code(settings, argv) -> None:
    with pytest.raises(SystemExit) as excinfo:
        run(settings, *argv)

    assert excinfo.value.code == EXIT_VALIDATION
