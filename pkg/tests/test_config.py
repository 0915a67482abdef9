import logging

import pytest

from cantorlab.config_loader import RunConfig, SuiteSizes, load_run_config
from cantorlab.errors import MalformedInputError, UsageError
from cantorlab.logging_utils import LOG_FORMAT, configure_logging, parse_level
from cantorlab.paths import default_config_path


def test_shipped_defaults_match_the_built_in_ones():
    assert default_config_path().exists()
    assert load_run_config() == RunConfig()


def test_yaml_values_and_overrides(tmp_path):
    path = tmp_path / "run.yml"
    path.write_text("run:\n  depth: 3\n  seed: 7\nsuites:\n  metric_samples: 10\n", encoding="utf-8")
    config = load_run_config(path, {"depth": 5, "budget": None})
    assert (config.depth, config.seed, config.budget) == (5, 7, 64)
    assert config.suites == SuiteSizes(metric_samples=10)
    assert config.effective_lookahead == 10


def test_lookahead_override():
    assert RunConfig(depth=3, lookahead=1).effective_lookahead == 1
    assert RunConfig(depth=3).as_dict()["effective_lookahead"] == 6


@pytest.mark.parametrize(
    "text",
    ["run:\n  colour: blue\n", "suites:\n  bogus_samples: 3\n", "run:\n  depth: 0\n", "run:\n  format: xml\n"],
)
def test_bad_config_values_are_usage_errors(tmp_path, text):
    path = tmp_path / "bad.yml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(UsageError):
        load_run_config(path)


def test_malformed_yaml(tmp_path):
    path = tmp_path / "broken.yml"
    path.write_text("run: [depth: 3\n", encoding="utf-8")
    with pytest.raises(MalformedInputError):
        load_run_config(path)
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(MalformedInputError):
        load_run_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(UsageError):
        load_run_config(tmp_path / "nope.yml")


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(budget=-1)
    with pytest.raises(UsageError):
        RunConfig(lookahead=-2)
    with pytest.raises(UsageError):
        RunConfig(suites=SuiteSizes(kernel_samples=0))


def test_parse_level():
    assert parse_level("info") == logging.INFO
    assert parse_level(logging.DEBUG) == logging.DEBUG
    with pytest.raises(UsageError):
        parse_level("chatty")


def test_configure_logging_writes_the_log_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    configure_logging("INFO", log_file)
    logging.getLogger("cantorlab.test").info("hello %s", "there")
    for handler in logging.getLogger().handlers:
        handler.flush()
    text = log_file.read_text(encoding="utf-8")
    assert "[INFO] cantorlab.test - hello there" in text
    assert LOG_FORMAT.startswith("%(asctime)s")
    configure_logging("WARNING")
