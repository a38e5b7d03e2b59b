# relay-kit/tests/test_config.py

import pytest

from relay_kit.contracts.config import RelayKitSettings, load_settings
from relay_kit.contracts.errors import (
    CertificateError,
    NetworkValidationError,
    PreconditionError,
    RelayKitError,
    SearchLimitError,
)


def test_defaults():
    settings = load_settings(environ={})
    assert settings == RelayKitSettings()
    assert settings.max_senders == 12
    assert settings.max_path_nodes == 20
    assert settings.default_seed == 0
    assert settings.log_level == "WARNING"


def test_file_then_environment(tmp_path):
    path = tmp_path / "relay-kit.yaml"
    path.write_text("max_senders: 4\ndefault_seed: 9\nlog_format: json\n", encoding="utf-8")
    settings = load_settings(path, environ={})
    assert (settings.max_senders, settings.default_seed, settings.log_format) == (4, 9, "json")

    settings = load_settings(path, environ={"RELAY_KIT_SEED": "11", "RELAY_KIT_LOG_LEVEL": "debug"})
    assert settings.default_seed == 11
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize(
    "text",
    [
        "unknown_knob: 1\n",
        "oracle_walk_cap: 10\n",
        "max_senders: 0\n",
        "- a list\n",
        "log_level: LOUD\n",
    ],
)
def test_invalid_files(tmp_path, text):
    path = tmp_path / "relay-kit.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(PreconditionError):
        load_settings(path, environ={})


def test_unreadable_file(tmp_path):
    with pytest.raises(PreconditionError, match="Cannot read"):
        load_settings(tmp_path / "missing.yaml", environ={})


def test_invalid_environment_seed():
    with pytest.raises(PreconditionError):
        load_settings(environ={"RELAY_KIT_SEED": "minus-one"})


def test_error_hierarchy():
    assert issubclass(NetworkValidationError, ValueError)
    assert issubclass(PreconditionError, ValueError)
    assert issubclass(SearchLimitError, RuntimeError)
    assert issubclass(CertificateError, AssertionError)
    for error in (NetworkValidationError, PreconditionError, SearchLimitError, CertificateError):
        assert issubclass(error, RelayKitError)
