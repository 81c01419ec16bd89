from pathlib import Path

import pytest

import emodeng

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"


@pytest.fixture(scope="module")
def pipe():
    return emodeng.Pipeline()


def test_version():
    assert emodeng.__version__ == "0.1.0"


def test_normalize_chars():
    assert emodeng.normalize_chars("vnder the ſame &c.") == "under the same etc."


def test_normalize(pipe):
    assert pipe.normalize("they doe still remain in their kingdomes") == "they still remain in their kingdoms"


@pytest.mark.skipif(not (FIXTURES / "passage.txt").exists(), reason="source fixtures absent")
def test_golden_passage(pipe):
    text = (FIXTURES / "passage.txt").read_text(encoding="utf-8")
    assert pipe.normalize(text) == (FIXTURES / "passage.modern.txt").read_text(encoding="utf-8")


def test_transcribe(pipe):
    r = pipe.transcribe("The encreasing of their governours was not inferiour to the rest.\n", "t8")
    assert r["output"] == "The increasing of their governors was not inferior to the rest.\n"
    assert len(r["candidates"]) == 6
    assert r["report"]["unknown_distinct"] == 3
    assert all(a["doc"] == "t8" for a in r["annotations"])


def test_data_versions(pipe):
    v = pipe.data_versions()
    assert v["xvii.dic"] == "1"


def test_canonical_entry():
    assert emodeng.canonical_entry("fixt,fix,V+Tense=PP+EN=fix") == "fixt,fix,V+Tense=PP+EN=fix"
    with pytest.raises(emodeng.ParseError):
        emodeng.canonical_entry("bad")


def test_missing_config():
    with pytest.raises(emodeng.ConfigError):
        emodeng.Pipeline(config="/nonexistent/emodeng.toml")
