"""Normalizer from 17th-century to contemporary English."""

import json
from pathlib import Path

from ._emodeng import (
    ConfigError,
    Error,
    ParseError,
    StoreError,
    __version__,
    canonical_entry,
    normalize_chars,
)
from ._emodeng import Pipeline as _Pipeline

__all__ = [
    "ConfigError",
    "Error",
    "ParseError",
    "Pipeline",
    "StoreError",
    "__version__",
    "canonical_entry",
    "data_dir",
    "normalize_chars",
]


def data_dir() -> Path:
    """Seed lexicon and rules shipped with the package."""
    return Path(__file__).resolve().parent / "data"


class Pipeline:
    """Loaded lexicon, morph rules and syntax rules."""

    def __init__(self, config=None, data=None):
        if config is not None:
            self._p = _Pipeline.from_config(Path(config))
        else:
            self._p = _Pipeline.from_data_dir(Path(data) if data is not None else data_dir())

    def normalize(self, text: str) -> str:
        return self._p.normalize(text)

    def transcribe(self, text: str, doc: str = "") -> dict:
        """Output text, standoff annotations, candidates and statistics."""
        return json.loads(self._p.transcribe_json(text, doc))

    def data_versions(self) -> dict:
        return dict(self._p.data_versions())
