"""Bundled example files (TBoxes ``*.tbx`` and models ``*.mdl``)."""
from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import List, Union

from .models import Interpretation, parse_model
from .parser import parse_tbox
from .syntax import TBox


def names() -> List[str]:
    root = resources.files("mualcq") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith((".tbx", ".mdl")))


def read(name: str) -> str:
    path = resources.files("mualcq") / "corpus" / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled file named {name}")
    return path.read_text(encoding="utf-8")


def resolve(path: Union[str, Path]) -> str:
    """Text of ``path`` if it exists, else of the bundled file with that name."""
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    return read(p.name)


def tbox(name: str) -> TBox:
    return parse_tbox(read(name))


def model(name: str) -> Interpretation:
    return parse_model(read(name))
