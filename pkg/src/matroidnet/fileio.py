"""Matroid files, shipped data and its checksum manifest.

A matroid file is the matrix text format followed by an optional line
``labels l1 l2 ...`` naming the columns; without it columns are 1..cols.
"""
from __future__ import annotations

import hashlib
from importlib import resources

from .field import Matrix
from .matroid import VectorMatroid

MANIFEST = "MANIFEST.sha256"


def read_matroid(text: str) -> VectorMatroid:
    rep = Matrix.from_text(text)
    labels = None
    for raw in text.splitlines():
        tok = raw.split("#", 1)[0].split()
        if tok and tok[0] == "labels":
            labels = [int(t) if t.lstrip("-").isdigit() else t for t in tok[1:]]
    return VectorMatroid(rep, labels)


def write_matroid(m: VectorMatroid) -> str:
    text = m.rep.to_text()
    if list(m.ground) != list(range(1, m.rep.cols + 1)):
        text += "labels " + " ".join(str(x) for x in m.ground) + "\n"
    return text


def _data_dir():
    return resources.files("matroidnet").joinpath("data")


def data_text(name: str) -> str:
    return _data_dir().joinpath(name).read_text()


def data_files() -> list[str]:
    return sorted(p.name for p in _data_dir().iterdir()
                  if p.is_file() and p.name != MANIFEST and not p.name.startswith("."))


def _digest(name: str) -> str:
    return hashlib.sha256(_data_dir().joinpath(name).read_bytes()).hexdigest()


def read_manifest() -> dict:
    out = {}
    for raw in data_text(MANIFEST).splitlines():
        tok = raw.split()
        if len(tok) == 2:
            out[tok[1]] = tok[0]
    return out


def manifest_text() -> str:
    """Checksum lines for the current data files (sha256sum format)."""
    return "".join(f"{_digest(n)}  {n}\n" for n in data_files())


def verify_manifest() -> list[str]:
    """Problems found: changed, missing or unlisted data files."""
    want = read_manifest()
    have = set(data_files())
    bad = [f"missing {n}" for n in sorted(set(want) - have)]
    bad += [f"unlisted {n}" for n in sorted(have - set(want))]
    bad += [f"changed {n}" for n in sorted(have & set(want)) if _digest(n) != want[n]]
    return bad


def read_sinks(text: str) -> dict:
    """``sink f1 f2 ...`` lines into {sink: [0-based forwarding indices]}."""
    out = {}
    for raw in text.splitlines():
        tok = raw.split("#", 1)[0].split()
        if tok:
            out[tok[0]] = [int(t) - 1 for t in tok[1:]]
    return out
