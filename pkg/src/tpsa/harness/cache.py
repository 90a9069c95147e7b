"""Content-addressed on-disk cache of ideal lattices."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from ..ideals import lattice, seed_lattice
from ..ringcore import IdealSet, enumerate_ideals

FORMAT = 1


def default_cache_dir() -> Path:
    base = os.environ.get("TPSA_CACHE_DIR")
    if base:
        return Path(base)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "tpsa"


class LatticeCache:
    """Ideal lattices keyed by ``sha256(fixture canonical form | operation)``.

    With ``enabled=False`` every lookup is a cold computation and nothing is
    written; ``hits``/``misses`` count lookups for the cache-soundness test.
    """

    def __init__(self, directory=None, enabled: bool = True):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(fixture_digest: str, operation: str) -> str:
        return hashlib.sha256(f"{fixture_digest}|{operation}".encode()).hexdigest()

    def path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def load(self, ring, key: str):
        p = self.path(key)
        if not p.exists():
            return None
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("format") != FORMAT or data.get("ring_size") != ring.cardinality:
            return None
        return [IdealSet(ring, int(h, 16)) for h in data["ideals"]]

    def store(self, ring, key: str, ideals, operation: str) -> None:
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        data = {"format": FORMAT, "operation": operation, "ring_size": ring.cardinality,
                "ideals": [format(I.bits, "x") for I in ideals]}
        tmp = p.with_suffix(".tmp")
        tmp.write_text(json.dumps(data))
        tmp.replace(p)

    def lattice(self, ring, fixture_digest: str, operation: str):
        """Ideal lattice of ``ring``; also installed as the in-memory lattice."""
        if not self.enabled:
            self.misses += 1
            ideals = enumerate_ideals(ring)
            seed_lattice(ring, ideals)
            return ideals
        key = self.key(fixture_digest, operation)
        ideals = self.load(ring, key)
        if ideals is None:
            self.misses += 1
            ideals = lattice(ring)
            self.store(ring, key, ideals, operation)
        else:
            self.hits += 1
        seed_lattice(ring, ideals)
        return ideals
