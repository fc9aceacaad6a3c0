"""Per-diagram JSON cache of group tables and computed cohomology."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

CACHE_VERSION = 1


def default_dir():
    return Path(os.environ.get("DYNKINCOH_CACHE", Path.home() / ".cache" / "dynkincoh"))


def diagram_hash(D):
    return hashlib.sha256(D.key.encode()).hexdigest()[:20]


class Cache:
    def __init__(self, directory=None, enabled=True):
        self.dir = Path(directory) if directory else default_dir()
        self.enabled = enabled

    def path(self, D):
        return self.dir / f"{diagram_hash(D)}.json"

    def load(self, D):
        if not self.enabled:
            return None
        p = self.path(D)
        try:
            data = json.loads(p.read_text())
        except (OSError, ValueError):
            return None
        if data.get("version") != CACHE_VERSION or data.get("diagram_hash") != diagram_hash(D):
            return None
        return data

    def store(self, D, G=None, results=None):
        if not self.enabled:
            return
        data = self.load(D) or {"version": CACHE_VERSION, "diagram_hash": diagram_hash(D),
                                "diagram": json.loads(D.key), "name": D.name}
        if G is not None:
            data["roots"] = G.rs.coords.tolist() if hasattr(G.rs, "coords") else None
            data["generators"] = G.rs.gen_perm.tolist()
            whole = G.whole
            data["classes"] = [
                {"rep_word": G.word(c.representative), "size": c.size,
                 "centralizer_order": c.centralizer_order, "epsilon_trivial": c.epsilon_trivial,
                 "label": str(c.label) if c.label is not None else None}
                for c in whole.classes]
        if results:
            data.setdefault("results", {}).update(results)
        self.dir.mkdir(parents=True, exist_ok=True)
        tmp = self.path(D).with_suffix(".tmp")
        tmp.write_text(json.dumps(data, sort_keys=True))
        tmp.replace(self.path(D))

    def result(self, D, key):
        data = self.load(D)
        if data is None:
            return None
        return data.get("results", {}).get(key)

    def entries(self):
        if not self.dir.is_dir():
            return []
        out = []
        for p in sorted(self.dir.glob("*.json")):
            try:
                data = json.loads(p.read_text())
            except ValueError:
                continue
            out.append({"file": p.name, "name": data.get("name"), "version": data.get("version"),
                        "results": sorted(data.get("results", {})), "bytes": p.stat().st_size})
        return out

    def clear(self):
        n = 0
        if self.dir.is_dir():
            for p in self.dir.glob("*.json"):
                p.unlink()
                n += 1
        return n
