"""Versioned catalog of named test bodies."""

import json
from importlib import resources

from ..bodies import Body, Ellipsoid, standard_body
from ..errors import UnknownName


class BodyCatalog:
    """Named body generators; bodies are built (and validated) on first use."""

    def __init__(self, entries: dict, version: int = 1):
        self.entries = dict(entries)
        self.version = version
        self._cache = {}

    @classmethod
    def load(cls, path=None):
        if path is None:
            text = resources.files(__package__).joinpath("catalog.json").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        data = json.loads(text)
        return cls(data["bodies"], data.get("version", 1))

    def ids(self, n=None):
        return sorted(i for i, e in self.entries.items() if n is None or e["n"] == n)

    def __contains__(self, name):
        return name in self.entries

    def get(self, name) -> Body:
        if name not in self.entries:
            raise UnknownName(f"no body {name!r} in the catalog")
        if name not in self._cache:
            e = self.entries[name]
            self._cache[name] = standard_body(e["kind"], e["n"], **e.get("params", {}))
        return self._cache[name]

    def is_ellipsoid(self, name):
        return isinstance(self.get(name), Ellipsoid)
