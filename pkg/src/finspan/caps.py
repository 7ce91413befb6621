"""Size caps for constructions that can blow up combinatorially.

Every cap is a hard limit: exceeding it raises :class:`~finspan.errors.CapacityError`
instead of truncating. Defaults can be overridden per call or through
``FINSPAN_CAP_*`` environment variables.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import CapacityError

ENV_PREFIX = "FINSPAN_CAP_"


@dataclass(frozen=True)
class Caps:
    objects: int = 64          # groupoid objects
    morphisms: int = 4096      # groupoid morphisms (total)
    points: int = 4096         # points of a single G-set
    sections: int = 100_000    # candidate sections in a dependent product

    @classmethod
    def from_env(cls, environ=None) -> "Caps":
        environ = os.environ if environ is None else environ
        kwargs = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                kwargs[f.name] = int(raw)
        return cls(**kwargs)

    def but(self, **kw) -> "Caps":
        return replace(self, **kw)

    def check(self, cap_name: str, size: int, dimension: str | None = None):
        cap = getattr(self, cap_name)
        if size > cap:
            raise CapacityError(dimension or cap_name, size, cap)


DEFAULT_CAPS = Caps()
_current = DEFAULT_CAPS


def current() -> Caps:
    return _current


def set_current(caps: Caps) -> Caps:
    """Install ``caps`` as the process default; returns the previous value."""
    global _current
    old, _current = _current, caps
    return old
