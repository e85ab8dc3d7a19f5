"""``key = value`` configuration files for default caps, limits and bound constants."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from sunitcount.bounds import BoundConstants
from sunitcount.counting import DEFAULT_FAMILY_LIMIT, DEFAULT_SUBSET_LIMIT
from sunitcount.errors import DomainError

ENV_VAR = "SUNITCOUNT_CONFIG"


@dataclass(frozen=True)
class Settings:
    height_cap: int = 10**6
    exponent_cap: int | None = None
    subset_limit: int = DEFAULT_SUBSET_LIMIT
    family_limit: int = DEFAULT_FAMILY_LIMIT
    constants: BoundConstants = field(default_factory=BoundConstants)


def read_key_values(path: str | Path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise DomainError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def _int(text: str) -> int:
    # allow 10**6 and 1e6 style spellings for caps
    text = text.replace("_", "")
    if "**" in text:
        base, exp = text.split("**")
        return int(base) ** int(exp)
    if "e" in text.lower():
        mant, exp = text.lower().split("e")
        return int(mant) * 10 ** int(exp)
    return int(text)


def load_settings(path: str | Path | None = None) -> Settings:
    """Read settings from ``path``, else from $SUNITCOUNT_CONFIG, else defaults."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return Settings()
    values = read_key_values(path)
    kw = {}
    for key in ("height_cap", "exponent_cap", "subset_limit", "family_limit"):
        if key in values:
            kw[key] = _int(values[key])
    return Settings(**kw, constants=BoundConstants.from_mapping(values))
