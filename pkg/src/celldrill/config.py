"""Run profiles: one TOML file names the country code, the operators
(with market shares and RAT allowlists), the sample-count bounds, and
the top-cell budget. A Spain profile ships with the package."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ingest import MnoConfig
from .ndd import CbsBounds


class ConfigError(Exception):
    pass


@dataclass(slots=True, frozen=True)
class Profile:
    name: str
    mcc: int
    n_c: int
    bounds: CbsBounds
    mnos: tuple[MnoConfig, ...]


def _profile_from_dict(name: str, data: dict) -> Profile:
    try:
        cbs = data.get("cbs", {})
        mnos = tuple(
            MnoConfig(
                mnc=int(m["mnc"]),
                label=str(m.get("label", f"MNC {m['mnc']}")),
                market_share=float(m.get("market_share", 0.0)),
                allowed_rats=frozenset(m.get("allowed_rats", ["LTE"])),
            )
            for m in data["mnos"]
        )
        profile = Profile(
            name=name,
            mcc=int(data["mcc"]),
            n_c=int(data.get("n_c", 100)),
            bounds=CbsBounds(a=int(cbs.get("a", 100)), b=int(cbs.get("b", 1000))),
            mnos=mnos,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad profile {name!r}: {exc}") from exc
    if not profile.mnos:
        raise ConfigError(f"profile {name!r} configures no operators")
    if len({m.mnc for m in profile.mnos}) != len(profile.mnos):
        raise ConfigError(f"profile {name!r} repeats an MNC")
    return profile


def load_profile(spec: str | Path) -> Profile:
    """Load a profile from a TOML path, or by built-in name (``spain``)."""
    path = Path(spec)
    if path.suffix == ".toml" or path.exists():
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read profile {spec!r}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse profile {spec!r}: {exc}") from exc
        return _profile_from_dict(path.stem, data)
    builtin = resources.files("celldrill") / "profiles" / f"{spec}.toml"
    if not builtin.is_file():
        raise ConfigError(f"no such profile: {spec!r}")
    data = tomllib.loads(builtin.read_text(encoding="utf-8"))
    return _profile_from_dict(str(spec), data)
