"""Pipeline configuration in a flat ``section.key=value`` text format."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields

from .embed.config import DeepWalkConfig, LineConfig, Node2VecConfig, SdneConfig
from .errors import ConfigError

SECTIONS = {
    "deepwalk": DeepWalkConfig,
    "node2vec": Node2VecConfig,
    "line": LineConfig,
    "sdne": SdneConfig,
}


@dataclass
class PipelineConfig:
    input: str | None = None
    output: str | None = None
    seed: int = 0
    mode: str = "lenient"
    deterministic: bool = True
    aliases: str | None = None
    algo: str = "node2vec"
    include_institutions: bool = False
    max_removals: int | None = None
    plateau: int | None = None
    k: int = 5
    deepwalk: DeepWalkConfig = field(default_factory=DeepWalkConfig)
    node2vec: Node2VecConfig = field(default_factory=Node2VecConfig)
    line: LineConfig = field(default_factory=LineConfig)
    sdne: SdneConfig = field(default_factory=SdneConfig)

    def __post_init__(self):
        if self.mode not in ("strict", "lenient"):
            raise ConfigError(f"mode must be strict or lenient, got {self.mode!r}")
        if self.algo not in SECTIONS:
            raise ConfigError(f"algo must be one of {sorted(SECTIONS)}, got {self.algo!r}")
        if self.k < 1:
            raise ConfigError("k must be at least 1")

    @property
    def strict(self) -> bool:
        return self.mode == "strict"

    def algo_config(self):
        return getattr(self, self.algo)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("output")
        return d

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


# top-level aliases accepted in files, e.g. communities.max_removals
_TOP_ALIASES = {
    "communities.max_removals": "max_removals",
    "communities.plateau": "plateau",
    "recommend.k": "k",
    "embed.algo": "algo",
    "embed.include_institutions": "include_institutions",
}


def _coerce(raw: str, default, name: str):
    text = raw.strip()
    try:
        if isinstance(default, bool):
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple):
            return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {name}") from None
    if text.lower() in ("", "none", "null"):
        return None
    return text


_INT_OR_NONE = {"max_removals", "plateau"}


def parse_config(text: str, overrides: dict | None = None) -> PipelineConfig:
    """Parse ``key=value`` lines; ``#`` starts a comment. Unknown keys raise."""
    top = {}
    sections = {name: {} for name in SECTIONS}
    top_fields = {f.name: f for f in fields(PipelineConfig) if f.name not in SECTIONS}
    defaults = PipelineConfig()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _TOP_ALIASES.get(key, key)
        if "." in key:
            section, name = key.split(".", 1)
            if section not in SECTIONS or name not in SECTIONS[section].field_names():
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            default = getattr(getattr(defaults, section), name)
            sections[section][name] = _coerce(value, default, key)
        else:
            if key not in top_fields:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            if key in _INT_OR_NONE:
                top[key] = _coerce(value, 0, key) if value.lower() not in ("", "none") else None
            else:
                top[key] = _coerce(value, getattr(defaults, key), key)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in top_fields:
            raise ConfigError(f"unknown override {key!r}")
        top[key] = value
    built = {name: cls(**sections[name]) for name, cls in SECTIONS.items()}
    return PipelineConfig(**top, **built)


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)
