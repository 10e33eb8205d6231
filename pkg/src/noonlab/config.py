"""Flat key = value run configuration with canonical round-trip text form."""

from dataclasses import dataclass, field

__all__ = ["RunConfig", "parse_config_text", "resolve_option"]


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ValueError(f"config line {lineno}: empty key")
        out[key] = value.strip()
    return out


@dataclass
class RunConfig:
    """Ordered string key/value pairs mirroring CLI flags."""

    values: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(parse_config_text(text))

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_text(self) -> str:
        """Canonical serialization; parsing it back reproduces it byte for byte."""
        return "".join(f"{k} = {v}\n" for k, v in sorted(self.values.items()))

    def get(self, key: str) -> str | None:
        return self.values.get(key)


def resolve_option(cli_value, config: RunConfig | None, key: str, default, cast):
    """Precedence: explicit CLI flag > config-file entry > built-in default."""
    if cli_value is not None:
        return cli_value
    if config is not None:
        raw = config.get(key)
        if raw is not None:
            return cast(raw)
    return default
