"""
Run Configuration

RunConfig is assembled from three layers, later ones winning:
defaults, SLC_* environment variables (a local .env is loaded first) and
explicit command-line flags.
"""

import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from dotenv import load_dotenv

from constants import (
    DEFAULT_CACHE_DIR,
    DEFAULT_DEGREE,
    DEFAULT_K,
    DEFAULT_M,
    DEFAULT_N,
    DEFAULT_SEED,
    DEFAULT_THREADS,
    MAX_M,
    VALID_ALGEBRAS,
    VALID_COMMANDS,
    VALID_DEFORM_TERMS,
    VALID_MODULES,
    VALID_OUTPUTS,
    VALID_WEIGHT_FILTERS,
    VALID_ZOO_ACTIONS,
    VECTOR_FIELD_ALGEBRAS,
)

ENV_PREFIX = "SLC_"
CANDIDATES = ("exceptional", "rk-power")


class InvalidConfigError(ValueError):
    """A flag or environment value is out of range"""


@dataclass(frozen=True)
class RunConfig:
    """Everything a pipeline needs; echoed verbatim into its report"""

    command: str = "selftest"
    algebra: str = "po"
    module: Optional[str] = None
    m: int = DEFAULT_M
    n: int = DEFAULT_N
    k: int = DEFAULT_K
    degree: int = DEFAULT_DEGREE
    weight_filter: bool = True
    deform_term: str = "top"
    output: str = "json"
    cache_dir: str = DEFAULT_CACHE_DIR
    threads: int = DEFAULT_THREADS
    seed: int = DEFAULT_SEED
    budget: Optional[int] = None
    zoo_action: Optional[str] = None
    path: Optional[str] = None
    candidate: str = "exceptional"

    @property
    def resolved_module(self) -> str:
        """Adjoint for vector fields, coadjoint (I(g) = S(g*)^g) otherwise."""
        if self.module:
            return self.module
        return "adjoint" if self.algebra in VECTOR_FIELD_ALGEBRAS else "coadjoint"

    def validate(self) -> "RunConfig":
        """
        Raises:
            InvalidConfigError: If any field is out of range
        """
        _check_choice("command", self.command, VALID_COMMANDS)
        _check_choice("algebra", self.algebra, VALID_ALGEBRAS)
        if self.module is not None:
            _check_choice("module", self.module, VALID_MODULES)
        _check_choice("deform-term", self.deform_term, VALID_DEFORM_TERMS)
        _check_choice("output", self.output, VALID_OUTPUTS)
        _check_choice("candidate", self.candidate, CANDIDATES)
        if self.zoo_action is not None:
            _check_choice("zoo action", self.zoo_action, VALID_ZOO_ACTIONS)
        if not 0 <= self.m <= MAX_M:
            raise InvalidConfigError(f"--m must be in 0..{MAX_M}, got {self.m}")
        if self.n < 1:
            raise InvalidConfigError(f"--n must be positive, got {self.n}")
        if self.k < 1:
            raise InvalidConfigError(f"--k must be positive, got {self.k}")
        if self.degree < 0:
            raise InvalidConfigError(f"--degree must be nonnegative, got {self.degree}")
        if self.threads < 1:
            raise InvalidConfigError(f"--threads must be positive, got {self.threads}")
        if self.budget is not None and self.budget <= 0:
            raise InvalidConfigError(f"--budget must be positive, got {self.budget}")
        return self

    def cache_payload(self) -> Dict[str, Any]:
        """Fields that determine the mathematical content of a report."""
        data = asdict(self)
        for key in ("output", "threads", "cache_dir"):
            data.pop(key)
        data["module"] = self.resolved_module
        return data

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def _check_choice(name: str, value: str, valid) -> None:
    if value not in valid:
        raise InvalidConfigError(f"Invalid {name} {value!r}, expected one of {list(valid)}")


def _parse_bool(name: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("on", "true", "1", "yes"):
        return True
    if text in ("off", "false", "0", "no"):
        return False
    raise InvalidConfigError(f"Invalid {name} {value!r}, expected one of {VALID_WEIGHT_FILTERS}")


def _coerce(name: str, value: Any) -> Any:
    """Convert a raw flag or environment string to the field's type."""
    if name == "weight_filter":
        return _parse_bool(name, value)
    if name in ("m", "n", "k", "degree", "threads", "seed", "budget"):
        try:
            return int(value)
        except (TypeError, ValueError) as e:
            raise InvalidConfigError(f"Invalid integer for {name}: {value!r}") from e
    return value


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """SLC_<FIELD> values for every RunConfig field present in the environment."""
    if environ is None:
        load_dotenv()
        environ = os.environ
    out = {}
    for f in fields(RunConfig):
        key = ENV_PREFIX + f.name.upper()
        if key in environ and environ[key] != "":
            out[f.name] = _coerce(f.name, environ[key])
    return out


def build_config(
    cli: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """
    Defaults < SLC_* environment < explicit CLI values (None means unset)

    Raises:
        InvalidConfigError: If a value cannot be parsed or is out of range
    """
    config = replace(RunConfig(), **env_overrides(environ))
    explicit = {key: _coerce(key, value) for key, value in (cli or {}).items() if value is not None}
    return replace(config, **explicit).validate()
