import argparse
import dataclasses

from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Mapping, NamedTuple, Optional, Tuple, Type, Union, get_args, get_origin, get_type_hints

from equihyper.utils import ValidationError

try:
    from typing import Literal
except ImportError:  # pragma: no cover
    from typing_extensions import Literal


class ConfigEntry(NamedTuple):
    """One `key = value` line of a configuration file."""

    value: str
    line: int


def read_config_file(path: Union[str, Path]) -> Dict[str, ConfigEntry]:
    """
    Parse a flat `key = value` configuration file.

    Blank lines and lines starting with '#' are ignored; a key may appear once.

    Parameters
    ----------
    path: str or Path
        File to read.

    Returns
    -------
    Dict[str, ConfigEntry]
        Raw values with the line they came from.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise ValidationError(f"Cannot read config file `{path}`: {error}") from error

    entries: Dict[str, ConfigEntry] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ValidationError(f"{path}:{number}: expected `key = value`, got {line!r}")
        if key in entries:
            raise ValidationError(f"{path}:{number}: `{key}` already set on line {entries[key].line}")
        entries[key] = ConfigEntry(value.strip(), number)
    return entries


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def field_converter(annotation: Any) -> Callable[[str], Any]:
    """Turn a dataclass field annotation into a str -> value converter."""
    origin = get_origin(annotation)
    if origin is Literal:
        choices = get_args(annotation)

        def convert_choice(raw: str) -> str:
            if raw not in choices:
                raise ValueError(f"expected one of {list(choices)}, got {raw!r}")
            return raw

        return convert_choice
    if origin is tuple:
        item = field_converter(get_args(annotation)[0])
        return lambda raw: tuple(item(part.strip()) for part in raw.split(",") if part.strip())
    if origin is Union:
        # Optional[X]
        inner = [arg for arg in get_args(annotation) if arg is not type(None)][0]
        return field_converter(inner)
    if annotation is bool:
        return _parse_bool
    if annotation in (int, float, str):
        return annotation
    raise TypeError(f"Unsupported config field type {annotation}")


def config_fields(cls: Type) -> Dict[str, Any]:
    """Field name -> resolved annotation of a config dataclass."""
    hints = get_type_hints(cls)
    return {field.name: hints[field.name] for field in dataclasses.fields(cls)}


def add_config_arguments(parser: argparse.ArgumentParser, cls: Type, defaults: Optional[Mapping[str, Any]] = None) -> None:
    """
    Add one `--flag-name` option per dataclass field.

    Options default to None ("unset") so that `resolve_config` can tell a flag
    given on the command line from a default.
    """
    defaults = defaults or {}
    group = parser.add_argument_group(cls.__name__)
    for field in dataclasses.fields(cls):
        annotation = config_fields(cls)[field.name]
        default = defaults.get(field.name, field.default)
        if isinstance(default, tuple):
            default = ",".join(str(value) for value in default)
        group.add_argument(
            "--" + field.name.replace("_", "-"),
            dest=field.name,
            type=_argparse_type(field_converter(annotation), field.name),
            default=None,
            metavar=field.name.upper(),
            help=f"default: {default}",
        )


def _argparse_type(convert: Callable[[str], Any], name: str) -> Callable[[str], Any]:
    def parse(raw: str) -> Any:
        try:
            return convert(raw)
        except ValueError as error:
            raise argparse.ArgumentTypeError(f"invalid value for `{name}`: {error}")

    return parse


def check_known_keys(entries: Mapping[str, ConfigEntry], sections: Iterable[Type], path: Union[str, Path]) -> None:
    """Reject keys that belong to none of `sections`."""
    known = set()
    for cls in sections:
        known.update(config_fields(cls))
    for key, entry in entries.items():
        if key not in known:
            raise ValidationError(f"{path}:{entry.line}: unknown key `{key}`")


def resolve_config(
    cls: Type,
    entries: Mapping[str, ConfigEntry],
    args: argparse.Namespace,
    path: Optional[Union[str, Path]] = None,
    defaults: Optional[Mapping[str, Any]] = None,
) -> Any:
    """
    Build a config dataclass from defaults, a config file and command-line flags.

    Precedence: field default < `defaults` < config file < flag.

    Parameters
    ----------
    cls: Type
        Config dataclass.
    entries: Mapping[str, ConfigEntry]
        Parsed config file, possibly empty.
    args: argparse.Namespace
        Parsed flags; None means unset.
    path: Optional[str or Path]
        Config file path, for error messages.
    defaults: Optional[Mapping[str, Any]]
        Command-specific defaults.

    Returns
    -------
    Any
        The validated dataclass instance.
    """
    values: Dict[str, Any] = dict(defaults or {})
    for name, annotation in config_fields(cls).items():
        if name in entries:
            entry = entries[name]
            try:
                values[name] = field_converter(annotation)(entry.value)
            except ValueError as error:
                raise ValidationError(f"{path}:{entry.line}: invalid value for `{name}`: {error}") from error
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return cls(**{name: value for name, value in values.items() if name in config_fields(cls)})


def format_config(config: Any) -> Tuple[str, ...]:
    """A config dataclass as `key = value` lines, readable by `read_config_file`."""
    lines = []
    for field in dataclasses.fields(config):
        value = getattr(config, field.name)
        if isinstance(value, tuple):
            value = ",".join(str(item) for item in value)
        lines.append(f"{field.name} = {value}")
    return tuple(lines)
