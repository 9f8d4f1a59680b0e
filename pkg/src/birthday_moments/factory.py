"""Distribution factory — the single place where text specs become distributions.

``build_distribution`` is the entry point used by the CLI ``bench`` command and
the tests::

    build_distribution("uniform:m=64")
    build_distribution("zipf:m=256,s=1.0")
    build_distribution("two_spike:m=1024,heavy=0.3")
    build_distribution("point")

Customisation points:

* **families** – mapping ``name → FamilySpec``; ``None`` uses
                 :data:`DEFAULT_FAMILIES`.
* **casters**  – caster table for parameter values; ``None`` uses
                 :data:`~birthday_moments.casters.BUILTIN_CASTERS`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import regex

from . import distributions as _dist
from .casters import BUILTIN_CASTERS
from .core import EstimatorError, UsageError
from .distributions import DiscreteDistribution

_SPEC_RE = regex.compile(r"^\s*(?P<family>[A-Za-z_]\w*)\s*(?::(?P<body>.*))?$")
_PARAM_RE = regex.compile(r"^\s*(?P<key>[A-Za-z_]\w*)\s*=\s*(?P<value>[^\s,=]+)\s*$")


@dataclass(frozen=True)
class FamilySpec:
    """Constructor of one family plus the caster name of each parameter."""

    build: Callable[..., DiscreteDistribution]
    params: Mapping[str, str] = field(default_factory=dict)


DEFAULT_FAMILIES: Mapping[str, FamilySpec] = {
    "uniform": FamilySpec(_dist.uniform, {"m": "int"}),
    "zipf": FamilySpec(_dist.zipf, {"m": "int", "s": "float"}),
    "geometric": FamilySpec(_dist.geometric, {"m": "int", "q": "float"}),
    "two_spike": FamilySpec(_dist.two_spike, {"m": "int", "heavy": "float"}),
    "two_point": FamilySpec(_dist.two_point, {"p": "float"}),
    "point": FamilySpec(_dist.point_mass),
}


def parse_spec(spec: str) -> tuple[str, dict[str, str]]:
    """Split ``family:key=value,…`` into the family name and raw parameters."""
    m = _SPEC_RE.match(spec)
    if m is None:
        raise UsageError(f"malformed distribution spec {spec!r}")
    raw: dict[str, str] = {}
    body = m.group("body")
    if body is not None and body.strip():
        for part in body.split(","):
            pm = _PARAM_RE.match(part)
            if pm is None:
                raise UsageError(f"malformed parameter {part!r} in {spec!r}")
            if pm.group("key") in raw:
                raise UsageError(f"duplicate parameter {pm.group('key')!r} in {spec!r}")
            raw[pm.group("key")] = pm.group("value")
    return m.group("family").lower(), raw


def build_distribution(
        spec: str,
        *,
        families: Mapping[str, FamilySpec] | None = None,
        casters: Mapping[str, Callable[[Any], Any]] | None = None,
) -> DiscreteDistribution:
    """Build a :class:`DiscreteDistribution` from its compact text form.

    Raises:
        UsageError: unknown family or parameter, or a value the family rejects.
    """
    families = DEFAULT_FAMILIES if families is None else families
    casters = BUILTIN_CASTERS if casters is None else casters
    name, raw = parse_spec(spec)
    family = families.get(name)
    if family is None:
        raise UsageError(
            f"unknown distribution family {name!r}. Supported: {', '.join(sorted(families))}"
        )
    kwargs: dict[str, Any] = {}
    for key, value in raw.items():
        type_name = family.params.get(key)
        if type_name is None:
            raise UsageError(f"{name}: unknown parameter {key!r}")
        try:
            kwargs[key] = casters[type_name](value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{name}: cannot read {key}={value!r} as {type_name}") from exc
    try:
        return family.build(**kwargs)
    except EstimatorError as exc:
        raise UsageError(f"{spec!r}: {exc}") from exc
