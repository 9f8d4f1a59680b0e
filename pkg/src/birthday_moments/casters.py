"""Built-in casters for parameters of the compact distribution spec.

``zipf:m=1024,s=1.0`` arrives as strings; each family declares the caster name
of every parameter and :func:`birthday_moments.factory.build_distribution`
applies it.

Exports
-------
BUILTIN_CASTERS
    Dictionary mapping type names to caster functions (int, float).
"""

from __future__ import annotations

from typing import Any, Callable


def _to_int(x: Any) -> int:
    if isinstance(x, str):
        x = x.replace("_", "")
        if x.startswith("2^"):
            return 2 ** int(x[2:])
    return int(x)


# ─────────────────────────────────────────────────────────────────────────────
# Built-in casters
# ─────────────────────────────────────────────────────────────────────────────

BUILTIN_CASTERS: dict[str, Callable[[Any], Any]] = {
    "int": _to_int,
    "float": lambda x: float(x),
}
