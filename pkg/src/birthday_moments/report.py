"""Versioned, self-describing run reports.

A report is a plain document (mapping of scalars, lists and mappings) dumped
as YAML by default — human-diffable — or JSON.  JSON text is read back with
``json`` and everything else with ``yaml.safe_load``, so
:meth:`RunReport.loads` round-trips either format losslessly.

``query`` applies a JMESPath expression to the document before dumping::

    report.dumps(query="result.estimate.p_hat")
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

import jmespath
import jmespath.exceptions
import yaml

from .core import UsageError

FORMAT_VERSION = "birthday-moments/1"

_FORMATS = frozenset({"yaml", "json"})


@dataclass
class RunReport:
    """One CLI run: config echo, result payload, run statistics."""

    command: str
    config: dict[str, Any]
    result: dict[str, Any]
    stats: dict[str, Any] = field(default_factory=dict)
    status: str = "ok"
    format_version: str = FORMAT_VERSION

    def to_document(self) -> dict[str, Any]:
        return {
            "format_version": self.format_version,
            "command": self.command,
            "status": self.status,
            "config": self.config,
            "result": self.result,
            "stats": self.stats,
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> RunReport:
        if not isinstance(doc, dict) or "format_version" not in doc:
            raise UsageError("not a run report: missing format_version")
        if doc["format_version"] != FORMAT_VERSION:
            raise UsageError(f"unsupported report version {doc['format_version']!r}")
        return cls(
            command=doc["command"],
            config=doc.get("config") or {},
            result=doc.get("result") or {},
            stats=doc.get("stats") or {},
            status=doc.get("status", "ok"),
            format_version=doc["format_version"],
        )

    def dumps(self, fmt: str = "yaml", query: Optional[str] = None) -> str:
        if fmt not in _FORMATS:
            raise UsageError(f"unknown report format {fmt!r}. Supported: {', '.join(sorted(_FORMATS))}")
        doc: Any = self.to_document()
        if query:
            try:
                doc = jmespath.search(query, doc)
            except jmespath.exceptions.JMESPathError as exc:
                raise UsageError(f"invalid --query {query!r}: {exc}") from exc
        if fmt == "json":
            return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
        return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)

    @classmethod
    def loads(cls, text: str) -> RunReport:
        # YAML 1.1 reads JSON exponents like 1e-05 as strings
        try:
            doc = json.loads(text)
        except json.JSONDecodeError:
            doc = yaml.safe_load(text)
        return cls.from_document(doc)
