"""
Run reports.

Machine records are one JSON object per line, keys sorted, without timings, so reports
from different thread counts compare byte for byte.
"""

import json
from dataclasses import dataclass, field

from . import ENGINE_VERSION
from .core import format_multidegree, render
from .messages import render as message


@dataclass
class RunReport:
    results: list
    engine_version: str = ENGINE_VERSION
    statistics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def records(self):
        for r in self.results:
            yield {
                'engine_version': self.engine_version,
                'suite': r.suite,
                'check': r.name,
                'kind': r.kind,
                'status': r.status,
                'details': r.details,
            }

    def to_jsonl(self):
        return ''.join(json.dumps(rec, sort_keys=True) + '\n' for rec in self.records())

    def to_text(self):
        lines = []
        suite = None
        for r in self.results:
            if r.suite != suite:
                suite = r.suite
                lines.append(f"== {suite}")
            lines.append(f"[{r.status.upper():5}] {r.name:20} {r.seconds:8.2f}s  {r.description}")
            lines.extend(f"        {note}" for note in r.notes)
        failed = sum(1 for r in self.results if not r.passed)
        if failed:
            lines.append(message('some_failed', failed=failed, count=len(self.results)))
        else:
            lines.append(message('all_passed', count=len(self.results)))
        if self.statistics:
            lines.append('components built: ' + ', '.join(
                f"{name} {count}" for name, count in sorted(self.statistics.items())))
        return '\n'.join(lines) + '\n'


def component_record(report):
    """Machine record of a ComponentReport."""
    record = {
        'engine_version': ENGINE_VERSION,
        'variety': report.variety,
        'multidegree': format_multidegree(report.multidegree),
        'total': report.total,
        'rank': report.rank,
        'dimension': report.dimension,
    }
    if report.basis is not None:
        record['basis'] = [m if isinstance(m, str) else render(m) for m in report.basis]
    return record


def component_text(report):
    lines = [f"{report.variety} [{format_multidegree(report.multidegree)}]: "
             f"dimension {report.dimension} ({report.total} monomials, rank {report.rank})"]
    if report.basis is not None:
        lines.extend(f"  {m if isinstance(m, str) else render(m)}" for m in report.basis)
    return '\n'.join(lines) + '\n'
