"""Reports for the command line tool, in a human and a machine format.

The machine format is one ``key=value`` record per line with dotted keys::

    format=expower-report/1
    command=ax
    section.1.kind=ax
    section.1.line=3
    section.1.verdict=PASS
    section.1.value.td_estimate=2
    section.1.check.ax_inequality.verdict=PASS
    section.1.check.ax_inequality.detail=2 - 1 - 1 = 0
    section.1.cert.relations.1=y2 - y1^2
    section.1.note.1=...
    summary.verdict=PASS
    summary.exit_code=0

Values never contain newlines (they are escaped as ``\\n``). Both formats
carry the same records; the human one only lays them out for reading.
Timing lines appear only when requested, so reports are otherwise
byte-identical across runs.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .verify import ERROR, FAIL, INCONCLUSIVE, PASS
from .verify import combine_verdicts as combine

VERDICTS = (PASS, FAIL, INCONCLUSIVE, ERROR)
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2, ERROR: 3}
REPORT_FORMAT = "expower-report/1"


def fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return ",".join(fmt_value(x) for x in v)
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return str(v)
    return str(v).replace("\\", "\\\\").replace("\n", "\\n")


@dataclass
class CheckResult:
    name: str
    verdict: str
    detail: str = ""


@dataclass
class SectionResult:
    kind: str
    index: int
    line: int
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    error: str = ""
    seconds: float = None

    @property
    def verdict(self):
        if self.error:
            return ERROR
        if not self.checks:
            return INCONCLUSIVE
        return combine(c.verdict for c in self.checks)

    def records(self, timing=False):
        pre = f"section.{self.index}"
        out = [(f"{pre}.kind", self.kind), (f"{pre}.line", self.line),
               (f"{pre}.verdict", self.verdict)]
        if self.error:
            out.append((f"{pre}.error", self.error))
        out += [(f"{pre}.value.{k}", v) for k, v in self.values.items()]
        for c in self.checks:
            out.append((f"{pre}.check.{c.name}.verdict", c.verdict))
            if c.detail:
                out.append((f"{pre}.check.{c.name}.detail", c.detail))
        for name, items in self.certificates.items():
            out += [(f"{pre}.cert.{name}.{i}", x) for i, x in enumerate(items, 1)]
        out += [(f"{pre}.note.{i}", n) for i, n in enumerate(self.notes, 1)]
        if timing and self.seconds is not None:
            out.append((f"{pre}.seconds", f"{self.seconds:.3f}"))
        return out


@dataclass
class Report:
    command: str
    sections: list = field(default_factory=list)

    @property
    def verdict(self):
        return combine(s.verdict for s in self.sections) if self.sections else PASS

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def counts(self):
        return {v: sum(s.verdict == v for s in self.sections) for v in VERDICTS}

    def summary_records(self):
        out = [("summary.sections", len(self.sections))]
        out += [(f"summary.{v}", n) for v, n in self.counts().items()]
        out += [("summary.verdict", self.verdict), ("summary.exit_code", self.exit_code)]
        return out

    def machine(self, timing=False):
        lines = [f"format={REPORT_FORMAT}", f"command={self.command}"]
        for s in self.sections:
            lines += [f"{k}={fmt_value(v)}" for k, v in s.records(timing)]
        lines += [f"{k}={fmt_value(v)}" for k, v in self.summary_records()]
        return "\n".join(lines) + "\n"

    def human(self, timing=False):
        lines = []
        for s in self.sections:
            head = f"[{s.index}] {s.kind} (line {s.line}): {s.verdict}"
            if timing and s.seconds is not None:
                head += f"  [{s.seconds:.3f}s]"
            lines.append(head)
            if s.error:
                lines.append(f"    error: {fmt_value(s.error)}")
            for k, v in s.values.items():
                lines.append(f"    {k} = {fmt_value(v)}")
            for c in s.checks:
                detail = f": {fmt_value(c.detail)}" if c.detail else ""
                lines.append(f"    [{c.verdict}] {c.name}{detail}")
            for name, items in s.certificates.items():
                for i, x in enumerate(items, 1):
                    lines.append(f"    {name}[{i}]: {fmt_value(x)}")
            for n in s.notes:
                lines.append(f"    note: {fmt_value(n)}")
        counts = ", ".join(f"{n} {v}" for v, n in self.counts().items() if n)
        lines.append(f"{self.command}: {self.verdict} ({len(self.sections)} section(s)"
                     f"{': ' + counts if counts else ''}), exit code {self.exit_code}")
        return "\n".join(lines) + "\n"

    def render(self, fmt="human", timing=False):
        return self.machine(timing) if fmt == "machine" else self.human(timing)


def parse_machine(text):
    """Read a machine report back into ``{key: value}`` (values as strings)."""
    out = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed record {line!r}")
        out[key] = value
    return out
