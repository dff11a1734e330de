"""Coefficient fields: Q, or Q(p1, ..., pk) for formal parameters."""

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class Field:
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(sorted(set(self.params))))

    @classmethod
    def of(cls, *params):
        return cls(tuple(params))

    @classmethod
    def parse(cls, text):
        text = text.replace(" ", "")
        if text in ("Q", "QQ"):
            return QQ
        m = re.fullmatch(r"Q\(([a-z][a-z0-9]*(?:,[a-z][a-z0-9]*)*)\)", text)
        if not m:
            raise ValueError(f"cannot parse coefficient field {text!r}")
        return cls(tuple(m.group(1).split(",")))

    @property
    def is_rational(self):
        return not self.params

    def __str__(self):
        return "Q" if not self.params else f"Q({','.join(self.params)})"


QQ = Field()
