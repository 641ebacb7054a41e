"""Linear functionals on labelled bases, given by finite support or by a rule."""

from __future__ import annotations

from typing import Callable, Mapping

from .errors import InvalidInput
from .exact import ZERO, GScalar, g, label_sort_key
from .superalgebra import label_str, parse_label


class Functional:
    """A linear functional: a finite support table, optionally overridden by a rule."""

    def __init__(
        self,
        support: Mapping | None = None,
        rule: Callable[[tuple], GScalar] | None = None,
        description: str = "",
    ):
        self.support = {k: g(v) for k, v in (support or {}).items() if v}
        self.rule = rule
        self.description = description or self._describe_support()

    def __call__(self, label) -> GScalar:
        if self.rule is not None:
            return g(self.rule(label))
        return self.support.get(label, ZERO)

    def apply(self, vec: Mapping) -> GScalar:
        total = ZERO
        for k, c in vec.items():
            total = total + c * self(k)
        return total

    def _describe_support(self) -> str:
        if not self.support:
            return "zero"
        return ",".join(
            f"{label_str(k)}={self.support[k]}" for k in sorted(self.support, key=label_sort_key)
        )

    def __repr__(self) -> str:
        return f"Functional({self.description})"

    @classmethod
    def zero(cls) -> "Functional":
        return cls({}, description="zero")

    @classmethod
    def explicit(cls, values: Mapping) -> "Functional":
        return cls(values)

    @classmethod
    def evaluation(cls, z) -> "Functional":
        """t^{4k+2} -> z^{4k+2}; zero on every other label."""
        z = g(z)
        if not z:
            raise InvalidInput("evaluation point must be nonzero")

        def rule(label):
            if label[0] == "t" and label[1] % 4 == 2:
                return z ** label[1]
            return ZERO

        return cls(rule=rule, description=f"eval:{z}")

    @classmethod
    def evaluations(cls, points) -> "Functional":
        """Sum of evaluations at several points."""
        parts = [cls.evaluation(z) for z in points]
        if len(parts) == 1:
            return parts[0]

        def rule(label):
            total = ZERO
            for f in parts:
                total = total + f(label)
            return total

        return cls(rule=rule, description="eval:" + ";".join(str(g(z)) for z in points))

    @classmethod
    def parse(cls, text: str) -> "Functional":
        """``zero``, ``eval:z``, ``eval:z1;z2;...`` or ``label=value`` pairs separated by commas."""
        text = text.strip()
        if text in ("", "zero", "0"):
            return cls.zero()
        if text.startswith("eval:"):
            return cls.evaluations([GScalar.parse(z) for z in text[5:].split(";")])
        values = {}
        for part in text.split(","):
            if "=" not in part:
                raise InvalidInput(f"bad functional entry {part!r}")
            key, val = part.split("=", 1)
            values[parse_label(key.strip())] = GScalar.parse(val.strip())
        return cls(values)
