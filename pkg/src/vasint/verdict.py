from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Condition:
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class ConvergenceVerdict:
    """Outcome of a set of inequality checks.

    ``failing`` lists the indices (usually the ``r`` of a nested condition)
    at which an inequality was violated; ``conditions`` has one entry per
    inequality evaluated, in evaluation order.
    """

    conditions: list[Condition] = field(default_factory=list)
    failing: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.conditions)

    def __bool__(self) -> bool:
        return self.ok

    def add(self, name: str, ok: bool, detail: str = "", index: int | None = None):
        self.conditions.append(Condition(name, bool(ok), detail))
        if not ok and index is not None and index not in self.failing:
            self.failing.append(index)

    def extend(self, other: "ConvergenceVerdict", prefix: str = ""):
        for c in other.conditions:
            self.conditions.append(Condition(prefix + c.name, c.ok, c.detail))
        for r in other.failing:
            if r not in self.failing:
                self.failing.append(r)

    def failures(self) -> list[Condition]:
        return [c for c in self.conditions if not c.ok]

    def summary(self) -> str:
        if self.ok:
            return "all conditions hold"
        if self.failing:
            return "diverges at r=" + ",".join(str(r) for r in self.failing)
        return "violated: " + ", ".join(c.name for c in self.failures())
