"""Result types shared by the deciders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from linspp.costs import LinearCost, OrderDCost, eval_order_d
from linspp.graph import Path


@dataclass(frozen=True)
class TwoPathSystem:
    """Two s-v paths and two v-t paths meeting at ``v``."""

    v: int
    p1: Path
    p2: Path
    q1: Path
    q2: Path

    def __post_init__(self) -> None:
        for p in (self.p1, self.p2):
            if p.end != self.v:
                raise ValueError(f"path {p} does not end at vertex {self.v}")
        for p in (self.q1, self.q2):
            if p.start != self.v:
                raise ValueError(f"path {p} does not start at vertex {self.v}")

    def concatenations(self) -> tuple[Path, Path, Path, Path]:
        """P1Q1, P2Q2, P1Q2, P2Q1."""
        return (
            self.p1.then(self.q1),
            self.p2.then(self.q2),
            self.p1.then(self.q2),
            self.p2.then(self.q1),
        )

    @property
    def degenerate(self) -> bool:
        return self.p1 == self.p2 or self.q1 == self.q2

    def balance(self, q: OrderDCost) -> tuple[Fraction, Fraction]:
        """Both sides of f(P1Q1) + f(P2Q2) = f(P1Q2) + f(P2Q1)."""
        f11, f22, f12, f21 = (eval_order_d(q, p) for p in self.concatenations())
        return f11 + f22, f12 + f21


@dataclass(frozen=True)
class FailureWitness:
    """Strongly basic arc ``arc`` = (u, v) whose value differs on two s-u paths.

    ``system`` is the two-path system (u, P, Q, N_u, a·N_v) that breaks the
    balance equation.
    """

    arc: int
    paths: tuple[Path, Path]
    system: TwoPathSystem


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Path weights y with sum y_P x_P = 0 for every arc yet sum y_P f(P) != 0."""

    weights: dict[Path, Fraction]
    residual: Fraction


@dataclass(frozen=True)
class LinVerdict:
    linearizable: bool
    cost: LinearCost | None = None
    failure_witness: FailureWitness | None = None
    certificate: InfeasibilityCertificate | None = None

    @classmethod
    def yes(cls, cost: LinearCost) -> LinVerdict:
        return cls(True, cost=cost)

    @classmethod
    def no(
        cls,
        witness: FailureWitness | None = None,
        certificate: InfeasibilityCertificate | None = None,
    ) -> LinVerdict:
        return cls(False, failure_witness=witness, certificate=certificate)

    def __bool__(self) -> bool:
        return self.linearizable


@dataclass(frozen=True)
class ApecVerdict:
    all_equal: bool
    beta: Fraction | None = None
    witness: tuple[Path, Path] | None = None

    def __bool__(self) -> bool:
        return self.all_equal
