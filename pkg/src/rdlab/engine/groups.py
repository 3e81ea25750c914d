"""Canonical group identifiers for the inference engine.

Accepted names::

    1            trivial group
    Z<m>         cyclic group of order m
    S<n>, A<n>   symmetric and alternating groups
    Fam(n,q)     Fam in GL, SL, PSL, SU, U, PSU, Sp, PSp
    W(E6)        Weyl group of E6
    <m>.<G>      central extension of G by Z<m>
    CP(G,H,m)    central product of G and H over a common Z<m>
"""

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

from sympy import factorint

from ..algebra.grouplab import WEYL_E6_ORDER, classical_order
from ..utils.errors import UnknownGroupError

CLASSICAL_FAMILIES = ("GL", "SL", "PSL", "SU", "U", "PSU", "Sp", "PSp")

_CLASSICAL = re.compile(r"^(GL|SL|PSL|SU|U|PSU|Sp|PSp)\((\d+),(\d+)\)$")
_NAMED = re.compile(r"^([SAZ])(\d+)$")
_EXTENSION = re.compile(r"^(\d+)\.(.+)$")


@dataclass(frozen=True)
class GroupId:
    """A group by canonical name with the structure the rules consult."""

    name: str
    family: str
    params: Tuple[int, ...] = ()
    order: Optional[int] = None
    abelian: bool = False
    components: Tuple["GroupId", ...] = ()

    @property
    def trivial(self) -> bool:
        return self.order == 1

    def __str__(self) -> str:
        return self.name

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'family': self.family,
            'order': self.order,
            'abelian': self.abelian,
            'trivial': self.trivial,
        }


def _split_arguments(body: str) -> Tuple[str, ...]:
    """Split a comma list at depth zero."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:k].strip())
            start = k + 1
    parts.append(body[start:].strip())
    return tuple(parts)


@lru_cache(maxsize=None)
def parse_group(name: str) -> GroupId:
    """Parse and canonicalize a group name."""
    text = name.strip().replace(" ", "")
    if text == "1":
        return GroupId("1", "trivial", order=1, abelian=True)

    match = _NAMED.match(text)
    if match:
        letter, n = match.group(1), int(match.group(2))
        if n < 1:
            raise UnknownGroupError(f"{name}: index must be positive", name=name)
        if letter == "Z":
            return GroupId(f"Z{n}", "cyclic", (n,), order=n, abelian=True)
        if letter == "S":
            return GroupId(f"S{n}", "symmetric", (n,), order=math.factorial(n), abelian=n <= 2)
        return GroupId(f"A{n}", "alternating", (n,), order=max(1, math.factorial(n) // 2), abelian=n <= 3)

    match = _CLASSICAL.match(text)
    if match:
        family, n, q = match.group(1), int(match.group(2)), int(match.group(3))
        if q < 2 or len(factorint(q)) != 1 or n < 1:
            raise UnknownGroupError(f"{name}: q must be a prime power", name=name)
        if family in ("Sp", "PSp") and n % 2:
            raise UnknownGroupError(f"{name}: symplectic groups need even n", name=name)
        return GroupId(f"{family}({n},{q})", family, (n, q), order=classical_order(family, n, q))

    if text == "W(E6)":
        return GroupId("W(E6)", "weyl", order=WEYL_E6_ORDER)

    if text.startswith("CP(") and text.endswith(")"):
        args = _split_arguments(text[3:-1])
        if len(args) != 3 or not args[2].isdigit():
            raise UnknownGroupError(f"{name}: expected CP(G,H,m)", name=name)
        left, right, m = parse_group(args[0]), parse_group(args[1]), int(args[2])
        order = left.order * right.order // m if left.order and right.order else None
        return GroupId(
            f"CP({left.name},{right.name},{m})",
            "central-product",
            (m,),
            order=order,
            abelian=left.abelian and right.abelian,
            components=(left, right),
        )

    match = _EXTENSION.match(text)
    if match:
        m, base = int(match.group(1)), parse_group(match.group(2))
        return GroupId(
            f"{m}.{base.name}",
            "central-extension",
            (m,),
            order=m * base.order if base.order else None,
            components=(parse_group(f"Z{m}"), base),
        )

    raise UnknownGroupError(f"Unknown group id: {name}", name=name)


def symmetric(n: int) -> GroupId:
    return parse_group(f"S{n}")


def alternating(n: int) -> GroupId:
    return parse_group(f"A{n}")
