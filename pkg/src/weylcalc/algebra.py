"""Rational Weyl algebras at roots of unity and divisibility chains.

A pair of positive rationals (a, b) together with a rational hbar/2pi
determines the algebra generated by two unitaries U^a, V^b with
U^a V^b = q V^b U^a, where q = e^{2*pi*i*M/N} and M/N is the reduced
form of a*b*(hbar/2pi).  Containment of such algebras is integer
divisibility of the exponents, which makes the family a lattice; an
increasing chain of algebras is the finite stand-in for the directed
limit used by the continuum-extraction sweeps.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import IncompatiblePlanckError, InvalidParameterError, WeylError

RationalLike = Union[Fraction, int, str]

SCHEDULES = ("doubling", "factorial", "lcm")


def as_rational(value: RationalLike, name: str = "value") -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact Fraction."""
    try:
        f = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidParameterError(f"{name} is not a rational: {value!r}") from exc
    return f


def positive_rational(value: RationalLike, name: str) -> Fraction:
    f = as_rational(value, name)
    if f <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {f}")
    return f


def format_rational(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def rational_gcd(x: Fraction, y: Fraction) -> Fraction:
    """Largest rational g with x/g and y/g both integers."""
    den = math.lcm(x.denominator, y.denominator)
    num = math.gcd(x.numerator * (den // x.denominator),
                   y.numerator * (den // y.denominator))
    return Fraction(num, den)


def divides(small: Fraction, large: Fraction) -> bool:
    """True iff large/small is an integer."""
    return (large / small).denominator == 1


@dataclass(frozen=True)
class WeylAlgebra:
    """Descriptor of one rational Weyl algebra A(a, b).

    M/N is a*b*(hbar/2pi) in lowest terms; N is the dimension of every
    irreducible module and q_angle = (M mod N)/N gives the commutation
    phase q = e^{2*pi*i*q_angle}.
    """

    a: Fraction
    b: Fraction
    hbar_over_2pi: Fraction
    M: int
    N: int
    q_angle: Fraction

    @property
    def hbar(self) -> float:
        return 2.0 * math.pi * float(self.hbar_over_2pi)

    def to_json_dict(self) -> dict:
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "hbar_over_2pi": format_rational(self.hbar_over_2pi),
            "M": self.M,
            "N": self.N,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def make_algebra(a: RationalLike, b: RationalLike,
                 hbar_over_2pi: RationalLike) -> WeylAlgebra:
    """Build the descriptor for A(a, b) at the given hbar/2pi."""
    a = positive_rational(a, "a")
    b = positive_rational(b, "b")
    h2p = positive_rational(hbar_over_2pi, "hbar_over_2pi")
    prod = a * b * h2p
    M, N = prod.numerator, prod.denominator
    return WeylAlgebra(a=a, b=b, hbar_over_2pi=h2p, M=M, N=N,
                       q_angle=Fraction(M % N, N))


def algebra_from_json(data: Union[str, dict]) -> WeylAlgebra:
    if isinstance(data, str):
        data = json.loads(data)
    alg = make_algebra(data["a"], data["b"], data["hbar_over_2pi"])
    if "N" in data and alg.N != data["N"]:
        raise InvalidParameterError(
            f"inconsistent serialized N={data['N']}, derived {alg.N}")
    return alg


def _check_same_planck(x: WeylAlgebra, y: WeylAlgebra) -> None:
    if x.hbar_over_2pi != y.hbar_over_2pi:
        raise IncompatiblePlanckError(
            f"hbar/2pi differs: {x.hbar_over_2pi} vs {y.hbar_over_2pi}")


def is_subalgebra(small: WeylAlgebra, large: WeylAlgebra) -> bool:
    """True iff every generator of `small` is a power of one of `large`."""
    _check_same_planck(small, large)
    return divides(large.a, small.a) and divides(large.b, small.b)


def join(x: WeylAlgebra, y: WeylAlgebra) -> WeylAlgebra:
    """Smallest algebra containing both operands."""
    _check_same_planck(x, y)
    return make_algebra(rational_gcd(x.a, y.a), rational_gcd(x.b, y.b),
                        x.hbar_over_2pi)


@dataclass(frozen=True)
class LimitChain:
    """Increasing divisibility chain of algebras with fixed ratio a/b."""

    entries: tuple[WeylAlgebra, ...]
    h_ratio: Fraction
    schedule_name: str

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def deepest(self) -> WeylAlgebra:
        return self.entries[-1]

    def validate(self) -> None:
        for alg in self.entries:
            if alg.a / alg.b != self.h_ratio:
                raise WeylError(f"entry {alg} breaks the fixed ratio {self.h_ratio}")
        for prev, cur in zip(self.entries, self.entries[1:]):
            if not is_subalgebra(prev, cur):
                raise WeylError(
                    f"chain not increasing: {prev.to_json()} !<= {cur.to_json()}")
            if cur.N <= prev.N:
                raise WeylError(
                    f"schedule produced non-increasing N: {prev.N} -> {cur.N}")

    def to_json_dict(self) -> dict:
        return {
            "schedule": self.schedule_name,
            "h_ratio": format_rational(self.h_ratio),
            "entries": [alg.to_json_dict() for alg in self.entries],
        }


def _schedule_denominators(schedule: str, depth: int) -> list[int]:
    if schedule == "doubling":
        return [2 ** n for n in range(1, depth + 1)]
    if schedule == "factorial":
        return [math.factorial(n) for n in range(1, depth + 1)]
    if schedule == "lcm":
        # lcm(1..n) repeats (e.g. n=5,6); keep the distinct increasing values
        out: list[int] = []
        n = 1
        cur = 1
        while len(out) < depth:
            cur = math.lcm(cur, n)
            if not out or cur > out[-1]:
                out.append(cur)
            n += 1
        return out
    raise InvalidParameterError(
        f"unknown schedule {schedule!r}; choose one of {SCHEDULES}")


def build_chain(h_ratio: RationalLike, depth: int,
                hbar_over_2pi: RationalLike,
                schedule: str = "doubling") -> LimitChain:
    """Chain entry n has b = 1/nu_n from the schedule and a = h_ratio*b."""
    h = positive_rational(h_ratio, "h_ratio")
    h2p = positive_rational(hbar_over_2pi, "hbar_over_2pi")
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    entries = []
    for nu in _schedule_denominators(schedule, depth):
        b = Fraction(1, nu)
        entries.append(make_algebra(h * b, b, h2p))
    chain = LimitChain(entries=tuple(entries), h_ratio=h, schedule_name=schedule)
    chain.validate()
    return chain


def chain_from_spec(spec: str, h_ratio: RationalLike,
                    hbar_over_2pi: RationalLike) -> LimitChain:
    """Parse 'schedule:depth' (e.g. 'doubling:6') into a chain."""
    try:
        schedule, depth_text = spec.split(":")
        depth = int(depth_text)
    except ValueError as exc:
        raise InvalidParameterError(
            f"chain spec must look like 'doubling:6', got {spec!r}") from exc
    return build_chain(h_ratio, depth, hbar_over_2pi, schedule)


def upper_bounds(algebras: Iterable[WeylAlgebra]) -> WeylAlgebra:
    """Join of a nonempty family."""
    algs: Sequence[WeylAlgebra] = list(algebras)
    if not algs:
        raise InvalidParameterError("empty family has no join")
    out = algs[0]
    for alg in algs[1:]:
        out = join(out, alg)
    return out
