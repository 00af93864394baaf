"""Exact scalar arithmetic: the rationals and prime residue fields.

Scalars are plain Python values (Fraction or gmpy2.mpq in characteristic 0,
small ints in characteristic l), so everything built on top stays hashable
and equality checks are literal, with no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:  # gmpy2 is optional; it speeds rational arithmetic up considerably
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover
    _RAT = Fraction


class CharacteristicError(ValueError):
    """The field characteristic clashes with where the field is used."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: Q when characteristic == 0, else F_l for prime l."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not is_prime(self.characteristic):
            raise CharacteristicError(
                f"characteristic must be 0 or a prime, got {self.characteristic}"
            )

    # -- identity -----------------------------------------------------------

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime"

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    # -- scalar construction --------------------------------------------------

    def coerce(self, v):
        """Bring an int / Fraction / scalar string into this field."""
        if isinstance(v, str):
            return self.parse(v)
        if self.characteristic == 0:
            return _RAT(v)
        if not isinstance(v, int):
            raise TypeError(f"prime-field scalar must be an int, got {type(v)}")
        return v % self.characteristic

    @property
    def zero(self):
        return _RAT(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return _RAT(1) if self.characteristic == 0 else 1

    # -- arithmetic (values are assumed to already live in the field) --------

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else (a * b) % self.characteristic

    def neg(self, a):
        return -a if self.characteristic == 0 else (-a) % self.characteristic

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return 1 / _RAT(a)
        return pow(a, self.characteristic - 2, self.characteristic)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- serialization --------------------------------------------------------

    def render(self, a) -> str:
        """Scalar to string: "num/den" over Q, a decimal residue over F_l."""
        if self.characteristic == 0:
            return f"{a.numerator}/{a.denominator}"
        return str(a)

    def parse(self, s: str):
        if self.characteristic == 0:
            if "/" in s:
                num, den = s.split("/", 1)
                return _RAT(int(num), int(den))
            return _RAT(int(s))
        v = int(s)
        if not 0 <= v < self.characteristic:
            raise ValueError(f"residue {s} out of range [0, {self.characteristic})")
        return v

    def to_json(self) -> dict:
        return {"kind": self.kind, "characteristic": self.characteristic}

    @classmethod
    def from_json(cls, doc: dict) -> "FieldSpec":
        char = int(doc["characteristic"])
        spec = cls(char)
        if doc.get("kind") is not None and doc["kind"] != spec.kind:
            raise ValueError(f"field kind {doc['kind']!r} inconsistent with characteristic {char}")
        return spec


QQ = FieldSpec(0)


def GF(ell: int) -> FieldSpec:
    return FieldSpec(ell)
