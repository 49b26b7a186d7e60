"""Integer polynomials G and the exact fourth-root-of-unity phases i^G(k).

Phases are carried as exponents mod 4 so that every comparison is exact; the
complex value is only produced on request.

Polynomial text grammar accepted by :func:`parse_poly`::

    poly    := compact | text
    compact := int ("," int)+            # a_n, ..., a_1, a_0 (highest first)
    text    := term (("+" | "-") term)*
    term    := [int ["*"]] "x" ["^" int] | int

Whitespace is ignored.  A lone integer is the constant polynomial.  Rational
or decimal coefficients are rejected with :class:`NonIntegerCoefficient`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

ROOTS = (1 + 0j, 1j, -1 + 0j, -1j)


class PolyParseError(ValueError):
    pass


class NonIntegerCoefficient(PolyParseError):
    pass


@dataclass(frozen=True)
class IntPoly:
    """G(x) = sum_k coeffs[k] x^k with exact integer coefficients."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = []
        for a in self.coeffs:
            if isinstance(a, bool) or int(a) != a:
                raise NonIntegerCoefficient(f"coefficient {a!r} is not an integer")
            c.append(int(a))
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_highest_first(cls, coeffs) -> IntPoly:
        return cls(tuple(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __call__(self, k: int) -> int:
        v = 0
        for a in reversed(self.coeffs):
            v = v * k + a
        return v

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(p + q for p, q in zip(a, b)))

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def without_constant(self) -> IntPoly:
        return IntPoly((0,) + self.coeffs[1:])

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if k == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + "x" + (f"^{k}" if k > 1 else "")
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += sign + body
        return s

    def compact(self) -> str:
        return ",".join(str(a) for a in reversed(self.coeffs)) if self.coeffs else "0"


_TERM = re.compile(r"^(?:(\d+)\*?)?x(?:\^(\d+))?$|^(\d+)$")


def parse_poly(text: str) -> IntPoly:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise PolyParseError("empty polynomial")
    if re.search(r"[./]", s) or re.search(r"\de", s):
        raise NonIntegerCoefficient(f"only integer coefficients are supported: {text!r}")
    if "," in s:
        try:
            return IntPoly.from_highest_first(int(p) for p in s.split(","))
        except ValueError as exc:
            raise PolyParseError(f"bad compact polynomial {text!r}") from exc
    if s[0] not in "+-":
        s = "+" + s
    pieces = re.findall(r"([+-])([^+-]*)", s)
    if "".join(a + b for a, b in pieces) != s:
        raise PolyParseError(f"cannot parse {text!r}")
    coeffs: dict[int, int] = {}
    for sign, body in pieces:
        mt = _TERM.match(body)
        if not mt:
            raise PolyParseError(f"bad term {sign}{body!r} in {text!r}")
        if mt.group(3) is not None:
            k, a = 0, int(mt.group(3))
        else:
            a = int(mt.group(1)) if mt.group(1) else 1
            k = int(mt.group(2)) if mt.group(2) else 1
        coeffs[k] = coeffs.get(k, 0) + (a if sign == "+" else -a)
    n = max(coeffs) + 1
    return IntPoly(tuple(coeffs.get(k, 0) for k in range(n)))


def residue_mod4(G: IntPoly, k: int) -> int:
    """Non-negative residue of G(k) mod 4 (coefficients and k reduced first)."""
    k4 = k % 4
    v = 0
    for a in reversed(G.coeffs):
        v = (v * k4 + a % 4) % 4
    return v


def phase_exponent(G: IntPoly, k: int) -> int:
    return residue_mod4(G, k)


def phase(G: IntPoly, k: int) -> complex:
    """i ** G(k), exactly one of 1, i, -1, -i."""
    return ROOTS[residue_mod4(G, k)]


@dataclass(frozen=True)
class PhaseQuad:
    """Four fourth roots of unity stored as exponents of i."""

    exponents: tuple[int, int, int, int]

    def __post_init__(self):
        e = tuple(int(v) % 4 for v in self.exponents)
        if len(e) != 4:
            raise ValueError("PhaseQuad needs exactly four entries")
        object.__setattr__(self, "exponents", e)

    @property
    def values(self) -> tuple[complex, complex, complex, complex]:
        return tuple(ROOTS[e] for e in self.exponents)

    def __iter__(self):
        return iter(self.values)


def row_A1(G: IntPoly) -> PhaseQuad:
    """(i^G(0), i^G(-1), i^G(-2), i^G(-3)): phases on the f_0..f_3 parts."""
    return PhaseQuad(tuple(residue_mod4(G, -k) for k in range(4)))


def row_A2(G: IntPoly, m: int) -> PhaseQuad:
    """(i^G(m-1), ..., i^G(m+2)): phases on the y M_k x parts."""
    if m < 2:
        raise ValueError("row_A2 needs m >= 2")
    return PhaseQuad(tuple(residue_mod4(G, m - 1 + k) for k in range(4)))


@dataclass(frozen=True)
class ParityProfile:
    s0: int
    s1: int
    a1: int
    g_plus: int  # G(1)
    g_minus: int  # G(-1)


def parity_profile(G: IntPoly) -> ParityProfile:
    s0 = sum(G.coeffs[0::2])
    s1 = sum(G.coeffs[1::2])
    prof = ParityProfile(s0=s0, s1=s1, a1=G.coefficient(1), g_plus=G(1), g_minus=G(-1))
    assert 2 * s0 == prof.g_plus + prof.g_minus and 2 * s1 == prof.g_plus - prof.g_minus
    return prof


def bounded_by_parity(G: IntPoly) -> bool:
    p = parity_profile(G)
    return p.a1 % 2 == 0 and p.s1 % 2 == 0


def bounded_by_congruences(G: IntPoly, m: int = 2) -> bool:
    r = lambda k: residue_mod4(G, k)  # noqa: E731
    return (
        r(0) == r(-2)
        and r(-1) == r(-3)
        and r(m - 1) == r(m + 1)
        and r(m) == r(m + 2)
    )


def is_bounded_family(G: IntPoly) -> bool:
    """True iff a_1 and (G(1) - G(-1))/2 are both even.

    Checked against the residue-congruence characterisation; the two must
    agree for every integer polynomial.
    """
    by_parity = bounded_by_parity(G)
    if by_parity != bounded_by_congruences(G):
        raise AssertionError(f"bounded-family routes disagree for G={G}")
    return by_parity


def special_case_tag(G: IntPoly) -> str | None:
    """Name the transform when G's residue table matches a known kernel."""
    table = tuple(residue_mod4(G, k) for k in range(4))
    known = {
        (0, 0, 0, 0): "identity-plane-wave",
        (0, 1, 2, 3): "clifford-fourier",
        (0, 3, 2, 1): "clifford-fourier(-x)",
        (0, 2, 0, 2): "inverse-plane-wave",
    }
    # the kernel depends on G only through this table (k mod 4 determines G(k) mod 4)
    return known.get(table)
