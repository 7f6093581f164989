"""Integer machinery: gcd/lcm, extended Euclid, two-modulus CRT, torus winding."""
import math
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

from .exceptions import PreconditionError


def gcd(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise PreconditionError("gcd expects positive integers")
    return math.gcd(a, b)


def lcm(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise PreconditionError("lcm expects positive integers")
    return a // math.gcd(a, b) * b


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, v)
    return out


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = gcd(a, b) = s*a + t*b``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class CongruenceSystem:
    """``t = residue_a (mod modulus_n)`` and ``t = residue_b (mod modulus_p)``."""

    residue_a: int
    modulus_n: int
    residue_b: int
    modulus_p: int

    def __post_init__(self):
        if self.modulus_n < 1 or self.modulus_p < 1:
            raise PreconditionError("moduli must be >= 1")
        object.__setattr__(self, "residue_a", self.residue_a % self.modulus_n)
        object.__setattr__(self, "residue_b", self.residue_b % self.modulus_p)


def crt_solve(sys: CongruenceSystem) -> Optional[int]:
    """Least ``t >= 0`` solving both congruences, or ``None`` if they conflict.

    Moduli need not be coprime: a solution exists iff the residues agree
    modulo ``gcd(n, p)`` and is then unique modulo ``lcm(n, p)``.
    """
    a, n, b, p = sys.residue_a, sys.modulus_n, sys.residue_b, sys.modulus_p
    g, s, _ = extended_gcd(n, p)
    if (b - a) % g:
        return None
    period = n // g * p
    # t = a + n*k with n*k = b - a (mod p)  =>  k = s*(b-a)/g (mod p/g)
    k = (s * ((b - a) // g)) % (p // g)
    return (a + n * k) % period


@dataclass(frozen=True)
class CoverageReport:
    n: int
    p: int
    covered: FrozenSet[Tuple[int, int]] = field(repr=False)
    uncovered: FrozenSet[Tuple[int, int]]

    @property
    def surjective(self) -> bool:
        return not self.uncovered


def winding_coverage(n: int, p: int) -> CoverageReport:
    """Enumerate the image of ``t -> (t mod n, t mod p)`` over one full period.

    The map is ``lcm(n, p)``-periodic, so scanning ``[0, lcm)`` is exhaustive.
    """
    if n < 1 or p < 1:
        raise PreconditionError("n and p must be >= 1")
    covered = frozenset((t % n, t % p) for t in range(lcm(n, p)))
    every = {(i, j) for i in range(n) for j in range(p)}
    return CoverageReport(n, p, covered, frozenset(every - covered))


def switch_losslessness(n: int, p: int) -> bool:
    """A ``p``-periodic signal survives the ``n``-periodic switch iff ``gcd(n, p) = 1``."""
    return gcd(n, p) == 1


def general_losslessness(n: int, m: int, p: int) -> bool:
    """Verdict for a sufficiently rich ``m``-periodic mixer: ``m >= n * gcd(m, p)``.

    Only meaningful when the mixer is rich; see
    :func:`periodic_mixing.reconstruction.check_richness`.
    """
    if n < 1 or p < 1:
        raise PreconditionError("n and p must be >= 1")
    if m < n:
        raise PreconditionError(f"mixer period m={m} is smaller than the dimension n={n}")
    return m >= n * gcd(m, p)
