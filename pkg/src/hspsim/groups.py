"""Black-box group backends: elements are packed integer codes, multiplication
is the only group oracle.  Identity, inverses and order information are derived
from repeated m-th powers, never read off the representation.

Three concrete encodings: permutations (image lists packed in base degree),
finite multiplication tables (element index), and unit groups modulo N
(the residue itself).
"""

from __future__ import annotations

import json
from math import gcd


class GroupError(Exception):
    pass


class BadOrderError(GroupError):
    """An element's order has a prime factor outside the working modulus."""


class GroupBackend:
    """Shared surface: code length l_bits, generator codes, and mul()."""

    kind = "abstract"

    def __init__(self):
        self.mul_calls = 0

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def identity_code(self) -> int:
        """Encoding-level identity, used only to seed |identity> registers."""
        raise NotImplementedError

    def encode_element(self, obj) -> int:
        """Code for an element in this backend's input notation (image list,
        table index or residue)."""
        raise NotImplementedError

    def code_space(self) -> int:
        return 1 << self.l_bits


class PermutationBackend(GroupBackend):
    kind = "permutation"

    def __init__(self, degree: int, generators):
        super().__init__()
        if degree < 1:
            raise ValueError("degree must be positive")
        self.degree = degree
        span = degree**degree
        self.l_bits = max(1, (span - 1).bit_length())
        self.generators = [self.encode(tuple(g)) for g in generators]

    def encode(self, perm) -> int:
        if sorted(perm) != list(range(self.degree)):
            raise ValueError(f"not a permutation of range({self.degree}): {perm}")
        code = 0
        for img in reversed(perm):
            code = code * self.degree + img
        return code

    def decode(self, code: int):
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, self.degree)
            out.append(r)
        return tuple(out)

    def mul(self, a: int, b: int) -> int:
        self.mul_calls += 1
        pa, pb = self.decode(a), self.decode(b)
        return self.encode(tuple(pa[pb[i]] for i in range(self.degree)))

    def identity_code(self) -> int:
        return self.encode(tuple(range(self.degree)))

    def encode_element(self, obj) -> int:
        return self.encode(tuple(obj))


class TableBackend(GroupBackend):
    kind = "table"

    def __init__(self, table, generators):
        super().__init__()
        self.table = [list(row) for row in table]
        self.size = len(self.table)
        if any(len(row) != self.size for row in self.table):
            raise ValueError("multiplication table must be square")
        self.l_bits = max(1, (self.size - 1).bit_length())
        self.generators = [int(g) for g in generators]

    def mul(self, a: int, b: int) -> int:
        self.mul_calls += 1
        return self.table[a][b]

    def identity_code(self) -> int:
        for e in range(self.size):
            if all(self.table[e][x] == x for x in range(self.size)):
                return e
        raise GroupError("table has no identity element")

    def encode_element(self, obj) -> int:
        code = int(obj)
        if not 0 <= code < self.size:
            raise ValueError(f"table index out of range: {code}")
        return code


class UnitsBackend(GroupBackend):
    kind = "units"

    def __init__(self, modulus: int, generators):
        super().__init__()
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus
        self.l_bits = max(1, (modulus - 1).bit_length())
        self.generators = [int(g) % modulus for g in generators]
        for g in self.generators:
            if gcd(g, modulus) != 1:
                raise ValueError(f"{g} is not a unit modulo {modulus}")

    def mul(self, a: int, b: int) -> int:
        self.mul_calls += 1
        return (a * b) % self.modulus

    def identity_code(self) -> int:
        return 1 % self.modulus

    def encode_element(self, obj) -> int:
        code = int(obj) % self.modulus
        if gcd(code, self.modulus) != 1:
            raise ValueError(f"{obj} is not a unit modulo {self.modulus}")
        return code


def load_group(obj) -> tuple[GroupBackend, int]:
    """Build a backend from its JSON description; returns (backend, m)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    m = int(obj.get("m", 2))
    if kind == "permutation":
        backend = PermutationBackend(int(obj["degree"]), obj["generators"])
    elif kind == "table":
        backend = TableBackend(obj["table"], obj.get("generators", []))
        if len(backend.table) != int(obj.get("size", backend.size)):
            raise ValueError("table size field disagrees with data")
    elif kind == "units":
        backend = UnitsBackend(int(obj["modulus"]), obj["generators"])
    else:
        raise ValueError(f"unknown group kind {kind!r}")
    return backend, m


class GroupArith:
    """Derived group arithmetic over a backend, for a fixed working modulus m.

    Identity and inverses come from the smallest power of the form m^t fixing
    the element (t at most the code length), exactly the bound that holds when
    the group order divides a power of m.
    """

    def __init__(self, backend: GroupBackend, m: int):
        if m < 2:
            raise ValueError("working modulus must be at least 2")
        self.backend = backend
        self.m = m
        self._identity = None

    def mul(self, a: int, b: int) -> int:
        return self.backend.mul(a, b)

    def power(self, x: int, e: int) -> int:
        if e < 0:
            return self.power_no_identity(self.inverse(x), -e)
        if e == 0:
            return self.identity(x)
        return self.power_no_identity(x, e)

    def _fixing_exponent(self, x: int) -> int | None:
        """Least t in [0, l] with x^(m^t + 1) = x, or None."""
        y = x
        for t in range(self.backend.l_bits + 1):
            if self.mul(y, x) == x:
                return t
            y = self._m_th_power(y)
        return None

    def _m_th_power(self, y: int) -> int:
        return self.power_no_identity(y, self.m)

    def identity(self, hint: int | None = None) -> int:
        if self._identity is not None:
            return self._identity
        if hint is not None:
            x = hint
        elif self.backend.generators:
            x = self.backend.generators[0]
        else:
            self._identity = self.backend.identity_code()
            return self._identity
        t = self._fixing_exponent(x)
        if t is None:
            raise BadOrderError(f"order of {x} does not divide a power of {self.m}")
        if t == 0:
            # x^(m^0 + 1) = x^2 = x, so x is the identity itself
            self._identity = x
        else:
            self._identity = self.power_no_identity(x, self.m**t)
        return self._identity

    def power_no_identity(self, x: int, e: int) -> int:
        # e >= 1; square-and-multiply without needing the identity
        acc = None
        base = x
        while e:
            if e & 1:
                acc = base if acc is None else self.mul(acc, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return acc

    def inverse(self, x: int) -> int:
        t = self._fixing_exponent(x)
        if t is None:
            raise BadOrderError(f"order of {x} does not divide a power of {self.m}")
        e = self.m**t - 1
        if e == 0:
            return x  # x is the identity
        return self.power_no_identity(x, e)

    def order_m_exponent(self, x: int) -> int | None:
        """Least k with x^(m^k) = identity, or None when the order of x has a
        prime factor outside m (the not-dividing outcome)."""
        t = self._fixing_exponent(x)
        if t is None:
            return None
        e = self.identity(x)
        y = x
        for k in range(self.backend.l_bits + 1):
            if y == e:
                return k
            y = self._m_th_power(y)
        return None

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inverse(a), self.inverse(b)), self.mul(a, b))

    def conjugate(self, a: int, by: int) -> int:
        return self.mul(self.mul(self.inverse(by), a), by)
