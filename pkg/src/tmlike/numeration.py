"""Linear numeration systems U(n+k) = U(n+k-1) + U(n) with greedy digits.

Initial weights are 1, 2, ..., k.  k=1 gives binary, k=2 Zeckendorf,
k=3 the Narayana system.  The parity of the number of 1-digits in the
greedy representation of n defines the order-k parity sequence, which for
k >= 2 coincides with the projected morphism fixed point from
`tmlike.words` (that agreement is a tested invariant, not an assumption).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Representation:
    """Greedy digit string of a non-negative integer, most significant first.

    The representation of 0 is the empty digit string; otherwise the
    leading digit is 1.  `digits[i]` weighs `U(len(digits)-1-i)`.
    """

    digits: tuple[int, ...]
    value: int

    def digit_at(self, i: int) -> int:
        """Digit at weight position i (0 = least significant)."""
        if i >= len(self.digits):
            return 0
        return self.digits[len(self.digits) - 1 - i]

    def ones(self) -> int:
        return sum(self.digits)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)


class NumerationSystem:
    """Weights of the order-k recurrence with a lazily grown table.

    The table only ever appends, so concurrent readers always observe a
    consistent prefix; extension itself is serialized by a lock.
    """

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("recurrence order k must be >= 1")
        self.k = k
        self._weights: list[int] = [j + 1 for j in range(k)]
        self._lock = threading.Lock()

    def _extend_to(self, count: int) -> None:
        with self._lock:
            w = self._weights
            while len(w) < count:
                nxt = w[-1] + w[-self.k]
                assert nxt <= 2 * w[-1], "greedy digits would exceed 1"
                w.append(nxt)

    def weight(self, i: int) -> int:
        if i < 0:
            raise ValueError("weight index must be >= 0")
        if i >= len(self._weights):
            self._extend_to(i + 1)
        return self._weights[i]

    def weights(self, count: int) -> list[int]:
        if count < 0:
            raise ValueError("count must be >= 0")
        if count > len(self._weights):
            self._extend_to(count)
        return self._weights[:count]

    def _top_index(self, n: int) -> int:
        """Largest i with U(i) <= n (n >= 1)."""
        i = 0
        while self.weight(i) <= n:
            i += 1
        return i - 1

    def represent(self, n: int) -> Representation:
        """Greedy expansion: repeatedly subtract the largest weight <= rest."""
        if n < 0:
            raise ValueError("cannot represent a negative integer")
        if n == 0:
            return Representation((), 0)
        top = self._top_index(n)
        w = self._weights
        digits = [0] * (top + 1)
        rest = n
        for i in range(top, -1, -1):
            if w[i] <= rest:
                digits[top - i] = 1
                rest -= w[i]
        assert rest == 0
        return Representation(tuple(digits), n)

    def value(self, digits: Sequence[int]) -> int:
        """Integer represented by a most-significant-first digit string."""
        top = len(digits) - 1
        w = self.weights(len(digits))
        return sum(d * w[top - i] for i, d in enumerate(digits))

    def parity(self, n: int) -> int:
        """Parity of the number of 1-digits of `n` (term n of the sequence)."""
        return self.represent(n).ones() & 1

    def parity_prefix(self, length: int) -> tuple[int, ...]:
        """First `length` terms of the parity sequence.

        Uses the greedy recursion x[n] = 1 - x[n - U(i)] for
        U(i) <= n < U(i+1): the top greedy digit is U(i) and the remainder
        n - U(i) is strictly below U(i), so whole weight blocks can be
        filled by complementing an earlier slice.
        """
        if length < 0:
            raise ValueError("length must be >= 0")
        if length == 0:
            return ()
        arr = np.zeros(length, dtype=np.uint8)
        i = 0
        while self.weight(i) < length:
            lo = self.weight(i)
            hi = min(self.weight(i + 1), length)
            arr[lo:hi] = 1 - arr[: hi - lo]
            i += 1
        return tuple(int(b) for b in arr)

    def parity_stream(self) -> Iterator[int]:
        """Parity terms for n = 0, 1, 2, ... without a length bound."""
        block = 1 << 14
        start = 0
        cache: list[int] = []
        while True:
            need = start + block
            cache = list(self.parity_prefix(need))
            for n in range(start, need):
                yield cache[n]
            start = need
            block *= 2


def weights(k: int, count: int) -> list[int]:
    """First `count` weights of the order-k system."""
    return NumerationSystem(k).weights(count)


def parity_sequence(k: int, length: int) -> tuple[int, ...]:
    """First `length` terms of the order-k parity sequence."""
    return NumerationSystem(k).parity_prefix(length)
