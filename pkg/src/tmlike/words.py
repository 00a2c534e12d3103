"""Doubled alphabets, words, morphisms and codings.

The order-k alphabet has 2k letters: the plain letters 0..k-1 and their
primed twins, encoded as k..2k-1 (so the twin of code c is (c + k) mod 2k).
Words are plain tuples of letter codes; projected binary words are tuples
of 0/1.  `make_morphism(k)` builds the morphism whose fixed point, after
`make_projection(k)`, is the order-k parity sequence of the companion
numeration system (see `tmlike.numeration`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, Iterator, Sequence

Word = tuple  # tuple of int letter codes


def letter(index: int, k: int, primed: bool = False) -> int:
    """Letter code for `index` (primed or not) in the order-k alphabet."""
    if not 0 <= index < k:
        raise ValueError(f"letter index {index} out of range for k={k}")
    return index + k if primed else index


def letter_index(code: int, k: int) -> int:
    return code - k if code >= k else code


def is_primed(code: int, k: int) -> bool:
    return code >= k


def twin(word: Sequence[int], k: int) -> Word:
    """Flip the primed flag of every letter (an involution on words)."""
    n = 2 * k
    return tuple((c + k) % n for c in word)


def complement(bits: Sequence[int]) -> Word:
    """Exchange 0 and 1 in a binary word (the projected twin)."""
    return tuple(1 - b for b in bits)


def format_word(word: Sequence[int], k: int) -> str:
    """Render letters as decimal indices, primed ones with an apostrophe.

    Tokens are whitespace-separated so the format stays unambiguous for
    k >= 10, e.g. ``0 1 2 0'``.
    """
    parts = []
    for c in word:
        if not 0 <= c < 2 * k:
            raise ValueError(f"letter code {c} out of range for k={k}")
        parts.append(f"{c - k}'" if c >= k else str(c))
    return " ".join(parts)


def format_bits(bits: Sequence[int]) -> str:
    """Render a binary word as an unseparated '0'/'1' string."""
    return "".join("01"[b] for b in bits)


def parse_word(text: str, k: int) -> Word:
    word = []
    for tok in text.split():
        primed = tok.endswith("'")
        idx = int(tok[:-1] if primed else tok)
        word.append(letter(idx, k, primed))
    return tuple(word)


def parse_bits(text: str) -> Word:
    return tuple(int(c) for c in text.strip())


@dataclass(frozen=True)
class Morphism:
    """A non-erasing morphism on the order-k alphabet, prolongable on 0.

    `images[c]` is the image word of letter code c.  Prolongability on the
    seed letter 0 (image starts with 0 and has length >= 2) is required so
    the fixed point can be streamed.
    """

    k: int
    images: tuple[Word, ...]

    def __post_init__(self):
        n = 2 * self.k
        if len(self.images) != n:
            raise ValueError(f"expected {n} images, got {len(self.images)}")
        for c, img in enumerate(self.images):
            if len(img) == 0:
                raise ValueError(f"erasing image for letter {c}")
            if any(not 0 <= a < n for a in img):
                raise ValueError(f"image of letter {c} leaves the alphabet")
        if self.images[0][0] != 0 or len(self.images[0]) < 2:
            raise ValueError("morphism is not prolongable on letter 0")

    @property
    def alphabet_size(self) -> int:
        return 2 * self.k

    def apply(self, word: Sequence[int]) -> Word:
        """Image of a word: concatenation of the letter images."""
        images = self.images
        n = self.alphabet_size
        out = []
        for a in word:
            if not 0 <= a < n:
                raise ValueError(f"letter code {a} not in the alphabet")
            out.extend(images[a])
        return tuple(out)

    def iterate(self, a: int, n: int) -> Word:
        """n-fold image of the single letter `a`."""
        if n < 0:
            raise ValueError("iteration count must be >= 0")
        w: Word = (a,)
        for _ in range(n):
            w = self.apply(w)
        return w

    def stream(self) -> Iterator[int]:
        """Letters of the fixed point on seed 0, produced lazily.

        Emit-and-expand: the growing buffer is always a prefix of its own
        image, so each appended block is final.  Amortized O(1) per letter.
        """
        images = self.images
        buf = list(images[0])
        ptr = 1
        emitted = 0
        while True:
            while emitted < len(buf):
                yield buf[emitted]
                emitted += 1
            buf.extend(images[buf[ptr]])
            ptr += 1

    def prefix(self, length: int) -> Word:
        """The first `length` letters of the fixed point on seed 0."""
        if length < 0:
            raise ValueError("length must be >= 0")
        return tuple(islice(self.stream(), length))

    def image_lengths(self, n: int) -> list[int]:
        """|n-th image| for every letter, via iterated letter counts."""
        sizes = [1] * self.alphabet_size
        for _ in range(n):
            sizes = [sum(sizes[b] for b in self.images[a])
                     for a in range(self.alphabet_size)]
        return sizes


@dataclass(frozen=True)
class Coding:
    """A letter-to-letter map from the order-k alphabet onto {0, 1}."""

    k: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != 2 * self.k:
            raise ValueError("coding table must cover the whole alphabet")

    def apply(self, word: Sequence[int]) -> Word:
        table = self.table
        n = len(table)
        out = []
        for a in word:
            if not 0 <= a < n:
                raise ValueError(f"letter code {a} not in the alphabet")
            out.append(table[a])
        return tuple(out)

    __call__ = apply


def make_morphism(k: int) -> Morphism:
    """The order-k morphism on 2k letters.

    0 -> 01, j -> j+1 (1 <= j <= k-2), k-1 -> 0'; primed letters map to the
    twin images except that (k-1)' wraps back to 0.  Defined for k >= 2.
    """
    if k < 2:
        raise ValueError("the morphism family is defined for k >= 2")
    images: list[Word] = []
    for j in range(k):
        if j == 0:
            images.append((0, 1))
        elif j < k - 1:
            images.append((j + 1,))
        else:
            images.append((k,))          # k-1 -> 0'
    for j in range(k):
        if j == 0:
            images.append((k, k + 1))    # 0' -> 0'1'
        elif j < k - 1:
            images.append((k + j + 1,))
        else:
            images.append((0,))          # (k-1)' -> 0
    return Morphism(k, tuple(images))


def make_projection(k: int) -> Coding:
    """The binary projection: 0 and primed non-zero letters go to 0,
    0' and plain non-zero letters go to 1."""
    if k < 2:
        raise ValueError("the projection is defined for k >= 2")
    table = [0] + [1] * (k - 1) + [1] + [0] * (k - 1)
    return Coding(k, tuple(table))


def seed_image(m: Morphism, n: int) -> Word:
    """The n-th iterated image of the seed letter 0."""
    return m.iterate(0, n)


def fixed_point_prefix(m: Morphism, length: int) -> Word:
    return m.prefix(length)


def project(c: Coding, word: Sequence[int]) -> Word:
    return c.apply(word)


def image_boundaries(m: Morphism, n: int, length: int) -> set[int]:
    """Positions < `length` where an n-th letter image begins, in the
    decomposition of the fixed point as concatenated n-th images."""
    if n < 0:
        raise ValueError("n must be >= 0")
    sizes = m.image_lengths(n)
    out: set[int] = set()
    pos = 0
    for a in m.stream():
        if pos >= length:
            break
        out.add(pos)
        pos += sizes[a]
    return out
