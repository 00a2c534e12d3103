"""Immutable factor index over a finite word.

Built on a suffix automaton (flat transition table, small integer
alphabets), answering factor, complexity, extension, occurrence and
return-word queries.  Left-side queries go through a second automaton
over the reversed word, built lazily on first use.

`stabilized_index` manages prefix sufficiency for infinite sources: it
doubles the indexed prefix until the complexity profile up to n_max+1
stops changing.  Because factor sets and witnessed extension sets only
grow with the prefix, and the extension sets of all length <= n factors
are pinned by C(0..n+1), profile agreement across one doubling freezes
every queried quantity.
"""
from __future__ import annotations

from array import array
from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_MAX_PREFIX = 1 << 22


class InsufficientPrefixError(Exception):
    """The indexed prefix is too short to answer the query."""

    def __init__(self, message: str, needed: int | None = None):
        super().__init__(message)
        self.needed = needed


class PrefixCapExceeded(Exception):
    """Stabilization hit the prefix cap before the profile settled."""

    def __init__(self, message: str, stable_n: int, index: "FactorIndex"):
        super().__init__(message)
        self.stable_n = stable_n
        self.index = index


class _Automaton:
    """Suffix automaton with transitions in one flat array of width A."""

    def __init__(self, seq: Sequence[int], alphabet_size: int):
        if len(seq) == 0:
            raise ValueError("cannot index an empty word")
        A = alphabet_size
        self.A = A
        self.length = len(seq)
        len_ = array("q", [0])
        link = array("q", [-1])
        pos = array("q", [-1])
        clone = array("b", [0])
        trans = array("q", [-1]) * A
        empty_row = array("q", [-1]) * A
        last = 0
        for i, c in enumerate(seq):
            if not 0 <= c < A:
                raise ValueError(f"symbol {c} outside alphabet of size {A}")
            cur = len(len_)
            len_.append(len_[last] + 1)
            link.append(-1)
            pos.append(i)
            clone.append(0)
            trans.extend(empty_row)
            p = last
            while p != -1 and trans[p * A + c] == -1:
                trans[p * A + c] = cur
                p = link[p]
            if p == -1:
                link[cur] = 0
            else:
                q = trans[p * A + c]
                if len_[p] + 1 == len_[q]:
                    link[cur] = q
                else:
                    cl = len(len_)
                    len_.append(len_[p] + 1)
                    link.append(link[q])
                    pos.append(pos[q])
                    clone.append(1)
                    trans.extend(trans[q * A:(q + 1) * A])
                    while p != -1 and trans[p * A + c] == q:
                        trans[p * A + c] = cl
                        p = link[p]
                    link[q] = cl
                    link[cur] = cl
            last = cur
        self.len_ = len_
        self.link = link
        self.pos = pos
        self.clone = clone
        self.trans = trans
        self.n_states = len(len_)
        self._np_len = np.frombuffer(len_, dtype=np.int64)
        self._np_link = np.frombuffer(link, dtype=np.int64)
        self._np_pos = np.frombuffer(pos, dtype=np.int64)
        self._np_trans = np.frombuffer(trans, dtype=np.int64).reshape(
            self.n_states, A)
        self._out_degree = (self._np_trans >= 0).sum(axis=1)
        self._child_head: array | None = None
        self._child_next: array | None = None

    # -- basic walks ---------------------------------------------------

    def state_of(self, word: Sequence[int]) -> int:
        """State reached by reading `word`, or -1 if absent."""
        s = 0
        A = self.A
        trans = self.trans
        for c in word:
            if not 0 <= c < A:
                return -1
            s = trans[s * A + c]
            if s == -1:
                return -1
        return s

    def out_letters(self, s: int) -> list[int]:
        base = s * self.A
        trans = self.trans
        return [c for c in range(self.A) if trans[base + c] != -1]

    def min_len(self, s: int) -> int:
        return self.len_[self.link[s]] + 1 if s != 0 else 0

    # -- occurrence machinery -------------------------------------------

    def _ensure_children(self) -> None:
        if self._child_head is not None:
            return
        head = array("q", [-1]) * self.n_states
        nxt = array("q", [-1]) * self.n_states
        link = self.link
        for s in range(self.n_states - 1, 0, -1):
            p = link[s]
            nxt[s] = head[p]
            head[p] = s
        self._child_head = head
        self._child_next = nxt

    def end_positions(self, s: int) -> list[int]:
        """All end positions of the factors in state s (unsorted)."""
        self._ensure_children()
        head, nxt = self._child_head, self._child_next
        clone, pos = self.clone, self.pos
        out = []
        stack = [s]
        while stack:
            v = stack.pop()
            if not clone[v]:
                out.append(pos[v])
            c = head[v]
            while c != -1:
                stack.append(c)
                c = nxt[c]
        return out

    # -- per-length profiles --------------------------------------------

    def length_profile(self) -> np.ndarray:
        """C(n) for n = 0..length: distinct factor counts per length."""
        L = self.length
        diff = np.zeros(L + 2, dtype=np.int64)
        mn = self._np_len[self._np_link[1:]] + 1
        mx = self._np_len[1:]
        np.add.at(diff, mn, 1)
        np.subtract.at(diff, mx + 1, 1)
        prof = np.cumsum(diff[: L + 1])
        prof[0] = 1
        return prof

    def special_profile(self, weighted: bool = False) -> np.ndarray:
        """Per length n: number of factors with >= 2 outgoing letters,
        or, if `weighted`, the sum of (out-degree - 1) over them.
        Index 0 counts the empty word."""
        L = self.length
        diff = np.zeros(L + 2, dtype=np.int64)
        deg = self._out_degree
        sel = np.nonzero(deg[1:] >= 2)[0] + 1
        w = (deg[sel] - 1) if weighted else np.ones(len(sel), dtype=np.int64)
        mn = self._np_len[self._np_link[sel]] + 1
        mx = self._np_len[sel]
        np.add.at(diff, mn, w)
        np.subtract.at(diff, mx + 1, w)
        prof = np.cumsum(diff[: L + 1])
        root_deg = int(self._out_degree[0])
        prof[0] = (root_deg - 1 if weighted else 1) if root_deg >= 2 else 0
        return prof

    def states_covering(self, n: int, min_degree: int = 0) -> np.ndarray:
        """States whose factor class contains a length-n factor."""
        mn = np.empty(self.n_states, dtype=np.int64)
        mn[0] = 0
        mn[1:] = self._np_len[self._np_link[1:]] + 1
        mask = (mn <= n) & (self._np_len >= n)
        if min_degree:
            mask &= self._out_degree >= min_degree
        mask[0] = mask[0] and n == 0
        return np.nonzero(mask)[0]


@dataclass(frozen=True)
class ExtensionRecord:
    """Witnessed left/right extension letters of one factor."""

    factor: tuple
    left_extensions: frozenset
    right_extensions: frozenset

    @property
    def is_left_special(self) -> bool:
        return len(self.left_extensions) >= 2

    @property
    def is_right_special(self) -> bool:
        return len(self.right_extensions) >= 2


@dataclass(frozen=True)
class ReturnWordSet:
    """Return words to a factor: the gaps between consecutive occurrences."""

    factor: tuple
    return_words: frozenset
    shortest: tuple


@dataclass(frozen=True)
class StabilizationInfo:
    prefix_length: int
    rounds: int
    n_max: int
    stable: bool
    stable_n: int


class FactorIndex:
    """Queries over the factors of a fixed finite word.

    The index is immutable after construction; the reverse automaton and
    occurrence structures are materialized lazily but never mutated
    afterwards, so concurrent readers are safe.
    """

    def __init__(self, source: Sequence[int], alphabet_size: int | None = None):
        src = tuple(source)
        if not src:
            raise ValueError("cannot index an empty word")
        if alphabet_size is None:
            alphabet_size = max(src) + 1
        self.source = src
        self.alphabet_size = alphabet_size
        self._fwd = _Automaton(src, alphabet_size)
        self._bwd_cache: _Automaton | None = None
        self._profile_cache: np.ndarray | None = None
        self.stabilization: StabilizationInfo | None = None

    # -- plumbing --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.source)

    @property
    def _bwd(self) -> _Automaton:
        if self._bwd_cache is None:
            self._bwd_cache = _Automaton(self.source[::-1], self.alphabet_size)
        return self._bwd_cache

    def _profile(self) -> np.ndarray:
        if self._profile_cache is None:
            self._profile_cache = self._fwd.length_profile()
        return self._profile_cache

    # -- complexity -------------------------------------------------------

    def complexity(self, n: int) -> int:
        """Number of distinct length-n factors."""
        if not 0 <= n <= len(self.source):
            raise ValueError(f"length {n} outside 0..{len(self.source)}")
        return int(self._profile()[n])

    def complexity_profile(self, n_max: int) -> list[int]:
        if not 0 <= n_max <= len(self.source):
            raise ValueError(f"n_max {n_max} outside 0..{len(self.source)}")
        return [int(v) for v in self._profile()[: n_max + 1]]

    def delta_complexity(self, n: int) -> int:
        """C(n+1) - C(n)."""
        if n + 1 > len(self.source) or n < 0:
            raise ValueError(f"need 0 <= n and n+1 <= {len(self.source)}")
        prof = self._profile()
        return int(prof[n + 1] - prof[n])

    # -- membership and extensions ----------------------------------------

    def contains(self, word: Sequence[int]) -> bool:
        return self._fwd.state_of(word) != -1

    def extensions(self, word: Sequence[int]) -> ExtensionRecord:
        w = tuple(word)
        s = self._fwd.state_of(w)
        if s == -1:
            raise ValueError("factor does not occur in the indexed word")
        right = frozenset(self._fwd.out_letters(s))
        t = self._bwd.state_of(w[::-1])
        left = frozenset(self._bwd.out_letters(t))
        return ExtensionRecord(w, left, right)

    def special_count(self, n: int, side: str) -> int:
        """Number of length-n factors that are special on `side`."""
        if side == "right":
            return int(self._fwd.special_profile()[n])
        if side == "left":
            return int(self._bwd.special_profile()[n])
        raise ValueError("side must be 'left' or 'right'")

    def special_counts(self, n_max: int, side: str) -> list[int]:
        aut = self._fwd if side == "right" else self._bwd
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        return [int(v) for v in aut.special_profile()[: n_max + 1]]

    def extension_degree_sum(self, n: int, side: str) -> int:
        """Sum of (#extensions - 1) over the `side`-special length-n factors."""
        aut = self._fwd if side == "right" else self._bwd
        return int(aut.special_profile(weighted=True)[n])

    def _words_of_states(self, aut: _Automaton, states: np.ndarray, n: int,
                         reverse: bool) -> list[tuple]:
        src = self.source
        L = len(src)
        out = []
        for s in states:
            if s == 0:
                out.append(())
                continue
            end = aut.pos[int(s)]
            if reverse:
                start = L - 1 - end
                out.append(src[start: start + n])
            else:
                out.append(src[end - n + 1: end + 1])
        return out

    def factors(self, n: int) -> list[tuple]:
        """All distinct length-n factors, in canonical letter order."""
        if not 0 <= n <= len(self.source):
            raise ValueError(f"length {n} outside 0..{len(self.source)}")
        states = self._fwd.states_covering(n)
        return sorted(self._words_of_states(self._fwd, states, n, False))

    def special_factors(self, n: int, side: str) -> list[ExtensionRecord]:
        """Length-n factors special on the requested side(s), sorted."""
        if not 0 <= n <= len(self.source):
            raise ValueError(f"length {n} outside 0..{len(self.source)}")
        if side == "right":
            states = self._fwd.states_covering(n, min_degree=2)
            words = set(self._words_of_states(self._fwd, states, n, False))
        elif side == "left":
            states = self._bwd.states_covering(n, min_degree=2)
            words = set(self._words_of_states(self._bwd, states, n, True))
        elif side == "bispecial":
            rstates = self._fwd.states_covering(n, min_degree=2)
            lstates = self._bwd.states_covering(n, min_degree=2)
            rwords = set(self._words_of_states(self._fwd, rstates, n, False))
            words = rwords & set(
                self._words_of_states(self._bwd, lstates, n, True))
        else:
            raise ValueError("side must be 'left', 'right' or 'bispecial'")
        return [self.extensions(w) for w in sorted(words)]

    # -- occurrences and return words ---------------------------------------

    def occurrences(self, word: Sequence[int]) -> list[int]:
        """All start positions of `word`, ascending; empty if absent."""
        w = tuple(word)
        if not w:
            return list(range(len(self.source) + 1))
        s = self._fwd.state_of(w)
        if s == -1:
            return []
        ends = self._fwd.end_positions(s)
        ends.sort()
        shift = len(w) - 1
        return [e - shift for e in ends]

    def first_occurrence(self, word: Sequence[int]) -> int | None:
        s = self._fwd.state_of(word)
        if s == -1:
            return None
        return self._fwd.pos[s] - len(tuple(word)) + 1

    def occurrence_count(self, word: Sequence[int]) -> int:
        s = self._fwd.state_of(word)
        if s == -1:
            return 0
        return len(self._fwd.end_positions(s))

    def return_words(self, word: Sequence[int]) -> ReturnWordSet:
        """Words between consecutive occurrences of `word`.

        Requires at least two occurrences in the indexed prefix; otherwise
        the caller should grow the prefix.
        """
        w = tuple(word)
        occ = self.occurrences(w)
        if len(occ) < 2:
            raise InsufficientPrefixError(
                f"factor occurs {len(occ)} time(s); need >= 2 for return words")
        src = self.source
        rets = {src[a:b] for a, b in zip(occ, occ[1:])}
        shortest = min(rets, key=lambda r: (len(r), src.index(r[0]) if r else 0))
        # tie-break by earliest first occurrence among the minimal length
        best_len = len(shortest)
        candidates = [r for r in rets if len(r) == best_len]
        if len(candidates) > 1:
            firsts = {r: self.first_occurrence(r) for r in candidates}
            shortest = min(candidates, key=lambda r: firsts[r])
        return ReturnWordSet(w, frozenset(rets), shortest)

    # -- context enumeration -------------------------------------------------

    def left_contexts(self, word: Sequence[int], depth: int) -> list[tuple]:
        """All words c of length `depth` with c + word a factor."""
        w = tuple(word)
        t = self._bwd.state_of(w[::-1])
        if t == -1:
            raise ValueError("factor does not occur in the indexed word")
        bwd = self._bwd
        out = []
        stack = [(t, ())]
        while stack:
            s, path = stack.pop()
            if len(path) == depth:
                out.append(path[::-1])
                continue
            for c in bwd.out_letters(s):
                stack.append((bwd.trans[s * bwd.A + c], path + (c,)))
        return sorted(out)

    def right_contexts(self, word: Sequence[int], depth: int) -> list[tuple]:
        """All words c of length `depth` with word + c a factor."""
        s = self._fwd.state_of(tuple(word))
        if s == -1:
            raise ValueError("factor does not occur in the indexed word")
        fwd = self._fwd
        out = []
        stack = [(s, ())]
        while stack:
            v, path = stack.pop()
            if len(path) == depth:
                out.append(path)
                continue
            for c in fwd.out_letters(v):
                stack.append((fwd.trans[v * fwd.A + c], path + (c,)))
        return sorted(out)


def check_boundary_alignment(ix: FactorIndex, factor: Sequence[int],
                             boundaries: set[int]) -> tuple[bool, int | None]:
    """True iff every occurrence of `factor` starts at one of `boundaries`;
    on failure also returns the first misaligned position."""
    for p in ix.occurrences(factor):
        if p not in boundaries:
            return False, p
    return True, None


def stabilized_index(stream: Iterable[int], n_max: int, *,
                     alphabet_size: int,
                     start_length: int | None = None,
                     max_prefix: int = DEFAULT_MAX_PREFIX) -> FactorIndex:
    """Index a prefix long enough that all length <= n_max quantities settle.

    The prefix doubles (starting from 4*n_max) until two consecutive rounds
    produce the same complexity profile up to n_max+1.  Raises
    PrefixCapExceeded, carrying the last index and the largest length whose
    profile did agree, if the cap is hit first.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    it = iter(stream)
    cache: list[int] = []
    target = start_length if start_length is not None else max(4 * n_max, 16)
    target = min(target, max_prefix)
    prev_sig: list[int] | None = None
    rounds = 0
    exhausted = False
    while True:
        if len(cache) < target:
            cache.extend(islice(it, target - len(cache)))
            if len(cache) < target:
                exhausted = True
        if not cache:
            raise ValueError("source stream produced no symbols")
        rounds += 1
        ix = FactorIndex(cache, alphabet_size)
        sig = ix.complexity_profile(min(n_max + 1, len(cache)))
        if prev_sig is not None and sig == prev_sig:
            ix.stabilization = StabilizationInfo(len(cache), rounds, n_max,
                                                 True, n_max)
            return ix
        if exhausted or len(cache) >= max_prefix:
            stable_n = 0
            if prev_sig is not None:
                m = min(len(sig), len(prev_sig))
                while stable_n + 1 < m and sig[stable_n + 1] == prev_sig[stable_n + 1]:
                    stable_n += 1
            ix.stabilization = StabilizationInfo(len(cache), rounds, n_max,
                                                 False, stable_n)
            raise PrefixCapExceeded(
                f"profile still changing at prefix cap {len(cache)}",
                stable_n, ix)
        prev_sig = sig
        target = min(target * 2, max_prefix)
