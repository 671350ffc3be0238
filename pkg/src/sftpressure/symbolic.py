"""Subshifts of finite type, words and locally constant potentials

This module implements the symbolic layer everything else is built on:
- SftSystem: alphabet plus 0/1 transition matrix with component metadata
- Word: a finite symbol sequence (0-indexed internally)
- Potential: a real table over admissible words of a fixed depth
- Birkhoff sums, word counts and higher-block recoding

Symbols are 0-indexed here. Word strings in JSON documents and human
output are 1-indexed (see sftpressure.parser).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

import networkx as nx
import numpy as np

from sftpressure.exceptions import (
    BadEntryError,
    DepthTooLargeError,
    ExtraEntryError,
    InadmissibleWordError,
    InputError,
    InvalidPotentialError,
    InvalidSystemError,
    MissingEntryError,
    NonFiniteError,
    NonSquareError,
    NotPrimitiveError,
    StrandedSymbolError,
    TooShortError,
    WordCountOverflowError,
)

logger = logging.getLogger(__name__)

# Exact integer word counts up to this length, float products beyond it
EXACT_COUNT_LIMIT = 90
MAX_WORD_LENGTH = 10**6

WordKey = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SftSystem:
    """A one-sided subshift of finite type

    Attributes:
        alphabet_size: Number of symbols N
        adjacency: Read-only N×N integer matrix with entries in {0, 1}
        scc_count: Number of strongly connected components of the graph
        is_primitive: True iff the matrix is irreducible and aperiodic
        components: Recurrent components (SCCs carrying a cycle), each a
            sorted tuple of symbols, ordered by smallest symbol
    """

    alphabet_size: int
    adjacency: np.ndarray
    scc_count: int
    is_primitive: bool
    components: tuple[tuple[int, ...], ...] = ()

    def allows(self, a: int, b: int) -> bool:
        """Return True if symbol b may follow symbol a"""
        return bool(self.adjacency[a, b])

    def successors(self, a: int) -> list[int]:
        return [int(b) for b in np.flatnonzero(self.adjacency[a])]

    def is_admissible(self, word: Union["Word", Sequence[int]]) -> bool:
        """Check that every consecutive pair of the word is allowed"""
        symbols = word.symbols if isinstance(word, Word) else tuple(word)
        if any(s < 0 or s >= self.alphabet_size for s in symbols):
            return False
        return all(self.allows(a, b) for a, b in zip(symbols, symbols[1:]))

    def admissible_words(self, length: int) -> list[WordKey]:
        """Enumerate admissible words of the given length in lexicographic order

        Only meant for short lengths (potential tables, tests). Use
        count_admissible_words for counting.
        """
        if length < 1:
            raise InputError(f"Word length must be positive, got {length}")
        words: list[WordKey] = [(s,) for s in range(self.alphabet_size)]
        for _ in range(length - 1):
            words = [w + (b,) for w in words for b in self.successors(w[-1])]
        return words

    def graph(self) -> nx.DiGraph:
        return nx.from_numpy_array(self.adjacency, create_using=nx.DiGraph)

    def __repr__(self) -> str:
        rows = self.adjacency.tolist()
        return (
            f"SftSystem(N={self.alphabet_size}, adjacency={rows}, "
            f"scc_count={self.scc_count}, is_primitive={self.is_primitive})"
        )


@dataclass(frozen=True)
class Word:
    """Finite symbol sequence, 0-indexed

    Examples:
        >>> Word((0, 1, 0)).length
        3
        >>> str(Word((0, 1, 0)))
        '121'
    """

    symbols: WordKey

    @property
    def length(self) -> int:
        return len(self.symbols)

    def shifted(self, m: int) -> "Word":
        """Drop the first m symbols (the left shift applied m times)"""
        return Word(self.symbols[m:])

    def __str__(self) -> str:
        return "".join(str(s + 1) for s in self.symbols)


@dataclass(frozen=True, eq=False)
class Potential:
    """Locally constant potential of a given depth

    The value at a point x is table[x_0 ... x_{depth-1}].

    Attributes:
        system: The SftSystem the potential lives on
        depth: Window length k ≥ 1
        table: Read-only mapping from admissible k-words (0-indexed tuples)
               to finite reals
    """

    system: SftSystem
    depth: int
    table: Mapping[WordKey, float] = field(repr=False)

    def __call__(self, word: Sequence[int]) -> float:
        return self.table[tuple(word[: self.depth])]

    @property
    def max_value(self) -> float:
        return max(self.table.values())

    @property
    def min_value(self) -> float:
        return min(self.table.values())

    def as_vector(self) -> np.ndarray:
        """Values of a depth-1 potential as an N-vector"""
        if self.depth != 1:
            raise InvalidPotentialError(
                f"as_vector needs a depth-1 potential, got depth {self.depth}"
            )
        return np.array(
            [self.table[(s,)] for s in range(self.system.alphabet_size)], dtype=float
        )

    def as_matrix(self, fill: float = 0.0) -> np.ndarray:
        """Values as an N×N matrix indexed by (x_0, x_1)

        Depth-1 potentials are constant along rows. Forbidden transitions
        hold `fill`.
        """
        if self.depth > 2:
            raise DepthTooLargeError(
                f"as_matrix needs depth ≤ 2, got depth {self.depth}"
            )
        n = self.system.alphabet_size
        values = np.full((n, n), fill, dtype=float)
        for i, j in zip(*np.nonzero(self.system.adjacency)):
            key = (int(i),) if self.depth == 1 else (int(i), int(j))
            values[i, j] = self.table[key]
        return values

    def promote(self, depth: int) -> "Potential":
        """Same function, tabulated on longer windows"""
        if depth < self.depth:
            raise InvalidPotentialError(
                f"Cannot lower depth from {self.depth} to {depth}"
            )
        if depth == self.depth:
            return self
        table = {w: self.table[w[: self.depth]] for w in self.system.admissible_words(depth)}
        return _trusted_potential(self.system, depth, table)

    def sup_norm(self) -> float:
        return max(abs(v) for v in self.table.values())

    def _aligned(self, other: "Potential") -> tuple["Potential", "Potential"]:
        if not same_system(self.system, other.system):
            raise InvalidPotentialError("Potentials live on different systems")
        depth = max(self.depth, other.depth)
        return self.promote(depth), other.promote(depth)

    def __add__(self, other: Union["Potential", float]) -> "Potential":
        if isinstance(other, Potential):
            a, b = self._aligned(other)
            table = {w: a.table[w] + b.table[w] for w in a.table}
            return _trusted_potential(self.system, a.depth, table)
        c = float(other)
        return _trusted_potential(
            self.system, self.depth, {w: v + c for w, v in self.table.items()}
        )

    __radd__ = __add__

    def __mul__(self, scalar: float) -> "Potential":
        c = float(scalar)
        return _trusted_potential(
            self.system, self.depth, {w: c * v for w, v in self.table.items()}
        )

    __rmul__ = __mul__

    def __neg__(self) -> "Potential":
        return self * -1.0

    def __sub__(self, other: Union["Potential", float]) -> "Potential":
        return self + (-other)


def same_system(a: SftSystem, b: SftSystem) -> bool:
    """Structural equality of two systems"""
    return a is b or (
        a.alphabet_size == b.alphabet_size
        and np.array_equal(a.adjacency, b.adjacency)
    )


def _trusted_potential(
    system: SftSystem, depth: int, table: Mapping[WordKey, float]
) -> Potential:
    return Potential(system, depth, MappingProxyType(dict(table)))


def make_sft(alphabet_size: int, adjacency) -> SftSystem:
    """Validate a transition matrix and build an SftSystem

    Args:
        alphabet_size: Number of symbols N
        adjacency: N×N nested sequence or array with entries in {0, 1}

    Returns:
        SftSystem with SCC count, primitivity and recurrent components

    Raises:
        NonSquareError: Matrix is not N×N
        BadEntryError: An entry is not exactly 0 or 1
        StrandedSymbolError: A row or column contains only zeros

    Example:
        >>> make_sft(2, [[1, 1], [1, 0]]).is_primitive
        True
    """
    if alphabet_size < 1:
        raise InvalidSystemError(f"Alphabet size must be positive, got {alphabet_size}")
    try:
        raw = np.array(adjacency, dtype=float)
    except (TypeError, ValueError) as e:
        raise BadEntryError(f"Adjacency entries must be 0 or 1: {e}") from e

    if raw.shape != (alphabet_size, alphabet_size):
        raise NonSquareError(
            f"Adjacency must be {alphabet_size}×{alphabet_size}, got shape {raw.shape}"
        )
    bad = ~np.isin(raw, (0.0, 1.0))
    if bad.any():
        i, j = (int(k) for k in np.argwhere(bad)[0])
        raise BadEntryError(
            f"Adjacency entry ({i + 1},{j + 1}) is {raw[i, j]!r}, expected 0 or 1"
        )

    matrix = raw.astype(np.int64)
    for axis, label in ((1, "row"), (0, "column")):
        empty = np.flatnonzero(matrix.sum(axis=axis) == 0)
        if empty.size:
            raise StrandedSymbolError(
                f"Symbol {int(empty[0]) + 1} has an all-zero {label}"
            )
    matrix.setflags(write=False)

    graph = nx.from_numpy_array(matrix, create_using=nx.DiGraph)
    sccs = [sorted(c) for c in nx.strongly_connected_components(graph)]
    recurrent = [
        tuple(int(s) for s in c)
        for c in sccs
        if len(c) > 1 or matrix[c[0], c[0]] == 1
    ]
    recurrent.sort(key=lambda c: c[0])
    primitive = len(sccs) == 1 and nx.is_aperiodic(graph)

    return SftSystem(
        alphabet_size=alphabet_size,
        adjacency=matrix,
        scc_count=len(sccs),
        is_primitive=primitive,
        components=tuple(recurrent),
    )


def golden_mean() -> SftSystem:
    """The golden mean shift: symbol 2 cannot follow itself"""
    return make_sft(2, [[1, 1], [1, 0]])


def full_shift(alphabet_size: int) -> SftSystem:
    return make_sft(alphabet_size, np.ones((alphabet_size, alphabet_size), dtype=int))


def mixing_time(system: SftSystem) -> int:
    """Smallest M with adjacency^M entrywise positive

    The search stops at Wielandt's bound N² − 2N + 2.

    Raises:
        NotPrimitiveError: No power up to the bound is positive
    """
    n = system.alphabet_size
    bound = max(1, n * n - 2 * n + 2)
    a = system.adjacency.astype(bool)
    power = a.copy()
    for m in range(1, bound + 1):
        if power.all():
            return m
        power = (power.astype(np.int64) @ a.astype(np.int64)) > 0
    raise NotPrimitiveError(f"No power up to {bound} of the adjacency is positive")


def count_admissible_words(system: SftSystem, n: int) -> int:
    """Number of admissible words of length n

    Computed with n − 1 matrix-vector products: exact integers for
    n ≤ EXACT_COUNT_LIMIT, floating point beyond.

    Raises:
        InputError: n < 1 or n > MAX_WORD_LENGTH
        WordCountOverflowError: The count exceeds the float range
    """
    if n < 1:
        raise InputError(f"Word length must be positive, got {n}")
    if n > MAX_WORD_LENGTH:
        raise InputError(f"Word length {n} exceeds the supported {MAX_WORD_LENGTH}")

    if n <= EXACT_COUNT_LIMIT:
        a = system.adjacency.astype(object)
        v = np.array([1] * system.alphabet_size, dtype=object)
        for _ in range(n - 1):
            v = a.dot(v)
        return int(sum(v))

    a = system.adjacency.astype(float)
    v = np.ones(system.alphabet_size)
    with np.errstate(over="ignore"):
        for step in range(n - 1):
            v = a @ v
            if not np.isfinite(v).all():
                raise WordCountOverflowError(
                    f"Count of {n}-words overflows (after {step + 2} symbols)"
                )
        total = v.sum()
    if not math.isfinite(total):
        raise WordCountOverflowError(f"Count of {n}-words overflows")
    return int(total)


def make_potential(
    system: SftSystem, depth: int, table: Mapping[Sequence[int], float]
) -> Potential:
    """Validate a table over admissible depth-words

    Args:
        system: Host system
        depth: Window length k ≥ 1
        table: Mapping from 0-indexed k-words (tuples or Words) to reals

    Raises:
        MissingEntryError: An admissible k-word has no value
        ExtraEntryError: A key is not an admissible k-word
        NonFiniteError: A value is NaN or infinite
    """
    if depth < 1:
        raise InvalidPotentialError(f"Depth must be positive, got {depth}")

    normalized: dict[WordKey, float] = {}
    for key, value in table.items():
        word = key.symbols if isinstance(key, Word) else tuple(int(s) for s in key)
        if len(word) != depth or not system.is_admissible(word):
            raise ExtraEntryError(
                f"Key {Word(word)} is not an admissible word of length {depth}"
            )
        v = float(value)
        if not math.isfinite(v):
            raise NonFiniteError(f"Value for {Word(word)} is not finite: {value!r}")
        normalized[word] = v

    for word in system.admissible_words(depth):
        if word not in normalized:
            raise MissingEntryError(f"No value for admissible word {Word(word)}")

    return _trusted_potential(system, depth, normalized)


def zero_potential(system: SftSystem) -> Potential:
    return constant_potential(system, 0.0)


def constant_potential(system: SftSystem, value: float) -> Potential:
    return make_potential(system, 1, {(s,): value for s in range(system.alphabet_size)})


def indicator_potential(system: SftSystem, symbols: Iterable[int]) -> Potential:
    """Depth-1 indicator of the cylinders [x_0 = s] for s in symbols"""
    chosen = set(symbols)
    return make_potential(
        system,
        1,
        {(s,): 1.0 if s in chosen else 0.0 for s in range(system.alphabet_size)},
    )


def coboundary(u: Potential) -> Potential:
    """The depth-2 potential u∘σ − u for a depth-1 u"""
    if u.depth != 1:
        raise InvalidPotentialError(f"coboundary needs depth 1, got {u.depth}")
    table = {(i, j): u.table[(j,)] - u.table[(i,)] for i, j in u.system.admissible_words(2)}
    return _trusted_potential(u.system, 2, table)


def birkhoff_sum(
    potential: Potential, word: Word, n: int, periodic: bool = False
) -> float:
    """Sum of the potential along the first n shifts of the word

    Args:
        potential: Depth-k potential
        word: Admissible word; with periodic=True it is read cyclically
        n: Number of summands
        periodic: Treat the word as a periodic orbit (wraparound must be
                  admissible)

    Raises:
        TooShortError: Non-periodic word shorter than n + k − 1
        InadmissibleWordError: Forbidden transition in the word (or its
                               wraparound when periodic)
    """
    if n < 1:
        raise InputError(f"Number of summands must be positive, got {n}")
    system = potential.system
    symbols = word.symbols
    k = potential.depth

    if not system.is_admissible(symbols):
        raise InadmissibleWordError(f"Word {word} is not admissible")

    if periodic:
        if not symbols:
            raise TooShortError("Periodic word must be non-empty")
        if not system.allows(symbols[-1], symbols[0]):
            raise InadmissibleWordError(f"Wraparound of periodic word {word} is forbidden")
        length = len(symbols)
        windows = (
            tuple(symbols[(i + j) % length] for j in range(k)) for i in range(n)
        )
    else:
        if len(symbols) < n + k - 1:
            raise TooShortError(
                f"Word {word} has length {len(symbols)}, need {n + k - 1}"
            )
        windows = (symbols[i : i + k] for i in range(n))

    return float(sum(potential.table[w] for w in windows))


def higher_block_recode(
    system: SftSystem, potential: Potential, block_length: Optional[int] = None
) -> tuple[SftSystem, Potential]:
    """Present a depth-k potential on a higher-block system

    The symbols of the L-block system are the admissible L-words in
    lexicographic order, and u → v is allowed when u[1:] == v[:-1] and the
    last symbols are compatible. The recoded potential has depth 2 when
    k = L + 1 and depth 1 when k ≤ L.

    By default depth-1 potentials pass through unchanged, depth 2 is
    recoded on 2-blocks (giving depth 1) and depth k ≥ 3 on (k−1)-blocks
    (giving depth 2).

    Raises:
        DepthTooLargeError: k > L + 1
    """
    k = potential.depth
    if block_length is None:
        if k == 1:
            return system, potential
        block_length = 2 if k == 2 else k - 1
    if block_length < 1:
        raise InputError(f"Block length must be positive, got {block_length}")
    if k > block_length + 1:
        raise DepthTooLargeError(
            f"Depth {k} needs blocks of length ≥ {k - 1}, got {block_length}"
        )
    if block_length == 1:
        return system, potential

    blocks = system.admissible_words(block_length)
    index = {w: i for i, w in enumerate(blocks)}
    adjacency = np.zeros((len(blocks), len(blocks)), dtype=int)
    for u, i in index.items():
        for b in system.successors(u[-1]):
            adjacency[i, index[u[1:] + (b,)]] = 1
    block_system = make_sft(len(blocks), adjacency)
    logger.debug(
        "Recoded %d-symbol system on %d-blocks: %d symbols",
        system.alphabet_size,
        block_length,
        len(blocks),
    )

    if k <= block_length:
        table = {(i,): potential.table[u[:k]] for u, i in index.items()}
        return block_system, _trusted_potential(block_system, 1, table)

    table = {}
    for u, i in index.items():
        for b in system.successors(u[-1]):
            table[(i, index[u[1:] + (b,)])] = potential.table[u + (b,)]
    return block_system, _trusted_potential(block_system, 2, table)


def recode_together(
    system: SftSystem, potentials: Sequence[Potential], block_length: Optional[int] = None
) -> tuple[SftSystem, list[Potential]]:
    """Recode several potentials onto one common block system

    Without an explicit block length, the blocks are as long as the
    deepest potential, so every result has depth 1. Depth-1 inputs pass
    through.
    """
    depth = max(p.depth for p in potentials)
    if block_length is None:
        block_length = depth
    if block_length <= 1:
        return system, list(potentials)
    recoded = [higher_block_recode(system, p, block_length) for p in potentials]
    return recoded[0][0], [p for _, p in recoded]


def restrict(
    system: SftSystem, potentials: Sequence[Potential], symbols: Sequence[int]
) -> tuple[SftSystem, list[Potential]]:
    """Restrict a system and its potentials to a set of symbols

    The symbols must span a recurrent component. The restricted alphabet
    is relabeled 0..len(symbols)−1 in the given order.
    """
    symbols = list(symbols)
    relabel = {s: i for i, s in enumerate(symbols)}
    sub = make_sft(len(symbols), system.adjacency[np.ix_(symbols, symbols)])
    restricted = []
    for potential in potentials:
        table = {
            tuple(relabel[s] for s in w): v
            for w, v in potential.table.items()
            if all(s in relabel for s in w)
        }
        restricted.append(_trusted_potential(sub, potential.depth, table))
    return sub, restricted
