"""Finite Coxeter systems by pure word combinatorics.

A Coxeter system (W, I) is presented by its Coxeter matrix m, where
m[i][i] = 1 and m[i][j] = m[j][i] >= 2 is the order of s_i s_j.  Elements
are carried around as canonical reduced words: the lexicographically least
reduced word in the letters I = {0, ..., r-1}.  Everything rests on Tits'
solution of the word problem: two reduced words express the same element
exactly when they are connected by braid moves, and a word is reduced
exactly when no sequence of braid moves exposes a doubled letter.  No
linear representation is involved, so all arithmetic stays in small integer
tuples and is exact by construction.

Enumeration is breadth-first over right multiplication by generators, ties
broken by generator index, and aborts with BoundExceeded once the element
bound is passed (default 10**5).  That bound is the only concession to
infinite systems, which are otherwise out of scope at desk scale.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import BoundExceeded, InvalidSpec, SystemMismatch

Word = tuple[int, ...]

DEFAULT_ELEMENT_BOUND = 100_000


def _alt(i: int, j: int, length: int) -> Word:
    """Alternating word i j i j ... of the given length."""
    return tuple(i if k % 2 == 0 else j for k in range(length))


def _braid_closure(word: Word, matrix) -> set[Word]:
    """All words reachable from `word` by braid moves alone.

    For a reduced word this is the full set of reduced expressions of the
    element (Tits); for a non-reduced word it is still closed under braid
    moves, which is all the reduction loop needs.
    """
    seen = {word}
    queue = [word]
    while queue:
        w = queue.pop()
        n = len(w)
        for k in range(n - 1):
            i, j = w[k], w[k + 1]
            if i == j:
                continue
            order = matrix[i][j]
            if k + order > n or w[k:k + order] != _alt(i, j, order):
                continue
            new = w[:k] + _alt(j, i, order) + w[k + order:]
            if new not in seen:
                seen.add(new)
                queue.append(new)
    return seen


def _normal_form(word: Word, matrix) -> Word:
    """Canonical reduced word: lex-least element of the braid class.

    Repeatedly closes under braid moves and strikes the first doubled
    letter found (scanning variants in sorted order keeps the reduction
    deterministic); a class with no doubled letter is reduced.
    """
    w = tuple(word)
    while True:
        closure = _braid_closure(w, matrix)
        shrunk = None
        for cand in sorted(closure):
            for k in range(len(cand) - 1):
                if cand[k] == cand[k + 1]:
                    shrunk = cand[:k] + cand[k + 2:]
                    break
            if shrunk is not None:
                break
        if shrunk is None:
            return min(closure)
        w = shrunk


def parse_coxeter_matrix(text: str) -> list[list[int]]:
    """Parse a Coxeter matrix from whitespace-separated integer rows."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    try:
        matrix = [[int(entry) for entry in row] for row in rows]
    except ValueError as exc:
        raise InvalidSpec(f"non-integer entry in Coxeter matrix: {exc}") from None
    _validate_matrix(matrix)
    return matrix


def _validate_matrix(matrix: Sequence[Sequence[int]]) -> None:
    rank = len(matrix)
    if rank == 0:
        raise InvalidSpec("empty Coxeter matrix")
    for i, row in enumerate(matrix):
        if len(row) != rank:
            raise InvalidSpec(f"row {i} has {len(row)} entries, expected {rank}")
        for j, entry in enumerate(row):
            if i == j:
                if entry != 1:
                    raise InvalidSpec(f"diagonal entry m[{i}][{i}] must be 1")
            else:
                if entry < 2:
                    raise InvalidSpec(
                        f"off-diagonal entry m[{i}][{j}] must be >= 2 (finite)")
                if matrix[j][i] != entry:
                    raise InvalidSpec(f"matrix not symmetric at ({i},{j})")


class CoxeterElement:
    """A group element, identified by its index in the enumeration."""

    __slots__ = ("system", "index")

    def __init__(self, system: "CoxeterSystem", index: int):
        self.system = system
        self.index = index

    @property
    def word(self) -> Word:
        """Canonical (lex-least) reduced word."""
        return self.system._words[self.index]

    @property
    def length(self) -> int:
        return len(self.system._words[self.index])

    def __mul__(self, other: "CoxeterElement") -> "CoxeterElement":
        return self.system.multiply(self, other)

    def inverse(self) -> "CoxeterElement":
        sys = self.system
        e = 0
        for s in reversed(self.word):
            e = sys._right[e][s]
        return CoxeterElement(sys, e)

    def is_identity(self) -> bool:
        return self.index == 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, CoxeterElement)
                and other.system is self.system
                and other.index == self.index)

    def __hash__(self) -> int:
        return hash((id(self.system), self.index))

    def __repr__(self) -> str:
        return f"<w{self.index} {'.'.join(map(str, self.word)) or 'e'}>"


class CoxeterSystem:
    """Fully enumerated finite Coxeter system.

    Exposes the element count, length function, canonical words, the longest
    element, the Poincare polynomial (length generating function), direct
    decomposability of the generating set, and exact multiplication through
    the right Cayley table.
    """

    def __init__(self, matrix: Sequence[Sequence[int]],
                 element_bound: int = DEFAULT_ELEMENT_BOUND):
        _validate_matrix(matrix)
        self.matrix = tuple(tuple(row) for row in matrix)
        self.rank = len(matrix)
        self._words: list[Word] = []
        self._right: list[list[int]] = []
        self._enumerate(element_bound)
        lengths = [len(w) for w in self._words]
        top = max(lengths)
        longest = [k for k, l in enumerate(lengths) if l == top]
        # unique in a finite Coxeter group; a tie would mean a broken engine
        assert len(longest) == 1, "longest element is not unique"
        self._longest = longest[0]

    def _enumerate(self, bound: int) -> None:
        matrix = self.matrix
        index: dict[Word, int] = {(): 0}
        self._words.append(())
        k = 0
        while k < len(self._words):
            w = self._words[k]
            row = []
            for s in range(self.rank):
                nf = _normal_form(w + (s,), matrix)
                j = index.get(nf)
                if j is None:
                    j = len(self._words)
                    if j >= bound:
                        raise BoundExceeded(
                            f"enumeration passed {bound} elements; "
                            "system is infinite or over desk scale")
                    index[nf] = j
                    self._words.append(nf)
                row.append(j)
            self._right.append(row)
            k += 1

    # -- element constructors -------------------------------------------

    def identity(self) -> CoxeterElement:
        return CoxeterElement(self, 0)

    def generator(self, i: int) -> CoxeterElement:
        if not 0 <= i < self.rank:
            raise InvalidSpec(f"generator index {i} out of range")
        return self.element_from_word((i,))

    def element_from_word(self, word: Iterable[int]) -> CoxeterElement:
        word = tuple(word)
        for s in word:
            if not 0 <= s < self.rank:
                raise InvalidSpec(f"letter {s} out of range for rank {self.rank}")
        e = 0
        for s in word:
            e = self._right[e][s]
        return CoxeterElement(self, e)

    def elements(self) -> Iterator[CoxeterElement]:
        for k in range(len(self._words)):
            yield CoxeterElement(self, k)

    # -- structure -------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._words)

    @property
    def longest_element(self) -> CoxeterElement:
        return CoxeterElement(self, self._longest)

    def poincare_polynomial(self) -> list[int]:
        """Coefficients of sum_w q^l(w), ascending in q."""
        top = len(self._words[self._longest])
        coeffs = [0] * (top + 1)
        for w in self._words:
            coeffs[len(w)] += 1
        return coeffs

    def diagram_components(self) -> list[tuple[int, ...]]:
        """Connected components of the diagram (edges where m >= 3)."""
        remaining = set(range(self.rank))
        comps = []
        while remaining:
            seed = min(remaining)
            comp = {seed}
            frontier = [seed]
            while frontier:
                i = frontier.pop()
                for j in range(self.rank):
                    if j in remaining and j not in comp and self.matrix[i][j] >= 3:
                        comp.add(j)
                        frontier.append(j)
            remaining -= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def is_decomposable(self) -> bool:
        return len(self.diagram_components()) > 1

    # -- arithmetic -------------------------------------------------------

    def _check(self, elem: CoxeterElement) -> None:
        if elem.system is not self:
            raise SystemMismatch("elements belong to different Coxeter systems")

    def multiply(self, a: CoxeterElement, b: CoxeterElement) -> CoxeterElement:
        self._check(a)
        self._check(b)
        e = a.index
        for s in b.word:
            e = self._right[e][s]
        return CoxeterElement(self, e)

    def right_multiply(self, a: CoxeterElement, s: int) -> CoxeterElement:
        self._check(a)
        return CoxeterElement(self, self._right[a.index][s])

    def length_increases(self, a: CoxeterElement, s: int) -> bool:
        """Whether l(a s) = l(a) + 1."""
        self._check(a)
        return len(self._words[self._right[a.index][s]]) > len(self._words[a.index])

    def reduce_word(self, word: Iterable[int]) -> Word:
        """Canonical reduced word of the element the input word spells."""
        return self.element_from_word(word).word

    def reduced_words(self, a: CoxeterElement) -> list[Word]:
        """All reduced words of a, sorted (braid-move closure)."""
        self._check(a)
        return sorted(_braid_closure(a.word, self.matrix))

    def conjugate_generator_by_longest(self, i: int) -> int:
        """The index j with s_j = w0 s_i w0 (diagram symmetry of w0)."""
        w0 = self.longest_element
        conj = self.multiply(self.multiply(w0, self.generator(i)), w0)
        word = conj.word
        assert len(word) == 1, "conjugate of a generator by w0 must be a generator"
        return word[0]


def build_coxeter_system(matrix: Sequence[Sequence[int]],
                         element_bound: int = DEFAULT_ELEMENT_BOUND) -> CoxeterSystem:
    """Enumerate the Coxeter system of the given matrix.

    Raises BoundExceeded if the enumeration passes element_bound, which is
    how infinite (e.g. affine) matrices surface.
    """
    return CoxeterSystem(matrix, element_bound)


# Matrices for the rank-2 catalog and small flag geometries.
MATRIX_A1xA1 = [[1, 2], [2, 1]]
MATRIX_A2 = [[1, 3], [3, 1]]
MATRIX_B2 = [[1, 4], [4, 1]]


def dihedral_matrix(m: int) -> list[list[int]]:
    return [[1, m], [m, 1]]


def type_a_matrix(n: int) -> list[list[int]]:
    """Coxeter matrix of the symmetric group S_{n+1} (n generators)."""
    return [[1 if i == j else (3 if abs(i - j) == 1 else 2)
             for j in range(n)] for i in range(n)]
