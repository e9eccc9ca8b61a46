"""Words over the generators R = [3,1;0,1] and S = [1,0;1,2].

A word (beta_1, alpha_1, ..., beta_k, alpha_k) names the product
R^beta_1 S^alpha_1 ... R^beta_k S^alpha_k.  Evaluation uses closed-form
generator powers (geometric series), so cost is independent of exponent
size; repeated multiplication stays available as the test oracle.

The box of words with interior exponents in [1, M] and boundary exponents
in [0, M] has exactly (M+1)^2 * M^(2k-2) members; enumeration is a lazy
lexicographic stream, splittable by (beta_1, alpha_1) prefix for workers.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

from .core import Mat2
from .errors import BudgetExceededError

R = Mat2(3, 1, 0, 1)
S = Mat2(1, 0, 1, 2)

DEFAULT_FREENESS_BUDGET = 2_000_000


@dataclass(frozen=True)
class Word:
    """Alternating exponent vector; value type with structural equality."""

    betas: tuple[int, ...]
    alphas: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "betas", tuple(int(b) for b in self.betas))
        object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))
        if len(self.betas) != len(self.alphas) or not self.betas:
            raise ValueError("need k >= 1 beta/alpha pairs of equal length")
        if any(e < 0 for e in self.betas + self.alphas):
            raise ValueError("exponents must be nonnegative")

    @property
    def k(self) -> int:
        return len(self.betas)

    def exponents(self) -> tuple[int, ...]:
        """Interleaved (beta_1, alpha_1, ..., beta_k, alpha_k)."""
        out = []
        for b, a in zip(self.betas, self.alphas):
            out.append(b)
            out.append(a)
        return tuple(out)

    def is_canonical(self) -> bool:
        """alpha_i > 0 for i < k and beta_i > 0 for i > 1 (only the boundary may vanish)."""
        k = self.k
        return all(self.alphas[i] > 0 for i in range(k - 1)) and all(
            self.betas[i] > 0 for i in range(1, k)
        )

    def in_box(self, M: int) -> bool:
        return self.is_canonical() and all(e <= M for e in self.exponents())

    def min_exponent(self) -> int:
        return min(self.exponents())

    def sum_betas(self) -> int:
        return sum(self.betas)

    def sum_alphas(self) -> int:
        return sum(self.alphas)

    def reduced_blocks(self) -> tuple[tuple[str, int], ...]:
        """Alternating (letter, exponent) blocks with zero exponents dropped.

        Two exponent tuples denote the same semigroup word exactly when their
        reduced blocks agree (zero exponents can only sit on the boundary of
        a canonical word, but this normalization handles any tuple).
        """
        blocks: list[tuple[str, int]] = []
        for b, a in zip(self.betas, self.alphas):
            for letter, e in (("R", b), ("S", a)):
                if e == 0:
                    continue
                if blocks and blocks[-1][0] == letter:
                    blocks[-1] = (letter, blocks[-1][1] + e)
                else:
                    blocks.append((letter, e))
        return tuple(blocks)

    def __str__(self) -> str:
        return format_word(self)


def format_word(w: Word) -> str:
    """Text form, e.g. ``R^3 S^1 R^2 S^4`` (zero exponents included)."""
    parts = []
    for b, a in zip(w.betas, w.alphas):
        parts.append(f"R^{b}")
        parts.append(f"S^{a}")
    return " ".join(parts)


def format_word_compact(w: Word) -> str:
    """Compact tuple form ``b1,a1,b2,a2,...``."""
    return ",".join(str(e) for e in w.exponents())


_BLOCK_RE = re.compile(r"([RS])\^(\d+)")


def parse_word(text: str) -> Word:
    """Parse either the ``R^b S^a ...`` form or the compact ``b1,a1,...`` form."""
    text = text.strip()
    if not text:
        raise ValueError("empty word text")
    if text[0] in "RS":
        blocks = _BLOCK_RE.findall(text)
        flat = _BLOCK_RE.sub("", text).replace(" ", "")
        if flat or not blocks:
            raise ValueError(f"cannot parse word text {text!r}")
        letters = "".join(l for l, _ in blocks)
        if any(x == y for x, y in zip(letters, letters[1:])):
            raise ValueError(f"word blocks must alternate R/S: {text!r}")
        exps: list[int] = []
        if letters[0] == "S":
            exps.append(0)
        exps.extend(int(e) for _, e in blocks)
        if len(exps) % 2:
            exps.append(0)
        return Word(tuple(exps[0::2]), tuple(exps[1::2]))
    exps = [int(p) for p in text.split(",")]
    if len(exps) % 2 or not exps:
        raise ValueError("compact form needs an even number of exponents")
    return Word(tuple(exps[0::2]), tuple(exps[1::2]))


def r_power(beta: int) -> Mat2:
    """R^beta = [3^beta, (3^beta - 1)/2; 0, 1]."""
    p = 3**beta
    return Mat2(p, (p - 1) // 2, 0, 1)


def s_power(alpha: int) -> Mat2:
    """S^alpha = [1, 0; 2^alpha - 1, 2^alpha]."""
    p = 2**alpha
    return Mat2(1, 0, p - 1, p)


def word_eval(w: Word) -> Mat2:
    """Exact product R^b1 S^a1 ... R^bk S^ak using closed-form powers."""
    m = Mat2.identity()
    for b, a in zip(w.betas, w.alphas):
        m = m * r_power(b) * s_power(a)
    return m


def word_det(w: Word) -> int:
    """det of the word's matrix: 2^(sum alphas) * 3^(sum betas)."""
    return 2 ** w.sum_alphas() * 3 ** w.sum_betas()


@dataclass(frozen=True)
class GeneratorPair:
    """Generalized generators A = [a, u; 0, 1] and B = [1, 0; v, b].

    The default (3, 1, 1, 2) makes A = R and B = S.  General words follow
    the B-first convention B^b1 A^a1 ... B^bk A^ak, so for the default pair
    betas are S-exponents and alphas are R-exponents.
    """

    a: int
    u: int
    v: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 2 or self.b < 2:
            raise ValueError("diagonal entries a, b must be >= 2")
        if self.u < 1 or self.v < 1:
            raise ValueError("off-diagonal entries u, v must be >= 1")

    def a_power(self, n: int) -> Mat2:
        p = self.a**n
        return Mat2(p, self.u * (p - 1) // (self.a - 1), 0, 1)

    def b_power(self, n: int) -> Mat2:
        p = self.b**n
        return Mat2(1, 0, self.v * (p - 1) // (self.b - 1), p)


DEFAULT_GENERATORS = GeneratorPair(3, 1, 1, 2)


def word_eval_general(w: Word, g: GeneratorPair) -> Mat2:
    """Exact product B^b1 A^a1 ... B^bk A^ak for the generalized pair."""
    m = Mat2.identity()
    for b, a in zip(w.betas, w.alphas):
        m = m * g.b_power(b) * g.a_power(a)
    return m


def lambda_count(k: int, M: int) -> int:
    """(M+1)^2 * M^(2k-2): boundary exponents range over [0, M], interior over [1, M]."""
    if k < 1 or M < 1:
        raise ValueError("need k >= 1 and M >= 1")
    return (M + 1) ** 2 * M ** (2 * k - 2)


def _exponent_ranges(k: int, M: int) -> list[range]:
    ranges: list[range] = []
    for i in range(k):
        ranges.append(range(0, M + 1) if i == 0 else range(1, M + 1))
        ranges.append(range(1, M + 1) if i < k - 1 else range(0, M + 1))
    return ranges


def enumerate_lambda(k: int, M: int) -> Iterator[Word]:
    """Every word of the (k, M) box exactly once, lexicographic in the exponent tuple."""
    if k < 1 or M < 1:
        raise ValueError("need k >= 1 and M >= 1")
    for tup in itertools.product(*_exponent_ranges(k, M)):
        yield Word(tup[0::2], tup[1::2])


def lambda_prefixes(k: int, M: int) -> list[tuple[int, int]]:
    """(beta_1, alpha_1) prefix blocks in lexicographic order.

    Blocks partition the box; disjoint sub-streams can go to parallel workers
    and results merge deterministically in prefix order.
    """
    ranges = _exponent_ranges(k, M)
    return [(b1, a1) for b1 in ranges[0] for a1 in ranges[1]]


def enumerate_lambda_block(k: int, M: int, beta1: int, alpha1: int) -> Iterator[Word]:
    """The sub-stream of the box with the first two exponents fixed."""
    ranges = _exponent_ranges(k, M)
    if beta1 not in ranges[0] or alpha1 not in ranges[1]:
        raise ValueError(f"prefix ({beta1},{alpha1}) outside the (k={k}, M={M}) box")
    if k == 1:
        yield Word((beta1,), (alpha1,))
        return
    for tup in itertools.product(*ranges[2:]):
        yield Word((beta1,) + tup[0::2], (alpha1,) + tup[1::2])


def freeness_check(k: int, M: int, budget: int = DEFAULT_FREENESS_BUDGET) -> bool:
    """Distinct reduced words in the union of (j, M) boxes for j <= k give distinct matrices.

    Tuples that denote the same reduced word (zero boundary exponents) are
    identified before comparing, so this is exactly the injectivity of the
    word -> matrix map on the enumerated range.
    """
    total = sum(lambda_count(j, M) for j in range(1, k + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} words exceed budget {budget}")
    matrices: dict[tuple[tuple[str, int], ...], Mat2] = {}
    seen_matrices: set[Mat2] = set()
    for j in range(1, k + 1):
        for w in enumerate_lambda(j, M):
            key = w.reduced_blocks()
            m = word_eval(w)
            prior = matrices.get(key)
            if prior is None:
                if m in seen_matrices:
                    return False  # two distinct reduced words, one matrix
                matrices[key] = m
                seen_matrices.add(m)
            elif prior != m:  # same reduced word must evaluate identically
                return False
    return True
