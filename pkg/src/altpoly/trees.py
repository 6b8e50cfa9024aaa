"""Exhaustive ground truth over bracketed monomials of distinct variables.

A commutator monomial on variables 1..n is an unordered binary tree with
those leaves.  Trees are kept in the canonical form where at every node the
minimum leaf of the left child is smaller than that of the right child, so
each unordered monomial appears exactly once; there are (2n-3)!! of them.

Evaluation pushes leaves to T(i) and nodes to the symmetric bracket; the
word-level expansion (2^{n-1} words, all coefficients one) provides the
independent oracle against which the endpoint algebra is validated.
"""

from __future__ import annotations

from typing import Iterator

from .algebra import Element, _jacobi_dict, abstract_word
from .polytope import GeneratorSet
from .rationals import normalize_rat

_WORD_BOUND = 10
_BRUTE_BOUND = 10

CommTree = object  # int leaf or (left, right) node; see module docstring


def tree_leaves(tree) -> list:
    if isinstance(tree, int):
        return [tree]
    return tree_leaves(tree[0]) + tree_leaves(tree[1])


def tree_size(tree) -> int:
    return 1 if isinstance(tree, int) else tree_size(tree[0]) + tree_size(tree[1])


def format_tree(tree) -> str:
    """Nested-brace form, e.g. {{1,3},2}."""
    if isinstance(tree, int):
        return str(tree)
    return "{" + format_tree(tree[0]) + "," + format_tree(tree[1]) + "}"


def parse_tree(text: str):
    """Inverse of format_tree; validates brace structure and canonical form."""
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of tree")
        if text[pos] == "{":
            pos += 1
            left = node()
            if pos >= len(text) or text[pos] != ",":
                raise ValueError(f"expected ',' at position {pos}")
            pos += 1
            right = node()
            if pos >= len(text) or text[pos] != "}":
                raise ValueError(f"expected '}}' at position {pos}")
            pos += 1
            return (left, right)
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"expected leaf index at position {pos}")
        leaf = int(text[start:pos])
        if leaf < 1:
            raise ValueError("leaf indices must be positive")
        return leaf

    stripped = text.replace(" ", "")
    text = stripped
    tree = node()
    if pos != len(text):
        raise ValueError(f"trailing input after tree: {text[pos:]!r}")
    return canonicalize_tree(tree)


def canonicalize_tree(tree):
    """Order every node so the minimum leaf sits in the left child."""
    if isinstance(tree, int):
        return tree
    left = canonicalize_tree(tree[0])
    right = canonicalize_tree(tree[1])
    if min(tree_leaves(left)) > min(tree_leaves(right)):
        left, right = right, left
    return (left, right)


def double_factorial_count(n: int) -> int:
    count = 1
    for k in range(3, n + 1):
        count *= 2 * k - 3
    return count


def enumerate_trees(n: int, cursor: int = 0) -> Iterator:
    """Stream the canonical trees on leaves 1..n, exactly (2n-3)!! of them.

    Trees are generated by inserting leaf k at each of the 2k-5 positions of
    every tree on k-1 leaves (wrapping a subtree s into (s, k) keeps the
    canonical order because k is the current maximum).  `cursor` skips that
    many leading trees, which is how long runs checkpoint and resume.
    """
    if n < 1:
        raise ValueError("n must be at least 1")

    def insertions(tree, leaf):
        yield (tree, leaf)
        if not isinstance(tree, int):
            left, right = tree
            for new_left in insertions(left, leaf):
                yield (new_left, right)
            for new_right in insertions(right, leaf):
                yield (left, new_right)

    def gen(k):
        if k == 1:
            yield 1
            return
        for smaller in gen(k - 1):
            yield from insertions(smaller, k)

    stream = gen(n)
    for _ in range(cursor):
        next(stream, None)
    yield from stream


def expand_words(tree) -> list:
    """The 2^(n-1) words of the symmetric-bracket expansion, coefficients 1."""
    if tree_size(tree) > _WORD_BOUND:
        raise ValueError(f"word expansion bounded at n={_WORD_BOUND}")

    def words(t):
        if isinstance(t, int):
            return [(t,)]
        lw = words(t[0])
        rw = words(t[1])
        return [u + v for u in lw for v in rw] + [v + u for u in lw for v in rw]

    return words(tree)


def eval_tree(tree) -> Element:
    """Value of a tree in the endpoint algebra (recursive bracket)."""
    return Element(_eval_dict(tree), _trusted=True)


def _eval_dict(tree, memo=None) -> dict:
    if isinstance(tree, int):
        return {(1, tree): 1}
    if memo is not None:
        hit = memo.get(tree)
        if hit is not None:
            return hit
    value = _jacobi_dict(_eval_dict(tree[0], memo), _eval_dict(tree[1], memo))
    if memo is not None:
        memo[tree] = value
    return value


def word_count_alternating(tree) -> int:
    """Word-level oracle: #alternating words in the expansion."""
    return sum(1 for w in expand_words(tree) if not abstract_word(w).is_zero())


def word_count_forward(tree) -> int:
    total = 0
    for w in expand_words(tree):
        img = abstract_word(w)
        total += normalize_rat(img.forw_norm())
    return total


def _distinct_values(n: int) -> dict:
    """Map value-key -> (coeff dict, lexicographically least witness tree).

    Subset dynamic programming with value dedup: the endpoint abstraction
    collapses many trees to one element, and the maximum of any norm only
    depends on values.  Lex-least witnesses survive because the brace string
    of a node is monotone in the brace strings of its children.
    """
    full = (1 << n) - 1
    by_mask = {1 << (i - 1): {((1, i), 1): ({(1, i): 1}, i)} for i in range(1, n + 1)}
    masks_by_size = [[] for _ in range(n + 1)]
    for mask in range(1, full + 1):
        masks_by_size[mask.bit_count()].append(mask)
    for size in range(2, n + 1):
        for mask in masks_by_size[size]:
            low = mask & -mask
            rest = mask ^ low
            acc = {}
            sub = rest
            # left part always contains the lowest leaf: canonical split
            while True:
                left_mask = mask ^ sub
                right_mask = sub
                if right_mask and left_mask & low:
                    left_vals = by_mask.get(left_mask, {})
                    right_vals = by_mask.get(right_mask, {})
                    for _, (lc, lt) in left_vals.items():
                        for _, (rc, rt) in right_vals.items():
                            val = _jacobi_dict(lc, rc)
                            key = tuple(sorted(val.items()))
                            tree = (lt, rt)
                            old = acc.get(key)
                            if old is None or _tree_key(tree) < _tree_key(old[1]):
                                acc[key] = (val, tree)
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            by_mask[mask] = acc
        for smaller in masks_by_size[size - 1]:
            if smaller != full:
                pass
    return by_mask[full]


def _tree_key(tree) -> str:
    return format_tree(tree)


def brute_r(n: int, forward: bool = False) -> tuple:
    """Maximum alternating (or forward) count over all trees, with witness.

    Returns (value, tree) where tree is the lexicographically least
    maximizer in nested-brace order.
    """
    if n < 1 or n > _BRUTE_BOUND:
        raise ValueError(f"brute force bounded at n={_BRUTE_BOUND}")
    best = None
    best_tree = None
    for _, (coeffs, tree) in sorted(_distinct_values(n).items(),
                                    key=lambda kv: _tree_key(kv[1][1])):
        if forward:
            value = sum(v for sym, v in coeffs.items()
                        if sym[0] == 1 or sym[3] == 1)
        else:
            value = sum(coeffs.values())
        if best is None or value > best:
            best = value
            best_tree = tree
    return normalize_rat(best), best_tree


def monomial_projection_seed(n: int) -> GeneratorSet:
    """All regular projections of all tree values, deduplicated.

    The result is stored at quarter-exponent n, i.e. as the normalized
    version of the raw integer-coefficient monomial values, so it compares
    against the recursive generator systems without scale juggling.
    """
    if n < 1 or n > 7:
        raise ValueError("monomial projection seed bounded at n=7")
    from .polytope import regular_projections

    seen = {}
    for _, (coeffs, _) in _distinct_values(n).items():
        elem = Element(dict(coeffs), _trusted=True)
        for proj in regular_projections(elem):
            seen.setdefault(proj.key(), proj)
    gens = [seen[k] for k in sorted(seen)]
    return GeneratorSet(ambient=frozenset(range(1, n + 1)), q=n, gens=tuple(gens))


def average_alt_count(n: int, tree=None):
    """Average alternating count of one tree shape over all leaf labelings.

    Exact rational; independent of the shape, which the tests check.
    """
    from itertools import permutations

    if n < 1 or n > 7:
        raise ValueError("averaging bounded at n=7")
    if tree is None:
        tree = 1
        for k in range(2, n + 1):
            tree = (tree, k)
    if sorted(tree_leaves(tree)) != list(range(1, n + 1)):
        raise ValueError("tree must use leaves 1..n")
    from .rationals import rat

    total = 0
    count = 0
    for perm in permutations(range(1, n + 1)):
        relabeled = _relabel_tree(tree, perm)
        total += normalize_rat(eval_tree(relabeled).alt_norm())
        count += 1
    return normalize_rat(rat(total, count))


def _relabel_tree(tree, perm):
    if isinstance(tree, int):
        return perm[tree - 1]
    return (_relabel_tree(tree[0], perm), _relabel_tree(tree[1], perm))
