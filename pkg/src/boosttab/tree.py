"""Configuration trees: outcome counts in a heap-indexed binary tree.

Node 1 is the root and holds n.  Adding classifier k splits every node at
level k-1 into two children: child 2j collects the examples the new
classifier gets wrong (outcome -1), child 2j+1 the ones it gets right.  The
genealogy of a node is the +-1 outcome pattern along its root path, which is
exactly the binary expansion of its index after the leading 1 (0 -> -1).
Level p of the tree is the full truth table of the p classifiers on the
training set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import _validated_outcomes
from .errors import ParseError, ValidationError

MAX_DEPTH = 30  # tree storage is 2**(depth+1) counts

# Fixed correspondence between the 8 leaves of a depth-3 tree and the
# (n_j, m_j) labels of the classical 3-classifier truth table: m_j counts the
# column whose sign pattern is the negation of the n_j column.
_LEAF_LABELS_P3 = ("n0", "n3", "n2", "m1", "n1", "m2", "m3", "m0")


@dataclass(frozen=True)
class OutcomeTree:
    """Counts c_j for all nodes, flat array of length 2**(depth+1), j=0 unused."""

    depth: int
    counts: np.ndarray

    def __post_init__(self):
        if not 1 <= self.depth <= MAX_DEPTH:
            raise ValidationError(
                f"depth must be in [1, {MAX_DEPTH}], got {self.depth}"
            )
        counts = np.asarray(self.counts)
        if counts.shape != (2 ** (self.depth + 1),):
            raise ValidationError(
                f"counts must have length {2 ** (self.depth + 1)}, got {counts.shape}"
            )
        if not np.issubdtype(counts.dtype, np.integer):
            if not np.all(counts == np.rint(counts)):
                raise ValidationError("counts must be integers")
        counts = counts.astype(np.int64)
        if counts[0] != 0:
            raise ValidationError("counts[0] is unused and must be 0")
        if np.any(counts < 0):
            raise ValidationError("counts must be non-negative")
        if counts[1] < 1:
            raise ValidationError("root count (n) must be >= 1")
        internal = counts[1 : 2**self.depth]
        if not np.array_equal(internal, counts[2::2] + counts[3::2]):
            raise ValidationError("parent rule violated: c_j != c_2j + c_2j+1")
        counts = np.array(counts)
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return int(self.counts[1])

    def level(self, k: int) -> np.ndarray:
        """Counts of the 2**k nodes at level k (k=0 is the root)."""
        if not 0 <= k <= self.depth:
            raise ValidationError(f"level {k} outside [0, {self.depth}]")
        return self.counts[2**k : 2 ** (k + 1)]

    @property
    def leaves(self) -> np.ndarray:
        return self.level(self.depth)

    def truncated(self, depth: int) -> "OutcomeTree":
        """The subtree spanned by the first ``depth`` classifiers."""
        if not 1 <= depth <= self.depth:
            raise ValidationError(f"cannot truncate depth {self.depth} to {depth}")
        return OutcomeTree(depth=depth, counts=self.counts[: 2 ** (depth + 1)])

    @classmethod
    def from_leaves(cls, leaves) -> "OutcomeTree":
        """Build a tree from its deepest level by summing the parent rule."""
        leaves = np.asarray(leaves)
        size = leaves.shape[0]
        depth = int(size).bit_length() - 1
        if size < 2 or 2**depth != size:
            raise ValidationError(
                f"leaf count must be a power of two >= 2, got {size}"
            )
        counts = np.zeros(2 * size, dtype=np.int64)
        counts[size:] = leaves
        for j in range(size - 1, 0, -1):
            counts[j] = counts[2 * j] + counts[2 * j + 1]
        return cls(depth=depth, counts=counts)


def build_tree(outcomes: np.ndarray) -> OutcomeTree:
    """Count every outcome configuration of the matrix into a tree.

    Example i lands at level k in the node whose genealogy equals the
    first k outcomes of row i.
    """
    outcomes = _validated_outcomes(outcomes)
    n, p = outcomes.shape
    if p > MAX_DEPTH:
        raise ValidationError(f"p={p} exceeds the supported maximum {MAX_DEPTH}")
    bits = (outcomes > 0).astype(np.int64)
    powers = 1 << np.arange(p - 1, -1, -1, dtype=np.int64)
    leaf_offsets = bits @ powers
    leaf_counts = np.bincount(leaf_offsets, minlength=2**p)
    return OutcomeTree.from_leaves(leaf_counts)


def genealogy(j: int) -> np.ndarray:
    """Outcome signs along the root path of node j (j >= 2).

    These are the binary digits of j after the leading 1, with 0 -> -1.
    """
    j = int(j)
    if j <= 1:
        raise ValidationError(f"node {j} has no genealogy (root has an empty one)")
    bits = bin(j)[3:]  # strip '0b1'
    return np.array([1 if b == "1" else -1 for b in bits], dtype=np.int8)


def node_from_genealogy(signs) -> int:
    """Inverse of ``genealogy``: prepend the leading 1 and read as binary."""
    j = 1
    for s in signs:
        if s not in (-1, 1):
            raise ValidationError(f"genealogy signs must be -1 or +1, got {s}")
        j = 2 * j + (1 if s == 1 else 0)
    return j


def level_sign_matrix(k: int) -> np.ndarray:
    """Genealogies of all 2**k nodes at level k, stacked as a (2**k, k) matrix."""
    if k < 1:
        raise ValidationError(f"level must be >= 1, got {k}")
    offsets = np.arange(2**k, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    bits = (offsets[:, None] >> shifts[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)


@dataclass(frozen=True)
class LeafTableP3:
    """The classical (n_0..n_3, m_0..m_3) labeling of a depth-3 truth table."""

    n: tuple[int, int, int, int]
    m: tuple[int, int, int, int]


def leaf_table_p3(tree: OutcomeTree) -> LeafTableP3:
    """Relabel the 8 leaves of a depth-3 tree as (n_0..n_3, m_0..m_3)."""
    if tree.depth != 3:
        raise ValidationError(f"leaf table is defined for depth 3, got {tree.depth}")
    by_label = dict(zip(_LEAF_LABELS_P3, (int(c) for c in tree.leaves)))
    return LeafTableP3(
        n=tuple(by_label[f"n{i}"] for i in range(4)),
        m=tuple(by_label[f"m{i}"] for i in range(4)),
    )


def tree_from_leaf_table_p3(n, m) -> OutcomeTree:
    """Build the depth-3 tree whose leaf table is (n_0..n_3, m_0..m_3)."""
    if len(n) != 4 or len(m) != 4:
        raise ValidationError("need 4 n-counts and 4 m-counts")
    by_label = {f"n{i}": n[i] for i in range(4)}
    by_label.update({f"m{i}": m[i] for i in range(4)})
    return OutcomeTree.from_leaves([by_label[lab] for lab in _LEAF_LABELS_P3])


def truth_table_csv_p3(tree: OutcomeTree) -> str:
    """Classic 3-classifier truth table as CSV: counts row plus sign rows."""
    table = leaf_table_p3(tree)
    labels = ["n0", "m0", "n1", "m1", "n2", "m2", "n3", "m3"]
    values = {f"n{i}": table.n[i] for i in range(4)}
    values.update({f"m{i}": table.m[i] for i in range(4)})
    sign_rows = {lab: genealogy(8 + _LEAF_LABELS_P3.index(lab)) for lab in labels}
    lines = ["label," + ",".join(labels)]
    lines.append("count," + ",".join(str(values[lab]) for lab in labels))
    for row in range(3):
        lines.append(
            f"G{row + 1}," + ",".join(str(int(sign_rows[lab][row])) for lab in labels)
        )
    return "\n".join(lines) + "\n"


def tree_to_dict(tree: OutcomeTree) -> dict:
    counts = [None] + [int(c) for c in tree.counts[1:]]
    return {"p": tree.depth, "counts": counts}


def tree_from_dict(obj: dict) -> OutcomeTree:
    try:
        p = obj["p"]
        counts = obj["counts"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"tree object missing field: {exc}") from exc
    if not isinstance(p, int):
        raise ParseError(f"tree field p must be an integer, got {p!r}")
    if not isinstance(counts, list) or not counts or counts[0] is not None:
        raise ParseError("tree counts must be a list with null at index 0")
    if any(not isinstance(c, (int, float)) for c in counts[1:]):
        raise ParseError("tree counts must be numbers after index 0")
    return OutcomeTree(depth=p, counts=np.array([0] + counts[1:]))


def save_tree(tree: OutcomeTree, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tree_to_dict(tree)) + "\n")


def load_tree(path: str | Path) -> OutcomeTree:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return tree_from_dict(obj)
