"""Columns condition for rational matrices, with checkable certificates.

Column and block indices in certificates are 1-based, matching the usual
mathematical notation ``I_1, ..., I_m`` and ``c_1, ..., c_v``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from .algebra import PolySystem, as_fraction


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def u(self) -> int:
        return len(self.rows)

    @property
    def v(self) -> int:
        return len(self.rows[0])

    def column(self, j: int) -> tuple:
        """0-based column access."""
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.v)]

    def to_json(self):
        return [[str(x) for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, data) -> RationalMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ValueError("matrix must be a JSON array of rows")
        for row in data:
            for x in row:
                if isinstance(x, float) or isinstance(x, bool):
                    raise ValueError(f"matrix entry {x!r} is not an exact rational")
        return cls(tuple(tuple(as_fraction(x) for x in row) for row in data))


@dataclass(frozen=True)
class ColumnsCertificate:
    """Ordered partition of the columns plus span witnesses.

    ``witnesses[t]`` (for block ``t + 2``) maps earlier column indices to the
    coefficients reproducing that block's column sum; zero coefficients are omitted.
    """

    blocks: tuple
    witnesses: tuple = field(default=())

    def to_json(self):
        return {
            "blocks": [list(b) for b in self.blocks],
            "witnesses": [
                {"block": t + 2, "coefficients": {str(k): str(c) for k, c in sorted(w.items())}}
                for t, w in enumerate(self.witnesses)
            ],
        }

    @classmethod
    def from_json(cls, data) -> ColumnsCertificate:
        if isinstance(data, str):
            data = json.loads(data)
        if set(data) != {"blocks", "witnesses"}:
            raise ValueError(f"certificate fields must be exactly blocks, witnesses; got {sorted(data)}")
        blocks = tuple(tuple(int(i) for i in b) for b in data["blocks"])
        witnesses = []
        for t, w in enumerate(data["witnesses"]):
            if set(w) != {"block", "coefficients"}:
                raise ValueError("witness fields must be exactly block, coefficients")
            if int(w["block"]) != t + 2:
                raise ValueError("witnesses must be listed for blocks 2, 3, ... in order")
            witnesses.append({int(k): as_fraction(c) for k, c in w["coefficients"].items()})
        return cls(blocks, tuple(witnesses))


# ---------------------------------------------------------------------------
# Exact linear algebra


def solve_combination(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]):
    """Coefficients ``lam`` with ``sum(lam[k] * vectors[k]) == target``, or None.

    Gauss-Jordan over Q; free coefficients are set to zero.
    """
    dim = len(target)
    k = len(vectors)
    aug = [[Fraction(vectors[c][r]) for c in range(k)] + [Fraction(target[r])] for r in range(dim)]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, dim) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(dim):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == dim:
            break
    for r in range(row, dim):
        if aug[r][k] != 0:
            return None
    lam = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        lam[col] = aug[r][k]
    return lam


def in_span(vectors, target) -> bool:
    return solve_combination(vectors, target) is not None


def _reduce(basis, w):
    """Fraction-free reduction of integer vector ``w`` against an echelon basis."""
    for p, b in basis:
        wp = w[p]
        if wp:
            bp = b[p]
            w = [bp * x - wp * y for x, y in zip(w, b)]
            g = 0
            for x in w:
                g = gcd(g, x)
            if g > 1:
                w = [x // g for x in w]
    return w


def _extend_basis(basis, w):
    w = _reduce(basis, w)
    for i, x in enumerate(w):
        if x:
            return basis + ((i, tuple(w)),)
    return basis


@lru_cache(maxsize=None)
def _subset_order(v: int) -> tuple:
    """All nonempty masks over v columns: increasing size, then lexicographic."""
    masks = range(1, 1 << v)
    return tuple(sorted(masks, key=lambda m: (bin(m).count("1"), [j for j in range(v) if m >> j & 1])))


def _mask_indices(mask: int) -> tuple:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j + 1)
        mask >>= 1
        j += 1
    return tuple(out)


def _integer_columns(A: RationalMatrix) -> list[tuple]:
    # Scaling the whole matrix by a positive integer changes neither zero sums nor spans.
    den = 1
    for row in A.rows:
        for x in row:
            den = lcm(den, x.denominator)
    return [tuple(int(x * den) for x in col) for col in A.columns()]


def columns_condition(A: RationalMatrix) -> ColumnsCertificate | None:
    """Complete depth-first search for a columns-condition certificate.

    Blocks are tried in a fixed order (increasing size, then lexicographic), so
    the returned certificate is the first one in that order.
    """
    v = A.v
    cols = _integer_columns(A)
    zero = (0,) * A.u
    sums = [zero] * (1 << v)
    for mask in range(1, 1 << v):
        low = mask & -mask
        j = low.bit_length() - 1
        sums[mask] = tuple(a + b for a, b in zip(sums[mask ^ low], cols[j]))
    order = _subset_order(v)
    full = (1 << v) - 1
    dead: set[int] = set()
    bases = {0: ()}

    def basis_of(used, parent, block):
        if used not in bases:
            basis = bases[parent]
            for j in range(v):
                if block >> j & 1:
                    basis = _extend_basis(basis, list(cols[j]))
            bases[used] = basis
        return bases[used]

    def extend(used, chain):
        if used == full:
            return chain
        if used in dead:
            return None
        basis = bases[used]
        for mask in order:
            if mask & used:
                continue
            if any(_reduce(basis, list(sums[mask]))):
                continue
            nxt = used | mask
            basis_of(nxt, used, mask)
            found = extend(nxt, chain + [mask])
            if found is not None:
                return found
        dead.add(used)
        return None

    chain = extend(0, [])
    if chain is None:
        return None
    return _build_certificate(A, [_mask_indices(m) for m in chain])


def _build_certificate(A: RationalMatrix, blocks) -> ColumnsCertificate:
    cols = A.columns()
    witnesses = []
    used: list[int] = list(blocks[0])
    for block in blocks[1:]:
        target = [sum((cols[i - 1][r] for i in block), Fraction(0)) for r in range(A.u)]
        lam = solve_combination([cols[i - 1] for i in used], target)
        if lam is None:  # pragma: no cover - the search only picks spanned blocks
            raise AssertionError("block sum left the span during certificate construction")
        witnesses.append({i: c for i, c in zip(used, lam) if c != 0})
        used.extend(block)
    return ColumnsCertificate(tuple(tuple(b) for b in blocks), tuple(witnesses))


def certificate_errors(A: RationalMatrix, cert: ColumnsCertificate) -> list[str]:
    """Every way ``cert`` fails to certify the columns condition for ``A``."""
    errors = []
    v = A.v
    seen: set[int] = set()
    for t, block in enumerate(cert.blocks, start=1):
        if not block:
            errors.append(f"block {t} is empty")
        for i in block:
            if not isinstance(i, int) or not 1 <= i <= v:
                errors.append(f"block {t} has out-of-range column {i!r}")
            elif i in seen:
                errors.append(f"column {i} appears in more than one block")
            seen.add(i)
    if seen != set(range(1, v + 1)):
        missing = sorted(set(range(1, v + 1)) - seen)
        if missing:
            errors.append(f"columns {missing} are not covered")
    if errors or not cert.blocks:
        return errors or ["no blocks"]
    if len(cert.witnesses) != len(cert.blocks) - 1:
        errors.append(f"expected {len(cert.blocks) - 1} witnesses, got {len(cert.witnesses)}")
        return errors
    cols = A.columns()

    def block_sum(block):
        return [sum((cols[i - 1][r] for i in block), Fraction(0)) for r in range(A.u)]

    if any(block_sum(cert.blocks[0])):
        errors.append("first block does not sum to the zero vector")
    earlier = set(cert.blocks[0])
    for t, (block, w) in enumerate(zip(cert.blocks[1:], cert.witnesses), start=2):
        stray = [i for i in w if i not in earlier]
        if stray:
            errors.append(f"witness for block {t} uses columns {sorted(stray)} outside earlier blocks")
        combo = [sum((as_fraction(c) * cols[i - 1][r] for i, c in w.items() if i in earlier), Fraction(0))
                 for r in range(A.u)]
        if combo != block_sum(block):
            errors.append(f"witness for block {t} does not reproduce its column sum")
        earlier |= set(block)
    return errors


def verify_certificate(A: RationalMatrix, cert: ColumnsCertificate) -> bool:
    return not certificate_errors(A, cert)


def subset_sum_zero(coeffs: Sequence) -> tuple | None:
    """First nonempty J (1-based, by size then lexicographic) with zero coefficient sum."""
    coeffs = [as_fraction(c) for c in coeffs]
    if any(c == 0 for c in coeffs):
        raise ValueError("coefficients must be nonzero")
    n = len(coeffs)
    for mask in _subset_order(n):
        if sum((coeffs[j] for j in range(n) if mask >> j & 1), Fraction(0)) == 0:
            return _mask_indices(mask)
    return None


PR = "PR_on_R+"
NOT_PR = "not_PR_on_R+"


@dataclass(frozen=True)
class LinearVerdict:
    verdict: str
    r: int
    certificate: ColumnsCertificate | None
    system: PolySystem

    @property
    def partition_regular(self) -> bool:
        return self.verdict == PR

    def to_json(self):
        return {
            "verdict": self.verdict,
            "r": self.r,
            "system": self.system.format(),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def linear_pr_verdict(A: RationalMatrix, r: int) -> LinearVerdict:
    """Partition regularity of ``A x^r = 0`` over the positive reals.

    For rational entries the Q-span and R-span of columns agree, so the
    Q-decision is the R-decision; the power r does not affect it.
    """
    from .transforms import power_substitution

    if not isinstance(r, int) or r < 1:
        raise ValueError("r must be a positive integer")
    cert = columns_condition(A)
    return LinearVerdict(PR if cert is not None else NOT_PR, r, cert, power_substitution(A, r))


def matrix_from_linear_system(sys: PolySystem) -> RationalMatrix:
    """Coefficient matrix of a homogeneous linear system (columns follow ``sys.variables``)."""
    rows = []
    for p in sys.polynomials:
        row = [Fraction(0)] * len(sys.variables)
        for key, c in p.items():
            if len(key) != 1 or key[0][1] != 1:
                raise ValueError("system is not homogeneous linear")
            row[sys.variables.index(key[0][0])] = c
        rows.append(row)
    if not rows:
        raise ValueError("system has no equations")
    return RationalMatrix(tuple(tuple(r) for r in rows))
