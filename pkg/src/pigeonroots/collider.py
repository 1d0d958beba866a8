"""Pigeonhole collision search over 0/1 selection vectors.

Three strategies share one certificate contract: two distinct selection
vectors whose exact moment vectors differ by less than the cell side ``h``
in every coordinate.

* ``exhaustive`` enumerates ``d`` in integer order (bit ``i`` is ``d_i``) and
  returns the first pair landing in the same subcube. Guaranteed to succeed.
* ``mitm`` fixes a leading index ``k`` with ``b_k = 1`` and meets signed
  partial moment sums of two index halves in the middle.
* ``random`` samples selection vectors and buckets them by cell.

The float fast paths only propose candidates; every returned certificate has
been re-verified in exact arithmetic.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import CapExceeded, ChainViolation, IdenticalSelections, InvalidGrid, NotFound
from .sampling import make_rng
from .moments import (
    GridSpec,
    cell_key,
    make_grid,
    moment_vector,
    quantize,
    signed_moment_vector,
    weighted_columns,
)
from .polycore import (
    ProblemInstance,
    RationalPolynomial,
    SelectionVector,
    SignVector,
    difference,
)

DEFAULT_CAP = 26
DEFAULT_MAX_BYTES = 4 << 30
BYTES_PER_ENTRY = 48
FLOAT_GUARD = 1e-11
STRATEGIES = ("exhaustive", "mitm", "random")


@dataclass(frozen=True)
class CollisionCertificate:
    d1: SelectionVector
    d2: SelectionVector
    b: SignVector
    delta: tuple[Fraction, ...]
    grid: GridSpec
    strategy: str
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def max_gap(self) -> Fraction:
        return max(abs(x) for x in self.delta)


def verify_collision(cert: CollisionCertificate, inst: ProblemInstance) -> None:
    """Recompute everything from ``d1``, ``d2``; raise ``ChainViolation`` on mismatch."""
    g = cert.grid
    if g != make_grid(inst.n, inst.M, g.m):
        raise ChainViolation("moment_gap", "grid does not match instance")
    if cert.d1.d == cert.d2.d:
        raise ChainViolation("moment_gap", "selections coincide")
    b = SignVector(tuple(x - y for x, y in zip(cert.d1.d, cert.d2.d)))
    if b != cert.b:
        raise ChainViolation("moment_gap", "sign vector is not d1 - d2")
    v1 = moment_vector(cert.d1, inst, g.m)
    v2 = moment_vector(cert.d2, inst, g.m)
    delta = tuple(x - y for x, y in zip(v1, v2))
    if tuple(cert.delta) != delta:
        raise ChainViolation("moment_gap", "stored moment differences disagree with recomputation")
    for j, x in enumerate(delta):
        if not abs(x) < g.h:
            raise ChainViolation("moment_gap", f"|delta_{j}| = {float(abs(x)):.6g} >= h = {float(g.h):.6g}")


def _certificate(inst, g, d1, d2, strategy, stats) -> CollisionCertificate:
    if d1.d == d2.d:
        raise IdenticalSelections("collision search produced identical selections")
    b, _ = difference(d1, d2, inst)
    v1 = moment_vector(d1, inst, g.m)
    v2 = moment_vector(d2, inst, g.m)
    delta = tuple(x - y for x, y in zip(v1, v2))
    cert = CollisionCertificate(d1, d2, b, delta, g, strategy, stats)
    verify_collision(cert, inst)
    return cert


def _float_columns(inst: ProblemInstance, m: int) -> np.ndarray:
    return np.array([[float(x) for x in col] for col in weighted_columns(inst, m)], dtype=np.float64)


def subset_sums(cols: np.ndarray) -> np.ndarray:
    """Row ``s`` is the sum of ``cols[i]`` over the set bits ``i`` of ``s``."""
    tab = np.zeros((1, cols.shape[1]), dtype=np.float64)
    for row in cols:
        tab = np.vstack([tab, tab + row])
    return np.ascontiguousarray(tab)


def _check_m(inst, m):
    if not 1 <= m <= inst.n:
        raise InvalidGrid(f"need 1 <= m <= n, got m={m}, n={inst.n}")


def collide_exhaustive(
    inst: ProblemInstance,
    m: int,
    cap: int = DEFAULT_CAP,
    max_bytes: int = DEFAULT_MAX_BYTES,
    backend: str | None = None,
) -> CollisionCertificate:
    _check_m(inst, m)
    if inst.n > cap:
        raise CapExceeded(f"n={inst.n} above exhaustive cap {cap}")
    g = make_grid(inst.n, inst.M, m)
    total = 1 << (inst.n + 1)
    # at most N + 1 distinct vectors are stored before the pigeonhole fires
    est = min(total, g.N + 1) * BYTES_PER_ENTRY * max(1, m // 4)
    if est > max_bytes:
        raise CapExceeded(f"estimated table size {est} bytes exceeds cap {max_bytes}")
    t0 = time.perf_counter()
    cols = _float_columns(inst, m)
    nlo = (inst.n + 1) // 2
    lo_tab = subset_sums(cols[:nlo])
    hi_tab = subset_sums(cols[nlo:])
    length = inst.n + 1

    def exact_key(t: int) -> int:
        v = moment_vector(SelectionVector.from_int(t, length), inst, m)
        return cell_key(quantize(v, g), g.L)

    impl = kernels.get_backend(backend)
    t1, t2, enumerated, occupied = impl.first_collision(
        lo_tab, hi_tab, nlo, total, float(1 / g.h), g.L, FLOAT_GUARD, exact_key
    )
    if t1 < 0:  # pragma: no cover - excluded by N < 2**(n+1)
        raise NotFound("exhaustive enumeration found no repeated cell")
    stats = {
        "enumerated": int(enumerated),
        "cells_occupied": int(occupied),
        "wall_time": time.perf_counter() - t0,
    }
    d1 = SelectionVector.from_int(int(t1), length)
    d2 = SelectionVector.from_int(int(t2), length)
    return _certificate(inst, g, d1, d2, "exhaustive", stats)


def _exact_gap_ok(inst, g, d1, d2) -> bool:
    if d1.d == d2.d:
        return False
    b = SignVector(tuple(x - y for x, y in zip(d1.d, d2.d)))
    return all(abs(x) < g.h for x in signed_moment_vector(b, inst, g.m))


def signed_sums(cols: np.ndarray) -> np.ndarray:
    """Row ``s`` is ``sum_i c_i cols[i]`` where base-3 digit ``i`` of ``s`` maps 0, 1, 2 to c = 0, +1, -1."""
    tab = np.zeros((1, cols.shape[1]), dtype=np.float64)
    for row in cols:
        tab = np.vstack([tab, tab + row, tab - row])
    return np.ascontiguousarray(tab)


_DIGIT_SIGN = (0, 1, -1)


def _decode_signed(code: int, positions, b: list[int]) -> None:
    for pos in positions:
        code, digit = divmod(code, 3)
        b[pos] = _DIGIT_SIGN[digit]


def _split_sizes(free: int, budget: int) -> tuple[int, int]:
    """Largest half sizes (A, B) over ``free`` indices whose tables fit in ``budget // 2``."""
    ka = kb = 0
    while ka + kb < free:
        na, nb = (ka + 1, kb) if ka <= kb else (ka, kb + 1)
        if 3**na + 3**nb > budget // 2:
            break
        ka, kb = na, nb
    return ka, kb


def collide_mitm(
    inst: ProblemInstance,
    m: int,
    budget: int = 10**7,
    seed: int = 0,
    backend: str | None = None,
) -> CollisionCertificate:
    """Meet-in-the-middle search for a sign vector with small pulled-back moments.

    For leading index ``k = 0, 1, 2, ...`` the search fixes ``b_k = 1`` and
    ``b_j = 0`` for ``j < k``, splits the lowest-degree free indices after
    ``k`` into halves ``A`` and ``B`` (as many as the budget allows; the
    pulled-back columns decay geometrically, so high indices matter least),
    enumerates all signed partial sums of each half, and sweeps the two
    lists sorted by the first moment for a pair with ``v_A + v_B`` inside
    ``(-h, h)`` in every coordinate. The seed rotates where the sweep starts.

    ``budget`` bounds the total work: table entries plus candidate pairs.
    The result is split as ``d1 = max(b, 0)``, ``d2 = max(-b, 0)``.
    """
    _check_m(inst, m)
    g = make_grid(inst.n, inst.M, m)
    if budget <= 0:
        raise NotFound("zero budget")
    t0 = time.perf_counter()
    length = inst.n + 1
    rng = make_rng(seed)
    cols = _float_columns(inst, m)
    impl = kernels.get_backend(backend)
    h = float(g.h)
    slack = FLOAT_GUARD * float(g.side)
    spent = 0
    found = None
    for k in range(length):
        left = budget - spent
        if left <= 0:
            break
        # one leading index may use at most an eighth of the budget
        stop = spent + max(1, min(left, budget // 8))
        free = length - k - 1
        ka, kb = _split_sizes(free, stop - spent)
        half_a = list(range(k + 1, k + 1 + ka))
        half_b = list(range(k + 1 + ka, k + 1 + ka + kb))
        tab_a = signed_sums(cols[half_a]) + cols[k] if ka else cols[k : k + 1].copy()
        tab_b = -signed_sums(cols[half_b]) if kb else np.zeros((1, m))
        order_a = np.argsort(tab_a[:, 0], kind="stable")
        order_b = np.argsort(tab_b[:, 0], kind="stable")
        A = np.ascontiguousarray(tab_a[order_a])
        B = np.ascontiguousarray(tab_b[order_b])
        spent += len(A) + len(B)

        def build(i: int, j: int) -> list[int]:
            b = [0] * length
            b[k] = 1
            _decode_signed(int(order_a[i]), half_a, b)
            _decode_signed(int(order_b[j]), half_b, b)
            return b

        def verify(i: int, j: int) -> bool:
            b = SignVector(tuple(build(i, j)))
            return all(abs(x) < g.h for x in signed_moment_vector(b, inst, g.m))

        start = int(rng.integers(len(A)))
        for lo, hi in ((start, len(A)), (0, start)):
            if lo == hi or spent >= stop:
                continue
            i, j, checks = impl.window_sweep(
                np.ascontiguousarray(A[lo:hi]), B, h, slack, -1, -1, stop - spent,
                lambda i, j, lo=lo: verify(i + lo, j),
            )
            spent += int(checks)
            if i >= 0:
                found = (k, build(i + lo, j), ka + kb)
                break
        if found is not None:
            break
    if found is None:
        raise NotFound(f"no near-collision within budget {budget}")
    k, b, used = found
    stats = {
        "leading_index": k,
        "indices_enumerated": used + 1,
        "work": spent,
        "wall_time": time.perf_counter() - t0,
    }
    d1 = SelectionVector(tuple(max(x, 0) for x in b))
    d2 = SelectionVector(tuple(max(-x, 0) for x in b))
    return _certificate(inst, g, d1, d2, "mitm", stats)


def collide_random(
    inst: ProblemInstance,
    m: int,
    seed: int = 0,
    budget: int = 10**6,
    batch: int = 4096,
) -> CollisionCertificate:
    """Birthday sampling: draw selection vectors, bucket by cell, stop at a repeat."""
    _check_m(inst, m)
    g = make_grid(inst.n, inst.M, m)
    if budget <= 0:
        raise NotFound("zero budget")
    t0 = time.perf_counter()
    length = inst.n + 1
    rng = make_rng(seed)
    cols = _float_columns(inst, m)
    inv_h = float(1 / g.h)
    weights = [1 << i for i in range(length)]
    seen: dict[int, int] = {}
    drawn = 0
    while drawn < budget:
        size = min(batch, budget - drawn)
        bits = rng.integers(0, 2, size=(size, length), dtype=np.int8)
        q = (bits @ cols) * inv_h
        fq = np.floor(q)
        r = q - fq
        tol = FLOAT_GUARD * (1.0 + q)
        ambiguous = ((r < tol) | (1.0 - r < tol)).any(axis=1)
        idx = np.clip(fq, 0, g.L - 1).astype(np.int64)
        for row in range(size):
            drawn += 1
            code = sum(w for w, bit in zip(weights, bits[row].tolist()) if bit)
            d = SelectionVector.from_int(code, length)
            if ambiguous[row]:
                key = cell_key(quantize(moment_vector(d, inst, m), g), g.L)
            else:
                key = cell_key(idx[row].tolist(), g.L)
            prev = seen.get(key)
            if prev is None:
                seen[key] = code
            elif prev != code:
                stats = {
                    "enumerated": drawn,
                    "cells_occupied": len(seen),
                    "wall_time": time.perf_counter() - t0,
                }
                d1 = SelectionVector.from_int(prev, length)
                return _certificate(inst, g, d1, d, "random", stats)
    raise NotFound(f"no repeated cell among {drawn} samples")


def construct(
    inst: ProblemInstance, m: int, strategy: str = "exhaustive", **options
) -> tuple[SignVector, RationalPolynomial, CollisionCertificate]:
    """Run a collision strategy and return ``(b, P, certificate)`` with ``P = sum b_j a_j x^j``."""
    if strategy == "exhaustive":
        cert = collide_exhaustive(inst, m, **options)
    elif strategy == "mitm":
        cert = collide_mitm(inst, m, **options)
    elif strategy == "random":
        cert = collide_random(inst, m, **options)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    b, P = difference(cert.d1, cert.d2, inst)
    return b, P, cert
