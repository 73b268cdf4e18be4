"""Double description method for pointed polyhedral cones over the integers.

Given homogeneous constraints ``a_i . h >= 0`` of full rank ``n``, compute the
extreme rays of the cone they define.  All arithmetic is on Python ints;
every ray is kept primitive (gcd of entries 1), which makes rays canonical.
Adjacency is decided combinatorially on zero sets stored as int bitmasks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import reduce
from typing import Sequence

from .errors import CapacityError
from .linalg import independent_rows, inverse, integerize

log = logging.getLogger(__name__)

# bytes per stored ray entry, used to turn a memory bound into a ray cap
_BYTES_PER_ENTRY = 64
DEFAULT_MEMORY_BOUND = 2 * 1024 ** 3


@dataclass
class ConeRays:
    rays: list[list[int]]
    # zero_sets[j] has bit i set iff constraint i is tight on rays[j]
    zero_sets: list[int]


def _primitive(v: list[int]) -> list[int]:
    g = reduce(gcd, v, 0)
    return [x // g for x in v] if g > 1 else v


def ray_cap(dimension: int, memory_bound: int) -> int:
    per_ray = _BYTES_PER_ENTRY * (dimension + 1) + 64
    return max(1, memory_bound // per_ray)


def extreme_rays(
    rows: Sequence[Sequence[int]],
    order: Sequence[int] | None = None,
    memory_bound: int = DEFAULT_MEMORY_BOUND,
) -> ConeRays:
    """Extreme rays of ``{h : rows[i] . h >= 0 for all i}``.

    ``order`` is the insertion order of the constraints; the first ``n``
    linearly independent constraints in that order seed the computation.
    Raises ``ValueError`` if the constraints do not have full column rank
    (the cone would not be pointed).
    """
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        raise ValueError("no constraints")
    n = len(rows[0])
    order = list(range(len(rows))) if order is None else list(order)
    cap = ray_cap(n, memory_bound)

    seed_pos = independent_rows([rows[i] for i in order], n, limit=n)
    if len(seed_pos) < n:
        raise ValueError(f"constraints have rank {len(seed_pos)} < {n}; cone is not pointed")
    seed = [order[p] for p in seed_pos]
    seed_set = set(seed)
    rest = [i for i in order if i not in seed_set]

    inv = inverse([rows[i] for i in seed])
    rays = []
    zero_sets = []
    for j in range(n):
        col = integerize([inv[i][j] for i in range(n)])
        rays.append(col)
        z = 0
        for k, i in enumerate(seed):
            if k != j:
                z |= 1 << i
        zero_sets.append(z)

    processed = n
    for i in rest:
        a = rows[i]
        nz = [(j, x) for j, x in enumerate(a) if x]
        bit = 1 << i
        plus, minus, zero = [], [], []
        values = []
        for idx, r in enumerate(rays):
            s = 0
            for j, x in nz:
                s += x * r[j]
            values.append(s)
            if s > 0:
                plus.append(idx)
            elif s < 0:
                minus.append(idx)
            else:
                zero.append(idx)
        processed += 1
        if not minus:
            for idx in zero:
                zero_sets[idx] |= bit
            continue

        need = n - 2
        new_rays = []
        new_zero = []
        if plus:
            all_z = zero_sets
            for p in plus:
                zp = zero_sets[p]
                sp = values[p]
                rp = rays[p]
                for m in minus:
                    common = zp & zero_sets[m]
                    if common.bit_count() < need:
                        continue
                    adjacent = True
                    for t, zt in enumerate(all_z):
                        if t != p and t != m and zt & common == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    sm = -values[m]
                    rm = rays[m]
                    new_rays.append(_primitive([sp * y + sm * x for x, y in zip(rp, rm)]))
                    new_zero.append(common | bit)
        kept = plus + zero
        rays = [rays[k] for k in kept] + new_rays
        zero_sets = [zero_sets[k] | (bit if values[k] == 0 else 0) for k in kept] + new_zero
        if len(rays) > cap:
            raise CapacityError(
                f"double description grew to {len(rays)} rays in dimension {n} after "
                f"{processed} of {len(rows)} constraints; the memory bound "
                f"{memory_bound} bytes allows {cap}",
                cap=memory_bound,
            )
        log.debug("dd: %d/%d constraints, %d rays", processed, len(rows), len(rays))
    return ConeRays(rays, zero_sets)
