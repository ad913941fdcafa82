"""Pure-Python interpreter for compiled truth-set queries.

State sets are Python integers used as bitmasks, so the per-state inner
loops run as single big-int operations.  Label masks are unbounded
(arbitrary-precision), which is why this kernel is also the fallback
for models the C kernel cannot encode.
"""

from __future__ import annotations

from .encode import Query

__all__ = ["run"]


def _successor_rows(q: Query, mask: int) -> list[int]:
    # row[s] = bitmask of t with mask ⊆ E(s,t)
    rows = []
    for s in range(q.n):
        edge_s = q.edge_mask[s]
        bits = 0
        for t in range(q.n):
            if mask & ~edge_s[t] == 0:
                bits |= 1 << t
        rows.append(bits)
    return rows


def _close_paths(rows: list[int], n: int) -> list[int]:
    # reachability along >= 1 edges, by repeated squaring of the
    # successor rows (each sweep composes the current relation with
    # itself, so convergence needs O(log diameter) sweeps)
    reach = rows[:]
    while True:
        changed = False
        nxt = []
        for s in range(n):
            acc = reach[s]
            rest = acc
            while rest:
                low = rest & -rest
                acc |= reach[low.bit_length() - 1]
                rest ^= low
            nxt.append(acc)
            changed = changed or acc != reach[s]
        reach = nxt
        if not changed:
            return reach


def _box(rows: list[int], val: int, n: int) -> int:
    out = 0
    for s in range(n):
        if rows[s] & ~val == 0:
            out |= 1 << s
    return out


def run(q: Query) -> int:
    """Evaluate the program; returns the root slot's state bitmask."""
    full = q.full
    rows_for: dict[int, list[int]] = {}

    def rows(mask: int) -> list[int]:
        cached = rows_for.get(mask)
        if cached is None:
            cached = rows_for[mask] = _successor_rows(q, mask)
        return cached

    slots: list[int] = []
    for op in q.program:
        tag = op[0]
        if tag == "mask":
            value = op[1]
        elif tag == "not":
            value = slots[op[1]] ^ full
        elif tag == "impl":
            value = (slots[op[1]] ^ full) | slots[op[2]]
        elif tag == "box":
            value = _box(rows(op[1]), slots[op[2]], q.n)
        elif tag == "ebox":
            value = full
            for mask in op[1]:
                value &= _box(rows(mask), slots[op[2]], q.n)
        elif tag == "ck":
            union = [0] * q.n
            for mask in op[1]:
                member = rows(mask)
                for s in range(q.n):
                    union[s] |= member[s]
            value = _box(_close_paths(union, q.n), slots[op[2]], q.n)
        else:  # pragma: no cover
            raise ValueError(f"bad opcode {tag!r}")
        slots.append(value)
    return slots[-1]
