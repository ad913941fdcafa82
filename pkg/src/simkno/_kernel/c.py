"""Driver for the compiled kernel (see ``_core.pyx``).

Translates a compiled query into flat C buffers and interprets the
program, delegating the n²/n³ loops to the extension.  Raises
:class:`Unsupported` when the model does not fit the C encoding
(more than 64 edge labels); the facade then falls back to the pure
kernel, which uses arbitrary-precision masks.
"""

from __future__ import annotations

from array import array

from . import _core
from .encode import Query

__all__ = ["run", "Unsupported"]


class Unsupported(Exception):
    pass


def run(q: Query) -> int:
    if len(q.labels) > 64:
        raise Unsupported(f"{len(q.labels)} labels exceed the 64-bit packing")
    n = q.n
    edge = array("Q", (q.edge_mask[s][t] for s in range(n) for t in range(n)))
    slots: list[bytearray] = []
    scratch = bytearray(n * n)
    for op in q.program:
        tag = op[0]
        out = bytearray(n)
        if tag == "mask":
            mask = op[1]
            for s in range(n):
                out[s] = mask >> s & 1
        elif tag == "not":
            src = slots[op[1]]
            for s in range(n):
                out[s] = 1 - src[s]
        elif tag == "impl":
            left, right = slots[op[1]], slots[op[2]]
            for s in range(n):
                out[s] = 1 if (not left[s] or right[s]) else 0
        elif tag == "box":
            _core.box_eval(edge, op[1], slots[op[2]], out, n)
        elif tag == "ebox":
            val = slots[op[2]]
            part = bytearray(n)
            for s in range(n):
                out[s] = 1
            for mask in op[1]:
                _core.box_eval(edge, mask, val, part, n)
                for s in range(n):
                    out[s] &= part[s]
        elif tag == "ck":
            reach = scratch
            _core.reach_init(edge, array("Q", op[1]), reach, n)
            _core.close_transitive(reach, n)
            _core.guarded_all(reach, slots[op[2]], out, n)
        else:  # pragma: no cover
            raise ValueError(f"bad opcode {tag!r}")
        slots.append(out)
    result = 0
    for s, bit in enumerate(slots[-1]):
        if bit:
            result |= 1 << s
    return result
