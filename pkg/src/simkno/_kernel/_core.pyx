# cython: language_level=3, boundscheck=False, wraparound=False
"""C inner loops for the truth-set kernel.

Label sets are packed into a single machine word (at most 64 labels;
wider models stay on the pure kernel).  State sets travel as uint8
membership arrays, so state counts are unbounded.
"""


def box_eval(unsigned long long[::1] edge, unsigned long long mask,
             const unsigned char[::1] val, unsigned char[::1] out,
             Py_ssize_t n):
    """out[s] = 1 iff every t with mask ⊆ edge[s*n+t] has val[t]."""
    cdef Py_ssize_t s, t
    cdef unsigned char ok
    for s in range(n):
        ok = 1
        for t in range(n):
            if (mask & ~edge[s * n + t]) == 0 and val[t] == 0:
                ok = 0
                break
        out[s] = ok


def reach_init(unsigned long long[::1] edge, unsigned long long[::1] masks,
               unsigned char[::1] reach, Py_ssize_t n):
    """reach[s*n+t] = 1 iff some mask in masks fits inside edge[s*n+t]."""
    cdef Py_ssize_t s, t, k, m = masks.shape[0]
    cdef unsigned char hit
    for s in range(n):
        for t in range(n):
            hit = 0
            for k in range(m):
                if (masks[k] & ~edge[s * n + t]) == 0:
                    hit = 1
                    break
            reach[s * n + t] = hit


def close_transitive(unsigned char[::1] reach, Py_ssize_t n):
    """In-place transitive closure (Floyd-Warshall) of an n*n relation."""
    cdef Py_ssize_t i, j, k
    for k in range(n):
        for i in range(n):
            if reach[i * n + k]:
                for j in range(n):
                    if reach[k * n + j]:
                        reach[i * n + j] = 1


def guarded_all(const unsigned char[::1] reach, const unsigned char[::1] val,
                unsigned char[::1] out, Py_ssize_t n):
    """out[s] = 1 iff every t with reach[s*n+t] has val[t]."""
    cdef Py_ssize_t s, t
    cdef unsigned char ok
    for s in range(n):
        ok = 1
        for t in range(n):
            if reach[s * n + t] and val[t] == 0:
                ok = 0
                break
        out[s] = ok
