# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dual exponential scan over packed sweep lines.

For each line [s, e) in the packed layout, assembles the local integrals
from the precomputed 3-point stencils and runs the forward/backward
first-order recursions.  This is the hot loop of every sweep.
"""


def scan_lines(double[::1] f,
               double[:, ::1] wl, long[:, ::1] sl,
               double[:, ::1] wr, long[:, ::1] sr,
               double[::1] dl, double[::1] dr,
               long[::1] offsets,
               double[::1] il, double[::1] ir):
    cdef Py_ssize_t nlines = offsets.shape[0] - 1
    cdef Py_ssize_t k, i, s, e
    cdef double j
    with nogil:
        for k in range(nlines):
            s = offsets[k]
            e = offsets[k + 1]
            il[s] = 0.0
            for i in range(s + 1, e):
                j = (wl[i, 0] * f[sl[i, 0]]
                     + wl[i, 1] * f[sl[i, 1]]
                     + wl[i, 2] * f[sl[i, 2]])
                il[i] = j + dl[i] * il[i - 1]
            ir[e - 1] = 0.0
            for i in range(e - 2, s - 1, -1):
                j = (wr[i, 0] * f[sr[i, 0]]
                     + wr[i, 1] * f[sr[i, 1]]
                     + wr[i, 2] * f[sr[i, 2]])
                ir[i] = j + dr[i] * ir[i + 1]
