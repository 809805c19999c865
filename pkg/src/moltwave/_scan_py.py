"""Pure-Python/SciPy fallback for the packed dual exponential scan.

Local-integral assembly is vectorized with numpy; the sequential
recursions run through ``scipy.signal.lfilter`` over the uniform interior
span of each line (only the two end cells of a line may carry a different
decay factor), so the fallback stays O(N) with a line-loop overhead.
"""

import numpy as np
from scipy.signal import lfilter


def _scan_dir(j, d, out):
    m = out.size
    out[0] = 0.0
    if m == 1:
        return
    out[1] = j[1]
    if m == 2:
        return
    if m > 3:
        dc = d[2]
        seg = d[2:m - 1]
        if seg.size and np.ptp(seg) > 1e-13 * max(abs(dc), 1e-300):
            for i in range(2, m - 1):
                out[i] = j[i] + d[i] * out[i - 1]
        else:
            out[2:m - 1] = lfilter([1.0], [1.0, -dc], j[2:m - 1],
                                   zi=np.array([dc * out[1]]))[0]
    out[m - 1] = j[m - 1] + d[m - 1] * out[m - 2]


def scan_lines(f, wl, sl, wr, sr, dl, dr, offsets, il, ir):
    jl = np.einsum("ij,ij->i", wl, f[sl])
    jr = np.einsum("ij,ij->i", wr, f[sr])
    for k in range(offsets.size - 1):
        s, e = offsets[k], offsets[k + 1]
        _scan_dir(jl[s:e], dl[s:e], il[s:e])
        _scan_dir(jr[s:e][::-1], dr[s:e][::-1], ir[s:e][::-1])
