"""Pure-Python implementations of the hot loops.

Same signatures and outputs as the compiled ``_ckernels`` module; selected by
``convexcut.kernels`` when the extension is unavailable.
"""
from math import gcd

import numpy as np


def label_components(width, height, y):
    """Component id per node for the uncut edges of ``y``, first-visit order."""
    n = width * height
    hcount = height * (width - 1)
    y = np.asarray(y)
    comp = [-1] * n
    nxt = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = nxt
        stack = [s]
        while stack:
            v = stack.pop()
            col, row = v % width, v // width
            if col > 0 and not y[row * (width - 1) + col - 1] and comp[v - 1] < 0:
                comp[v - 1] = nxt
                stack.append(v - 1)
            if col < width - 1 and not y[row * (width - 1) + col] and comp[v + 1] < 0:
                comp[v + 1] = nxt
                stack.append(v + 1)
            if row > 0 and not y[hcount + v - width] and comp[v - width] < 0:
                comp[v - width] = nxt
                stack.append(v - width)
            if row < height - 1 and not y[hcount + v] and comp[v + width] < 0:
                comp[v + width] = nxt
                stack.append(v + width)
        nxt += 1
    return np.asarray(comp, dtype=np.int32)


def _sequences(width, height, a, b):
    for start in range(width * height):
        c0, r0 = start % width, start // width
        if 0 <= c0 - a < width and 0 <= r0 - b < height:
            continue
        seq = []
        c, r = c0, r0
        while 0 <= c < width and 0 <= r < height:
            seq.append(r * width + c)
            c += a
            r += b
        yield seq


def scan_mc(width, height, comp, dirs):
    """Rows ``(i, z, j, direction_index)``; first violation per (component, sequence)."""
    comp = np.asarray(comp)
    out = []
    for di, (a, b) in enumerate(np.asarray(dirs).reshape(-1, 2).tolist()):
        for seq in _sequences(width, height, a, b):
            first = {}
            last = {}
            done = set()
            for t, v in enumerate(seq):
                k = int(comp[v])
                if k in last:
                    if last[k] < t - 1 and k not in done:
                        out.append((seq[first[k]], seq[last[k] + 1], v, di))
                        done.add(k)
                else:
                    first[k] = t
                last[k] = t
    return np.asarray(out, dtype=np.int64).reshape(-1, 4)


def scan_mcn(width, height, comp, labels, hull, dirs):
    """Rows ``(i, z, j, direction_index, k, l)``.

    ``hull[k, l]`` is true when label ``l`` may appear between two nodes of a
    ``k``-labelled component.
    """
    comp = np.asarray(comp)
    labels = np.asarray(labels)
    hull = np.asarray(hull, dtype=bool)
    nlab = hull.shape[0]
    out = []
    for di, (a, b) in enumerate(np.asarray(dirs).reshape(-1, 2).tolist()):
        for seq in _sequences(width, height, a, b):
            first = {}
            bad = {}
            done = set()
            pending = [[] for _ in range(nlab)]
            for t, v in enumerate(seq):
                q = int(comp[v])
                lab = int(labels[v])
                for kk in range(nlab):
                    if pending[kk] and not hull[kk, lab]:
                        for other in pending[kk]:
                            bad[other] = v
                        pending[kk] = []
                if q in first:
                    if q in bad and q not in done:
                        z = bad[q]
                        out.append((first[q], z, v, di, lab, int(labels[z])))
                        done.add(q)
                else:
                    first[q] = v
                    pending[lab].append(q)
    return np.asarray(out, dtype=np.int64).reshape(-1, 6)


def segment_closure(width, height, seed, transitive):
    """Mask of nodes lying on lattice segments between marked nodes.

    With ``transitive`` the closure is iterated to a fixed point; otherwise only
    pairs of seed nodes contribute.
    """
    mask = np.zeros(width * height, dtype=np.uint8)
    members = []
    for v in seed:
        v = int(v)
        if not mask[v]:
            mask[v] = 1
            members.append(v)
    nseed = len(members)
    p = 1
    while p < len(members):
        if not transitive and p >= nseed:
            break
        u = members[p]
        ux, uy = u % width, u // width
        upper = p if transitive else min(p, nseed)
        for q in range(upper):
            w = members[q]
            dx, dy = w % width - ux, w // width - uy
            g = gcd(abs(dx), abs(dy))
            sx, sy = dx // g, dy // g
            for s in range(1, g):
                node = (uy + s * sy) * width + ux + s * sx
                if not mask[node]:
                    mask[node] = 1
                    members.append(node)
        p += 1
    return mask
