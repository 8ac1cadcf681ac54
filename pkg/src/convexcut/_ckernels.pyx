# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline long _gcd(long a, long b):
    cdef long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


def label_components(int width, int height, y):
    cdef cnp.int8_t[::1] yv = np.ascontiguousarray(y, dtype=np.int8)
    cdef int n = width * height
    cdef int hcount = height * (width - 1)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] comp_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] comp = comp_arr
    cdef cnp.int32_t[::1] stack = np.empty(max(n, 1), dtype=np.int32)
    cdef int s, v, col, row, top, nxt = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = nxt
        top = 0
        stack[top] = s
        top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            col = v % width
            row = v // width
            if col > 0 and yv[row * (width - 1) + col - 1] == 0 and comp[v - 1] < 0:
                comp[v - 1] = nxt
                stack[top] = v - 1
                top += 1
            if col < width - 1 and yv[row * (width - 1) + col] == 0 and comp[v + 1] < 0:
                comp[v + 1] = nxt
                stack[top] = v + 1
                top += 1
            if row > 0 and yv[hcount + v - width] == 0 and comp[v - width] < 0:
                comp[v - width] = nxt
                stack[top] = v - width
                top += 1
            if row < height - 1 and yv[hcount + v] == 0 and comp[v + width] < 0:
                comp[v + width] = nxt
                stack[top] = v + width
                top += 1
        nxt += 1
    return comp_arr


def scan_mc(int width, int height, comp_in, dirs_in):
    cdef cnp.int32_t[::1] comp = np.ascontiguousarray(comp_in, dtype=np.int32)
    cdef cnp.int64_t[:, ::1] dirs = np.ascontiguousarray(
        np.asarray(dirs_in, dtype=np.int64).reshape(-1, 2))
    cdef int n = width * height
    cdef int ncomp = 0
    cdef int v
    for v in range(n):
        if comp[v] + 1 > ncomp:
            ncomp = comp[v] + 1
    # per-component state, invalidated lazily through a sequence stamp
    cdef cnp.int64_t[::1] stamp = np.full(max(ncomp, 1), -1, dtype=np.int64)
    cdef cnp.int64_t[::1] first = np.zeros(max(ncomp, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] last = np.zeros(max(ncomp, 1), dtype=np.int64)
    cdef cnp.int8_t[::1] done = np.zeros(max(ncomp, 1), dtype=np.int8)
    cdef cnp.int64_t[::1] seq = np.empty(max(width, height) + 1, dtype=np.int64)
    out = []
    cdef long seqid = 0
    cdef int di, a, b, start, c0, r0, c, r, t, length, k
    for di in range(dirs.shape[0]):
        a = dirs[di, 0]
        b = dirs[di, 1]
        for start in range(n):
            c0 = start % width
            r0 = start // width
            if 0 <= c0 - a < width and 0 <= r0 - b < height:
                continue
            seqid += 1
            c = c0
            r = r0
            t = 0
            while 0 <= c < width and 0 <= r < height:
                v = r * width + c
                seq[t] = v
                k = comp[v]
                if stamp[k] == seqid:
                    if last[k] < t - 1 and not done[k]:
                        out.append((seq[first[k]], seq[last[k] + 1], v, di))
                        done[k] = 1
                else:
                    stamp[k] = seqid
                    first[k] = t
                    done[k] = 0
                last[k] = t
                c += a
                r += b
                t += 1
    return np.asarray(out, dtype=np.int64).reshape(-1, 4)


def scan_mcn(int width, int height, comp_in, labels_in, hull_in, dirs_in):
    cdef cnp.int32_t[::1] comp = np.ascontiguousarray(comp_in, dtype=np.int32)
    cdef cnp.int32_t[::1] labels = np.ascontiguousarray(labels_in, dtype=np.int32)
    cdef cnp.uint8_t[:, ::1] hull = np.ascontiguousarray(hull_in, dtype=np.uint8)
    cdef cnp.int64_t[:, ::1] dirs = np.ascontiguousarray(
        np.asarray(dirs_in, dtype=np.int64).reshape(-1, 2))
    cdef int nlab = hull.shape[0]
    cdef int n = width * height
    cdef int ncomp = 0
    cdef int v
    for v in range(n):
        if comp[v] + 1 > ncomp:
            ncomp = comp[v] + 1
    ncomp = max(ncomp, 1)
    cdef cnp.int64_t[::1] stamp = np.full(ncomp, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] first = np.zeros(ncomp, dtype=np.int64)
    cdef cnp.int64_t[::1] bad = np.zeros(ncomp, dtype=np.int64)
    cdef cnp.int8_t[::1] done = np.zeros(ncomp, dtype=np.int8)
    # pending[kk] holds components of label kk still waiting for a bad node
    cdef cnp.int64_t[:, ::1] pending = np.empty((nlab, max(width, height) + 1), dtype=np.int64)
    cdef cnp.int64_t[::1] npending = np.zeros(nlab, dtype=np.int64)
    out = []
    cdef long seqid = 0
    cdef int di, a, b, start, c0, r0, c, r, q, lab, kk, p
    for di in range(dirs.shape[0]):
        a = dirs[di, 0]
        b = dirs[di, 1]
        for start in range(n):
            c0 = start % width
            r0 = start // width
            if 0 <= c0 - a < width and 0 <= r0 - b < height:
                continue
            seqid += 1
            for kk in range(nlab):
                npending[kk] = 0
            c = c0
            r = r0
            while 0 <= c < width and 0 <= r < height:
                v = r * width + c
                q = comp[v]
                lab = labels[v]
                for kk in range(nlab):
                    if npending[kk] > 0 and not hull[kk, lab]:
                        for p in range(npending[kk]):
                            bad[pending[kk, p]] = v
                        npending[kk] = 0
                if stamp[q] == seqid:
                    if bad[q] >= 0 and not done[q]:
                        out.append((first[q], bad[q], v, di, lab, labels[bad[q]]))
                        done[q] = 1
                else:
                    stamp[q] = seqid
                    first[q] = v
                    bad[q] = -1
                    done[q] = 0
                    pending[lab, npending[lab]] = q
                    npending[lab] += 1
                c += a
                r += b
    return np.asarray(out, dtype=np.int64).reshape(-1, 6)


def segment_closure(int width, int height, seed, bint transitive):
    cdef int n = width * height
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mask_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] mask = mask_arr
    cdef cnp.int64_t[::1] members = np.empty(max(n, 1), dtype=np.int64)
    cdef int count = 0, nseed, p, q, upper, u, w, ux, uy, dx, dy, sx, sy, s, node
    cdef long g
    for v in seed:
        node = int(v)
        if not mask[node]:
            mask[node] = 1
            members[count] = node
            count += 1
    nseed = count
    p = 1
    while p < count:
        if not transitive and p >= nseed:
            break
        u = members[p]
        ux = u % width
        uy = u // width
        upper = p
        for q in range(upper):
            w = members[q]
            dx = w % width - ux
            dy = w // width - uy
            g = _gcd(dx, dy)
            sx = dx // g
            sy = dy // g
            for s in range(1, g):
                node = (uy + s * sy) * width + ux + s * sx
                if not mask[node]:
                    mask[node] = 1
                    members[count] = node
                    count += 1
        p += 1
    return mask_arr
