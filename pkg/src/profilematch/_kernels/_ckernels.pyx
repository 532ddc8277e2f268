# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the hot inner loops of the toolkit.

Must stay semantically identical (bit-for-bit on the same inputs) to the
pure-Python twin in `_pykernels.py`; the arithmetic is deliberately written
in the same order. Keep the two files in sync.
"""

from libc.stdlib cimport free, malloc

import math


cdef int* _codes(str s, Py_ssize_t n) except NULL:
    cdef int* p = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if p == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        p[i] = <int> ord(s[i])
    return p


def dl_distance(str a, str b):
    """Unrestricted Damerau-Levenshtein distance (insert, delete, substitute,
    transpose as elementary operations, transposed blocks may be edited again)."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    alphabet = {}
    cdef Py_ssize_t i, j
    for i in range(la):
        ch = a[i]
        if ch not in alphabet:
            alphabet[ch] = len(alphabet)
    for j in range(lb):
        ch = b[j]
        if ch not in alphabet:
            alphabet[ch] = len(alphabet)
    cdef Py_ssize_t nsym = len(alphabet)
    cdef int* ai_arr = <int*> malloc(la * sizeof(int))
    cdef int* bj_arr = <int*> malloc(lb * sizeof(int))
    cdef int* da = <int*> malloc(nsym * sizeof(int))
    cdef int* d = <int*> malloc((la + 2) * (lb + 2) * sizeof(int))
    if ai_arr == NULL or bj_arr == NULL or da == NULL or d == NULL:
        free(ai_arr); free(bj_arr); free(da); free(d)
        raise MemoryError()
    cdef Py_ssize_t stride = lb + 2
    cdef int maxdist = <int> (la + lb)
    cdef int cost, val, cand, result
    cdef int ai, bj, k, l, db
    try:
        for i in range(la):
            ai_arr[i] = alphabet[a[i]]
        for j in range(lb):
            bj_arr[j] = alphabet[b[j]]
        for i in range(nsym):
            da[i] = 0
        d[0] = maxdist
        for i in range(la + 1):
            d[(i + 1) * stride + 0] = maxdist
            d[(i + 1) * stride + 1] = <int> i
        for j in range(lb + 1):
            d[0 * stride + j + 1] = maxdist
            d[1 * stride + j + 1] = <int> j
        for i in range(1, la + 1):
            db = 0
            ai = ai_arr[i - 1]
            for j in range(1, lb + 1):
                bj = bj_arr[j - 1]
                k = da[bj]
                l = db
                if ai == bj:
                    cost = 0
                    db = <int> j
                else:
                    cost = 1
                val = d[i * stride + j] + cost
                cand = d[(i + 1) * stride + j] + 1
                if cand < val:
                    val = cand
                cand = d[i * stride + j + 1] + 1
                if cand < val:
                    val = cand
                cand = d[k * stride + l] + (<int> i - k - 1) + 1 + (<int> j - l - 1)
                if cand < val:
                    val = cand
                d[(i + 1) * stride + j + 1] = val
            da[ai] = <int> i
        result = d[(la + 1) * stride + lb + 1]
    finally:
        free(ai_arr); free(bj_arr); free(da); free(d)
    return result


def jaro_winkler(str a, str b):
    """Jaro similarity with the Winkler prefix bonus (scale 0.1, prefix cap 4).

    Match window is floor(max_len / 2) - 1 (not below 0); transpositions count
    as half the number of matched characters that disagree in order. Returns
    1.0 when both strings are empty, 0.0 when there are no matches.
    """
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0 and lb == 0:
        return 1.0
    if la == 0 or lb == 0:
        return 0.0
    cdef Py_ssize_t window = (la if la > lb else lb) // 2 - 1
    if window < 0:
        window = 0
    cdef int* ac = _codes(a, la)
    cdef int* bc = _codes(b, lb)
    cdef char* a_match = <char*> malloc(la)
    cdef char* b_match = <char*> malloc(lb)
    cdef Py_ssize_t i, j, lo, hi, m, mismatches, ell, limit
    cdef double t, jaro
    if a_match == NULL or b_match == NULL:
        free(ac); free(bc); free(a_match); free(b_match)
        raise MemoryError()
    try:
        for i in range(la):
            a_match[i] = 0
        for j in range(lb):
            b_match[j] = 0
        m = 0
        for i in range(la):
            lo = i - window
            if lo < 0:
                lo = 0
            hi = i + window + 1
            if hi > lb:
                hi = lb
            for j in range(lo, hi):
                if b_match[j] == 0 and ac[i] == bc[j]:
                    a_match[i] = 1
                    b_match[j] = 1
                    m += 1
                    break
        if m == 0:
            return 0.0
        mismatches = 0
        j = 0
        for i in range(la):
            if a_match[i]:
                while b_match[j] == 0:
                    j += 1
                if ac[i] != bc[j]:
                    mismatches += 1
                j += 1
        t = mismatches / 2.0
        jaro = ((<double> m) / la + (<double> m) / lb + (m - t) / m) / 3.0
        ell = 0
        limit = 4
        if la < limit:
            limit = la
        if lb < limit:
            limit = lb
        for i in range(limit):
            if ac[i] == bc[i]:
                ell += 1
            else:
                break
        return jaro + ell * 0.1 * (1.0 - jaro)
    finally:
        free(ac); free(bc); free(a_match); free(b_match)


cdef tuple _lcsub(int* ac, Py_ssize_t la, int* bc, Py_ssize_t lb):
    cdef Py_ssize_t best_len = 0, best_i = 0, best_j = 0
    cdef Py_ssize_t i, j, length, si, sj
    cdef int* prev = <int*> malloc((lb + 1) * sizeof(int))
    cdef int* cur = <int*> malloc((lb + 1) * sizeof(int))
    cdef int* tmp
    if prev == NULL or cur == NULL:
        free(prev); free(cur)
        raise MemoryError()
    try:
        for j in range(lb + 1):
            prev[j] = 0
        for i in range(1, la + 1):
            cur[0] = 0
            for j in range(1, lb + 1):
                if ac[i - 1] == bc[j - 1]:
                    length = prev[j - 1] + 1
                    cur[j] = <int> length
                    si = i - length
                    sj = j - length
                    if length > best_len or (
                        length == best_len
                        and (si < best_i or (si == best_i and sj < best_j))
                    ):
                        best_len = length
                        best_i = si
                        best_j = sj
                else:
                    cur[j] = 0
            tmp = prev
            prev = cur
            cur = tmp
        return best_len, best_i, best_j
    finally:
        free(prev); free(cur)


def lcs_total(str a, str b, int min_len):
    """Total length removed by repeatedly extracting the longest common
    substring (of at least min_len) from both strings."""
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    cdef Py_ssize_t total = 0, length, i, j
    cdef int* ac
    cdef int* bc
    while len(a) > 0 and len(b) > 0:
        ac = _codes(a, len(a))
        bc = _codes(b, len(b))
        try:
            length, i, j = _lcsub(ac, len(a), bc, len(b))
        finally:
            free(ac); free(bc)
        if length < min_len:
            break
        total += length
        a = a[:i] + a[i + length:]
        b = b[:j] + b[j + length:]
    return total


def best_regression_split(double[::1] xs, double[::1] zs, double[::1] ws):
    """Best single-threshold weighted least-squares fit on one presorted column.

    xs must be ascending; zs/ws carry the targets and weights in the same
    order. Returns (threshold, left_value, right_value, sse). When no split
    point exists (all xs equal) the threshold is +inf and both values are the
    weighted mean, with sse the constant-fit error.
    """
    cdef Py_ssize_t n = xs.shape[0]
    cdef double sw = 0.0, swz = 0.0, swzz = 0.0
    cdef double w, z
    cdef Py_ssize_t i
    for i in range(n):
        w = ws[i]
        z = zs[i]
        sw += w
        swz += w * z
        swzz += w * z * z
    cdef double mean = swz / sw if sw > 0.0 else 0.0
    cdef double base_sse = swzz - swz * mean
    cdef double best_thr = math.inf
    cdef double best_left = mean
    cdef double best_right = mean
    cdef double best_sse = base_sse
    cdef double wl = 0.0, zl = 0.0, wr, zr, sse
    for i in range(n - 1):
        wl += ws[i]
        zl += ws[i] * zs[i]
        if xs[i + 1] <= xs[i]:
            continue
        wr = sw - wl
        zr = swz - zl
        if wl <= 0.0 or wr <= 0.0:
            continue
        sse = swzz - (zl * zl / wl + zr * zr / wr)
        if sse < best_sse:
            best_sse = sse
            best_thr = (xs[i] + xs[i + 1]) / 2.0
            best_left = zl / wl
            best_right = zr / wr
    return best_thr, best_left, best_right, best_sse


def best_gini_split(double[::1] xs, double[::1] ys, double[::1] ws):
    """Best weighted-Gini threshold on one presorted column of binary labels.

    Returns (threshold, total_child_impurity); threshold is NaN when no
    boundary between distinct x values exists.
    """
    cdef Py_ssize_t n = xs.shape[0]
    cdef double sw = 0.0, swp = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        sw += ws[i]
        swp += ws[i] * ys[i]
    cdef double best_thr = math.nan
    cdef double best_score = math.inf
    cdef double wl = 0.0, pl = 0.0, wr, pr, nl, nr, score
    for i in range(n - 1):
        wl += ws[i]
        pl += ws[i] * ys[i]
        if xs[i + 1] <= xs[i]:
            continue
        wr = sw - wl
        pr = swp - pl
        if wl <= 0.0 or wr <= 0.0:
            continue
        nl = wl - pl
        nr = wr - pr
        score = (wl - (pl * pl + nl * nl) / wl) + (wr - (pr * pr + nr * nr) / wr)
        if score < best_score:
            best_score = score
            best_thr = (xs[i] + xs[i + 1]) / 2.0
    return best_thr, best_score
