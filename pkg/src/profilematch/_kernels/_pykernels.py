"""Pure-Python kernels: the fallback twin of the compiled extension.

Every function here has the same signature and, for the same inputs, must
return bit-identical results to its `_ckernels` counterpart (the arithmetic
is written in the same order on purpose). Keep the two files in sync.
"""

from __future__ import annotations

import math


def dl_distance(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein distance (insert, delete, substitute,
    transpose as elementary operations, transposed blocks may be edited again)."""
    la = len(a)
    lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    alphabet: dict[str, int] = {}
    for ch in a:
        if ch not in alphabet:
            alphabet[ch] = len(alphabet)
    for ch in b:
        if ch not in alphabet:
            alphabet[ch] = len(alphabet)
    da = [0] * len(alphabet)
    maxdist = la + lb
    d = [[0] * (lb + 2) for _ in range(la + 2)]
    d[0][0] = maxdist
    for i in range(la + 1):
        d[i + 1][0] = maxdist
        d[i + 1][1] = i
    for j in range(lb + 1):
        d[0][j + 1] = maxdist
        d[1][j + 1] = j
    for i in range(1, la + 1):
        db = 0
        ai = alphabet[a[i - 1]]
        row = d[i + 1]
        for j in range(1, lb + 1):
            bj = alphabet[b[j - 1]]
            k = da[bj]
            l = db
            if ai == bj:
                cost = 0
                db = j
            else:
                cost = 1
            row[j + 1] = min(
                d[i][j] + cost,
                row[j] + 1,
                d[i][j + 1] + 1,
                d[k][l] + (i - k - 1) + 1 + (j - l - 1),
            )
        da[ai] = i
    return d[la + 1][lb + 1]


def jaro_winkler(a: str, b: str) -> float:
    """Jaro similarity with the Winkler prefix bonus (scale 0.1, prefix cap 4).

    Match window is floor(max_len / 2) - 1 (not below 0); transpositions count
    as half the number of matched characters that disagree in order. Returns
    1.0 when both strings are empty, 0.0 when there are no matches.
    """
    la = len(a)
    lb = len(b)
    if la == 0 and lb == 0:
        return 1.0
    if la == 0 or lb == 0:
        return 0.0
    window = max(la, lb) // 2 - 1
    if window < 0:
        window = 0
    a_match = [False] * la
    b_match = [False] * lb
    m = 0
    for i in range(la):
        lo = i - window
        if lo < 0:
            lo = 0
        hi = i + window + 1
        if hi > lb:
            hi = lb
        for j in range(lo, hi):
            if not b_match[j] and a[i] == b[j]:
                a_match[i] = True
                b_match[j] = True
                m += 1
                break
    if m == 0:
        return 0.0
    mismatches = 0
    j = 0
    for i in range(la):
        if a_match[i]:
            while not b_match[j]:
                j += 1
            if a[i] != b[j]:
                mismatches += 1
            j += 1
    t = mismatches / 2.0
    jaro = (m / la + m / lb + (m - t) / m) / 3.0
    ell = 0
    limit = min(4, la, lb)
    for i in range(limit):
        if a[i] == b[i]:
            ell += 1
        else:
            break
    return jaro + ell * 0.1 * (1.0 - jaro)


def _longest_common_substring(a: str, b: str) -> tuple[int, int, int]:
    """Longest common substring of a and b as (length, start_a, start_b).

    Ties prefer the earliest start in a, then the earliest start in b.
    """
    la = len(a)
    lb = len(b)
    best_len = 0
    best_i = 0
    best_j = 0
    prev = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur = [0] * (lb + 1)
        ca = a[i - 1]
        for j in range(1, lb + 1):
            if ca == b[j - 1]:
                length = prev[j - 1] + 1
                cur[j] = length
                si = i - length
                sj = j - length
                if length > best_len or (
                    length == best_len
                    and (si < best_i or (si == best_i and sj < best_j))
                ):
                    best_len = length
                    best_i = si
                    best_j = sj
        prev = cur
    return best_len, best_i, best_j


def lcs_total(a: str, b: str, min_len: int) -> int:
    """Total length removed by repeatedly extracting the longest common
    substring (of at least min_len) from both strings."""
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    total = 0
    while a and b:
        length, i, j = _longest_common_substring(a, b)
        if length < min_len:
            break
        total += length
        a = a[:i] + a[i + length:]
        b = b[:j] + b[j + length:]
    return total


def best_regression_split(xs, zs, ws) -> tuple[float, float, float, float]:
    """Best single-threshold weighted least-squares fit on one presorted column.

    xs must be ascending; zs/ws carry the targets and weights in the same
    order. Returns (threshold, left_value, right_value, sse). When no split
    point exists (all xs equal) the threshold is +inf and both values are the
    weighted mean, with sse the constant-fit error.
    """
    xs = xs.tolist() if hasattr(xs, "tolist") else list(xs)
    zs = zs.tolist() if hasattr(zs, "tolist") else list(zs)
    ws = ws.tolist() if hasattr(ws, "tolist") else list(ws)
    n = len(xs)
    sw = 0.0
    swz = 0.0
    swzz = 0.0
    for i in range(n):
        w = ws[i]
        z = zs[i]
        sw += w
        swz += w * z
        swzz += w * z * z
    mean = swz / sw if sw > 0.0 else 0.0
    base_sse = swzz - swz * mean
    best_thr = math.inf
    best_left = mean
    best_right = mean
    best_sse = base_sse
    wl = 0.0
    zl = 0.0
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


def best_gini_split(xs, ys, ws) -> tuple[float, float]:
    """Best weighted-Gini threshold on one presorted column of binary labels.

    Returns (threshold, total_child_impurity); threshold is NaN when no
    boundary between distinct x values exists.
    """
    xs = xs.tolist() if hasattr(xs, "tolist") else list(xs)
    ys = ys.tolist() if hasattr(ys, "tolist") else list(ys)
    ws = ws.tolist() if hasattr(ws, "tolist") else list(ws)
    n = len(xs)
    sw = 0.0
    swp = 0.0
    for i in range(n):
        sw += ws[i]
        swp += ws[i] * ys[i]
    best_thr = math.nan
    best_score = math.inf
    wl = 0.0
    pl = 0.0
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
