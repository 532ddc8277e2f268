"""Kernel backend tests: the compiled and pure twins must agree exactly, and
the Damerau-Levenshtein kernel must match an exhaustive edit search."""

import random
from collections import deque

import numpy as np
import pytest

from profilematch import _kernels as kernels
from profilematch._kernels import _pykernels as pyk

try:
    from profilematch._kernels import _ckernels as ck
except ImportError:
    ck = None

needs_compiled = pytest.mark.skipif(ck is None, reason="compiled kernels not built")


def bfs_edit_distance(src, dst, alphabet, max_len):
    """Breadth-first search over free edit sequences (insert, delete,
    substitute, adjacent transpose), intermediate strings capped at max_len.

    The cap can only overestimate a distance, never underestimate it, so a
    disagreement with the DP always surfaces as a test failure.
    """
    if src == dst:
        return 0
    seen = {src}
    frontier = deque([src])
    dist = 0
    while frontier:
        dist += 1
        next_frontier = deque()
        for s in frontier:
            for t in edit_neighbors(s, alphabet, max_len):
                if t == dst:
                    return dist
                if t not in seen:
                    seen.add(t)
                    next_frontier.append(t)
        frontier = next_frontier
    raise AssertionError("unreachable target")


def edit_neighbors(s, alphabet, max_len):
    n = len(s)
    for i in range(n):
        yield s[:i] + s[i + 1 :]  # delete
        for c in alphabet:
            if c != s[i]:
                yield s[:i] + c + s[i + 1 :]  # substitute
    if n < max_len:
        for i in range(n + 1):
            for c in alphabet:
                yield s[:i] + c + s[i:]  # insert
    for i in range(n - 1):
        if s[i] != s[i + 1]:
            yield s[:i] + s[i + 1] + s[i] + s[i + 2 :]  # transpose


def random_string(rng, alphabet, max_len):
    return "".join(rng.choice(alphabet) for _ in range(rng.randrange(max_len + 1)))


class TestDlDistance:
    def test_known_values(self):
        assert kernels.dl_distance("kitten", "sitting") == 3
        assert kernels.dl_distance("ab", "ba") == 1
        assert kernels.dl_distance("abc", "abc") == 0
        assert kernels.dl_distance("", "abc") == 3
        assert kernels.dl_distance("abc", "") == 3
        # free edits allow re-editing a transposed block
        assert kernels.dl_distance("ca", "abc") == 2

    def test_matches_bfs_on_random_pairs(self):
        rng = random.Random(7)
        alphabet = "ab"
        for _ in range(80):
            a = random_string(rng, alphabet, 4)
            b = random_string(rng, alphabet, 4)
            expected = bfs_edit_distance(a, b, alphabet, max_len=6)
            assert kernels.dl_distance(a, b) == expected, (a, b)

    def test_symmetry_and_bounds(self):
        rng = random.Random(13)
        for _ in range(300):
            a = random_string(rng, "abcde", 8)
            b = random_string(rng, "abcde", 8)
            d = kernels.dl_distance(a, b)
            assert d == kernels.dl_distance(b, a)
            assert 0 <= d <= max(len(a), len(b))


class TestSplitKernels:
    def brute_regression(self, xs, zs, ws):
        n = len(xs)
        best = None
        for i in range(n - 1):
            if xs[i + 1] <= xs[i]:
                continue
            lw = ws[: i + 1].sum()
            rw = ws[i + 1 :].sum()
            lm = (ws[: i + 1] * zs[: i + 1]).sum() / lw
            rm = (ws[i + 1 :] * zs[i + 1 :]).sum() / rw
            sse = (ws[: i + 1] * (zs[: i + 1] - lm) ** 2).sum() + (
                ws[i + 1 :] * (zs[i + 1 :] - rm) ** 2
            ).sum()
            if best is None or sse < best[0] - 1e-12:
                best = (sse, (xs[i] + xs[i + 1]) / 2.0)
        return best

    def test_regression_split_matches_brute_force(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = rng.integers(2, 40)
            xs = np.sort(np.round(rng.uniform(0, 5, n), 1))
            zs = rng.normal(size=n)
            ws = rng.uniform(0.1, 2.0, n)
            thr, left, right, sse = kernels.best_regression_split(xs, zs, ws)
            brute = self.brute_regression(xs, zs, ws)
            if brute is None:
                assert thr == np.inf
            else:
                assert sse == pytest.approx(brute[0], abs=1e-9)
                assert thr == pytest.approx(brute[1])

    def test_regression_split_constant_column(self):
        xs = np.zeros(5)
        zs = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        ws = np.ones(5)
        thr, left, right, sse = kernels.best_regression_split(xs, zs, ws)
        assert thr == np.inf
        assert left == right == pytest.approx(3.0)

    def test_gini_split_prefers_clean_boundary(self):
        xs = np.array([0.0, 0.1, 0.2, 0.8, 0.9, 1.0])
        ys = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
        ws = np.ones(6)
        thr, score = kernels.best_gini_split(xs, ys, ws)
        assert 0.2 < thr < 0.8
        assert score == pytest.approx(0.0)

    def test_gini_split_no_boundary(self):
        thr, score = kernels.best_gini_split(
            np.ones(4), np.array([0.0, 1.0, 0.0, 1.0]), np.ones(4)
        )
        assert np.isnan(thr)


@needs_compiled
class TestBackendEquivalence:
    """The compiled kernels and the pure twin must return identical results."""

    def test_string_kernels_agree(self):
        rng = random.Random(21)
        for _ in range(500):
            a = random_string(rng, "abcdefg ", 20)
            b = random_string(rng, "abcdefg ", 20)
            assert ck.dl_distance(a, b) == pyk.dl_distance(a, b)
            assert ck.jaro_winkler(a, b) == pyk.jaro_winkler(a, b)
            assert ck.lcs_total(a, b, 2) == pyk.lcs_total(a, b, 2)
            assert ck.lcs_total(a, b, 3) == pyk.lcs_total(a, b, 3)

    def test_unicode_strings_agree(self):
        pairs = [("héllo wörld", "hello world"), ("日本語", "日本"), ("ßß", "ss")]
        for a, b in pairs:
            assert ck.dl_distance(a, b) == pyk.dl_distance(a, b)
            assert ck.jaro_winkler(a, b) == pyk.jaro_winkler(a, b)
            assert ck.lcs_total(a, b, 2) == pyk.lcs_total(a, b, 2)

    def test_split_kernels_agree(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(1, 60))
            xs = np.sort(np.round(rng.uniform(0, 3, n), 1))
            zs = rng.normal(size=n)
            ws = rng.uniform(0.01, 1.0, n)
            ys = (rng.uniform(size=n) < 0.4).astype(np.float64)
            assert ck.best_regression_split(xs, zs, ws) == pyk.best_regression_split(
                xs, zs, ws
            )
            c_thr, c_score = ck.best_gini_split(xs, ys, ws)
            p_thr, p_score = pyk.best_gini_split(xs, ys, ws)
            assert (c_thr == p_thr) or (np.isnan(c_thr) and np.isnan(p_thr))
            assert (c_score == p_score) or (np.isinf(c_score) and np.isinf(p_score))
