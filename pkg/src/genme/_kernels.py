"""Exhaustive substitution scan over dense truth tables.

Both implementations take the same integer-coded problem:

* ``domains[v, :dom_sizes[v]]`` -- constant indices variable ``v`` may take;
* ``theta[v]`` -- the reference binding the distance is measured against;
* ``head_codes``/``head_values`` -- head arguments and the constants they must equal;
* ``lit_codes[l, :lit_arity[l]]`` -- literal arguments;
* ``tables[lit_offset[l]:]`` -- row-major truth table of literal ``l`` over the
  constant pool (already sign-adjusted, so a negative literal stores its complement).

An argument code ``c >= 0`` is a variable index, ``c < 0`` is the constant ``-c - 1``.
Assignments are enumerated in row-major order, last variable fastest.

Set ``GENME_NUMBA=0`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("GENME_NUMBA", "1").strip().lower() not in (
    "0", "false", "no", "off")

_CHUNK = 1 << 18


def _scan_python(domains, dom_sizes, theta, head_codes, head_values,
                 lit_codes, lit_arity, lit_offset, tables, n_const, want):
    """Reference loop; compiled by numba, also runnable as plain Python.

    With ``want < 0`` returns ``(n_altered, best, n_best, rows)`` where rows is
    empty; with ``want >= 0`` fills rows for assignments at distance ``want``.
    """
    n_vars = dom_sizes.shape[0]
    n_head = head_codes.shape[0]
    n_lits = lit_arity.shape[0]
    total = 1
    for v in range(n_vars):
        total *= dom_sizes[v]
    digits = np.zeros(n_vars, dtype=np.int64)
    vals = np.empty(n_vars, dtype=np.int64)
    n_altered = 0
    best = -1
    n_best = 0
    rows = np.empty((0, n_vars), dtype=np.int64)
    if want >= 0:
        # row count is not known up front; the buffer doubles as needed
        rows = np.empty((16, n_vars), dtype=np.int64)
    filled = 0
    for _ in range(total):
        dist = 0
        for v in range(n_vars):
            vals[v] = domains[v, digits[v]]
            if vals[v] != theta[v]:
                dist += 1
        if dist > 0:
            n_altered += 1
            ok = True
            for h in range(n_head):
                c = head_codes[h]
                x = vals[c] if c >= 0 else -c - 1
                if x != head_values[h]:
                    ok = False
                    break
            if ok:
                for l in range(n_lits):
                    idx = 0
                    for k in range(lit_arity[l]):
                        c = lit_codes[l, k]
                        x = vals[c] if c >= 0 else -c - 1
                        idx = idx * n_const + x
                    if tables[lit_offset[l] + idx] == 0:
                        ok = False
                        break
            if ok:
                if want >= 0:
                    if dist == want:
                        if filled == rows.shape[0]:
                            grown = np.empty((rows.shape[0] * 2, n_vars), dtype=np.int64)
                            grown[:filled] = rows[:filled]
                            rows = grown
                        rows[filled] = vals
                        filled += 1
                elif best < 0 or dist < best:
                    best = dist
                    n_best = 1
                elif dist == best:
                    n_best += 1
        # advance the mixed-radix counter, last variable fastest
        v = n_vars - 1
        while v >= 0:
            digits[v] += 1
            if digits[v] < dom_sizes[v]:
                break
            digits[v] = 0
            v -= 1
    if want >= 0:
        return n_altered, want, filled, rows[:filled].copy()
    return n_altered, best, n_best, rows


_scan_numba = numba.njit(cache=True, nogil=True)(_scan_python) if HAVE_NUMBA else None


def scan_numba(domains, dom_sizes, theta, head_codes, head_values,
               lit_codes, lit_arity, lit_offset, tables, n_const):
    if _scan_numba is None:
        raise RuntimeError("numba is not installed")
    args = (domains, dom_sizes, theta, head_codes, head_values,
            lit_codes, lit_arity, lit_offset, tables, np.int64(n_const))
    n_altered, best, _, _ = _scan_numba(*args, np.int64(-1))
    if best < 0:
        return int(n_altered), -1, np.empty((0, len(dom_sizes)), dtype=np.int64)
    _, _, _, rows = _scan_numba(*args, np.int64(best))
    return int(n_altered), int(best), rows


def scan_numpy(domains, dom_sizes, theta, head_codes, head_values,
               lit_codes, lit_arity, lit_offset, tables, n_const):
    n_vars = len(dom_sizes)
    total = int(np.prod(dom_sizes, dtype=np.int64))
    best = -1
    kept: list[np.ndarray] = []
    n_altered = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = np.unravel_index(idx, tuple(int(s) for s in dom_sizes))
        vals = np.stack([domains[v][digits[v]] for v in range(n_vars)], axis=1)
        dist = (vals != theta).sum(axis=1)
        ok = dist > 0
        n_altered += int(ok.sum())
        for c, want in zip(head_codes, head_values):
            ok &= (vals[:, c] if c >= 0 else np.int64(-c - 1)) == want
        for l in range(len(lit_arity)):
            if not ok.any():
                break
            flat = np.zeros(len(vals), dtype=np.int64)
            for k in range(lit_arity[l]):
                c = lit_codes[l, k]
                flat = flat * n_const + (vals[:, c] if c >= 0 else -c - 1)
            ok &= tables[lit_offset[l] + flat] != 0
        if not ok.any():
            continue
        hit_dist = dist[ok]
        low = int(hit_dist.min())
        if best < 0 or low < best:
            best = low
            kept = []
        if low == best:
            kept.append(vals[ok][hit_dist == best])
    rows = np.concatenate(kept) if kept else np.empty((0, n_vars), dtype=np.int64)
    return n_altered, best, rows


def scan(*args):
    """Dispatch to the numba kernel when enabled, otherwise numpy."""
    if USE_NUMBA:
        return scan_numba(*args)
    return scan_numpy(*args)
