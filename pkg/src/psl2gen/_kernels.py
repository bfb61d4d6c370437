"""Bitset kernels for irredundant-generation search.

Every element carries a row of ``P``: the set of maximal subgroups that
contain it, packed into uint64 words.  A set X is an irredundant
generating set iff

* no maximal subgroup contains all of X            (AND of rows == 0), and
* for each x in X some maximal subgroup contains X - {x} but not x.

The kernels below enumerate sets containing a fixed ``first`` row; the
``*_np`` twins are the pure-numpy fallback used when numba is disabled.
"""

import numpy as np

from ._accel import USE_NUMBA, njit


def _quads_loop(P, first, cand, out):
    W = P.shape[1]
    m = cand.shape[0]
    cap = out.shape[0]
    n_out = 0
    r = P[first]
    ra = np.empty(W, dtype=np.uint64)
    rab = np.empty(W, dtype=np.uint64)
    for i in range(m):
        a = P[cand[i]]
        nz = False
        for w in range(W):
            ra[w] = r[w] & a[w]
            if ra[w] != 0:
                nz = True
        if not nz:
            continue
        for j in range(i + 1, m):
            b = P[cand[j]]
            nz = False
            h_b = False
            h_a = False
            h_r = False
            for w in range(W):
                rab[w] = ra[w] & b[w]
                if rab[w] != 0:
                    nz = True
                if ra[w] & ~b[w]:
                    h_b = True
                if r[w] & b[w] & ~a[w]:
                    h_a = True
                if a[w] & b[w] & ~r[w]:
                    h_r = True
            if not (nz and h_a and h_b and h_r):
                continue
            for k in range(j + 1, m):
                c = P[cand[k]]
                ok = True
                for w in range(W):
                    if rab[w] & c[w]:
                        ok = False
                        break
                if not ok:
                    continue
                e_r = False
                e_a = False
                e_b = False
                e_c = False
                for w in range(W):
                    if a[w] & b[w] & c[w] & ~r[w]:
                        e_r = True
                    if r[w] & b[w] & c[w] & ~a[w]:
                        e_a = True
                    if ra[w] & c[w] & ~b[w]:
                        e_b = True
                    if rab[w] & ~c[w]:
                        e_c = True
                if e_r and e_a and e_b and e_c:
                    if n_out < cap:
                        out[n_out, 0] = i
                        out[n_out, 1] = j
                        out[n_out, 2] = k
                    n_out += 1
    return n_out


def _triples_loop(P, first, cand, out):
    W = P.shape[1]
    m = cand.shape[0]
    cap = out.shape[0]
    n_out = 0
    r = P[first]
    for i in range(m):
        a = P[cand[i]]
        for j in range(i + 1, m):
            b = P[cand[j]]
            gen = True
            e_r = False
            e_a = False
            e_b = False
            for w in range(W):
                if r[w] & a[w] & b[w]:
                    gen = False
                    break
                if a[w] & b[w] & ~r[w]:
                    e_r = True
                if r[w] & b[w] & ~a[w]:
                    e_a = True
                if r[w] & a[w] & ~b[w]:
                    e_b = True
            if gen and e_r and e_a and e_b:
                if n_out < cap:
                    out[n_out, 0] = i
                    out[n_out, 1] = j
                n_out += 1
    return n_out


def _triples_any_loop(P, first, cand):
    """Index i*m+j of the first irredundant generating {first, a, b}, or -1."""
    W = P.shape[1]
    m = cand.shape[0]
    r = P[first]
    for i in range(m):
        a = P[cand[i]]
        shared = False
        for w in range(W):
            if r[w] & a[w]:
                shared = True
                break
        if not shared:
            continue
        for j in range(m):
            if j == i:
                continue
            b = P[cand[j]]
            gen = True
            e_r = False
            e_a = False
            e_b = False
            for w in range(W):
                if r[w] & a[w] & b[w]:
                    gen = False
                    break
                if a[w] & b[w] & ~r[w]:
                    e_r = True
                if r[w] & b[w] & ~a[w]:
                    e_a = True
                if r[w] & a[w] & ~b[w]:
                    e_b = True
            if gen and e_r and e_a and e_b:
                return i * m + j
    return -1


def _naive_quads_loop(P, cand, out):
    """Every 4-subset of ``cand`` checked against the full definition."""
    W = P.shape[1]
    m = cand.shape[0]
    cap = out.shape[0]
    n_out = 0
    for i in range(m):
        a = P[cand[i]]
        for j in range(i + 1, m):
            b = P[cand[j]]
            for k in range(j + 1, m):
                c = P[cand[k]]
                for l in range(k + 1, m):
                    d = P[cand[l]]
                    gen = True
                    e_a = False
                    e_b = False
                    e_c = False
                    e_d = False
                    for w in range(W):
                        if a[w] & b[w] & c[w] & d[w]:
                            gen = False
                            break
                        if b[w] & c[w] & d[w] & ~a[w]:
                            e_a = True
                        if a[w] & c[w] & d[w] & ~b[w]:
                            e_b = True
                        if a[w] & b[w] & d[w] & ~c[w]:
                            e_c = True
                        if a[w] & b[w] & c[w] & ~d[w]:
                            e_d = True
                    if gen and e_a and e_b and e_c and e_d:
                        if n_out < cap:
                            out[n_out, 0] = i
                            out[n_out, 1] = j
                            out[n_out, 2] = k
                            out[n_out, 3] = l
                        n_out += 1
    return n_out


# ---------------------------------------------------------------- numpy fallbacks


def _nz(x):
    return (x != 0).any(axis=-1)


def _quads_np(P, first, cand, out):
    r = P[first]
    C = P[cand]
    m = len(cand)
    rows = []
    for i in range(m):
        a = C[i]
        ra = r & a
        if not ra.any():
            continue
        B = C[i + 1:]
        rab = ra & B
        keep = _nz(rab) & _nz(ra & ~B) & _nz(r & B & ~a) & _nz(a & B & ~r)
        for jj in np.flatnonzero(keep):
            j = i + 1 + jj
            b = C[j]
            Cs = C[j + 1:]
            rab_j = rab[jj]
            ok = ~_nz(rab_j & Cs)
            ok &= _nz(a & b & Cs & ~r)
            ok &= _nz(r & b & Cs & ~a)
            ok &= _nz(ra & Cs & ~b)
            ok &= _nz(rab_j & ~Cs)
            for kk in np.flatnonzero(ok):
                rows.append((i, j, j + 1 + kk))
    n = len(rows)
    if n:
        k = min(n, out.shape[0])
        out[:k] = np.asarray(rows[:k], dtype=out.dtype)
    return n


def _triples_np(P, first, cand, out):
    r = P[first]
    C = P[cand]
    rows = []
    for i in range(len(cand)):
        a = C[i]
        B = C[i + 1:]
        ok = ~_nz(r & a & B) & _nz(a & B & ~r) & _nz(r & B & ~a) & _nz(r & a & ~B)
        rows.extend((i, i + 1 + jj) for jj in np.flatnonzero(ok))
    n = len(rows)
    if n:
        k = min(n, out.shape[0])
        out[:k] = np.asarray(rows[:k], dtype=out.dtype)
    return n


def _triples_any_np(P, first, cand):
    r = P[first]
    C = P[cand]
    m = len(cand)
    for i in range(m):
        a = C[i]
        if not (r & a).any():
            continue
        ok = ~_nz(r & a & C) & _nz(a & C & ~r) & _nz(r & C & ~a) & _nz(r & a & ~C)
        ok[i] = False
        hit = np.flatnonzero(ok)
        if len(hit):
            return i * m + int(hit[0])
    return -1


def _naive_quads_np(P, cand, out):
    C = P[cand]
    m = len(cand)
    rows = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                a, b, c = C[i], C[j], C[k]
                D = C[k + 1:]
                ok = ~_nz(a & b & c & D)
                ok &= _nz(b & c & D & ~a) & _nz(a & c & D & ~b) & _nz(a & b & D & ~c) & _nz(a & b & c & ~D)
                rows.extend((i, j, k, k + 1 + ll) for ll in np.flatnonzero(ok))
    n = len(rows)
    if n:
        kk = min(n, out.shape[0])
        out[:kk] = np.asarray(rows[:kk], dtype=out.dtype)
    return n


if USE_NUMBA:
    quads_kernel = njit(_quads_loop)
    triples_kernel = njit(_triples_loop)
    triples_any_kernel = njit(_triples_any_loop)
    naive_quads_kernel = njit(_naive_quads_loop)
else:
    quads_kernel = _quads_np
    triples_kernel = _triples_np
    triples_any_kernel = _triples_any_np
    naive_quads_kernel = _naive_quads_np


def _run(kernel, width, *args):
    cap = 1024
    while True:
        out = np.empty((cap, width), dtype=np.int64)
        n = kernel(*args, out)
        if n <= cap:
            return out[:n]
        cap = n


def find_quads(P, first, cand):
    """Rows (i, j, k) into ``cand`` with {first, cand[i], cand[j], cand[k]}
    an irredundant generating set."""
    return _run(quads_kernel, 3, P, first, cand)


def find_triples(P, first, cand):
    return _run(triples_kernel, 2, P, first, cand)


def find_any_triple(P, first, cand):
    hit = triples_any_kernel(P, first, cand)
    if hit < 0:
        return None
    m = len(cand)
    return int(hit // m), int(hit % m)


def naive_quads(P, cand):
    return _run(naive_quads_kernel, 4, P, cand)
