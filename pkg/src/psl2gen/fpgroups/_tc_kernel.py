"""Coset enumeration kernel (HLT with lookahead, and Felsch).

Plain integer-array code so numba can compile it; with numba disabled the
same functions run as ordinary Python.  Layout:

* ``table[c, x]``: image of coset c under column x (-1 if undefined);
  generator i is column 2i, its inverse column 2i+1, ``inv[x] = x ^ 1``.
* ``par``: union-find forest over cosets; a coset is live iff par[c] == c.
* ``st``: scalar state -- see the ST_* indices.
* words (relators, subgroup generators, cyclic conjugates) are flattened
  column arrays with offsets.
"""

import numpy as np

from .._accel import njit

ST_N = 0  # rows in use
ST_LIVE = 1
ST_QLEN = 2
ST_DEFS = 3
ST_DLEN = 4
ST_DOVER = 5  # deduction stack overflowed
ST_MAXLIVE = 6

FINITE = 0
OVERFLOW_COSETS = 1
OVERFLOW_DEFINITIONS = 2


@njit
def _rep(par, k):
    r = k
    while par[r] != r:
        r = par[r]
    while par[k] != r:
        nxt = par[k]
        par[k] = r
        k = nxt
    return r


@njit
def _push(ded, st, c, x):
    n = st[ST_DLEN]
    if n < ded.shape[0]:
        ded[n, 0] = c
        ded[n, 1] = x
        st[ST_DLEN] = n + 1
    else:
        st[ST_DOVER] = 1


@njit
def _merge(par, q, st, k, l):
    a = _rep(par, k)
    b = _rep(par, l)
    if a == b:
        return
    if a > b:
        a, b = b, a
    par[b] = a
    q[st[ST_QLEN]] = b
    st[ST_QLEN] += 1
    st[ST_LIVE] -= 1


@njit
def _coincidence(table, par, q, st, inv, a, b, ded, felsch):
    st[ST_QLEN] = 0
    _merge(par, q, st, a, b)
    i = 0
    ncols = table.shape[1]
    while i < st[ST_QLEN]:
        g = q[i]
        i += 1
        for x in range(ncols):
            d = table[g, x]
            if d >= 0:
                table[d, inv[x]] = -1
                mu = _rep(par, g)
                nu = _rep(par, d)
                if table[mu, x] >= 0:
                    _merge(par, q, st, nu, table[mu, x])
                elif table[nu, inv[x]] >= 0:
                    _merge(par, q, st, mu, table[nu, inv[x]])
                else:
                    table[mu, x] = nu
                    table[nu, inv[x]] = mu
                    if felsch:
                        _push(ded, st, mu, x)


@njit
def _define(table, par, st, inv, a, x, max_live, ded, felsch):
    n = st[ST_N]
    if n >= table.shape[0] or st[ST_LIVE] >= max_live:
        return -1
    b = n
    st[ST_N] = n + 1
    par[b] = b
    for y in range(table.shape[1]):
        table[b, y] = -1
    table[a, x] = b
    table[b, inv[x]] = a
    st[ST_LIVE] += 1
    st[ST_DEFS] += 1
    if st[ST_LIVE] > st[ST_MAXLIVE]:
        st[ST_MAXLIVE] = st[ST_LIVE]
    if felsch:
        _push(ded, st, a, x)
    return b


@njit
def _scan(table, par, q, st, inv, a, w, lo, hi, fill, max_live, ded, felsch):
    """Scan word w[lo:hi] at coset a; with ``fill`` define cosets as needed.

    Returns -1 when a definition was needed but no room was left, else 0.
    """
    f = a
    b = a
    i = lo
    j = hi - 1
    while True:
        while i <= j and table[f, w[i]] >= 0:
            f = table[f, w[i]]
            i += 1
        if i > j:
            if f != a:
                _coincidence(table, par, q, st, inv, f, a, ded, felsch)
            return 0
        while j >= i and table[b, inv[w[j]]] >= 0:
            b = table[b, inv[w[j]]]
            j -= 1
        if j < i:
            _coincidence(table, par, q, st, inv, f, b, ded, felsch)
            return 0
        if i == j:
            table[f, w[i]] = b
            table[b, inv[w[i]]] = f
            if felsch:
                _push(ded, st, f, w[i])
            return 0
        if not fill:
            return 0
        if _define(table, par, st, inv, f, w[i], max_live, ded, felsch) < 0:
            return -1


@njit
def _compress(table, par, st, a):
    """Renumber live cosets 0..live-1 in order; return the new position of
    the first live coset >= a."""
    n = st[ST_N]
    newidx = np.full(n, -1, dtype=np.int64)
    k = 0
    new_a = -1
    for c in range(n):
        if c == a:
            new_a = k
        if par[c] == c:
            newidx[c] = k
            k += 1
    if new_a < 0:
        new_a = k
    ncols = table.shape[1]
    for c in range(n):
        if par[c] == c:
            nc = newidx[c]
            for x in range(ncols):
                t = table[c, x]
                if t >= 0:
                    table[nc, x] = newidx[_rep(par, t)]
                else:
                    table[nc, x] = -1
    for c in range(k):
        par[c] = c
    for c in range(k, n):
        par[c] = c
        for x in range(ncols):
            table[c, x] = -1
    st[ST_N] = k
    return new_a


@njit
def _lookahead(table, par, q, st, inv, rels, roff, max_live, ded):
    nrel = roff.shape[0] - 1
    c = 0
    while c < st[ST_N]:
        if par[c] == c:
            for r in range(nrel):
                _scan(table, par, q, st, inv, c, rels, roff[r], roff[r + 1], False, max_live, ded, False)
                if par[c] != c:
                    break
        c += 1


@njit
def _process_deductions(table, par, q, st, inv, conj, coff, cstart, rels, roff, max_live, ded):
    while True:
        while st[ST_DLEN] > 0:
            st[ST_DLEN] -= 1
            n = st[ST_DLEN]
            a = ded[n, 0]
            x = ded[n, 1]
            if par[a] != a:
                continue
            for k in range(cstart[x], cstart[x + 1]):
                _scan(table, par, q, st, inv, a, conj, coff[k], coff[k + 1], False, max_live, ded, True)
                if par[a] != a:
                    break
            if par[a] != a:
                continue
            b = table[a, x]
            if b < 0:
                continue
            y = inv[x]
            for k in range(cstart[y], cstart[y + 1]):
                _scan(table, par, q, st, inv, b, conj, coff[k], coff[k + 1], False, max_live, ded, True)
                if par[b] != b:
                    break
        if st[ST_DOVER] == 0:
            return
        # stack overflowed: fall back to scanning everything once
        st[ST_DOVER] = 0
        nrel = roff.shape[0] - 1
        for c in range(st[ST_N]):
            if par[c] == c:
                for r in range(nrel):
                    _scan(table, par, q, st, inv, c, rels, roff[r], roff[r + 1], False, max_live, ded, True)
                    if par[c] != c:
                        break


@njit
def _make_room(table, par, q, st, inv, rels, roff, max_live, ded, a):
    _lookahead(table, par, q, st, inv, rels, roff, max_live, ded)
    return _compress(table, par, st, a)


@njit
def enumerate_cosets(ncols, rels, roff, subw, soff, conj, coff, cstart, max_live, alloc, max_defs, felsch, dcap):
    """Run one coset enumeration.

    Returns (status, table, st) where status is FINITE or an overflow code;
    for FINITE the first st[ST_N] rows of the compressed table are the
    coset action.
    """
    inv = np.empty(ncols, dtype=np.int64)
    for x in range(ncols):
        inv[x] = x ^ 1
    table = np.full((alloc, ncols), -1, dtype=np.int64)
    par = np.arange(alloc, dtype=np.int64)
    q = np.empty(alloc, dtype=np.int64)
    ded = np.empty((dcap, 2), dtype=np.int64)
    st = np.zeros(8, dtype=np.int64)
    st[ST_N] = 1
    st[ST_LIVE] = 1
    st[ST_MAXLIVE] = 1
    nsub = soff.shape[0] - 1
    nrel = roff.shape[0] - 1

    # subgroup generators fix coset 0
    s = 0
    while s < nsub:
        if _scan(table, par, q, st, inv, 0, subw, soff[s], soff[s + 1], True, max_live, ded, felsch) < 0:
            before = st[ST_LIVE]
            _make_room(table, par, q, st, inv, rels, roff, max_live, ded, 0)
            if st[ST_LIVE] >= before and st[ST_LIVE] >= max_live:
                return OVERFLOW_COSETS, table, st
            continue
        s += 1
    if felsch:
        _process_deductions(table, par, q, st, inv, conj, coff, cstart, rels, roff, max_live, ded)

    a = 0
    while a < st[ST_N]:
        if st[ST_DEFS] > max_defs:
            return OVERFLOW_DEFINITIONS, table, st
        if par[a] != a:
            a += 1
            continue
        full = False
        if not felsch:
            for r in range(nrel):
                if _scan(table, par, q, st, inv, a, rels, roff[r], roff[r + 1], True, max_live, ded, False) < 0:
                    full = True
                    break
                if par[a] != a:
                    break
        if not full and par[a] == a:
            for x in range(ncols):
                if par[a] != a:
                    break
                if table[a, x] < 0:
                    if _define(table, par, st, inv, a, x, max_live, ded, felsch) < 0:
                        full = True
                        break
                    if felsch:
                        _process_deductions(table, par, q, st, inv, conj, coff, cstart, rels, roff, max_live, ded)
        if full:
            before = st[ST_LIVE]
            a = _make_room(table, par, q, st, inv, rels, roff, max_live, ded, a)
            if felsch:
                _process_deductions(table, par, q, st, inv, conj, coff, cstart, rels, roff, max_live, ded)
                a = _compress(table, par, st, a)
            if st[ST_LIVE] >= max_live and st[ST_LIVE] >= before:
                return OVERFLOW_COSETS, table, st
            continue
        a += 1

    # closing check: every relator must close at every coset
    for c in range(st[ST_N]):
        if par[c] == c:
            for r in range(nrel):
                _scan(table, par, q, st, inv, c, rels, roff[r], roff[r + 1], False, max_live, ded, felsch)
    if felsch:
        _process_deductions(table, par, q, st, inv, conj, coff, cstart, rels, roff, max_live, ded)
    _compress(table, par, st, 0)
    return FINITE, table, st
