"""Compiled backtracking core shared by all table kinds.

A search state is one bitmask domain per cell of an n×n table (bit v set means
value v, 0-based, still possible).  Constraints come in three flavours:

* ``eqs[e] = (lr, lc, rr, rc)``: ``T[lr][lc] == T[rr][rc]`` where each
  coordinate is either the value of a cell (index >= 0) or the constant
  ``-(v + 1)``.  This covers the cycle-set identity, rack self-distributivity
  and the first skew-cycle-set identity.
* ``eq3[e] = (t, a, b)``: ``T[t] == R[T[a]][T[b]]`` for a fixed rack table R
  (the skew compatibility axiom).
* lex-leader: ``T <=lex T^g`` for every g in ``syms``.

Rows of T are permutations; optionally so is the diagonal.
"""

from __future__ import annotations

import numpy as np
from numba import njit

OK = 0
FAIL = 1
LEXFAIL = 2


@njit(cache=True, inline="always")
def _single(d):
    return d != 0 and (d & (d - 1)) == 0


@njit(cache=True, inline="always")
def _bit(d):
    k = 0
    while not (d >> k) & 1:
        k += 1
    return k


@njit(cache=True)
def _restrict(dom, c, mask):
    d = dom[c]
    nd = d & mask
    if nd == 0:
        return -1
    if nd != d:
        dom[c] = nd
        return 1
    return 0


@njit(cache=True)
def _alldiff(dom, cells, full):
    """Permutation constraint over the given cells.  Returns -1, 0 or 1 (changed)."""
    changed = 0
    assigned = 0
    m = len(cells)
    for t in range(m):
        d = dom[cells[t]]
        if _single(d):
            if assigned & d:
                return -1
            assigned |= d
    once = 0
    twice = 0
    for t in range(m):
        c = cells[t]
        d = dom[c]
        if not _single(d):
            nd = d & ~assigned
            if nd == 0:
                return -1
            if nd != d:
                dom[c] = nd
                changed = 1
            d = nd
        twice |= once & d
        once |= d
    if once != full:
        return -1
    uniq = once & ~twice & ~assigned
    while uniq:
        b = uniq & -uniq
        uniq ^= b
        for t in range(m):
            c = cells[t]
            if dom[c] & b:
                if dom[c] != b:
                    dom[c] = b
                    changed = 1
                break
    return changed


@njit(cache=True)
def _coord(dom, src):
    if src >= 0:
        return dom[src]
    return np.int64(1) << (-src - 1)


@njit(cache=True)
def _side_values(dom, n, r, c, full):
    rd = _coord(dom, r)
    cd = _coord(dom, c)
    rs = _single(rd)
    cs = _single(cd)
    if rs and cs:
        return dom[_bit(rd) * n + _bit(cd)]
    v = np.int64(0)
    if rs:
        a = _bit(rd)
        for b in range(n):
            if (cd >> b) & 1:
                v |= dom[a * n + b]
        return v
    if cs:
        b = _bit(cd)
        for a in range(n):
            if (rd >> a) & 1:
                v |= dom[a * n + b]
        return v
    return full


@njit(cache=True)
def _side_restrict(dom, n, r, c, v):
    rd = _coord(dom, r)
    cd = _coord(dom, c)
    rs = _single(rd)
    cs = _single(cd)
    if rs and cs:
        return _restrict(dom, _bit(rd) * n + _bit(cd), v)
    if rs:
        a = _bit(rd)
        allowed = np.int64(0)
        for b in range(n):
            if (cd >> b) & 1 and dom[a * n + b] & v:
                allowed |= np.int64(1) << b
        return _restrict(dom, c, allowed)
    if cs:
        b = _bit(cd)
        allowed = np.int64(0)
        for a in range(n):
            if (rd >> a) & 1 and dom[a * n + b] & v:
                allowed |= np.int64(1) << a
        return _restrict(dom, r, allowed)
    return 0


@njit(cache=True)
def _propagate(dom, active, n, rows, diag, eqs, eq3, rack, rack_inv, syms, syminv):
    full = (np.int64(1) << n) - 1
    nn = n * n
    while True:
        changed = 0
        for i in range(n):
            s = _alldiff(dom, rows[i], full)
            if s < 0:
                return FAIL
            changed |= s
        if len(diag):
            s = _alldiff(dom, diag, full)
            if s < 0:
                return FAIL
            changed |= s
        for e in range(eqs.shape[0]):
            lr = eqs[e, 0]
            lc = eqs[e, 1]
            rr = eqs[e, 2]
            rc = eqs[e, 3]
            vl = _side_values(dom, n, lr, lc, full)
            vr = _side_values(dom, n, rr, rc, full)
            v = vl & vr
            if v == 0:
                return FAIL
            if v != vl:
                s = _side_restrict(dom, n, lr, lc, v)
                if s < 0:
                    return FAIL
                changed |= s
            if v != vr:
                s = _side_restrict(dom, n, rr, rc, v)
                if s < 0:
                    return FAIL
                changed |= s
        for e in range(eq3.shape[0]):
            t = eq3[e, 0]
            a = eq3[e, 1]
            b = eq3[e, 2]
            ad = dom[a]
            bd = dom[b]
            vt = full
            if _single(ad):
                x = _bit(ad)
                vt = 0
                for y in range(n):
                    if (bd >> y) & 1:
                        vt |= np.int64(1) << rack[x, y]
            elif _single(bd):
                y = _bit(bd)
                vt = 0
                for x in range(n):
                    if (ad >> x) & 1:
                        vt |= np.int64(1) << rack[x, y]
            s = _restrict(dom, t, vt)
            if s < 0:
                return FAIL
            changed |= s
            td = dom[t]
            if _single(td):
                w = _bit(td)
                if _single(ad):
                    s = _restrict(dom, b, np.int64(1) << rack_inv[_bit(ad), w])
                    if s < 0:
                        return FAIL
                    changed |= s
                elif _single(bd):
                    y = _bit(bd)
                    allowed = np.int64(0)
                    for x in range(n):
                        if rack[x, y] == w:
                            allowed |= np.int64(1) << x
                    s = _restrict(dom, a, allowed)
                    if s < 0:
                        return FAIL
                    changed |= s
        for k in range(syms.shape[0]):
            if not active[k]:
                continue
            for p in range(nn):
                i = p // n
                j = p - i * n
                q = syms[k, i] * n + syms[k, j]
                dp = dom[p]
                dq = dom[q]
                if _single(dp) and _single(dq):
                    x = _bit(dp)
                    y = syminv[k, _bit(dq)]
                    if x < y:
                        # strictly smaller on a decided prefix: settled for the whole subtree
                        active[k] = 0
                        break
                    if x > y:
                        return LEXFAIL
                    continue
                if p == q:
                    allowed = np.int64(0)
                    for v in range(n):
                        if (dp >> v) & 1 and v <= syminv[k, v]:
                            allowed |= np.int64(1) << v
                    s = _restrict(dom, p, allowed)
                    if s < 0:
                        return LEXFAIL
                    changed |= s
                    break
                maxy = 0
                for v in range(n):
                    if (dq >> v) & 1 and syminv[k, v] > maxy:
                        maxy = syminv[k, v]
                minx = _bit(dp)
                s = _restrict(dom, p, (np.int64(1) << (maxy + 1)) - 1)
                if s < 0:
                    return LEXFAIL
                changed |= s
                allowed = np.int64(0)
                for v in range(n):
                    if (dq >> v) & 1 and syminv[k, v] >= minx:
                        allowed |= np.int64(1) << v
                s = _restrict(dom, q, allowed)
                if s < 0:
                    return LEXFAIL
                changed |= s
                break
        if not changed:
            return OK


@njit(cache=True)
def _popcount(d):
    c = 0
    while d:
        d &= d - 1
        c += 1
    return c


@njit(cache=True)
def _choose(dom, nn):
    best = -1
    bestc = 1 << 30
    for c in range(nn):
        d = dom[c]
        if not _single(d):
            k = _popcount(d)
            if k < bestc:
                bestc = k
                best = c
                if k == 2:
                    break
    return best


@njit(cache=True)
def search(n, dom0, eqs, eq3, rack, rack_inv, syms, syminv, diag_alldiff, node_budget):
    """Enumerate every completion of ``dom0`` satisfying all constraints.

    Returns ``(solutions, nodes, constraint_prunes, symmetry_prunes, exhausted)``
    where ``solutions`` is a ``(k, n*n)`` uint8 array of 0-based tables and
    ``exhausted`` is False when ``node_budget`` (0 = unlimited) ran out first.
    """
    nn = n * n
    rows = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            rows[i, j] = i * n + j
    if diag_alldiff:
        diag = np.empty(n, dtype=np.int64)
        for i in range(n):
            diag[i] = i * n + i
    else:
        diag = np.empty(0, dtype=np.int64)
    nsym = syms.shape[0]
    doms = np.empty((nn + 2, nn), dtype=np.int64)
    acts = np.ones((nn + 2, max(nsym, 1)), dtype=np.uint8)
    cell = np.empty(nn + 2, dtype=np.int64)
    rem = np.empty(nn + 2, dtype=np.int64)
    cap = 64
    out = np.empty((cap, nn), dtype=np.uint8)
    count = 0
    nodes = 0
    cfail = 0
    sfail = 0

    doms[0, :] = dom0
    st = _propagate(doms[0], acts[0], n, rows, diag, eqs, eq3, rack, rack_inv, syms, syminv)
    nodes += 1
    if st != OK:
        if st == FAIL:
            cfail += 1
        else:
            sfail += 1
        return out[:0], nodes, cfail, sfail, True
    depth = 0
    cell[0] = _choose(doms[0], nn)
    if cell[0] < 0:
        for c in range(nn):
            out[0, c] = _bit(doms[0, c])
        return out[:1].copy(), nodes, cfail, sfail, True
    rem[0] = doms[0, cell[0]]
    while depth >= 0:
        if rem[depth] == 0:
            depth -= 1
            continue
        if node_budget > 0 and nodes >= node_budget:
            return out[:count].copy(), nodes, cfail, sfail, False
        b = rem[depth] & -rem[depth]
        rem[depth] ^= b
        child = doms[depth + 1]
        child[:] = doms[depth]
        acts[depth + 1, :] = acts[depth]
        child[cell[depth]] = b
        nodes += 1
        st = _propagate(child, acts[depth + 1], n, rows, diag, eqs, eq3, rack, rack_inv, syms, syminv)
        if st != OK:
            if st == FAIL:
                cfail += 1
            else:
                sfail += 1
            continue
        nxt = _choose(child, nn)
        if nxt < 0:
            if count == cap:
                cap *= 2
                bigger = np.empty((cap, nn), dtype=np.uint8)
                bigger[:count] = out[:count]
                out = bigger
            for c in range(nn):
                out[count, c] = _bit(child[c])
            count += 1
            continue
        depth += 1
        cell[depth] = nxt
        rem[depth] = child[nxt]
    return out[:count].copy(), nodes, cfail, sfail, True
