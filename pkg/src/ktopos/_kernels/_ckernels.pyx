# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in ``_pykernels`` for posets of at most 64 elements."""

ctypedef unsigned long long u64

cdef enum:
    MAXN = 64


cdef extern from *:
    int __builtin_popcountll(unsigned long long)
    int __builtin_ctzll(unsigned long long)


cdef inline int _popcount(u64 x):
    return __builtin_popcountll(x)


cdef int _load(object seq, u64* buf) except -1:
    cdef Py_ssize_t n = len(seq)
    cdef Py_ssize_t i
    if n > MAXN:
        raise OverflowError("kernel supports at most 64 elements")
    for i in range(n):
        buf[i] = <u64>seq[i]
    return <int>n


def upset_order(up):
    cdef u64 buf[MAXN]
    cdef int n = _load(up, buf)
    return sorted(range(n), key=lambda i: _popcount(buf[i]))


def enumerate_upsets(up):
    cdef u64 ups[MAXN]
    cdef u64 above[MAXN]
    cdef int order[MAXN]
    cdef u64 masks[MAXN + 1]
    cdef char branch[MAXN + 1]
    cdef int n = _load(up, ups)
    cdef int k, i
    cdef list out = []
    py_order = sorted(range(n), key=lambda j: _popcount(ups[j]))
    for k in range(n):
        order[k] = py_order[k]
        above[k] = ups[order[k]] & ~((<u64>1) << order[k])
    if n == 0:
        return [0]
    # iterative DFS: branch[k] = 0 -> try exclude, 1 -> try include, 2 -> done
    k = 0
    masks[0] = 0
    branch[0] = 0
    while k >= 0:
        if k == n:
            out.append(masks[n])
            k -= 1
            continue
        if branch[k] == 0:
            branch[k] = 1
            masks[k + 1] = masks[k]
            branch[k + 1] = 0
            k += 1
        elif branch[k] == 1:
            branch[k] = 2
            if (above[k] & masks[k]) == above[k]:
                masks[k + 1] = masks[k] | ((<u64>1) << order[k])
                branch[k + 1] = 0
                k += 1
        else:
            k -= 1
    return out


def upset_implies(up, a, b):
    cdef u64 ups[MAXN]
    cdef int n = _load(up, ups)
    cdef u64 bad = (<u64>a) & ~(<u64>b)
    cdef u64 r = 0
    cdef int i
    for i in range(n):
        if not (ups[i] & bad):
            r |= (<u64>1) << i
    return r


def image_mask(assign, mask):
    cdef u64 m = mask
    cdef u64 r = 0
    cdef int i
    while m:
        i = __builtin_ctzll(m)
        r |= (<u64>1) << (<int>assign[i])
        m &= m - 1
    return r


def preimage_mask(assign, mask):
    cdef u64 m = mask
    cdef u64 r = 0
    cdef Py_ssize_t i
    cdef int a
    for i in range(len(assign)):
        a = assign[i]
        if (m >> a) & 1:
            r |= (<u64>1) << i
    return r


cdef int _open_witness(int n, u64* dom_up, int* assign, u64* cod_up, int* wp, int* wq):
    cdef int p, j
    cdef u64 u, img, missing
    for p in range(n):
        u = dom_up[p]
        img = 0
        while u:
            j = __builtin_ctzll(u)
            img |= (<u64>1) << assign[j]
            u &= u - 1
        missing = cod_up[assign[p]] & ~img
        if missing:
            wp[0] = p
            wq[0] = __builtin_ctzll(missing)
            return 1
    return 0


def open_witness(dom_up, assign, cod_up):
    cdef u64 d[MAXN]
    cdef u64 c[MAXN]
    cdef int a[MAXN]
    cdef int n = _load(dom_up, d)
    cdef int wp = 0, wq = 0
    cdef int i
    _load(cod_up, c)
    for i in range(n):
        a[i] = assign[i]
    if _open_witness(n, d, a, c, &wp, &wq):
        return (wp, wq)
    return None


def monotone_maps(dom_up, cod_up, only_open=False):
    cdef u64 d[MAXN]
    cdef u64 c[MAXN]
    cdef u64 down[MAXN]
    cdef u64 allowed[MAXN + 1]
    cdef int order[MAXN]
    cdef int assign[MAXN]
    cdef int n = _load(dom_up, d)
    cdef int m = _load(cod_up, c)
    cdef int i, j, k, p, q, wp, wq
    cdef u64 below, al
    cdef bint want_open = only_open
    cdef list out = []
    if n == 0:
        return [()]
    if m == 0:
        return []
    for i in range(n):
        down[i] = 0
    for i in range(n):
        for j in range(n):
            if (d[i] >> j) & 1:
                down[j] |= (<u64>1) << i
    py_order = sorted(range(n), key=lambda t: _popcount(down[t]))
    for k in range(n):
        order[k] = py_order[k]
    full = ((<u64>1) << m) - 1 if m < 64 else <u64>0xFFFFFFFFFFFFFFFF
    # allowed[k] holds the untried candidates for position k
    k = 0
    p = order[0]
    allowed[0] = full
    while k >= 0:
        if k == n:
            if not want_open or not _open_witness(n, d, assign, c, &wp, &wq):
                out.append(tuple([assign[t] for t in range(n)]))
            k -= 1
            continue
        al = allowed[k]
        if not al:
            k -= 1
            continue
        p = order[k]
        j = __builtin_ctzll(al)
        allowed[k] = al & (al - 1)
        assign[p] = j
        k += 1
        if k < n:
            q = order[k]
            below = down[q] & ~((<u64>1) << q)
            al = full
            while below:
                i = __builtin_ctzll(below)
                al &= c[assign[i]]
                below &= below - 1
            allowed[k] = al
    return out
