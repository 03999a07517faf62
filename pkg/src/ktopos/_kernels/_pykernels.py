"""Pure-Python bitmask kernels.

Every poset is handed over as a list ``up`` where ``up[i]`` is the bitmask of
elements ``j`` with ``i <= j``.  Subsets are plain ints.  The compiled module
``_ckernels`` mirrors these signatures exactly.
"""


def _popcount(x):
    return bin(x).count("1")


def upset_order(up):
    # elements with smaller up-cones first, so strict upper bounds precede
    return sorted(range(len(up)), key=lambda i: _popcount(up[i]))


def enumerate_upsets(up):
    n = len(up)
    order = upset_order(up)
    out = []

    def rec(k, mask):
        if k == n:
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        above = up[i] & ~(1 << i)
        if above & mask == above:
            rec(k + 1, mask | (1 << i))

    rec(0, 0)
    return out


def upset_implies(up, a, b):
    bad = a & ~b
    r = 0
    for i, u in enumerate(up):
        if not (u & bad):
            r |= 1 << i
    return r


def image_mask(assign, mask):
    r = 0
    i = 0
    while mask:
        if mask & 1:
            r |= 1 << assign[i]
        mask >>= 1
        i += 1
    return r


def preimage_mask(assign, mask):
    r = 0
    for i, a in enumerate(assign):
        if (mask >> a) & 1:
            r |= 1 << i
    return r


def open_witness(dom_up, assign, cod_up):
    """First ``(p, q)`` with ``f(p) <= q`` and no lift above ``p``, else None."""
    for p, u in enumerate(dom_up):
        img = image_mask(assign, u)
        need = cod_up[assign[p]]
        missing = need & ~img
        if missing:
            q = (missing & -missing).bit_length() - 1
            return (p, q)
    return None


def monotone_maps(dom_up, cod_up, only_open=False):
    n = len(dom_up)
    m = len(cod_up)
    full = (1 << m) - 1
    # bottoms first: each element's strict lower bounds are assigned before it
    down = [0] * n
    for i in range(n):
        u = dom_up[i]
        for j in range(n):
            if (u >> j) & 1:
                down[j] |= 1 << i
    order = sorted(range(n), key=lambda i: _popcount(down[i]))
    assign = [0] * n
    out = []

    def rec(k):
        if k == n:
            if not only_open or open_witness(dom_up, assign, cod_up) is None:
                out.append(tuple(assign))
            return
        p = order[k]
        allowed = full
        below = down[p] & ~(1 << p)
        q = 0
        while below:
            if below & 1:
                allowed &= cod_up[assign[q]]
            below >>= 1
            q += 1
        c = 0
        while allowed:
            if allowed & 1:
                assign[p] = c
                rec(k + 1)
            allowed >>= 1
            c += 1

    if n == 0:
        return [()]
    if m == 0:
        return []
    rec(0)
    return out
