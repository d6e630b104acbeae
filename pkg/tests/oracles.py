"""Independent reference computations used by several test files."""

from raynaudcoh.witt import ghost_components


def integral_witt(p, x, y, combine):
    """Witt coordinates of x (+ or *) y over Z, solved from the ghost map exactly."""
    gx, gy = ghost_components(p, x), ghost_components(p, y)
    out = []
    for m in range(len(x)):
        target = combine(gx[m], gy[m])
        rest = target - sum(p**i * out[i] ** (p ** (m - i)) for i in range(m))
        assert rest % p**m == 0
        out.append(rest // p**m)
    return out


def eval_mod_p(poly, values, p):
    total = 0
    for e, c in poly.items():
        term = c
        for v, k in zip(values, e):
            if k:
                term = term * pow(v, k, p) % p
        total += term
    return total % p
