"""NumPy reference implementation of the contraction kernels.

Same call signatures as the compiled module ``bilipjet._mlkernels``; the
backend selector picks one of the two at import time.  Tensors arrive
flattened to (out_dim, in_dim**arity) in C order, argument tuples as
(samples, arity, in_dim).
"""

import numpy as np

_LETTERS = "abcdefghijklmnopqrstuvwxy"


def contract_batch(T2, n, k, args):
    """Evaluate the map on every argument tuple: returns (samples, out_dim)."""
    d = T2.shape[0]
    S = args.shape[0]
    if k == 0:
        return np.broadcast_to(T2.reshape(d), (S, d)).copy()
    T = T2.reshape((d,) + (n,) * k)
    letters = _LETTERS[:k]
    ss = "z" + letters + "," + ",".join("s" + c for c in letters) + "->sz"
    return np.einsum(ss, T, *(args[:, i, :] for i in range(k)))


def slot_matrix_batch(T2, n, k, args, j):
    """Contract every slot except ``j``: returns (samples, out_dim, in_dim)."""
    d = T2.shape[0]
    S = args.shape[0]
    if k == 1:
        return np.broadcast_to(T2.reshape(d, n), (S, d, n)).copy()
    T = T2.reshape((d,) + (n,) * k)
    letters = _LETTERS[:k]
    ins = ",".join("s" + letters[i] for i in range(k) if i != j)
    ss = f"z{letters},{ins}->sz{letters[j]}"
    return np.einsum(ss, T, *(args[:, i, :] for i in range(k) if i != j))


def _values(T2, n, k, args):
    return np.linalg.norm(contract_batch(T2, n, k, args), axis=1)


def ascent_norm(T2, n, k, starts, rounds, power_iters):
    """Best lower bound on the injective norm over the given start tuples.

    Alternating per-slot maximization: with the other slots frozen the map is
    linear in slot j, so the optimal unit vector is the top right-singular
    direction of that d×n matrix, found by power iteration on BᵀB seeded from
    the current vector.  Every evaluated tuple is feasible, so the running
    maximum is always a valid lower bound.
    """
    if k == 0:
        return float(np.linalg.norm(T2.reshape(-1)))
    v = np.array(starts, dtype=np.float64, copy=True)
    best = float(_values(T2, n, k, v).max())
    for _ in range(rounds):
        for j in range(k):
            B = slot_matrix_batch(T2, n, k, v, j)
            M = np.einsum("sdi,sdj->sij", B, B)
            w = v[:, j, :].copy()
            for _ in range(power_iters):
                w_new = np.einsum("sij,sj->si", M, w)
                nrm = np.linalg.norm(w_new, axis=1)
                ok = nrm > 0.0
                w = np.where(ok[:, None], w_new / np.where(ok, nrm, 1.0)[:, None], w)
            v[:, j, :] = w
        best = max(best, float(_values(T2, n, k, v).max()))
    return best
