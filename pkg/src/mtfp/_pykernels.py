"""Pure-Python (numpy) twin of the compiled kernels in ``_kernels.pyx``.

Both backends must agree bit for bit: pair sums are exact integers, and the
final fitness is always ``pair / n_i - penalty`` in float64.
"""
from __future__ import annotations

import numpy as np


def population_fitness(groups, socio, dept, req):
    n_p, n_i = groups.shape
    n_j, n_k = req.shape
    onehot = np.eye(n_k)[groups]  # (n_p, n_i, n_k)
    s = socio.astype(np.float64)
    np.fill_diagonal(s, 0.0)
    pair = np.einsum("pik,pik->p", onehot, np.matmul(s, onehot))

    got = np.zeros((n_p, n_j, n_k), dtype=np.int64)
    np.add.at(got, (np.arange(n_p)[:, None], dept[None, :], groups), 1)
    pen = np.abs(got - req[None, :, :]).sum(axis=(1, 2))
    return pair / float(n_i) - pen.astype(np.float64)


def exhaustive_search(socio, dept, req, order):
    n_i = socio.shape[0]
    n_k = req.shape[1]
    s = socio.tolist()
    dept_l = dept.tolist()
    order_l = order.tolist()
    remaining = req.tolist()
    members: list[list[int]] = [[] for _ in range(n_k)]
    current = [0] * n_i
    state = {"best": None, "best_pair": 0, "count": 0}

    def descend(t: int, pair: int) -> None:
        if t == n_i:
            state["count"] += 1
            if state["best"] is None or pair > state["best_pair"]:
                state["best"] = list(current)
                state["best_pair"] = pair
            return
        i = order_l[t]
        row = remaining[dept_l[i]]
        s_i = s[i]
        for g in range(n_k):
            if row[g] == 0:
                continue
            delta = 0
            for other in members[g]:
                delta += s_i[other] + s[other][i]
            row[g] -= 1
            members[g].append(i)
            current[i] = g
            descend(t + 1, pair + delta)
            members[g].pop()
            row[g] += 1

    descend(0, 0)
    best = np.asarray(state["best"] if state["best"] is not None else [0] * n_i, dtype=np.int64)
    return best, int(state["best_pair"]), int(state["count"])
