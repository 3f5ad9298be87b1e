"""Compiled inner loop of the peer phase.

Agent by agent it performs the same floating-point operations, in the
same order, as :func:`fashion_abm.influence.peer_update`.
"""

import math

import numba
import numpy as np


@numba.njit(cache=True)
def peer_phase(opinions, purchase_prob, s_pp, contacts, talkers, count, keys, tau, polarized):
    """Return updated ``opinions`` (topics x agents) after one round of talk.

    ``talkers`` lists the agents that converse today; row ``r`` of ``keys``
    and ``count[r]`` describe talker ``r``'s draw. Reads only the inputs,
    so the update is synchronous across agents.
    """
    n_topics = opinions.shape[0]
    out = opinions.copy()
    degree = keys.shape[1]
    order = np.empty(degree, dtype=np.int64)
    for r in range(talkers.shape[0]):
        i = talkers[r]
        _rank(keys[r], order)
        s_self = s_pp[i]
        for a in range(n_topics):
            xi = opinions[a, i]
            total = 0.0
            k = 0
            for slot in range(count[r]):
                j = contacts[i, order[slot]]
                if not s_pp[j] < s_self:
                    continue
                o = opinions[a, j]
                b = 1.0 - purchase_prob[j]
                if polarized and abs(o - xi) > tau:
                    o = 1.0 - o
                    b = 1.0 - b
                total = total + (o / 3.0 + 2.0 * b / 3.0)
                k += 1
            if k > 0:
                v = (1.0 - s_self) * xi + (s_self / k) * total
                out[a, i] = min(max(v, 0.0), 1.0)
    return out


@numba.njit(cache=True)
def _rank(keys, order):
    """Insertion-sort argsort of ``keys`` into ``order`` (ties keep index order)."""
    for q in range(keys.shape[0]):
        v = keys[q]
        p = q
        while p > 0 and keys[order[p - 1]] > v:
            order[p] = order[p - 1]
            p -= 1
        order[p] = q


@numba.njit(cache=True)
def exp_array(x):
    """Elementwise exp through the platform libm, matching ``math.exp`` bit for bit."""
    out = np.empty_like(x)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for q in range(flat_in.size):
        flat_out[q] = math.exp(flat_in[q])
    return out
