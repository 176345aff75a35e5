"""Numba kernels for clause evaluation, voting, and feedback.

All trainable state lives in an int32 array of automaton states with shape
(clauses, 2 * features). Literal column 2k tests feature x_k, column 2k + 1
tests its negation. A state above `n_states` means the literal is included
in the clause's conjunction. The first half of the rows are positive-polarity
clauses, the rest negative.

The two feedback tables, applied per automaton with literal value L on the
current input, clause output c, and clause specificity s:

Type I (pattern growth, given to clauses whose polarity matches the label):
    c=1, L=1: with prob (s-1)/s move one step toward/into Include.
    c=1, L=0: with prob 1/s move one step toward/into Exclude.
    c=0, any L: with prob 1/s move one step toward/into Exclude.

Type II (false-positive suppression, given to opposite-polarity clauses):
    c=1, L=0, currently excluding: move one step toward Include, always.
    everything else: no change.

All moves saturate inside [1, 2 * n_states]. Randomness comes from an
inlined xorshift128+ generator driven by a caller-owned uint64[2] state, so
training is reproducible from a single seed and needs no allocation.
"""

import numpy as np
from numba import njit

_INV_2_53 = 1.0 / 9007199254740992.0


@njit(inline="always")
def _next_unit(rng):
    # xorshift128+; rng is a nonzero uint64[2] state, advanced in place
    s1 = rng[0]
    s0 = rng[1]
    rng[0] = s0
    s1 ^= s1 << np.uint64(23)
    rng[1] = s1 ^ s0 ^ (s1 >> np.uint64(18)) ^ (s0 >> np.uint64(5))
    return ((rng[1] + s0) >> np.uint64(11)) * _INV_2_53


@njit(inline="always")
def _literal(x, lit):
    v = x[lit >> 1]
    if lit & 1:
        return 1 - v
    return v


@njit(inline="always")
def _clause_output(row, x, n_states, infer):
    # Empty clause: 1 while training (stays receptive), 0 at inference.
    n_lit = row.shape[0]
    any_included = False
    for lit in range(n_lit):
        if row[lit] > n_states:
            any_included = True
            if _literal(x, lit) == 0:
                return 0
    if infer and not any_included:
        return 0
    return 1


@njit(cache=True, nogil=True)
def clause_outputs(states, X, n_states, infer, out):
    for i in range(X.shape[0]):
        for j in range(states.shape[0]):
            out[i, j] = _clause_output(states[j], X[i], n_states, infer)


@njit(cache=True, nogil=True)
def vote_sums(states, X, n_states, infer, out):
    m = states.shape[0]
    half = m // 2
    for i in range(X.shape[0]):
        v = 0
        for j in range(m):
            c = _clause_output(states[j], X[i], n_states, infer)
            if j < half:
                v += c
            else:
                v -= c
        out[i] = v


@njit(inline="always")
def _type_i(states, j, x, c, s, n_states, rng):
    n_lit = states.shape[1]
    max_state = 2 * n_states
    p_hi = (s - 1.0) / s
    p_lo = 1.0 / s
    if c == 1:
        for lit in range(n_lit):
            st = states[j, lit]
            if _literal(x, lit) == 1:
                if st < max_state and _next_unit(rng) < p_hi:
                    states[j, lit] = st + 1
            else:
                if st > 1 and _next_unit(rng) < p_lo:
                    states[j, lit] = st - 1
    else:
        for lit in range(n_lit):
            st = states[j, lit]
            if st > 1 and _next_unit(rng) < p_lo:
                states[j, lit] = st - 1


@njit(inline="always")
def _type_ii(states, j, x, c, n_states):
    if c == 0:
        return
    n_lit = states.shape[1]
    for lit in range(n_lit):
        st = states[j, lit]
        if st <= n_states and _literal(x, lit) == 0:
            states[j, lit] = st + 1


@njit(cache=True, nogil=True)
def train_on_example(states, specificity, x, label, t_abs, n_states, rng, outputs):
    m = states.shape[0]
    half = m // 2
    v = 0
    for j in range(m):
        c = _clause_output(states[j], x, n_states, False)
        outputs[j] = c
        if j < half:
            v += c
        else:
            v -= c
    if v > t_abs:
        v = t_abs
    elif v < -t_abs:
        v = -t_abs
    if label == 1:
        p = (t_abs - v) / (2.0 * t_abs)
    else:
        p = (t_abs + v) / (2.0 * t_abs)
    for j in range(m):
        if _next_unit(rng) >= p:
            continue
        positive = j < half
        if positive == (label == 1):
            _type_i(states, j, x, outputs[j], specificity[j], n_states, rng)
        else:
            _type_ii(states, j, x, outputs[j], n_states)


@njit(cache=True, nogil=True)
def train_epoch(states, specificity, X, y, order, t_abs, n_states, rng):
    outputs = np.empty(states.shape[0], dtype=np.uint8)
    for oi in range(order.shape[0]):
        i = order[oi]
        train_on_example(states, specificity, X[i], y[i], t_abs, n_states, rng, outputs)


@njit(cache=True, nogil=True)
def train_epoch_multi(pool_states, pool_specificity, X, y, order, negatives, t_abs, n_states, rng):
    # Per example: its own class pool sees label 1, one sampled other pool label 0.
    outputs = np.empty(pool_states.shape[1], dtype=np.uint8)
    for oi in range(order.shape[0]):
        i = order[oi]
        own = y[i]
        neg = negatives[oi]
        train_on_example(pool_states[own], pool_specificity[own], X[i], 1, t_abs, n_states, rng, outputs)
        train_on_example(pool_states[neg], pool_specificity[neg], X[i], 0, t_abs, n_states, rng, outputs)
