"""Pure numpy implementations of the hot loops.

These are the reference versions; ``_kernels.pyx`` must agree with them
(bit-for-bit for the integer and comparison kernels, to rounding for the
recursive filter).
"""
import numpy as np

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1
_BLOCK = 1024


def _affine_power(k):
    """Coefficients (A, C) with state[n + k] = A * state[n] + C mod 2**64."""
    a, c = 1, 0
    for _ in range(k):
        a = (a * LCG_MULTIPLIER) & _MASK64
        c = (c * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
    return a, c


_JUMP_A, _JUMP_C = _affine_power(_BLOCK)


def lcg_uniform(seed, n):
    """``n`` deterministic uniforms in [-1, 1) from a 64-bit LCG.

    state <- state * 6364136223846793005 + 1442695040888963407 (mod 2**64),
    seeded with ``seed`` mod 2**64; each output uses the top 53 bits of the
    advanced state.
    """
    n = int(n)
    if n <= 0:
        return np.zeros(0)
    first = np.empty(min(n, _BLOCK), dtype=np.uint64)
    state = int(seed) & _MASK64
    for i in range(first.size):
        state = (state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        first[i] = state
    nblocks = -(-n // _BLOCK)
    states = np.empty(nblocks * _BLOCK, dtype=np.uint64)
    states[: first.size] = first
    jump_a = np.uint64(_JUMP_A)
    jump_c = np.uint64(_JUMP_C)
    block = first
    if first.size == _BLOCK:
        with np.errstate(over="ignore"):
            for b in range(1, nblocks):
                block = block * jump_a + jump_c
                states[b * _BLOCK:(b + 1) * _BLOCK] = block
    top = (states[:n] >> np.uint64(11)).astype(np.float64)
    return top * (2.0 / 9007199254740992.0) - 1.0


def resonate(x, b0, a1, a2):
    """Two-pole recursion y[n] = b0*x[n] + a1*y[n-1] + a2*y[n-2]."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.empty_like(x)
    y1 = 0.0
    y2 = 0.0
    for i, v in enumerate(x.tolist()):
        y0 = b0 * v + a1 * y1 + a2 * y2
        y[i] = y0
        y2 = y1
        y1 = y0
    return y


def eac_enhance(curves):
    """Clip, subtract the 2x time-stretched copy, clip again (row-wise).

    Odd lags of the stretched copy are the mean of the two neighbours.
    """
    c = np.maximum(np.asarray(curves, dtype=np.float64), 0.0)
    n = c.shape[-1]
    stretched = np.empty_like(c)
    half = np.arange(n) // 2
    stretched[..., 0::2] = c[..., half[0::2]]
    odd = half[1::2]
    nxt = np.minimum(odd + 1, n - 1)
    stretched[..., 1::2] = 0.5 * (c[..., odd] + c[..., nxt])
    return np.maximum(c - stretched, 0.0)


def hysteresis(levels, enter, leave, min_gap):
    """Frame-index runs where ``levels`` rises above ``enter``.

    A run closes only after ``min_gap`` consecutive frames below ``leave``;
    returned ``(start, stop)`` pairs are half-open and exclude that gap.
    """
    spans = []
    active = False
    start = 0
    last_loud = 0
    quiet = 0
    for i, v in enumerate(np.asarray(levels, dtype=np.float64).tolist()):
        if not active:
            if v > enter:
                active = True
                start = i
                last_loud = i
                quiet = 0
            continue
        if v < leave:
            quiet += 1
            if quiet >= min_gap:
                spans.append((start, last_loud + 1))
                active = False
        else:
            quiet = 0
            last_loud = i
    if active:
        spans.append((start, last_loud + 1))
    return spans


def median3(x):
    """Width-3 running median; the two end points are left unchanged."""
    x = np.asarray(x, dtype=np.float64)
    out = x.copy()
    if x.size >= 3:
        out[1:-1] = np.median(np.stack([x[:-2], x[1:-1], x[2:]]), axis=0)
    return out
