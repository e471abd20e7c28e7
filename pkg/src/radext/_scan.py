"""Grid extremum search with kink probing and local refinement.

Essential suprema of a.e.-defined quantities are realized as grid maxima
over smooth points plus both one-sided limits at flagged kinks, followed
by a local zoom around the incumbent until it stops moving.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass
class Extremum:
    value: float
    t: float
    kink_side: str | None = None  # 'left'/'right' when attained at a kink limit


def _local_zoom(fn_vec, t0, v0, h0, sign, max_rounds, kinks):
    best_v, best_t = v0, t0
    h = h0
    for _ in range(max_rounds):
        ts = best_t + np.linspace(-h, h, 17)
        if kinks.size:
            # stay clear of kinks: their one-sided limits are exact
            # candidates already, and points inside the kink-match window
            # would mix a moved value with a frozen one-sided derivative
            d = np.abs((ts[:, None] - kinks[None, :] + np.pi) % TWO_PI - np.pi)
            ts = ts[d.min(axis=1) > 5e-12]
            if ts.size == 0:
                h /= 3.0
                continue
        vals = sign * np.asarray(fn_vec(ts), dtype=float)
        i = int(np.argmax(vals))
        if vals[i] > best_v:
            best_v, best_t = float(vals[i]), float(ts[i])
        h /= 3.0
        if h < 1e-12:
            break
    return best_v, best_t


def scan_extremum(fn_vec, kinks=(), side_fn=None, grid_n=4096, maximize=True,
                  refine=True, max_rounds=40):
    """Extremum of fn over [0, 2pi).

    fn_vec(ts) evaluates at an array of smooth points (the underlying
    derivative access already applies the left-limit convention at exact
    kink hits); side_fn(k, side) gives the one-sided limits at kinks.
    """
    sign = 1.0 if maximize else -1.0
    kinks = np.atleast_1d(np.asarray(kinks, dtype=float))
    ts = TWO_PI * np.arange(grid_n) / grid_n
    vals = sign * np.asarray(fn_vec(ts), dtype=float)
    i = int(np.argmax(vals))
    best = Extremum(float(vals[i]), float(ts[i]))
    h0 = TWO_PI / grid_n

    if refine:
        v, t = _local_zoom(fn_vec, best.t, best.value, 2 * h0, sign, max_rounds, kinks)
        if v > best.value:
            best = Extremum(v, t)

    for k in kinks:
        if side_fn is not None:
            for side in ("left", "right"):
                v = sign * float(side_fn(k, side))
                if v > best.value:
                    best = Extremum(v, float(k), kink_side=side)
        if refine:
            v, t = _local_zoom(fn_vec, float(k), -np.inf, 2 * h0, sign, max_rounds, kinks)
            if v > best.value:
                best = Extremum(v, t)

    return Extremum(sign * best.value, best.t, best.kink_side)
