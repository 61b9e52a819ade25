"""Pure-Python traversal loop.

Every floating-point expression here is written in the same order as in
``_ckernel.pyx`` and in :mod:`pipeclimb.traversal`, so all three produce
identical bits. Change them together.
"""
import math

import numpy as np


def _sum3(a, b, c):
    lo, mid, hi = sorted((a, b, c))
    return (lo + mid) + hi


def run(starts, is_bend, radius, roll, clearance, module_angles, theta, rc, speed, dt,
        preloads, max_travel, rigid, sample_every, max_steps):
    n_seg = len(is_bend)
    total = starts[n_seg]
    ds = speed * dt

    cap = max_steps // sample_every + 2
    t_out = np.empty(cap)
    s_out = np.empty(cap)
    seg_out = np.empty(cap, dtype=np.int64)
    cmd_out = np.empty((cap, 3))
    req_out = np.empty((cap, 3))
    slip_out = np.empty((cap, 3))
    spring_out = np.empty((cap, 3))

    t = 0.0
    s = 0.0
    seg = 0
    k = 0
    step = 0
    complete = False
    while True:
        while seg < n_seg - 1 and s >= starts[seg + 1]:
            seg += 1

        if is_bend[seg]:
            R = radius[seg]
            req = [0.0, 0.0, 0.0]
            spr = [0.0, 0.0, 0.0]
            for i in range(3):
                c = math.cos((theta + module_angles[i]) - roll[seg])
                req[i] = speed * (R + rc * c) / R
                spr[i] = preloads[i] - clearance[seg] * c
        else:
            req = [speed, speed, speed]
            spr = [preloads[0], preloads[1], preloads[2]]

        for i in range(3):
            if not (0.0 <= spr[i] <= max_travel):
                return {"error": (i, s, spr[i])}

        if rigid:
            cmd = [speed, speed, speed]
        else:
            tot = _sum3(req[0], req[1], req[2])
            cmd = [speed * ((3.0 * req[i]) / tot) for i in range(3)]

        if s >= total:
            complete = True
        last = complete or step >= max_steps
        if step % sample_every == 0 or last:
            t_out[k] = t
            s_out[k] = s
            seg_out[k] = seg
            for i in range(3):
                cmd_out[k, i] = cmd[i]
                req_out[k, i] = req[i]
                slip_out[k, i] = cmd[i] - req[i]
                spring_out[k, i] = spr[i]
            k += 1
        if last:
            break

        step += 1
        t = t + dt
        s = s + ds
        if s > total:
            s = total

    return {
        "error": None,
        "complete": complete,
        "t": t_out[:k],
        "s": s_out[:k],
        "segment": seg_out[:k],
        "commanded": cmd_out[:k],
        "required": req_out[:k],
        "slip": slip_out[:k],
        "spring": spring_out[:k],
    }
