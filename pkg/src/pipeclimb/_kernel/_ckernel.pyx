# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled traversal loop; mirrors _pykernel.run expression for expression."""
import numpy as np

from libc.math cimport cos


cdef inline double _sum3(double a, double b, double c) noexcept nogil:
    cdef double t
    if a > b:
        t = a; a = b; b = t
    if b > c:
        t = b; b = c; c = t
    if a > b:
        t = a; a = b; b = t
    return (a + b) + c


def run(starts, is_bend, radius, roll, clearance, module_angles, double theta, double rc,
        double speed, double dt, preloads, double max_travel, bint rigid,
        Py_ssize_t sample_every, Py_ssize_t max_steps):
    cdef double[::1] st = np.ascontiguousarray(starts, dtype=np.float64)
    cdef long[::1] bend = np.ascontiguousarray(is_bend, dtype=np.int_)
    cdef double[::1] rad = np.ascontiguousarray(radius, dtype=np.float64)
    cdef double[::1] rl = np.ascontiguousarray(roll, dtype=np.float64)
    cdef double[::1] clr = np.ascontiguousarray(clearance, dtype=np.float64)
    cdef double[::1] ang = np.ascontiguousarray(module_angles, dtype=np.float64)
    cdef double[::1] pre = np.ascontiguousarray(preloads, dtype=np.float64)

    cdef Py_ssize_t n_seg = bend.shape[0]
    cdef double total = st[n_seg]
    cdef double ds = speed * dt
    cdef Py_ssize_t cap = max_steps // sample_every + 2

    t_arr = np.empty(cap)
    s_arr = np.empty(cap)
    seg_arr = np.empty(cap, dtype=np.int64)
    cmd_arr = np.empty((cap, 3))
    req_arr = np.empty((cap, 3))
    slip_arr = np.empty((cap, 3))
    spring_arr = np.empty((cap, 3))
    cdef double[::1] t_out = t_arr
    cdef double[::1] s_out = s_arr
    cdef long long[::1] seg_out = seg_arr
    cdef double[:, ::1] cmd_out = cmd_arr
    cdef double[:, ::1] req_out = req_arr
    cdef double[:, ::1] slip_out = slip_arr
    cdef double[:, ::1] spring_out = spring_arr

    cdef double t = 0.0, s = 0.0, R, c, tot
    cdef double req[3]
    cdef double spr[3]
    cdef double cmd[3]
    cdef Py_ssize_t seg = 0, k = 0, step = 0, i
    cdef int err_module = -1
    cdef bint complete = False, last

    with nogil:
        while True:
            while seg < n_seg - 1 and s >= st[seg + 1]:
                seg += 1

            if bend[seg]:
                R = rad[seg]
                for i in range(3):
                    c = cos((theta + ang[i]) - rl[seg])
                    req[i] = speed * (R + rc * c) / R
                    spr[i] = pre[i] - clr[seg] * c
            else:
                for i in range(3):
                    req[i] = speed
                    spr[i] = pre[i]

            for i in range(3):
                if not (0.0 <= spr[i] <= max_travel):
                    err_module = <int>i
                    break
            if err_module >= 0:
                break

            if rigid:
                for i in range(3):
                    cmd[i] = speed
            else:
                tot = _sum3(req[0], req[1], req[2])
                for i in range(3):
                    cmd[i] = speed * ((3.0 * req[i]) / tot)

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

    if err_module >= 0:
        return {"error": (err_module, s, spr[err_module])}
    return {
        "error": None,
        "complete": complete,
        "t": t_arr[:k],
        "s": s_arr[:k],
        "segment": seg_arr[:k],
        "commanded": cmd_arr[:k],
        "required": req_arr[:k],
        "slip": slip_arr[:k],
        "spring": spring_arr[:k],
    }
