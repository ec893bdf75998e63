# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled event loop for the two-class switch; see _kernel_py.py for the
reference version and the return contract."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


def run_arrays(hp_t_in, hp_size_in, hp_svc_in, lp_t_in, lp_size_in, lp_svc_in,
               i64 hp_cap, i64 lp_cap):
    cdef i64[::1] hp_t = np.ascontiguousarray(hp_t_in, dtype=np.int64)
    cdef i64[::1] hp_size = np.ascontiguousarray(hp_size_in, dtype=np.int64)
    cdef i64[::1] hp_svc = np.ascontiguousarray(hp_svc_in, dtype=np.int64)
    cdef i64[::1] lp_t = np.ascontiguousarray(lp_t_in, dtype=np.int64)
    cdef i64[::1] lp_size = np.ascontiguousarray(lp_size_in, dtype=np.int64)
    cdef i64[::1] lp_svc = np.ascontiguousarray(lp_svc_in, dtype=np.int64)
    cdef Py_ssize_t nh = hp_t.shape[0], nl = lp_t.shape[0]

    hp_start_arr = np.full(nh, -1, dtype=np.int64)
    lp_start_arr = np.full(nl, -1, dtype=np.int64)
    cdef i64[::1] hp_start = hp_start_arr
    cdef i64[::1] lp_start = lp_start_arr
    cdef i64[::1] hq = np.zeros(max(nh, 1), dtype=np.int64)
    cdef i64[::1] lq = np.zeros(max(nl, 1), dtype=np.int64)
    cdef Py_ssize_t hq_head = 0, hq_tail = 0, lq_head = 0, lq_tail = 0
    cdef Py_ssize_t ih = 0, il = 0, k = 0
    cdef i64 h_bytes = 0, l_bytes = 0

    # per class: departed, dropped, lat_sum, lat_min, lat_max, area
    cdef i64 cnt[2][6]
    cdef int c, j
    for c in range(2):
        for j in range(6):
            cnt[c][j] = 0
        cnt[c][3] = -1
        cnt[c][4] = -1

    cdef bint busy = False, started, has_h, has_l
    cdef int cur_cls = 0, kind
    cdef i64 done_t = 0, last_t = 0, now = 0, th = 0, tl = 0, dt, wait = 0

    while True:
        has_h = ih < nh
        has_l = il < nl
        if has_h:
            th = hp_t[ih]
        if has_l:
            tl = lp_t[il]
        if busy and (not has_h or done_t <= th) and (not has_l or done_t <= tl):
            kind = 0
            now = done_t
        elif has_h and (not has_l or th <= tl):
            kind = 1
            now = th
        elif has_l:
            kind = 2
            now = tl
        else:
            break

        dt = now - last_t
        cnt[0][5] += (hq_tail - hq_head) * dt
        cnt[1][5] += (lq_tail - lq_head) * dt
        last_t = now

        if kind == 0:
            cnt[cur_cls][0] += 1
            busy = False
        elif kind == 1:
            if h_bytes + hp_size[ih] <= hp_cap:
                hq[hq_tail] = ih
                hq_tail += 1
                h_bytes += hp_size[ih]
            else:
                cnt[0][1] += 1
            ih += 1
        else:
            if l_bytes + lp_size[il] <= lp_cap:
                lq[lq_tail] = il
                lq_tail += 1
                l_bytes += lp_size[il]
            else:
                cnt[1][1] += 1
            il += 1

        if not busy:
            started = True
            if hq_head < hq_tail:
                k = hq[hq_head]
                hq_head += 1
                h_bytes -= hp_size[k]
                hp_start[k] = now
                wait = now - hp_t[k]
                done_t = now + hp_svc[k]
                cur_cls = 0
            elif lq_head < lq_tail:
                k = lq[lq_head]
                lq_head += 1
                l_bytes -= lp_size[k]
                lp_start[k] = now
                wait = now - lp_t[k]
                done_t = now + lp_svc[k]
                cur_cls = 1
            else:
                started = False
            if started:
                busy = True
                cnt[cur_cls][2] += wait
                if cnt[cur_cls][3] < 0 or wait < cnt[cur_cls][3]:
                    cnt[cur_cls][3] = wait
                if wait > cnt[cur_cls][4]:
                    cnt[cur_cls][4] = wait

    counters = [[cnt[c][j] for j in range(6)] for c in range(2)]
    return hp_start_arr, lp_start_arr, counters, now
