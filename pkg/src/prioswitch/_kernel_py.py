"""Pure-Python twin of the compiled `_kernel` module; used when the
extension is not built. Keep the two in lock-step."""


def run_arrays(hp_t, hp_size, hp_svc, lp_t, lp_size, lp_svc, hp_cap, lp_cap):
    """Simulate the two-class switch over pre-drawn arrival arrays.

    Event order at equal timestamps is completion, HP arrival, LP arrival;
    arrivals of one class are consumed in array order. Returns
    ``(hp_start, lp_start, counters, end_time)`` where ``*_start`` hold each
    packet's service start (-1 if dropped) and ``counters`` is
    ``[[departed, dropped, lat_sum, lat_min, lat_max, area], ...]`` for HP, LP.
    """
    hp_t = [int(x) for x in hp_t]
    lp_t = [int(x) for x in lp_t]
    hp_size = [int(x) for x in hp_size]
    lp_size = [int(x) for x in lp_size]
    hp_svc = [int(x) for x in hp_svc]
    lp_svc = [int(x) for x in lp_svc]
    nh, nl = len(hp_t), len(lp_t)
    hp_start = [-1] * nh
    lp_start = [-1] * nl

    # queues hold packet indices; admitted packets are appended in order
    hq, lq = [0] * nh, [0] * nl
    hq_head = hq_tail = lq_head = lq_tail = 0
    h_bytes = l_bytes = 0

    cnt = [[0, 0, 0, -1, -1, 0], [0, 0, 0, -1, -1, 0]]
    ih = il = 0
    busy = False
    cur_cls = 0
    done_t = 0
    last_t = 0
    now = 0

    while True:
        th = hp_t[ih] if ih < nh else None
        tl = lp_t[il] if il < nl else None
        if busy and (th is None or done_t <= th) and (tl is None or done_t <= tl):
            kind = 0
            now = done_t
        elif th is not None and (tl is None or th <= tl):
            kind = 1
            now = th
        elif tl is not None:
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
                c = cnt[cur_cls]
                c[2] += wait
                if c[3] < 0 or wait < c[3]:
                    c[3] = wait
                if wait > c[4]:
                    c[4] = wait

    return hp_start, lp_start, cnt, now
