"""Packed-array evaluator for the walk polynomial over GF(2^b), b <= 12.

State planes are uint16 arrays indexed [directed edge][weight slot][label
set]; multiplication by a fixed field scalar is a 2^b-entry lookup table, so
the inner label-set convolution is one table gather and one xor per term.
Length layers are streamed: only the previous state layer and the
finished-tuple aggregates from two layers back stay live.

Weight slots compress the (label count, labeled weight) plane to the sums
actually reachable from the vertex weight multiset; skipped combinations are
provably zero, so results are unchanged.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

from .fields import FieldSpec

__all__ = ["usable", "iter_values", "evaluate_lengths", "evaluate_fixed"]

MAX_DEGREE = 12
_MEMORY_BUDGET = 1_400_000_000  # bytes across the big state planes


class _BufferPool(threading.local):
    """Per-thread recycling of the big state planes: repeated evaluations
    (amplification trials, recovery re-runs) would otherwise page-fault
    hundreds of MB of fresh zero pages each time."""

    def __init__(self):
        self.free = {}

    def take(self, role: str, shape, dtype=np.uint16):
        key = (role, tuple(shape), np.dtype(dtype))
        buf = self.free.pop(key, None)
        if buf is None:
            buf = np.empty(shape, dtype)
        return buf

    def give(self, role: str, buf):
        self.free[(role, tuple(buf.shape), buf.dtype)] = buf


_POOL = _BufferPool()


@lru_cache(maxsize=1)
def _numba_layer():
    try:
        from numba import njit
    except ImportError:
        return None

    @njit(cache=True, nogil=True)
    def layer(
        k, nL, jmax, src_lo, src_hi, tgt_lo, tgt_hi,
        fst, sec, rev, wclass,
        tbl_fe, tbl_er,
        jsrcW, uniform_jp, pc_sorted, pc_off, idxbuf, idx_off,
        d0prev, d1prev, d0cur, d1cur,
        cagg2, caggcur,
        g_start, g_srccagg, g_wclass_start, tbl_start,
        vedge_off, vedge,
        recv_g, recv_slot, recv_tgt,
        a01, bbuf, sbuf,
    ):
        e2 = fst.shape[0]
        n = a01.shape[0]
        ngroups = d0prev.shape[0]
        plane = jmax * nL
        # Flat streaming applies once every label-count class is live; the
        # class-indexed loops handle the thin leading/trailing layers.  Values
        # written into weight slots that do not exist for a given label count
        # never feed a live slot (all cross-slot reads go through jsrcW).
        src_flat = src_lo == 0 and src_hi == k
        tgt_flat = tgt_lo <= 1 and tgt_hi == k

        for g in range(ngroups):
            # a01[v] = sum of previous states whose last vertex is v
            if src_flat:
                for v in range(n):
                    for i in range(plane):
                        a01[v, i] = 0
                for e in range(e2):
                    v = fst[e]
                    for i in range(plane):
                        a01[v, i] ^= d0prev[g, e, i] ^ d1prev[g, e, i]
            else:
                for v in range(n):
                    for j in range(jmax):
                        base = j * nL
                        for s in range(src_lo, src_hi + 1):
                            for ii in range(pc_off[s], pc_off[s + 1]):
                                a01[v, base + pc_sorted[ii]] = 0
                for e in range(e2):
                    v = fst[e]
                    for j in range(jmax):
                        base = j * nL
                        for s in range(src_lo, src_hi + 1):
                            for ii in range(pc_off[s], pc_off[s + 1]):
                                L = base + pc_sorted[ii]
                                a01[v, L] ^= d0prev[g, e, L] ^ d1prev[g, e, L]
            # fresh-walk terms shared by every edge leaving this group's start
            st = g_start[g]
            gc = g_srccagg[g]
            wst = g_wclass_start[g]
            for i in range(plane):
                sbuf[i] = cagg2[gc, i]
            for s in range(max(src_lo, 1), src_hi + 1):
                for j in range(jmax):
                    jp = jsrcW[wst, s, j]
                    if jp < 0:
                        continue
                    basej = j * nL
                    basep = jp * nL
                    for r in range(k):
                        bit = 1 << r
                        tr = tbl_start[g, r]
                        for ii in range(idx_off[r, s], idx_off[r, s + 1]):
                            L = idxbuf[ii]
                            sbuf[basej + L] ^= tr[cagg2[gc, basep + (L ^ bit)]]
            # per-edge bracket, then the two target planes
            for e in range(e2):
                y = sec[e]
                re = rev[e]
                has_start = y == st
                if src_flat:
                    if has_start:
                        for i in range(plane):
                            bbuf[i] = a01[y, i] ^ d1prev[g, re, i] ^ sbuf[i]
                    else:
                        for i in range(plane):
                            bbuf[i] = a01[y, i] ^ d1prev[g, re, i]
                else:
                    for j in range(jmax):
                        base = j * nL
                        for s in range(src_lo, src_hi + 1):
                            for ii in range(pc_off[s], pc_off[s + 1]):
                                L = base + pc_sorted[ii]
                                b = a01[y, L] ^ d1prev[g, re, L]
                                if has_start:
                                    b ^= sbuf[L]
                                bbuf[L] = b
                # at non-flat layers, clear exactly the live target entries
                # (flat layers are cleared by one memset in the driver);
                # anything outside the target classes is never read downstream
                if not (tgt_flat and src_flat):
                    for j in range(jmax):
                        base = j * nL
                        for s in range(tgt_lo, tgt_hi + 1):
                            for ii in range(pc_off[s], pc_off[s + 1]):
                                L = base + pc_sorted[ii]
                                d0cur[g, e, L] = 0
                                d1cur[g, e, L] = 0
                tfe = tbl_fe[e]
                wi = wclass[e]
                if src_flat and tgt_flat:
                    for i in range(plane):
                        d0cur[g, e, i] = tfe[bbuf[i]]
                    for j in range(jmax):
                        jp = uniform_jp[wi, j]
                        basej = j * nL
                        if jp >= 0:
                            basep = jp * nL
                            for r in range(k):
                                bit = 1 << r
                                ter = tbl_er[e, r]
                                step = bit << 1
                                for lo in range(bit, nL, step):
                                    for L in range(lo, lo + bit):
                                        d1cur[g, e, basej + L] ^= ter[bbuf[basep + (L ^ bit)]]
                        elif jp == -2:
                            for s in range(1, k + 1):
                                jps = jsrcW[wi, s, j]
                                if jps < 0:
                                    continue
                                basep = jps * nL
                                for r in range(k):
                                    bit = 1 << r
                                    ter = tbl_er[e, r]
                                    for ii in range(idx_off[r, s], idx_off[r, s + 1]):
                                        L = idxbuf[ii]
                                        d1cur[g, e, basej + L] ^= ter[bbuf[basep + (L ^ bit)]]
                else:
                    lo0 = tgt_lo if tgt_lo > src_lo else src_lo
                    hi0 = tgt_hi if tgt_hi < src_hi else src_hi
                    for j in range(jmax):
                        base = j * nL
                        for s in range(lo0, hi0 + 1):
                            for ii in range(pc_off[s], pc_off[s + 1]):
                                L = base + pc_sorted[ii]
                                d0cur[g, e, L] = tfe[bbuf[L]]
                    lo1 = tgt_lo if tgt_lo > 1 else 1
                    for s in range(lo1, tgt_hi + 1):
                        for j in range(jmax):
                            jp = jsrcW[wi, s, j]
                            if jp < 0:
                                continue
                            basej = j * nL
                            basep = jp * nL
                            for r in range(k):
                                bit = 1 << r
                                ter = tbl_er[e, r]
                                for ii in range(idx_off[r, s], idx_off[r, s + 1]):
                                    L = idxbuf[ii]
                                    d1cur[g, e, basej + L] ^= ter[bbuf[basep + (L ^ bit)]]
        # close walks whose last vertex is an unused query end
        for q in range(recv_g.shape[0]):
            g = recv_g[q]
            tgt = recv_tgt[q]
            v = recv_slot[q]
            for ei in range(vedge_off[v], vedge_off[v + 1]):
                e = vedge[ei]
                if tgt_flat:
                    for i in range(plane):
                        caggcur[tgt, i] ^= d0cur[g, e, i] ^ d1cur[g, e, i]
                else:
                    for j in range(jmax):
                        base = j * nL
                        for s in range(tgt_lo, tgt_hi + 1):
                            for ii in range(pc_off[s], pc_off[s + 1]):
                                L = base + pc_sorted[ii]
                                caggcur[tgt, L] ^= d0cur[g, e, L] ^ d1cur[g, e, L]
        return 0

    return layer


def usable(spec: FieldSpec) -> bool:
    return spec.characteristic == 2 and spec.degree <= MAX_DEGREE and _numba_layer() is not None


def state_bytes_estimate(graph, query) -> int:
    """Rough size of one evaluator's state planes, for concurrency budgeting."""
    from math import comb

    groups = sum(comb(query.p, t - 1) for t in range(1, query.p + 1))
    slots, *_ = _weight_slots(graph.weights, query.k, query.w)
    jmax = max((len(s) for s in slots), default=1) or 1
    plane = jmax * (1 << query.k)
    return (4 * groups * max(2 * len(graph.edges), 1) + graph.n + 8) * plane * 2


def _gf2_scalar_table(scalar: int, degree: int, modmask: int) -> np.ndarray:
    order = 1 << degree
    powers = np.empty(degree, np.uint32)
    cur = scalar
    for i in range(degree):
        powers[i] = cur
        cur <<= 1
        if cur >> degree & 1:
            cur ^= modmask
    idx = np.arange(order, dtype=np.uint32)
    out = np.zeros(order, np.uint32)
    for i in range(degree):
        np.bitwise_xor(out, np.where(idx >> i & 1, powers[i], 0).astype(np.uint32), out)
    return out.astype(np.uint16)


@lru_cache(maxsize=8)
def _label_indexing(k: int):
    """Popcount-sorted label sets, globally and per contained label."""
    nL = 1 << k
    masks = np.arange(nL, dtype=np.uint32)
    pc = np.bitwise_count(masks).astype(np.uint8)
    order = np.argsort(pc, kind="stable").astype(np.uint32)
    pc_off = np.zeros(k + 2, np.int64)
    counts = np.bincount(pc, minlength=k + 1)
    pc_off[1:] = np.cumsum(counts)
    idx_chunks = []
    idx_off = np.zeros((k, k + 2), np.int64)
    pos = 0
    for r in range(k):
        members = masks[(masks >> r) & 1 == 1]
        mpc = pc[members]
        mord = members[np.argsort(mpc, kind="stable")]
        idx_chunks.append(mord)
        cnt = np.bincount(mpc, minlength=k + 2)
        idx_off[r, 0] = pos
        idx_off[r, 1:] = pos + np.cumsum(cnt[: k + 1])
        pos += len(mord)
    idxbuf = np.concatenate(idx_chunks).astype(np.uint32) if idx_chunks else np.zeros(0, np.uint32)
    return order, pc_off, idxbuf, idx_off


def _weight_slots(weights, k: int, w: int):
    """Reachable labeled-weight sums per label count, as slot lists."""
    distinct = sorted(set(weights))
    reach = [set() for _ in range(k + 1)]
    reach[0].add(0)
    for s in range(1, k + 1):
        for base in reach[s - 1]:
            for d in distinct:
                if base + d <= w:
                    reach[s].add(base + d)
    slot_lists = [sorted(r) for r in reach]
    jmax = max((len(sl) for sl in slot_lists), default=1) or 1
    wmap = [{wv: j for j, wv in enumerate(sl)} for sl in slot_lists]
    jsrcW = np.full((len(distinct), k + 1, jmax), -1, np.int16)
    for wi, d in enumerate(distinct):
        for s in range(1, k + 1):
            for j, wv in enumerate(slot_lists[s]):
                jsrcW[wi, s, j] = wmap[s - 1].get(wv - d, -1)
    # per weight class, is the slot-to-slot map independent of label count?
    # -1: no live targets, skip; -2: fall back to per-class loops (map varies
    # with label count, or the slot is live for so few counts that streaming
    # the whole plane would mostly shuffle dead entries)
    uniform_jp = np.full((len(distinct), jmax), -1, np.int16)
    for wi in range(len(distinct)):
        for j in range(jmax):
            defined = [int(jsrcW[wi, s, j]) for s in range(1, k + 1) if jsrcW[wi, s, j] >= 0]
            if not defined:
                continue
            if len(set(defined)) > 1 or len(defined) <= max(2, k // 3):
                uniform_jp[wi, j] = -2
            else:
                uniform_jp[wi, j] = defined[0]
    wclass_of = {d: i for i, d in enumerate(distinct)}
    return slot_lists, wmap, jmax, jsrcW, uniform_jp, wclass_of


class _Evaluator:
    def __init__(self, graph, query, assign):
        spec = assign.spec
        if not usable(spec):
            raise RuntimeError("kernel not usable for this field")
        self.spec = spec
        self.graph = graph
        self.query = query
        n, k, w, p = graph.n, query.k, query.w, query.p
        self.k, self.w, self.p, self.n = k, w, p, n
        self.nL = 1 << k
        modmask = 0
        for i, c in enumerate(spec.modulus):
            modmask |= c << i
        deg = spec.degree

        pairs = []
        for u, v in graph.edges:
            pairs.append((u, v))
            pairs.append((v, u))
        pairs.sort()
        self.e2 = len(pairs)
        pair_idx = {pq: i for i, pq in enumerate(pairs)}
        self.fst = np.array([a for a, _ in pairs], np.int32)
        self.sec = np.array([b for _, b in pairs], np.int32)
        self.rev = np.array([pair_idx[(b, a)] for a, b in pairs], np.int32)

        slot_lists, wmap, jmax, jsrcW, uniform_jp, wclass_of = _weight_slots(graph.weights, k, w)
        self.jmax, self.jsrcW, self.uniform_jp = jmax, jsrcW, uniform_jp
        self.slot_lists, self.wmap = slot_lists, wmap
        self.wclass = np.array([wclass_of[graph.weights[a]] for a, _ in pairs], np.int16)

        self.order, self.pc_off, self.idxbuf, self.idx_off = _label_indexing(k)

        tbl_fe = np.zeros((max(self.e2, 1), 1 << deg), np.uint16)
        tbl_er = np.zeros((max(self.e2, 1), max(k, 1), 1 << deg), np.uint16)
        for e, (a, b) in enumerate(pairs):
            fe = assign.edge_var(a, b)
            tbl_fe[e] = _gf2_scalar_table(fe, deg, modmask)
            gxe = spec.mul(assign.vertex_var(a), fe)
            for r in range(k):
                coef = spec.mul(gxe, assign.color_var(graph.colors[a], r + 1))
                tbl_er[e, r] = _gf2_scalar_table(coef, deg, modmask)
        self.tbl_fe, self.tbl_er = tbl_fe, tbl_er

        svec = list(query.S)
        tvec = list(query.T)
        self.groups = []  # open-walk classes (t, frozenset of used end slots)
        from itertools import combinations

        for t in range(1, p + 1):
            for used in combinations(range(p), t - 1):
                self.groups.append((t, frozenset(used)))
        self.cagg_classes = []  # (walks closed, frozenset of used end slots)
        for t in range(0, p + 1):
            for used in combinations(range(p), t):
                self.cagg_classes.append((t, frozenset(used)))
        cidx = {c: i for i, c in enumerate(self.cagg_classes)}
        self.ncagg = len(self.cagg_classes)
        gg = len(self.groups)
        self.g_start = np.array([svec[t - 1] for t, _ in self.groups], np.int32)
        self.g_srccagg = np.array([cidx[(t - 1, used)] for t, used in self.groups], np.int32)
        self.g_wclass_start = np.array(
            [wclass_of[graph.weights[svec[t - 1]]] for t, _ in self.groups], np.int16
        )
        tbl_start = np.zeros((gg, max(k, 1), 1 << deg), np.uint16)
        for gi, (t, _) in enumerate(self.groups):
            st = svec[t - 1]
            for r in range(k):
                coef = spec.mul(assign.vertex_var(st), assign.color_var(graph.colors[st], r + 1))
                tbl_start[gi, r] = _gf2_scalar_table(coef, deg, modmask)
        self.tbl_start = tbl_start

        vedge_lists = [[] for _ in range(n)]
        for e, (a, _) in enumerate(pairs):
            vedge_lists[a].append(e)
        self.vedge_off = np.zeros(n + 1, np.int64)
        self.vedge_off[1:] = np.cumsum([len(x) for x in vedge_lists])
        self.vedge = np.array([e for lst in vedge_lists for e in lst] or [0], np.int64)

        recv = []
        for gi, (t, used) in enumerate(self.groups):
            for slot in range(p):
                if slot not in used:
                    recv.append((gi, tvec[slot], cidx[(t, used | {slot})]))
        self.recv_g = np.array([a for a, _, _ in recv] or [0], np.int32)
        self.recv_slot = np.array([b for _, b, _ in recv] or [0], np.int32)
        self.recv_tgt = np.array([c for _, _, c in recv] or [0], np.int32)
        if not recv:
            self.recv_g = np.zeros(0, np.int32)
            self.recv_slot = np.zeros(0, np.int32)
            self.recv_tgt = np.zeros(0, np.int32)

        plane = self.jmax * self.nL
        need = (4 * gg * max(self.e2, 1) + 2 * self.ncagg + n + 2) * plane * 2
        need += tbl_er.nbytes
        if need > _MEMORY_BUDGET:
            raise MemoryError(
                f"kernel state would need ~{need/1e9:.2f} GB; instance too large for the packed evaluator"
            )
        shape = (gg, max(self.e2, 1), plane)
        self._loans = []

        def borrow(role, shp):
            buf = _POOL.take(role, shp)
            self._loans.append((role, buf))
            return buf

        self.d0prev = borrow("d0a", shape)
        self.d1prev = borrow("d1a", shape)
        self.d0cur = borrow("d0b", shape)
        self.d1cur = borrow("d1b", shape)
        self.d0prev.fill(0)
        self.d1prev.fill(0)
        self.cagg_ring = [borrow(f"cagg{i}", (self.ncagg, plane)) for i in range(3)]
        for ring in self.cagg_ring:
            ring.fill(0)
        init_class = cidx[(0, frozenset())]
        # one empty walk tuple: label set empty, weight 0, slot 0
        self.cagg_ring[0][init_class, 0] = 1
        self.a01 = borrow("a01", (n, plane))
        self.bbuf = borrow("bbuf", (plane,))
        self.sbuf = borrow("sbuf", (plane,))

        self.readout_class = cidx[(p, frozenset(range(p)))]
        self.jfull = self.wmap[k].get(w, -1)
        self.layer_fn = _numba_layer()

    def __del__(self):
        try:
            for role, buf in self._loans:
                _POOL.give(role, buf)
        except Exception:
            pass

    def iterate(self, max_length: int, target: int | None = None):
        """Yield (length, value) for lengths 2..max_length in order.

        With `target` set, label-count classes that can no longer reach k
        labels by the target layer are pruned; only the value at the target
        length is then meaningful.
        """
        k, w, p = self.k, self.w, self.p
        plane = self.jmax * self.nL
        full_mask = self.nL - 1
        for l in range(2, max_length + 1):
            tgt_hi = min(k, l)
            tgt_lo = 0
            if target is not None:
                tgt_lo = max(0, k - (target - l))
            src_hi = min(k, l - 1)
            src_lo = max(0, tgt_lo - 1)
            if src_lo == 0 and src_hi == k and tgt_lo <= 1 and tgt_hi == k:
                self.d1cur.fill(0)  # flat layers: accumulation plane only
            caggcur = self.cagg_ring[l % 3]
            caggcur.fill(0)
            cagg2 = self.cagg_ring[(l - 2) % 3]
            self.layer_fn(
                k, self.nL, self.jmax, src_lo, src_hi, tgt_lo, tgt_hi,
                self.fst, self.sec, self.rev, self.wclass,
                self.tbl_fe, self.tbl_er,
                self.jsrcW, self.uniform_jp, self.order, self.pc_off, self.idxbuf, self.idx_off,
                self.d0prev, self.d1prev, self.d0cur, self.d1cur,
                cagg2, caggcur,
                self.g_start, self.g_srccagg, self.g_wclass_start, self.tbl_start,
                self.vedge_off, self.vedge,
                self.recv_g, self.recv_slot, self.recv_tgt,
                self.a01, self.bbuf, self.sbuf,
            )
            self.d0prev, self.d0cur = self.d0cur, self.d0prev
            self.d1prev, self.d1cur = self.d1cur, self.d1prev
            value = 0
            if self.jfull >= 0 and l >= 2 * p:
                value = int(caggcur[self.readout_class, self.jfull * self.nL + full_mask])
            yield l, value


def iter_values(graph, query, assign, max_length: int, target: int | None = None):
    ev = _Evaluator(graph, query, assign)
    yield from ev.iterate(max_length, target)


def evaluate_lengths(graph, query, max_length: int, assign) -> list[int]:
    vals = [0] * (max_length + 1)
    for l, v in iter_values(graph, query, assign, max_length):
        vals[l] = v
    return vals


def evaluate_fixed(graph, query, length: int, assign) -> int:
    out = 0
    for l, v in iter_values(graph, query, assign, length, target=length):
        if l == length:
            out = v
    return out
