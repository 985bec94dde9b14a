"""Bitmask engine for finite discrete quivers.

Vertices are ``0..n-1``; sets are int bitmasks; ``mult[v][w]`` counts edges
from ``v`` to ``w`` with :data:`INF` standing for infinitely many.

Two kinds of auxiliary vertex let the engine model presented infinite
graphs exactly:

* a *ghost* stands for a whole tail chain.  It has no successors, is
  regular, has out-degree one in every quotient, and is never added by a
  saturation step (a tail meets a saturated hereditary set in all or
  nothing, and only from above).
* the *point at infinity* has no edges and is neither a sink nor a finite
  emitter.  An open set may contain it only if it contains every ghost.
"""

from __future__ import annotations

INF = 1 << 20


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    __slots__ = ("n", "mult", "succ", "pred", "deg", "ghosts", "infpt", "full", "sinks", "fin", "reg", "_sh")

    def __init__(self, mult, ghosts: int = 0, infpt: int = -1):
        n = len(mult)
        self.n = n
        self.mult = mult
        self.ghosts = ghosts
        self.infpt = infpt
        self.full = (1 << n) - 1
        succ = [0] * n
        pred = [0] * n
        deg = [0] * n
        for v in range(n):
            row = mult[v]
            d = 0
            for w in range(n):
                k = row[w]
                if k:
                    succ[v] |= 1 << w
                    pred[w] |= 1 << v
                    d = INF if (k >= INF or d >= INF) else d + k
            deg[v] = d
        for g in bits(ghosts):
            deg[g] = 1
        if infpt >= 0:
            deg[infpt] = INF
        self.succ, self.pred, self.deg = succ, pred, deg
        sinks = fin = 0
        for v in range(n):
            if deg[v] == 0:
                sinks |= 1 << v
            if deg[v] < INF:
                fin |= 1 << v
        self.sinks, self.fin = sinks, fin
        self.reg = fin & ~sinks
        self._sh = None

    # -- reachability ---------------------------------------------------------
    def forward(self, U: int) -> int:
        """Smallest hereditary superset of ``U``."""
        seen, frontier = U, U
        succ = self.succ
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= succ[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen

    def backward(self, T: int) -> int:
        """Vertices with a path into ``T`` (``T`` included)."""
        seen, frontier = T, T
        pred = self.pred
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= pred[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen

    def is_hereditary(self, U: int) -> bool:
        succ = self.succ
        for v in bits(U):
            if succ[v] & ~U:
                return False
        return True

    def hereditary_witness(self, U: int):
        for v in bits(U):
            out = self.succ[v] & ~U
            if out:
                return v, (out & -out).bit_length() - 1
        return None

    def sat_candidates(self, U: int) -> int:
        """Regular vertices outside ``U`` all of whose edges land in ``U``."""
        out = 0
        succ = self.succ
        for v in bits(self.reg & ~U & ~self.ghosts):
            if not succ[v] & ~U:
                out |= 1 << v
        return out

    def is_saturated(self, U: int) -> bool:
        return not self.sat_candidates(U)

    def closure(self, U: int) -> int:
        """Smallest saturated hereditary superset of ``U``."""
        U = self.forward(U)
        while True:
            add = self.sat_candidates(U)
            if not add:
                return U
            U = self.forward(U | add)

    def is_open(self, U: int) -> bool:
        if self.infpt >= 0 and U >> self.infpt & 1:
            return U & self.ghosts == self.ghosts
        return True

    def sat_her_sets(self) -> list[int]:
        """All saturated hereditary open sets, by closing upward from the least one."""
        if self._sh is not None:
            return self._sh
        inf_bit = 1 << self.infpt if self.infpt >= 0 else 0
        start = self.closure(0)
        found = {start}
        stack = [start]
        todo = self.full & ~inf_bit
        while stack:
            S = stack.pop()
            for v in bits(todo & ~S):
                T = self.closure(S | (1 << v))
                if T not in found:
                    found.add(T)
                    stack.append(T)
        if inf_bit:
            found |= {S | inf_bit for S in found if S & self.ghosts == self.ghosts}
        self._sh = sorted(found, key=lambda m: (bin(m).count("1"), m))
        return self._sh

    def is_minimal(self) -> bool:
        return all(S in (0, self.full) for S in self.sat_her_sets())

    # -- quotients ------------------------------------------------------------
    def quotient_deg(self, U: int) -> list[int]:
        out = []
        for v in range(self.n):
            if self.ghosts >> v & 1:
                out.append(1)
                continue
            if v == self.infpt:
                out.append(INF)
                continue
            row = self.mult[v]
            d = 0
            for w in bits(self.succ[v] & ~U):
                k = row[w]
                d = INF if (k >= INF or d >= INF) else d + k
            out.append(d)
        return out

    def quotient_reg(self, U: int) -> int:
        deg = self.quotient_deg(U)
        out = 0
        for v in bits(self.full & ~U):
            if 0 < deg[v] < INF:
                out |= 1 << v
        return out

    def admissible_pairs(self) -> list[tuple[int, int]]:
        out = []
        for U in self.sat_her_sets():
            lo = self.reg & ~U
            hi = self.quotient_reg(U)
            free = hi & ~lo
            sub = free
            while True:
                out.append((U, lo | sub))
                if sub == 0:
                    break
                sub = (sub - 1) & free
        return sorted(out)

    def admissible_pairs_brute(self) -> list[tuple[int, int]]:
        out = []
        for U in range(self.full + 1):
            if not (self.is_open(U) and self.is_hereditary(U) and self.is_saturated(U)):
                continue
            lo = self.reg & ~U
            hi = self.quotient_reg(U)
            for V in range(self.full + 1):
                if V & U:
                    continue
                if lo & ~V == 0 and V & ~hi == 0:
                    out.append((U, V))
        return sorted(out)

    # -- loops ----------------------------------------------------------------
    def unique_succ(self, U: int = 0) -> dict:
        """``h`` on vertices outside ``U`` emitting exactly one edge in ``Q_U``."""
        deg = self.quotient_deg(U)
        h = {}
        for v in bits(self.full & ~U & ~self.ghosts):
            if deg[v] == 1:
                out = self.succ[v] & ~U
                h[v] = out.bit_length() - 1
        return h

    def exitless_base_points(self, U: int = 0) -> int:
        """Vertices on loops without exits in ``Q_U``."""
        h = self.unique_succ(U)
        out = 0
        for v in h:
            w, k = h[v], 1
            while w in h and w != v and k <= len(h):
                w = h[w]
                k += 1
            if w == v:
                out |= 1 << v
        return out

    def periods(self, U: int = 0) -> dict:
        """Least period of each exitless base point."""
        h = self.unique_succ(U)
        out = {}
        for v in h:
            w, k = h[v], 1
            while w in h and w != v and k <= len(h):
                w = h[w]
                k += 1
            if w == v:
                out[v] = k
        return out

    def condition_L(self, U: int = 0) -> bool:
        return not self.exitless_base_points(U)

    def first_return_count(self, v: int, cap: int = 2) -> int:
        """Number of simple loops based at ``v``, capped at ``cap``."""
        vb = 1 << v
        rest = self.full & ~vb
        # vertices other than v that reach v without passing through v
        R = 0
        frontier = self.pred[v] & rest
        R |= frontier
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= self.pred[u]
            frontier = nxt & rest & ~R
            R |= frontier
        # vertices of R lying on or above a cycle inside R count as infinite
        memo: dict[int, int] = {}
        state: dict[int, int] = {}
        mult = self.mult

        def f(u: int) -> int:
            if u in memo:
                return memo[u]
            if state.get(u) == 1:
                return cap  # cycle inside R
            state[u] = 1
            row = mult[u]
            total = min(cap, row[v])
            for w in bits(self.succ[u] & R):
                if total >= cap:
                    break
                fw = f(w)
                if fw:
                    total = min(cap, total + row[w] * fw)
            state[u] = 2
            memo[u] = total
            return total

        row = mult[v]
        total = min(cap, row[v])
        for w in bits(self.succ[v] & R):
            if total >= cap:
                break
            fw = f(w)
            if fw:
                total = min(cap, total + row[w] * fw)
        # a cycle inside R reached from a successor always leads back to v
        if total < cap and self._cycle_below(v, R):
            total = cap
        return total

    def _cycle_below(self, v: int, R: int) -> bool:
        start = self.succ[v] & R
        if not start:
            return False
        reach = start
        frontier = start
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= self.succ[u] & R
            frontier = nxt & ~reach
            reach |= frontier
        # any vertex of reach lying on a cycle within reach
        for u in bits(reach):
            if self.mult[u][u]:
                return True
        sub = reach
        indeg = {u: bin(self.pred[u] & sub).count("1") for u in bits(sub)}
        queue = [u for u, d in indeg.items() if d == 0]
        removed = 0
        while queue:
            u = queue.pop()
            removed += 1
            for w in bits(self.succ[u] & sub):
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return removed < len(indeg)

    def condition_K_witnesses(self) -> list[int]:
        """Vertices that are the base of exactly one simple loop."""
        return [v for v in range(self.n) if not (self.ghosts >> v & 1) and v != self.infpt and self.first_return_count(v) == 1]

    def condition_K_definitional(self):
        """First saturated hereditary ``U`` whose quotient fails Condition (L), or None."""
        for U in self.sat_her_sets():
            if self.exitless_base_points(U):
                return U
        return None
