"""Small directed-graph helpers over integer vertices."""

from __future__ import annotations

from collections import deque


def strongly_connected_components(n: int, succ) -> list[list[int]]:
    """Iterative Tarjan. ``succ(v)`` yields successors of vertex ``v`` in ``range(n)``.

    Components come out in reverse topological order (sinks first).
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def is_cyclic_component(comp: list[int], succ) -> bool:
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in succ(v)


def cycle_through(v: int, succ, allowed: set[int] | None = None) -> list[int] | None:
    """Shortest cycle ``[v, ..., v]`` through ``v`` (BFS), or None."""
    parent: dict[int, int] = {}
    queue = deque()
    for w in succ(v):
        if allowed is not None and w not in allowed:
            continue
        if w == v:
            return [v, v]
        if w not in parent:
            parent[w] = v
            queue.append(w)
    while queue:
        u = queue.popleft()
        for w in succ(u):
            if allowed is not None and w not in allowed:
                continue
            if w == v:
                path = [u]
                while path[-1] != v:
                    path.append(parent[path[-1]])
                path.reverse()
                return path + [v]
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return None


def shortest_path(src: int, dst: int, succ) -> list[int] | None:
    if src == dst:
        return [src]
    parent = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in succ(u):
            if w in parent:
                continue
            parent[w] = u
            if w == dst:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(w)
    return None
