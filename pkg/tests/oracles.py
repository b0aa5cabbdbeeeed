"""Independent brute-force reference implementations used by the tests.

These deliberately avoid the library code paths (no scipy labeling, no
vectorized moments, no DSU): flood fill, direct moment sums over pixel
lists, and BFS component search. Slow but obviously correct.
"""

import math
from collections import deque


def flood_fill_regions(mask):
    """8-connected labeling by explicit flood fill.

    mask: 2-D sequence of truthy/falsy values.
    Returns a list of regions, each a sorted list of (y, x) pixels.
    """
    h = len(mask)
    w = len(mask[0]) if h else 0
    seen = [[False] * w for _ in range(h)]
    regions = []
    for sy in range(h):
        for sx in range(w):
            if not mask[sy][sx] or seen[sy][sx]:
                continue
            pixels = []
            queue = deque([(sy, sx)])
            seen[sy][sx] = True
            while queue:
                y, x = queue.popleft()
                pixels.append((y, x))
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        if dy == 0 and dx == 0:
                            continue
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w and mask[ny][nx] and not seen[ny][nx]:
                            seen[ny][nx] = True
                            queue.append((ny, nx))
            regions.append(sorted(pixels))
    return regions


def region_summary(pixels):
    """(bbox x, y, w, h, area) of a pixel list, for comparing labelings."""
    ys = [y for y, _ in pixels]
    xs = [x for _, x in pixels]
    return (min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1, len(pixels))


def brute_hu(mask):
    """Hu's seven invariants from raw per-pixel moment sums.

    mask: 2-D sequence; set pixels contribute weight 1 at (x, y).
    Returns (h, m): the 7 invariants and their log-scaled values.
    """
    pts = [(x, y) for y, row in enumerate(mask) for x, v in enumerate(row) if v]
    m00 = float(len(pts))
    cx = sum(x for x, _ in pts) / m00
    cy = sum(y for _, y in pts) / m00

    def mu(p, q):
        return sum((x - cx) ** p * (y - cy) ** q for x, y in pts)

    def eta(p, q):
        return mu(p, q) / m00 ** (1 + (p + q) / 2)

    n20, n02, n11 = eta(2, 0), eta(0, 2), eta(1, 1)
    n30, n03, n21, n12 = eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2)
    h1 = n20 + n02
    h2 = (n20 - n02) ** 2 + 4 * n11 ** 2
    h3 = (n30 - 3 * n12) ** 2 + (3 * n21 - n03) ** 2
    h4 = (n30 + n12) ** 2 + (n21 + n03) ** 2
    h5 = ((n30 - 3 * n12) * (n30 + n12)
          * ((n30 + n12) ** 2 - 3 * (n21 + n03) ** 2)
          + (3 * n21 - n03) * (n21 + n03)
          * (3 * (n30 + n12) ** 2 - (n21 + n03) ** 2))
    h6 = ((n20 - n02) * ((n30 + n12) ** 2 - (n21 + n03) ** 2)
          + 4 * n11 * (n30 + n12) * (n21 + n03))
    h7 = ((3 * n21 - n03) * (n30 + n12)
          * ((n30 + n12) ** 2 - 3 * (n21 + n03) ** 2)
          - (n30 - 3 * n12) * (n21 + n03)
          * (3 * (n30 + n12) ** 2 - (n21 + n03) ** 2))
    h = [h1, h2, h3, h4, h5, h6, h7]
    m = [math.copysign(math.log10(max(abs(v), 1e-30)), v) if v != 0
         else math.log10(1e-30) for v in h]
    return h, m


def bfs_components(n_nodes, edges):
    """Connected components by BFS; returns a set of frozensets of node ids."""
    adj = {i: [] for i in range(n_nodes)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = set()
    comps = set()
    for s in range(n_nodes):
        if s in seen:
            continue
        comp = set()
        queue = deque([s])
        seen.add(s)
        while queue:
            v = queue.popleft()
            comp.add(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        comps.add(frozenset(comp))
    return comps
