"""Independent brute-force evaluators used as test oracles.

Plain Python over nested lists, written straight from the cost and
clustering definitions; nothing here touches the package's numpy paths.
"""

import itertools
import math


def expand(members):
    """members: list of per-list 0/1 lists -> list of N x N matrices."""
    return [[[a * b for b in row] for a in row] for row in members]


def tau(k, members, sigma, prob, ue, U=1.0, H=1.0, flags=None):
    C = expand(members)
    L = len(members)
    flags = flags or [1] * L
    N = len(ue)
    total = 0.0
    for n in range(N):
        if n == k:
            continue
        total += prob[k][n] * sum(H * flags[l] * sigma[l][k] * (1 - C[l][k][n]) for l in range(L))
    return ue[k] * U * total


def paging(k, members, sigma, ue, Ga=0.05, Gc=1.0):
    C = expand(members)
    L = len(members)
    N = len(ue)
    first = sum(ue[k] * sigma[l][k] for l in range(L))
    second = sum(ue[n] * C[l][k][n] * sigma[l][n] for l in range(L) for n in range(N) if n != k)
    return Ga * Gc * (first + second)


def handover(k, members, prob, ue):
    C = expand(members)
    N = len(ue)
    return sum(ue[k] * prob[k][n] * (1 - C[l][k][n]) for l in range(len(members)) for n in range(N) if n != k)


def objectives(members, sigma, prob, ue, U=1.0, H=1.0, Ga=0.05, Gc=1.0):
    N = len(ue)
    j1 = sum(tau(k, members, sigma, prob, ue, U, H) + paging(k, members, sigma, ue, Ga, Gc) for k in range(N))
    j2 = sum(handover(k, members, prob, ue) for k in range(N))
    return j1, j2


def power_mw(members, sigma, prob, ue):
    C = expand(members)
    N = len(ue)
    events = 0.0
    for k in range(N):
        for n in range(N):
            if n != k:
                events += ue[k] * prob[k][n] * sum(sigma[l][k] * (1 - C[l][k][n]) for l in range(len(members)))
    return 10.0 * events / sum(ue)


def average_linkage(points, k):
    """Naive agglomerative average linkage, recomputing every linkage from scratch."""
    clusters = [[i] for i in range(len(points))]

    def link(a, b):
        return sum(math.dist(points[i], points[j]) for i in a for j in b) / (len(a) * len(b))

    while len(clusters) > k:
        best = None
        for x, y in itertools.combinations(range(len(clusters)), 2):
            d = link(clusters[x], clusters[y])
            if best is None or d < best[0]:
                best = (d, x, y)
        _, x, y = best
        clusters[x] = sorted(clusters[x] + clusters[y])
        del clusters[y]
    return sorted(clusters)


def nondominated(points):
    out = []
    for i, p in enumerate(points):
        dominated = any(
            q[0] <= p[0] and q[1] <= p[1] and (q[0] < p[0] or q[1] < p[1]) for j, q in enumerate(points) if j != i
        )
        if not dominated and p not in out:
            out.append(p)
    return out


def hypervolume_grid(points, ref, cells=400):
    """Midpoint-rule area of the dominated region, for cross-checking."""
    area = 0.0
    dx = ref[0] / cells
    dy = ref[1] / cells
    for i in range(cells):
        x = (i + 0.5) * dx
        for j in range(cells):
            y = (j + 0.5) * dy
            if any(p[0] <= x and p[1] <= y for p in points):
                area += dx * dy
    return area
