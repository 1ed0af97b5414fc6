"""Independent random-index estimate with numpy/scipy, for cross-checking icr.

Usage: python3 crosscheck_ri.py N M [SAMPLES] [SEED]
"""
import sys

import networkx as nx
import numpy as np
from scipy.optimize import minimize

SCALE = np.array([1 / 9, 1 / 8, 1 / 7, 1 / 6, 1 / 5, 1 / 4, 1 / 3, 1 / 2, 1, 2, 3, 4, 5, 6, 7, 8, 9])


def lambda_max(a):
    return max(np.linalg.eigvals(a).real)


def main():
    n, m = int(sys.argv[1]), int(sys.argv[2])
    samples = int(sys.argv[3]) if len(sys.argv) > 3 else 4000
    rng = np.random.default_rng(int(sys.argv[4]) if len(sys.argv) > 4 else 0)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bound = np.log(9)
    cis = []
    while len(cis) < samples:
        a = np.ones((n, n))
        for i, j in pairs:
            v = rng.choice(SCALE)
            a[i, j], a[j, i] = v, 1 / v
        missing = [pairs[k] for k in rng.choice(len(pairs), m, replace=False)]
        known = [p for p in pairs if p not in missing]
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(known)
        if not nx.is_connected(g):
            continue

        def f(y):
            b = a.copy()
            for (i, j), t in zip(missing, y):
                b[i, j], b[j, i] = np.exp(t), np.exp(-t)
            return lambda_max(b)

        starts = [np.zeros(m)] + [rng.uniform(-1, 1, m) for _ in range(2)]
        best = min(
            (minimize(f, x0, bounds=[(-bound, bound)] * m, method="L-BFGS-B") for x0 in starts),
            key=lambda r: r.fun,
        ) if m else None
        lam = best.fun if m else lambda_max(a)
        cis.append((lam - n) / (n - 1))
    cis = np.array(cis)
    print(f"n={n} m={m} samples={samples}: RI = {cis.mean():.4f} +- {cis.std(ddof=1) / np.sqrt(samples):.4f}")


if __name__ == "__main__":
    main()
