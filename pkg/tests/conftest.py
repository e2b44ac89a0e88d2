import os
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

# Post-split club rosters for the karate network, 1-based member ids.
# Member 9 joined the officers' club, giving the 16/18 split.
KARATE_MR_HI = {1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 17, 18, 20, 22}


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Edge files for the bundled real networks, written once per session."""
    out = tmp_path_factory.mktemp("networks")
    G = nx.karate_club_graph()
    with open(out / "karate.tsv", "w") as fh:
        for u, v, data in G.edges(data=True):
            fh.write(f"{u + 1} {v + 1} {data.get('weight', 1)}\n")
    with open(out / "karate_labels.tsv", "w") as fh:
        for u in sorted(G.nodes):
            fh.write(f"{u + 1} {1 if (u + 1) in KARATE_MR_HI else 2}\n")
    L = nx.les_miserables_graph()
    with open(out / "lesmis.tsv", "w") as fh:
        for u, v, data in L.edges(data=True):
            fh.write(f"{u} {v} {data.get('weight', 1)}\n")
    return out


def polblogs_path():
    """User-provided political-weblogs file; tests skip when absent."""
    candidates = [
        os.environ.get("SPECTRALMIX_POLBLOGS"),
        "data/polblogs.gml",
        str(Path(__file__).resolve().parent.parent / "data" / "polblogs.gml"),
    ]
    for c in candidates:
        if c and Path(c).exists():
            return Path(c)
    return None


def random_ground_truth(rng, n, K, pure_frac_min=0.4, p_low=-0.3, p_high=0.5):
    """A random valid parameter set: pure blocks plus Dirichlet mixed rows,
    a well-conditioned unit-diagonal block matrix, positive node scales."""
    n_pure = max(K, int(np.ceil(pure_frac_min * n)))
    n0 = max(1, n_pure // K)
    n_mixed = n - K * n0
    Pi = np.zeros((n, K))
    for k in range(K):
        Pi[k * n0:(k + 1) * n0, k] = 1.0
    if n_mixed:
        Pi[K * n0:] = rng.dirichlet(np.ones(K), size=n_mixed)
    while True:
        off = rng.uniform(p_low, p_high, size=(K, K))
        off = (off + off.T) / 2
        P = np.eye(K) + off - np.diag(np.diag(off))
        sv = np.linalg.svd(P, compute_uv=False)
        if sv[-1] > 0.1:
            break
    theta = rng.uniform(0.5, 1.5, size=n)
    return P, Pi, theta
