"""Real-network ingestion, scree-based K suggestion, and labeled fits.

Three small readers cover the formats the usual public datasets ship in:
whitespace edge triplets, a minimal GML subset, and a minimal Pajek
subset. Loading always produces a dense symmetric matrix with zero
diagonal plus the node-id map; ground-truth labels ride along when the
file (or a sidecar) carries them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from . import estimators as _estimators
from . import metrics as _metrics
from . import spectral as _spectral

FORMATS = ("whitespace_triplets", "gml_like", "pajek_like")


class ParseError(ValueError):
    pass


@dataclass
class LoadedNetwork:
    adjacency: np.ndarray
    ids: list
    labels: np.ndarray | None = None
    dropped_self_loops: int = 0
    removed_nodes: int = 0

    @property
    def n(self):
        return self.adjacency.shape[0]


def _edges_whitespace(path):
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"{path}:{lineno}: expected 'u v [weight]', got {line!r}")
            u, v = parts[0], parts[1]
            try:
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad weight {parts[2]!r}")
            edges.append((u, v, w))
    return edges, {}, False


_GML_TOKEN = re.compile(r'"[^"]*"|\[|\]|[^\s\[\]]+')


def _edges_gml(path):
    text = open(path).read()
    tokens = _GML_TOKEN.findall(text)
    edges = []
    nodes = []  # (id, label, value-or-None)
    directed = False
    i = 0

    def parse_block(start):
        depth = 0
        fields = {}
        j = start
        while j < len(tokens):
            tok = tokens[j]
            if tok == "[":
                depth += 1
            elif tok == "]":
                depth -= 1
                if depth == 0:
                    return fields, j
            elif depth == 1 and j + 1 < len(tokens) and tokens[j + 1] not in ("[", "]"):
                fields.setdefault(tok, tokens[j + 1].strip('"'))
                j += 1
            j += 1
        raise ParseError(f"{path}: unterminated block")

    while i < len(tokens):
        tok = tokens[i]
        if tok == "directed" and i + 1 < len(tokens):
            directed = tokens[i + 1] == "1"
        if tok in ("node", "edge") and i + 1 < len(tokens) and tokens[i + 1] == "[":
            fields, i = parse_block(i + 1)
            if tok == "node":
                if "id" not in fields:
                    raise ParseError(f"{path}: node block without id")
                nodes.append((fields["id"], fields.get("label", fields["id"]),
                              fields.get("value")))
            else:
                if "source" not in fields or "target" not in fields:
                    raise ParseError(f"{path}: edge block without source/target")
                w = float(fields.get("value", fields.get("weight", 1.0)))
                edges.append((fields["source"], fields["target"], w))
        i += 1

    # prefer declared labels as node identities, but only when unique:
    # some public files carry duplicate labels under distinct ids
    label_list = [label for _, label, _ in nodes]
    use_labels = len(set(label_list)) == len(label_list)
    id_to_name = {nid: (label if use_labels else nid) for nid, label, _ in nodes}
    edges = [(id_to_name.get(u, u), id_to_name.get(v, v), w) for u, v, w in edges]
    labels = {id_to_name[nid]: value for nid, _, value in nodes if value is not None}
    declared = [id_to_name[nid] for nid, _, _ in nodes]
    return edges, labels, directed, declared


def _edges_pajek(path):
    edges = []
    declared = []
    directed = False
    mode = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            low = line.lower()
            if low.startswith("*vertices"):
                mode = "vertices"
                continue
            if low.startswith("*edges"):
                mode = "edges"
                continue
            if low.startswith("*arcs"):
                mode = "edges"
                directed = True
                continue
            if mode == "vertices":
                m = re.match(r'(\d+)\s+"([^"]*)"', line) or re.match(r"(\d+)\s+(\S+)", line)
                if m:
                    declared.append((m.group(1), m.group(2)))
                else:
                    declared.append((line.split()[0], line.split()[0]))
            elif mode == "edges":
                parts = line.split()
                if len(parts) < 2:
                    raise ParseError(f"{path}:{lineno}: bad edge line {line!r}")
                w = float(parts[2]) if len(parts) > 2 else 1.0
                edges.append((parts[0], parts[1], w))
            else:
                raise ParseError(f"{path}:{lineno}: content before any *Vertices/*Edges section")
    label_list = [label for _, label in declared]
    use_labels = len(set(label_list)) == len(label_list)
    id_to_name = {nid: (label if use_labels else nid) for nid, label in declared}
    edges = [(id_to_name.get(u, u), id_to_name.get(v, v), w) for u, v, w in edges]
    return edges, {}, directed, [id_to_name[nid] for nid, _ in declared]


def _largest_component(A):
    n = A.shape[0]
    seen = np.zeros(n, dtype=bool)
    best = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in np.nonzero(A[u])[0]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        if len(comp) > len(best):
            best = comp
    return np.array(sorted(best), dtype=int)


def load_edge_list(path, format="whitespace_triplets", symmetrize="strict",
                   largest_component=False, unweighted=False):
    """Parse an edge file into a dense symmetric zero-diagonal matrix.

    ``symmetrize="strict"`` merges reciprocal duplicates only when their
    weights agree (conflicts are errors); ``"or"`` treats the file as a
    directed unweighted graph and keeps an edge wherever either direction
    appears. Self loops are dropped and counted. ``largest_component``
    restricts to the biggest connected component (id map follows).
    """
    if format == "whitespace_triplets":
        edges, labels_map, directed = _edges_whitespace(path)
        declared = None
    elif format == "gml_like":
        edges, labels_map, directed, declared = _edges_gml(path)
    elif format == "pajek_like":
        edges, labels_map, directed, declared = _edges_pajek(path)
    else:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")

    ids = list(declared) if declared else []
    seen = set(ids)
    for u, v, _ in edges:
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                ids.append(x)
    if len(ids) < 2:
        raise ParseError(f"{path}: fewer than 2 nodes")
    index = {x: i for i, x in enumerate(ids)}

    n = len(ids)
    A = np.zeros((n, n))
    have = {}
    self_loops = 0
    for u, v, w in edges:
        i, j = index[u], index[v]
        if i == j:
            self_loops += 1
            continue
        if unweighted:
            w = 1.0
        key = (min(i, j), max(i, j))
        if symmetrize == "or":
            A[i, j] = A[j, i] = 1.0 if unweighted else max(A[i, j], w)
            continue
        if key in have:
            prev, prev_directed = have[key]
            if (i, j) == prev_directed:
                raise ParseError(f"{path}: duplicate edge between {u!r} and {v!r}")
            if abs(prev - w) > 1e-12:
                raise ParseError(
                    f"{path}: conflicting weights {prev} vs {w} for edge {u!r}-{v!r}")
            continue
        have[key] = (w, (i, j))
        A[i, j] = A[j, i] = w

    labels = None
    if labels_map:
        try:
            raw = [labels_map.get(x) for x in ids]
            if all(r is not None for r in raw):
                uniq = sorted(set(raw), key=lambda s: (len(str(s)), str(s)))
                labels = np.array([uniq.index(r) + 1 for r in raw], dtype=int)
        except Exception:
            labels = None

    removed = 0
    if largest_component:
        keep = _largest_component(A)
        removed = n - keep.size
        A = A[np.ix_(keep, keep)]
        ids = [ids[i] for i in keep]
        if labels is not None:
            labels = labels[keep]

    return LoadedNetwork(adjacency=A, ids=ids, labels=labels,
                         dropped_self_loops=self_loops, removed_nodes=removed)


def save_edge_list(network, path):
    """Write a loaded network back out as whitespace triplets (upper triangle)."""
    A, ids = network.adjacency, network.ids
    with open(path, "w") as fh:
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                if A[i, j] != 0:
                    fh.write(f"{ids[i]} {ids[j]} {A[i, j]:.12g}\n")


def load_labels(path, ids):
    """Sidecar ground-truth labels: lines of 'id label'. Returns 1-based ints."""
    raw = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'id label'")
            raw[parts[0]] = parts[1]
    missing = [x for x in ids if str(x) not in raw]
    if missing:
        raise ParseError(f"{path}: missing labels for {len(missing)} nodes, e.g. {missing[:3]}")
    values = [raw[str(x)] for x in ids]
    uniq = sorted(set(values), key=lambda s: (len(s), s))
    return np.array([uniq.index(v) + 1 for v in values], dtype=int)


@dataclass
class ScreeReport:
    singular_values: np.ndarray
    suggested_k: int


def scree_report(A, m=15):
    """Top-m singular values plus the K suggested by the largest relative
    consecutive drop sigma_k / sigma_{k+1}."""
    A = np.asarray(A, dtype=float)
    m = min(m, A.shape[0])
    sv = _spectral.top_singular_values(A, m)
    tiny = 1e-12 * max(sv[0], 1e-300)
    ratios = np.where(sv[1:] > tiny, sv[:-1] / np.maximum(sv[1:], tiny), np.inf)
    return ScreeReport(singular_values=sv, suggested_k=int(np.argmax(ratios)) + 1)


@dataclass
class FitReport:
    network: LoadedNetwork
    result: "_estimators.EstimationResult"
    home_base: np.ndarray
    highly_mixed: np.ndarray
    miscluster_count: int | None = None
    miscluster_rate: float | None = None
    label_l1_rate: float | None = None

    def node_rows(self):
        for i, node_id in enumerate(self.network.ids):
            yield {
                "id": node_id,
                "label": int(self.home_base[i]),
                "membership": self.result.Pi_hat[i].tolist(),
                "highly_mixed": bool(self.highly_mixed[i]),
            }

    def write_csv(self, path):
        K = self.result.Pi_hat.shape[1]
        import csv as _csv

        with open(path, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["id", "home_base", "highly_mixed"]
                            + [f"pi_{k + 1}" for k in range(K)])
            for row in self.node_rows():
                writer.writerow([row["id"], row["label"], int(row["highly_mixed"])]
                                + [f"{x:.8g}" for x in row["membership"]])

    def summary(self):
        out = {
            "n": self.network.n,
            "dropped_self_loops": self.network.dropped_self_loops,
            "removed_nodes": self.network.removed_nodes,
            "highly_mixed_count": int(self.highly_mixed.sum()),
            **self.result.summary(),
        }
        if self.miscluster_count is not None:
            out["miscluster_count"] = self.miscluster_count
            out["miscluster_rate"] = self.miscluster_rate
            out["label_l1_rate"] = self.label_l1_rate
        return out


def fit_network(source, K, method="scd", seed=0, format="whitespace_triplets",
                labels_path=None, symmetrize="strict", largest_component=False,
                unweighted=False, mixed_threshold=_metrics.MIXED_THRESHOLD):
    """Load (if needed) and fit a network, returning per-node labels,
    memberships, mixedness flags and, when ground truth exists, miscluster
    statistics."""
    if isinstance(source, LoadedNetwork):
        network = source
    else:
        network = load_edge_list(source, format=format, symmetrize=symmetrize,
                                 largest_component=largest_component,
                                 unweighted=unweighted)
    if labels_path is not None:
        network.labels = load_labels(labels_path, network.ids)
    result = _estimators.estimate(method, network.adjacency, K, seed=seed)
    labels_hat = _metrics.home_base(result.Pi_hat)
    mixed = _metrics.highly_mixed(result.Pi_hat, threshold=mixed_threshold)
    report = FitReport(network=network, result=result, home_base=labels_hat,
                       highly_mixed=mixed)
    if network.labels is not None and network.labels.max() == K:
        count, _ = _metrics.miscluster_count(labels_hat, network.labels, K=K)
        onehot = np.zeros((network.n, K))
        onehot[np.arange(network.n), network.labels - 1] = 1.0
        report.miscluster_count = int(count)
        report.miscluster_rate = count / network.n
        report.label_l1_rate = _metrics.l1_error_rate(result.Pi_hat, onehot).l1_rate
    return report


def write_summary(report, path, scree=None):
    payload = report.summary()
    if scree is not None:
        payload["scree"] = {
            "singular_values": [float(s) for s in scree.singular_values],
            "suggested_k": scree.suggested_k,
        }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
