#!/usr/bin/env python3
"""Convert an OpenStreetMap extract into a three-metric ``p mosp`` graph.

Every node of every routable ``highway=*`` way becomes a graph node (no
degree-2 contraction); consecutive way nodes are joined by arcs in both
directions unless the way is one-way for bicycles.  Only the largest
strongly connected component is kept, so every query has a path.

Arc costs, all integers:

1. length in metres (haversine, at least 1)
2. riding time in tenths of a second at a per-class cycling speed
3. traffic stress: length times a per-class stress factor

Usage::

    python scripts/osm_to_mosp.py Helsinki.osm.pbf data/helsinki.mosp --queries 50 --seed 2024

Map data (c) OpenStreetMap contributors, available under the Open Database
License (ODbL) 1.0.  The output keeps that attribution in its comment lines.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np
import osmium
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from mosp.graph import Graph
from mosp.instance_io import random_queries, write_graph, write_queries

ATTRIBUTION = [
    "Map data (c) OpenStreetMap contributors.",
    "Available under the Open Database License (ODbL) 1.0: https://opendatacommons.org/licenses/odbl/1-0/",
]

# highway class -> (cycling speed km/h, stress per metre)
CLASSES = {
    "cycleway": (18, 1),
    "path": (12, 2),
    "trail": (10, 2),
    "track": (12, 2),
    "footway": (10, 2),
    "bridleway": (10, 2),
    "pedestrian": (10, 3),
    "crossing": (8, 3),
    "living_street": (12, 2),
    "residential": (16, 2),
    "service": (14, 2),
    "road": (14, 3),
    "unclassified": (16, 3),
    "tertiary": (18, 3),
    "tertiary_link": (18, 3),
    "secondary": (20, 5),
    "secondary_link": (20, 5),
    "primary": (20, 7),
    "primary_link": (20, 7),
    "trunk": (20, 9),
    "trunk_link": (20, 9),
    "steps": (2, 10),
}
FOOT_CLASSES = {"path", "trail", "track", "footway", "bridleway", "pedestrian", "crossing", "steps", "cycleway"}
EARTH_RADIUS_M = 6_371_000.0


def haversine_m(lat1, lon1, lat2, lon2) -> float:
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


def _oneway(tags, hw) -> int:
    """+1 forward only, -1 backward only, 0 both ways."""
    if hw in FOOT_CLASSES or tags.get("oneway:bicycle") == "no":
        return 0
    v = tags.get("oneway", "no")
    if v in ("yes", "1", "true"):
        return 1
    if v == "-1":
        return -1
    if tags.get("junction") == "roundabout":
        return 1
    return 0


class _Ways(osmium.SimpleHandler):
    def __init__(self):
        super().__init__()
        self.segments = []  # (osm_a, osm_b, metres, class, oneway)
        self.skipped = 0

    def way(self, w):
        hw = w.tags.get("highway")
        if hw is None:
            return
        if hw not in CLASSES or w.tags.get("area") == "yes" or w.tags.get("bicycle") == "no" and hw not in FOOT_CLASSES:
            self.skipped += 1
            return
        ow = _oneway(w.tags, hw)
        nodes = [(n.ref, n.location) for n in w.nodes if n.location.valid()]
        for (ra, la), (rb, lb) in zip(nodes, nodes[1:]):
            if ra == rb:
                continue
            self.segments.append((ra, rb, haversine_m(la.lat, la.lon, lb.lat, lb.lon), hw, ow))


def convert(pbf: str):
    h = _Ways()
    h.apply_file(pbf, locations=True)
    ids = {}
    tails, heads, costs = [], [], []

    def node(ref):
        return ids.setdefault(ref, len(ids))

    for ra, rb, metres, hw, ow in h.segments:
        a, b = node(ra), node(rb)
        speed, stress = CLASSES[hw]
        c = (max(1, round(metres)), max(1, round(metres * 36.0 / speed)), max(1, round(metres * stress)))
        if ow >= 0:
            tails.append(a), heads.append(b), costs.append(c)
        if ow <= 0:
            tails.append(b), heads.append(a), costs.append(c)

    n = len(ids)
    t = np.array(tails, dtype=np.int64)
    hd = np.array(heads, dtype=np.int64)
    adj = coo_matrix((np.ones(len(t)), (t, hd)), shape=(n, n))
    _, label = connected_components(adj, directed=True, connection="strong")
    big = np.bincount(label).argmax()
    keep = label == big
    remap = -np.ones(n, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()))
    arcs = keep[t] & keep[hd]
    graph = Graph.from_arrays(int(keep.sum()), remap[t[arcs]], remap[hd[arcs]], np.array(costs, dtype=np.int64)[arcs])
    return graph, {"osm_nodes": n, "segments": len(h.segments), "skipped_ways": h.skipped}


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("pbf")
    p.add_argument("out")
    p.add_argument("--queries", type=int, default=50, help="number of seeded random s-t pairs")
    p.add_argument("--seed", type=int, default=2024)
    args = p.parse_args(argv)

    graph, info = convert(args.pbf)
    comments = [
        f"converted from {Path(args.pbf).name} by scripts/osm_to_mosp.py",
        *ATTRIBUTION,
        "metrics: length [m], cycling time [0.1 s], traffic stress [m x class factor]",
        f"largest strongly connected component of {info['osm_nodes']} way nodes",
    ]
    write_graph(graph, args.out, comments=comments)
    qpath = Path(args.out).with_suffix(".queries")
    write_queries(random_queries(graph.node_count, args.queries, args.seed), qpath)
    print(f"{args.out}: {graph.node_count} nodes, {graph.arc_count} arcs; {qpath}: {args.queries} queries",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
