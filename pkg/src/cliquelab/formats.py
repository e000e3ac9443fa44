"""Serialization: plain text for graphs and families, JSON for instances.

Text formats use one header line carrying a type tag and counts, then one
line per item.  Full-line `#` comments are allowed anywhere after the header
and are ignored on load, except that `# key: value` lines are surfaced
through parse_meta (used for planted-clique sidecars and family source
sizes).  Steiner-forest and reachability instances travel as JSON.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Mapping

from .graph import Graph, Hypergraph, WeightedDigraph
from .oracles import DsnInstance, SteinerForestInstance
from .rgp import SubsetFamily


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a torso."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def parse_meta(text: str) -> dict[str, str]:
    """Collect `# key: value` comment lines, first occurrence wins."""
    meta: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("#"):
            continue
        body = line[1:].strip()
        key, sep, value = body.partition(":")
        if sep and key.strip() and key.strip() not in meta:
            meta[key.strip()] = value.strip()
    return meta


def _meta_lines(meta: Mapping[str, str] | None) -> list[str]:
    if not meta:
        return []
    for key in meta:
        if ":" in key or "\n" in key or "\n" in meta[key]:
            raise ValueError(f"meta key/value may not contain ':' or newlines: {key!r}")
    return [f"# {key}: {value}" for key, value in meta.items()]


def _data_lines(text: str, expected_tag: str) -> tuple[list[str], list[str]]:
    """Split into (header fields, item lines), dropping comments and blanks."""
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty input")
    header = lines[0].split()
    if not header or header[0] != expected_tag:
        raise ValueError(f"expected header tag {expected_tag!r}, got {lines[0]!r}")
    return header, lines[1:]


# -- graphs --------------------------------------------------------------------


def dump_graph(g: Graph, meta: Mapping[str, str] | None = None) -> str:
    lines = [f"g {g.n} {g.m}"]
    lines.extend(_meta_lines(meta))
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> Graph:
    header, body = _data_lines(text, "g")
    if len(header) != 3:
        raise ValueError(f"graph header must be 'g <n> <m>', got {header}")
    n, m = int(header[1]), int(header[2])
    if len(body) != m:
        raise ValueError(f"header promises {m} edges, found {len(body)} lines")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise ValueError(f"edge lines must satisfy u < v, got {ln!r}")
        edges.append((u, v))
    if len(set(edges)) != m:
        raise ValueError("duplicate edge lines")
    return Graph(n, edges)


# -- weighted digraphs ----------------------------------------------------------


def format_weight(w: Fraction) -> str:
    """Integer as-is, terminating decimals exactly, otherwise `p/q`."""
    w = Fraction(w)
    if w.denominator == 1:
        return str(w.numerator)
    den = w.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        digits = max(twos, fives)
        scaled = w.numerator * 10**digits // w.denominator
        sign = "-" if scaled < 0 else ""
        scaled = abs(scaled)
        whole, frac = divmod(scaled, 10**digits)
        return f"{sign}{whole}.{frac:0{digits}d}"
    return f"{w.numerator}/{w.denominator}"


def parse_weight(s: str) -> Fraction:
    return Fraction(s)


def dump_digraph(d: WeightedDigraph, meta: Mapping[str, str] | None = None) -> str:
    arcs = d.arcs()
    lines = [f"d {d.n} {len(arcs)}"]
    lines.extend(_meta_lines(meta))
    lines.extend(f"{u} {v} {format_weight(w)}" for u, v, w in arcs)
    return "\n".join(lines) + "\n"


def load_digraph(text: str) -> WeightedDigraph:
    header, body = _data_lines(text, "d")
    if len(header) != 3:
        raise ValueError(f"digraph header must be 'd <n> <m>', got {header}")
    n, m = int(header[1]), int(header[2])
    if len(body) != m:
        raise ValueError(f"header promises {m} arcs, found {len(body)} lines")
    arcs = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"malformed arc line {ln!r}")
        arcs.append((int(parts[0]), int(parts[1]), parse_weight(parts[2])))
    if len({(u, v) for u, v, _ in arcs}) != m:
        raise ValueError("duplicate arc lines")
    return WeightedDigraph(n, arcs)


# -- hypergraphs ----------------------------------------------------------------


def dump_hypergraph(h: Hypergraph, meta: Mapping[str, str] | None = None) -> str:
    lines = [f"h {h.n} {h.m}"]
    lines.extend(_meta_lines(meta))
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def load_hypergraph(text: str) -> Hypergraph:
    header, body = _data_lines(text, "h")
    if len(header) != 3:
        raise ValueError(f"hypergraph header must be 'h <n> <m>', got {header}")
    n, m = int(header[1]), int(header[2])
    if len(body) != m:
        raise ValueError(f"header promises {m} hyperedges, found {len(body)} lines")
    edges = [tuple(int(x) for x in ln.split()) for ln in body]
    return Hypergraph(n, edges)


# -- subset families -------------------------------------------------------------


def dump_family(fam: SubsetFamily, meta: Mapping[str, str] | None = None) -> str:
    merged = {"source-n": str(fam.source_n)}
    if meta:
        for key, value in meta.items():
            if key != "source-n":
                merged[key] = value
    lines = [f"f {fam.N} {fam.ell}"]
    lines.extend(_meta_lines(merged))
    lines.extend(" ".join(map(str, s)) for s in fam.sets)
    return "\n".join(lines) + "\n"


def load_family(text: str, source_n: int | None = None) -> SubsetFamily:
    header, body = _data_lines(text, "f")
    if len(header) != 3:
        raise ValueError(f"family header must be 'f <N> <ell>', got {header}")
    N, ell = int(header[1]), int(header[2])
    if len(body) != N:
        raise ValueError(f"header promises {N} sets, found {len(body)} lines")
    sets = tuple(tuple(int(x) for x in ln.split()) for ln in body)
    if source_n is None:
        meta = parse_meta(text)
        if "source-n" in meta:
            source_n = int(meta["source-n"])
        else:
            source_n = max((s[-1] for s in sets if s), default=0) + 1
    return SubsetFamily(source_n=source_n, ell=ell, sets=sets)


# -- JSON instance formats --------------------------------------------------------


def dump_steiner(inst: SteinerForestInstance, meta: Mapping[str, Any] | None = None) -> str:
    payload: dict[str, Any] = {
        "type": "steiner-k-forest",
        "n": inst.graph.n,
        "edges": [list(e) for e in inst.graph.edges()],
        "weights": [format_weight(w) for w in inst.weights],
        "demands": [list(d) for d in inst.demands],
        "k": inst.k,
    }
    if meta:
        payload["meta"] = dict(meta)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_steiner(text: str) -> SteinerForestInstance:
    d = json.loads(text)
    if d.get("type") != "steiner-k-forest":
        raise ValueError(f"expected type steiner-k-forest, got {d.get('type')!r}")
    g = Graph(d["n"], [tuple(e) for e in d["edges"]])
    weights = tuple(parse_weight(w) for w in d["weights"])
    demands = tuple(tuple(p) for p in d["demands"])
    return SteinerForestInstance(graph=g, weights=weights, demands=demands, k=d["k"])


def dump_dsn(inst: DsnInstance, meta: Mapping[str, Any] | None = None) -> str:
    payload: dict[str, Any] = {
        "type": "dsn",
        "n": inst.digraph.n,
        "arcs": [[u, v, format_weight(w)] for u, v, w in inst.digraph.arcs()],
        "demands": [list(d) for d in inst.demands],
    }
    if meta:
        payload["meta"] = dict(meta)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_dsn(text: str) -> DsnInstance:
    d = json.loads(text)
    if d.get("type") != "dsn":
        raise ValueError(f"expected type dsn, got {d.get('type')!r}")
    dg = WeightedDigraph(d["n"], [(a[0], a[1], parse_weight(a[2])) for a in d["arcs"]])
    demands = tuple(tuple(p) for p in d["demands"])
    return DsnInstance(digraph=dg, demands=demands)
