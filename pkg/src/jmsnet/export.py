"""GraphML, Graphviz DOT and CSV writers for semantic graphs."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Literal
from xml.etree import ElementTree as ET

from .graphmetrics import GraphMetricsReport, normalized_betweenness
from .semnet import SemanticGraph

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_NODE_KEYS = (
    ("frequency", "int"),
    ("community", "int"),
    ("betweenness", "double"),
    ("betweenness_normalized", "double"),
)


def _fmt(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def node_table(graph: SemanticGraph, metrics: GraphMetricsReport) -> list[dict]:
    communities = metrics.partition.labels.tolist() if metrics.partition is not None \
        else [-1] * graph.n
    norm = normalized_betweenness(metrics.betweenness)
    return [
        {
            "id": node,
            "frequency": int(freq),
            "community": int(comm),
            "betweenness": float(metrics.betweenness[node]),
            "betweenness_normalized": float(norm[node]),
        }
        for node, freq, comm in zip(graph.nodes, graph.frequency.tolist(), communities)
    ]


def graphml_string(graph: SemanticGraph, metrics: GraphMetricsReport) -> str:
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(f"{{{GRAPHML_NS}}}graphml")
    for name, kind in _NODE_KEYS:
        ET.SubElement(root, f"{{{GRAPHML_NS}}}key", id=name, attrib={
            "for": "node", "attr.name": name, "attr.type": kind})
    ET.SubElement(root, f"{{{GRAPHML_NS}}}key", id="weight", attrib={
        "for": "edge", "attr.name": "weight", "attr.type": "double"})
    g = ET.SubElement(root, f"{{{GRAPHML_NS}}}graph", id="G", edgedefault="directed")
    for row in node_table(graph, metrics):
        node = ET.SubElement(g, f"{{{GRAPHML_NS}}}node", id=row["id"])
        for name, kind in _NODE_KEYS:
            data = ET.SubElement(node, f"{{{GRAPHML_NS}}}data", key=name)
            data.text = str(row[name]) if kind == "int" else repr(row[name])
    for k, (u, v, w) in enumerate(graph.edges()):
        edge = ET.SubElement(g, f"{{{GRAPHML_NS}}}edge", id=f"e{k}", source=u, target=v)
        ET.SubElement(edge, f"{{{GRAPHML_NS}}}data", key="weight").text = repr(float(w))
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_string(graph: SemanticGraph, metrics: GraphMetricsReport, name: str = "G") -> str:
    lines = [f"digraph {_dot_id(name)} {{"]
    for row in node_table(graph, metrics):
        attrs = ", ".join(
            f"{key}={row[key]}" if kind == "int" else f'{key}="{row[key]!r}"'
            for key, kind in _NODE_KEYS
        )
        lines.append(f"  {_dot_id(row['id'])} [{attrs}];")
    for u, v, w in graph.edges():
        lines.append(f"  {_dot_id(u)} -> {_dot_id(v)} [weight={_fmt(w)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def nodes_csv_string(graph: SemanticGraph, metrics: GraphMetricsReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["id"] + [k for k, _ in _NODE_KEYS],
                            lineterminator="\n")
    writer.writeheader()
    for row in node_table(graph, metrics):
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def export_graph(graph: SemanticGraph, metrics: GraphMetricsReport, path: str | Path,
                 format: Literal["graphml", "dot"] = "graphml") -> Path:
    """Write ``graph`` with per-node frequency, community and betweenness attributes."""
    if format == "graphml":
        text = graphml_string(graph, metrics)
    elif format == "dot":
        text = dot_string(graph, metrics, Path(path).stem)
    else:
        raise ValueError(f"unknown graph format {format!r}")
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
