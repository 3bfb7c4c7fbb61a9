"""Render workflows for human inspection: dot graphs, stacked-panel SVG, text.

The renderings share one builder that traces wires through the diagram. Each
sheet lifetime becomes a segment: filters close a segment and open two, unions
close two and open one. Swaps only reroute wires and produce no node, so the
dot output reflects the dataflow topology rather than the slice syntax.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .ediagram import CopyGen, DiscardGen, SwapGen
from .errors import DiagramError
from .fdiagram import (
    EmptyGen,
    FilterGen,
    FMorphism,
    LiftGen,
    SheetSwapGen,
    UnionGen,
    f_typecheck,
)
from .signature import Signature

EXPORT_FORMATS = ("dot", "layered-svg", "text")


@dataclass(frozen=True)
class DiagramExport:
    format: str
    content: str


class _Builder:
    def __init__(self, sig: Signature, m: FMorphism):
        f_typecheck(sig, m)
        self.sig = sig
        self.m = m
        self.nodes: list[tuple[str, str, str, int | None]] = []
        self.edges: list[tuple[str, str, str]] = []
        self.segments: list[dict] = []
        self._build()

    def _node(self, label: str, kind: str, seg: int | None) -> str:
        nid = f"n{len(self.nodes)}"
        self.nodes.append((nid, label, kind, seg))
        return nid

    def _segment(self, schema, origin: str) -> int:
        self.segments.append({"schema": tuple(schema), "events": [origin]})
        return len(self.segments) - 1

    def _entries(self, seg: int, schema) -> list[tuple[str, str]]:
        return [(self._node(f"col {j + 1}", "port", seg), t) for j, t in enumerate(schema)]

    def _apply_lift(self, seg: int, wires, morphism):
        events = self.segments[seg]["events"]
        for sl in morphism.slices:
            off, gen = sl.offset, sl.gen
            if isinstance(gen, CopyGen):
                nid = self._node("copy", "copy", seg)
                self.edges.append((wires[off][0], nid, gen.type))
                wires[off : off + 1] = [(nid, gen.type), (nid, gen.type)]
                events.append(f"copy col {off + 1}")
            elif isinstance(gen, DiscardGen):
                nid = self._node("discard", "discard", seg)
                self.edges.append((wires[off][0], nid, gen.type))
                del wires[off]
                events.append(f"discard col {off + 1}")
            elif isinstance(gen, SwapGen):
                wires[off], wires[off + 1] = wires[off + 1], wires[off]
                events.append(f"swap cols {off + 1},{off + 2}")
            else:
                decl = self.sig.operation(gen.name)
                nid = self._node(gen.name, "op", seg)
                for src, t in wires[off : off + len(decl.dom)]:
                    self.edges.append((src, nid, t))
                wires[off : off + len(decl.dom)] = [(nid, t) for t in decl.cod]
                events.append(f"apply {gen.name} at col {off + 1}")
        return wires

    def _build(self):
        sheets = []
        for schema in self.m.dom:
            seg = self._segment(schema, "input sheet")
            sheets.append((seg, self._entries(seg, schema)))
        for sl in self.m.slices:
            s, gen = sl.sheet, sl.gen
            if isinstance(gen, LiftGen):
                seg, wires = sheets[s]
                sheets[s] = (seg, self._apply_lift(seg, list(wires), gen.morphism))
            elif isinstance(gen, FilterGen):
                seg, wires = sheets[s]
                arity = len(self.sig.filter(gen.name).dom)
                fid = self._node(f"filter {gen.name}", "filter", None)
                for src, t in wires[:arity]:
                    self.edges.append((src, fid, t))
                self.segments[seg]["events"].append(f"split by {gen.name}")
                schema = self.segments[seg]["schema"] if not wires else tuple(
                    t for _, t in wires
                )
                children = []
                for side in ("accept", "reject"):
                    child = self._segment(schema, f"{side} of {gen.name}")
                    entries = self._entries(child, schema)
                    for j, (entry, t) in enumerate(entries):
                        source = fid if j < arity else wires[j][0]
                        self.edges.append((source, entry, t))
                    children.append((child, entries))
                sheets[s : s + 1] = children
            elif isinstance(gen, UnionGen):
                (seg_a, wires_a), (seg_b, wires_b) = sheets[s], sheets[s + 1]
                uid = self._node("union", "union", None)
                for src, t in list(wires_a) + list(wires_b):
                    self.edges.append((src, uid, t))
                child = self._segment(gen.sheet, "union")
                entries = self._entries(child, gen.sheet)
                for entry, t in entries:
                    self.edges.append((uid, entry, t))
                sheets[s : s + 2] = [(child, entries)]
            elif isinstance(gen, EmptyGen):
                child = self._segment(gen.sheet, "empty table")
                sheets.insert(s, (child, self._entries(child, gen.sheet)))
            elif isinstance(gen, SheetSwapGen):
                sheets[s], sheets[s + 1] = sheets[s + 1], sheets[s]
            else:
                raise DiagramError(f"unknown generator {gen!r}")
        for seg, wires in sheets:
            self.segments[seg]["events"].append("output sheet")
            for j, (src, t) in enumerate(wires):
                out = self._node(f"out {j + 1}", "port", seg)
                self.edges.append((src, out, t))


def _render_dot(b: _Builder) -> str:
    lines = ["digraph workflow {", "  rankdir=TB;"]
    shapes = {"port": "plaintext", "op": "box", "copy": "point", "discard": "point",
              "filter": "diamond", "union": "invtriangle"}
    for seg_id, seg in enumerate(b.segments):
        lines.append(f"  subgraph cluster_s{seg_id} {{")
        schema = ",".join(seg["schema"]) or "I"
        lines.append(f'    label="sheet {seg_id} [{schema}]";')
        for nid, label, kind, owner in b.nodes:
            if owner == seg_id:
                lines.append(f'    {nid} [label="{label}", shape={shapes[kind]}];')
        lines.append("  }")
    for nid, label, kind, owner in b.nodes:
        if owner is None:
            lines.append(f'  {nid} [label="{label}", shape={shapes[kind]}];')
    for src, dst, t in b.edges:
        lines.append(f'  {src} -> {dst} [label="{t}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _render_svg(b: _Builder) -> str:
    panel_w, line_h, pad = 360, 16, 10
    panels = []
    y = pad
    for seg_id, seg in enumerate(b.segments):
        schema = ",".join(seg["schema"]) or "I"
        rows = [f"sheet {seg_id} [{schema}]"] + seg["events"]
        height = line_h * (len(rows) + 1)
        panels.append((y, rows))
        y += height + pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{panel_w + 2 * pad}" '
        f'height="{y}" font-family="monospace" font-size="12">'
    ]
    for y0, rows in panels:
        height = line_h * (len(rows) + 1)
        parts.append(
            f'<g class="panel"><rect x="{pad}" y="{y0}" width="{panel_w}" '
            f'height="{height}" fill="none" stroke="black"/>'
        )
        for i, row in enumerate(rows):
            parts.append(
                f'<text x="{2 * pad}" y="{y0 + line_h * (i + 1)}">{escape(row)}</text>'
            )
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_text(b: _Builder) -> str:
    lines = []
    for seg_id, seg in enumerate(b.segments):
        schema = ",".join(seg["schema"]) or "I"
        lines.append(f"sheet {seg_id} [{schema}]")
        for event in seg["events"]:
            lines.append(f"  {event}")
    return "\n".join(lines) + "\n"


def export_diagram(sig: Signature, m: FMorphism, fmt: str) -> DiagramExport:
    if fmt not in EXPORT_FORMATS:
        raise DiagramError(f"unknown export format {fmt!r}; use one of {EXPORT_FORMATS}")
    builder = _Builder(sig, m)
    if fmt == "dot":
        return DiagramExport("dot", _render_dot(builder))
    if fmt == "layered-svg":
        return DiagramExport("layered-svg", _render_svg(builder))
    return DiagramExport("text", _render_text(builder))
