"""Edge lists, payment paths, reports and DOT output.

Edge-list files are ``src,dst`` lines with an optional header. Lines starting
with ``#`` are comments, except ``#!vertex,<id>,<kind>[,<parent>]`` which
carries vertex metadata so files round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, TextIO

from .errors import StructuralInputError
from .graph_core import Digraph, VertexKind, VertexRecord, build_digraph, is_infinite

DIRECTIVE = "#!vertex"
SENDER_SUFFIX = "#snd"
RECEIVER_SUFFIX = "#rcv"


def _lines(stream: TextIO | Iterable[str]):
    for lineno, raw in enumerate(stream, start=1):
        yield lineno, raw.rstrip("\r\n")


def _split(line: str, lineno: int) -> list[str]:
    try:
        return [f.strip() for f in next(csv.reader([line]))]
    except (csv.Error, StopIteration) as exc:
        raise StructuralInputError(f"line {lineno}: {exc}") from None


def parse_edge_list(stream: TextIO | Iterable[str]) -> Digraph:
    edges: list[tuple[str, str]] = []
    meta: dict[str, VertexRecord] = {}
    seen_data = False
    for lineno, line in _lines(stream):
        if not line.strip():
            continue
        if line.startswith(DIRECTIVE):
            fields = _split(line, lineno)
            if len(fields) not in (3, 4) or not fields[1]:
                raise StructuralInputError(f"line {lineno}: bad vertex directive")
            try:
                kind = VertexKind(fields[2])
            except ValueError:
                raise StructuralInputError(f"line {lineno}: unknown kind {fields[2]!r}") from None
            parent = fields[3] if len(fields) == 4 and fields[3] else None
            meta[fields[1]] = VertexRecord(fields[1], kind, parent)
            continue
        if line.lstrip().startswith("#"):
            continue
        fields = _split(line, lineno)
        if not seen_data and [f.lower() for f in fields] == ["src", "dst"]:
            seen_data = True
            continue
        seen_data = True
        if len(fields) != 2 or not all(fields):
            raise StructuralInputError(f"line {lineno}: expected 'src,dst', got {line!r}")
        if fields[0] == fields[1]:
            raise StructuralInputError(f"line {lineno}: self-loop on {fields[0]!r}")
        edges.append((fields[0], fields[1]))
    try:
        return build_digraph(edges, meta.values())
    except StructuralInputError as exc:
        raise StructuralInputError(f"edge list: {exc}") from None


def write_edge_list(g: Digraph, stream: TextIO) -> None:
    """Write ``g`` so that :func:`parse_edge_list` rebuilds it exactly."""
    out = csv.writer(stream, lineterminator="\n")
    for v in g.vertices:
        rec = g.records[v]
        tail = [rec.parent_id] if rec.parent_id else []
        out.writerow([DIRECTIVE, v, rec.kind.value, *tail])
    out.writerow(["src", "dst"])
    out.writerows(g.edges())


def edge_list_text(g: Digraph) -> str:
    buf = io.StringIO()
    write_edge_list(g, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class PaymentRecord:
    sender: str
    receiver: str
    path: tuple[str, ...]


def parse_payment_paths(stream: TextIO | Iterable[str]) -> tuple[Digraph, list[PaymentRecord]]:
    """Build the payment digraph from ``sender,receiver,b1|b2|...`` lines.

    Senders and receivers become customers. An id used both as a sender and
    as a receiver anywhere in the input is split into ``id#snd`` and
    ``id#rcv`` so that no customer is both source and sink.
    """
    raw: list[tuple[int, str, str, tuple[str, ...]]] = []
    for lineno, line in _lines(stream):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = _split(line, lineno)
        if [f.lower() for f in fields] == ["sender", "receiver", "path"]:
            continue
        if len(fields) != 3 or not fields[0] or not fields[1]:
            raise StructuralInputError(f"line {lineno}: expected 'sender,receiver,path'")
        path = tuple(b.strip() for b in fields[2].split("|")) if fields[2] else ()
        if not path or not all(path):
            raise StructuralInputError(f"line {lineno}: empty payment path")
        raw.append((lineno, fields[0], fields[1], path))

    senders = {s for _, s, _, _ in raw}
    receivers = {r for _, _, r, _ in raw}
    banks = {b for *_, path in raw for b in path}
    split = senders & receivers
    clash = (senders | receivers) & banks
    if clash:
        raise StructuralInputError(f"ids used both as customer and bank: {sorted(clash)[:5]}")

    records: list[PaymentRecord] = []
    edges: list[tuple[str, str]] = []
    meta: dict[str, VertexRecord] = {}
    for lineno, s, r, path in raw:
        s2 = s + SENDER_SUFFIX if s in split else s
        r2 = r + RECEIVER_SUFFIX if r in split else r
        for b1, b2 in zip(path, path[1:]):
            if b1 == b2:
                raise StructuralInputError(f"line {lineno}: repeated bank {b1!r} in path")
        meta[s2] = VertexRecord(s2, VertexKind.CUSTOMER)
        meta[r2] = VertexRecord(r2, VertexKind.CUSTOMER)
        chain = (s2, *path, r2)
        edges.extend(zip(chain, chain[1:]))
        records.append(PaymentRecord(s2, r2, path))
    return build_digraph(edges, meta.values()), records


def looks_like_payment_paths(text: str) -> bool:
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        fields = s.split(",")
        if [f.strip().lower() for f in fields] == ["src", "dst"]:
            return False
        return len(fields) == 3
    return False


def read_graph(text: str) -> Digraph:
    """Parse either format, chosen by the first data line."""
    lines = text.splitlines(keepends=True)
    if looks_like_payment_paths(text):
        return parse_payment_paths(lines)[0]
    return parse_edge_list(lines)


# ---- reports ------------------------------------------------------------------


def _normalise(value: Any) -> Any:
    if value is None:
        return None
    if is_infinite(value):
        return "infinite"
    if isinstance(value, bool):
        return value
    if isinstance(value, (Fraction, float)):
        return float(f"{float(value):.12g}")
    if isinstance(value, int):
        return value
    if hasattr(value, "value") and isinstance(value.value, str):  # enums
        return value.value
    if isinstance(value, Mapping):
        return {str(k): _normalise(v) for k, v in value.items() if v is not None}
    if isinstance(value, (set, frozenset)):
        return sorted(_normalise(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_normalise(v) for v in value]
    return str(value)


def emit_report(sections: Mapping[str, Any], fmt: str = "json") -> str:
    """Serialise report sections; ``None`` sections are left out.

    Floats keep 12 significant digits and keys are sorted, so identical
    inputs give byte-identical output.
    """
    doc = {k: _normalise(v) for k, v in sections.items() if v is not None}
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        out: list[str] = []
        _flatten(doc, "", out)
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def _flatten(node: Any, prefix: str, out: list[str]) -> None:
    if isinstance(node, dict):
        for k in sorted(node):
            _flatten(node[k], f"{prefix}.{k}" if prefix else k, out)
    else:
        out.append(f"{prefix} = {json.dumps(node, ensure_ascii=False)}")


# ---- DOT ----------------------------------------------------------------------


def _quote(v: str) -> str:
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    g: Digraph,
    *,
    gscc: Iterable[str] = (),
    roles: Mapping[str, Iterable[Any]] | None = None,
    name: str = "cbnet",
) -> str:
    """Render ``g`` as a DOT digraph, one statement per vertex and edge."""
    hot = set(gscc)
    lines = [f"digraph {_quote(name)} {{"]
    for v in g.vertices:
        attrs = {"shape": "box" if g.kind(v) is VertexKind.CUSTOMER else "ellipse"}
        if v in hot:
            attrs.update(style="filled", fillcolor="tomato", gscc="true")
        if roles and roles.get(v):
            attrs["roles"] = ";".join(sorted(_normalise(r) for r in roles[v]))
        body = ", ".join(f"{k}={_quote(str(x))}" for k, x in sorted(attrs.items()))
        lines.append(f"  {_quote(v)} [{body}];")
    for u, v in g.edges():
        lines.append(f"  {_quote(u)} -> {_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
