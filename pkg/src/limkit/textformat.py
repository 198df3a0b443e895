"""Line-oriented sectioned input format.

::

    # comments run to the end of the line
    [poset]
    orientation = increasing
    a : 0
    b : 1
    a -> b

    [diagram]
    group a = free 1
    group b = free 1 torsion 2,3
    map a->b = [[1],[0],[0]]

    [group-diagram]
    g0 = builtin S3
    object x = sub [1,0,2]
    object y = perms [1,0]
    cone y = [1,0,2]
    map x->y = [1,0]

    [covering]
    J top 1 = u v

    [global]
    K 0 = u

    [group]
    group = perms [1,0,2] [1,2,0]

Group elements are written as integer lists (see
:meth:`limkit.webb.FiniteGroup.element_index`).  A group is given as
``builtin NAME``, ``perms P1 P2 ...`` or ``table [[...], ...]``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator

from .covering import CoveringFamily, GlobalFamily
from .diagram import AbDiagram
from .errors import InputDimensionMismatch, InputSyntaxError, InvalidInput, UnknownReference
from .exactalg import IntMatrix, PresentedGroup
from .fiber import GroupDiagram
from .poset import GradedPoset
from .webb import FiniteGroup, builtin_group

Token = tuple[int, ...]
GroupSpec = tuple  # ("builtin", name) | ("perms", (perm, ...)) | ("table", (row, ...))

SECTIONS = ("poset", "diagram", "group-diagram", "covering", "global", "group")

_NAME = r"[^\s:=]+?"
_RE_SECTION = re.compile(r"^\[([A-Za-z-]+)\]$")
_RE_OBJECT = re.compile(rf"^({_NAME})\s*:\s*(-?\d+)$")
_RE_ARROW = re.compile(rf"^({_NAME})\s*->\s*({_NAME})$")
_RE_ORIENT = re.compile(r"^orientation\s*=\s*(\S+)$")
_RE_GROUP = re.compile(rf"^group\s+({_NAME})\s*=\s*free\s+(\d+)(?:\s+torsion\s+([\d,\s]*))?$")
_RE_MAP = re.compile(rf"^map\s+({_NAME})\s*->\s*({_NAME})\s*=\s*(.*)$")
_RE_G0 = re.compile(r"^g0\s*=\s*(.*)$")
_RE_GOBJ = re.compile(rf"^object\s+({_NAME})\s*=\s*(.*)$")
_RE_CONE = re.compile(rf"^cone\s+({_NAME})\s*=\s*(.*)$")
_RE_J = re.compile(rf"^J\s+({_NAME})\s+(\d+)\s*=\s*(.*)$")
_RE_K = re.compile(r"^K\s+(\d+)\s*=\s*(.*)$")
_RE_GRP = re.compile(r"^group\s*=\s*(.*)$")
_RE_TOKEN = re.compile(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\]")


@dataclass
class InputDocument:
    orientation: str | None = None
    objects: list[tuple[str, int]] = field(default_factory=list)
    arrows: list[tuple[str, str]] = field(default_factory=list)
    groups: dict[str, tuple[int, tuple[int, ...]]] = field(default_factory=dict)
    maps: dict[tuple[str, str], tuple[tuple[int, ...], ...]] = field(default_factory=dict)
    g0: GroupSpec | None = None
    gd_objects: dict[str, tuple] = field(default_factory=dict)
    gd_cone: dict[str, tuple[Token, ...]] = field(default_factory=dict)
    gd_maps: dict[tuple[str, str], tuple[Token, ...]] = field(default_factory=dict)
    covering: dict[tuple[str, int], tuple[str, ...]] = field(default_factory=dict)
    global_: dict[int, tuple[str, ...]] = field(default_factory=dict)
    group: GroupSpec | None = None
    sections: list[str] = field(default_factory=list)
    where: dict = field(default_factory=dict, compare=False, repr=False)

    # -- builders -------------------------------------------------------------

    def poset(self) -> GradedPoset:
        if not self.objects:
            raise InvalidInput("input has no [poset] objects")
        return GradedPoset(tuple(self.objects), tuple(self.arrows), self.orientation or "increasing")

    def diagram(self, base: GradedPoset | None = None) -> AbDiagram:
        """The ``[diagram]`` section, or ``c_Z`` when there is none."""
        base = base or self.poset()
        if "diagram" not in self.sections:
            return AbDiagram.constant(base)
        values = {n: _presented(*self.groups.get(n, (0, ()))) for n in base.names}
        maps = {}
        for a, b in base.degree_one_arrows:
            rows = self.maps.get((a, b))
            na, nb = values[a].ngens, values[b].ngens
            maps[(a, b)] = IntMatrix.from_rows([list(r) for r in rows], na) if rows else IntMatrix.zeros(nb, na)
        return AbDiagram(base, values, maps)

    def group_diagram(self, base: GradedPoset | None = None, g0: FiniteGroup | None = None) -> GroupDiagram:
        base = base or self.poset()
        if g0 is None:
            if self.g0 is None:
                raise InvalidInput("no g0 given in [group-diagram] or on the command line")
            g0 = build_group(self.g0, "G0")
        subs = {n: spec for n, spec in self.gd_objects.items() if spec[0] == "sub"}
        if len(subs) == len(base.names) and not self.gd_maps and not self.gd_cone:
            return GroupDiagram.from_subgroups(base, g0, {n: [g0.element_index(t) for t in s[1]] for n, s in subs.items()})
        groups, gens, cone = {}, {}, {}
        for n in base.names:
            spec = self.gd_objects.get(n)
            if spec is None:
                raise InvalidInput(f"no group given for {n}")
            if spec[0] == "sub":
                h = sorted(g0.closure(g0.element_index(t) for t in spec[1]))
                idx = {x: k for k, x in enumerate(h)}
                table = tuple(tuple(idx[g0.mul(a, b)] for b in h) for a in h)
                groups[n] = FiniteGroup(table, idx[g0.identity], n, None, tuple(tuple(g0.element_token(x)) for x in h))
                gens[n] = list(range(len(h)))
                cone[n] = tuple(h)
                continue
            g = build_group(spec, n)
            groups[n] = g
            gens[n] = _generator_indices(g, spec)
            if n not in self.gd_cone:
                raise InvalidInput(f"no cone images given for {n}")
            imgs = [g0.element_index(t) for t in self.gd_cone[n]]
            cone[n] = g.hom_from_images(gens[n], g0, imgs)
        maps = {}
        for a, b in base.degree_one_arrows:
            if (a, b) in self.gd_maps:
                imgs = [groups[b].element_index(t) for t in self.gd_maps[(a, b)]]
                maps[(a, b)] = groups[a].hom_from_images(gens[a], groups[b], imgs)
            else:
                # Determined by the cone when it is monic.
                pos = {x: k for k, x in enumerate(cone[b])}
                try:
                    maps[(a, b)] = tuple(pos[x] for x in cone[a])
                except KeyError:
                    raise InvalidInput(f"no map given for {a}->{b} and the cone does not determine one") from None
        return GroupDiagram(base, groups, maps, g0, cone)

    def covering_family(self, base: GradedPoset) -> CoveringFamily:
        data: dict[str, dict[int, list[str]]] = {}
        for (n, q), names in self.covering.items():
            data.setdefault(n, {})[q] = list(names)
        return CoveringFamily.from_mapping(base, data)

    def global_family(self, base: GradedPoset) -> GlobalFamily:
        return GlobalFamily.from_mapping(base, {q: list(v) for q, v in self.global_.items()})


def _presented(free: int, torsion: tuple[int, ...]) -> PresentedGroup:
    n = free + len(torsion)
    cols = []
    for k, d in enumerate(torsion):
        c = [0] * n
        c[free + k] = d
        cols.append(c)
    return PresentedGroup(n, IntMatrix.from_columns(cols, n) if cols else IntMatrix.zeros(n, 0))


def build_group(spec: GroupSpec, name: str = "G") -> FiniteGroup:
    kind, data = spec
    if kind == "builtin":
        return builtin_group(data)
    if kind == "perms":
        return FiniteGroup.from_permutations([list(p) for p in data], name)
    if kind == "table":
        rows = tuple(tuple(r) for r in data)
        return FiniteGroup(rows, _table_identity(rows), name)
    raise InvalidInput(f"unknown group kind {kind!r}")


def _table_identity(rows) -> int:
    for e in range(len(rows)):
        if all(rows[e][a] == a for a in range(len(rows))):
            return e
    raise InvalidInput("multiplication table has no identity")


def _generator_indices(g: FiniteGroup, spec: GroupSpec) -> list[int]:
    if spec[0] == "perms":
        return [g.element_index(p) for p in spec[1]]
    return list(range(g.order))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _lines(text: str) -> Iterator[tuple[int, int, str]]:
    for k, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if stripped:
            yield k, len(body) - len(body.lstrip()) + 1, stripped


def _tokens(s: str, line: int, col: int) -> tuple[Token, ...]:
    out, pos = [], 0
    for m in _RE_TOKEN.finditer(s):
        if s[pos : m.start()].strip():
            raise InputSyntaxError(f"expected an element like [1,0,2], found {s[pos:m.start()].strip()!r}", line, col + pos)
        out.append(tuple(int(x) for x in m.group(1).split(",")) if m.group(1) else ())
        pos = m.end()
    if s[pos:].strip():
        raise InputSyntaxError(f"expected an element like [1,0,2], found {s[pos:].strip()!r}", line, col + pos)
    return tuple(out)


def _group_spec(s: str, line: int, col: int) -> GroupSpec:
    head, _, rest = s.partition(" ")
    rest = rest.strip()
    if head == "builtin" and rest:
        return ("builtin", rest)
    if head == "perms":
        return ("perms", _tokens(rest, line, col + len(head) + 1))
    if head == "table":
        try:
            rows = json.loads(rest)
            return ("table", tuple(tuple(int(x) for x in r) for r in rows))
        except (ValueError, TypeError):
            raise InputSyntaxError("table must be a JSON list of integer rows", line, col + len(head) + 1) from None
    raise InputSyntaxError("group must be 'builtin NAME', 'perms [..] ...' or 'table [[..]]'", line, col)


def _matrix(s: str, line: int, col: int) -> tuple[tuple[int, ...], ...]:
    try:
        rows = json.loads(s)
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ValueError
        return tuple(tuple(int(x) for x in r) for r in rows)
    except (ValueError, TypeError):
        raise InputSyntaxError("matrix must look like [[1,0],[0,1]]", line, col) from None


def parse(text: str) -> InputDocument:
    """Parse input text; the first error raises with its line and column."""
    doc = InputDocument()
    section = None
    where = doc.where
    for line, col, s in _lines(text):
        m = _RE_SECTION.match(s)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise InputSyntaxError(f"unknown section [{section}]", line, col)
            if section in doc.sections:
                raise InputSyntaxError(f"section [{section}] appears twice", line, col)
            doc.sections.append(section)
            continue
        if section is None:
            raise InputSyntaxError("content before the first [section]", line, col)
        _parse_line(doc, section, s, line, col, where)
    _check_references(doc)
    return doc


def _parse_line(doc: InputDocument, section: str, s: str, line: int, col: int, where: dict) -> None:
    if section == "poset":
        if m := _RE_ORIENT.match(s):
            if m.group(1) not in ("increasing", "decreasing"):
                raise InputSyntaxError("orientation must be increasing or decreasing", line, col + m.start(1))
            doc.orientation = m.group(1)
        elif m := _RE_ARROW.match(s):
            doc.arrows.append((m.group(1), m.group(2)))
            where[("arrow", m.group(1), m.group(2))] = (line, col)
        elif m := _RE_OBJECT.match(s):
            if any(n == m.group(1) for n, _ in doc.objects):
                raise InputSyntaxError(f"object {m.group(1)} declared twice", line, col)
            doc.objects.append((m.group(1), int(m.group(2))))
        else:
            raise InputSyntaxError("expected 'name : degree', 'a -> b' or 'orientation = ...'", line, col)
    elif section == "diagram":
        if m := _RE_GROUP.match(s):
            tors = tuple(int(x) for x in (m.group(3) or "").replace(" ", "").split(",") if x)
            doc.groups[m.group(1)] = (int(m.group(2)), tors)
            where[("group", m.group(1))] = (line, col + m.start(1))
        elif m := _RE_MAP.match(s):
            key = (m.group(1), m.group(2))
            doc.maps[key] = _matrix(m.group(3), line, col + m.start(3))
            where[("map",) + key] = (line, col + m.start(1))
        else:
            raise InputSyntaxError("expected 'group NAME = free R [torsion D,...]' or 'map A->B = [[..]]'", line, col)
    elif section == "group-diagram":
        if m := _RE_G0.match(s):
            doc.g0 = _group_spec(m.group(1), line, col + m.start(1))
        elif m := _RE_GOBJ.match(s):
            rest = m.group(2)
            if rest == "sub" or rest.startswith("sub "):
                doc.gd_objects[m.group(1)] = ("sub", _tokens(rest[3:], line, col + m.start(2) + 3))
            else:
                doc.gd_objects[m.group(1)] = _group_spec(rest, line, col + m.start(2))
            where[("gobj", m.group(1))] = (line, col + m.start(1))
        elif m := _RE_CONE.match(s):
            doc.gd_cone[m.group(1)] = _tokens(m.group(2), line, col + m.start(2))
            where[("cone", m.group(1))] = (line, col + m.start(1))
        elif m := _RE_MAP.match(s):
            key = (m.group(1), m.group(2))
            doc.gd_maps[key] = _tokens(m.group(3), line, col + m.start(3))
            where[("gmap",) + key] = (line, col + m.start(1))
        else:
            raise InputSyntaxError("expected 'g0 = ...', 'object N = ...', 'cone N = ...' or 'map A->B = ...'", line, col)
    elif section == "covering":
        if m := _RE_J.match(s):
            doc.covering[(m.group(1), int(m.group(2)))] = tuple(m.group(3).split())
            where[("J", m.group(1), int(m.group(2)))] = (line, col)
        else:
            raise InputSyntaxError("expected 'J OBJECT P = NAMES...'", line, col)
    elif section == "global":
        if m := _RE_K.match(s):
            doc.global_[int(m.group(1))] = tuple(m.group(2).split())
            where[("K", int(m.group(1)))] = (line, col)
        else:
            raise InputSyntaxError("expected 'K P = NAMES...'", line, col)
    elif section == "group":
        if m := _RE_GRP.match(s):
            doc.group = _group_spec(m.group(1), line, col + m.start(1))
        else:
            raise InputSyntaxError("expected 'group = builtin NAME | perms ... | table ...'", line, col)


def _check_references(doc: InputDocument) -> None:
    known = {n for n, _ in doc.objects}
    if not known:
        return
    w = doc.where

    def need(name: str, key) -> None:
        if name not in known:
            line, col = w.get(key, (0, 0))
            raise UnknownReference(f"unknown object {name!r}", line, col)

    for a, b in doc.arrows:
        need(a, ("arrow", a, b))
        need(b, ("arrow", a, b))
    for n in doc.groups:
        need(n, ("group", n))
    for (a, b), rows in doc.maps.items():
        need(a, ("map", a, b))
        need(b, ("map", a, b))
        if (a, b) not in set(doc.arrows):
            line, col = w[("map", a, b)]
            raise UnknownReference(f"{a}->{b} is not a declared arrow", line, col)
        na = sum(x if k == 0 else len(x) for k, x in enumerate(doc.groups.get(a, (0, ()))))
        nb = sum(x if k == 0 else len(x) for k, x in enumerate(doc.groups.get(b, (0, ()))))
        if len(rows) != nb or any(len(r) != na for r in rows):
            line, col = w[("map", a, b)]
            got = f"{len(rows)}x{len(rows[0]) if rows else 0}"
            raise InputDimensionMismatch(f"map {a}->{b} must be {nb}x{na}, got {got}", line, col)
    for n in doc.gd_objects:
        need(n, ("gobj", n))
    for n in doc.gd_cone:
        need(n, ("cone", n))
    for a, b in doc.gd_maps:
        need(a, ("gmap", a, b))
        need(b, ("gmap", a, b))
    for (n, q), names in doc.covering.items():
        need(n, ("J", n, q))
        for x in names:
            need(x, ("J", n, q))
    for q, names in doc.global_.items():
        for x in names:
            need(x, ("K", q))


# ---------------------------------------------------------------------------
# Emitting
# ---------------------------------------------------------------------------


def _fmt_tokens(ts) -> str:
    return " ".join("[" + ",".join(str(x) for x in t) + "]" for t in ts)


def _fmt_spec(spec: GroupSpec) -> str:
    kind, data = spec
    if kind == "builtin":
        return f"builtin {data}"
    if kind == "perms":
        return "perms " + _fmt_tokens(data)
    return "table " + json.dumps([list(r) for r in data], separators=(",", ":"))


def emit(doc: InputDocument) -> str:
    """Canonical text; ``parse(emit(doc)) == doc``."""
    out: list[str] = []
    for sec in doc.sections:
        out.append(f"[{sec}]")
        if sec == "poset":
            if doc.orientation:
                out.append(f"orientation = {doc.orientation}")
            out += [f"{n} : {d}" for n, d in doc.objects]
            out += [f"{a} -> {b}" for a, b in doc.arrows]
        elif sec == "diagram":
            for n, (free, tors) in doc.groups.items():
                t = f" torsion {','.join(str(x) for x in tors)}" if tors else ""
                out.append(f"group {n} = free {free}{t}")
            for (a, b), rows in doc.maps.items():
                out.append(f"map {a}->{b} = " + json.dumps([list(r) for r in rows], separators=(",", ":")))
        elif sec == "group-diagram":
            if doc.g0 is not None:
                out.append(f"g0 = {_fmt_spec(doc.g0)}")
            for n, spec in doc.gd_objects.items():
                body = ("sub " + _fmt_tokens(spec[1])).rstrip() if spec[0] == "sub" else _fmt_spec(spec)
                out.append(f"object {n} = {body}")
            for n, ts in doc.gd_cone.items():
                out.append(f"cone {n} = {_fmt_tokens(ts)}")
            for (a, b), ts in doc.gd_maps.items():
                out.append(f"map {a}->{b} = {_fmt_tokens(ts)}")
        elif sec == "covering":
            for (n, q), names in doc.covering.items():
                out.append(f"J {n} {q} = {' '.join(names)}".rstrip())
        elif sec == "global":
            for q, names in doc.global_.items():
                out.append(f"K {q} = {' '.join(names)}".rstrip())
        elif sec == "group" and doc.group is not None:
            out.append(f"group = {_fmt_spec(doc.group)}")
        out.append("")
    return "\n".join(out)


def document_from_poset(p: GradedPoset) -> InputDocument:
    """A ``[poset]`` document for an existing poset."""
    return InputDocument(p.orientation, list(p.objects), list(p.cover_arrows), sections=["poset"])
