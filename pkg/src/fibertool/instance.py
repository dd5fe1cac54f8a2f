"""The instance file format: a ring, a quotient, an ideal and a module.

Example::

    ring p=32003 vars=[x,y] order=grevlex;
    quotient (x*y);
    ideal I = (y);
    module M = cyclic (x) ++ cyclic (y);
    assert lci;
    param seed=42;

Statements end with ``;`` and ``#`` starts a comment.  A module is a sum
(``++``) of summands ``cyclic (f, ...)`` (that is ``A/(f, ...)``) and
``coker [[...], ...]`` (rows index generators, columns are relations).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .field import CoeffField
from .poly import GradingError, ParseError, PolyRing, RingSpec, parse_poly

MAX_BYTES = 1 << 20
ASSERTIONS = ("lci", "constant_rank")
INT_PARAMS = ("cutoff", "nmax", "window", "trials", "mmax", "retries", "cmax", "seed")
NAME_PARAMS = ("ideal", "module")


class UndeclaredModule(ParseError):
    pass


class UndeclaredIdeal(ParseError):
    pass


class _Text:
    """Offsets to 1-based line/column."""

    def __init__(self, text):
        self.starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(self, off):
        line = 0
        lo, hi = 0, len(self.starts) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if self.starts[mid] <= off:
                line = mid
                lo = mid + 1
            else:
                hi = mid - 1
        return line + 1, off - self.starts[line] + 1


def _strip_comments(text):
    # keep offsets stable: blank out comment bodies
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def _split_top(s, sep=","):
    """Split on ``sep`` outside brackets; yields ``(piece, offset)``."""
    depth = 0
    start = 0
    out = []
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((s[start:i], start))
            start = i + 1
    out.append((s[start:], start))
    return out


@dataclass
class Summand:
    kind: str  # "cyclic" | "coker"
    polys: list  # cyclic: generators of the ideal; coker: rows of the matrix

    def text(self) -> str:
        if self.kind == "cyclic":
            return "cyclic (" + ", ".join(map(str, self.polys)) + ")"
        rows = ", ".join("[" + ", ".join(map(str, row)) + "]" for row in self.polys)
        return f"coker [{rows}]"


@dataclass
class Instance:
    """A parsed instance ``(A, I, M)`` plus assertions and parameters."""

    ring: PolyRing
    quotient: list
    ideals: dict
    modules: dict
    assertions: set = field(default_factory=set)
    params: dict = field(default_factory=dict)

    @property
    def spec(self) -> RingSpec:
        return RingSpec(self.ring, self.quotient)

    @property
    def ideal_name(self) -> str:
        return _choose(self.params.get("ideal"), self.ideals, "ideal", UndeclaredIdeal)

    @property
    def module_name(self) -> str:
        return _choose(self.params.get("module"), self.modules, "module", UndeclaredModule)

    @property
    def I(self) -> list:
        return self.ideals[self.ideal_name]

    def module(self, A: RingSpec | None = None):
        from .modules import ModuleRep

        A = A or self.spec
        parts = []
        for s in self.modules[self.module_name]:
            if s.kind == "cyclic":
                parts.append(ModuleRep.cyclic(A, s.polys))
            else:
                parts.append(_coker(A, s.polys))
        return parts[0] if len(parts) == 1 else ModuleRep.direct_sum(parts)

    def canonical(self) -> str:
        return print_instance(self)

    def __eq__(self, other):
        return isinstance(other, Instance) and self.canonical() == other.canonical()


def _choose(name, table, what, exc):
    if name is not None:
        if name not in table:
            raise exc(f"{what} {name!r} is not declared")
        return name
    if not table:
        raise exc(f"no {what} declared")
    if len(table) > 1:
        raise exc(f"several {what}s declared; pick one with 'param {what}=<name>'")
    return next(iter(table))


def row_degrees(rows, ring: PolyRing):
    """Generator degrees making every column of the matrix homogeneous."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    degs = [None] * nrows
    col_deg = [None] * ncols
    pending = True
    while pending:
        pending = False
        for i in range(nrows):
            for j in range(ncols):
                f = rows[i][j]
                if not f:
                    continue
                e = f.degree()
                if degs[i] is not None and col_deg[j] is None:
                    col_deg[j] = degs[i] + e
                    pending = True
                elif degs[i] is None and col_deg[j] is not None:
                    degs[i] = col_deg[j] - e
                    pending = True
                elif degs[i] is not None and degs[i] + e != col_deg[j]:
                    raise GradingError(
                        f"column {j + 1} is inhomogeneous: entry ({i + 1},{j + 1}) = {f} has degree {e}"
                    )
        if not pending and None in degs:
            degs[degs.index(None)] = 0
            pending = True
    low = min(degs, default=0)
    return [d - low for d in degs]


def _coker(A: RingSpec, rows):
    from .modules import ModuleRep

    ring = A.S
    lay = ring.layout
    degs = row_degrees(rows, ring)
    cols = []
    for j in range(len(rows[0]) if rows else 0):
        v = {}
        for i, row in enumerate(rows):
            for P, c in row[j].terms.items():
                v[P + (i << lay.pos_shift)] = c
        if v:
            cols.append(v)
    return ModuleRep.coker(A, cols, degs)


# -- parsing --

_RING = re.compile(
    r"ring\s+(?:p\s*=\s*(?P<p>\w+)|(?P<q>q))\s+vars\s*=\s*\[(?P<vars>[^\]]*)\]"
    r"(?:\s+weights\s*=\s*\[(?P<weights>[^\]]*)\])?\s+order\s*=\s*(?P<order>\w+)\s*$"
)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class _Parser:
    def __init__(self, text):
        self.raw = text
        self.pos = _Text(text)
        self.ring = None
        self.quotient = []
        self.ideals = {}
        self.modules = {}
        self.assertions = set()
        self.params = {}

    def err(self, msg, off, exc=ParseError):
        line, col = self.pos.where(off)
        return exc(msg, line, col)

    def poly(self, s, off):
        line, col = self.pos.where(off)
        p = parse_poly(self.ring, s, line, col)
        if not p.is_homogeneous():
            degs = sorted(p.degrees())
            raise GradingError(
                f"generator {p} is not homogeneous (term degrees {degs})" + f" at line {line}, column {col}"
            )
        return p

    def poly_list(self, s, off):
        s_stripped = s.strip()
        lead = off + len(s) - len(s.lstrip())
        if not (s_stripped.startswith("(") and s_stripped.endswith(")")):
            raise self.err("expected a parenthesized list", lead)
        inner = s_stripped[1:-1]
        if not inner.strip():
            return []
        return [self.poly(piece, lead + 1 + o) for piece, o in _split_top(inner)]

    def run(self):
        text = _strip_comments(self.raw)
        start = 0
        for m in re.finditer(";", text):
            self.statement(text[start : m.start()], start)
            start = m.end()
        if text[start:].strip():
            off = start + len(text[start:]) - len(text[start:].lstrip())
            raise self.err("missing ';' at end of statement", off)
        if self.ring is None:
            raise ParseError("no ring declared", 1, 1)
        inst = Instance(self.ring, self.quotient, self.ideals, self.modules, self.assertions, self.params)
        inst.module_name  # raises if no module
        inst.ideal_name
        return inst

    def statement(self, s, off):
        body = s.strip()
        if not body:
            return
        off += len(s) - len(s.lstrip())
        word = body.split(None, 1)[0]
        if word != "ring" and self.ring is None:
            raise self.err("the ring must be declared first", off)
        handler = getattr(self, "st_" + word, None)
        if handler is None:
            raise self.err(f"unknown statement {word!r}", off)
        handler(body, off)

    def st_ring(self, body, off):
        if self.ring is not None:
            raise self.err("ring declared twice", off)
        m = _RING.match(body)
        if not m:
            raise self.err("malformed ring declaration", off)
        if m.group("q"):
            F = CoeffField(None)
        else:
            p = m.group("p")
            try:
                F = CoeffField(None if p == "q" else int(p))
            except ValueError as exc:
                raise self.err(str(exc) or f"bad characteristic {p!r}", off + m.start("p")) from None
        names = [v.strip() for v in m.group("vars").split(",") if v.strip()]
        for v in names:
            if not _IDENT.match(v):
                raise self.err(f"bad variable name {v!r}", off + m.start("vars"))
        weights = None
        if m.group("weights") is not None:
            try:
                weights = [int(w) for w in m.group("weights").split(",")]
            except ValueError:
                raise self.err("weights must be integers", off + m.start("weights")) from None
        if m.group("order") != "grevlex":
            raise self.err(f"unsupported order {m.group('order')!r}", off + m.start("order"))
        try:
            self.ring = PolyRing(names, F, weights)
        except ValueError as exc:
            raise self.err(str(exc), off) from None

    def st_quotient(self, body, off):
        self.quotient.extend(p for p in self.poly_list(body[len("quotient") :], off + len("quotient")) if p)

    def _named(self, body, off, kw):
        rest = body[len(kw) :]
        if "=" not in rest:
            raise self.err(f"expected '{kw} <name> = ...'", off)
        name, value = rest.split("=", 1)
        name = name.strip()
        if not _IDENT.match(name):
            raise self.err(f"bad name {name!r}", off + len(kw))
        return name, value, off + len(kw) + len(rest.split("=", 1)[0]) + 1

    def st_ideal(self, body, off):
        name, value, voff = self._named(body, off, "ideal")
        self.ideals[name] = self.poly_list(value, voff)

    def st_module(self, body, off):
        name, value, voff = self._named(body, off, "module")
        parts = []
        start = 0
        pieces = []
        for m in re.finditer(r"\+\+", value):
            pieces.append((value[start : m.start()], voff + start))
            start = m.end()
        pieces.append((value[start:], voff + start))
        for piece, poff in pieces:
            stripped = piece.strip()
            lead = poff + len(piece) - len(piece.lstrip())
            if stripped.startswith("cyclic"):
                parts.append(Summand("cyclic", self.poly_list(stripped[6:], lead + 6)))
            elif stripped.startswith("coker"):
                parts.append(Summand("coker", self.matrix(stripped[5:], lead + 5)))
            else:
                raise self.err("expected 'cyclic (...)' or 'coker [[...]]'", lead)
        self.modules[name] = parts

    def matrix(self, s, off):
        stripped = s.strip()
        lead = off + len(s) - len(s.lstrip())
        if not (stripped.startswith("[") and stripped.endswith("]")):
            raise self.err("expected a matrix [[...], ...]", lead)
        rows = []
        for piece, o in _split_top(stripped[1:-1]):
            p = piece.strip()
            plead = lead + 1 + o + len(piece) - len(piece.lstrip())
            if not (p.startswith("[") and p.endswith("]")):
                raise self.err("expected a matrix row [...]", plead)
            rows.append([self.poly(e, plead + 1 + eo) for e, eo in _split_top(p[1:-1])])
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise self.err("matrix rows must be non-empty and of equal length", lead)
        try:
            row_degrees(rows, self.ring)
        except GradingError as exc:
            line, col = self.pos.where(lead)
            raise GradingError(f"{exc} at line {line}, column {col}") from None
        return rows

    def st_assert(self, body, off):
        what = body[len("assert") :].strip()
        if what not in ASSERTIONS:
            raise self.err(f"unknown assertion {what!r}", off)
        self.assertions.add(what)

    def st_param(self, body, off):
        rest = body[len("param") :]
        if "=" not in rest:
            raise self.err("expected 'param <key>=<value>'", off)
        key, value = (t.strip() for t in rest.split("=", 1))
        if key in INT_PARAMS:
            try:
                self.params[key] = int(value)
            except ValueError:
                raise self.err(f"parameter {key} needs an integer", off) from None
        elif key in NAME_PARAMS:
            self.params[key] = value
        else:
            raise self.err(f"unknown parameter {key!r}", off)


def parse_instance(text: str) -> Instance:
    if len(text.encode("utf-8")) > MAX_BYTES:
        raise ParseError("instance file larger than 1 MiB")
    return _Parser(text).run()


def print_instance(inst: Instance) -> str:
    R = inst.ring
    head = "ring " + ("q" if R.field.p is None else f"p={R.field.p}")
    head += " vars=[" + ",".join(R.names) + "]"
    if any(w != 1 for w in R.weights):
        head += " weights=[" + ",".join(map(str, R.weights)) + "]"
    lines = [head + " order=grevlex;"]
    if inst.quotient:
        lines.append("quotient (" + ", ".join(map(str, inst.quotient)) + ");")
    for name, gens in inst.ideals.items():
        lines.append(f"ideal {name} = (" + ", ".join(map(str, gens)) + ");")
    for name, parts in inst.modules.items():
        lines.append(f"module {name} = " + " ++ ".join(s.text() for s in parts) + ";")
    for a in sorted(inst.assertions):
        lines.append(f"assert {a};")
    for k in sorted(inst.params):
        lines.append(f"param {k}={inst.params[k]};")
    return "\n".join(lines) + "\n"
