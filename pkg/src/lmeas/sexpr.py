"""Canonical s-expression text forms for descriptors, filters, regulators,
vectors, regions and charges.

``dump_*`` produces the canonical form; ``load_*`` accepts it back, and
``dump(load(text)) == text`` for every canonical text.
"""

from __future__ import annotations

from fractions import Fraction


class SexprError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str = ""):
        self.line, self.col, self.source = line, col, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {msg}")


class Atom(str):
    line = 0
    col = 0


class Node(list):
    line = 0
    col = 0

    @property
    def head(self) -> str:
        if not self or isinstance(self[0], Node):
            raise SexprError("expected a keyword at list head", self.line, self.col)
        return self[0]


def _tokens(text: str):
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, line, col
            i, col = i + 1, col + 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "();":
            j += 1
        yield text[i:j], line, col
        col += j - i
        i = j


def parse(text: str, source: str = ""):
    """Parse every top-level form in ``text``."""
    stack = [Node()]
    for tok, line, col in _tokens(text):
        if tok == "(":
            n = Node()
            n.line, n.col = line, col
            stack.append(n)
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'", line, col, source)
            n = stack.pop()
            stack[-1].append(n)
        else:
            a = Atom(tok)
            a.line, a.col = line, col
            stack[-1].append(a)
    if len(stack) != 1:
        n = stack[-1]
        raise SexprError("unclosed '('", n.line, n.col, source)
    return list(stack[0])


def parse_one(text: str, source: str = ""):
    forms = parse(text, source)
    if len(forms) != 1:
        raise SexprError(f"expected exactly one form, found {len(forms)}", 1, 1, source)
    return forms[0]


def _err(node, msg):
    return SexprError(msg, getattr(node, "line", 0), getattr(node, "col", 0))


def _expect(node, head: str, nargs=None) -> Node:
    if not isinstance(node, Node) or not node or node.head != head:
        raise _err(node, f"expected ({head} ...)")
    if nargs is not None and len(node) - 1 != nargs:
        raise _err(node, f"({head} ...) takes {nargs} argument(s)")
    return node


def _int(a) -> int:
    if isinstance(a, Node):
        raise _err(a, "expected an integer")
    try:
        return int(a)
    except ValueError:
        raise _err(a, f"expected an integer, got {a!r}") from None


def _rat(a) -> Fraction:
    if isinstance(a, Node):
        raise _err(a, "expected a rational")
    try:
        return Fraction(a)
    except (ValueError, ZeroDivisionError):
        raise _err(a, f"expected a rational, got {a!r}") from None


def fmt_rat(q: Fraction) -> str:
    return str(Fraction(q))


# ---------------------------------------------------------------------------
# vectors and regulators


def dump_vec(v) -> str:
    return "(vec " + " ".join(fmt_rat(c) for c in v.coords) + ")"


def load_vec(node):
    from .lattice import Vec
    node = _expect(node, "vec")
    if len(node) < 2:
        raise _err(node, "a vector needs at least one coordinate")
    return Vec(_rat(a) for a in node[1:])


def dump_regulator(r) -> str:
    from . import lattice as L
    if isinstance(r, L.Harmonic):
        return f"(harmonic {dump_vec(r.c)})"
    if isinstance(r, L.Geometric):
        return f"(geometric {dump_vec(r.c)} {fmt_rat(r.rho)})"
    if isinstance(r, L.Scaled):
        return f"(scaled {dump_regulator(r.base)} {fmt_rat(r.k)})"
    if isinstance(r, L.Sum):
        return f"(sum {dump_regulator(r.r1)} {dump_regulator(r.r2)})"
    if isinstance(r, L.Shifted):
        return f"(shifted {dump_regulator(r.base)} {r.offset})"
    if isinstance(r, L.Tail):
        return f"(tail {dump_regulator(r.base)})"
    if isinstance(r, L.Capped):
        return f"(capped {dump_regulator(r.base)} {dump_vec(r.cap)})"
    raise TypeError(f"cannot serialize {type(r).__name__}")


def load_regulator(node):
    from . import lattice as L
    if not isinstance(node, Node) or not node:
        raise _err(node, "expected a regulator form")
    h = node.head
    try:
        if h == "harmonic":
            _expect(node, h, 1)
            return L.Harmonic(load_vec(node[1]))
        if h == "geometric":
            _expect(node, h, 2)
            return L.Geometric(load_vec(node[1]), _rat(node[2]))
        if h == "scaled":
            _expect(node, h, 2)
            return L.Scaled(load_regulator(node[1]), _rat(node[2]))
        if h == "sum":
            _expect(node, h, 2)
            return L.Sum(load_regulator(node[1]), load_regulator(node[2]))
        if h == "shifted":
            _expect(node, h, 2)
            return L.Shifted(load_regulator(node[1]), _int(node[2]))
        if h == "tail":
            _expect(node, h, 1)
            return L.Tail(load_regulator(node[1]))
        if h == "capped":
            _expect(node, h, 2)
            return L.Capped(load_regulator(node[1]), load_vec(node[2]))
    except SexprError:
        raise
    except ValueError as e:
        raise _err(node, str(e)) from None
    raise _err(node, f"unknown regulator form {h!r}")


# ---------------------------------------------------------------------------
# filters and descriptors


def dump_filter(f) -> str:
    from . import filters as F
    if isinstance(f, F.Singletons):
        return "(singletons)"
    if isinstance(f, F.Ranges):
        return f"(ranges {f.scale} {f.offset})"
    if isinstance(f, F.DyadicValuationBlocks):
        return "(dyadic-blocks)"
    if isinstance(f, F.TableWithTailRule):
        return "(table" + "".join(f" {t}" for t in f.table) + ")"
    raise TypeError(f"cannot serialize {type(f).__name__}")


def load_filter(node):
    from . import filters as F
    if not isinstance(node, Node) or not node:
        raise _err(node, "expected a filter form")
    h = node.head
    try:
        if h == "singletons":
            _expect(node, h, 0)
            return F.Singletons()
        if h == "ranges":
            _expect(node, h, 2)
            return F.Ranges(_int(node[1]), _int(node[2]))
        if h == "dyadic-blocks":
            _expect(node, h, 0)
            return F.DyadicValuationBlocks()
        if h == "table":
            return F.TableWithTailRule(tuple(_int(a) for a in node[1:]))
    except SexprError:
        raise
    except ValueError as e:
        raise _err(node, str(e)) from None
    raise _err(node, f"unknown filter form {h!r}")


def dump_descriptor(d) -> str:
    from . import descriptors as D
    from .filters import LeastInBlocks
    if isinstance(d, D.Finite):
        return "(finite" + "".join(f" {e}" for e in d.elems) + ")"
    if isinstance(d, D.ArithProg):
        return f"(ap {d.a} {d.d})"
    if isinstance(d, D.DyadicValuation):
        return f"(dyadic {d.v})"
    if isinstance(d, D.BlockUnion):
        return f"(blocks {dump_filter(d.filter)} {dump_descriptor(d.indices)})"
    if isinstance(d, D.Complement):
        return f"(not {dump_descriptor(d.inner)})"
    if isinstance(d, D.Union):
        return f"(or {dump_descriptor(d.left)} {dump_descriptor(d.right)})"
    if isinstance(d, D.Intersection):
        return f"(and {dump_descriptor(d.left)} {dump_descriptor(d.right)})"
    if isinstance(d, D.Predicate):
        return f"(pred {d.name})"
    if isinstance(d, LeastInBlocks):
        return f"(least {dump_filter(d.filter)} {dump_descriptor(d.inner)})"
    raise TypeError(f"cannot serialize {type(d).__name__}")


def load_descriptor(node):
    from . import descriptors as D
    from .filters import LeastInBlocks
    if not isinstance(node, Node) or not node:
        raise _err(node, "expected a set descriptor form")
    h = node.head
    try:
        if h == "finite":
            return D.Finite(tuple(_int(a) for a in node[1:]))
        if h == "ap":
            _expect(node, h, 2)
            return D.ArithProg(_int(node[1]), _int(node[2]))
        if h == "dyadic":
            _expect(node, h, 1)
            return D.DyadicValuation(_int(node[1]))
        if h == "blocks":
            _expect(node, h, 2)
            return D.BlockUnion(load_filter(node[1]), load_descriptor(node[2]))
        if h == "not":
            _expect(node, h, 1)
            return D.Complement(load_descriptor(node[1]))
        if h == "or":
            _expect(node, h, 2)
            return D.Union(load_descriptor(node[1]), load_descriptor(node[2]))
        if h == "and":
            _expect(node, h, 2)
            return D.Intersection(load_descriptor(node[1]), load_descriptor(node[2]))
        if h == "pred":
            _expect(node, h, 1)
            if node[1] not in D.PREDICATES:
                raise _err(node, f"unknown predicate {node[1]!r}")
            return D.PREDICATES[node[1]]
        if h == "least":
            _expect(node, h, 2)
            return LeastInBlocks(load_filter(node[1]), load_descriptor(node[2]))
    except SexprError:
        raise
    except ValueError as e:
        raise _err(node, str(e)) from None
    raise _err(node, f"unknown descriptor form {h!r}")


def dump_segment(s) -> str:
    return "(segment" + "".join(f" ({fmt_rat(a)} {fmt_rat(b)})" for a, b in s.intervals) + ")"


def load_segment(node):
    from .descriptors import Segment
    node = _expect(node, "segment")
    ivs = []
    for iv in node[1:]:
        if not isinstance(iv, Node) or len(iv) != 2:
            raise _err(iv, "segment intervals are (a b) pairs")
        ivs.append((_rat(iv[0]), _rat(iv[1])))
    try:
        return Segment(tuple(ivs))
    except ValueError as e:
        raise _err(node, str(e)) from None


def dump_region(r) -> str:
    return f"(region {dump_descriptor(r.atoms)} {dump_segment(r.segment)})"


def load_region(node):
    from .descriptors import Region, as_region
    if isinstance(node, Node) and node and node.head == "region":
        _expect(node, "region", 2)
        return Region(load_descriptor(node[1]), load_segment(node[2]))
    return as_region(load_descriptor(node))


def roundtrip(text: str, kind: str) -> str:
    loaders = {"descriptor": (load_descriptor, dump_descriptor),
               "filter": (load_filter, dump_filter),
               "regulator": (load_regulator, dump_regulator),
               "vec": (load_vec, dump_vec),
               "charge": (load_charge, dump_charge)}
    load, dump = loaders[kind]
    return dump(load(parse_one(text)))


# ---------------------------------------------------------------------------
# charges


def dump_charge(m) -> str:
    space = f"(space finite {m.space.n})" if m.space.finite else "(space countable)"
    atoms = "".join(f" ({k} {dump_vec(w)})" for k, w in m.atoms)
    fams = "".join(f" ({dump_vec(g.c)} {fmt_rat(g.rho)} {dump_descriptor(g.support)})"
                   for g in m.families)
    pieces = "".join(f" (({fmt_rat(p.a)} {fmt_rat(p.b)}) {dump_vec(p.density)})" for p in m.pieces)
    out = f"(charge {space} (dim {m.dim}) (atoms{atoms}) (geometric{fams}) (diffuse{pieces})"
    if m.at_infinity is not None:
        out += f" (at-infinity {dump_vec(m.at_infinity.c)} {dump_filter(m.at_infinity.filter)})"
    return out + ")"


def _section(node, name):
    for part in node[1:]:
        if isinstance(part, Node) and part and part.head == name:
            return part
    return None


def load_charge(node):
    from . import measures as M
    node = _expect(node, "charge")
    known = {"space", "dim", "atoms", "geometric", "diffuse", "at-infinity"}
    for part in node[1:]:
        if not isinstance(part, Node) or not part or part.head not in known:
            raise _err(part, "unknown charge section")
    sp = _section(node, "space")
    if sp is None or len(sp) < 2:
        raise _err(node, "charge needs a (space ...) section")
    if sp[1] == "finite":
        _expect(sp, "space", 2)
        space = M.FiniteAtoms(_int(sp[2]))
    elif sp[1] == "countable":
        _expect(sp, "space", 1)
        space = M.CountableAtoms
    else:
        raise _err(sp, "space is 'finite N' or 'countable'")
    dm = _section(node, "dim")
    if dm is None:
        raise _err(node, "charge needs a (dim d) section")
    _expect(dm, "dim", 1)
    dim = _int(dm[1])
    atoms, fams, pieces, inf = [], [], [], None
    try:
        for a in (_section(node, "atoms") or [None])[1:]:
            if not isinstance(a, Node) or len(a) != 2:
                raise _err(a, "atoms are (index (vec ...)) pairs")
            atoms.append((_int(a[0]), load_vec(a[1])))
        for g in (_section(node, "geometric") or [None])[1:]:
            if not isinstance(g, Node) or len(g) != 3:
                raise _err(g, "geometric families are ((vec ...) rho descriptor)")
            fams.append(M.GeometricWeights(load_vec(g[0]), _rat(g[1]), load_descriptor(g[2])))
        for p in (_section(node, "diffuse") or [None])[1:]:
            if not isinstance(p, Node) or len(p) != 2 or not isinstance(p[0], Node) or len(p[0]) != 2:
                raise _err(p, "diffuse pieces are ((a b) (vec ...))")
            pieces.append(M.Piece(_rat(p[0][0]), _rat(p[0][1]), load_vec(p[1])))
        ai = _section(node, "at-infinity")
        if ai is not None:
            _expect(ai, "at-infinity", 2)
            inf = M.AtInfinity(load_vec(ai[1]), load_filter(ai[2]))
        return M.Charge(space, dim, tuple(atoms), tuple(fams), tuple(pieces), inf)
    except SexprError:
        raise
    except ValueError as e:
        raise _err(node, str(e)) from None
