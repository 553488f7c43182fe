"""Text format for Coxeter diagrams.

A diagram file is line-oriented::

    # comment
    default 2          <- mandatory, the label of every undeclared pair
    gen s t u          <- generator names, one line
    m s t 3            <- one labeled pair per line, label int >= 2 or "inf"
    m t u inf
    assert vcd 2       <- optional user assertions (vcd n | disk n | ghs path)

The ``default`` header is mandatory on purpose: nerve-flavoured inputs treat
a missing edge as infinity while diagram-flavoured inputs treat it as 2, and
an implicit choice silently flips which group a file denotes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .system import INF, CoxeterError, CoxeterMatrix, CoxeterSystem, build_system


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    pass


@dataclass
class DiagramDocument:
    default: object  # 2 or INF
    names: tuple
    pairs: tuple  # ((a, b, label), ...) in declaration order
    assertions: dict = field(default_factory=dict)

    def system(self) -> CoxeterSystem:
        try:
            matrix = CoxeterMatrix.from_pairs(
                self.names, {(a, b): m for a, b, m in self.pairs}, default=self.default
            )
        except CoxeterError as exc:
            raise ValidationError(str(exc)) from exc
        return build_system(matrix)


def _parse_label(token, lineno):
    if token == "inf":
        return INF
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"bad label {token!r}", lineno) from None
    if value < 1:
        raise ParseError(f"bad label {token!r}", lineno)
    return value


def parse_diagram(text) -> DiagramDocument:
    default = None
    names = None
    pairs = []
    seen_pairs = set()
    assertions = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "default":
            if default is not None:
                raise ParseError("duplicate default header", lineno)
            if names is not None or pairs or assertions:
                raise ParseError("default header must come first", lineno)
            if len(tokens) != 2 or tokens[1] not in ("2", "inf"):
                raise ParseError("default must be 2 or inf", lineno)
            default = 2 if tokens[1] == "2" else INF
        elif kind == "gen":
            if default is None:
                raise ParseError("missing default header", lineno)
            if names is not None:
                raise ParseError("duplicate gen line", lineno)
            if len(tokens) < 2:
                raise ParseError("gen line needs at least one name", lineno)
            names = tuple(tokens[1:])
            if len(set(names)) != len(names):
                raise ParseError("duplicate generator names", lineno)
        elif kind == "m":
            if names is None:
                raise ParseError("m line before gen line", lineno)
            if len(tokens) != 4:
                raise ParseError("m line needs two names and a label", lineno)
            a, b, tok = tokens[1], tokens[2], tokens[3]
            for g in (a, b):
                if g not in names:
                    raise ValidationError(f"line {lineno}: unknown generator {g!r}")
            if a == b:
                raise ValidationError(f"line {lineno}: label on a single generator")
            key = frozenset((a, b))
            if key in seen_pairs:
                raise ParseError(f"duplicate label for pair {a} {b}", lineno)
            seen_pairs.add(key)
            pairs.append((a, b, _parse_label(tok, lineno)))
        elif kind == "assert":
            if len(tokens) != 3:
                raise ParseError("assert line needs a kind and a value", lineno)
            akind, value = tokens[1], tokens[2]
            if akind in ("vcd", "disk"):
                try:
                    assertions[akind] = int(value)
                except ValueError:
                    raise ParseError(f"assert {akind} needs an integer", lineno) from None
            elif akind == "ghs":
                assertions["ghs"] = value
            else:
                raise ParseError(f"unknown assertion {akind!r}", lineno)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    if default is None:
        raise ParseError("missing default header")
    if names is None:
        raise ParseError("missing gen line")
    doc = DiagramDocument(default, names, tuple(pairs), assertions)
    doc.system()  # surface validation problems at parse time
    return doc


def serialize_diagram(doc: DiagramDocument) -> str:
    lines = ["default " + ("inf" if doc.default == INF else "2")]
    lines.append("gen " + " ".join(doc.names))
    for a, b, m in doc.pairs:
        lines.append(f"m {a} {b} " + ("inf" if m == INF else str(m)))
    for akind in ("vcd", "disk", "ghs"):
        if akind in doc.assertions:
            lines.append(f"assert {akind} {doc.assertions[akind]}")
    return "\n".join(lines) + "\n"


def load_diagram(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_diagram(fh.read())
