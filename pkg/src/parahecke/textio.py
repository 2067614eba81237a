"""Text formats: scalars `a` or `a/p^k`, matrices `[[2,1],[0,1]]`, and Hecke
elements `c1*T[m1] + c2*T[m2]` (or `0`)."""

from fractions import Fraction

from .errors import ParseError
from .exact import format_scalar, is_power_of
from .groups import GroupElement


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def position(self, i=None):
        i = self.i if i is None else i
        line = self.text.count("\n", 0, i) + 1
        col = i - (self.text.rfind("\n", 0, i) + 1) + 1
        return line, col

    def error(self, msg, i=None):
        line, col = self.position(i)
        return ParseError(msg, line, col)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, got {got!r}")
        self.i += 1

    def integer(self):
        self.skip()
        start = self.i
        if self.i < len(self.text) and self.text[self.i] in "+-":
            self.i += 1
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        tok = self.text[start:self.i]
        if tok in ("", "+", "-"):
            self.i = start
            raise self.error("expected an integer")
        return int(tok), start

    def at_end(self):
        return self.peek() == ""


def _scalar(cur: _Cursor, p: int) -> Fraction:
    num, start = cur.integer()
    if cur.peek() == "/":
        cur.i += 1
        den, dpos = cur.integer()
        if den <= 0 or not is_power_of(den, p):
            raise cur.error(f"denominator {den} is not a power of {p}", dpos)
        return Fraction(num, den)
    return Fraction(num)


def _matrix(cur: _Cursor, p: int) -> GroupElement:
    start = cur.i
    cur.expect("[")
    rows = []
    while True:
        cur.expect("[")
        row = [_scalar(cur, p)]
        while cur.peek() == ",":
            cur.i += 1
            row.append(_scalar(cur, p))
        cur.expect("]")
        rows.append(row)
        if cur.peek() == ",":
            cur.i += 1
            continue
        cur.expect("]")
        break
    if any(len(r) != len(rows) for r in rows):
        raise cur.error("matrix must be square", start)
    return GroupElement.from_rows(rows)


def parse_matrix(text: str, p: int) -> GroupElement:
    cur = _Cursor(text)
    g = _matrix(cur, p)
    if not cur.at_end():
        raise cur.error("trailing input after matrix")
    return g


def format_matrix(g: GroupElement) -> str:
    return "[" + ",".join("[" + ",".join(format_scalar(x) for x in row) + "]"
                          for row in g.rows()) + "]"


def parse_terms(text: str, p: int):
    """Parse `c1*T[m1] + c2*T[m2] ...` into a list of (int coefficient, GroupElement)."""
    cur = _Cursor(text)
    if cur.peek() == "0":
        save = cur.i
        cur.i += 1
        if cur.at_end():
            return []
        cur.i = save
    terms = []
    sign = 1
    first = True
    while True:
        ch = cur.peek()
        if not first or ch in "+-":
            if ch not in "+-":
                raise cur.error("expected '+' or '-'")
            sign = 1 if ch == "+" else -1
            cur.i += 1
        coeff = 1
        if cur.peek().isdigit():
            coeff, _ = cur.integer()
            cur.expect("*")
        cur.expect("T")
        terms.append((sign * coeff, _matrix(cur, p)))
        first = False
        if cur.at_end():
            return terms


def format_terms(terms) -> str:
    """Inverse of parse_terms; `0` for the empty sum."""
    if not terms:
        return "0"
    out = []
    for c, g in terms:
        body = "T" + format_matrix(g)
        mag = abs(c)
        piece = body if mag == 1 else f"{mag}*{body}"
        if not out:
            out.append(piece if c > 0 else "-" + piece)
        else:
            out.append(("+ " if c > 0 else "- ") + piece)
    return " ".join(out)
