import json
import math
import re
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from errors import ParseError, UsageError
from exactnum import IntMatrix
from numberfield import (FieldElement, QuadraticSurd, quadratic_field,
                         rational_field, squarefree_decomposition)

Number = Union[Fraction, QuadraticSurd]

# Literal grammar, most specific first
RATIONAL = r'[+-]?\d+(?:/\d+)?'
SURD_PATTERNS = [
    # p+q*sqrt(d), p-q*sqrt(d), p+sqrt(d)
    rf'(?P<p>{RATIONAL})\s*(?P<sign>[+-])\s*(?:(?P<q>\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\)',
    # q*sqrt(d), -sqrt(d)
    rf'(?P<q>{RATIONAL})\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\)',
    r'(?P<sign>[+-])?sqrt\(\s*(?P<d>\d+)\s*\)',
]
INTEGER_LIST = r'[+-]?\d+(?:[\s,]+[+-]?\d+)*'


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(RATIONAL, text):
        raise ParseError(f"not a rational literal: {text!r}")
    return Fraction(text)


def parse_int_list(text: str) -> List[int]:
    text = text.strip()
    if not re.fullmatch(INTEGER_LIST, text):
        raise ParseError(f"expected whitespace-separated integers, got {text!r}")
    return [int(tok) for tok in re.findall(r'[+-]?\d+', text)]


def parse_matrix(text: str) -> IntMatrix:
    """Row-major integers of a square matrix, e.g. "5 2 2 1" """
    entries = parse_int_list(text)
    n = math.isqrt(len(entries))
    if n * n != len(entries):
        raise ParseError(f"{len(entries)} entries do not form a square matrix")
    return IntMatrix(n, n, tuple(entries))


def parse_matrix_json(text: str) -> IntMatrix:
    """{"rows": n, "entries": [...]} with the entries row-major"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid matrix JSON: {e}")
    if not isinstance(data, dict) or "rows" not in data or "entries" not in data:
        raise ParseError('matrix JSON must look like {"rows": n, "entries": [...]}')
    rows, entries = data["rows"], data["entries"]
    if not isinstance(rows, int) or rows < 1 or not isinstance(entries, list):
        raise ParseError("rows must be a positive integer and entries a list")
    if any(not isinstance(v, int) or isinstance(v, bool) for v in entries):
        raise ParseError("matrix entries must be integers")
    if not entries or len(entries) % rows:
        raise ParseError(f"{len(entries)} entries do not fill {rows} rows")
    return IntMatrix(rows, len(entries) // rows, tuple(entries))


def read_matrix(text: Optional[str], json_text: Optional[str]) -> IntMatrix:
    if json_text is not None:
        return parse_matrix_json(json_text)
    if text is None:
        raise ParseError("a matrix is required (--matrix or --json)")
    return parse_matrix(text)


def _surd(p: Fraction, q: Fraction, d: int) -> Number:
    if q == 0:
        return p
    s, core = squarefree_decomposition(d)
    if core == 1:
        return p + q * s
    return QuadraticSurd(core, p, q * s)


def parse_number(text: str) -> Number:
    """A rational p or p/q, or a surd p+q*sqrt(d)"""
    text = text.strip()
    if re.fullmatch(RATIONAL, text):
        return Fraction(text)
    for pattern in SURD_PATTERNS:
        match = re.fullmatch(pattern, text)
        if not match:
            continue
        groups = match.groupdict()
        p = Fraction(groups.get("p") or 0)
        q = Fraction(groups.get("q") or 1)
        if groups.get("sign") == "-":
            q = -q
        d = int(groups["d"])
        if d == 0:
            raise ParseError(f"sqrt(0) in {text!r}")
        return _surd(p, q, d)
    raise ParseError(f"not a rational or surd literal: {text!r}")


def parse_numbers(text: str) -> List[Number]:
    tokens = [tok for tok in re.split(r'[\s,;]+', text.strip()) if tok]
    if not tokens:
        raise ParseError("expected at least one number")
    return [parse_number(tok) for tok in tokens]


def to_field_elements(values: Sequence[Number]) -> List[FieldElement]:
    """Place the values in one field: Q(sqrt d) if any surd occurs, else Q"""
    ds = {v.d for v in values if isinstance(v, QuadraticSurd) and not v.is_rational()}
    if len(ds) > 1:
        raise UsageError(f"values live in different quadratic fields: {sorted(ds)}")
    if not ds:
        field = rational_field()
        return [field.from_rational(v.a if isinstance(v, QuadraticSurd) else v) for v in values]
    d = ds.pop()
    field = quadratic_field(d)
    result = []
    for v in values:
        if isinstance(v, QuadraticSurd):
            result.append(v.to_element(field))
        else:
            result.append(field.from_rational(v))
    return result


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def format_surd(value: Number) -> str:
    if isinstance(value, QuadraticSurd):
        if value.is_rational():
            return str(value.a)
        coefficient = "" if value.b == 1 else "-" if value.b == -1 else f"{value.b}*"
        if value.a == 0:
            return f"{coefficient}sqrt({value.d})"
        sign = "-" if value.b < 0 else "+"
        magnitude = "" if abs(value.b) == 1 else f"{abs(value.b)}*"
        return f"{value.a}{sign}{magnitude}sqrt({value.d})"
    return str(value)
