import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from errors import DomainError, ParseError
from exactnum import IntMatrix, det_exact
from jacobiperron import jp_expand
from logger import get_logger, log_event
from numberfield import QuadraticSurd
from parsing import format_surd
from pfdata import (coefficient_ring, dominant_eigendata, is_primitive,
                    jacobian_module, perron_data)
from torusbundle import TorusMonodromy, bundle_invariants
from traceform import form_invariants, gram, gram_of

logger = get_logger("report")


@dataclass
class InvariantReport:
    input: Dict[str, Any]
    field: Dict[str, Any]
    conductor: Optional[int]
    delta: Fraction
    sigma: int
    alexander: List[int]
    cf_period: Optional[List[int]] = None
    jp_period: Optional[List[List[int]]] = None
    warnings: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["delta"] = str(self.delta)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InvariantReport":
        data = dict(data)
        try:
            data["delta"] = Fraction(data["delta"])
            return cls(**data)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed invariant report: {e}")


def to_json(data: Any) -> str:
    """Canonical text: sorted keys, no insignificant whitespace"""
    return json.dumps(_jsonable(data), sort_keys=True, separators=(",", ":"))


def _jsonable(value: Any) -> Any:
    if isinstance(value, InvariantReport):
        return value.to_dict()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, QuadraticSurd):
        return format_surd(value)
    if isinstance(value, IntMatrix):
        return value.to_rows()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def serialize(report: InvariantReport) -> str:
    return to_json(report)


def parse_report(text: str) -> InvariantReport:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid report JSON: {e}")
    return InvariantReport.from_dict(data)


def write_atomic(path: str, text: str):
    """Write text through a temporary file in the same directory, then rename"""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".afinv-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    log_event(f"wrote {path}")


# ----- report assembly -----

def _torus_report(a: IntMatrix) -> InvariantReport:
    r = bundle_invariants(TorusMonodromy(a))
    details = {
        "module_delta": str(r.module_delta),
        "eigenvalue": format_surd(r.eigenvalue),
        "eigenvector": [format_surd(v) for v in r.eigenvector],
        "module_lattice": r.module_lattice.to_rows(),
        "module_denominator": r.module_denominator,
        "order_basis": [format_surd(v) for v in r.order_basis],
        "ideal_class": format_surd(r.ideal_class),
        "cf_preperiod": list(r.cf_preperiod),
        "nonneg_representative": r.representative.matrix.to_rows(),
        "representative_power": None if r.representative.power is None else str(r.representative.power),
        "sign": r.sign,
    }
    warnings = list(r.warnings)
    return InvariantReport(
        input={"matrix": a.to_rows()},
        field={"d": r.d, "embedding": "dominant root"},
        conductor=r.conductor,
        delta=r.delta,
        sigma=r.sigma,
        alexander=list(r.alexander),
        cf_period=list(r.cf_period),
        jp_period=_jp_period(r.eigenvector[1:], warnings),
        warnings=warnings,
        details=details,
    )


def _jp_period(ratios, warnings: List[str]) -> Optional[List[List[int]]]:
    """Period of the Jacobi-Perron expansion of a positive ratio vector"""
    ratios = [v.to_element() if isinstance(v, QuadraticSurd) else v for v in ratios]
    if not all(x.sign() > 0 for x in ratios):
        warnings.append("eigenvector is not positive: no Jacobi-Perron period")
        return None
    expansion = jp_expand(ratios)
    if not expansion.periodic:
        warnings.append("no Jacobi-Perron period within the step limit")
        return None
    return [list(d.b) for d in expansion.period]


def _generic_report(a: IntMatrix) -> InvariantReport:
    warnings = []
    if a.is_nonnegative() and is_primitive(a):
        data = perron_data(a)
    else:
        warnings.append("matrix is not primitive: using the dominant real eigenvalue")
        data = dominant_eigendata(a)
    module = jacobian_module(data)
    module_form = form_invariants(gram(module))
    conductor = None
    try:
        order = coefficient_ring(module)
        order_form = form_invariants(gram_of(order.basis))
        conductor = order.conductor
        order_rows = order.lattice.to_rows()
    except DomainError as e:
        warnings.append(f"coefficient ring unavailable: {e}")
        order_form = module_form
        order_rows = None

    jp_period = _jp_period(data.ratio_vector(), warnings)
    lo, hi = data.field.pf_interval
    return InvariantReport(
        input={"matrix": a.to_rows()},
        field={"minpoly": list(data.field.minpoly), "pf_interval": [str(lo), str(hi)]},
        conductor=conductor,
        delta=order_form.delta,
        sigma=order_form.sigma,
        alexander=list(data.charpoly),
        jp_period=jp_period,
        warnings=warnings,
        details={
            "module_delta": str(module_form.delta),
            "module_lattice": module.lattice.to_rows(),
            "module_denominator": module.denominator,
            "order_lattice": order_rows,
        },
    )


def invariant_report(a: IntMatrix) -> InvariantReport:
    """Torus-bundle pipeline for SL(2, Z) input, the Perron-Frobenius pipeline otherwise"""
    if a.rows == 2 and a.cols == 2 and det_exact(a) == 1:
        report = _torus_report(a)
    else:
        report = _generic_report(a)
    log_event(f"invariants of {a}: delta={report.delta} sigma={report.sigma}")
    return report
