"""Instance, solution and report files."""
import csv
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from diskcover.models.common import SchemaError, UsageError
from diskcover.models.document import InstanceDocument
from diskcover.models.geometry import Cover, Instance, Metric
from diskcover.models.line import LineSearchResult
from diskcover.models.report import REPORT_COLUMNS, ReportRow
from diskcover.models.solution import SolutionDocument
from diskcover.models.tour import CoveringTour
from diskcover.services.geometry_core import uncovered_clients

PathLike = Union[str, Path]
M = TypeVar("M", bound=BaseModel)


def _field_path(loc) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def _read_model(path: PathLike, model: Type[M]) -> M:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}", details={"path": str(path)})
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = _field_path(first.get("loc", ()))
        raise SchemaError(
            f"{path.name}: {field}: {first.get('msg', 'invalid value')}",
            details={"field": field, "errors": len(exc.errors())},
        ) from exc


def load_instance(path: PathLike) -> Instance:
    instance = _read_model(path, InstanceDocument).to_instance()
    if instance.name is None:
        instance = instance.model_copy(update={"name": Path(path).stem})
    return instance


def save_instance(path: PathLike, instance: Instance) -> None:
    doc = InstanceDocument.from_instance(instance)
    Path(path).write_text(doc.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")


def save_solution(
    path: PathLike,
    algorithm: str,
    result: Union[Cover, LineSearchResult, CoveringTour],
    metric: Metric,
    figures: Optional[Dict[str, float]] = None,
) -> SolutionDocument:
    doc = SolutionDocument.from_result(algorithm, result, metric, figures)
    Path(path).write_text(doc.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")
    return doc


def load_solution(path: PathLike, instance: Optional[Instance] = None) -> SolutionDocument:
    """Read a solution and, given its instance, confirm every client is covered."""
    doc = _read_model(path, SolutionDocument)
    if instance is not None:
        missing = uncovered_clients(doc.to_disks(), instance.clients)
        if len(missing):
            raise SchemaError(
                f"{Path(path).name}: disks leave {len(missing)} client(s) uncovered",
                details={"field": "disks", "uncovered": [int(i) for i in missing[:10]]},
            )
    return doc


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(path: PathLike, rows: Iterable[ReportRow], append: bool = False) -> None:
    """CSV with the fixed report columns; rows in (instance, algorithm, seed) order."""
    path = Path(path)
    fresh = not append or not path.exists() or path.stat().st_size == 0
    with path.open("a" if append else "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(REPORT_COLUMNS)
        for row in sorted(rows, key=ReportRow.sort_key):
            data = row.model_dump()
            writer.writerow([_cell(data[col]) for col in REPORT_COLUMNS])


def read_report(path: PathLike) -> List[Dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
            raise SchemaError(f"{Path(path).name}: unexpected report columns", details={"field": "header"})
        return list(reader)


def parse_params(pairs: Iterable[str]) -> Dict[str, Any]:
    """``key=value`` generator parameters; numbers are parsed, anything else stays text."""
    params: Dict[str, Any] = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"generator parameter must look like key=value, got {pair!r}")
        try:
            params[key] = int(raw)
        except ValueError:
            try:
                params[key] = float(raw)
            except ValueError:
                params[key] = raw
    return params
