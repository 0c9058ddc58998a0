"""
Service layer for expansion, verification and OEIS b-file checks
"""
import logging
import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from django.core.cache import cache

from . import catalog
from .asymptotics import AsymptoticForm, evaluate_log, predicted_sign
from .conf import qasym_setting
from .decorators import logged_operation
from .exceptions import FormatError, GapError, MismatchError, QAsymError, SignMismatch, UsageError
from .qspec import ProductSpec
from .series import SeriesPoly, expand, log_abs_coeff, sign_of

logger = logging.getLogger(__name__)

CONVERGING = 'converging'
INCONCLUSIVE = 'inconclusive'
DIVERGING = 'diverging'
VERDICTS = (CONVERGING, INCONCLUSIVE, DIVERGING)

# exp(delta) overflows a double beyond this
_MAX_RATIO_LOG = 700.0


class ExpansionService:
    """Expansion with the Django cache in front of the Euler transform"""

    @staticmethod
    def cache_key(spec: ProductSpec, order: int) -> str:
        return f"qasym:expand:{spec.render()}:{order}"

    @staticmethod
    def expand(spec: ProductSpec, order: int) -> SeriesPoly:
        use_cache = (
            qasym_setting('QASYM_CACHE_EXPANSIONS', True)
            and order <= qasym_setting('QASYM_CACHE_MAX_ORDER', 5000)
        )
        if not use_cache:
            return expand(spec, order)

        key = ExpansionService.cache_key(spec, order)
        cached = cache.get(key)
        if cached is not None:
            logger.debug(f"Expansion cache hit for {key}")
            return SeriesPoly(tuple(cached))

        series = expand(spec, order)
        cache.set(key, list(series.coeffs), qasym_setting('QASYM_CACHE_TIMEOUT', 3600))
        return series


@dataclass(frozen=True)
class Checkpoint:
    n: int
    exact: float
    predicted: float
    delta: float
    ratio: Optional[float]
    sign: int
    predicted_sign: int


@dataclass
class VerificationReport:
    identifier: str
    checkpoints: List[Checkpoint] = field(default_factory=list)
    sign_ok: bool = True
    trend: Optional[float] = None
    verdict: str = INCONCLUSIVE
    error: str = ''

    @property
    def deltas(self) -> List[float]:
        return [checkpoint.delta for checkpoint in self.checkpoints]

    @property
    def failed(self) -> bool:
        return self.verdict == DIVERGING


def _validate_checkpoints(checkpoints: Sequence[int]) -> List[int]:
    points = [int(n) for n in checkpoints]
    if not points:
        raise UsageError("at least one checkpoint is required")
    if points[0] < 1:
        raise UsageError(f"checkpoints require n >= 1, got {points[0]}")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise UsageError(f"checkpoints must be strictly increasing, got {points}")
    return points


def fit_trend(points: Sequence[Checkpoint]) -> Optional[float]:
    """Slope of ln|delta| against ln n, None when it cannot be fitted."""
    usable = [(p.n, abs(p.delta)) for p in points if p.delta != 0]
    if len(usable) < 2:
        return None
    x = np.log([n for n, _ in usable])
    y = np.log([d for _, d in usable])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def classify(deltas: Sequence[float]) -> str:
    """converging when |delta| strictly falls over the last three checkpoints"""
    if len(deltas) < 3:
        return INCONCLUSIVE
    a, b, c = (abs(d) for d in deltas[-3:])
    if a > b > c:
        return CONVERGING
    if a < b < c:
        return DIVERGING
    return INCONCLUSIVE


class VerificationService:
    """Compare exact coefficients with an asymptotic form in log space"""

    @staticmethod
    def default_checkpoints() -> List[int]:
        return list(qasym_setting('QASYM_DEFAULT_CHECKPOINTS', [100, 500, 1000, 2000, 5000]))

    @staticmethod
    @logged_operation('verify')
    def verify(
        spec: ProductSpec,
        form: AsymptoticForm,
        checkpoints: Optional[Sequence[int]] = None,
        identifier: Optional[str] = None,
    ) -> VerificationReport:
        points = _validate_checkpoints(checkpoints or VerificationService.default_checkpoints())
        series = ExpansionService.expand(spec, points[-1])
        report = VerificationReport(identifier=identifier or spec.render())

        for n in points:
            exact = log_abs_coeff(series, n)
            predicted = evaluate_log(form, n)
            observed = sign_of(series, n)
            expected = predicted_sign(form, n)
            if observed != expected:
                mode = 'alternating' if form.alternating else 'constant-sign'
                raise SignMismatch(
                    f"{report.identifier}: predicted {mode} sign {expected:+d} at n={n}, observed {observed:+d}"
                )
            delta = exact - predicted.log
            report.checkpoints.append(Checkpoint(
                n=n,
                exact=exact,
                predicted=predicted.log,
                delta=delta,
                ratio=math.exp(delta) if abs(delta) < _MAX_RATIO_LOG else None,
                sign=observed,
                predicted_sign=expected,
            ))

        report.trend = fit_trend(report.checkpoints)
        report.verdict = classify(report.deltas)
        logger.info(
            f"Verified {report.identifier}: verdict={report.verdict}, "
            f"last delta={report.deltas[-1]:.3e}"
        )
        return report

    @staticmethod
    def suite_checkpoints(max_n: int) -> List[int]:
        """max_n/8, max_n/4, max_n/2, max_n; 4000 gives 500, 1000, 2000, 4000."""
        return sorted({max(1, max_n // 8), max(1, max_n // 4), max(1, max_n // 2), max_n})

    @staticmethod
    @logged_operation('suite')
    def run_suite(
        pattern: Optional[str] = None,
        max_n: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> List[VerificationReport]:
        max_n = max_n or qasym_setting('QASYM_SUITE_MAX_N', 4000)
        workers = workers or qasym_setting('QASYM_SUITE_WORKERS', 1)
        points = VerificationService.suite_checkpoints(max_n)
        tasks = [
            (entry.id, entry.grid_params[0], points)
            for entry in catalog.list_families(pattern)
        ]
        logger.info(f"Running suite on {len(tasks)} families, checkpoints {points}, workers={workers}")

        if workers > 1 and len(tasks) > 1:
            with multiprocessing.Pool(workers) as pool:
                reports = pool.map(_suite_task, tasks)
        else:
            reports = [_suite_task(task) for task in tasks]
        return sorted(reports, key=lambda report: report.identifier)


def _suite_task(task: Tuple[str, dict, List[int]]) -> VerificationReport:
    family_id, params, points = task
    identifier = family_id if not params else f"{family_id}({','.join(f'{k}={v}' for k, v in params.items())})"
    try:
        spec, form = catalog.instantiate(family_id, params)
        return VerificationService.verify(spec, form, points, identifier=identifier)
    except QAsymError as exc:
        logger.error(f"Suite entry {identifier} failed: {exc}")
        return VerificationReport(
            identifier=identifier,
            sign_ok=not isinstance(exc, SignMismatch),
            verdict=DIVERGING,
            error=str(exc),
        )


# OEIS b-files

@dataclass(frozen=True)
class BFile:
    offset: int
    values: Tuple[int, ...]


@dataclass(frozen=True)
class CrossCheckReport:
    family: str
    params: dict
    offset: int
    compared: int
    matched: bool = True


class OeisService:
    """Local OEIS b-file import/export and cross-checks; no network access"""

    @staticmethod
    def parse_bfile(text: str) -> BFile:
        offset = None
        values = []
        expected = None
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"line {line_number}: expected 'n a(n)', got {raw!r}")
            try:
                n, value = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError(f"line {line_number}: non-integer field in {raw!r}") from None
            if offset is None:
                offset = expected = n
            if n != expected:
                raise GapError(f"line {line_number}: expected index {expected}, got {n}")
            values.append(value)
            expected += 1
        if offset is None:
            raise FormatError("b-file contains no data lines")
        return BFile(offset=offset, values=tuple(values))

    @staticmethod
    def read_bfile(path) -> BFile:
        return OeisService.parse_bfile(Path(path).read_text(encoding='utf-8'))

    @staticmethod
    def format_bfile(values: Iterable[int], offset: int = 0, comments: Sequence[str] = ()) -> str:
        lines = [f"# {comment}" for comment in comments]
        lines += [f"{offset + i} {value}" for i, value in enumerate(values)]
        return '\n'.join(lines) + '\n'

    @staticmethod
    def write_bfile(path, series: Iterable[int], offset: int = 0, comments: Sequence[str] = ()) -> Path:
        path = Path(path)
        with path.open('w', encoding='utf-8', newline='\n') as handle:
            handle.write(OeisService.format_bfile(series, offset, comments))
        logger.info(f"Wrote b-file {path}")
        return path

    @staticmethod
    def compare(series: Sequence[int], bfile: BFile) -> int:
        """Number of coefficients compared; MismatchError at the first difference."""
        compared = 0
        for i, value in enumerate(bfile.values):
            n = bfile.offset + i
            if n < 0:
                continue
            if n >= len(series):
                break
            if series[n] != value:
                raise MismatchError(f"a({n}) differs: expansion {series[n]}, b-file {value}", index=n)
            compared += 1
        if compared == 0:
            raise FormatError("b-file does not overlap the expansion")
        return compared

    @staticmethod
    @logged_operation('bfile check')
    def cross_check(family_id: str, params, path) -> CrossCheckReport:
        bfile = OeisService.read_bfile(path)
        spec, _ = catalog.instantiate(family_id, params)
        last = bfile.offset + len(bfile.values) - 1
        if last < 0:
            raise FormatError(f"b-file indices end at {last}; nothing overlaps the expansion")
        order = min(last, qasym_setting('QASYM_MAX_ORDER', 100000))
        series = ExpansionService.expand(spec, order)
        compared = OeisService.compare(series, bfile)
        return CrossCheckReport(
            family=family_id,
            params=catalog.get_family(family_id).check(params),
            offset=bfile.offset,
            compared=compared,
        )
