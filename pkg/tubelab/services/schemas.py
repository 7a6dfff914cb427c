"""JSON-схемы сертификатов и отчётов. Рациональные числа пишутся строками `p/q`."""

from fractions import Fraction
from pathlib import Path
from typing import Annotated

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer

from tubelab.services.constructions import BushExample, FurstenbergExample, RationalExample, min_separation_sq
from tubelab.services.duality import TransferResult
from tubelab.services.furstenberg import BoundCertificate, EdgeCountCertificate, PipelineResult
from tubelab.services.geometry import Ball, Tube
from tubelab.services.incidence import GridSpacingReport, IncidenceReport, TubeSpacingReport
from tubelab.utils import format_rational, parse_rational

RationalStr = Annotated[Fraction, BeforeValidator(parse_rational), PlainSerializer(format_rational, return_type=str)]


class Schema(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class TubeModel(Schema):
    u: RationalStr
    v: RationalStr
    k: int = 0

    @classmethod
    def of(cls, tube: Tube) -> "TubeModel":
        return cls(u=tube.u, v=tube.v, k=tube.rotation)


class BallModel(Schema):
    x: RationalStr
    y: RationalStr

    @classmethod
    def of(cls, ball: Ball) -> "BallModel":
        return cls(x=ball.center[0], y=ball.center[1])


class IncidenceSummary(Schema):
    engine: str
    balls: int
    tubes: int
    total: int
    histogram: dict[int, int]

    @classmethod
    def of(cls, report: IncidenceReport, engine: str) -> "IncidenceSummary":
        return cls(
            engine=engine,
            balls=len(report.balls),
            tubes=len(report.tubes),
            total=report.total,
            histogram=report.histogram,
        )


class RichPointModel(Schema):
    x: RationalStr
    y: RationalStr
    c: int
    solutions: list[tuple[int, int]]


class Case1Certificate(Schema):
    delta: RationalStr
    W: int
    X: int
    r: int
    S: list[RationalStr]
    min_solutions: int
    dropped_points: int
    separation_sq: RationalStr | None
    separation_bound: RationalStr
    cardinality_ratio: float
    points: list[RichPointModel]

    @classmethod
    def of(cls, example: RationalExample) -> "Case1Certificate":
        W, X = example.params.integers()
        return cls(
            delta=example.params.delta,
            W=W,
            X=X,
            r=example.r,
            S=list(example.fractions),
            min_solutions=example.min_solutions,
            dropped_points=example.dropped_points,
            separation_sq=min_separation_sq([pt.point for pt in example.points]),
            separation_bound=example.separation_bound,
            cardinality_ratio=example.cardinality_ratio,
            points=[
                RichPointModel(x=pt.point[0], y=pt.point[1], c=pt.c, solutions=list(pt.solutions))
                for pt in example.points
            ],
        )


class BushCertificate(Schema):
    delta: RationalStr
    W: int
    X: int
    r: int
    apexes: list[BallModel]
    cluster_radius: RationalStr
    expected_rich: RationalStr

    @classmethod
    def of(cls, example: BushExample) -> "BushCertificate":
        W, X = example.params.integers()
        delta = example.params.delta
        return cls(
            delta=delta,
            W=W,
            X=X,
            r=example.r,
            apexes=[BallModel(x=a[0], y=a[1]) for a in example.apexes],
            cluster_radius=example.cluster_radius,
            expected_rich=example.expected_rich,
        )


class WitnessEntry(Schema):
    tube: TubeModel
    balls: list[BallModel]


class SpacingViolationModel(Schema):
    kind: str
    bottom: RationalStr
    top: RationalStr
    width: RationalStr
    count: int
    min_gap: RationalStr | None


class TubeSpacingModel(Schema):
    passed: bool
    max_count: int
    count_limit: int
    min_gap: RationalStr | None
    gap_limit: RationalStr
    violations: list[SpacingViolationModel]

    @classmethod
    def of(cls, report: TubeSpacingReport) -> "TubeSpacingModel":
        return cls(
            passed=report.passed,
            max_count=report.max_count,
            count_limit=report.count_limit,
            min_gap=report.min_gap,
            gap_limit=report.gap_limit,
            violations=[
                SpacingViolationModel(
                    kind=v.kind,
                    bottom=v.test_tube.bottom,
                    top=v.test_tube.top,
                    width=v.test_tube.width,
                    count=v.count,
                    min_gap=v.min_gap,
                )
                for v in report.violations
            ],
        )


class CellModel(Schema):
    x: RationalStr
    y: RationalStr
    width: RationalStr
    height: RationalStr


class GridSpacingModel(Schema):
    passed: bool
    orientation: str
    cells_used: int
    offending: CellModel | None
    offending_count: int

    @classmethod
    def of(cls, report: GridSpacingReport) -> "GridSpacingModel":
        cell = None
        if report.offending is not None:
            rect = report.offending
            cell = CellModel(x=rect.lower_left[0], y=rect.lower_left[1], width=rect.width, height=rect.height)
        return cls(
            passed=report.passed,
            orientation=report.orientation.value,
            cells_used=report.cells_used,
            offending=cell,
            offending_count=report.offending_count,
        )

    @classmethod
    def of_transfer(cls, result: TransferResult) -> "GridSpacingModel":
        return cls.of(result.report)


class FurstenbergCertificate(Schema):
    case: str
    delta: RationalStr
    alpha: RationalStr
    W: int | None
    X: int | None
    r: int | None
    rho: RationalStr | None
    intervals: list[RationalStr]
    ball_count: int
    tube_count: int
    witness_gap: RationalStr
    spacing: TubeSpacingModel | None
    notes: list[str]
    witnesses: list[WitnessEntry]

    @classmethod
    def of(cls, example: FurstenbergExample) -> "FurstenbergCertificate":
        W, X = example.params.integers() if example.params is not None else (None, None)
        return cls(
            case=example.case,
            delta=example.delta,
            alpha=example.alpha,
            W=W,
            X=X,
            r=example.r,
            rho=example.rho,
            intervals=list(example.intervals),
            ball_count=len(example.balls),
            tube_count=len(example.tubes),
            witness_gap=example.witness_gap,
            spacing=TubeSpacingModel.of(example.spacing_report) if example.spacing_report else None,
            notes=list(example.notes),
            witnesses=[
                WitnessEntry(tube=TubeModel.of(t), balls=[BallModel.of(b) for b in balls])
                for t, balls in example.witnesses.items()
            ],
        )


class BoundModel(Schema):
    balls: int
    vertices: int
    edges: int
    drawing_crossings: int
    pair_bound: int
    cr_ub: int
    lemma_value: float
    vertex_ratio: float
    target: float | None
    log_factor: float | None
    target_ratio: float | None
    notes: list[str]

    @classmethod
    def of(cls, cert: BoundCertificate) -> "BoundModel":
        return cls(**{**cert.__dict__, "notes": list(cert.notes)})


class EdgeCountModel(Schema):
    case: int
    edges: RationalStr | None
    edge_ratio: float | None
    key_constant: float | None
    angular: dict[str, int]
    angular_constant: float | None
    reduced_X: int | None
    reduced_W: int | None

    @classmethod
    def of(cls, cert: EdgeCountCertificate) -> "EdgeCountModel":
        return cls(
            case=cert.case,
            edges=cert.edges,
            edge_ratio=cert.edge_ratio,
            key_constant=cert.key_constant,
            angular={format_rational(mu): n for mu, n in cert.angular.items()},
            angular_constant=cert.angular_constant,
            reduced_X=cert.reduced.X if cert.reduced else None,
            reduced_W=cert.reduced.W if cert.reduced else None,
        )


class PipelineModel(Schema):
    family_size: int
    typical_size: int
    d: RationalStr | None
    multiplicity_sum: int
    certificate: BoundModel | None
    edge_count: EdgeCountModel | None
    regimes: dict[str, float] | None
    notes: list[str]

    @classmethod
    def of(cls, result: PipelineResult) -> "PipelineModel":
        return cls(
            family_size=result.family_size,
            typical_size=result.typical_size,
            d=result.d,
            multiplicity_sum=result.graph.multiplicity_sum,
            certificate=BoundModel.of(result.certificate) if result.certificate else None,
            edge_count=EdgeCountModel.of(result.edge_count) if result.edge_count else None,
            regimes=dict(result.regimes.__dict__) if result.regimes else None,
            notes=list(result.notes),
        )


class WitnessFile(Schema):
    """Файл свидетелей Y(T) для furst-bound."""

    delta: RationalStr
    alpha: RationalStr
    case: str = "external"
    W: int | None = None
    X: int | None = None
    witnesses: list[WitnessEntry]


def write_json(path: Path, model: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_witnesses(path: Path) -> WitnessFile:
    return WitnessFile.model_validate_json(Path(path).read_text(encoding="utf-8"))
