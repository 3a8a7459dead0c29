"""
cosmkit 명령줄 - 서브커맨드 파싱, 엔진 호출, 결정적 JSON/CSV/DOT 출력

종료 코드: 0 성공, 1 도메인 오류 (stderr 에 오류 JSON), 2 사용법 오류
"""

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from ..core.config import CosmConfig
from ..core.errors import CosmError, ParameterError
from ..core.logging import setup_logging
from ..core.rational import format_cost, parse_rational
from ..cosm.engine import CosmEngine
from ..cosm.expression import parse_expression, postorder_addresses
from ..cosm.fixpoint import FREE, LITERAL, SEQUENCE
from ..cosm.multiset import EXACT, GREEDY, parse_multiset
from ..cosmos.bundle import CosmosEngine
from ..dualnet.coherence import LMI_START, TANIMOTO_START, fixed_point_iteration
from ..dualnet.lossy import DISTANCE, SIMILARITY
from ..metric.tanimoto import HUTCHINSON, TANIMOTO, rank_correlation, tanimoto_metrics
from ..metric.transport import hutchinson_metrics
from ..pattern.intensity import BASE, PER_MEASURE, PatternEngine
from ..structure.associativity import cost_associativity, hierarchy_bound
from ..structure.gamma import gamma_check
from ..structure.hierarchy import BOTH, LEFT, SUBMULTIPATTERN, SUBPATTERN, build_subpattern_graph, order_diagnostics, to_dot
from ..structure.transitivity import transitivity_composition_check
from ..system.filtration import validate_filtration
from ..system.fixtures import write_fixtures
from ..system.generators import FAMILIES, generate_builtin
from ..system.loader import load_system_file, serialize_system, system_fingerprint
from ..system.model import IDENTITY, CombinationalSystem
from .oracle_check import oracle_check

JSON = "json"
CSV = "csv"
DOT = "dot"


class UsageError(Exception):
    """파싱 이후에 발견된 플래그 조합 오류 (종료 코드 2)"""


# --- 인자 타입 ---

def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"정수가 아닙니다: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"1 이상이어야 합니다: {value}")
    return value


def _param(text: str) -> tuple:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"key=value 형식이 아닙니다: {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


# --- 파서 ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosmkit", description="유한 조합 시스템의 조합적 단순성 계산")
    parser.add_argument("--config", type=Path, help="설정 파일 (기본: COSMKIT_CONFIG 또는 ./config.yaml)")
    parser.add_argument("--threads", type=_positive_int, help="병렬 워커 수")
    parser.add_argument("--no-cache", action="store_true", help="디스크 캐시 사용 안 함")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="로그 레벨")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name: str, help_text: str, system: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if system:
            p.add_argument("--system", required=True, type=Path, help="시스템 JSON 파일")
        return p

    p = command("validate", "시스템 문서 검증")
    p.add_argument("--filtration", action="store_true", help="filtration 연산자 검사 포함")

    p = command("simplicity", "σ_j(x|w) 와 유도 증인")
    p.add_argument("--measure", default="1", help="측도 id 또는 번호")
    p.add_argument("--entity", help="대상 엔티티")
    p.add_argument("--context", default=IDENTITY)
    p.add_argument("--mode", choices=[FREE, LITERAL, SEQUENCE], default=FREE)
    p.add_argument("--expression", help="σ! 를 계산할 표현식 op(child,child)#n")
    p.add_argument("--oracle", action="store_true", help="전수 열거로 계산")

    p = command("multiset", "멀티셋 단순성")
    p.add_argument("--measure", default="1")
    p.add_argument("--elements", required=True, help='"x:2,y:1" 형식')
    p.add_argument("--solver", choices=[EXACT, GREEDY], default=EXACT)
    p.add_argument("--context", default=IDENTITY)

    p = command("bundle", "단순성 번들")
    p.add_argument("--entity", required=True)
    p.add_argument("--context", default=IDENTITY)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--output", choices=[JSON], default=JSON)

    p = command("pattern", "패턴 벡터와 멀티패턴 프런티어")
    p.add_argument("--target", required=True)
    p.add_argument("--context", default=IDENTITY)
    p.add_argument("--frontier", action="store_true", help="파레토 프런티어만 출력")
    p.add_argument("--denominator", choices=[PER_MEASURE, BASE])
    p.add_argument("--output", choices=[JSON, CSV], default=JSON)

    p = command("hierarchy", "서브패턴 계층과 진단")
    p.add_argument("--context", default=IDENTITY)
    p.add_argument("--positions", choices=[LEFT, BOTH])
    p.add_argument("--relation", choices=[SUBPATTERN, SUBMULTIPATTERN])
    p.add_argument("--diagnose", action="store_true", help="반대칭 위반과 추이 결함")
    p.add_argument("--seed", type=int, help="체인 샘플링 시드 (샘플링 모드에서 필수)")
    p.add_argument("--associativity", action="store_true", help="비용 결합성 결함과 c_obs 비교")
    p.add_argument("--gamma", action="store_true", help="Γ 재괄호 법칙 검사")
    p.add_argument("--transitivity", choices=[FREE, LITERAL], help="패턴 추이 합성 검사 (모드)")
    p.add_argument("--output", choices=[JSON, DOT], default=JSON)

    p = command("metrics", "이질 계층 메트릭")
    p.add_argument("--context", default=IDENTITY)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--construction", choices=[TANIMOTO, HUTCHINSON])
    p.add_argument("--compare", action="store_true", help="두 구성의 순위 상관 (JSON 전용)")
    p.add_argument("--output", choices=[JSON, CSV], default=JSON)

    p = command("coherence", "이중 네트워크 정합도")
    p.add_argument("--context", default=IDENTITY)
    p.add_argument("--k", type=_rational)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--iterate", type=_positive_int, help="고정점 반복 최대 횟수 (생략 시 1단계)")
    p.add_argument("--tol", type=_rational, help="수렴 허용 오차")
    p.add_argument("--membership", choices=[SIMILARITY, DISTANCE])
    p.add_argument("--initial", choices=[TANIMOTO_START, LMI_START])
    p.add_argument("--output", choices=[JSON], default=JSON)

    p = command("oracle-check", "전수 열거 오라클 대조")
    scope = p.add_mutually_exclusive_group(required=True)
    scope.add_argument("--all", action="store_true", help="모든 엔티티")
    scope.add_argument("--entity", help="엔티티 하나")
    p.add_argument("--context", default=IDENTITY)

    p = command("generate", "내장 생성기로 시스템 파일 생성", system=False)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", choices=list(FAMILIES))
    source.add_argument("--fixtures", type=Path, help="고정 예제를 기록할 디렉토리")
    p.add_argument("--param", action="append", type=_param, default=[], help="생성기 파라미터 key=value")
    p.add_argument("--out", type=Path, help="출력 파일 (--family 와 함께)")

    return parser


# --- 출력 ---

def _dump(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _load(path: Path) -> CombinationalSystem:
    try:
        return load_system_file(path)
    except FileNotFoundError as e:
        raise ParameterError(str(e), path="system", code="file_not_found") from e


class Context:
    """서브커맨드 하나가 공유하는 설정, 로거, 엔진"""

    def __init__(self, args: argparse.Namespace, config: CosmConfig, logger: logging.Logger):
        self.args = args
        self.config = config
        self.logger = logger
        self._system: Optional[CombinationalSystem] = None
        self._cosm: Optional[CosmEngine] = None

    @property
    def system(self) -> CombinationalSystem:
        if self._system is None:
            self._system = _load(self.args.system)
            self.logger.info(f"시스템 로드: {self.args.system} (엔티티 {len(self._system.entities)}개)")
        return self._system

    @property
    def cosm(self) -> CosmEngine:
        if self._cosm is None:
            self._cosm = CosmEngine(self.system, self.config, self.logger)
        return self._cosm

    def patterns(self) -> PatternEngine:
        return PatternEngine(self.system, self.config, cosm=self.cosm, logger=self.logger)


# --- 서브커맨드 ---

def cmd_validate(ctx: Context) -> str:
    system = ctx.system
    payload: Dict[str, Any] = {
        "valid": True,
        "fingerprint": system_fingerprint(system),
        "entities": len(system.entities),
        "atoms": len(system.atoms),
        "operators": list(system.operator_ids),
        "reactions": len(system.reactions),
        "measures": [spec.id for spec in system.measures],
        "gamma": system.gamma is not None,
    }
    if ctx.args.filtration:
        payload["filtration"] = validate_filtration(system).to_dict()
    return _dump(payload)


def cmd_simplicity(ctx: Context) -> str:
    args = ctx.args
    system = ctx.system
    measure = system.measure(args.measure)
    if args.expression:
        expr = parse_expression(args.expression)
        return _dump({
            "measure": measure.id,
            "expression": str(expr),
            "result": ctx.cosm.evaluate(expr),
            "value": format_cost(ctx.cosm.expression_cost(args.measure, expr)),
            "witnessDerivation": postorder_addresses(expr),
        })

    if args.oracle:
        value = ctx.cosm.oracle_simplicity(args.measure, args.entity, args.context, args.mode)
        derivation: List[str] = []
    elif args.mode == SEQUENCE:
        plan = ctx.cosm.sequence_plan(args.measure, args.entity, args.context)
        value = plan.value
        derivation = [str(r) for r in plan.plan]
    else:
        value = ctx.cosm.relative_simplicity(args.measure, args.entity, args.context, args.mode)
        witness = ctx.cosm.witness(args.measure, args.entity, args.context, args.mode)
        derivation = postorder_addresses(witness) if witness is not None else []
    return _dump({
        "entity": args.entity,
        "measure": measure.id,
        "context": args.context,
        "mode": args.mode,
        "value": format_cost(value),
        "witnessDerivation": derivation,
    })


def cmd_multiset(ctx: Context) -> str:
    args = ctx.args
    elements = parse_multiset(args.elements)
    result = ctx.cosm.multiset_simplicity(args.measure, elements, args.solver, args.context)
    payload = result.to_dict()
    payload.update({
        "measure": ctx.system.measure(args.measure).id,
        "context": args.context,
        "solver": args.solver,
        "elements": elements,
    })
    return _dump(payload)


def cmd_bundle(ctx: Context) -> str:
    args = ctx.args
    engine = CosmosEngine(ctx.system, ctx.config, ctx.logger)
    found = engine.oracle_bundle(args.entity, args.context) if args.oracle else engine.bundle(args.entity, args.context)
    return _dump({
        "entity": args.entity,
        "context": args.context,
        "measures": [spec.id for spec in ctx.system.measures],
        "bundle": found.to_json(),
    })


def cmd_pattern(ctx: Context) -> str:
    args = ctx.args
    engine = ctx.patterns()
    if args.frontier:
        records = engine.multipattern_frontier(args.target, args.context, args.denominator)
    else:
        engine.require_measures()
        ctx.system.require_entity(args.context, path="context")
        records = engine.records(args.target, args.context, args.denominator)

    if args.output == CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        measures = [spec.id for spec in ctx.system.measures[1:]]
        writer.writerow(["y", "z", "op", "classification"] + measures)
        for r in records:
            writer.writerow([r.y, r.z, r.op, r.classification] +
                            ["undefined" if v is None else format_cost(v) for v in r.intensities])
        return buffer.getvalue()

    return _dump({
        "target": args.target,
        "context": args.context,
        "frontier": args.frontier,
        "records": [r.to_dict() for r in records],
    })


def cmd_hierarchy(ctx: Context) -> str:
    args = ctx.args
    extras = args.diagnose or args.associativity or args.gamma or args.transitivity
    if args.output == DOT and extras:
        raise UsageError("--output dot 은 진단 플래그와 함께 쓸 수 없습니다")

    system = ctx.system
    settings = ctx.config.hierarchy
    sampling = (args.diagnose or args.associativity) and len(system.entities) > settings.chain_entity_cap
    if sampling and args.seed is None:
        raise UsageError(f"엔티티가 {settings.chain_entity_cap}개를 넘어 체인을 샘플링하므로 --seed 가 필요합니다")

    graph = build_subpattern_graph(system, ctx.config, args.context, args.positions, args.relation,
                                   ctx.patterns(), ctx.logger)
    if args.output == DOT:
        return to_dot(graph)

    payload: Dict[str, Any] = {"graph": graph.to_dict()}
    diagnostics = None
    if args.diagnose or args.associativity:
        diagnostics = order_diagnostics(graph, system, settings.chain_entity_cap, settings.sample_size,
                                        args.seed if args.seed is not None else 0,
                                        ctx.config.engine.workers, ctx.logger)
        payload["diagnostics"] = diagnostics.to_dict()
    if args.associativity:
        report = cost_associativity(system, logger=ctx.logger)
        payload["associativity"] = report.to_dict()
        payload["bound"] = hierarchy_bound(report, diagnostics).to_dict()
    if args.gamma:
        payload["gamma"] = gamma_check(system, ctx.config, w=args.context, cosm=ctx.cosm,
                                       logger=ctx.logger).to_dict()
    if args.transitivity:
        payload["transitivity"] = transitivity_composition_check(
            system, ctx.config, args.context, args.transitivity, cosm=ctx.cosm, logger=ctx.logger).to_dict()
    return _dump(payload)


def cmd_metrics(ctx: Context) -> str:
    args = ctx.args
    if args.compare and args.output == CSV:
        raise UsageError("--compare 는 JSON 출력에서만 쓸 수 있습니다")
    alpha = ctx.config.metric.alpha if args.alpha is None else args.alpha
    construction = args.construction or ctx.config.metric.construction
    workers = ctx.config.engine.workers

    graph = build_subpattern_graph(ctx.system, ctx.config, args.context, engine=ctx.patterns(), logger=ctx.logger)
    tanimoto = tanimoto_metrics(graph, alpha, workers)
    table = tanimoto
    transport = None
    if construction == HUTCHINSON or args.compare:
        transport = hutchinson_metrics(graph, alpha, tanimoto, workers, ctx.logger)
        if construction == HUTCHINSON:
            table = transport
    if args.output == CSV:
        return table.to_csv()

    payload = table.to_dict()
    if args.compare:
        payload["rankCorrelation"] = format_cost(rank_correlation(tanimoto, transport))
    return _dump(payload)


def cmd_coherence(ctx: Context) -> str:
    args = ctx.args
    updates = {}
    if args.membership:
        updates["membership"] = args.membership
    if args.initial:
        updates["initial_d_i"] = args.initial
    config = ctx.config
    if updates:
        config = config.model_copy(update={"dualnet": config.dualnet.model_copy(update=updates)})
    report = fixed_point_iteration(ctx.system, config, k=args.k, alpha=args.alpha,
                                   max_iter=args.iterate or 1, tolerance=args.tol,
                                   w=args.context, logger=ctx.logger)
    return _dump(report.to_dict())


def cmd_oracle_check(ctx: Context) -> str:
    args = ctx.args
    entities = None if args.all else [args.entity]
    report = oracle_check(ctx.system, ctx.config, entities, args.context, ctx.cosm, ctx.logger)
    return _dump(report.to_dict())


def cmd_generate(ctx: Context) -> str:
    args = ctx.args
    if args.fixtures:
        if args.param or args.out:
            raise UsageError("--fixtures 는 --param, --out 과 함께 쓸 수 없습니다")
        written = write_fixtures(args.fixtures, ctx.logger)
        return _dump({"written": [str(p) for p in written]})

    if args.out is None:
        raise UsageError("--family 에는 --out 이 필요합니다")
    system = generate_builtin(args.family, dict(args.param), ctx.logger)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, 'w', encoding='utf-8') as f:
        f.write(serialize_system(system))
    return _dump({
        "written": [str(args.out)],
        "family": args.family,
        "fingerprint": system_fingerprint(system),
        "entities": len(system.entities),
        "reactions": len(system.reactions),
    })


COMMANDS: Dict[str, Callable[[Context], str]] = {
    "validate": cmd_validate,
    "simplicity": cmd_simplicity,
    "multiset": cmd_multiset,
    "bundle": cmd_bundle,
    "pattern": cmd_pattern,
    "hierarchy": cmd_hierarchy,
    "metrics": cmd_metrics,
    "coherence": cmd_coherence,
    "oracle-check": cmd_oracle_check,
    "generate": cmd_generate,
}


def _configure(args: argparse.Namespace) -> CosmConfig:
    config = CosmConfig.from_environment(args.config)
    updates: Dict[str, Any] = {}
    if args.threads is not None:
        updates["workers"] = args.threads
    if args.no_cache:
        updates["use_cache"] = False
    if updates:
        config.engine = config.engine.model_copy(update=updates)
    return config


def run(argv: Optional[Sequence[str]] = None) -> int:
    """명령 실행 후 종료 코드 반환"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    if args.command == "simplicity" and not (args.entity or args.expression):
        parser.print_usage(sys.stderr)
        print("cosmkit simplicity: --entity 또는 --expression 이 필요합니다", file=sys.stderr)
        return 2

    try:
        config = _configure(args)
        logger = setup_logging(args.log_level or config.logging.level)
        ctx = Context(args, config, logger)
        output = COMMANDS[args.command](ctx)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"cosmkit {args.command}: {e}", file=sys.stderr)
        return 2
    except CosmError as e:
        sys.stderr.write(_dump(e.to_dict()))
        return 1
    except (OSError, ValueError) as e:
        # 설정 파일 누락, pydantic 검증 실패 등
        sys.stderr.write(_dump({"code": "config_error", "message": str(e), "path": "config"}))
        return 1

    sys.stdout.write(output)
    return 0
