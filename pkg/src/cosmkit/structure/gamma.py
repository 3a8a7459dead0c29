"""
Γ 조합자 경로 - x ap ((Γ α w) β v) = (x ap w) ap v

결합성이 없는 적용 연산에서도 Γ 가 싸면 서브패턴 관계가 근사 부분순서가 된다.
전제 부등식은 양변의 σ(x) 를 소거한 형태로 평가한다.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..core.config import CosmConfig
from ..core.errors import GammaMissingError
from ..core.rational import Cost, format_cost, is_finite
from ..cosm.engine import CosmEngine
from ..cosm.fixpoint import FREE
from ..pattern.intensity import PatternEngine
from ..system.model import IDENTITY, CombinationalSystem, MeasureRef, Reaction
from .hierarchy import OrderDiagnostics, build_subpattern_graph, order_diagnostics


@dataclass
class GammaTriple:
    x: str
    w: str
    v: str
    lifted: str
    law_holds: bool
    y: Optional[str] = None
    z: Optional[str] = None
    premise_lhs: Optional[Cost] = None
    premise_rhs: Optional[Cost] = None
    c: Optional[Cost] = None

    @property
    def premise_holds(self) -> Optional[bool]:
        if self.premise_lhs is None:
            return None
        return self.premise_lhs <= self.premise_rhs

    def to_dict(self) -> Dict[str, object]:
        return {
            "triple": [self.x, self.w, self.v],
            "lifted": self.lifted,
            "lawHolds": self.law_holds,
            "y": self.y,
            "z": self.z,
            "premiseHolds": self.premise_holds,
            "premiseLhs": format_cost(self.premise_lhs) if self.premise_lhs is not None else None,
            "premiseRhs": format_cost(self.premise_rhs) if self.premise_rhs is not None else None,
            "c": format_cost(self.c) if self.c is not None else None,
        }


@dataclass
class GammaReport:
    combinator: str
    c: Cost
    triples: List[GammaTriple] = field(default_factory=list)
    diagnostics: Optional[OrderDiagnostics] = None

    @property
    def law_holds(self) -> bool:
        return all(t.law_holds for t in self.triples)

    @property
    def premise_holds(self) -> bool:
        return all(t.premise_holds is not False for t in self.triples)

    @property
    def conclusion_holds(self) -> Optional[bool]:
        """모든 체인에서 max_w I_{x,w}(z) ≥ −c"""
        if self.diagnostics is None:
            return None
        return self.diagnostics.transitivity_defect <= self.c

    def to_dict(self) -> Dict[str, object]:
        return {
            "combinator": self.combinator,
            "c": format_cost(self.c),
            "lawHolds": self.law_holds,
            "premiseHolds": self.premise_holds,
            "conclusionHolds": self.conclusion_holds,
            "diagnostics": self.diagnostics.to_dict() if self.diagnostics else None,
            "triples": [t.to_dict() for t in self.triples],
        }


def _outputs(system: CombinationalSystem, op: str, left: str, right: str) -> Set[str]:
    return set(system.react(op, left, right) or ())


def gamma_check(system: CombinationalSystem, config: Optional[CosmConfig] = None,
                measures: Optional[Sequence[MeasureRef]] = None, w: str = IDENTITY,
                diagnose: bool = True, cosm: Optional[CosmEngine] = None,
                logger: Optional[logging.Logger] = None) -> GammaReport:
    """재괄호 법칙, 전제 부등식, 체인 결론을 차례로 확인"""
    config = config or CosmConfig.create_default()
    logger = logger or logging.getLogger(__name__)
    gamma = system.gamma
    if gamma is None:
        raise GammaMissingError("Γ 조합자와 α/β 연산자가 선언되지 않았습니다", path="gamma")

    base, extended = measures or (1, config.pattern.extended_measure)
    cosm = cosm or CosmEngine(system, config, logger)
    ext = system.measure(extended)

    def sigma(x: str) -> Cost:
        return cosm.relative_simplicity(base, x, w, FREE)

    def star(op: str, left: str, right: str) -> Cost:
        return ext.reaction_cost(op, left, right, w)

    G = gamma.combinator
    lifts: List[Tuple[Reaction, Reaction, str]] = []
    for alpha in system.consumers(G):
        if alpha.op != gamma.alpha or alpha.left != G:
            continue
        for gw in alpha.products:
            for beta in system.consumers(gw):
                if beta.op != gamma.beta or beta.left != gw:
                    continue
                for lifted in beta.products:
                    lifts.append((alpha, beta, lifted))

    triples: List[GammaTriple] = []
    worst_c = Fraction(0)
    for alpha, beta, lifted in lifts:
        mid, lower = alpha.right, beta.right
        c = sigma(G) + star(alpha.op, alpha.left, alpha.right) + star(beta.op, beta.left, beta.right)
        for x in system.non_identity_entities:
            lhs = _outputs(system, gamma.apply, x, lifted)
            ys = _outputs(system, gamma.apply, x, mid)
            rhs: Set[str] = set()
            for y in ys:
                rhs |= _outputs(system, gamma.apply, y, lower)
            if not lhs and not rhs:
                continue

            triple = GammaTriple(x, mid, lower, lifted, law_holds=bool(lhs) and lhs == rhs)
            if triple.law_holds:
                y = next(y for y in sorted(ys, key=system.position) if _outputs(system, gamma.apply, y, lower))
                triple.y = y
                triple.z = sorted(lhs, key=system.position)[0]
                triple.premise_lhs = sigma(lifted) + star(gamma.apply, x, lifted)
                triple.premise_rhs = (sigma(mid) + sigma(lower) + star(gamma.apply, x, mid)
                                      + star(gamma.apply, y, lower) + c)
                triple.c = c
                if is_finite(c):
                    worst_c = max(worst_c, c)
            triples.append(triple)

    report = GammaReport(G, worst_c, triples)
    broken = [t for t in triples if not t.law_holds]
    if broken:
        logger.warning(f"재괄호 법칙 위반 {len(broken)}건 (첫 위반: {broken[0].x}, {broken[0].w}, {broken[0].v})")

    if diagnose:
        engine = PatternEngine(system, config, cosm=cosm, logger=logger)
        graph = build_subpattern_graph(system, config, w, engine=engine, logger=logger)
        report.diagnostics = order_diagnostics(
            graph, system, config.hierarchy.chain_entity_cap, config.hierarchy.sample_size,
            workers=config.engine.workers, logger=logger)
    logger.info(f"Γ 검사: 세 쌍 {len(triples)}개, c = {format_cost(worst_c)}")
    return report
