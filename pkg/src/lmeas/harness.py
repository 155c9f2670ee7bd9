"""Scenarios and end-to-end verifiers for the decomposition-convergence theorems.

A :class:`Scenario` bundles a filter, a family n -> m_n with its limit, a
reference measure nu, named regulators and the sampled sets the hypothesis
audits quantify over.  Each verifier returns a :class:`TheoremReport`; a
report carries a violation flag only when every audited hypothesis holds and
the conclusion fails.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import sexpr as S
from .decompose import (
    common_witness, lebesgue_decompose, positive_support, sobczyk_hammer_decompose,
    yosida_hewett_decompose,
)
from .descriptors import (
    EMPTY, ArithProg, BlockUnion, Finite, NATURALS, Region, Segment, SetDescriptor, WHOLE,
    as_region,
)
from .families import (
    BlockSplit, Constant, MeasureFamily, Perturbation, PointMasses, SchurTriangle, Zero,
)
from .filters import PartitionFilter, filter_o_convergence
from .lattice import Regulator, Scaled, Sequence, Sum, Vec, Verdict, conjoin, Outcome
from .measures import (
    Charge, DisjointFamily, ValueInterval, block_family, evaluate, singleton_family,
)
from .regulators import (
    HypothesisError, convergence_audit, finale_verify, nuovoschur_verify, schur_regulator,
    schur_verify, uniform_sbounded_check,
)

SCHEMA_VERSION = 1
SUITE_VERSION = 1
THEOREMS = ("teokyber", "main", "finale", "nuovoschur", "schur",
            "corollary-finale", "corollary-nuovoschur")


class ScenarioError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scenarios


@dataclass
class Scenario:
    name: str
    theorem: str
    filter: PartitionFilter
    family: MeasureFamily
    family_text: str
    regulators: dict
    sample_sets: list
    depth: int = 20
    seed: int = 0
    nu: Optional[Charge] = None
    ideal_sample: list = field(default_factory=list)
    disjoint: str = "singletons"
    u: Optional[Vec] = None
    random_samples: int = 0

    @property
    def limit(self) -> Charge:
        return self.family.limit

    def H(self) -> DisjointFamily:
        return singleton_family() if self.disjoint == "singletons" else block_family(self.filter)

    def samples(self) -> list:
        """Declared sample sets plus the seeded random progressions."""
        rnd = random.Random(self.seed)
        extra = []
        for _ in range(self.random_samples):
            d = rnd.randint(2, 16)
            extra.append(ArithProg(rnd.randrange(d), d))
        return list(self.sample_sets) + extra

    def regulator(self, key: str) -> Regulator:
        if key not in self.regulators:
            raise ScenarioError(f"scenario {self.name!r} needs regulator {key!r}")
        return self.regulators[key]

    def with_overrides(self, depth: Optional[int] = None, seed: Optional[int] = None) -> "Scenario":
        import copy
        out = copy.copy(self)
        if depth is not None:
            out.depth = depth
        if seed is not None:
            out.seed = seed
        return out


def _load_family(node) -> MeasureFamily:
    h = node.head
    if h == "perturbation":
        S._expect(node, h, 2)
        return Perturbation(S.load_charge(node[1]), S.load_charge(node[2]))
    if h == "constant":
        S._expect(node, h, 1)
        return Constant(S.load_charge(node[1]))
    if h == "zero":
        S._expect(node, h, 1)
        return Zero(S._int(node[1]))
    if h == "schur-triangle":
        S._expect(node, h, 0)
        return SchurTriangle()
    if h == "point-masses":
        S._expect(node, h, 2)
        return PointMasses(S.load_vec(node[1]), S.load_descriptor(node[2]))
    if h == "block-split":
        S._expect(node, h, 2)
        return BlockSplit(S.load_charge(node[1]), S.load_descriptor(node[2]))
    raise S._err(node, f"unknown family form {h!r}")


def _fields(node) -> dict:
    out = {}
    for part in node[2:]:
        if not isinstance(part, S.Node) or not part or isinstance(part[0], S.Node):
            raise S._err(part, "scenario fields are (keyword ...) forms")
        if part.head in out:
            raise S._err(part, f"duplicate field {part.head!r}")
        out[part.head] = part
    return out


def load_scenario(text: str, source: str = "") -> Scenario:
    try:
        node = S.parse_one(text, source)
        return _scenario_from_node(node)
    except S.SexprError as e:
        if source and not e.source:
            raise S.SexprError(str(e).split(": ", 1)[-1], e.line, e.col, source) from None
        raise


def _scenario_from_node(node) -> Scenario:
    node = S._expect(node, "scenario")
    if len(node) < 2 or isinstance(node[1], S.Node):
        raise S._err(node, "scenario needs a name")
    fs = _fields(node)
    known = {"theorem", "filter", "depth", "seed", "nu", "family", "regulators", "samples",
             "ideal-samples", "disjoint", "u", "random-samples"}
    for k, part in fs.items():
        if k not in known:
            raise S._err(part, f"unknown scenario field {k!r}")
    for k in ("theorem", "filter", "family", "regulators", "samples"):
        if k not in fs:
            raise S._err(node, f"scenario needs a ({k} ...) field")
    theorem = S._expect(fs["theorem"], "theorem", 1)[1]
    if theorem not in THEOREMS:
        raise S._err(fs["theorem"], f"unknown theorem id {theorem!r}")
    try:
        regs = {}
        for r in fs["regulators"][1:]:
            if not isinstance(r, S.Node) or len(r) != 2 or isinstance(r[0], S.Node):
                raise S._err(r, "regulators are (name REGULATOR) pairs")
            regs[str(r[0])] = S.load_regulator(r[1])
        fam_node = S._expect(fs["family"], "family", 1)[1]
        disjoint = S._expect(fs["disjoint"], "disjoint", 1)[1] if "disjoint" in fs else "singletons"
        if disjoint not in ("singletons", "blocks"):
            raise S._err(fs["disjoint"], "disjoint is 'singletons' or 'blocks'")
        depth = S._int(S._expect(fs["depth"], "depth", 1)[1]) if "depth" in fs else 20
        if depth < 4:
            raise S._err(fs["depth"], "depth must be at least 4")
        return Scenario(
            name=str(node[1]),
            theorem=str(theorem),
            filter=S.load_filter(S._expect(fs["filter"], "filter", 1)[1]),
            family=_load_family(fam_node),
            family_text=_canonical(fam_node),
            regulators=regs,
            sample_sets=[S.load_descriptor(d) for d in fs["samples"][1:]],
            depth=depth,
            seed=S._int(S._expect(fs["seed"], "seed", 1)[1]) if "seed" in fs else 0,
            nu=S.load_charge(S._expect(fs["nu"], "nu", 1)[1]) if "nu" in fs else None,
            ideal_sample=[S.load_descriptor(d) for d in fs["ideal-samples"][1:]] if "ideal-samples" in fs else [],
            disjoint=str(disjoint),
            u=S.load_vec(S._expect(fs["u"], "u", 1)[1]) if "u" in fs else None,
            random_samples=S._int(S._expect(fs["random-samples"], "random-samples", 1)[1])
            if "random-samples" in fs else 0,
        )
    except S.SexprError:
        raise
    except ValueError as e:
        raise S._err(node, str(e)) from None


def _canonical(node) -> str:
    if isinstance(node, S.Node):
        return "(" + " ".join(_canonical(x) for x in node) + ")"
    return str(node)


def dump_scenario(s: Scenario) -> str:
    lines = [f"(scenario {s.name}",
             f"  (theorem {s.theorem})",
             f"  (filter {S.dump_filter(s.filter)})",
             f"  (depth {s.depth})",
             f"  (seed {s.seed})"]
    if s.nu is not None:
        lines.append(f"  (nu {S.dump_charge(s.nu)})")
    lines.append(f"  (family {s.family_text})")
    regs = " ".join(f"({k} {S.dump_regulator(v)})" for k, v in sorted(s.regulators.items()))
    lines.append(f"  (regulators {regs})")
    lines.append("  (samples" + "".join(f" {d}" for d in s.sample_sets) + ")")
    if s.ideal_sample:
        lines.append("  (ideal-samples" + "".join(f" {d}" for d in s.ideal_sample) + ")")
    lines.append(f"  (disjoint {s.disjoint})")
    if s.u is not None:
        lines.append(f"  (u {S.dump_vec(s.u)})")
    if s.random_samples:
        lines.append(f"  (random-samples {s.random_samples})")
    return "\n".join(lines) + ")\n"


# ---------------------------------------------------------------------------
# reports


def jsonable(x):
    from .lattice import Regulator as R
    if isinstance(x, Verdict):
        return {"outcome": x.outcome.value, "witness": jsonable(x.witness), "depth": x.depth}
    if isinstance(x, Vec):
        return S.dump_vec(x)
    if isinstance(x, Fraction):
        return S.fmt_rat(x)
    if isinstance(x, SetDescriptor):
        return str(x)
    if isinstance(x, Region):
        return S.dump_region(x)
    if isinstance(x, R):
        return S.dump_regulator(x)
    if isinstance(x, Charge):
        return S.dump_charge(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, str)):
        return x
    return str(x)


@dataclass
class TheoremReport:
    theorem_id: str
    scenario: str
    hypothesis_audit: list
    conclusion: Verdict
    derived_regulator: Optional[Regulator]
    decomposition_traces: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    depth: int = 0
    seed: int = 0

    @property
    def violation_flag(self) -> bool:
        return self.conclusion.is_fails and all(v.is_holds for _, v in self.hypothesis_audit)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "theorem": self.theorem_id,
            "depth": self.depth,
            "seed": self.seed,
            "hypothesis_audit": [{"name": n, **jsonable(v)} for n, v in self.hypothesis_audit],
            "conclusion": jsonable(self.conclusion),
            "derived_regulator": jsonable(self.derived_regulator),
            "decomposition_traces": jsonable(self.decomposition_traces),
            "notes": jsonable(self.notes),
            "violation_flag": self.violation_flag,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _report(s: Scenario, theorem: str, hyps, conclusion, reg, traces=(), notes=None) -> TheoremReport:
    return TheoremReport(theorem, s.name, list(hyps), conclusion, reg, list(traces), dict(notes or {}),
                         s.depth, s.seed)


# ---------------------------------------------------------------------------
# verifiers


def _part_convergence(s: Scenario, part_of: Callable[[Charge], Charge], A, reg: Regulator) -> Verdict:
    """(o_F)-convergence of n -> part(m_n)(A) - part(m)(A) to 0."""
    fam, depth = s.family, s.depth
    limit_part = part_of(fam.limit)
    region = as_region(A)

    def term(n: int) -> Vec:
        v = evaluate(part_of(fam.member(n)), region, depth) - evaluate(limit_part, region, depth)
        if not v.is_exact:
            return _inexact(n)
        return v.partial

    seq = Sequence(_memo(term), fam.envelope, fam.exceptional, None, "part")
    return filter_o_convergence(s.filter, seq, Vec.zero(fam.dim), reg, depth)


def _inexact(n):
    from .families import InexactValue
    raise InexactValue(f"part value of member {n} is not exact")


def _memo(fn):
    from functools import lru_cache
    return lru_cache(maxsize=None)(fn)


def _audit(s: Scenario, reg: Regulator) -> Verdict:
    A, v = convergence_audit(s.family, s.filter, reg, s.samples(), s.depth)
    if A is not None:
        return Verdict.fails({"A": str(A), "detail": v.witness}, s.depth)
    return v


def _trace_value(m: Charge, depth: int) -> str:
    return S.dump_vec(evaluate(m, WHOLE, depth).partial)


def verify_teokyber(s: Scenario) -> TheoremReport:
    """Lebesgue and Sobczyk-Hammer parts of a convergent σ-additive family converge
    in the same way, through the common witness sets U and V."""
    fam, depth, b = s.family, s.depth, s.regulator("b")
    members = fam.members(depth)
    if any(m.has_charge for m in members) or fam.limit.has_charge:
        raise ScenarioError("the σ-additive decomposition theorem needs chargeless measures")
    if s.nu is None:
        raise ScenarioError("scenario needs a reference measure nu")
    audit = _audit(s, b)
    hyps = [("pointwise convergence", audit)]
    if not audit.is_holds:
        return _report(s, "teokyber", hyps, Verdict.unknown(depth), b)
    leb = [lebesgue_decompose(m, s.nu, depth) for m in members + [fam.limit]]
    sh = [sobczyk_hammer_decompose(m, depth) for m in members + [fam.limit]]
    U = common_witness(leb)
    V = common_witness(sh)
    parts = {"<": U, "⊥": ~U, "s": V, "a": ~V}
    verdicts, identity_ok = [], True
    for name, R in parts.items():
        for A in s.samples():
            AR = as_region(A) & R
            for n in range(1, depth + 1):
                lhs = evaluate(members[n - 1].restrict(R), A, depth) - evaluate(fam.limit.restrict(R), A, depth)
                rhs = evaluate(fam.difference(n), AR, depth)
                if lhs.partial != rhs.partial or abs(lhs.partial) != abs(rhs.partial):
                    identity_ok = False
            verdicts.append(filter_o_convergence(s.filter, fam.sequence(AR, depth), Vec.zero(fam.dim), b, depth))
    conclusion = conjoin(verdicts, depth)
    if not identity_ok:
        conclusion = Verdict.fails({"restriction_identity": False}, depth)
    traces = [{"n": n, "U": U, "V": V,
               "lebesgue": [_trace_value(leb[n - 1].partA, depth), _trace_value(leb[n - 1].partB, depth)],
               "sobczyk_hammer": [_trace_value(sh[n - 1].partA, depth), _trace_value(sh[n - 1].partB, depth)]}
              for n in range(1, min(depth, 4) + 1)]
    notes = {"restriction_identity": identity_ok, "parts": list(parts), "regulator": "b"}
    return _report(s, "teokyber", hyps, conclusion, b, traces, notes)


def _lebesgue_parts(m: Charge, nu: Charge):
    E = positive_support(nu)
    ac, sing = m.sigma_part().restrict(E), m.sigma_part().restrict(~E)
    if m.has_charge:
        if nu.has_charge:
            ac = ac + m.charge_part()
        else:
            sing = sing + m.charge_part()
    return ac, sing


PART_MAPS = {
    "sigma": lambda nu: (lambda m: m.sigma_part()),
    "charge": lambda nu: (lambda m: m.charge_part()),
    "continuous": lambda nu: (lambda m: m.diffuse_part()),
    "atomic": lambda nu: (lambda m: m - m.diffuse_part()),
    "absolutely-continuous": lambda nu: (lambda m: _lebesgue_parts(m, nu)[0]),
    "singular": lambda nu: (lambda m: _lebesgue_parts(m, nu)[1]),
}


def verify_main(s: Scenario, r: Optional[Regulator] = None, stage: Optional[list] = None) -> TheoremReport:
    """Uniformly s-bounded, pointwise (o_F)-convergent finitely additive families:
    all decomposition parts converge, regulated by 2r + b."""
    fam, depth, b = s.family, s.depth, s.regulator("b")
    r = r or s.regulator("r")
    hyps = list(stage or [])
    uni = uniform_sbounded_check(fam, s.H(), r, depth)
    hyps.append(("uniform s-boundedness", uni.verdict))
    audit = _audit(s, b)
    hyps.append(("pointwise convergence", audit))
    derived = Sum(Scaled(r, 2), b)
    if not all(v.is_holds for _, v in hyps):
        return _report(s, "main", hyps, Verdict.unknown(depth), derived)
    names = [k for k in PART_MAPS if s.nu is not None or k not in ("absolutely-continuous", "singular")]
    verdicts = []
    for name in names:
        part = PART_MAPS[name](s.nu)
        for A in s.samples():
            verdicts.append(_part_convergence(s, part, A, derived))
    resum_ok = True
    for n in range(1, min(depth, 8) + 1):
        m = fam.member(n)
        for A in s.samples():
            total = evaluate(m, A, depth).partial
            for a, bname in (("sigma", "charge"), ("continuous", "atomic")):
                got = (evaluate(PART_MAPS[a](s.nu)(m), A, depth) + evaluate(PART_MAPS[bname](s.nu)(m), A, depth)).partial
                resum_ok = resum_ok and got == total
    conclusion = conjoin(verdicts, depth)
    if not resum_ok:
        conclusion = Verdict.fails({"resum": False}, depth)
    traces = []
    for n in range(1, min(depth, 4) + 1):
        yh = yosida_hewett_decompose(fam.member(n), depth)
        traces.append({"n": n, "yosida_hewett": [_trace_value(yh.partA, depth), _trace_value(yh.partB, depth)]})
    notes = {"parts": names, "regulator": "2r + b",
             "uniformity_thresholds": uni.thresholds}
    return _report(s, "main", hyps, conclusion, derived, traces, notes)


def _stage_one(s: Scenario, mode: str):
    fam, depth = s.family, s.depth
    b, q = s.regulator("b"), s.regulator("q")
    if mode == "finale":
        return finale_verify(fam, s.filter, b, q, s.H(), s.ideal_sample, depth, s.samples())
    if s.u is None:
        raise ScenarioError("the F-uniform theorem needs a bound u")
    return nuovoschur_verify(fam, s.filter, b, q, s.u, s.H(), s.samples(), depth)


def verify_stage(s: Scenario, mode: str) -> TheoremReport:
    try:
        check = _stage_one(s, mode)
    except HypothesisError as e:
        return _report(s, mode, [(e.hypothesis, e.verdict)], Verdict.unknown(s.depth), None)
    notes = {"thresholds": check.report.thresholds if check.report else {}}
    return _report(s, mode, check.hypotheses, check.verdict, check.regulator, (), notes)


def verify_corollaries(s: Scenario, mode: str) -> TheoremReport:
    """Stage 1 establishes uniform (or F-uniform) s-boundedness; stage 2 runs
    the finitely additive decomposition theorem with the derived regulator."""
    first = verify_stage(s, mode)
    tid = f"corollary-{mode}"
    if not first.conclusion.is_holds or not all(v.is_holds for _, v in first.hypothesis_audit):
        first.theorem_id = tid
        return first
    stage = [(f"{mode}: {n}", v) for n, v in first.hypothesis_audit] + [(f"{mode}: conclusion", first.conclusion)]
    second = verify_main(s, first.derived_regulator, stage)
    second.theorem_id = tid
    second.notes["stage_one_regulator"] = S.dump_regulator(first.derived_regulator)
    return second


def verify_schur(s: Scenario) -> TheoremReport:
    b, a = s.regulator("b"), s.regulator("a")
    v = schur_verify(s.family, s.filter, b, a, s.samples() or None, s.depth)
    reg = schur_regulator(a, b)
    if v.is_fails and v.witness.get("stage") == "hypothesis":
        return _report(s, "schur", [(v.witness["hypothesis"], v)], Verdict.unknown(s.depth), reg)
    return _report(s, "schur", [("pointwise convergence", Verdict.holds({}, s.depth)),
                                ("σ-additivity regulator", Verdict.holds({}, s.depth))], v, reg)


def run_scenario(s: Scenario) -> TheoremReport:
    if s.theorem == "teokyber":
        return verify_teokyber(s)
    if s.theorem == "main":
        return verify_main(s)
    if s.theorem in ("finale", "nuovoschur"):
        return verify_stage(s, s.theorem)
    if s.theorem == "schur":
        return verify_schur(s)
    if s.theorem.startswith("corollary-"):
        return verify_corollaries(s, s.theorem.split("-", 1)[1])
    raise ScenarioError(f"unknown theorem id {s.theorem!r}")


# ---------------------------------------------------------------------------
# counterexample search


def counterexample_search(grammar, prop: Callable[[MeasureFamily], bool], budget: int, seed: int = 0):
    """First family in a seeded enumeration of ``grammar`` violating ``prop``."""
    if budget <= 0:
        return None
    candidates = list(grammar)
    random.Random(seed).shuffle(candidates)
    for fam in candidates[:budget]:
        if not prop(fam):
            return fam
    return None


def point_mass_grammar(f: PartitionFilter, blocks: int = 4, max_d: int = 4) -> list:
    """Point masses supported on single blocks and on short progressions."""
    out = [PointMasses(Vec([1]), BlockUnion(f, Finite((k,))), f"point-masses-block-{k}")
           for k in range(1, blocks + 1)]
    for d in range(2, max_d + 1):
        for a in range(d):
            out.append(PointMasses(Vec([1]), ArithProg(a, d), f"point-masses-ap-{a}-{d}"))
    return out


def convergence_without_uniformity(f: PartitionFilter, r: Regulator, b: Regulator, sample, depth: int,
                                   H: Optional[DisjointFamily] = None):
    """Property 'filter convergence on the sample implies uniform s-boundedness'."""
    H = H or singleton_family()

    def prop(fam: MeasureFamily) -> bool:
        A, v = convergence_audit(fam, f, b, sample, depth)
        if A is not None or not v.is_holds:
            return True
        return not uniform_sbounded_check(fam, H, r, depth).verdict.is_fails

    return prop


# ---------------------------------------------------------------------------
# the frozen builtin suite

_ATOMS4 = "(atoms (1 (vec 1/2)) (2 (vec 1/4)) (3 (vec 1/8)) (4 (vec 1/16)))"
_BASE = f"(charge (space countable) (dim 1) {_ATOMS4} (geometric) (diffuse))"
_G2 = "(geometric (vec 2) 1/2)"

BUILTINS = {
    "teokyber-perturbation": f"""(scenario teokyber-perturbation
  (theorem teokyber) (filter (singletons)) (depth 30) (seed 0)
  (nu (charge (space countable) (dim 1) (atoms (1 (vec 1)) (2 (vec 1)) (5 (vec 1))) (geometric) (diffuse)))
  (family (perturbation
    (charge (space countable) (dim 1) (atoms (1 (vec 1)) (2 (vec -1)) (3 (vec 2)) (7 (vec 1/3))) (geometric) (diffuse ((0 1/2) (vec 1))))
    (charge (space countable) (dim 1) (atoms (1 (vec 3)) (2 (vec -2)) (5 (vec 1))) (geometric) (diffuse))))
  (regulators (b (geometric (vec 12) 1/2)))
  (samples (not (finite)) (ap 0 2) (ap 1 2) (finite 1 3 5) (ap 4 1))
  (random-samples 3))""",
    "teokyber-constant": f"""(scenario teokyber-constant
  (theorem teokyber) (filter (dyadic-blocks)) (depth 20)
  (nu (charge (space countable) (dim 1) (atoms (2 (vec 1))) (geometric) (diffuse)))
  (family (constant (charge (space countable) (dim 2) (atoms (1 (vec 1 0)) (2 (vec 0 1))) (geometric) (diffuse ((1/4 1/2) (vec 2 2))))))
  (regulators (b (harmonic (vec 1 1))))
  (samples (not (finite)) (ap 0 2) (dyadic 1)))""",
    "teokyber-stationary-failure": """(scenario teokyber-stationary-failure
  (theorem teokyber) (filter (singletons)) (depth 24)
  (nu (charge (space countable) (dim 1) (atoms (1 (vec 1))) (geometric) (diffuse)))
  (family (point-masses (vec 1) (ap 0 2)))
  (regulators (b (geometric (vec 1) 1/2)))
  (samples (ap 1 2) (ap 0 2)))""",
    "main-charge-converging": f"""(scenario main-charge-converging
  (theorem main) (filter (singletons)) (depth 20)
  (nu (charge (space countable) (dim 1) (atoms (1 (vec 1)) (3 (vec 1))) (geometric) (diffuse)))
  (family (perturbation
    (charge (space countable) (dim 1) {_ATOMS4} (geometric) (diffuse ((0 1/2) (vec 1))) (at-infinity (vec 1) (singletons)))
    (charge (space countable) (dim 1) (atoms (1 (vec 1)) (2 (vec -1))) (geometric) (diffuse) (at-infinity (vec 1/2) (singletons)))))
  (regulators (b (geometric (vec 6) 1/2)) (r (geometric (vec 4) 1/2)))
  (samples (not (finite)) (finite 1 2 3) (ap 3 1) (finite 2)))""",
    "main-constant-charge": f"""(scenario main-constant-charge
  (theorem main) (filter (dyadic-blocks)) (depth 16)
  (family (perturbation
    (charge (space countable) (dim 1) {_ATOMS4} (geometric) (diffuse) (at-infinity (vec 2) (dyadic-blocks)))
    (charge (space countable) (dim 1) (atoms (2 (vec 1)) (3 (vec 1))) (geometric) (diffuse))))
  (regulators (b (geometric (vec 4) 1/2)) (r (geometric (vec 4) 1/2)))
  (samples (not (finite)) (dyadic 0) (not (dyadic 0)) (finite 2 3)))""",
    "main-diagonal-point-masses": f"""(scenario main-diagonal-point-masses
  (theorem main) (filter (singletons)) (depth 16)
  (family (point-masses (vec 1) (not (finite))))
  (regulators (b {_G2}) (r (geometric (vec 1) 1/2)))
  (samples (finite 1 2 3) (ap 4 1)))""",
    "finale-block-split": f"""(scenario finale-block-split
  (theorem finale) (filter (dyadic-blocks)) (depth 16)
  (family (block-split {_BASE} (dyadic 0)))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)) (ap 0 2) (dyadic 1) (finite 1 2))
  (ideal-samples (dyadic 0) (blocks (dyadic-blocks) (finite 1 2)) (finite 1 2 3 4 5)))""",
    "finale-zero": f"""(scenario finale-zero
  (theorem finale) (filter (dyadic-blocks)) (depth 12)
  (family (zero 1))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)))
  (ideal-samples (dyadic 0)))""",
    "nuovoschur-block-split": f"""(scenario nuovoschur-block-split
  (theorem nuovoschur) (filter (dyadic-blocks)) (depth 16)
  (family (block-split {_BASE} (dyadic 0)))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)) (ap 0 2) (dyadic 1))
  (u (vec 4)))""",
    "nuovoschur-zero": f"""(scenario nuovoschur-zero
  (theorem nuovoschur) (filter (ranges 1 0)) (depth 12)
  (family (zero 1))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)))
  (u (vec 1)))""",
    "schur-triangle": f"""(scenario schur-triangle
  (theorem schur) (filter (singletons)) (depth 40)
  (family (schur-triangle))
  (regulators (a {_G2}) (b {_G2}))
  (samples (not (finite)) (ap 0 2) (ap 1 2) (ap 0 3) (finite 1 2 3)))""",
    "schur-point-masses": f"""(scenario schur-point-masses
  (theorem schur) (filter (singletons)) (depth 64)
  (family (point-masses (vec 1) (not (finite))))
  (regulators (a {_G2}) (b {_G2}))
  (samples))""",
    "corollary-finale-block-split": f"""(scenario corollary-finale-block-split
  (theorem corollary-finale) (filter (dyadic-blocks)) (depth 12)
  (family (block-split {_BASE} (dyadic 0)))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)) (ap 0 2) (dyadic 1))
  (ideal-samples (dyadic 0) (finite 1 2 3)))""",
    "corollary-finale-ideal-failure": f"""(scenario corollary-finale-ideal-failure
  (theorem corollary-finale) (filter (dyadic-blocks)) (depth 16)
  (family (point-masses (vec 1) (dyadic 0)))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)) (ap 0 2) (dyadic 1))
  (ideal-samples (dyadic 0)))""",
    "corollary-nuovoschur-block-split": f"""(scenario corollary-nuovoschur-block-split
  (theorem corollary-nuovoschur) (filter (dyadic-blocks)) (depth 12)
  (family (block-split {_BASE} (dyadic 0)))
  (regulators (b {_G2}) (q {_G2}))
  (samples (not (finite)) (ap 0 2) (dyadic 1))
  (u (vec 4)))""",
}


def builtin(name: str) -> Scenario:
    if name not in BUILTINS:
        raise ScenarioError(f"unknown builtin scenario {name!r}")
    return load_scenario(BUILTINS[name], f"<builtin:{name}>")


def list_builtins() -> list:
    """(name, theorem) rows, sorted by name."""
    return sorted((name, builtin(name).theorem) for name in BUILTINS)
