"""CLI entry point for the toolkit."""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import yaml

from umt import __version__
from umt.config import get_settings
from umt.entities import Entity, parse_entity
from umt.errors import PreconditionError, UmtError
from umt.filters import extend_to_ultrafilter, generate_filter, has_fip, principal
from umt.logic import format_formula, formula_depth, free_variables, parse_formula
from umt.mostowski import collapse, nu_levels, truncate, verify_collapse
from umt.reports import CheckReport
from umt.saturation import (
    enlargement_pipeline,
    extend_function,
    first_violation,
    is_hyperfinite,
    local_bounds,
    localize,
    monotone_antiadditive,
    support_of,
)
from umt.saturation.reversals import exit_levels
from umt.schemas import (
    CompactnessFile,
    EpsilonModelFile,
    FamilyFile,
    IndexedFamilyFile,
    ReversalFile,
    RunReport,
    StarContextFile,
    StructureFile,
    UltrafilterFile,
    load_file,
)
from umt.starmap import (
    check_star_invariants,
    check_step4_laws,
    check_transfer,
    internal_definition,
    star_algebra_suite,
    star_comprehension,
)
from umt.superstructure import check_closure_properties, enumerate_vn, eval_bounded, vn_size
from umt.ultraproduct import (
    build_reduced_product,
    build_ultraproduct,
    check_congruence,
    compactness_witness,
    diagonal_embedding,
    los_check,
    principal_collapse,
)

logger = logging.getLogger(__name__)

THEOREM_MAP = Path(__file__).parent / "data" / "theorem_map.yaml"

Outcome = Tuple[List[CheckReport], Any]
Handler = Callable[[argparse.Namespace], Outcome]


# ============================================================================
# Argument helpers
# ============================================================================


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _names(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _bindings(items: Optional[Sequence[str]]) -> Dict[str, Entity]:
    """``name=entity`` pairs from repeated flags."""
    env = {}
    for item in items or ():
        name, sep, literal = item.partition("=")
        if not sep or not name.strip():
            raise PreconditionError("Bindings are written name=entity", item)
        env[name.strip()] = parse_entity(literal)
    return env


def _entity_map(items: Optional[Sequence[str]]) -> Dict[Entity, Entity]:
    mapping = {}
    for item in items or ():
        source, sep, target = item.partition("=")
        if not sep:
            raise PreconditionError("Map entries are written entity=entity", item)
        mapping[parse_entity(source)] = parse_entity(target)
    return mapping


def _context(args: argparse.Namespace):
    return load_file(args.context, StarContextFile).to_domain(args.canonicalize)


# ============================================================================
# Handlers: syntax and superstructure
# ============================================================================


def cmd_parse(args: argparse.Namespace) -> Outcome:
    formula = parse_formula(args.formula)
    result = {"formula": format_formula(formula), "depth": formula_depth(formula), "free": sorted(free_variables(formula))}
    return [], result


def cmd_eval(args: argparse.Namespace) -> Outcome:
    formula = parse_formula(args.formula)
    return [], eval_bounded(formula, _bindings(args.bind))


def cmd_vn(args: argparse.Namespace) -> Outcome:
    base = _names(args.base)
    report = CheckReport("vn-size")
    enumerated = len(enumerate_vn(base, args.n))
    predicted = vn_size(len(base), args.n)
    report.statistics.update({"enumerated": enumerated, "recurrence": predicted})
    if enumerated != predicted:
        report.fail("enumeration and recurrence disagree", enumerated=enumerated, recurrence=predicted)
    return [report], enumerated


def cmd_closure_check(args: argparse.Namespace) -> Outcome:
    return [check_closure_properties(_names(args.base), args.n, seed=args.seed)], None


# ============================================================================
# Handlers: filters and ultraproducts
# ============================================================================


def cmd_filters(args: argparse.Namespace) -> Outcome:
    family = load_file(args.family, FamilyFile).to_domain()
    if args.action == "fip":
        return [], has_fip(family)
    if args.action == "generate":
        return [], {"core": sorted(generate_filter(family).core)}
    return [], {"principal": extend_to_ultrafilter(family).principal_point}


def _family_and_filter(args: argparse.Namespace):
    fam = load_file(args.family, IndexedFamilyFile).to_domain()
    source = load_file(args.ultrafilter, UltrafilterFile)
    return fam, source, list(fam.index_set)


def cmd_ultraproduct(args: argparse.Namespace) -> Outcome:
    fam, source, indices = _family_and_filter(args)
    if args.reduced:
        up = build_reduced_product(fam, source.to_filter(indices))
    else:
        up = build_ultraproduct(fam, source.to_domain(indices))
    result = StructureFile.from_domain(up.structure).model_dump()
    return [check_congruence(up, seed=args.seed)], result


def cmd_los_check(args: argparse.Namespace) -> Outcome:
    fam, source, indices = _family_and_filter(args)
    F = source.to_filter(indices)
    reports = [los_check(fam, F, depth=args.depth, seed=args.seed)]
    if F.is_ultra:
        _, collapse_report = principal_collapse(fam, F.as_ultrafilter())
        reports.append(collapse_report)
    return reports, None


def cmd_diagonal(args: argparse.Namespace) -> Outcome:
    structure = load_file(args.structure, StructureFile).to_domain()
    indices = _names(args.index_set)
    U = principal(indices, args.point or indices[0])
    h, report = diagonal_embedding(structure, indices, U, args.depth)
    return [report], h


def cmd_compactness(args: argparse.Namespace) -> Outcome:
    sentences, models = load_file(args.input, CompactnessFile).to_domain()
    model = compactness_witness(sentences, models)
    return [], StructureFile.from_domain(model).model_dump()


# ============================================================================
# Handlers: star map
# ============================================================================


def cmd_star_context(args: argparse.Namespace) -> Outcome:
    ctx = _context(args)
    result = {
        "point": ctx.point,
        "image_base": sorted(ctx.image_base),
        "tracked": len(ctx.tracked),
        "canonicalize": ctx.canonicalize,
    }
    return [check_star_invariants(ctx), check_step4_laws(ctx)], result


def cmd_transfer_check(args: argparse.Namespace) -> Outcome:
    ctx = _context(args)
    return [check_transfer(ctx, depth=args.depth, max_params=args.max_params, seed=args.seed)], None


def cmd_star_algebra(args: argparse.Namespace) -> Outcome:
    return [star_algebra_suite(_context(args))], None


def cmd_comprehension(args: argparse.Namespace) -> Outcome:
    ctx = _context(args)
    formula = parse_formula(args.formula)
    params = _bindings(args.param)
    target = parse_entity(args.set)
    if args.internal:
        return [], internal_definition(ctx, formula, target, params, var=args.var)
    left, _ = star_comprehension(ctx, formula, target, params, var=args.var)
    return [], left


def cmd_classify(args: argparse.Namespace) -> Outcome:
    ctx = _context(args)
    kind = ctx.classify(parse_entity(args.entity))
    return [], {"kind": kind.kind, "witness": kind.witness}


def cmd_hyperfinite(args: argparse.Namespace) -> Outcome:
    ctx = _context(args)
    witness = is_hyperfinite(ctx, parse_entity(args.entity))
    report = CheckReport("hyperfinite", statistics={"size": witness.size})
    if not witness.certified:
        report.fail("no standard finite base certified", base=witness.finite_base)
    return [report], {"size": witness.size, "bijection": witness.bijection, "base": witness.finite_base}


def cmd_enlargement(args: argparse.Namespace) -> Outcome:
    A, report = enlargement_pipeline(_names(args.base), parse_entity(args.target), k=args.k)
    return [report], A


def cmd_extend_function(args: argparse.Namespace) -> Outcome:
    ctx = _context(args)
    extended = extend_function(ctx, parse_entity(args.domain), parse_entity(args.codomain), _entity_map(args.map))
    return [], extended


# ============================================================================
# Handlers: order reversals and epsilon-models
# ============================================================================


def cmd_reversal_check(args: argparse.Namespace) -> Outcome:
    p = load_file(args.reversal, ReversalFile).to_domain()
    report = CheckReport("reversal", statistics={"local_bounds": local_bounds(p)})
    violation = first_violation(p, anti_additive=False)
    if violation is not None:
        report.fail("not an order reversal", pair=[p.label(s) for s in violation])
    anti = first_violation(p, anti_additive=True)
    report.statistics["anti_additive"] = anti is None
    if anti is not None:
        report.statistics["anti_additivity_witness"] = [p.label(s) for s in anti]
    return [report], None


def cmd_support(args: argparse.Namespace) -> Outcome:
    p = load_file(args.reversal, ReversalFile).to_domain()
    support = support_of(p)
    return [], {i: p.label(v) for i, v in support.items()}


def cmd_localize(args: argparse.Namespace) -> Outcome:
    data = load_file(args.reversal, ReversalFile)
    p = data.to_domain()
    if args.chain is not None:
        chain = [_names(link) for link in args.chain.split(";")]
    elif data.chain is not None:
        chain = data.chain
    else:
        raise PreconditionError("No chain given")
    localized = localize(p, chain)
    levels = exit_levels(chain, p.index_set)
    report = CheckReport("localize")
    if not localized.leq(p):
        report.fail("localized reversal exceeds the original")
    for i, bound in local_bounds(localized).items():
        if levels[i] is not None and bound >= levels[i]:
            report.fail("index bound exceeds its exit level", index=i, bound=bound, exit_level=levels[i])
    result = {"p": {str(localized.label(s)): sorted(localized(s)) for s in localized.subsets()}}
    if list(p.ground_set) == list(range(len(p.ground_set))):
        q = monotone_antiadditive(p)
        result["monotone"] = {str(q.label(s)): sorted(q(s)) for s in q.subsets()}
    return [report], result


def cmd_collapse(args: argparse.Namespace) -> Outcome:
    M = load_file(args.model, EpsilonModelFile).to_domain()
    r = collapse(M)
    return [verify_collapse(M, r, depth=args.depth)], {"h": r.h, "levels": r.levels}


def cmd_truncate(args: argparse.Namespace) -> Outcome:
    M = load_file(args.model, EpsilonModelFile).to_domain()
    T = truncate(M)
    result = {"carrier": list(T.carrier), "E": sorted(T.edges), "base": T.base, "levels": nu_levels(M)}
    return [], result


def cmd_paper_map(args: argparse.Namespace) -> Outcome:
    with open(THEOREM_MAP) as f:
        data = yaml.safe_load(f)
    return [], data.get("theorems", [])


HANDLERS: Dict[str, Handler] = {
    "parse": cmd_parse,
    "eval": cmd_eval,
    "vn": cmd_vn,
    "closure-check": cmd_closure_check,
    "filters": cmd_filters,
    "ultraproduct": cmd_ultraproduct,
    "los-check": cmd_los_check,
    "diagonal": cmd_diagonal,
    "compactness": cmd_compactness,
    "star-context": cmd_star_context,
    "transfer-check": cmd_transfer_check,
    "star-algebra": cmd_star_algebra,
    "comprehension": cmd_comprehension,
    "classify": cmd_classify,
    "hyperfinite": cmd_hyperfinite,
    "enlargement": cmd_enlargement,
    "extend-function": cmd_extend_function,
    "reversal-check": cmd_reversal_check,
    "support": cmd_support,
    "localize": cmd_localize,
    "collapse": cmd_collapse,
    "truncate": cmd_truncate,
    "paper-map": cmd_paper_map,
    "theorem-map": cmd_paper_map,
}


# ============================================================================
# Parser and dispatch
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="Formula depth (default from settings)")
    common.add_argument("--cap", type=int, default=None, help="Materialization cap (overrides UMT_CAP)")
    common.add_argument("--seed", type=int, default=None, help="Seed for sampled checks")
    common.add_argument("--json", action="store_true", help="Print the machine-readable report")
    common.add_argument("--canonicalize", type=_bool, default=None, help="Name atom classes by the atom itself")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="umt", description="Finite-scale universe model toolkit")
    parser.add_argument("--version", action="version", version=f"umt {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help, parents=[common])

    p = add("parse", "Parse and pretty-print a formula")
    p.add_argument("formula")

    p = add("eval", "Evaluate a bounded formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--bind", action="append", help="name=entity")

    p = add("vn", "Size of a superstructure level by enumeration and recurrence")
    p.add_argument("--base", required=True, help="Comma-separated atom names")
    p.add_argument("--n", type=int, required=True)

    p = add("closure-check", "Check the closure properties over a level")
    p.add_argument("--base", required=True)
    p.add_argument("--n", type=int, default=2)

    p = add("filters", "Finite intersection property, generated filter, ultrafilter extension")
    p.add_argument("action", choices=["fip", "generate", "extend"])
    p.add_argument("--family", required=True)

    for name, help in (("ultraproduct", "Build an ultraproduct"), ("los-check", "Run the Łoś suite")):
        p = add(name, help)
        p.add_argument("--family", required=True)
        p.add_argument("--ultrafilter", required=True)
        if name == "ultraproduct":
            p.add_argument("--reduced", action="store_true", help="Allow any filter")

    p = add("diagonal", "Diagonal embedding into an ultrapower")
    p.add_argument("--structure", required=True)
    p.add_argument("--index-set", default="0,1")
    p.add_argument("--point", default=None)

    p = add("compactness", "Ultraproduct of models of finite subsets")
    p.add_argument("--input", required=True)

    for name, help in (
        ("star-context", "Star map invariants and pointwise laws"),
        ("transfer-check", "Transfer for bounded formulas"),
        ("star-algebra", "Star algebra law suite"),
    ):
        p = add(name, help)
        p.add_argument("--context", required=True)
        if name == "transfer-check":
            p.add_argument("--max-params", type=int, default=2)

    p = add("comprehension", "Star comprehension or internal definition")
    p.add_argument("--context", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--param", action="append", help="name=entity")
    p.add_argument("--var", default="y")
    p.add_argument("--internal", action="store_true", help="Use the internal definition principle")

    for name, help in (("classify", "Standard, internal or external"), ("hyperfinite", "Hyperfinite listing")):
        p = add(name, help)
        p.add_argument("--context", required=True)
        p.add_argument("--entity", required=True)

    p = add("enlargement", "Enlargement pipeline over the subsets of a level")
    p.add_argument("--base", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--k", type=int, default=1)

    p = add("extend-function", "Internal extension of a function")
    p.add_argument("--context", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--codomain", required=True)
    p.add_argument("--map", action="append", help="entity=entity")

    for name, help in (
        ("reversal-check", "Order-reversal and anti-additivity checks"),
        ("support", "Support of an anti-additive reversal"),
        ("localize", "Localize a reversal along a chain"),
    ):
        p = add(name, help)
        p.add_argument("--reversal", required=True)
        if name == "localize":
            p.add_argument("--chain", default=None, help="Links separated by ';', indices by ','")

    for name, help in (("collapse", "Transitive collapse"), ("truncate", "Truncate by levels")):
        p = add(name, help)
        p.add_argument("--model", required=True)

    subparsers.add_parser(
        "paper-map",
        aliases=["theorem-map"],
        help="List covered results and the tests exercising them",
        parents=[common],
    )
    return parser


def _apply_overrides(args: argparse.Namespace) -> None:
    if args.cap is not None:
        os.environ["UMT_CAP"] = str(args.cap)
        get_settings.cache_clear()
    settings = get_settings()
    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.seed is None:
        args.seed = settings.seed


def dispatch(args: argparse.Namespace) -> RunReport:
    """Run one subcommand and fold its checks into a run report."""
    handler = HANDLERS[args.command]
    try:
        reports, result = handler(args)
    except UmtError as e:
        logger.debug(f"{args.command} refused its input: {e}")
        return RunReport.error(args.command, str(e), __version__, getattr(e, "witness", None))
    return RunReport.from_checks(args.command, reports, __version__, seed=args.seed, result=result)


def render_report(report: RunReport) -> None:
    print(f"{report.subcommand}: {report.verdict}")
    if report.statistics:
        print()
        print("Checks:")
        for check, stats in report.statistics.items():
            for key, value in stats.items():
                print(f"  {check}.{key} = {value}")
    if report.counterexamples:
        print()
        print("Counterexamples:")
        for c in report.counterexamples:
            witness = {k: v for k, v in c.items() if k not in ("check", "detail")}
            print(f"  [{c.get('check')}] {c.get('detail')}")
            if any(v is not None for v in witness.values()):
                print(f"    {witness}")
    if report.result is not None:
        print()
        print(f"Result: {report.result}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        sys.exit(2)
    _apply_overrides(args)
    report = dispatch(args)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        render_report(report)
    code = report.exit_code
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
