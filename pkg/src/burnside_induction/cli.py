#!/usr/bin/env python3
"""
burnside-induction command line
===============================
Batch reports on Burnside rings, Mackey functors, Dress induction,
Amitsur complexes, contraction repair and bifree bisets.

Exit codes: 0 on success, 1 when the report's verdict is false (disable
with --no-verdict-exit), 2 on usage errors and rejected requests.
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any

import pandas as pd

from . import __version__
from .amitsur import amitsur_complex, homotopy_from_element, with_contraction
from .bisets import (
    BifreeBiset,
    BisetFixture,
    BisetMorphism,
    SignedFixture,
    ZeroFixture,
    balanced_product,
    j_lower,
    j_upper,
    mackey_via_j_check,
    materialized_balanced_product,
    tau,
)
from .bqgr import bqgr
from .chains import (
    COHOMOLOGICAL,
    HOMOLOGICAL,
    ChainData,
    Filtration,
    check_exactness,
    load_chain,
    random_pseudo_complex,
    repair_filtered_truncated,
    repair_pseudo_complex,
    save_chain,
)
from .config import OUTPUT_FORMATS, RunConfig, load_config
from .dress import generating_element, induction_coefficients, is_dress_generating
from .exceptions import BurnsideError, ConfigError
from .groups import Group, group_from_spec, orientation_from_spec
from .gsets import GSet, parse_family_spec, parse_gmap_spec, parse_gset_spec
from .mackey import GreenRingData, functor_by_name
from .reports import defects_frame, frame, marks_frame, render, subgroups_frame
from .zlocal import INTEGRAL

logger = logging.getLogger(__name__)

Outcome = tuple[dict[str, Any], bool | None, pd.DataFrame | None]


def _group(config: RunConfig) -> Group:
    if not config.group:
        raise ConfigError("This command needs a group (--group or positional spec)")
    return group_from_spec(config.group, config.limits)


def _functor(args: argparse.Namespace, group: Group) -> Any:
    omega = orientation_from_spec(group, args.omega) if getattr(args, "omega", None) else None
    return functor_by_name(group, args.functor, omega)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_group(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    data = {
        "name": group.name,
        "order": group.order,
        "elements": [
            {"index": i, "label": label, "order": group.element_orders[i]}
            for i, label in enumerate(group.labels)
        ],
        "classes": len(group.lattice),
    }
    return data, None, frame(data["elements"])


def cmd_subgroups(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    return {"classes": group.lattice.to_list()}, None, subgroups_frame(group)


def cmd_tom(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    table = marks_frame(group)
    data = {"classes": list(table.index), "marks": table.to_numpy().tolist()}
    return data, None, table


def cmd_mackey_validate(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    functor = _functor(args, group)
    if isinstance(functor, GreenRingData):
        mackey = functor.base.report
        green = functor.report
        data = {"mackey": mackey.to_dict(), "green": green.to_dict()}
        return data, mackey.ok and green.ok, defects_frame(mackey.to_dict())
    report = functor.report
    return {"mackey": report.to_dict()}, report.ok, defects_frame(report.to_dict())


def cmd_bqgr(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    data = bqgr(_functor(args, group))
    site = parse_gset_spec(group, config.gset) if config.gset else None
    report = data.to_dict(site)
    table = frame([
        {"class": c["class"], "burnside_rank": c["burnside_rank"], "ideal_rank": c["ideal_rank"],
         "quotient": c["quotient"]["text"]}
        for c in report["classes"]
    ])
    return report, None, table


def cmd_dress_check(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    if not config.gset:
        raise ConfigError("dress check needs --set")
    report = is_dress_generating(_functor(args, group), parse_gset_spec(group, config.gset))
    data = report.to_dict()
    table = frame([
        {"prime": v["prime"], "surjective": v["surjective"], "cokernel": v["cokernel"]["text"]}
        for v in data["per_prime"]
    ] + [{"prime": "generic", "surjective": data["generic"]["verdict"],
          "cokernel": data["generic"]["cokernel"]["text"]}])
    return data, report.overall, table


def cmd_dress_coefficients(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    if not config.family or len(config.primes) != 1:
        raise ConfigError("dress coefficients needs --family and exactly one --prime")
    family = parse_family_spec(group, config.family)
    table = induction_coefficients(_functor(args, group), family, config.primes[0])
    data = table.to_dict()
    return data, table.verified, frame(data["coefficients"])


def _repair_chain(chain: ChainData, mod2k: int | None) -> Any:
    if mod2k:
        return repair_filtered_truncated(chain, mod2k)
    return repair_pseudo_complex(chain)


def cmd_amitsur(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    functor = _functor(args, group)
    x = parse_gset_spec(group, config.gset or "cyclic")
    y = GSet.point(group)
    locale = config.primes[0] if config.primes else INTEGRAL
    variant = COHOMOLOGICAL if args.variant == "co" else HOMOLOGICAL
    complex_ = amitsur_complex(functor, x, y, config.degrees, variant, locale)
    chain = complex_.chain
    data: dict[str, Any] = {"complex": complex_.to_dict(), "is_complex": chain.is_complex()}
    verdict: bool | None = None
    if chain.is_complex():
        exactness = check_exactness(chain)
        data["exactness"] = exactness.to_dict()
        verdict = exactness.exact
    if args.repair:
        element = generating_element(functor, x, 2 if args.mod2k else locale)
        homotopy = homotopy_from_element(element.element(), complex_)
        filtration = Filtration.power_of_two(args.mod2k) if args.mod2k else None
        result = _repair_chain(with_contraction(complex_, homotopy, filtration), args.mod2k)
        data["element"] = element.to_dict()
        data["repair"] = result.to_dict()
        verdict = result.verified
    elif verdict is None:
        verdict = False
    table = frame([{"degree": r, "rank": g.n_generators} for r, g in enumerate(chain.groups)])
    return data, verdict, table


def cmd_repair(args: argparse.Namespace, config: RunConfig) -> Outcome:
    if args.input:
        chain = load_chain(args.input)
    elif args.random:
        chain = random_pseudo_complex(config.seed, top_degree=config.degrees or 3)
    else:
        raise ConfigError("repair needs --input chain.json or --random")
    result = _repair_chain(chain, args.mod2k)
    if args.save:
        save_chain(result.chain, args.save)
        logger.info(f"Repaired chain written to {args.save}")
    data = result.to_dict()
    return data, result.verified, frame(data["certificates"])


def _load_json(path: str) -> Any:
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}") from e


def _read_morphism(group: Group, path: str) -> BisetMorphism:
    """A canonical-form dict, or a list of them (summed)."""
    data = _load_json(path)
    items = data if isinstance(data, list) else [data]
    if not items:
        raise ConfigError(f"No bisets in {path}")
    parts = [BisetMorphism.basis(BifreeBiset.from_dict(group, item)) for item in items]
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def cmd_biset_compose(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    first = _read_morphism(group, args.first)
    second = _read_morphism(group, args.second)
    product_ = balanced_product(first, second)
    data: dict[str, Any] = {"product": product_.to_dict()}
    verdict = None
    if args.oracle:
        counts: dict[BifreeBiset, int] = {}
        for bx, nx in first.terms:
            for by, ny in second.terms:
                for b, n in materialized_balanced_product(bx, by).terms:
                    counts[b] = counts.get(b, 0) + nx * ny * n
        oracle = BisetMorphism.of(second.source, first.target, counts)
        verdict = oracle == product_
        data["oracle_agrees"] = verdict
    return data, verdict, frame(product_.to_dict()["terms"])


def cmd_biset_tau(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    result = tau(_read_morphism(group, args.input))
    return {"tau": result.to_dict()}, None, frame(result.to_dict()["terms"])


def cmd_biset_j(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    f = parse_gmap_spec(group, args.map)
    lower, upper = j_lower(f), j_upper(f)
    data = {"map": f.to_dict(), "lower": lower.to_dict(), "upper": upper.to_dict()}
    return data, None, frame([lower.to_dict(), upper.to_dict()])


def cmd_biset_mackey(args: argparse.Namespace, config: RunConfig) -> Outcome:
    group = _group(config)
    fixtures: dict[str, Callable[[], BisetFixture]] = {
        "burnside": lambda: BisetFixture(group),
        "zero": lambda: ZeroFixture(group),
        "signed": lambda: SignedFixture(group, omega=orientation_from_spec(group, args.omega or "sign")),
    }
    if config.functor not in fixtures:
        raise ConfigError(f"No biset fixture '{config.functor}'; expected one of {sorted(fixtures)}")
    report = mackey_via_j_check(fixtures[config.functor]())
    return {"mackey": report.to_dict()}, report.ok, defects_frame(report.to_dict())


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, group_positional: bool = False) -> None:
    if group_positional:
        p.add_argument("group", help="Catalog name (C2, S3, D4, A4, S4, A5, ...) or generators '(1 2); (1 2 3)'")
    else:
        p.add_argument("--group", required=True, help="Catalog name or permutation generators")
    p.add_argument("--format", choices=OUTPUT_FORMATS, default="json", dest="output_format",
                   help="Output format (default: json)")


def _functor_args(p: argparse.ArgumentParser, default: str = "burnside") -> None:
    p.add_argument("--functor", default=default,
                   help="burnside, permchar, fixed, signed or zero (default: %(default)s)")
    p.add_argument("--omega", help="Orientation: 'sign', 'trivial-kernel' or a kernel class label")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burnside-induction",
        description="Exact Burnside ring, Mackey functor and Dress induction computations. "
        "Dihedral groups Dn have order 2n.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file with limit overrides")
    parser.add_argument("--seed", type=int, default=0, help="Seed for sampled checks (default: 0)")
    parser.add_argument("--no-verdict-exit", action="store_true",
                        help="Exit 0 even when the verdict is false")
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    noise.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, helptext in (
        ("group", cmd_group, "Elements and element orders"),
        ("subgroups", cmd_subgroups, "Conjugacy classes of subgroups"),
        ("tom", cmd_tom, "Table of marks"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p, group_positional=True)
        p.set_defaults(handler=handler)

    mackey = sub.add_parser("mackey", help="Mackey functor checks").add_subparsers(
        dest="action", required=True
    )
    p = mackey.add_parser("validate", help="Check the Mackey (and Green) axioms")
    _common(p)
    _functor_args(p)
    p.set_defaults(handler=cmd_mackey_validate)

    p = sub.add_parser("bqgr", help="Burnside ideal I_M and the quotient ring A_M")
    _common(p)
    _functor_args(p)
    p.add_argument("--site", dest="gset", help="Also report the ideal at this G-set")
    p.set_defaults(handler=cmd_bqgr)

    dress = sub.add_parser("dress", help="Dress induction").add_subparsers(dest="action", required=True)
    p = dress.add_parser("check", help="Is the G-set Dress generating?")
    _common(p)
    _functor_args(p)
    p.add_argument("--set", dest="gset", required=True, help="G-set spec, e.g. cyclic or C2:1,C3:2")
    p.set_defaults(handler=cmd_dress_check)
    p = dress.add_parser("coefficients", help="p-local induction coefficients over a family")
    _common(p)
    _functor_args(p)
    p.add_argument("--family", required=True, help="Family spec, e.g. p-hyperelementary:2")
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(handler=cmd_dress_coefficients)

    p = sub.add_parser("amitsur", help="Amitsur complex of a functor over X, optionally repaired")
    _common(p)
    _functor_args(p)
    p.add_argument("--set", dest="gset", help="G-set X (default: cyclic)")
    p.add_argument("--degrees", type=int, default=2, help="Top degree N (default: 2)")
    p.add_argument("--prime", type=int, help="Localize homology at this prime")
    p.add_argument("--variant", choices=("ho", "co"), default="ho")
    p.add_argument("--repair", action="store_true", help="Contract with s(a) and repair")
    p.add_argument("--mod2k", type=int, help="Repair modulo 2^k with the 2-power filtration")
    p.set_defaults(handler=cmd_amitsur)

    p = sub.add_parser("repair", help="Repair a filtered pre-complex from JSON")
    p.add_argument("--input", help="ChainData JSON file")
    p.add_argument("--random", action="store_true", help="Use a seeded random fixture")
    p.add_argument("--degrees", type=int, default=3, help="Top degree of the random fixture")
    p.add_argument("--mod2k", type=int, help="Repair modulo 2^k")
    p.add_argument("--save", help="Write the repaired chain here")
    p.add_argument("--format", choices=OUTPUT_FORMATS, default="json", dest="output_format")
    p.set_defaults(handler=cmd_repair, group=None)

    biset = sub.add_parser("biset", help="Bifree biset calculus").add_subparsers(
        dest="action", required=True
    )
    p = biset.add_parser("compose", help="Balanced product first ∘ second")
    _common(p)
    p.add_argument("--first", required=True, help="Biset JSON (H2 -> H3)")
    p.add_argument("--second", required=True, help="Biset JSON (H1 -> H2)")
    p.add_argument("--oracle", action="store_true", help="Cross-check by materializing the product")
    p.set_defaults(handler=cmd_biset_compose)
    p = biset.add_parser("tau", help="Opposite biset")
    _common(p)
    p.add_argument("--input", required=True, help="Biset JSON")
    p.set_defaults(handler=cmd_biset_tau)
    p = biset.add_parser("j", help="Bisets of a G-map")
    _common(p)
    p.add_argument("--map", required=True, help="G-map spec 'H->K@g'")
    p.set_defaults(handler=cmd_biset_j)
    p = biset.add_parser("mackey", help="Mackey axioms of a biset fixture through j")
    _common(p)
    _functor_args(p)
    p.set_defaults(handler=cmd_biset_mackey)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run one command, print its report, and return the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
        stream=sys.stderr,
    )
    command = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
    try:
        config = load_config(
            args.config,
            subcommand=command,
            group=getattr(args, "group", None),
            functor=getattr(args, "functor", "burnside"),
            gset=getattr(args, "gset", None),
            family=getattr(args, "family", None),
            primes=[p for p in (getattr(args, "prime", None),) if p is not None],
            degrees=getattr(args, "degrees", 2),
            output_format=args.output_format,
            seed=args.seed,
            verdict_exit=not args.no_verdict_exit,
        )
        data, verdict, table = args.handler(args, config)
    except BurnsideError as e:
        print(f"burnside-induction: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"burnside-induction: error: {e}", file=sys.stderr)
        return 2
    report = {"run": config.header(), **data}
    if verdict is not None:
        report["verdict"] = verdict
    sys.stdout.write(render(report, config.output_format, table))
    if verdict is False and config.verdict_exit:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
