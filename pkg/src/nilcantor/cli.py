"""Command-line front end: run chain analyses and print exact reports.

Every command writes exactly one report to stdout, with all quantities as
exact integers (never floating point), and is byte-identical across runs
with the same inputs and seed.  Exit codes: 0 success, 2 contract
violation (bad flags, parse errors, broken invariants, undecidable
questions), 3 resource exhaustion (budgets, closure caps).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import __version__
from .dynamics import (
    Certificate,
    discriminant_limit_report,
    freeness_certificate,
    lqa_witness,
    trivial_action_kernel,
    wildness_certificate,
)
from .errors import ContractError, ResourceError
from .heisenberg import BoxSubgroup, HeisenbergElement, core, index_in, relative_core
from .oracle import (
    OracleBudget,
    canonical_by_enumeration,
    core_by_enumeration,
    coset_partition,
    fixing_scan,
    relative_core_by_enumeration,
)
from .steinitz import almost_disjoint_spectra, asymptotically_equivalent, spectra
from .towers import ChainSpec, CosetSpace, builtin_chain, parse_chain_config, wild_chain

BUDGET_ENV = "NILCANTOR_MAX_GROUP_ORDER"


@dataclass
class Report:
    command: str
    chain: str
    parameters: tuple
    results: tuple  # lines: (key, value) pairs or plain strings
    evidence_grade: str
    seed: int = 0

    def render(self) -> str:
        lines = [
            f"command: {self.command}",
            f"chain: {self.chain}",
            "parameters: "
            + (" ".join(f"{k}={v}" for k, v in self.parameters) or "(none)"),
            f"evidence_grade: {self.evidence_grade}",
            "results:",
        ]
        for item in self.results:
            if isinstance(item, tuple):
                lines.append(f"  {item[0]}: {item[1]}")
            else:
                lines.append(f"  {item}")
        lines.append(f"tool_version: {__version__}")
        lines.append(f"seed: {self.seed}")
        return "\n".join(lines) + "\n"


# -- chain references ----------------------------------------------------------


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",")) if text else ()


def resolve_chain(args) -> ChainSpec:
    ref = args.chain_ref
    if ref in ("ex41", "ex42", "stable", "wild"):
        params = {}
        if ref == "ex41":
            params["p"] = _require(args, "p")
        elif ref == "ex42":
            params["p"] = _require(args, "p")
            params["q"] = _require(args, "q")
        elif ref == "stable":
            params["pi_f"] = _int_list(_require(args, "pi_f"))
            params["r"] = _int_list(_require(args, "r"))
            params["n"] = _int_list(_require(args, "n"))
            params["pi_inf"] = _int_list(_require(args, "pi_inf"))
        elif ref == "wild":
            params["n"] = _require(args, "n")
            params["r"] = _require(args, "r")
            params["pi_inf"] = _int_list(args.pi_inf) if args.pi_inf else ()
        return builtin_chain(ref, **params)
    if os.path.exists(ref):
        with open(ref, "r", encoding="utf-8") as fh:
            return parse_chain_config(fh.read())
    raise ContractError(
        f"unknown chain reference {ref!r}: not a built-in name "
        "(ex41, ex42, stable, wild) and not a config file"
    )


def _require(args, name):
    value = getattr(args, name, None)
    if value is None:
        raise ContractError(f"chain {args.chain_ref!r} requires --{name}")
    return value


def _add_chain_arguments(sub):
    sub.add_argument("chain_ref", help="built-in chain name or config file path")
    sub.add_argument("--p", type=int)
    sub.add_argument("--q", type=int)
    sub.add_argument("--pi_f", type=str)
    sub.add_argument("--r", type=str)
    sub.add_argument("--n", type=str)
    sub.add_argument("--pi_inf", type=str)


def _chain_flag_params(args) -> tuple:
    out = []
    for name in ("p", "q", "pi_f", "r", "n", "pi_inf"):
        value = getattr(args, name, None)
        if value is not None:
            out.append((name, value))
    return tuple(out)


def _wild_numeric(args, name):
    # wild's --n/--r arrive as the comma-list strings shared with stable
    value = getattr(args, name, None)
    if value is None:
        return None
    values = _int_list(value)
    if len(values) != 1:
        raise ContractError(f"--{name} takes one integer for this chain")
    return values[0]


# -- commands -------------------------------------------------------------------


def _spectra_lines(sp) -> list:
    return [
        ("pi", str(sp.pi)),
        ("pi_f", str(sp.pi_f)),
        ("pi_inf", str(sp.pi_inf)),
        ("enumeration_bound", sp.enumeration_bound),
    ]


def cmd_spectrum(args) -> Report:
    chain = resolve_chain(args)
    order = chain.steinitz_order(args.depth)
    bound = args.bound
    if bound is None:
        bound = max([2] + list(chain.relevant_primes(args.depth)))
    sp = spectra(order.limit, bound)
    results = [
        ("steinitz_order_raw", str(order.raw)),
        ("steinitz_order_limit", str(order.limit)),
        ("promoted_to_infinity", ",".join(map(str, order.promoted)) or "(none)"),
    ] + _spectra_lines(sp)
    return Report(
        command="spectrum",
        chain=chain.label,
        parameters=(("depth", args.depth), ("bound", bound)),
        results=tuple(results),
        evidence_grade="schedule-certified",
        seed=args.seed,
    )


def cmd_discriminant(args) -> Report:
    chain = resolve_chain(args)
    rep = discriminant_limit_report(chain, args.level, args.depth)
    results = [
        ("orders", " ".join(str(o) for o in rep.orders)),
        ("depths", " ".join(str(d) for d in rep.depths)),
        ("stabilized", "yes" if rep.stabilized else "no"),
        ("limit_order", rep.limit_order if rep.limit_order is not None else "(open)"),
    ]
    return Report(
        command="discriminant",
        chain=chain.label,
        parameters=(("level", args.level), ("depth", args.depth)),
        results=tuple(results),
        evidence_grade=rep.evidence_grade,
        seed=args.seed,
    )


def _certificate_lines(cert: Certificate) -> list:
    lines = [("verdict", cert.verdict)]
    if cert.stable_from_level is not None:
        lines.append(("stable_from_level", cert.stable_from_level))
    if cert.escape_depth is not None:
        lines.append(("escape_depth", cert.escape_depth))
    if cert.witness is not None:
        lines.append(("witness", str(cert.witness)))
    if cert.reason is not None:
        lines.append(("reason", cert.reason))
    for r in cert.reports:
        lines.append(
            "kernel l=%d l'=%d d=%d: order=%d persistent=%s witness=%s "
            "kernel=%s comparison=%s"
            % (
                r.cylinder,
                r.refined,
                r.depth,
                r.kernel_order,
                "yes" if r.persistent else "no",
                str(r.witness) if r.witness is not None else "-",
                r.kernel_box,
                r.comparison_box,
            )
        )
    return lines


def cmd_wildness(args) -> Report:
    chain = resolve_chain(args)
    cert = wildness_certificate(chain, args.lmax, args.dmax)
    return Report(
        command="wildness",
        chain=chain.label,
        parameters=(("lmax", args.lmax), ("dmax", args.dmax)),
        results=tuple(_certificate_lines(cert)),
        evidence_grade=cert.evidence_grade,
        seed=args.seed,
    )


def cmd_freeness(args) -> Report:
    chain = resolve_chain(args)
    cert = freeness_certificate(chain, args.level, args.radius, args.dmax)
    kernel = trivial_action_kernel(chain, args.level, args.dmax)
    results = _certificate_lines(cert) + [
        ("kernel_at_dmax", str(kernel)),
    ]
    return Report(
        command="freeness",
        chain=chain.label,
        parameters=(
            ("level", args.level),
            ("radius", args.radius),
            ("dmax", args.dmax),
        ),
        results=tuple(results),
        evidence_grade=cert.evidence_grade,
        seed=args.seed,
    )


def _budget_from(args) -> OracleBudget:
    env_order = os.environ.get(BUDGET_ENV)
    max_order = args.max_group_order or (int(env_order) if env_order else 10**6)
    return OracleBudget(
        max_modulus=args.max_modulus,
        max_group_order=max_order,
        random_trials=args.trials,
        seed=args.seed,
    )


def cmd_oracle(args) -> Report:
    budget = _budget_from(args)
    target = args.subtarget
    results = []
    chain_label = "(none)"
    if target == "core":
        box = BoxSubgroup.parse(args.box)
        found = core_by_enumeration(box, budget)
        results = [
            ("enumerated", str(found)),
            ("closed_form", str(core(box))),
            ("agree", "yes" if found == core(box) else "NO"),
        ]
    elif target == "relative-core":
        outer = BoxSubgroup.parse(args.outer)
        inner = BoxSubgroup.parse(args.box)
        found = relative_core_by_enumeration(outer, inner, budget)
        closed = relative_core(outer, inner)
        results = [
            ("enumerated", str(found)),
            ("closed_form", str(closed)),
            ("agree", "yes" if found == closed else "NO"),
        ]
    elif target == "canonical":
        box = BoxSubgroup.parse(args.box)
        g = HeisenbergElement.parse(args.element)
        found = canonical_by_enumeration(box, g, budget)
        closed = CosetSpace(box).canonical(g)
        results = [
            ("enumerated", str(found).replace(" ", "")),
            ("closed_form", str(closed).replace(" ", "")),
            ("agree", "yes" if found == closed else "NO"),
        ]
    elif target == "partition":
        box = BoxSubgroup.parse(args.box)
        classes = coset_partition(box, budget)
        results = [
            ("classes", len(classes)),
            ("expected_index", box.index()),
            ("agree", "yes" if len(classes) == box.index() else "NO"),
        ]
    elif target == "fixing":
        chain = resolve_chain(args)
        chain_label = chain.label
        found = fixing_scan(chain, args.cylinder, args.depth, budget)
        kernel = trivial_action_kernel(chain, args.cylinder, args.depth)
        q = chain.quotient_at(args.depth)
        from math import gcd

        steps = (gcd(kernel.Ma, q.A), gcd(kernel.Mb, q.B), gcd(kernel.Mc, q.C))
        reduced = frozenset(
            (a, b, c)
            for a in range(0, q.A, steps[0])
            for b in range(0, q.B, steps[1])
            for c in range(0, q.C, steps[2])
        )
        results = [
            ("scanned_size", len(found)),
            ("closed_form_size", len(reduced)),
            ("agree", "yes" if found == reduced else "NO"),
        ]
    else:
        raise ContractError(f"unknown oracle subtarget {target!r}")
    return Report(
        command="oracle",
        chain=chain_label,
        parameters=(("subtarget", target),),
        results=tuple(results),
        evidence_grade="finite-depth",
        seed=args.seed,
    )


# -- reproduce scenarios ---------------------------------------------------------


def _reproduce_ex41(args) -> list:
    p = args.p if args.p is not None else 2
    chain = builtin_chain("ex41", p=p)
    lines = [("chain", chain.label)]
    for level in range(1, 5):
        c = chain.core_at(level)
        d = chain.discriminant_level(level)
        lines.append(
            (
                f"level_{level}",
                f"core={c} |D|={d.order}",
            )
        )
    img = chain.stable_image(1, 2)
    lines.append(("stable_image_l1_d2_order", img.order))
    order = chain.steinitz_order(4)
    lines.append(("steinitz_order_limit", str(order.limit)))
    lines.append(("steinitz_order_raw", str(order.raw)))
    return lines


def _reproduce_ex42(args) -> list:
    p = args.p if args.p is not None else 2
    q = args.q if args.q is not None else 3
    chain = builtin_chain("ex42", p=p, q=q)
    lines = [("chain", chain.label)]
    rep = discriminant_limit_report(chain, 1, 4)
    lines.append(("stable_image_orders", " ".join(map(str, rep.orders))))
    lines.append(("stabilized", "yes" if rep.stabilized else "no"))
    order = chain.steinitz_order(3)
    lines.append(("steinitz_order_limit", str(order.limit)))
    return lines


def _reproduce_thm13(args) -> list:
    chain = builtin_chain(
        "stable", pi_f=(2, 3), r=(1, 1), n=(2, 2), pi_inf=(5,)
    )
    lines = [("chain", chain.label)]
    cert = wildness_certificate(chain, 3, 4)
    lines.append(("verdict", cert.verdict))
    lines.append(("stable_from_level", cert.stable_from_level))
    orders = sorted({r.kernel_order for r in cert.reports})
    lines.append(("kernel_orders", " ".join(map(str, orders))))
    sp = spectra(chain.steinitz_order(4).limit, 7)
    lines += _spectra_lines(sp)
    return lines


def _reproduce_thm15(args) -> list:
    chain = builtin_chain("wild", n=2, r=1)
    lines = [("chain", chain.label)]
    cert = wildness_certificate(chain, 3, 5)
    lines.append(("verdict", cert.verdict))
    for r in cert.reports:
        lines.append(
            (
                f"kernel_l{r.cylinder}_l{r.refined}",
                f"order={r.kernel_order} persistent={'yes' if r.persistent else 'no'}",
            )
        )
    free = freeness_certificate(chain, 1, 100, 6)
    lines.append(("freeness", free.verdict))
    lines.append(("escape_depth", free.escape_depth))
    return lines


def _reproduce_cor16(args) -> list:
    count = args.count
    bound = args.bound
    sets = almost_disjoint_spectra(count, depth=8)
    chains = [wild_chain(2, 1, enumeration=s) for s in sets]
    lines = []
    limits = []
    for k, chain in enumerate(chains):
        order = chain.steinitz_order(3)
        limits.append(order.limit)
        lines.append((f"chain_{k}", chain.label))
        lines.append((f"spectrum_{k}", str(order.limit)))
    inequivalent = 0
    for i in range(count):
        for j in range(i + 1, count):
            eq = asymptotically_equivalent(limits[i], limits[j], bound)
            if not eq:
                inequivalent += 1
            lines.append((f"equivalent_{i}_{j}", "yes" if eq else "no"))
    lines.append(("inequivalent_pairs", inequivalent))
    wild_count = 0
    for k, chain in enumerate(chains):
        cert = wildness_certificate(chain, 2, 3)
        if cert.verdict == "WildEvidence":
            wild_count += 1
        lines.append((f"wildness_{k}", cert.verdict))
    lines.append(("wild_chains", wild_count))
    return lines


_SCENARIOS = {
    "ex41": _reproduce_ex41,
    "ex42": _reproduce_ex42,
    "thm13": _reproduce_thm13,
    "thm15": _reproduce_thm15,
    "cor16": _reproduce_cor16,
}


def cmd_reproduce(args) -> Report:
    name = args.name
    if name not in _SCENARIOS:
        raise ContractError(
            f"unknown scenario {name!r}; choose from {sorted(_SCENARIOS)}"
        )
    results = _SCENARIOS[name](args)
    params = []
    if name == "cor16":
        params = [("count", args.count), ("bound", args.bound)]
    return Report(
        command="reproduce",
        chain=name,
        parameters=tuple(params),
        results=tuple(results),
        evidence_grade="schedule-certified",
        seed=args.seed,
    )


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilcantor",
        description="Exact Heisenberg chain towers, Steinitz orders, and "
        "dynamics certificates",
    )
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="Steinitz order and prime spectra")
    _add_chain_arguments(sp)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--bound", type=int)
    sp.set_defaults(handler=cmd_spectrum)

    dc = sub.add_parser("discriminant", help="stabilized discriminant images")
    _add_chain_arguments(dc)
    dc.add_argument("--level", type=int, required=True)
    dc.add_argument("--depth", type=int, required=True)
    dc.set_defaults(handler=cmd_discriminant)

    wd = sub.add_parser("wildness", help="stable/wild certificate")
    _add_chain_arguments(wd)
    wd.add_argument("--lmax", type=int, required=True)
    wd.add_argument("--dmax", type=int, required=True)
    wd.set_defaults(handler=cmd_wildness)

    fr = sub.add_parser("freeness", help="topological freeness certificate")
    _add_chain_arguments(fr)
    fr.add_argument("--level", type=int, required=True)
    fr.add_argument("--radius", type=int, required=True)
    fr.add_argument("--dmax", type=int, required=True)
    fr.set_defaults(handler=cmd_freeness)

    orc = sub.add_parser("oracle", help="ad-hoc enumeration cross-checks")
    orc.add_argument(
        "subtarget",
        choices=["core", "relative-core", "canonical", "partition", "fixing"],
    )
    orc.add_argument("--box", type=str, help="Box(Ma,Mb,Mc)")
    orc.add_argument("--outer", type=str, help="Box(Ma,Mb,Mc)")
    orc.add_argument("--element", type=str, help="(a,b,c)")
    orc.add_argument("--cylinder", type=int, default=1)
    orc.add_argument("--depth", type=int, default=1)
    orc.add_argument("--max-modulus", type=int, default=12)
    orc.add_argument("--max-group-order", type=int)
    orc.add_argument("--trials", type=int, default=1000)
    _add_chain_arguments_optional(orc)
    orc.set_defaults(handler=cmd_oracle)

    rp = sub.add_parser("reproduce", help="bundled reference scenarios")
    rp.add_argument("name", help="ex41 | ex42 | thm13 | thm15 | cor16")
    rp.add_argument("--p", type=int)
    rp.add_argument("--q", type=int)
    rp.add_argument("--count", type=int, default=5)
    rp.add_argument("--bound", type=int, default=200)
    rp.set_defaults(handler=cmd_reproduce)

    return parser


def _add_chain_arguments_optional(sub):
    sub.add_argument("chain_ref", nargs="?", default="ex41")
    sub.add_argument("--p", type=int)
    sub.add_argument("--q", type=int)
    sub.add_argument("--pi_f", type=str)
    sub.add_argument("--r", type=str)
    sub.add_argument("--n", type=str)
    sub.add_argument("--pi_inf", type=str)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # wild's --n/--r are comma-list strings on the shared flag set
    if getattr(args, "chain_ref", None) == "wild":
        args.n = _wild_numeric(args, "n")
        args.r = _wild_numeric(args, "r")
    try:
        report = args.handler(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(report.render())
    return 0


if __name__ == "__main__":
    sys.exit(main())
