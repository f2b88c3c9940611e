"""Command-line front end: ``koszulkt {describe,verify,ktheory} TYPE``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or parse
error, 3 a size cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from .cartan import CapExceededError, CartanDatum, CartanError, build_cartan, fundamental_dimensions, parse_type, weyl_order
from .homology import ComplexError
from .koszul import FAULTS, KoszulError, koszul_complex, truncated_exactness, verify_d_squared, verify_homotopy
from .ktheory import (
    SCHEMA_VERSION,
    KTheoryReport,
    e1_page,
    invariant_part_window,
    k_groups,
    resolution_ranks,
    verify_image_invariance,
    verify_injectivity,
)
from .repring import character

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    type_string: str
    max_y_degree: int = 4
    homotopy_degree: int = 5
    injectivity_degree: int = 3
    window_cap: int = 3
    output_format: str = "text"
    output_path: str | None = None
    inject_fault: str | None = None

    def __post_init__(self):
        for name in ("max_y_degree", "homotopy_degree", "injectivity_degree", "window_cap"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown format {self.output_format!r}")
        parse_type(self.type_string)

    @property
    def datum(self) -> CartanDatum:
        return build_cartan(self.type_string)


def describe(config: RunConfig) -> dict:
    d = config.datum
    return {
        "schema_version": SCHEMA_VERSION,
        "type": d.name,
        "N": d.N,
        "cartan_matrix": [list(r) for r in d.cartan_matrix],
        "symmetrizers": list(d.symmetrizers),
        "positive_roots": len(d.positive_roots),
        "weyl_order": weyl_order(d),
        "dims": list(fundamental_dimensions(d)),
        "ranks": resolution_ranks(d.N),
    }


def run_checks(config: RunConfig) -> KTheoryReport:
    """Run every verification and collect the results into one report."""
    d = config.datum
    n = d.N
    cx = koszul_complex(d, config.inject_fault)
    checks: dict[str, bool | None] = {}
    details: dict = {}

    checks["d_squared"] = verify_d_squared(cx, config.max_y_degree)

    try:
        homology = truncated_exactness(cx, config.max_y_degree)
    except (KoszulError, ComplexError) as exc:
        checks["exactness"] = False
        details["exactness"] = {"error": str(exc)}
    else:
        checks["exactness"] = homology.exact
        details["exactness"] = homology.to_dict()

    checks["homotopy"] = verify_homotopy(cx, config.homotopy_degree)

    dims = fundamental_dimensions(d)
    totals = [character(d, d.fundamental_weight(j)).coefficient_sum() for j in range(1, n + 1)]
    checks["characters"] = totals == list(dims)
    details["dims"] = list(dims)
    details["character_totals"] = totals

    checks["invariance"] = verify_image_invariance(d)

    inj = [verify_injectivity(d, k, config.injectivity_degree) for k in range(n + 1)]
    checks["injectivity"] = all(r.injective for r in inj)
    details["injectivity"] = [
        {"k": r.k, "degree_cap": r.degree_cap, "shape": [r.rows, r.cols], "kernel_rank": r.kernel_rank}
        for r in inj
    ]

    if n <= 2:
        windows = [invariant_part_window(d, k, config.window_cap) for k in range(n + 1)]
        checks["window"] = all(w.all_in_image for w in windows)
        details["window"] = [
            {
                "k": w.k,
                "weight_cap": w.weight_cap,
                "relative_to_window": True,
                "basis": [str(b) for b in w.basis],
                "window_member": w.window_member,
                "exact_member": w.exact_member,
            }
            for w in windows
        ]
    else:
        checks["window"] = None

    page = e1_page(d)
    details["e1_page"] = {
        "ranks": [page.entries[(m, 0)] for m in range(n + 1)],
        "odd_ranks": [page.entries[(m, 1)] for m in range(n + 1)],
        "d1_trivial": page.collapses,
    }
    details["config"] = {
        "max_y_degree": config.max_y_degree,
        "homotopy_degree": config.homotopy_degree,
        "injectivity_degree": config.injectivity_degree,
        "window_cap": config.window_cap,
    }
    if config.inject_fault:
        details["injected_fault"] = config.inject_fault
    report = k_groups(d, checks)
    report.details = details
    return report


def _fmt_tuple(s) -> str:
    return "^".join(f"e{i}" for i in s) if s else "1"


def render_text_describe(info: dict) -> str:
    lines = [
        f"type: {info['type']}",
        f"rank N: {info['N']}",
        "Cartan matrix:",
        *("  " + " ".join(f"{x:3d}" for x in row) for row in info["cartan_matrix"]),
        f"positive roots: {info['positive_roots']}",
        f"|W|: {info['weyl_order']}",
        f"fundamental dimensions d: {tuple(info['dims'])}",
        f"resolution ranks r_k: {info['ranks']}",
    ]
    return "\n".join(lines)


def render_text_report(report: KTheoryReport) -> str:
    lines = [
        f"type: {report.type} (N = {report.N})",
        f"K0: free R(K)-module of rank {report.k0_rank} on {', '.join(map(_fmt_tuple, report.generators_even))}",
        f"K1: free R(K)-module of rank {report.k1_rank} on {', '.join(map(_fmt_tuple, report.generators_odd))}",
    ]
    if report.checks:
        lines.append("checks:")
        for name, ok in report.checks.items():
            status = "skipped" if ok is None else ("PASS" if ok else "FAIL")
            lines.append(f"  {name:12s} {status}")
    return "\n".join(lines)


def _emit(text: str, config: RunConfig) -> None:
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="koszulkt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("describe", "root data, |W|, fundamental dimensions and resolution ranks"),
        ("verify", "run every verification check"),
        ("ktheory", "K_0 / K_1 as graded R(K)-modules"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("type", help='Cartan type such as "A2", "G2" or "A1xA1"')
        p.add_argument("--max-y-degree", type=int, default=4)
        p.add_argument("--homotopy-degree", type=int, default=5)
        p.add_argument("--injectivity-degree", type=int, default=3)
        p.add_argument("--window-cap", type=int, default=3)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = RunConfig(
            args.type,
            args.max_y_degree,
            args.homotopy_degree,
            args.injectivity_degree,
            args.window_cap,
            args.format,
            args.out,
            args.inject_fault,
        )
    except (CartanError, ValueError) as exc:
        print(f"koszulkt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "describe":
            info = describe(config)
            _emit(_dump(info) if config.output_format == "json" else render_text_describe(info), config)
            return EXIT_OK
        if args.command == "ktheory":
            report = k_groups(config.datum)
            _emit(_dump(report.to_dict()) if config.output_format == "json" else render_text_report(report), config)
            return EXIT_OK
        report = run_checks(config)
    except CapExceededError as exc:
        print(f"koszulkt: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP

    _emit(_dump(report.to_dict()) if config.output_format == "json" else render_text_report(report), config)
    failed = [name for name, ok in report.checks.items() if ok is False]
    if failed:
        print(f"koszulkt: verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
