"""``barfill`` command line.

Exit codes: 0 success, 2 precondition violation, 3 cap or budget refusal,
64 unknown subcommand, 65 malformed group spec or recipe.  A false
sentence is a successful run (exit 0) reporting ``"holds": false``;
a refusal is never reported as false.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .chains import Chain
from .config import RunConfig, load_config
from .errors import BudgetExhausted, CapExceeded, PreconditionError, SpecError
from .family import GroupFamily, asymp_probe
from .groups import FiniteGroup, abelian_invariants, abelianization, build_group
from .homology import diagonal_torus, homology, index_prime_to_l, induced_map
from .isoperimetry import (check_phi, check_psi, filler_distance, filler_norm, isop,
                           isop_profile)

EXIT_OK, EXIT_PRECONDITION, EXIT_REFUSED = 0, 2, 3
EXIT_USAGE, EXIT_SPEC = 64, 65

SUBCOMMANDS = ("group", "homology", "fillnorm", "isop", "phi", "psi", "torus-check",
               "family", "selftest")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def torus_check(spec: str | FiniteGroup, n: int, l: int, config: RunConfig = RunConfig()) -> dict:
    """Index of the diagonal torus, the induced map on H_n, and whether they agree.

    Agreement means: an index prime to l comes with a surjective map.  When
    the index is not prime to l the map is reported but nothing is implied.
    """
    G = spec if isinstance(spec, FiniteGroup) else build_group(spec, config)
    if G.field is None:
        raise PreconditionError(f"{G.key} is not a matrix group")
    inc = diagonal_torus(G)
    idx = index_prime_to_l(G, inc[0], l)
    m = induced_map(inc, n, l, config)
    return {"group": G.key, "order": G.order, "torus_order": inc[0].order, "n": n, "l": l,
            **idx.to_dict(), "induced_map": m.to_dict(),
            "consistent": (not idx.prime_to_l) or m.surjective}


def _group_info(G: FiniteGroup) -> dict:
    A, _ = abelianization(G)
    return {"group": G.key, "order": G.order, "identity": G.identity, "backend": G.backend,
            "abelian": G.is_abelian(), "abelianization_invariants": abelian_invariants(A)}


def _read_chain(text: str, config: RunConfig) -> Chain:
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"chain is not valid JSON: {exc}") from None
    try:
        return Chain.from_dict(data, config=config)
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed chain object: {exc!r}") from None


def _q_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"bad --q-range {text!r}; use A..B or a comma list") from None


# ---------------------------------------------------------------------------
# subcommands

def _cmd_group(args, config):
    return _group_info(build_group(args.group, config))


def _cmd_homology(args, config):
    G = build_group(args.group, config)
    return homology(G, args.n, args.l, config, minimize=not args.no_minimize).to_dict()


def _cmd_fillnorm(args, config):
    b = _read_chain(args.chain, config)
    if args.to is not None:
        res = filler_distance(b, _read_chain(args.to, config), config, args.budget)
    else:
        res = filler_norm(b, config, args.budget)
    return res.to_dict()


def _cmd_isop(args, config):
    G = build_group(args.group, config)
    if args.profile:
        return isop_profile(G, args.n, args.l, args.K, args.mode, args.samples, args.seed,
                            config).to_dict()
    return isop(G, args.n, args.l, args.K, args.mode, args.samples, args.seed, config).to_dict()


def _cmd_phi(args, config):
    G = build_group(args.group, config)
    out = check_phi(G, args.n, args.l, args.K, args.K1, args.K2, config).to_dict()
    return {"group": G.key, "n": args.n, "l": args.l, "K": args.K, "K1": args.K1,
            "K2": args.K2, **out}


def _cmd_psi(args, config):
    G = build_group(args.group, config)
    K1 = args.K1
    if K1 is None:
        K1 = isop_profile(G, args.n, args.l, 2 * args.K, config=config).k1(args.K)
    H = args.H_bound if args.H_bound is not None else homology(G, args.n, args.l, config).dim
    out = check_psi(G, args.n, args.l, args.K, K1, H, config).to_dict()
    return {"group": G.key, "n": args.n, "l": args.l, "K": args.K, "K1": K1, "H_bound": H,
            **out}


def _cmd_torus(args, config):
    return torus_check(args.group, args.n, args.l, config)


def _cmd_family(args, config):
    fam = GroupFamily.over_prime_powers(args.template, _q_range(args.q_range), args.n, args.l,
                                        mod_filter=args.mod_filter)
    cfg = config.replace(search_nodes=args.budget)
    report = asymp_probe(fam, args.recipe, args.K, cfg)
    if config.output == "csv":
        return report.to_csv()
    return {"template": args.template, "recipe": args.recipe, "n": args.n, "l": args.l,
            **report.to_dict()}


def _cmd_selftest(args, config):
    from .selftest import SUITES, run
    names = args.suite or list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise PreconditionError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    results = run(names, args.seed)
    return {"seed": args.seed, "suites": results, "passed": all(r["passed"] for r in results)}


HANDLERS = {"group": _cmd_group, "homology": _cmd_homology, "fillnorm": _cmd_fillnorm,
            "isop": _cmd_isop, "phi": _cmd_phi, "psi": _cmd_psi, "torus-check": _cmd_torus,
            "family": _cmd_family, "selftest": _cmd_selftest}


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file (overrides $BARFILL_CONFIG)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--output", choices=("json", "csv"), default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--budget", type=int, default=None, help="search-node budget")
    common.add_argument("--checkpoint", default=None, help="census checkpoint file")

    def group_args(p, n=True, l=True):
        p.add_argument("--group", required=True, help="e.g. cyclic:4, sym:3, gl:2:5")
        if n:
            p.add_argument("--n", type=int, default=1)
        if l:
            p.add_argument("--l", type=int, default=2)

    parser = argparse.ArgumentParser(prog="barfill", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="basic facts about a group")
    group_args(p, n=False, l=False)

    p = sub.add_parser("homology", parents=[common], help="H_n(G; Z/l) with representatives")
    group_args(p)
    p.add_argument("--no-minimize", action="store_true",
                   help="skip shrinking the class representatives")

    p = sub.add_parser("fillnorm", parents=[common], help="filler norm of a boundary")
    p.add_argument("--chain", required=True, help="chain JSON, or @file")
    p.add_argument("--to", default=None, help="second cycle: report the filler distance")

    p = sub.add_parser("isop", parents=[common], help="isoperimetric function value")
    group_args(p)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=None, help="sample count for sampled mode")
    p.add_argument("--profile", action="store_true", help="report isop(0..K)")

    p = sub.add_parser("phi", parents=[common], help="check the sentence Phi_{K,K1,K2}")
    group_args(p)
    for name in ("--K", "--K1", "--K2"):
        p.add_argument(name, type=int, required=True)

    p = sub.add_parser("psi", parents=[common], help="check the sentence Psi_K")
    group_args(p)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--K1", type=int, default=None, help="default: max isop(1..2K)")
    p.add_argument("--H-bound", dest="H_bound", type=int, default=None,
                   help="default: dim H_n(G; Z/l)")

    p = sub.add_parser("torus-check", parents=[common], help="torus index vs induced map")
    group_args(p)

    p = sub.add_parser("family", parents=[common], help="filler growth across a q-family")
    p.add_argument("--template", default="gl:2", help="spec prefix, completed by :q")
    p.add_argument("--q-range", required=True, help="A..B or comma list of q")
    p.add_argument("--mod-filter", action="store_true", help="keep only q = 1 mod l")
    p.add_argument("--recipe", required=True, help="boundary recipe, e.g. 'd([t0,t0])'")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--K", type=int, default=None, help="size bound on recipe chains")

    p = sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    p.add_argument("--suite", action="append", help="suite name (repeatable); default all")
    return parser


def _config_for(args) -> RunConfig:
    config = load_config(args.config)
    return config.replace(seed=args.seed, output=args.output, threads=args.threads,
                          search_nodes=args.budget, checkpoint=args.checkpoint)


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; returns (exit code, standard-output text)."""
    if argv and not argv[0].startswith("-") and argv[0] not in SUBCOMMANDS:
        print(f"barfill: unknown subcommand {argv[0]!r}; choose from {', '.join(SUBCOMMANDS)}",
              file=sys.stderr)
        return EXIT_USAGE, ""
    args = build_parser().parse_args(argv)
    try:
        config = _config_for(args)
        if args.seed is None:
            args.seed = config.seed
        t0 = time.perf_counter()
        out = HANDLERS[args.command](args, config)
        print(f"barfill {args.command}: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    except SpecError as exc:
        print(f"barfill: malformed input: {exc}", file=sys.stderr)
        return EXIT_SPEC, ""
    except (CapExceeded, BudgetExhausted) as exc:
        print(f"barfill: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED, dumps({"verdict": "refused", "reason": str(exc)}) + "\n"
    except (PreconditionError, OSError) as exc:
        print(f"barfill: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION, ""
    text = out if isinstance(out, str) else dumps(out) + "\n"
    if args.command == "selftest" and not out["passed"]:
        return 1, text
    return EXIT_OK, text


def main(argv: list[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else list(argv))
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
