"""Command-line entry point.

Exit codes: 0 success / pass / found, 2 usage or parse error, 3 capacity
overrun or nothing exists, 4 check violations, 5 DP/oracle mismatch, 6 I/O.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import decomposition as dec
from .core import CapacityError, InputError, verify_lemma2, verify_submodularity, verify_symmetry
from .duality import (GENERATOR_KINDS, GeneratorConfig, fuzz, generate, matrix_configs,
                      matrix_to_json, run_matrix)
from .instances import dumps, load_json, load_system, parse_json_text
from .ultrafilter import (AXIOM_SETS, FE_MODES, SearchConfig, SetFamily, certificate,
                          enumerate_families, is_weak_ultrafilter, search)

EXIT_OK, EXIT_USAGE, EXIT_NONE, EXIT_VIOLATION, EXIT_MISMATCH, EXIT_IO = 0, 2, 3, 4, 5, 6


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _emit(args, payload: dict, text: str | None = None) -> None:
    out = dumps(payload) if args.format == "json" or text is None else text
    if getattr(args, "output", None):
        _write(Path(args.output), out)
    else:
        sys.stdout.write(out)


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot write {path}: {exc}") from None


# ------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    system = load_system(args.instance)
    checks = {"symmetry": verify_symmetry(system),
              "submodularity": verify_submodularity(system),
              "lemma2": verify_lemma2(system)}
    ok = all(r.overall for r in checks.values())
    payload = {"instance": system.name, "n": system.n, "overall": ok,
               "checks": {k: r.to_json() for k, r in checks.items()}}
    lines = []
    for name, rep in checks.items():
        for e in rep.entries:
            status = "pass" if e.passed else f"FAIL ({e.violations} violations)"
            lines.append(f"{e.axiom}: {status}")
            if e.witnesses:
                lines.append(f"  first witness: {e.witnesses[0]}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_branchwidth(args) -> int:
    system = load_system(args.instance)
    if args.check:
        problems = dec.recheck_json(load_json(args.check), system)
        payload = {"instance": system.name, "check": args.check, "ok": not problems,
                   "problems": problems}
        _emit(args, payload, ("ok\n" if not problems else "\n".join(problems) + "\n"))
        return EXIT_OK if not problems else EXIT_VIOLATION
    width, tree = dec.exact_branchwidth(system)
    payload = {"instance": system.name, "n": system.n, "branchwidth": width}
    notes = []
    if system.n < 2:
        payload["note"] = "degenerate tree: |X| <= 1, width is f(X)"
        notes.append(payload["note"])
    if args.oracle:
        oracle = dec.brute_force_branchwidth(system)
        payload["oracle"] = oracle
        payload["oracle_agrees"] = oracle == width
        notes.append(f"oracle: {oracle} ({'agrees' if oracle == width else 'MISMATCH'})")
    if args.decompose:
        _write(Path(args.decompose), dumps(dec.tree_to_json(tree, system)))
        payload["decomposition"] = args.decompose
    _emit(args, payload, "\n".join([str(width)] + notes) + "\n")
    if args.oracle and not payload["oracle_agrees"]:
        return EXIT_MISMATCH
    return EXIT_OK


def _config(args) -> SearchConfig:
    return SearchConfig(args.fe_mode, args.require_fp, args.axiom_set)


def _family_arg(value: str, ground) -> SetFamily:
    obj = parse_json_text(value, "--family") if value.lstrip().startswith("{") else load_json(value)
    return SetFamily.from_json(ground, obj)


def cmd_wuf(args) -> int:
    system = load_system(args.instance)
    config = _config(args)
    k = args.k
    if args.action == "find":
        fam = search(system, k, config)
        cert = certificate(fam, system, k, config)
        text = ("none exists\n" if fam is None
                else "\n".join(str(m) for m in cert["family"]) + "\n")
        _emit(args, cert, text)
        return EXIT_OK if fam is not None else EXIT_NONE
    if args.action == "enumerate":
        result = enumerate_families(system, k, config, args.limit)
        payload = {"order": k + 1, "config": config.to_json(k), "count": result.total,
                   "families": [f.to_json()["members"] for f in result.families]}
        text = "\n".join([f"count: {result.total}"]
                         + [str(f.to_json()["members"]) for f in result.families]) + "\n"
        _emit(args, payload, text)
        return EXIT_OK
    if not args.family:
        raise _Exit(EXIT_USAGE, "wuf check requires --family")
    fam = _family_arg(args.family, system.ground)
    report = is_weak_ultrafilter(fam, system, k, config)
    payload = {"order": k + 1, "config": config.to_json(k),
               "family": fam.to_json()["members"], **report.to_json()}
    text = "\n".join(f"{e.axiom}: {'pass' if e.passed else 'FAIL'}"
                     + (f"  witness {e.witnesses[0]}" if e.witnesses else "")
                     for e in report.entries) + "\n"
    _emit(args, payload, text)
    return EXIT_OK if report.overall else EXIT_VIOLATION


def cmd_tangle(args) -> int:
    system = load_system(args.instance)
    config = SearchConfig(axiom_set="tangle")
    fam = search(system, args.k, config)
    cert = certificate(fam, system, args.k, config)
    _emit(args, cert, "none exists\n" if fam is None
          else "\n".join(str(m) for m in cert["family"]) + "\n")
    return EXIT_OK if fam is not None else EXIT_NONE


def _gen_config(args) -> GeneratorConfig:
    return GeneratorConfig(args.gen, args.vertices, args.edges, args.density,
                           args.seed, args.count)


def _corpus(args):
    systems = [load_system(p) for p in args.instances]
    if args.gen:
        systems += generate(_gen_config(args))
    return systems


def _selected_configs(args):
    configs = matrix_configs()
    if args.fe_mode:
        configs = [c for c in configs if c.fe_mode in args.fe_mode]
    return configs


def cmd_duality(args) -> int:
    from . import report

    systems = _corpus(args)
    configs = _selected_configs(args)
    out = Path(args.out) if args.out else None
    if args.action == "matrix":
        if len(systems) != 1:
            raise _Exit(EXIT_USAGE, "duality matrix takes exactly one instance")
        system = systems[0]
        cells = run_matrix(system, configs)
        payload = matrix_to_json(system, cells)
        if out:
            _write(out / "matrix.json", dumps(payload))
            _write(out / "matrix.csv", report.matrix_csv(cells))
            try:
                report.plot_matrix(cells, out / "matrix.png")
            except OSError as exc:
                raise _Exit(EXIT_IO, str(exc)) from None
        _emit(args, payload, report.render_matrix_text(system.name, cells))
        return EXIT_OK
    findings = out / "findings" if out else None
    try:
        summary = fuzz(systems, configs, findings, jobs=args.jobs)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"corpus write failed: {exc}") from None
    payload = summary.to_json()
    if out:
        _write(out / "summary.json", dumps(payload))
        _write(out / "summary.csv", report.summary_csv(summary))
        try:
            report.plot_summary(summary, out / "summary.png")
        except OSError as exc:
            raise _Exit(EXIT_IO, str(exc)) from None
    _emit(args, payload, report.render_summary_text(summary))
    return EXIT_OK


def cmd_gen(args) -> int:
    systems = generate(_gen_config(args))
    if args.out:
        for s in systems:
            _write(Path(args.out) / f"{s.name}.json", dumps(s.to_json()))
    _emit(args, {"instances": [s.to_json() for s in systems]},
          "".join(f"{s.name}\n" for s in systems))
    return EXIT_OK


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    order = argparse.ArgumentParser(add_help=False)
    order.add_argument("-k", type=int, required=True, help="order bound (order is k+1)")

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--vertices", type=int, default=4)
    gen.add_argument("--edges", type=int, default=None)
    gen.add_argument("--density", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)

    p = argparse.ArgumentParser(prog="connwidth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check symmetry/submodularity")
    s.add_argument("instance")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("branchwidth", parents=[common], help="exact branch-width")
    s.add_argument("instance")
    s.add_argument("--decompose", metavar="PATH", help="write the witness tree JSON")
    s.add_argument("--oracle", action="store_true", help="cross-check by tree enumeration")
    s.add_argument("--check", metavar="PATH", help="re-verify a decomposition file")
    s.set_defaults(func=cmd_branchwidth)

    s = sub.add_parser("wuf", parents=[common, order], help="weak ultrafilters")
    s.add_argument("action", choices=("find", "enumerate", "check"))
    s.add_argument("instance")
    s.add_argument("--fe-mode", choices=FE_MODES, default="conditional")
    s.add_argument("--require-fp", action="store_true")
    s.add_argument("--axiom-set", choices=AXIOM_SETS, default="weak-ultrafilter")
    s.add_argument("--family", help="family file, or inline JSON")
    s.add_argument("--limit", type=int, default=None)
    s.set_defaults(func=cmd_wuf)

    s = sub.add_parser("tangle", parents=[common, order], help="tangle search")
    s.add_argument("action", choices=("find",))
    s.add_argument("instance")
    s.set_defaults(func=cmd_tangle)

    s = sub.add_parser("duality", parents=[common, gen], help="theorem audits")
    s.add_argument("action", choices=("matrix", "fuzz"))
    s.add_argument("instances", nargs="*")
    s.add_argument("--gen", choices=GENERATOR_KINDS)
    s.add_argument("--fe-mode", choices=FE_MODES, action="append")
    s.add_argument("--out", metavar="DIR", help="write JSON, CSV, figures and findings")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("gen", parents=[common, gen], help="generate instances")
    s.add_argument("--kind", dest="gen", choices=GENERATOR_KINDS, required=True)
    s.add_argument("--out", metavar="DIR", help="write one instance file per system")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_NONE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
