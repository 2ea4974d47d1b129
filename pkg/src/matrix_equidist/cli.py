"""Command line front end.

Exit status: 0 on success, 1 when a verification assertion fails, 2 on
usage or configuration errors (bad flags, unreadable files, invalid
parameters).  The default worker count comes from ``MATEQ_THREADS``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import experiments as ex
from .charsum import evaluate_counts, form_histograms, hyper_kloosterman_freq
from .embed import Embedding, embed
from .errors import MatrixEquidistError
from .fp import as_matrix
from .groups import GroupKind, count_members, default_threads, desk_scale_limit, order
from .region import Box, RegionUnion, count_image
from .report import dumps, write_plot_data, write_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path: str, flag: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"{flag}: file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc}") from None


def _matrix(path: str | None, flag: str, n: int | None = None, p: int | None = None):
    """A matrix file {n, p, entries}; ``p`` overrides the stored modulus when given."""
    if path is None:
        return None
    obj = _read_json(path, flag)
    try:
        entries = obj["entries"]
        mod = p if p is not None else obj["p"]
        m = as_matrix(entries, n if n is not None else obj.get("n"), mod)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{flag}: expected {{n, p, entries: [[...]]}} in {path} ({exc})") from None
    if "n" in obj and obj["n"] != m.n:
        raise UsageError(f"{flag}: declared n={obj['n']} but entries are {m.n}x{m.n}")
    return m


def _region(path: str | None, flag: str = "--region"):
    if path is None:
        return None
    try:
        return RegionUnion.from_json(_read_json(path, flag))
    except (KeyError, TypeError, ValueError, MatrixEquidistError) as exc:
        raise UsageError(f"{flag}: expected {{k, boxes: [{{lo, hi}}, ...]}} in {path} ({exc})") from None


def _boxes(path: str | None):
    """A box family; unlike a region its boxes may overlap."""
    if path is None:
        return None
    obj = _read_json(path, "--boxes")
    try:
        items = obj["boxes"] if isinstance(obj, dict) else obj
        return [Box.from_json(b) for b in items]
    except (KeyError, TypeError, ValueError, MatrixEquidistError) as exc:
        raise UsageError(f"--boxes: expected a list of {{lo, hi}} boxes in {path} ({exc})") from None


def _p_list(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _int_vector(text: str) -> list[int]:
    return _p_list(text)


def _emit(obj, args) -> None:
    text = obj if isinstance(obj, str) else dumps(obj)
    print(text)
    if getattr(args, "report", None) and not isinstance(obj, str):
        write_report(obj, args.report)


def _finish_report(report: dict, args, series: str | None = None, columns=("p", "value")) -> int:
    _emit(report, args)
    if getattr(args, "plot_data", None):
        write_plot_data(args.plot_data, columns, ex.plot_rows(report, series))
    if not report["passed"]:
        for v in report["verdicts"]:
            if v["status"] == "fail":
                print(f"FAILED {v['check']}: {v.get('detail', '')}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- subcommands -----------------------------------------------------------


def cmd_order(args) -> int:
    print(order(args.group, args.n, args.p))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    print(count_members(args.group, args.n, args.p, threads=args.threads))
    return EXIT_OK


def cmd_embed(args) -> int:
    a = _matrix(args.matrix, "--matrix", args.n, args.p)
    aux = _matrix(args.aux_matrix, "--aux-matrix", a.n, a.p)
    _emit(embed(args.embedding, a, aux).to_json(), args)
    return EXIT_OK


def cmd_count(args) -> int:
    region = _region(args.region)
    emb = Embedding.parse(args.embedding)
    kind = args.group or emb.default_kind().value
    aux = _matrix(args.aux_matrix, "--aux-matrix", args.n, args.p)
    c = count_image(kind, args.n, args.p, emb, region, aux=aux, threads=args.threads)
    N = order(kind, args.n, args.p)
    err = abs(Fraction(c, N) - region.area())
    _emit({"count": c, "N": N, "area": region.area(), "error": err, "error_value": float(err)}, args)
    return EXIT_OK


CHARSUM_EXPONENT = {
    # normalisation exponents e in p^e, matching the bounds checked by the lemma suites
    ("s", "z"): lambda n: n * n - 2.5,
    ("s", "gl"): lambda n: n * n - 2.5,
    ("s", "sl"): lambda n: n * n - n,
    ("s", "m"): lambda n: n * n,
    ("kgl", "gl"): lambda n: n * n - 0.5,
    ("ksl", "sl"): lambda n: n * n - 2,
}


def cmd_charsum(args) -> int:
    n, p = args.n, args.p
    if args.which == "hyper":
        if args.a is None:
            raise UsageError("charsum hyper: --a a1,...,an is required")
        counts = hyper_kloosterman_freq(args.a, p).counts
        e = (len(args.a) - 1) / 2
    else:
        if args.u is None:
            raise UsageError(f"charsum {args.which}: --u FILE is required")
        u = _matrix(args.u, "--u", n, p)
        if args.which == "s":
            kind = GroupKind.parse(args.group or "gl")
            counts = form_histograms(kind, n, p, [u], threads=args.threads)[0]
        else:
            if args.v is None:
                raise UsageError(f"charsum {args.which}: --v FILE is required")
            v = _matrix(args.v, "--v", n, p)
            kind = GroupKind.GL if args.which == "kgl" else GroupKind.SL
            if args.m is not None:
                if args.which != "kgl":
                    raise UsageError("--m is only meaningful for charsum kgl")
                v = _matrix(args.m, "--m", n, p).transpose() @ v
            counts = form_histograms(kind, n, p, [u], [v], threads=args.threads)[0]
        e = CHARSUM_EXPONENT[(args.which, kind.value)](n)
    value = complex(evaluate_counts(counts, p))
    _emit({"counts": counts.tolist(), "complex": {"re": value.real, "im": value.imag}, "abs": abs(value),
           "normalized_by": f"p^{e:g}", "ratio": abs(value) / float(p) ** e}, args)
    return EXIT_OK


def cmd_etk(args) -> int:
    p_list = args.p_list or ([args.p] if args.p else None)
    if not p_list:
        raise UsageError("etk: give --p P or --p-list P1,P2,...")
    aux = _matrix(args.aux_matrix, "--aux-matrix", args.n, p_list[0])
    report = ex.etk_check(args.n, p_list, args.embedding, args.H, _boxes(args.boxes), aux,
                          kind=args.group, threads=args.threads)
    return _finish_report(report, args, columns=("p", "etk_bound"))


def cmd_verify(args) -> int:
    if args.what == "sl2":
        if args.p is None:
            raise UsageError("verify sl2: --p is required")
        h = args.h or ex.SL2_DEFAULT_H
        report = ex.sl2_counterexample(args.p, h, allow_violation=args.allow_violation, threads=args.threads)
        return _finish_report(report, args)
    if not args.p_list:
        raise UsageError(f"verify {args.what}: --p-list is required")
    if args.what == "theorem":
        emb = args.embedding or "g"
        if emb == "f":
            k = 2
            aux = None
        else:
            k = Embedding.parse(emb).dim(args.n)
            aux = _matrix(args.aux_matrix, "--aux-matrix", args.n, args.p_list[0])
        region = _region(args.region) or ex.decay_region(k)
        report = ex.theorem_scan(emb, args.n, args.p_list, region, aux, H=args.H, threads=args.threads)
        return _finish_report(report, args, columns=("p", "error"))
    if args.what == "lemma":
        if args.lemma is None:
            raise UsageError("verify lemma: --lemma {L1,L2,L3,L4,S4,R2} is required")
        golden = _read_json(args.golden, "--golden") if args.golden else None
        report = ex.verify_lemma_bounds(args.lemma, args.n, args.p_list, args.samples, args.seed,
                                        golden=golden, threads=args.threads)
        return _finish_report(report, args, series=args.series, columns=("p", "max_ratio"))
    if args.what == "hyper":
        report = ex.hyper_kloosterman_scan(args.n_list or [2], args.p_list)
        return _finish_report(report, args)
    raise UsageError(f"unknown verify target {args.what}")


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $MATEQ_THREADS or 1)")
    common.add_argument("--allow-large", action="store_true",
                        help="lift the desk-scale guard on p^(n^2)")
    common.add_argument("--report", metavar="FILE", help="also write the JSON output to FILE")

    group_arg = argparse.ArgumentParser(add_help=False)
    group_arg.add_argument("--group", choices=["m", "gl", "sl", "z"], default=None)

    np_args = argparse.ArgumentParser(add_help=False)
    np_args.add_argument("--n", type=int, required=True)
    np_args.add_argument("--p", type=int, required=True)

    parser = argparse.ArgumentParser(prog="matrix-equidist",
                                     description="Character sums and equidistribution over matrix groups mod p.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("order", parents=[common, group_arg, np_args], help="closed-form group order")
    s.set_defaults(func=cmd_order, group_default="gl")
    s = sub.add_parser("enumerate", parents=[common, group_arg, np_args], help="count members by enumeration")
    s.set_defaults(func=cmd_enumerate, group_default="gl")

    s = sub.add_parser("embed", parents=[common], help="embed one matrix into the unit cube")
    s.add_argument("--matrix", required=True, metavar="FILE")
    s.add_argument("--embedding", choices=[e.value for e in Embedding], default="g")
    s.add_argument("--aux-matrix", metavar="FILE")
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=int)
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("count", parents=[common, group_arg, np_args], help="image points inside a region")
    s.add_argument("--region", required=True, metavar="FILE")
    s.add_argument("--embedding", choices=[e.value for e in Embedding], default="g")
    s.add_argument("--aux-matrix", metavar="FILE")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("charsum", parents=[common, group_arg], help="exact character sums")
    s.add_argument("which", choices=["s", "kgl", "ksl", "hyper"])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--u", metavar="FILE")
    s.add_argument("--v", metavar="FILE")
    s.add_argument("--m", metavar="FILE")
    s.add_argument("--a", type=_int_vector, metavar="A1,...,AN", help="coefficients for hyper")
    s.set_defaults(func=cmd_charsum)

    s = sub.add_parser("etk", parents=[common, group_arg], help="ETK bound against a box family")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int)
    s.add_argument("--p-list", type=_p_list)
    s.add_argument("--embedding", choices=[e.value for e in Embedding], default="g")
    s.add_argument("--H", type=int, default=1)
    s.add_argument("--boxes", metavar="FILE", help="box family JSON (default: the 50-box preset)")
    s.add_argument("--aux-matrix", metavar="FILE")
    s.add_argument("--plot-data", metavar="FILE")
    s.set_defaults(func=cmd_etk)

    s = sub.add_parser("verify", parents=[common], help="verification suites")
    s.add_argument("what", choices=["theorem", "sl2", "lemma", "hyper"])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--p", type=int)
    s.add_argument("--p-list", type=_p_list)
    s.add_argument("--n-list", type=_p_list)
    s.add_argument("--embedding", choices=[e.value for e in Embedding] + ["f"])
    s.add_argument("--region", metavar="FILE")
    s.add_argument("--aux-matrix", metavar="FILE")
    s.add_argument("--H", type=int)
    s.add_argument("--h", type=_int_vector, metavar="H1,...,H8")
    s.add_argument("--allow-violation", action="store_true")
    s.add_argument("--lemma", choices=sorted(ex.LEMMAS))
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--golden", metavar="FILE")
    s.add_argument("--series", help="restrict plot data to one series")
    s.add_argument("--plot-data", metavar="FILE")
    s.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if hasattr(args, "group") and args.group is None and hasattr(args, "group_default"):
        args.group = args.group_default
    if args.threads is None:
        args.threads = default_threads()
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    guard = desk_scale_limit(None) if args.allow_large else contextlib.nullcontext()
    try:
        with guard:
            return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MatrixEquidistError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
