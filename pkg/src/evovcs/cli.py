"""Command-line front end: ``evovcs <subcommand> ...``.

Exit status is 0 on success, 2 on usage errors (bad flags, bad partition,
missing input) and 1 when the work itself fails.
"""

from __future__ import annotations

import argparse
import os
import sys
import zlib
from pathlib import Path

from .better import Better2State, Better3State
from .evolving import ShareGroupLayout
from .estimators import Better2Dealer, Better3Dealer, KGroupedDealer, dealer_for_state
from .exceptions import ManifestError, ParameterError, PartitionError, VCSError
from .image import read_pbm, save_pbm, write_pbm
from .manifest import dealer_load, dealer_save
from .recovery import empirical_contrast, parse_partition, select_by_partition, stack_or, stack_xor
from .rng import DEFAULT_SEED
from .theory.curves import compare_curves, find_convergence_n, named_curve
from .theory.tables import render_csv, render_text, table_cells

__all__ = ["main", "run", "build_parser", "share_name"]

MANIFEST_NAME = "dealer.json"


class UsageError(Exception):
    pass


def share_name(i):
    return f"share_{i:04d}.pbm"


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _partition(text):
    try:
        return parse_partition(text)
    except PartitionError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(prog="evovcs", description="Evolving threshold visual cryptography.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("share", help="run the first phase of a dealer")
    p.add_argument("--scheme", choices=("kgrouped", "better2", "better3"), default="kgrouped")
    p.add_argument("--k", type=_positive)
    p.add_argument("--n", type=_positive)
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--out-dir", required=True, type=Path)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)

    p = sub.add_parser("extend", help="issue more shares from a saved dealer")
    p.add_argument("--state", required=True, type=Path)
    p.add_argument("--count", type=_positive, default=1)

    p = sub.add_parser("recover", help="stack shares with OR or combine them with XOR")
    p.add_argument("--mode", choices=("or", "xor"), default="or")
    p.add_argument("--shares", nargs="+", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("contrast", help="measure contrast of a recovered image")
    p.add_argument("--secret", type=Path)
    p.add_argument("--recovered", type=Path)
    p.add_argument("--shares", nargs="+", type=Path)
    p.add_argument("--partition", type=_partition)
    p.add_argument("--state", type=Path)
    p.add_argument("--mode", choices=("or", "xor"), default="or")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)

    p = sub.add_parser("theory", help="regenerate a contrast table")
    p.add_argument("--table", required=True, choices=("I", "II", "III", "IV", "VI"), type=str.upper)
    p.add_argument("--kmax", type=_positive)
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("compare", help="order two schemes by their contrast curves")
    p.add_argument("--a", required=True, choices=("or", "xor", "better"))
    p.add_argument("--b", required=True, choices=("or", "xor", "better"))
    p.add_argument("--k", required=True, type=_positive)
    p.add_argument("--t-max", type=_positive, default=200)

    p = sub.add_parser("convergence", help="smallest n within eps of the limit contrast")
    p.add_argument("--scheme", required=True, choices=("or", "xor", "better"))
    p.add_argument("--k", required=True, type=_positive)
    p.add_argument("--eps", type=float, default=0.005)
    return parser


def _crc(data):
    return f"{zlib.crc32(data) & 0xFFFFFFFF:08x}"


def _read(path):
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    return read_pbm(path)


def _write_manifest(path, state, issued):
    tmp = path.with_suffix(".json.tmp")
    tmp.write_bytes(dealer_save(state, issued))
    os.replace(tmp, path)


def _emit(out_dir, shares, start, issued):
    for i, share in enumerate(shares, start=start):
        data = save_pbm(share, "P4")
        (out_dir / share_name(i)).write_bytes(data)
        issued[i] = _crc(data)


def cmd_share(args, out):
    secret = _read(args.input)
    if args.scheme == "kgrouped":
        if args.k is None:
            raise UsageError("--k is required for the kgrouped scheme")
        dealer = KGroupedDealer(k=args.k, n=args.n, seed=args.seed)
    elif args.k not in (None, 2 if args.scheme == "better2" else 3) or args.n is not None:
        raise UsageError(f"{args.scheme} has a fixed threshold and takes no --n")
    elif args.scheme == "better2":
        dealer = Better2Dealer(seed=args.seed)
    else:
        dealer = Better3Dealer(seed=args.seed)
    try:
        dealer.fit(secret)
    except ParameterError as exc:
        raise UsageError(str(exc)) from exc
    args.out_dir.mkdir(parents=True, exist_ok=True)
    issued = {}
    _emit(args.out_dir, dealer.shares_, 1, issued)
    _write_manifest(args.out_dir / MANIFEST_NAME, dealer.state_, issued)
    print(f"issued shares 1..{len(dealer.shares_)} to {args.out_dir}", file=out)


def _load_state(path):
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    return dealer_load(path.read_bytes())


def cmd_extend(args, out):
    state, issued = _load_state(args.state)
    folder = args.state.parent
    for i, crc in sorted(issued.items()):
        f = folder / share_name(i)
        if not f.is_file():
            raise ManifestError(f"refusing to extend: issued share {f.name} is missing")
        if _crc(f.read_bytes()) != crc:
            raise ManifestError(f"refusing to extend: {f.name} does not match the manifest checksum")
    dealer = dealer_for_state(state)
    first = state.next_t
    new = dealer.extend(args.count)
    _emit(folder, new, first, issued)
    _write_manifest(args.state, dealer.state_, issued)
    print(f"issued shares {first}..{first + len(new) - 1} to {folder}", file=out)


def _combine(shares, mode):
    return stack_xor(shares) if mode == "xor" else stack_or(shares)


def cmd_recover(args, out):
    shares = [_read(p) for p in args.shares]
    write_pbm(args.out, _combine(shares, args.mode))
    print(f"wrote {args.out}", file=out)


def _group_size(state):
    if isinstance(state, Better2State):
        return 2
    if isinstance(state, Better3State):
        return 4
    return state.k


def cmd_contrast(args, out):
    sources = sum(x is not None for x in (args.recovered, args.shares, args.partition))
    if sources != 1:
        raise UsageError("give exactly one of --recovered, --shares or --partition")
    secret = _read(args.secret) if args.secret is not None else None
    if args.partition is not None:
        if args.state is None:
            raise UsageError("--partition needs --state")
        state, _ = _load_state(args.state)
        if secret is None and isinstance(state, Better2State):
            secret = state.secret
        layout = ShareGroupLayout(_group_size(state), state.next_t - 1)
        try:
            pick = select_by_partition(layout, args.partition, args.seed)
        except PartitionError as exc:
            raise UsageError(str(exc)) from exc
        print("shares=" + ",".join(map(str, pick.indices)), file=out)
        recovered = _combine([_read(args.state.parent / share_name(i)) for i in pick.indices], args.mode)
    elif args.shares is not None:
        recovered = _combine([_read(p) for p in args.shares], args.mode)
    else:
        recovered = _read(args.recovered)
    if secret is None:
        raise UsageError("--secret is required")
    out.write(empirical_contrast(recovered, secret).to_text())


def cmd_theory(args, out):
    cells = table_cells(args.table, args.kmax)
    out.write(render_csv(cells) if args.csv else render_text(cells))


def cmd_compare(args, out):
    result = compare_curves(named_curve(args.a, args.k), named_curve(args.b, args.k), args.t_max)
    print(f"outcome={result.outcome}", file=out)
    print(f"limit_order={result.limit_order}", file=out)
    print(f"checked_range={result.checked_range[0]}..{result.checked_range[1]}", file=out)
    print(f"dominates={str(result.dominates).lower()}", file=out)
    print(f"witnesses={len(result.witnesses)}", file=out)
    print(f"violations={','.join(map(str, result.violations))}", file=out)


def cmd_convergence(args, out):
    curve = named_curve(args.scheme, args.k)
    print(find_convergence_n(curve, args.eps), file=out)


COMMANDS = {
    "share": cmd_share,
    "extend": cmd_extend,
    "recover": cmd_recover,
    "contrast": cmd_contrast,
    "theory": cmd_theory,
    "compare": cmd_compare,
    "convergence": cmd_convergence,
}


def run(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args, out)
    except (UsageError, ParameterError, PartitionError) as exc:
        print(f"evovcs {args.command}: error: {exc}", file=err)
        return 2
    except (VCSError, OSError) as exc:
        print(f"evovcs {args.command}: {exc}", file=err)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
