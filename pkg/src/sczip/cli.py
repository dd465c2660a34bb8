"""Command-line interface: compress, decompress, analyze, bench, latency.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench, channel, container, optimizer, tensor
from .errors import SczipError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _env_float(name: str, fallback: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw is not None else fallback


def _channel_from_args(args) -> channel.ChannelParams:
    return channel.ChannelParams.from_db(
        bandwidth_hz=args.bw_hz,
        snr_db=args.snr_db,
        fading_var=args.sigma2,
        outage_prob=args.eps,
    )


def _add_channel_flags(p: argparse.ArgumentParser) -> None:
    # Environment variables provide the defaults; flags override.
    p.add_argument("--eps", type=float, default=_env_float("SCZ_EPS", channel.DEFAULT_EPS))
    p.add_argument(
        "--bw-hz", type=float, default=_env_float("SCZ_BW_HZ", channel.DEFAULT_BANDWIDTH_HZ)
    )
    p.add_argument(
        "--snr-db", type=float, default=_env_float("SCZ_SNR_DB", channel.DEFAULT_SNR_DB)
    )
    p.add_argument(
        "--sigma2", type=float, default=_env_float("SCZ_SIGMA2", channel.DEFAULT_FADING_VAR)
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sczip", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("compress", help="compress an RTF tensor into a .scz container")
    p.add_argument("input")
    p.add_argument("--q", type=int, required=True, help="quantization bit-width")
    p.add_argument("--n", type=int, default=None, help="explicit reshape row count")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("decompress", help="decode a .scz container back to RTF")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("analyze", help="print the reshape candidate table")
    p.add_argument("input")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--csv", default=None, help="also write the table as CSV")

    p = sub.add_parser("bench", help="sweep Q values on a synthetic tensor")
    p.add_argument("--kind", default="relu-laplace", choices=bench.KINDS)
    p.add_argument("--dims", required=True, help="comma-separated, e.g. 128,28,28")
    p.add_argument("--sparsity", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--q-list", required=True, help="comma-separated bit-widths")
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--csv", required=True)
    _add_channel_flags(p)

    p = sub.add_parser("latency", help="modeled link latency for a container")
    p.add_argument("input")
    _add_channel_flags(p)

    return parser


def cli_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1

    try:
        if args.command == "compress":
            t = tensor.read_rtf(args.input)
            c = container.compress(t, args.q, args.n)
            container.write_container(c, args.output)
            print(
                f"{args.output}: {c.total_bytes} bytes "
                f"(header {c.header_bytes}, payload {c.payload_bytes}), "
                f"N={c.n_rows}, K={c.n_cols}, nnz={c.nnz}"
            )
        elif args.command == "decompress":
            c = container.read_container(args.input)
            t = container.decompress(c)
            tensor.write_rtf(t, args.output)
            print(f"{args.output}: dims {'x'.join(map(str, t.dims))}")
        elif args.command == "analyze":
            t = tensor.read_rtf(args.input)
            chosen, report = optimizer.exhaustive_search(t, args.q)
            print(f"{'N':>10} {'K':>8} {'entropy':>10} {'t_tot':>14} chosen")
            for c in report.candidates:
                mark = "*" if c.n_rows == chosen else ""
                print(
                    f"{c.n_rows:>10} {c.n_cols:>8} {c.entropy_bits:>10.4f} "
                    f"{c.t_tot:>14.1f} {mark}"
                )
            if args.csv:
                optimizer.write_report_csv(report, args.csv)
        elif args.command == "bench":
            dims = [int(d) for d in args.dims.split(",")]
            q_list = [int(q) for q in args.q_list.split(",")] if args.q_list else []
            t = bench.gen_synthetic(args.kind, dims, args.sparsity, args.seed)
            records = bench.run_sweep(
                t,
                q_list,
                tensor_id=f"{args.kind}-{args.seed}",
                repetitions=args.repetitions,
                csv_path=args.csv,
                link=_channel_from_args(args),
            )
            print(f"{args.csv}: {len(records)} rows")
        elif args.command == "latency":
            c = container.read_container(args.input)
            link = _channel_from_args(args)
            bits = 8 * c.payload_bytes
            seconds = channel.comm_latency(bits, link)
            print(f"payload_bits={bits} rate_bps={channel.outage_rate(link):.1f} t_comm_s={seconds:.9g}")
    except (ValueError, SczipError, OSError) as exc:
        print(f"sczip: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    raise SystemExit(cli_dispatch())
