"""``tokenalg`` command line.

Exit codes: 0 when every check passes, 1 when some check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import algebras, johnson, orthopoly, tokens
from .checks import Check, Report, to_jsonable
from .graphs import GraphFormatError, adjacency, is_connected, laplacian, read_graph
from .linalg import as_scalar
from .spectra import DEFAULT_TOL, joint_spectrum


class UsageError(Exception):
    pass


class RunReport:
    """Command echo, input digest, results and per-stage timings (kept out of ``results``)."""

    def __init__(self, argv: list[str], digest: str | None):
        self.command = ["tokenalg", *argv]
        self.digest = digest
        self.results: dict = {}
        self.timing: dict = {}
        self.passed = True
        self.csv = None  # optional tabular form for --format csv

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        self.timing[name] = round(time.perf_counter() - t0, 6)

    def add(self, name: str, payload, passed: bool = True) -> None:
        self.results[name] = to_jsonable(payload)
        self.passed = self.passed and passed

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input_sha256": self.digest,
            "passed": self.passed,
            "results": self.results,
            "timing": self.timing,
        }


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph file (edge list or graph6)")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--alpha", type=_fraction_arg)
    common.add_argument("--beta", type=_fraction_arg)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--mode", choices=("exact", "numeric", "auto"), default="auto")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="tokenalg", description="Token graphs, their Laplacian algebras and Johnson graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("token", parents=[common], help="build F_k(G)")
    t.add_argument("--emit-binomial", action="store_true")
    t.add_argument("--verify", action="store_true", help="check the intertwining theorem")
    sub.add_parser("pair", parents=[common], help="level-wise eigenvalue pairing table")
    q = sub.add_parser("poly", parents=[common], help="predistance polynomial family")
    q.add_argument("--kind", choices=orthopoly.KINDS, default="laplacian")
    q.add_argument("--csv", help="write the 200-point sampling table here")
    j = sub.add_parser("johnson", parents=[common], help="Johnson graph data")
    j.add_argument("--verify", action="store_true")
    a = sub.add_parser("algebra", help="local or global algebra")
    asub = a.add_subparsers(dest="which", required=True)
    asub.add_parser("local", parents=[common])
    asub.add_parser("global", parents=[common])
    sub.add_parser("recognize", parents=[common], help="is a spanning subgraph of J(n,k) a token graph?")
    sub.add_parser("verify-all", parents=[common], help="run every check on one graph")
    return p


def _load(args):
    if not args.input:
        raise UsageError("--input is required")
    try:
        raw = Path(args.input).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    try:
        g = read_graph(raw)
    except (GraphFormatError, UnicodeDecodeError, ValueError) as exc:
        raise UsageError(f"malformed graph in {args.input}: {exc}") from None
    return g, hashlib.sha256(raw).hexdigest()


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")


def _k_range(k: int, lo: int, hi: int, what: str = "k"):
    if not lo <= k <= hi:
        raise UsageError(f"{what}={k} out of range {lo}..{hi}")


def _report_check(rr: RunReport, name: str, rep: Report) -> None:
    rr.add(name, rep, rep.passed)


def cmd_token(args, rr: RunReport, g) -> None:
    _k_range(args.k, 1, g.n)
    with rr.stage("token graph"):
        tg = tokens.token_graph(g, args.k)
        out = {
            "n": g.n,
            "k": args.k,
            "vertices": [list(s) for s in tg.labels],
            "edges": [list(e) for e in tg.graph.edges],
            "edge_count": tg.graph.m,
        }
        if args.emit_binomial:
            out["binomial"] = tokens.binomial_matrix(g.n, args.k).to_json()
    rr.add("token_graph", out)
    if args.verify:
        if not 1 <= args.k <= g.n - 1:
            raise UsageError("--verify needs 1 <= k <= n-1")
        with rr.stage("theorem"):
            _report_check(rr, "theorem", tokens.verify_token_theorem(g, args.k, args.tol))


def cmd_pair(args, rr: RunReport, g) -> None:
    _k_range(args.k, 1, g.n // 2)
    with rr.stage("pairing"):
        table = algebras.pairing_table(g, args.k, args.mode)
    rr.add("pair_table", table, table.holds)
    rr.csv = table.csv_rows()


def _generator(args, g):
    """The matrix a family is built from: ``L(G)``/``A(G)``, or ``R = alpha L_k + beta Lbar_k`` with ``--k``."""
    if args.k is None:
        return laplacian(g) if args.kind == "laplacian" else adjacency(g)
    if args.kind != "laplacian":
        raise UsageError("--k builds R and needs --kind laplacian")
    _k_range(args.k, 1, g.n - 1)
    lk = tokens.token_laplacian(g, args.k)
    lbar = tokens.complement_token_laplacian(g, args.k)
    alpha = args.alpha if args.alpha is not None else Fraction(1)
    beta = args.beta if args.beta is not None else joint_spectrum(lk, lbar, args.mode, args.tol).beta
    return lk * as_scalar(alpha) + lbar * as_scalar(beta)


def cmd_poly(args, rr: RunReport, g) -> None:
    m = _generator(args, g)
    with rr.stage("family"):
        fam = orthopoly.matrix_predistance_family(m, args.kind, args.mode, args.tol)
    defect = orthopoly.orthogonality_defect(fam)
    ok = defect == 0 if fam.exact else defect <= orthopoly.NUMERIC_ORTHO_TOL
    rr.add("family", fam)
    rr.add("orthogonality_defect", defect if fam.exact else float(defect), ok)
    if args.kind == "laplacian":
        with rr.stage("hoffman"):
            h = orthopoly.hoffman_connected_check(m, args.mode)
        connected = is_connected(g) if args.k is None else None
        rr.add("hoffman", h, connected is None or h.holds == connected)
    else:
        h = orthopoly.hoffman_regular_check(g, args.mode)
        rr.add("hoffman", h, h.holds == (is_connected(g) and g.is_regular()))
    top = float(np.max(np.linalg.eigvalsh(m.to_float())))
    xs = np.linspace(0.0, top, 200)
    table = [["x"] + [f"p{i}" for i in range(len(fam.polys))]] + fam.sample_table(xs)
    rr.csv = table
    if args.csv:
        _write_csv(Path(args.csv), table)


def cmd_johnson(args, rr: RunReport) -> None:
    _need(args, "n", "k")
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    _k_range(args.k, 1, args.n - 1)
    with rr.stage("closed forms"):
        rr.add("intersection_array", johnson.johnson_intersection_array(args.n, args.k))
        rr.add("laplacian_spectrum", johnson.johnson_laplacian_spectrum(args.n, args.k))
        rr.add("quotient_matrix", johnson.quotient_matrix(johnson.johnson_intersection_array(args.n, args.k)))
    if args.verify:
        with rr.stage("verify"):
            _report_check(rr, "verify", johnson.verify_johnson(args.n, args.k))


def cmd_algebra(args, rr: RunReport) -> None:
    if args.which == "global":
        _need(args, "n", "k")
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        _k_range(args.k, 1, args.n - 1)
        with rr.stage("global"):
            rep = algebras.global_algebra(args.n, args.k)
        rr.add("global_algebra", rep, rep.passed)
        return
    g, _ = _load(args)
    _need(args, "k")
    _k_range(args.k, 1, g.n - 1)
    with rr.stage("local"):
        rep = algebras.local_algebra(g, args.k, args.alpha, args.beta, args.mode, args.tol)
    rr.add("local_algebra", rep, rep.passed)


def cmd_recognize(args, rr: RunReport, s) -> None:
    _need(args, "n", "k")
    _k_range(args.k, 1, args.n - 1)
    try:
        with rr.stage("recognize"):
            rep = algebras.commute_iff_token(s, args.n, args.k)
    except algebras.NotJohnsonSubgraphError as exc:
        raise UsageError(str(exc)) from None
    rr.add("recognition", rep.recognition)
    rr.add("commute_iff_token", rep, rep.agree)
    if rep.recognition.accepted:
        rr.csv = [["u", "v"]] + [list(e) for e in rep.recognition.graph.edges]


def cmd_verify_all(args, rr: RunReport, g) -> None:
    _need(args, "k")
    _k_range(args.k, 1, g.n - 1)
    k = args.k
    with rr.stage("theorem"):
        _report_check(rr, "token_theorem", tokens.verify_token_theorem(g, k, args.tol))
    with rr.stage("commute"):
        c = algebras.check_commute(g, k)
        rr.add("commute", c, c.laplacians)
    if k <= g.n // 2:
        with rr.stage("pairing"):
            table = algebras.pairing_table(g, k, args.mode)
            rr.add("pairing", table, table.holds)
    with rr.stage("local algebra"):
        rep = algebras.local_algebra(g, k, args.alpha, args.beta, args.mode, args.tol)
        rr.add("local_algebra", rep, rep.passed)
    with rr.stage("hoffman"):
        h = orthopoly.hoffman_connected_check(laplacian(g), args.mode)
        conn = is_connected(g)
        rr.add("hoffman_connected", Check("H_L(L) = J iff connected", h.holds == conn, None if h.holds == conn else
                                          {"hoffman": h.holds, "bfs_connected": conn}, h), h.holds == conn)
        hr = orthopoly.hoffman_regular_check(g, args.mode)
        want = conn and g.is_regular()
        rr.add("hoffman_regular", Check("H(A) = J iff connected and regular", hr.holds == want, None if hr.holds == want
                                        else {"hoffman": hr.holds, "connected_regular": want}, hr), hr.holds == want)


def _write_csv(path: Path | None, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([to_jsonable(x) for x in row])
    text = buf.getvalue()
    if path is not None:
        path.write_text(text)
    return text


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        graph, digest = (None, None)
        if args.command in ("token", "pair", "poly", "recognize", "verify-all"):
            graph, digest = _load(args)
            if args.command in ("token", "pair", "verify-all"):
                _need(args, "k")
        elif args.command == "algebra" and args.which == "local" and args.input:
            digest = _load(args)[1]
        rr = RunReport(argv, digest)
        if args.command == "token":
            cmd_token(args, rr, graph)
        elif args.command == "pair":
            cmd_pair(args, rr, graph)
        elif args.command == "poly":
            cmd_poly(args, rr, graph)
        elif args.command == "johnson":
            cmd_johnson(args, rr)
        elif args.command == "algebra":
            cmd_algebra(args, rr)
        elif args.command == "recognize":
            cmd_recognize(args, rr, graph)
        else:
            cmd_verify_all(args, rr, graph)
    except UsageError as exc:
        print(f"tokenalg: error: {exc}", file=sys.stderr)
        return 2
    except algebras.NotCommutingError as exc:
        print(f"tokenalg: check failed: {exc}", file=sys.stderr)
        return 1
    if args.format == "csv":
        if rr.csv is None:
            print("tokenalg: error: this command has no CSV output", file=sys.stderr)
            return 2
        text = _write_csv(None, rr.csv)
    else:
        text = json.dumps(rr.to_json(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if rr.passed else 1


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
