"""Command-line front end: gen, decompose, prune, verify.

Exit codes: 0 success, 1 verification failure, 2 usage or IO error,
3 restart needed but not permitted (--no-restart).
"""

from __future__ import annotations

import json
import logging
import os
import re
import sys
from fractions import Fraction

import click

from . import oracle as _oracle
from .decomposition import (DecompConfig, ExpanderDecomposition, expander_decomposition,
                            maintain, shape_delta)
from .errors import ExdirError
from .generators import GENERATORS
from .graph import contract, format_edge_list, is_dag, parse_deletions, parse_edge_list
from .report import _fmt
from .verify import refinement_report, verify_decomposition

log = logging.getLogger("exdir")

FULL_EVERY = 1 << 10
_RATIONAL = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


class RationalType(click.ParamType):
    name = "p/q"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        m = _RATIONAL.match(str(value))
        if not m or (m.group(2) is not None and int(m.group(2)) == 0):
            self.fail(f"{value!r} is not an exact rational like 1/64", param, ctx)
        return Fraction(int(m.group(1)), int(m.group(2) or 1))


RATIONAL = RationalType()


def _setup_logging(level):
    level = os.environ.get("EXDIR_LOG") or level or "warning"
    lvl = getattr(logging, level.upper(), None)
    if not isinstance(lvl, int):
        raise click.UsageError(f"unknown log level {level!r}")
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("exdir").setLevel(lvl)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        click.echo(text, nl=False)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _config(seed, oracle, h, threads):
    if threads and threads > 1:
        log.warning("--threads %d: recursion runs serially in this build", threads)
    ocfg = _oracle.OracleConfig(seed=seed, h=h)
    return DecompConfig(oracle=oracle, oracle_cfg=ocfg)


def _fail(code, msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


common = [
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--oracle", type=click.Choice(["auto", "brute", "cutmatching"]),
                 default="auto", show_default=True),
    click.option("--h", "h", type=int, default=None, help="flow height override"),
    click.option("--threads", type=int, default=1, show_default=True),
]


def with_common(f):
    for opt in reversed(common):
        f = opt(f)
    return f


@click.group()
@click.option("--log", "log_level", default=None, help="log level (EXDIR_LOG overrides)")
def main(log_level):
    """Directed expander decompositions under edge deletions."""
    _setup_logging(log_level)


@main.command()
@click.argument("name", type=click.Choice(sorted(GENERATORS)))
@click.argument("params", nargs=-1)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def gen(name, params, seed, out):
    """Write a generated graph as an edge list.

    PARAMS are integers, positional or as key=value (n=64 d=8)."""
    args, kwargs = [], {}
    for p in params:
        k, eq, v = p.partition("=")
        try:
            if eq:
                kwargs[k] = int(v)
            else:
                args.append(int(p))
        except ValueError:
            raise click.UsageError(f"bad parameter {p!r}") from None
    kwargs.setdefault("seed", seed)
    try:
        G = GENERATORS[name](*args, **kwargs)
    except TypeError as exc:
        raise click.UsageError(f"{name}: {exc}") from None
    except ExdirError as exc:
        raise click.UsageError(str(exc)) from None
    _write(out, format_edge_list(G))


def _summary(G, d):
    m = G.e_count()
    H, _ = contract(G, [c.vertices for c in d.clusters], drop=d.er)
    budget = d.beta * d.phi_input * m
    nontrivial = sum(1 for c in d.clusters if not c.trivial)
    return (f"clusters: {len(d.clusters)} ({nontrivial} non-trivial)\n"
            f"E^r: {len(d.er)}  budget beta*phi*m = {float(budget):.4g}"
            f"  |E^r|/(phi*m) = {float(len(d.er) / (d.phi_input * max(m, 1))):.4g}\n"
            f"quality: phi = {_fmt(d.phi)}  psi = {_fmt(d.psi)}\n"
            f"dag: {'ok' if is_dag(H) else 'FAILED'}\n"
            f"work: {d.work}  oracle calls: {d.oracle_calls}")


@main.command()
@click.argument("graph")
@click.option("--phi", type=RATIONAL, required=True)
@with_common
@click.option("--verify", "do_verify", is_flag=True, help="verify the result")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def decompose(graph, phi, seed, oracle, h, threads, do_verify, out):
    """Static decomposition of an edge-list graph; writes JSON."""
    try:
        G = parse_edge_list(_read(graph))
        d = expander_decomposition(G, phi, _config(seed, oracle, h, threads))
    except (OSError, ExdirError) as exc:
        _fail(2, str(exc))
    text = json.dumps(d.to_dict(), indent=1) + "\n"
    if out is not None:
        _write(out, text)
    click.echo(_summary(G, d), err=out is None)
    if out is None:
        _write(None, text)
    if do_verify:
        rep = verify_decomposition(G, d)
        click.echo(str(rep), err=True)
        if not rep.ok:
            sys.exit(1)


@main.command()
@click.argument("graph")
@click.argument("deletions")
@click.option("--phi", type=RATIONAL, required=True)
@click.option("--psi", type=RATIONAL, default=None, help="unused; accepted for symmetry")
@with_common
@click.option("--verify", "do_verify", is_flag=True,
              help="verify every snapshot and refinement within epochs")
@click.option("--no-restart", is_flag=True, help="exit 3 instead of restarting")
@click.option("--exact-limit", type=int, default=12, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="snapshot stream (JSON lines)")
def prune(graph, deletions, phi, psi, seed, oracle, h, threads, do_verify, no_restart,
          exact_limit, out):
    """Maintain a decomposition under a deletion stream."""
    try:
        G = parse_edge_list(_read(graph))
        dels = parse_deletions(_read(deletions))
    except (OSError, ExdirError) as exc:
        _fail(2, str(exc))
    cfg = _config(seed, oracle, h, threads)
    fh = open(out, "w") if out not in (None, "-") else None
    stats = []
    prev = None
    quality = None
    failed = False
    try:
        for s in maintain(G, phi, dels, cfg):
            if s.event in ("init", "restart"):
                if s.event == "restart":
                    click.echo(f"restart at deletion {s.index} (epoch {s.epoch})", err=True)
                    if no_restart:
                        _fail(3, f"deletion {s.index} needs a restart")
                b, p, q = s.decomp.quality()
                quality = (4 * b, p * q ** 4 / 400, q ** 2 / 20)
                stats.append({"epoch": s.epoch, "start": s.index, "deletions": 0,
                              "prunes": 0, "work0": s.work, "work": 0})
                prev = None
            ep = stats[-1]
            if s.index:
                ep["deletions"] += 1
            if s.event == "cluster" and prev is not None and s.shape[0] != prev[0]:
                ep["prunes"] += 1
            ep["work"] = s.work - ep["work0"]
            rec = {"index": s.index, "epoch": s.epoch, "event": s.event, "edge": s.edge,
                   "work": s.work}
            if prev is None or s.index % FULL_EVERY == 0:
                rec["full"] = s.decomp.to_dict()
            else:
                rec["delta"] = shape_delta(prev, s.shape)
            if fh is not None:
                fh.write(json.dumps(rec) + "\n")
            elif out == "-":
                click.echo(json.dumps(rec))
            if do_verify:
                rep = verify_decomposition(None, s.decomp, quality, exact_limit)
                if prev is not None:
                    rep.extend(refinement_report(prev, s.shape, s.deleted))
                if not rep.ok:
                    failed = True
                    click.echo(f"snapshot {s.index}:\n" + str(rep), err=True)
            prev = s.shape
    except ExdirError as exc:
        _fail(2, str(exc))
    finally:
        if fh is not None:
            fh.close()
    for ep in stats:
        click.echo(f"epoch {ep['epoch']}: start {ep['start']}  deletions {ep['deletions']}"
                   f"  prunes {ep['prunes']}  work {ep['work']}", err=True)
    click.echo(f"restarts: {len(stats) - 1}", err=True)
    if failed:
        sys.exit(1)


@main.command()
@click.argument("graph")
@click.argument("decomposition")
@click.option("--phi", type=RATIONAL, default=None, help="check clusters at this phi")
@click.option("--psi", type=RATIONAL, default=None, help="check witnesses at this psi")
@click.option("--exact-limit", type=int, default=12, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="print the report as JSON")
def verify(graph, decomposition, phi, psi, exact_limit, as_json):
    """Verify a decomposition JSON against its graph; exit 0 iff it passes."""
    try:
        G = parse_edge_list(_read(graph))
        d = ExpanderDecomposition.from_dict(json.loads(_read(decomposition)), G)
        quality = None
        if phi is not None or psi is not None:
            quality = (d.beta, phi if phi is not None else d.phi,
                       psi if psi is not None else d.psi)
        rep = verify_decomposition(None, d, quality, exact_limit)
    except (OSError, ValueError, IndexError, ExdirError) as exc:
        _fail(2, f"{type(exc).__name__}: {exc}")
    click.echo(json.dumps(rep.to_dict(), indent=1) if as_json else str(rep))
    sys.exit(0 if rep.ok else 1)


if __name__ == "__main__":
    main()
