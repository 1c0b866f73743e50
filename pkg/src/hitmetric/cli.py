"""``mhm``: command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .chain import MarkovChain, is_irreducible, parse_chain
from .errors import HitmetricError, ValidationError
from .factor import build_factor, verify_factor_consistency
from .hitting import WeightMatrix, mean_hitting_matrix, parse_weights, weighted_hitting_matrix
from .metric import first_hit_certainty, metric_matrix, reduce_to_three, triangle_slack
from .montecarlo import simulate_hitting
from .paths import decay_certificate, truncated_hitting

COMMANDS = ("validate", "hitting", "metric", "factor", "reduce3", "check", "oracle", "simulate")

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    chain_path: str
    weights_path: str | None = None
    subset: str | None = None
    source: str | None = None
    target: str | None = None
    trials: int | None = None
    seed: int | None = None
    max_len: int | None = None
    format: str = "text"

    def check(self) -> None:
        if self.command in ("factor", "reduce3") and not self.subset:
            raise UsageError(f"{self.command} requires --subset")
        if self.command in ("oracle", "simulate") and (self.source is None or self.target is None):
            raise UsageError(f"{self.command} requires --from and --to")
        if self.command == "simulate" and (self.seed is None or self.trials is None):
            raise UsageError("simulate requires --seed and --trials")
        if self.command == "oracle" and self.max_len is None:
            raise UsageError("oracle requires --max-len")
        if self.trials is not None and self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if self.max_len is not None and self.max_len < 0:
            raise UsageError("--max-len must be >= 0")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mhm", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("chain_path", metavar="chain-file")
    p.add_argument("--weights", dest="weights_path", metavar="FILE")
    p.add_argument("--subset", metavar="LIST", help="comma-separated labels or indices")
    p.add_argument("--from", dest="source", metavar="S")
    p.add_argument("--to", dest="target", metavar="S")
    p.add_argument("--trials", type=int, metavar="N")
    p.add_argument("--seed", type=int, metavar="U64")
    p.add_argument("--max-len", type=int, metavar="L")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    return p


# -- formatting ----------------------------------------------------------------

def _num(x: float, csv: bool) -> str:
    x = float(x)
    return repr(x) if csv else f"{x:.12g}"


def _matrix(M: np.ndarray, labels: Sequence[str], csv: bool) -> list[str]:
    if csv:
        return [",".join(_num(x, True) for x in row) for row in M]
    cells = [[_num(x, False) for x in row] for row in M]
    width = max([len(s) for s in labels] + [len(c) for row in cells for c in row])
    lines = [" " * width + "  " + "  ".join(s.rjust(width) for s in labels)]
    for lab, row in zip(labels, cells):
        lines.append(lab.rjust(width) + "  " + "  ".join(c.rjust(width) for c in row))
    return lines


def _pairs(rows: list[tuple[str, object]], csv: bool) -> list[str]:
    if csv:
        return [",".join(k for k, _ in rows), ",".join(str(v) for _, v in rows)]
    return [f"{k}: {v}" for k, v in rows]


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


# -- input ---------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def resolve_state(chain: MarkovChain, token: str, err: TextIO) -> int:
    """Map a label or index to a state index; labels take precedence."""
    token = token.strip()
    if token in chain.labels:
        i = chain.labels.index(token)
        if token.isdigit() and int(token) != i:
            print(f"warning: {token!r} is a label of state {i}, not index {token}", file=err)
        return i
    if token.isdigit() and int(token) < chain.n:
        return int(token)
    raise UsageError(f"unknown state {token!r}")


def resolve_subset(chain: MarkovChain, text: str, err: TextIO) -> list[int]:
    return [resolve_state(chain, tok, err) for tok in text.split(",") if tok.strip()]


# -- commands ------------------------------------------------------------------

def _cmd_validate(cfg, chain, out, err) -> int:
    w = is_irreducible(chain)
    rows = [("states", chain.n), ("stochastic", "yes"), ("irreducible", _yes(w.irreducible))]
    if not w.irreducible:
        i, j = w.blocking_pair
        rows.append(("blocking_pair", f"{chain.labels[i]} -> {chain.labels[j]}"))
    print("\n".join(_pairs(rows, cfg.format == "csv")), file=out)
    return EXIT_OK if w.irreducible else EXIT_CHECK


def _weights(cfg, chain) -> WeightMatrix | None:
    if cfg.weights_path is None:
        return None
    V = parse_weights(_read(cfg.weights_path))
    if V.n != chain.n:
        raise UsageError(f"weight matrix is {V.n}x{V.n}, chain has {chain.n} states")
    return V


def _cmd_hitting(cfg, chain, out, err) -> int:
    V = _weights(cfg, chain)
    hm = mean_hitting_matrix(chain) if V is None else weighted_hitting_matrix(chain, V)
    csv = cfg.format == "csv"
    if not csv:
        print("H (expected weight)" if hm.weighted else "H (expected steps)", file=out)
    print("\n".join(_matrix(hm.H, chain.labels, csv)), file=out)
    return EXIT_OK


def _cmd_metric(cfg, chain, out, err) -> int:
    rep = metric_matrix(chain)
    csv = cfg.format == "csv"
    if not csv:
        print("rho", file=out)
    print("\n".join(_matrix(rep.rho, chain.labels, csv)), file=out)
    if not csv:
        print("\n".join(rep.verdicts()), file=out)
    return EXIT_OK


def _cmd_factor(cfg, chain, out, err) -> int:
    W = resolve_subset(chain, cfg.subset, err)
    fc = build_factor(chain, W)
    labels = [chain.labels[w] for w in fc.W]
    csv = cfg.format == "csv"
    lines = []
    if not csv:
        lines.append("W: " + " ".join(labels))
        lines.append("p_bar")
    lines += _matrix(fc.p_bar, labels, csv)
    lines.append("" if csv else "v_bar")
    lines += _matrix(fc.v_bar, labels, csv)
    print("\n".join(lines), file=out)
    return EXIT_OK


def _cmd_reduce3(cfg, chain, out, err) -> int:
    W = resolve_subset(chain, cfg.subset, err)
    if len(W) != 3 or len(set(W)) != 3:
        raise UsageError("reduce3 needs exactly three distinct states in --subset")
    a, b, c = W
    inst, h_ac, h_ab, h_bc = reduce_to_three(chain, a, b, c)
    H = mean_hitting_matrix(chain).H
    csv = cfg.format == "csv"
    rows = [(name, _num(getattr(inst, name), csv)) for name in
            ("p_ab", "p_ac", "p_ba", "p_bc", "p_ca", "p_cb", "v_ab", "v_ac", "v_ba", "v_bc", "v_ca", "v_cb")]
    rows += [
        ("H_ac", _num(h_ac, csv)), ("H_ac_parent", _num(H[a, c], csv)),
        ("H_ab", _num(h_ab, csv)), ("H_ab_parent", _num(H[a, b], csv)),
        ("H_bc", _num(h_bc, csv)), ("H_bc_parent", _num(H[b, c], csv)),
    ]
    if not csv:
        print("states: a={} b={} c={}".format(*(chain.labels[s] for s in W)), file=out)
    print("\n".join(_pairs(rows, csv)), file=out)
    return EXIT_OK


def _cmd_check(cfg, chain, out, err) -> int:
    rep = metric_matrix(chain)
    H = mean_hitting_matrix(chain).H
    eps_h = 1e-9 * (1.0 + float(H.max()))
    worst_h = triangle_slack(H)
    hit_ok = worst_h is None or worst_h.slack >= -eps_h
    certain = min((first_hit_certainty(chain, a, c) for a in range(chain.n) for c in range(chain.n) if a != c),
                  default=1.0)
    certain_ok = abs(certain - 1.0) <= 1e-9
    rows = [
        ("symmetric", _yes(rep.symmetric_ok)),
        ("identity", _yes(rep.identity_ok)),
        ("triangle_rho", _yes(rep.triangle_ok)),
        ("triangle_rho_slack", _num(rep.worst_triangle.slack, cfg.format == "csv") if rep.worst_triangle else "n/a"),
        ("triangle_hitting", _yes(hit_ok)),
        ("triangle_hitting_slack", _num(worst_h.slack, cfg.format == "csv") if worst_h else "n/a"),
        ("first_hit_min", _num(certain, cfg.format == "csv")),
    ]
    ok = rep.ok and hit_ok and certain_ok
    if cfg.subset:
        W = resolve_subset(chain, cfg.subset, err)
        worst = max(
            verify_factor_consistency(chain, W, a, b) / (1.0 + H[a, b]) for a in W for b in W if a != b
        ) if len(set(W)) >= 2 else 0.0
        factor_ok = worst < 1e-8
        rows += [("factor_consistency", _yes(factor_ok)), ("factor_residual_rel", f"{worst:.3g}")]
        ok = ok and factor_ok
    rows.append(("verdict", "pass" if ok else "FAIL"))
    print("\n".join(_pairs(rows, cfg.format == "csv")), file=out)
    if not rep.triangle_ok or not hit_ok:
        print("triangle violation found: implementation defect", file=err)
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_oracle(cfg, chain, out, err) -> int:
    a, b = resolve_state(chain, cfg.source, err), resolve_state(chain, cfg.target, err)
    if a == b:
        raise UsageError("--from and --to must differ")
    prob, h_low, tail = truncated_hitting(chain, a, b, cfg.max_len)
    h = mean_hitting_matrix(chain).H[a, b]
    cert = decay_certificate(chain, b)
    ok = h_low <= h * (1.0 + 1e-12) and (1.0 - prob) <= tail + 1e-12
    csv = cfg.format == "csv"
    rows = [
        ("prob_lower", _num(prob, csv)), ("h_lower", _num(h_low, csv)),
        ("tail_prob_bound", _num(tail, csv)), ("certificate_t", cert.t), ("certificate_q", _num(cert.q, csv)),
        ("solver_H", _num(h, csv)), ("bracket", "ok" if ok else "VIOLATED"),
    ]
    print("\n".join(_pairs(rows, csv)), file=out)
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_simulate(cfg, chain, out, err) -> int:
    a, b = resolve_state(chain, cfg.source, err), resolve_state(chain, cfg.target, err)
    if a == b:
        raise UsageError("--from and --to must differ")
    V = _weights(cfg, chain)
    est = simulate_hitting(chain, a, b, cfg.trials, cfg.seed, V)
    H = mean_hitting_matrix(chain).H if V is None else weighted_hitting_matrix(chain, V).H
    csv = cfg.format == "csv"
    rows = [
        ("mean", _num(est.mean, csv)), ("stderr", _num(est.stderr, csv)),
        ("trials", est.trials), ("seed", est.seed), ("exact", _num(H[a, b], csv)),
    ]
    print("\n".join(_pairs(rows, csv)), file=out)
    return EXIT_OK


_HANDLERS = {
    "validate": _cmd_validate,
    "hitting": _cmd_hitting,
    "metric": _cmd_metric,
    "factor": _cmd_factor,
    "reduce3": _cmd_reduce3,
    "check": _cmd_check,
    "oracle": _cmd_oracle,
    "simulate": _cmd_simulate,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig(**vars(ns))
    try:
        cfg.check()
        text = _read(cfg.chain_path)
        try:
            chain = parse_chain(text)
        except ValidationError as exc:
            print(f"invalid chain {cfg.chain_path}: {exc}", file=err)
            return EXIT_CHECK if cfg.command == "validate" else EXIT_USAGE
        if cfg.format == "text":
            print(f"# mhm {cfg.command} {cfg.chain_path}", file=out)
        return _HANDLERS[cfg.command](cfg, chain, out, err)
    except (UsageError, HitmetricError) as exc:
        print(f"mhm: error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
