"""Command-line interface: JSON files in, one JSON report out.

Exit codes: 0 pass / feasible / found, 1 checked failure, 2 input error.
Every report carries the command, tolerance and seed it was produced with.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import serialize as ser
from .constructors import (amenability_functional, correlation_from_trace, gns,
                           tensor_realization, trace_property_check, word_pairs)
from .correlations import epsilon_violation, is_nonsignalling, is_perfect, winning_probability
from .errors import (InputError, NlgError, NotImitation, NotPerfect, NumericalInstability,
                     RealizationMismatch)
from .game_model import CANONICAL, is_imitation
from .instances import copy_me_strategy
from .linalg import DEFAULT_TOL
from .membership import DEFAULT_CAP, classical_search, ns_feasible, seesaw
from .strategies import (CommutingStrategy, TensorStrategy, correlation_from_commuting,
                         correlation_from_deterministic, correlation_from_tensor)
from .trace_witness import (restricted_identities, state_convergence_scan, trace_check,
                            witness_report, word_reversal_check)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CHECKED_FAILURES = (NotImitation, NotPerfect, RealizationMismatch, NumericalInstability)


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    seed: int | None = None
    max_len: int | None = None
    out: str | None = None
    dim: int = 2
    iters: int = 50
    cap: int = DEFAULT_CAP
    side: str = "bob"
    game: str | None = None

    def validate(self):
        if not self.tol > 0:
            raise InputError(f"--tol must be positive, got {self.tol}")
        if self.dim < 1:
            raise InputError(f"--dim must be >= 1, got {self.dim}")
        if self.iters < 1:
            raise InputError(f"--iters must be >= 1, got {self.iters}")
        if self.max_len is not None and self.max_len < 0:
            raise InputError(f"--L must be >= 0, got {self.max_len}")
        for p in self.inputs + ([self.game] if self.game else []):
            if not Path(p).is_file():
                raise InputError(f"{p}: file not found")


# loaders that also validate the object

def _game(path):
    return ser.load(path, ser.game_from_json)


def _strategy(path, cfg, tensor_only=True):
    s = ser.load(path, ser.strategy_from_json)
    if tensor_only and not isinstance(s, TensorStrategy):
        raise InputError(f"{path}: a tensor strategy (fields 'dim_a', 'dim_b') is required")
    try:
        s.validate(cfg.tol)
    except NlgError as e:
        raise InputError(f"{path}: {e}") from None
    return s


def _trace(path, cfg):
    t = ser.load(path, ser.tracespec_from_json)
    try:
        t.validate(cfg.tol)
    except NlgError as e:
        raise InputError(f"{path}: field 'density': {e}") from None
    return t


def _hom(path, cfg):
    h = ser.load(path, ser.homspec_from_json)
    try:
        h.validate(cfg.tol)
    except NlgError as e:
        raise InputError(f"{path}: {e}") from None
    return h


def _need(cfg, n):
    if len(cfg.inputs) != n:
        raise InputError(f"'{cfg.command}' takes {n} input file(s), got {len(cfg.inputs)}")
    return cfg.inputs


# subcommands: each returns (passed, report dict)

def game_validate(cfg):
    g = _game(*_need(cfg, 1))
    return True, {"valid": True, "counts": list(g.counts), "n_wins": len(g.wins())}


def game_classify(cfg):
    g = _game(*_need(cfg, 1))
    rep = is_imitation(g)
    return rep.is_imitation, rep.to_dict()


def corr_check(cfg):
    c = ser.load(_need(cfg, 1)[0], ser.correlation_from_json)
    ns = is_nonsignalling(c, cfg.tol)
    out = {"nonsignalling": ns.to_dict()}
    passed = ns.passed
    if cfg.game:
        g = _game(cfg.game)
        pf = is_perfect(c, g, cfg.tol)
        out["perfect"] = pf.to_dict()
        out["epsilon_violation"] = epsilon_violation(c, g)
        out["winning_probability"] = winning_probability(c, g)
        passed = passed and pf.passed
    return passed, out


def _corr_summary(c, g, tol):
    return {"correlation": ser.correlation_to_json(c),
            "epsilon_violation": epsilon_violation(c, g),
            "winning_probability": winning_probability(c, g),
            "nonsignalling": is_nonsignalling(c, tol).passed}


def corr_from_strategy(cfg):
    sp, gp = _need(cfg, 2)
    s, g = _strategy(sp, cfg, tensor_only=False), _game(gp)
    if isinstance(s, CommutingStrategy):
        c = correlation_from_commuting(s, g, cfg.tol)
    else:
        c = correlation_from_tensor(s, g, cfg.tol)
    return True, _corr_summary(c, g, cfg.tol)


def corr_from_det(cfg):
    dp, gp = _need(cfg, 2)
    d, g = ser.load(dp, ser.deterministic_from_json), _game(gp)
    c = correlation_from_deterministic(d, g)
    return True, _corr_summary(c, g, cfg.tol)


def witness_report_cmd(cfg):
    sp, gp = _need(cfg, 2)
    rep = witness_report(_strategy(sp, cfg), _game(gp), cfg.tol)
    return rep.exact_case_ok, rep.to_dict()


def witness_identities(cfg):
    sp, gp = _need(cfg, 2)
    rep = restricted_identities(_strategy(sp, cfg), _game(gp), cfg.tol)
    return rep.passed, rep.to_dict()


def witness_words(cfg):
    sp, gp = _need(cfg, 2)
    rep = word_reversal_check(_strategy(sp, cfg), _game(gp), tol=cfg.tol,
                              max_len=3 if cfg.max_len is None else cfg.max_len)
    return rep.passed, rep.to_dict()


def witness_trace(cfg):
    s = _strategy(*_need(cfg, 1), cfg)
    rep = trace_check(s, cfg.side, 3 if cfg.max_len is None else cfg.max_len, cfg.tol)
    return rep.passed, rep.to_dict()


def witness_scan(cfg):
    """Strategies are given in order of decreasing epsilon; the game comes from --game."""
    if not cfg.game:
        raise InputError("'witness scan' needs --game")
    if not cfg.inputs:
        raise InputError("'witness scan' needs at least one strategy file")
    g = _game(cfg.game)
    fam = [_strategy(p, cfg) for p in cfg.inputs]
    rep = state_convergence_scan(fam, g, 2 if cfg.max_len is None else cfg.max_len, cfg.tol)
    return True, rep.to_dict()


def construct_corr(cfg):
    tp, hp, gp = _need(cfg, 3)
    t, h, g = _trace(tp, cfg), _hom(hp, cfg), _game(gp)
    c = correlation_from_trace(t, h, g, cfg.tol)
    out = _corr_summary(c, g, cfg.tol)
    out["trace_property"] = trace_property_check(
        t, h, 2 if cfg.max_len is None else cfg.max_len, cfg.tol).to_dict()
    return out["nonsignalling"], out


def construct_gns(cfg):
    tp, hp = _need(cfg, 2)
    res = gns(_trace(tp, cfg), _hom(hp, cfg), cfg.tol,
              3 if cfg.max_len is None else cfg.max_len)
    return True, res.to_dict()


def construct_realize(cfg):
    tp, hp, gp = _need(cfg, 3)
    t, h, g = _trace(tp, cfg), _hom(hp, cfg), _game(gp)
    s = tensor_realization(t, h, g, cfg.tol)
    return True, {"strategy": ser.strategy_to_json(s)}


def construct_amenable(cfg):
    tp, hp = _need(cfg, 2)
    t, h = _trace(tp, cfg), _hom(hp, cfg)
    words = word_pairs(h, 2 if cfg.max_len is None else cfg.max_len)
    rep = amenability_functional(t, h, words, cfg.tol)
    return rep.passed, rep.to_dict()


def member_ns(cfg):
    res = ns_feasible(_game(*_need(cfg, 1)))
    return res.feasible, res.to_dict()


def member_classical(cfg):
    res = classical_search(_game(*_need(cfg, 1)), cfg.cap)
    return res.strategy is not None, res.to_dict()


def member_seesaw(cfg):
    seed = 0 if cfg.seed is None else cfg.seed
    res = seesaw(_game(*_need(cfg, 1)), cfg.dim, cfg.iters, seed)
    return True, {"value": res.value, "history": res.history, "dim": cfg.dim,
                  "iters": cfg.iters, "strategy": ser.strategy_to_json(res.strategy)}


COMMANDS = {
    "game": {"validate": game_validate, "classify": game_classify},
    "corr": {"check": corr_check, "from-strategy": corr_from_strategy, "from-det": corr_from_det},
    "witness": {"report": witness_report_cmd, "identities": witness_identities,
                "words": witness_words, "trace": witness_trace, "scan": witness_scan},
    "construct": {"corr": construct_corr, "gns": construct_gns, "realize": construct_realize,
                  "amenable": construct_amenable},
    "member": {"ns": member_ns, "classical": member_classical, "seesaw": member_seesaw},
}


def write_corpus(directory):
    """Canonical games plus the maximally entangled copy-game strategy."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, make in CANONICAL.items():
        ser.save(d / f"{name}.json", ser.game_to_json(make()))
        written.append(f"{name}.json")
    ser.save(d / "copy_strategy.json", ser.strategy_to_json(copy_me_strategy()))
    written.append("copy_strategy.json")
    return written


def run(cfg: RunConfig):
    """Execute one subcommand; returns (exit code, report dict)."""
    report = {"command": cfg.command, "tol": cfg.tol, "seed": cfg.seed}
    try:
        cfg.validate()
        group, _, sub = cfg.command.partition(" ")
        passed, body = COMMANDS[group][sub](cfg)
    except CHECKED_FAILURES as e:
        report.update({"passed": False, "error": type(e).__name__, "message": str(e)})
        return EXIT_FAIL, report
    except InputError as e:
        report.update({"passed": False, "error": "InputError", "message": str(e)})
        return EXIT_INPUT, report
    except NlgError as e:
        # invalid objects that got past the loaders (e.g. shape mismatch with the game)
        report.update({"passed": False, "error": type(e).__name__, "message": str(e)})
        return EXIT_INPUT, report
    report.update(body)
    report["passed"] = bool(passed)
    return (EXIT_OK if passed else EXIT_FAIL), report


def build_parser():
    p = argparse.ArgumentParser(prog="nlgames", description=__doc__.splitlines()[0])
    p.add_argument("--corpus", metavar="DIR", help="write the canonical corpus to DIR and exit")
    groups = p.add_subparsers(dest="group")
    for group, subs in COMMANDS.items():
        gp = groups.add_parser(group)
        sp = gp.add_subparsers(dest="sub", required=True)
        for name, fn in subs.items():
            c = sp.add_parser(name, help=(fn.__doc__ or "").strip().split("\n")[0] or None)
            c.add_argument("inputs", nargs="*", help="input JSON files")
            c.add_argument("--tol", type=float, default=DEFAULT_TOL)
            c.add_argument("--seed", type=int, default=None)
            c.add_argument("--L", dest="max_len", type=int, default=None, help="word length cap")
            c.add_argument("--out", default=None, help="write the report here instead of stdout")
            c.add_argument("--dim", type=int, default=2)
            c.add_argument("--iters", type=int, default=50)
            c.add_argument("--cap", type=int, default=DEFAULT_CAP)
            c.add_argument("--side", choices=("alice", "bob"), default="bob")
            c.add_argument("--game", default=None, help="game JSON for corr check / witness scan")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.corpus:
        files = write_corpus(args.corpus)
        sys.stdout.write(ser.dumps({"command": "corpus", "directory": args.corpus, "files": files}))
        return EXIT_OK
    if not args.group:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    cfg = RunConfig(command=f"{args.group} {args.sub}", inputs=args.inputs, tol=args.tol,
                    seed=args.seed, max_len=args.max_len, out=args.out, dim=args.dim,
                    iters=args.iters, cap=args.cap, side=args.side, game=args.game)
    code, report = run(cfg)
    text = ser.dumps(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_INPUT:
        sys.stderr.write(f"error: {report['message']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
