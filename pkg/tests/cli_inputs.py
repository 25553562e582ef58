"""Input files and one invocation per CLI subcommand, shared by the CLI and acceptance tests."""
import numpy as np

from nlgames import serialize as ser
from nlgames.cli import write_corpus
from nlgames.constructors import TraceSpec, random_commuting_homspec
from nlgames.correlations import pr_box
from nlgames.game_model import Game
from nlgames.instances import copy2_admixture_strategy
from nlgames.strategies import DeterministicStrategy


def build(d):
    write_corpus(d)
    ser.save(d / "pr.json", ser.correlation_to_json(pr_box()))
    ser.save(d / "det.json", ser.deterministic_to_json(DeterministicStrategy((0, 0), (0, 0))))
    h = random_commuting_homspec(2, 2, 2, 2, [(2, 1), (1, 2)], 0)
    ser.save(d / "hom.json", ser.homspec_to_json(h))
    ser.save(d / "trace.json", ser.tracespec_to_json(TraceSpec.normalized(h.dim)))
    ser.save(d / "ones.json", ser.game_to_json(Game(2, 2, 2, 2, np.ones((2, 2, 2, 2)))))
    for i, t in enumerate((0.2, 0.1, 0.05)):
        ser.save(d / f"adm{i}.json", ser.strategy_to_json(copy2_admixture_strategy(t)))
    return d


def invocations(d):
    return [
        ["game", "validate", d / "copy.json"],
        ["game", "classify", d / "chsh.json"],
        ["corr", "check", d / "pr.json", "--game", d / "chsh.json"],
        ["corr", "from-strategy", d / "copy_strategy.json", d / "copy.json"],
        ["corr", "from-det", d / "det.json", d / "chsh.json"],
        ["witness", "report", d / "adm1.json", d / "copy2.json"],
        ["witness", "identities", d / "copy_strategy.json", d / "copy.json"],
        ["witness", "words", d / "copy_strategy.json", d / "copy.json", "--L", "3"],
        ["witness", "trace", d / "adm1.json", "--side", "alice", "--L", "3"],
        ["witness", "scan", d / "adm0.json", d / "adm1.json", d / "adm2.json", "--game", d / "copy2.json"],
        ["construct", "corr", d / "trace.json", d / "hom.json", d / "ones.json"],
        ["construct", "gns", d / "trace.json", d / "hom.json"],
        ["construct", "realize", d / "trace.json", d / "hom.json", d / "ones.json"],
        ["construct", "amenable", d / "trace.json", d / "hom.json", "--L", "2"],
        ["member", "ns", d / "chsh.json"],
        ["member", "classical", d / "parity.json"],
        ["member", "seesaw", d / "chsh.json", "--dim", "2", "--iters", "10", "--seed", "3"],
    ]
