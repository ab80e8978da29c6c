"""Command-line front end.

Subcommands: build, encode, optimize, enumerate-trees, compare, verify.
Exit codes: 0 success, 2 configuration error, 3 run failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .fermions import (
    FermionicHamiltonian,
    QubitHamiltonian,
    build_exchange,
    build_hopping_1d,
    build_hopping_2d,
    build_hubbard_2d,
    build_single_ops,
    encode,
    load_fermionic_json,
    save_fermionic_json,
)
from .search import (
    GateSet,
    RunRecord,
    Schedule,
    compare_conventional,
    conventional_tree,
    replay_cost,
    sa_run,
    save_circuit,
    save_trace_csv,
    tree_brute_force,
)
from .trees import MajoranaMapping, TernaryTreeMapping

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUN = 3
EXIT_VERIFY = 4


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# model and mapping resolution
# ---------------------------------------------------------------------------


def build_model(model: dict) -> FermionicHamiltonian:
    kind = str(model.get("kind", "")).replace("-", "_")
    try:
        if kind == "hopping1d":
            return build_hopping_1d(model["sites"], model["range"])
        if kind == "hopping2d":
            return build_hopping_2d(model["side"])
        if kind == "hubbard2d":
            return build_hubbard_2d(
                model["side"], model.get("t", 1.0), model.get("u", 1.0)
            )
        if kind == "single_ops":
            return build_single_ops(model["modes"])
        if kind == "exchange":
            return build_exchange()
        if kind == "file":
            return load_fermionic_json(model["path"])
    except (KeyError, ValueError, OSError) as exc:
        raise ConfigError(f"bad model spec {model!r}: {exc}") from exc
    raise ConfigError(f"unknown model kind {kind!r}")


def resolve_mapping(spec, n_modes: int) -> MajoranaMapping:
    if isinstance(spec, dict):
        spec = spec.get("tree_file")
    if spec in ("jw", "bk", "balanced"):
        return conventional_tree(spec, n_modes).compile()
    path = Path(str(spec))
    if not path.exists():
        raise ConfigError(f"mapping {spec!r} is not jw/bk/balanced or a file")
    tree = TernaryTreeMapping.load_json(path)
    if tree.n != n_modes:
        raise ConfigError(
            f"tree file has {tree.n} qubits, model has {n_modes} modes"
        )
    return tree.compile()


# ---------------------------------------------------------------------------
# optimize campaign
# ---------------------------------------------------------------------------


@dataclass
class CampaignConfig:
    model: dict
    out_dir: str
    mapping: str = "jw"
    gate_set: str = "CH"
    schedule: dict = field(
        default_factory=lambda: {"c1": 1.0, "c2": 1.0, "c3": 1.0, "t_min": 0}
    )
    t_max: int = 100_000
    seeds: list[int] | None = None
    num_seeds: int = 10
    master_seed: int = 1
    cost: str = "avg"
    trace_every: int = 1000
    workers: int = 1

    def resolved_seeds(self) -> list[int]:
        if self.seeds:
            out: list[int] = []
            for s in self.seeds:
                if s not in out:
                    out.append(s)
            return out
        return list(
            range(self.master_seed, self.master_seed + self.num_seeds)
        )

    def validate(self) -> None:
        if self.gate_set not in ("C", "CH", "CHS"):
            raise ConfigError(f"unknown gate set {self.gate_set!r}")
        if self.cost not in ("avg", "total"):
            raise ConfigError(f"unknown cost function {self.cost!r}")
        if self.t_max < 1:
            raise ConfigError("t_max must be at least 1")
        if not self.resolved_seeds():
            raise ConfigError("no seeds to run")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        try:
            Schedule.from_json_obj(
                {"t_min": 0, "c1": 1, "c2": 1, "c3": 1, **self.schedule}
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad schedule {self.schedule!r}: {exc}")

    def to_json_obj(self) -> dict:
        return {
            "model": self.model,
            "out_dir": self.out_dir,
            "mapping": self.mapping,
            "gate_set": self.gate_set,
            "schedule": self.schedule,
            "t_max": self.t_max,
            "seeds": self.resolved_seeds(),
            "cost": self.cost,
            "trace_every": self.trace_every,
            "workers": self.workers,
        }


def _campaign_worker(args) -> dict:
    hq_obj, gate_set, schedule_obj, t_max, seed, cost, trace_every = args
    hq = QubitHamiltonian.from_json_obj(hq_obj)
    record = sa_run(
        hq,
        GateSet(gate_set),
        Schedule.from_json_obj(schedule_obj),
        t_max,
        seed,
        cost=cost,
        trace_every=trace_every,
    )
    return record.to_json_obj()


def run_campaign(cfg: CampaignConfig) -> dict:
    cfg.validate()
    hf = build_model(cfg.model)
    mapping = resolve_mapping(cfg.mapping, hf.n_modes)
    hq = encode(hf, mapping)
    if len(hq) == 0:
        raise ConfigError("the model encodes to an empty Hamiltonian")

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "config.json", "w") as fh:
        json.dump(cfg.to_json_obj(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    hq.save_json(out / "initial_qubit_hamiltonian.json")

    seeds = cfg.resolved_seeds()
    schedule_obj = {"c1": 1.0, "c2": 1.0, "c3": 1.0, "t_min": 0, **cfg.schedule}
    jobs = [
        (
            hq.to_json_obj(),
            cfg.gate_set,
            schedule_obj,
            cfg.t_max,
            seed,
            cfg.cost,
            cfg.trace_every,
        )
        for seed in seeds
    ]
    records: list[RunRecord] = []
    failure: Exception | None = None
    try:
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                raw = list(pool.map(_campaign_worker, jobs))
        else:
            raw = [_campaign_worker(job) for job in jobs]
        records = [RunRecord.from_json_obj(obj) for obj in raw]
    except Exception as exc:  # partial results are kept below
        failure = exc

    for record in records:
        record.save_json(out / f"run_{record.seed}.json")
        save_circuit(
            record.moves[: record.best_prefix_len],
            out / f"circuit_{record.seed}.txt",
        )
        save_trace_csv(record, out / f"trace_{record.seed}.csv")
        if replay_cost(hq, record) != record.best_cost:
            failure = failure or RuntimeError(
                f"seed {record.seed}: replay does not reproduce best cost"
            )
    if failure is not None:
        raise RuntimeError(f"campaign failed: {failure}") from failure

    comparison = compare_conventional(
        hf,
        cost=cfg.cost,
        optimized_cost=min(r.best_cost for r in records),
    )
    best = min(records, key=lambda r: (r.best_cost, r.seed))
    summary = {
        "config": cfg.to_json_obj(),
        "n_qubits": hq.n_qubits,
        "term_count": len(hq),
        "initial_cost": [
            best.initial_cost.numerator,
            best.initial_cost.denominator,
        ],
        "runs": [
            {
                "seed": r.seed,
                "best_cost": [
                    r.best_cost.numerator,
                    r.best_cost.denominator,
                ],
                "best_prefix_len": r.best_prefix_len,
                "accepted_moves": len(r.moves),
            }
            for r in records
        ],
        "best_seed": best.seed,
        "best_cost": [best.best_cost.numerator, best.best_cost.denominator],
        "conventional": comparison.to_json_obj(),
    }
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return summary


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_build(args) -> int:
    model: dict
    if args.model == "hopping1d":
        model = {"kind": "hopping1d", "sites": args.sites, "range": args.range}
    elif args.model == "hopping2d":
        model = {"kind": "hopping2d", "side": args.side}
    elif args.model == "hubbard2d":
        model = {
            "kind": "hubbard2d",
            "side": args.side,
            "t": args.hop_t,
            "u": args.interaction_u,
        }
    elif args.model == "single-ops":
        model = {"kind": "single_ops", "modes": args.modes}
    elif args.model == "exchange":
        model = {"kind": "exchange"}
    else:  # from-file
        model = {"kind": "file", "path": args.input}
    hf = build_model(model)
    save_fermionic_json(hf, args.output)
    print(
        f"wrote {args.output}: {hf.n_modes} modes, {len(hf.terms)} terms"
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    hf = load_fermionic_json(args.hamiltonian)
    mapping = resolve_mapping(args.mapping, hf.n_modes)
    hq = encode(hf, mapping)
    if args.drop_identity:
        hq = hq.drop_identity()
    if args.output:
        hq.save_json(args.output)
    total = hq.total_weight()
    print(
        f"{len(hq)} Pauli terms on {hq.n_qubits} qubits; "
        f"total weight {total}, average {Fraction(total, len(hq))}"
    )
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg_obj: dict = {}
    if args.config:
        with open(args.config) as fh:
            cfg_obj = json.load(fh)
    # flags override the config file
    overrides = {
        "mapping": args.mapping,
        "gate_set": args.gate_set,
        "t_max": args.t_max,
        "cost": args.cost,
        "trace_every": args.trace_every,
        "workers": args.workers,
        "num_seeds": args.num_seeds,
        "master_seed": args.master_seed,
        "out_dir": args.out,
    }
    for key, val in overrides.items():
        if val is not None:
            cfg_obj[key] = val
    if args.seeds is not None:
        cfg_obj["seeds"] = [int(s) for s in args.seeds.split(",") if s]
    sched = dict(cfg_obj.get("schedule", {}))
    for key, val in (
        ("c1", args.c1),
        ("c2", args.c2),
        ("c3", args.c3),
        ("t_min", args.t_min),
    ):
        if val is not None:
            sched[key] = val
    if sched:
        cfg_obj["schedule"] = sched
    if args.model is not None:
        cfg_obj["model"] = _model_from_flag(args.model)
    if "model" not in cfg_obj:
        raise ConfigError("no model given (flag --model or config file)")
    if "out_dir" not in cfg_obj or not cfg_obj["out_dir"]:
        raise ConfigError("no output directory given (--out)")
    known = set(CampaignConfig.__dataclass_fields__)
    unknown = set(cfg_obj) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = CampaignConfig(**cfg_obj)
    summary = run_campaign(cfg)
    best = Fraction(*summary["best_cost"])
    conv = summary["conventional"]
    print(
        f"best {cfg.cost} weight {best} (= {float(best):.6g}) over "
        f"{len(summary['runs'])} seeds"
    )
    print(
        "conventional best:",
        conv["best_conventional"],
        Fraction(*conv["best_conventional_cost"]),
        f"-> percent reduction {conv['percent_reduction']:.4f}",
    )
    print(f"outputs in {cfg.out_dir}")
    return EXIT_OK


def _model_from_flag(text: str) -> dict:
    """Parse shorthand like hopping1d:sites=8,range=1 or file:path=h.json."""
    kind, _, rest = text.partition(":")
    model: dict = {"kind": kind}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise ConfigError(f"bad model parameter {item!r}")
            model[key] = val if kind == "file" else int(val)
    return model


def cmd_enumerate_trees(args) -> int:
    hf = load_fermionic_json(args.hamiltonian)
    max_n = max(args.max_n, hf.n_modes) if args.force else args.max_n
    result = tree_brute_force(hf, max_n=max_n)
    print(
        f"processed {result.n_mappings} mappings "
        f"({hf.n_modes} modes, {result.term_count} encoded terms)"
    )
    print(
        f"minimum total weight {result.min_total}, "
        f"average {result.min_avg} (= {float(result.min_avg):.6g})"
    )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result.to_json_obj(), fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(f"report written to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    hf = load_fermionic_json(args.hamiltonian)
    optimized = None
    if args.record:
        optimized = RunRecord.load_json(args.record).best_cost
    elif args.optimized is not None:
        optimized = Fraction(args.optimized)
    comparison = compare_conventional(hf, cost=args.cost, optimized_cost=optimized)
    for name in sorted(comparison.costs):
        c = comparison.costs[name]
        print(f"{name:>9}: {c} (= {float(c):.6g})")
    print(f"best conventional: {comparison.best_name}")
    if comparison.reduction is not None:
        print(f"percent reduction: {float(comparison.reduction):.4f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all_suites

    results = run_all_suites(quick=args.quick)
    worst = EXIT_OK
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.checked} checks, {r.failed} failed")
        for note in r.notes:
            print(f"       - {note}")
        if not r.passed:
            worst = EXIT_VERIFY
    return worst


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqmap",
        description=(
            "Optimize fermion-to-qubit mappings by Clifford-circuit search "
            "over the average Pauli weight."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a fermionic model file")
    pb = p.add_subparsers(dest="model", required=True)
    b = pb.add_parser("hopping1d")
    b.add_argument("--sites", type=int, required=True)
    b.add_argument("--range", type=int, required=True)
    b = pb.add_parser("hopping2d")
    b.add_argument("--side", type=int, required=True)
    b = pb.add_parser("hubbard2d")
    b.add_argument("--side", type=int, required=True)
    b.add_argument("--hop-t", type=float, default=1.0)
    b.add_argument("--interaction-u", type=float, default=1.0)
    b = pb.add_parser("single-ops")
    b.add_argument("--modes", type=int, required=True)
    pb.add_parser("exchange")
    b = pb.add_parser("from-file")
    b.add_argument("--input", required=True)
    for choice in pb.choices.values():
        choice.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("encode", help="encode a model under a mapping")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument(
        "--mapping",
        default="jw",
        help="jw, bk, balanced, or a tree JSON file",
    )
    p.add_argument("-o", "--output")
    p.add_argument("--drop-identity", action="store_true")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("optimize", help="run an annealing campaign")
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument(
        "--model",
        help="model shorthand, e.g. hopping1d:sites=8,range=1 or "
        "file:path=h.json",
    )
    p.add_argument("--mapping")
    p.add_argument("--gate-set", dest="gate_set", choices=["C", "CH", "CHS"])
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--cost", choices=["avg", "total"])
    p.add_argument("--seeds", help="comma-separated explicit seed list")
    p.add_argument("--num-seeds", dest="num_seeds", type=int)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--c3", type=float)
    p.add_argument("--t-min", dest="t_min", type=int)
    p.add_argument("--trace-every", dest="trace_every", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser(
        "enumerate-trees",
        help="brute-force every ternary-tree mapping for a small model",
    )
    p.add_argument("--hamiltonian", required=True)
    p.add_argument(
        "--max-n",
        dest="max_n",
        type=int,
        default=4,
        help="enumeration bound on the mode count",
    )
    p.add_argument(
        "--force",
        action="store_true",
        help="enumerate past the bound regardless of cost",
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate_trees)

    p = sub.add_parser("compare", help="conventional-mapping cost table")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--cost", choices=["avg", "total"], default="avg")
    p.add_argument("--optimized", help="optimized cost as a fraction or int")
    p.add_argument("--record", help="pull the optimized cost from a run file")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the built-in property suites")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
