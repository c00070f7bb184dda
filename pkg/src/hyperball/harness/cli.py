"""Command-line entry point: ``hyperball <task> [--config cfg.json] [--seed N] [--out path]``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from ..errors import ContractViolation, DomainError
from ..layers.checkpoint import to_checkpoint
from .attention_demo import AttentionDemoConfig, attention_demo, optimizer_state, trained_layer
from .common import config_hash, from_dict, load_config, write_csv, write_json
from .contours import ContourConfig, emit_fc_contours
from .fuzz import FuzzConfig, fuzz_midpoints
from .subtree import SubtreeConfig, run_subtree_mlr
from .trees import TreeSpec, embed_tree


@dataclasses.dataclass(frozen=True)
class TreeConfig:
    depth: int = 5
    branching: int = 3
    seed: int = 0
    edge_length: float = 1.0
    c: float = 1.0


def _with_seed(cfg, seed, field="seeds"):
    if seed is None:
        return cfg
    return dataclasses.replace(cfg, **{field: (seed,) if field == "seeds" else seed})


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def cmd_embed_tree(args) -> int:
    cfg = _with_seed(from_dict(TreeConfig, load_config(args.config)), args.seed, "seed")
    tree = embed_tree(TreeSpec(cfg.depth, cfg.branching, cfg.seed, cfg.edge_length), cfg.c)
    h = config_hash(cfg)
    rows = (
        (i, int(tree.parent[i]), int(tree.depth[i]), float(x[0]), float(x[1]), h)
        for i, x in enumerate(tree.points)
    )
    write_csv(args.out, ("node", "parent", "depth", "x1", "x2", "config_hash"), rows)
    print(f"wrote {len(tree)} nodes to {args.out}")
    return 0


def cmd_subtree_mlr(args) -> int:
    cfg = _with_seed(from_dict(SubtreeConfig, load_config(args.config)), args.seed)
    result = run_subtree_mlr(cfg)
    header = ("seed", "subtree", "model", "f1", "config_hash")
    write_csv(args.out, header, ([r[k] for k in header] for r in result["rows"]))
    write_json(_sibling(Path(args.out), ".summary.json"), result["summary"])
    print(json.dumps(result["summary"], indent=2))
    return 0


def cmd_contours(args) -> int:
    cfg = _with_seed(from_dict(ContourConfig, load_config(args.config)), args.seed, "seed")
    report = emit_fc_contours(cfg, args.out)
    write_json(_sibling(Path(args.out), ".check.json"), report)
    print(json.dumps(report, indent=2))
    return 0


def cmd_fuzz(args) -> int:
    cfg = _with_seed(from_dict(FuzzConfig, load_config(args.config)), args.seed, "seed")
    if args.inject_fault:
        cfg = dataclasses.replace(cfg, inject_fault=True)
    report = fuzz_midpoints(cfg)
    report["config_hash"] = config_hash(cfg)
    if args.out:
        write_json(args.out, report)
    print(json.dumps(report, indent=2))
    return 0 if report["passed"] else 1


def cmd_attention_demo(args) -> int:
    cfg = _with_seed(from_dict(AttentionDemoConfig, load_config(args.config)), args.seed)
    result = attention_demo(cfg)
    header = ("seed", "epoch", "loss", "config_hash")
    write_csv(args.out, header, ([r[k] for k in header] for r in result["rows"]))
    out = Path(args.out)
    for seed, groups in result["groups"].items():
        attn, readout = trained_layer(groups, cfg)
        write_json(
            _sibling(out, f".seed{seed}.json"),
            {
                "attention": to_checkpoint("attention", attn),
                "readout": to_checkpoint("fc", readout),
                "optimizer": optimizer_state(groups),
                "config_hash": result["config_hash"],
            },
        )
    for seed in cfg.seeds:
        losses = [r["loss"] for r in result["rows"] if r["seed"] == seed]
        print(f"seed {seed}: initial loss {losses[0]:.6g}, final loss {losses[-1]:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperball", description="Hyperbolic layer experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    tasks = [
        ("embed-tree", cmd_embed_tree, "tree.csv", "embed a complete tree in the 2-D ball"),
        ("subtree-mlr", cmd_subtree_mlr, "subtree_f1.csv", "Poincaré vs Euclidean MLR on subtree membership"),
        ("contours", cmd_contours, "contours.csv", "FC-layer contour grid and zero-set check"),
        ("fuzz-midpoints", cmd_fuzz, None, "differential fuzzing of the three midpoints"),
        ("attention-demo", cmd_attention_demo, "attention_loss.csv", "train attention on the marked-midpoint task"),
    ]
    for name, fn, default_out, help_text in tasks:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file overriding the task's defaults")
        p.add_argument("--seed", type=int, help="run a single seed instead of the configured ones")
        p.add_argument("--out", default=default_out, help="output path")
        if name == "fuzz-midpoints":
            p.add_argument("--inject-fault", action="store_true", help="perturb one midpoint by 1e-6 (self-test)")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContractViolation, DomainError, json.JSONDecodeError) as err:
        print(f"hyperball {args.command}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
