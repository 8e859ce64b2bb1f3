"""Batch command line: ``sb-meme detect|fit|simulate|stats|eval|synth|run``.

Stages exchange JSON files inside ``--out-dir``:

    detect   -> profiles.json   {source, params, profiles, rejections}
    fit      -> models.json     {source, p_mode, corpus_p, models, unfittable}
    simulate -> simulated.csv   (corpus schema, ticks re-based at ta1)
    stats    -> stats.json      {source, stats} + fig3..fig7.csv
    eval     -> eval.json       {source, p_mode, eval, mode_comparison} + fig8..fig10.csv
    synth    -> corpus.csv + truth.json
    run      -> all of the above plus report.json

Exit codes: 0 success, 1 I/O or schema error, 2 empty or insufficient data.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bass import FitResult, PMode, simulate
from .core import ALPHA, Corpus, Granularity, TimeSeries, TwoStageBassModel
from .errors import CorpusFormatError, InsufficientSample, InvalidValue, SBMemeError
from .evaluate import aligned_curves, averaged_curve, pearson, summarize
from .ingest import (load_corpus, load_profiles, load_report, write_report, write_table)
from .peaks import PeakParams
from .pipeline import detect_corpus, evaluate_corpus, fit_corpus
from .stats import build_report, gap_histogram, value_histogram, wake_gap
from .synth import SynthConfig, generate

log = logging.getLogger("sbmeme")

EXIT_OK, EXIT_IO, EXIT_EMPTY = 0, 1, 2


class StageError(Exception):
    def __init__(self, message, code=EXIT_IO):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    input: Optional[Path]
    out_dir: Path
    granularity: Granularity = Granularity.day
    k: int = 5
    h: float = 0.5
    alpha: float = ALPHA
    p_mode: PMode = PMode.corpus_mean
    seed: int = 0
    per_cell: int = 4
    noise: str = "none"

    @property
    def peak_params(self) -> PeakParams:
        return PeakParams(self.k, self.h)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            input=Path(args.input) if getattr(args, "input", None) else None,
            out_dir=Path(args.out_dir),
            granularity=Granularity(args.granularity),
            k=args.k, h=args.h, alpha=args.alpha, p_mode=PMode(args.p_mode),
            seed=args.seed, per_cell=args.per_cell, noise=args.noise,
        )


def _corpus(cfg: RunConfig) -> Corpus:
    if cfg.input is None:
        raise StageError("--input is required")
    try:
        return load_corpus(cfg.input, cfg.granularity)
    except FileNotFoundError:
        raise StageError(f"input file not found: {cfg.input}") from None
    except (OSError, CorpusFormatError, InvalidValue) as exc:
        raise StageError(f"cannot read {cfg.input}: {exc}") from None


def _read_json(path: Path, section: str) -> dict:
    try:
        data = load_report(path)
    except FileNotFoundError:
        raise StageError(f"missing upstream artifact {path}") from None
    except (OSError, CorpusFormatError) as exc:
        raise StageError(str(exc)) from None
    if not isinstance(data, dict) or section not in data:
        raise StageError(f"{path}: missing field {section!r}")
    return data


def _profiles(cfg: RunConfig, corpus: Corpus):
    path = cfg.out_dir / "profiles.json"
    if not path.exists():
        raise StageError(f"missing upstream artifact {path}")
    try:
        profiles = load_profiles(path)
    except CorpusFormatError as exc:
        raise StageError(str(exc)) from None
    for pr in profiles:
        if corpus.get(pr.meme_id) is None:
            raise StageError(f"{path}: meme_id {pr.meme_id!r} is not in the input corpus")
    return profiles


def _models(cfg: RunConfig) -> tuple:
    path = cfg.out_dir / "models.json"
    data = _read_json(path, "models")
    fits = []
    for rec in data["models"]:
        try:
            model = TwoStageBassModel.from_dict(rec)
            fits.append(FitResult(rec["meme_id"], model, tuple(rec.get("root_choice", ()))))
        except (InvalidValue, KeyError) as exc:
            raise StageError(f"{path}: bad model record: {exc}") from None
    return data, fits


def cmd_detect(cfg: RunConfig) -> dict:
    corpus = _corpus(cfg)
    if len(corpus) == 0:
        raise StageError(f"{cfg.input}: no usable series", EXIT_EMPTY)
    detections = detect_corpus(corpus, cfg.peak_params, cfg.alpha)
    report = {
        "source": corpus.source_label,
        "params": {"k": cfg.k, "h": cfg.h, "alpha": cfg.alpha},
        "profiles": [d.profile for d in detections if d.accepted],
        "rejections": [{"meme_id": d.meme_id, "reason": d.reason}
                       for d in detections if not d.accepted],
    }
    write_report(report, cfg.out_dir / "profiles.json")
    log.info("detect: %d accepted, %d rejected", len(report["profiles"]), len(report["rejections"]))
    return report


def _fit_report(corpus, profiles, p_mode, corpus_p=None) -> dict:
    fits, failed, corpus_p = fit_corpus(corpus, profiles, p_mode, corpus_p)
    return {
        "source": corpus.source_label,
        "p_mode": PMode(p_mode).value,
        "corpus_p": None if corpus_p is None else list(corpus_p),
        "models": [f.to_dict() for f in fits],
        "unfittable": failed,
    }, fits


def cmd_fit(cfg: RunConfig) -> dict:
    corpus = _corpus(cfg)
    profiles = _profiles(cfg, corpus)
    report, _ = _fit_report(corpus, profiles, cfg.p_mode)
    write_report(report, cfg.out_dir / "models.json")
    return report


def cmd_simulate(cfg: RunConfig) -> Corpus:
    _, fits = _models(cfg)
    sims = Corpus(tuple(TimeSeries(f.meme_id, simulate(f.model).values, cfg.granularity)
                        for f in fits), "simulated")
    write_report(sims, cfg.out_dir / "simulated.csv", "csv")
    return sims


def cmd_stats(cfg: RunConfig) -> dict:
    corpus = _corpus(cfg)
    profiles = sorted(_profiles(cfg, corpus), key=lambda pr: pr.meme_id)
    _, obs_fits = _fit_report(corpus, profiles, PMode.observed)
    p_values = ([f.model.g1.p for f in obs_fits], [f.model.g2.p for f in obs_fits])
    q_values = ([f.model.g1.q for f in obs_fits], [f.model.g2.q for f in obs_fits])
    try:
        stats = build_report(profiles, p_values, q_values)
    except InsufficientSample as exc:
        raise StageError(f"stats: {exc}", EXIT_EMPTY) from None
    report = {"source": corpus.source_label, "stats": stats}
    write_report(report, cfg.out_dir / "stats.json")
    _write_stat_figures(cfg.out_dir, profiles, stats, p_values, q_values)
    return report


def _write_stat_figures(out: Path, profiles, stats, p_values, q_values):
    centers, dens = gap_histogram([wake_gap(pr) for pr in profiles])
    lam = stats.lambda_
    write_table(out / "fig3.csv", ("gap", "density", "fit"),
                zip(centers, dens, lam * np.exp(-lam * centers)))
    x = np.log([pr.m1 for pr in profiles])
    y = np.log([pr.m2 for pr in profiles])
    slope = stats.alpha_m if stats.alpha_m is not None else float("nan")
    intercept = float(y.mean() - slope * x.mean())
    write_table(out / "fig4.csv", ("meme_id", "ln_m1", "ln_m2", "fit"),
                ([pr.meme_id, a, b, intercept + slope * a] for pr, a, b in zip(profiles, x, y)))
    write_table(out / "fig5.csv", ("meme_id", "v1", "v2", "ratio"),
                ([pr.meme_id, pr.v1, pr.v2, pr.v2 / pr.v1] for pr in profiles))
    rows = []
    for gen, (sample, g) in enumerate(zip(p_values, stats.p_gauss), start=1):
        if len(sample) < 2 or np.ptp(sample) == 0:
            continue
        c, d = value_histogram(sorted(sample))
        fitted = g.a * np.exp(-(c - g.mu) ** 2 / (2 * g.sigma ** 2)) if g else np.full(c.size, np.nan)
        rows.extend([gen, a, b, f] for a, b, f in zip(c, d, fitted))
    write_table(out / "fig6.csv", ("generation", "p", "density", "fit"), rows)
    rows = []
    for gen, sample in enumerate(q_values, start=1):
        if len(sample) < 2 or np.ptp(sample) == 0:
            continue
        c, d = value_histogram(sorted(sample))
        rows.extend([gen, a, b] for a, b in zip(c, d))
    write_table(out / "fig7.csv", ("generation", "q", "density"), rows)


def _averaged(corpus, profiles, fits):
    by_id = {pr.meme_id: pr for pr in profiles}
    obs, sim = [], []
    for f in fits:
        o, s = aligned_curves(corpus[f.meme_id], by_id[f.meme_id], f.model)
        obs.append(o)
        sim.append(s)
    if not obs:
        return np.zeros(0), np.zeros(0)
    return averaged_curve(obs), averaged_curve(sim)


def _curve_r(a, b):
    try:
        return pearson(a, b)
    except (SBMemeError, ValueError):
        return None


def cmd_eval(cfg: RunConfig) -> dict:
    corpus = _corpus(cfg)
    profiles = _profiles(cfg, corpus)
    models, fits = _models(cfg)
    p_mode = PMode(models.get("p_mode", cfg.p_mode))
    if not fits:
        raise StageError("eval: no fitted models", EXIT_EMPTY)
    table = summarize(evaluate_corpus(corpus, profiles, fits))
    obs_avg, sim_avg = _averaged(corpus, profiles, fits)
    table["averaged_r"] = _curve_r(obs_avg, sim_avg)

    other = PMode.observed if p_mode is PMode.corpus_mean else PMode.corpus_mean
    _, other_fits = _fit_report(corpus, profiles, other)
    other_table = summarize(evaluate_corpus(corpus, profiles, other_fits)) if other_fits else {}
    mean_r = {p_mode.value: table["mean_r"], other.value: other_table.get("mean_r")}
    diff = None
    if None not in mean_r.values():
        diff = mean_r["observed"] - mean_r["corpus_mean"]
    report = {
        "source": corpus.source_label,
        "p_mode": p_mode.value,
        "eval": table,
        "mode_comparison": {"mean_r": mean_r, "observed_minus_corpus_mean": diff},
    }
    write_report(report, cfg.out_dir / "eval.json")

    fig = {p_mode: (obs_avg, sim_avg)}
    fig[other] = _averaged(corpus, profiles, other_fits)
    for name, mode in (("fig8.csv", PMode.corpus_mean), ("fig9.csv", PMode.observed)):
        o, s = fig[mode]
        n = min(o.size, s.size)
        write_table(cfg.out_dir / name, ("t", "observed", "simulated"),
                    zip(range(n), o[:n], s[:n]))
    write_table(cfg.out_dir / "fig10.csv", ("meme_id", "pearson_r"),
                ([r["meme_id"], r["pearson_r"]] for r in table["per_meme"]))
    return report


def cmd_synth(cfg: RunConfig) -> Corpus:
    try:
        config = SynthConfig(per_cell=cfg.per_cell, noise=cfg.noise, seed=cfg.seed,
                             granularity=cfg.granularity)
        corpus, truths = generate(config)
    except (InvalidValue, ValueError) as exc:
        raise StageError(f"synth: {exc}") from None
    write_report(corpus, cfg.out_dir / "corpus.csv", "csv")
    write_report({"source": corpus.source_label, "seed": cfg.seed, "noise": cfg.noise,
                  "truth": [t.to_dict() for t in truths]}, cfg.out_dir / "truth.json")
    return corpus


def cmd_run(cfg: RunConfig) -> dict:
    detect = cmd_detect(cfg)
    fitted = cmd_fit(cfg)
    cmd_simulate(cfg)
    report = {
        "source": detect["source"],
        "profiles": detect["profiles"],
        "rejections": detect["rejections"],
        "models": fitted["models"],
    }
    code = EXIT_OK
    try:
        report["stats"] = cmd_stats(cfg)["stats"]
    except StageError as exc:
        if exc.code != EXIT_EMPTY:
            raise
        log.warning("%s", exc)
        report["stats"] = None
        code = EXIT_EMPTY
    try:
        ev = cmd_eval(cfg)
        report["eval"] = ev["eval"]
        report["mode_comparison"] = ev["mode_comparison"]
    except StageError as exc:
        if exc.code != EXIT_EMPTY:
            raise
        log.warning("%s", exc)
        report["eval"] = None
        code = EXIT_EMPTY
    write_report(report, cfg.out_dir / "report.json")
    report["_exit"] = code
    return report


COMMANDS = {
    "detect": cmd_detect, "fit": cmd_fit, "simulate": cmd_simulate, "stats": cmd_stats,
    "eval": cmd_eval, "synth": cmd_synth, "run": cmd_run,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sb-meme", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="corpus file (CSV meme_id,t,value or JSON)")
    common.add_argument("--out-dir", default=".", help="directory for stage artifacts")
    common.add_argument("--granularity", default="day", choices=[g.value for g in Granularity])
    common.add_argument("--k", type=int, default=5, help="peak neighbourhood half-width")
    common.add_argument("--h", type=float, default=0.5, help="peak significance multiplier")
    common.add_argument("--alpha", type=float, default=ALPHA, help="beauty threshold factor")
    common.add_argument("--p-mode", default="corpus_mean", choices=[m.value for m in PMode])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--per-cell", type=int, default=4, help="synth: memes per grid cell")
    common.add_argument("--noise", default="none", choices=["none", "poisson"], help="synth noise model")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        result = COMMANDS[args.command](cfg)
    except StageError as exc:
        print(f"sb-meme {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except InvalidValue as exc:
        print(f"sb-meme {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"sb-meme {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    if isinstance(result, dict) and "_exit" in result:
        return result["_exit"]
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
