"""Rendering: CSV and JSON serialization of result types, optional figures.

CSV follows the printed table's conventions ('.' decimals, LF endings, fixed
fractional digits); JSON carries full-precision floats so parsing a rendered
object reproduces the original values exactly. Figures are an optional side
channel: a command that was asked for one writes a PNG next to (never
instead of) its delimited output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .measure import MeasureEstimate
from .product import ProductEnclosure
from .quadrature import ConvergenceRow, FitResult
from .special import ChainStep
from .usc import UscCheckReport, UscWitness

DEFAULT_SEED = 20260819


@dataclass(frozen=True)
class RunConfig:
    """The reproducibility-relevant plumbing of one CLI invocation.

    Identical configs must produce byte-identical output; seed and workers
    are therefore explicit state, never derived from time or machine."""

    command: str
    seed: int = DEFAULT_SEED
    workers: int = 0  # 0 = auto (env override, else cpu count capped at 8)
    fmt: str = "csv"
    output: Optional[str] = None


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _num(v: float):
    # JSON has no inf/-inf; the log of an exact zero must still round-trip
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    return v


def enclosure_dict(enc: ProductEnclosure) -> dict:
    return {
        "depth": enc.depth,
        "value": enc.value,
        "log_value": _num(enc.log_value),
        "lower": enc.lower,
        "exact_zero": enc.exact_zero,
    }


def render_enclosure_csv(enc: ProductEnclosure) -> str:
    return (
        "depth,value,log_value,lower,exact_zero\n"
        f"{enc.depth},{enc.value!r},{enc.log_value!r},{enc.lower!r},{str(enc.exact_zero).lower()}\n"
    )


def render_enclosure_json(enc: ProductEnclosure) -> str:
    return _json(enclosure_dict(enc))


def render_table_csv(rows: Sequence[ConvergenceRow], fit: Optional[FitResult] = None) -> str:
    lines = ["k,m_k,inv_sqrt_diff,extrapolated"]
    for r in rows:
        col3 = f"{r.inv_sqrt_diff:.6f}" if r.inv_sqrt_diff is not None else ""
        lines.append(f"{r.k},{r.m_k:.10f},{col3},{r.extrapolated:.7f}")
    if fit is not None:
        lines.append(f"fit_a,{fit.a!r}")
        lines.append(f"fit_b,{fit.b!r}")
        lines.append(f"fit_m_inf,{fit.m_inf!r}")
        lines.append(f"fit_window,{fit.window[0]}:{fit.window[1]}")
        lines.append(f"fit_rms_residual,{fit.rms_residual!r}")
    return "\n".join(lines) + "\n"


def render_table_json(rows: Sequence[ConvergenceRow], fit: Optional[FitResult] = None) -> str:
    out: list[dict] = [
        {
            "k": r.k,
            "m_k": r.m_k,
            "inv_sqrt_diff": r.inv_sqrt_diff,
            "extrapolated": r.extrapolated,
        }
        for r in rows
    ]
    if fit is not None:
        out.append(
            {
                "fit": {
                    "a": fit.a,
                    "b": fit.b,
                    "m_inf": fit.m_inf,
                    "window": list(fit.window),
                    "rms_residual": fit.rms_residual,
                }
            }
        )
    return _json(out)


def render_chain_csv(steps: Sequence[ChainStep], threshold: float, reached: Optional[int]) -> str:
    lines = ["j,depth,factor,bound,running,within_bound"]
    for s in steps:
        lines.append(
            f"{s.j},{s.depth},{s.factor!r},{s.bound!r},{s.running!r},{str(s.within_bound).lower()}"
        )
    lines.append(f"threshold,{threshold!r}")
    lines.append(f"reached_at,{reached if reached is not None else 'none'}")
    return "\n".join(lines) + "\n"


def render_chain_json(steps: Sequence[ChainStep], threshold: float, reached: Optional[int]) -> str:
    return _json(
        {
            "threshold": threshold,
            "reached_at": reached,
            "chain": [
                {
                    "j": s.j,
                    "depth": s.depth,
                    "factor": s.factor,
                    "bound": s.bound,
                    "running": s.running,
                    "within_bound": s.within_bound,
                }
                for s in steps
            ],
        }
    )


def measure_dict(est: MeasureEstimate) -> dict:
    return {
        "estimate": est.estimate,
        "samples": est.samples,
        "ci_halfwidth": est.ci_halfwidth,
        "theoretical_bound": est.theoretical_bound,
        "passes": est.passes,
    }


def render_measure_csv(est: MeasureEstimate) -> str:
    return (
        "estimate,samples,ci_halfwidth,theoretical_bound,passes\n"
        f"{est.estimate!r},{est.samples},{est.ci_halfwidth!r},"
        f"{est.theoretical_bound!r},{str(est.passes).lower()}\n"
    )


def render_measure_json(est: MeasureEstimate) -> str:
    return _json(measure_dict(est))


def witness_dict(w: UscWitness) -> dict:
    return {
        "x": repr(w.x),
        "epsilon": w.epsilon,
        "k": w.k,
        "lambda": w.lam,
        "delta": w.delta,
        "certified": w.certified,
        "lattice": w.lattice,
        "n_ref": w.n_ref,
    }


def render_usc_csv(rep: UscCheckReport) -> str:
    w = rep.witness
    lines = [
        "field,value",
        f"x,{w.x!r}",
        f"epsilon,{w.epsilon!r}",
        f"k,{w.k}",
        f"lambda,{w.lam!r}",
        f"delta,{w.delta!r}",
        f"certified,{str(w.certified).lower()}",
        f"lattice,{str(w.lattice).lower()}",
        f"n_ref,{w.n_ref}",
        f"trials,{rep.trials}",
        f"growth_checks,{rep.growth_checks}",
        f"growth_violations,{rep.growth_violations}",
        f"value_violations,{rep.value_violations}",
        f"min_growth_margin,{rep.min_growth_margin!r}",
        f"min_value_margin,{rep.min_value_margin!r}",
    ]
    return "\n".join(lines) + "\n"


def render_usc_json(rep: UscCheckReport) -> str:
    return _json(
        {
            "witness": witness_dict(rep.witness),
            "trials": rep.trials,
            "growth_checks": rep.growth_checks,
            "growth_violations": rep.growth_violations,
            "value_violations": rep.value_violations,
            "min_growth_margin": _num(rep.min_growth_margin),
            "min_value_margin": _num(rep.min_value_margin),
        }
    )


def render_layercake_csv(
    k: int, value: float, reference: Optional[float], abs_diff: Optional[float], passes: bool
) -> str:
    ref = repr(reference) if reference is not None else ""
    dif = repr(abs_diff) if abs_diff is not None else ""
    return (
        "k,layer_cake,midpoint_reference,abs_diff,passes\n"
        f"{k},{value!r},{ref},{dif},{str(passes).lower()}\n"
    )


def render_layercake_json(
    k: int, value: float, reference: Optional[float], abs_diff: Optional[float], passes: bool
) -> str:
    return _json(
        {
            "k": k,
            "layer_cake": value,
            "midpoint_reference": reference,
            "abs_diff": abs_diff,
            "passes": passes,
        }
    )


def render_pairs_csv(xs: Sequence[float], ys: Sequence[float]) -> str:
    lines = ["x,f"]
    lines.extend(f"{x!r},{y!r}" for x, y in zip(xs, ys))
    return "\n".join(lines) + "\n"


def render_pairs_json(xs: Sequence[float], ys: Sequence[float]) -> str:
    return _json([{"x": x, "f": y} for x, y in zip(xs, ys)])


def write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        print(text, end="")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def save_pairs_figure(path: str, xs: Sequence[float], ys: Sequence[float], depth: int) -> None:
    """Line plot of the sampled partial product over [0, pi]."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(xs, ys, linewidth=0.7)
    ax.set_xlabel("x")
    ax.set_ylabel(f"f_{depth}(x)")
    ax.set_xlim(0, math.pi)
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_table_figure(path: str, rows: Sequence[ConvergenceRow]) -> None:
    """Convergence of the midpoint estimates and their extrapolants."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks = [r.k for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ks, [r.m_k for r in rows], "o-", label="midpoint estimate")
    ax.plot(ks, [r.extrapolated for r in rows], "s--", label="extrapolated")
    ax.set_xlabel("k")
    ax.set_ylabel("value")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
