"""Command-line entry point emitting machine-readable result documents.

Every subcommand writes a single document with `params`, `result` and
`checks` sections, either as JSON (floats rendered with 17 significant
digits so identical configs give byte-identical output) or as CSV
(flattening the `result` section only).  Domain errors exit with status
2, capacity errors with status 3.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import analytic as an
from . import circuit as ci
from . import complexity as cx
from . import statevector as sv
from .errors import CapacityError, DomainError
from .oracle import BooleanPredicate, SearchParameters

_TIE_BREAKS = {"lowest": "lowest_index", "random": "random"}


def _format_float(x: float) -> str:
    text = format(float(x), ".17g")
    if "." not in text and "e" not in text and "n" not in text:
        text += ".0"
    return text


def _json_text(value, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ",\n".join(inner + _json_text(v, indent + 1) for v in value)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {_json_text(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    raise DomainError(f"cannot serialize value of type {type(value).__name__}")


def _scalar_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return _format_float(value)
    if value is None:
        return ""
    return str(value)


def _flatten(prefix: str, value, out: dict[str, str]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, (list, tuple)):
        out[prefix] = ";".join(_scalar_text(v) for v in value)
    else:
        out[prefix] = _scalar_text(value)


def _document_text(doc: dict, output_format: str) -> str:
    if output_format == "json":
        return _json_text(doc) + "\n"
    if output_format == "csv":
        flat: dict[str, str] = {}
        _flatten("", doc["result"], flat)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(flat.keys())
        writer.writerow(flat.values())
        return buf.getvalue()
    raise DomainError(f"unknown output format {output_format!r}")


def _emit(doc: dict, output_format: str, out_path: str | None) -> None:
    text = _document_text(doc, output_format)
    if out_path:
        Path(out_path).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        config = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise DomainError(f"config file {path} must hold a JSON object")
    return config


def _merge_config(ctx: click.Context, values: dict) -> dict:
    """Fill parameters from the config file; explicit flags win."""
    raw = _load_config(values.get("config"))
    # Accept flag spellings: "schedule-c" and "schedule_c", "format" for
    # the output format, and so on.
    config = {}
    for key, value in raw.items():
        name = str(key).replace("-", "_")
        config["output_format" if name == "format" else name] = value
    merged = dict(values)
    for name in values:
        if name == "config" or name not in config:
            continue
        if ctx.get_parameter_source(name) != click.core.ParameterSource.COMMANDLINE:
            merged[name] = config[name]
    return merged


def _require_n(values: dict) -> int:
    if values.get("n") is None:
        raise DomainError("--n is required (on the command line or in the config file)")
    return int(values["n"])


def _resolve_sample_count(n: int, eta: int | None, schedule_c: float | None) -> tuple[int, float | None]:
    if eta is not None and schedule_c is not None:
        raise DomainError("give either --eta or --schedule-c, not both")
    if eta is not None:
        return int(eta), None
    constant = 1.0 if schedule_c is None else float(schedule_c)
    return an.scheduled_sample_count(n, constant), constant


def _resolve_predicate(
    n: int, marks: str | None, mask: str | None, t: int | None = None
) -> BooleanPredicate:
    given = sum(x is not None for x in (marks, mask, t))
    if given > 1:
        raise DomainError("give at most one of --marks, --mask, --t")
    if t is not None:
        if t < 0 or t > n:
            raise DomainError(f"marked count {t} outside 0..{n}")
        return BooleanPredicate.from_marks(n, range(1, t + 1))
    return BooleanPredicate.from_text(n, marks, mask)


def _tie_break_policy(name: str) -> str:
    if name not in _TIE_BREAKS:
        raise DomainError(f"tie-break must be one of {sorted(_TIE_BREAKS)}, got {name!r}")
    return _TIE_BREAKS[name]


def _resolve_seed(values: dict) -> int | None:
    seed = values.get("seed")
    if seed is None:
        return None
    seed = int(seed)
    if seed < 0:
        raise DomainError(f"seed must be >= 0, got {seed}")
    return seed


def _guarded(fn):
    try:
        fn()
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except CapacityError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)


@click.group()
def main():
    """Search a marked item with a single subset-parity query.

    Simulate the circuit, evaluate the closed-form success model, or
    tally gate costs.  The statevector qubit cap (default 24) can be
    overridden through the PARITYSEARCH_QUBIT_CAP environment variable.
    """


def _simulate_document(values: dict) -> dict:
    n = _require_n(values)
    eta, constant = _resolve_sample_count(n, values["eta"], values["schedule_c"])
    pred = _resolve_predicate(n, values["marks"], values["mask"])
    tie_break = _tie_break_policy(values["tie_break"])
    seed = _resolve_seed(values)
    params = SearchParameters(n, eta)
    layout = ci.layout_for(params)

    run = ci.run_circuit(params, pred, capture=values["capture"])
    rng = np.random.default_rng(seed)
    samples = ci.measure_samples(run.final_state, layout, rng)
    outcome = ci.majority_postprocess(samples, pred, tie_break=tie_break, rng=rng)

    checks: dict = {}
    if values["capture"]:
        after5 = run.intermediates["step5"]
        incidence = sv.marginal_distribution(after5, layout.incidence_qubits())
        model = an.amplitudes(n, pred.marked_count)
        product = an.analytic_product_state(model, pred, eta)
        minus = np.array([1.0, -1.0], dtype=np.complex128) / math.sqrt(2.0)
        zeros = np.zeros(1 << n, dtype=np.complex128)
        zeros[0] = 1.0
        expected = sv.StateVector(
            layout.total_qubits, np.kron(minus, np.kron(zeros, product.amplitudes))
        )
        checks = {
            "incidence_all_zero_probability": float(incidence[0]),
            "sample_state_fidelity": sv.fidelity_mod_phase(run.intermediates["step6"], expected),
        }

    doc_params = {
        "n_items": n,
        "item_bits": params.item_bits,
        "n_samples": eta,
        "marks": sorted(pred.marks),
        "marked_count": pred.marked_count,
        "seed": seed,
        "tie_break": tie_break,
        "total_qubits": layout.total_qubits,
    }
    if constant is not None:
        doc_params["schedule_constant"] = constant
    return {
        "params": doc_params,
        "result": {
            "samples": list(outcome.samples.values),
            "frequencies": {str(k): v for k, v in sorted(outcome.frequencies.items())},
            "winner": outcome.winner,
            "winner_satisfies": outcome.winner_satisfies,
            "tie_detected": outcome.tie_detected,
        },
        "checks": checks,
    }


@main.command()
@click.option("--n", type=int, default=None, help="Item count N (a power of two).")
@click.option("--eta", type=int, default=None, help="Sample register count.")
@click.option("--schedule-c", type=float, default=None,
              help="Derive the sample count as ceil(c * N * log2(N)^2).")
@click.option("--marks", type=str, default=None, help="Comma-separated marked items.")
@click.option("--mask", type=str, default=None, help="Hex bitmask, bit j-1 marks item j.")
@click.option("--seed", type=int, default=None, help="Measurement RNG seed.")
@click.option("--tie-break", type=click.Choice(["lowest", "random"]), default="lowest",
              show_default=True)
@click.option("--capture", is_flag=True, default=False,
              help="Snapshot intermediate states and emit consistency checks.")
@click.option("--format", "output_format", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.option("--config", type=str, default=None, help="JSON file mirroring the flags.")
@click.option("--out", type=str, default=None, help="Write the document here instead of stdout.")
@click.pass_context
def simulate(ctx, **values):
    """Run the full circuit, measure, and majority-vote."""

    def run():
        merged = _merge_config(ctx, values)
        _emit(_simulate_document(merged), merged["output_format"], merged["out"])

    _guarded(run)


def _analytic_document(values: dict) -> dict:
    n = _require_n(values)
    eta, constant = _resolve_sample_count(n, values["eta"], values["schedule_c"])
    pred = _resolve_predicate(n, values["marks"], values["mask"], values["t"])
    tie_break = _tie_break_policy(values["tie_break"])
    trials = values["trials"]
    seed = _resolve_seed(values)
    model = an.amplitudes(n, pred.marked_count)

    result: dict = {
        "marked_amplitude": model.marked_amp,
        "unmarked_amplitude": model.unmarked_amp,
        "marked_probability": model.p_marked,
        "unmarked_probability": model.p_unmarked,
        "n_samples": eta,
    }
    try:
        result["success_probability_exact"] = an.exact_success_probability(
            model, pred, eta, tie_break=tie_break
        )
    except CapacityError as exc:
        if trials is None:
            raise CapacityError(f"{exc} (pass --trials to estimate instead)") from exc
    if trials is not None:
        estimate = an.monte_carlo_success_probability(
            model, pred, eta, trials=int(trials), seed=seed, tie_break=tie_break
        )
        result["success_probability_estimate"] = estimate.estimate
        result["success_probability_std_error"] = estimate.std_error

    t = pred.marked_count
    residual = abs(t * model.p_marked + (n - t) * model.p_unmarked - 1.0)
    doc_params = {
        "n_items": n,
        "marked_count": t,
        "marks": sorted(pred.marks),
        "n_samples": eta,
        "tie_break": tie_break,
        "seed": seed,
        "trials": trials,
    }
    if constant is not None:
        doc_params["schedule_constant"] = constant
    return {
        "params": doc_params,
        "result": result,
        "checks": {"normalization_residual": residual},
    }


@main.command("analytic")
@click.option("--n", type=int, default=None, help="Item count N (a power of two).")
@click.option("--eta", type=int, default=None, help="Sample count.")
@click.option("--schedule-c", type=float, default=None,
              help="Derive the sample count as ceil(c * N * log2(N)^2).")
@click.option("--marks", type=str, default=None, help="Comma-separated marked items.")
@click.option("--mask", type=str, default=None, help="Hex bitmask, bit j-1 marks item j.")
@click.option("--t", type=int, default=None, help="Shorthand: mark the first t items.")
@click.option("--seed", type=int, default=None, help="Monte Carlo RNG seed.")
@click.option("--trials", type=int, default=None, help="Monte Carlo trial count.")
@click.option("--tie-break", type=click.Choice(["lowest", "random"]), default="lowest",
              show_default=True)
@click.option("--format", "output_format", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.option("--config", type=str, default=None, help="JSON file mirroring the flags.")
@click.option("--out", type=str, default=None, help="Write the document here instead of stdout.")
@click.pass_context
def analytic_cmd(ctx, **values):
    """Evaluate the closed-form amplitudes and success probability."""

    def run():
        merged = _merge_config(ctx, values)
        _emit(_analytic_document(merged), merged["output_format"], merged["out"])

    _guarded(run)


def _gates_document(values: dict) -> dict:
    n = _require_n(values)
    eta, constant = _resolve_sample_count(n, values["eta"], values["schedule_c"])
    pred = _resolve_predicate(n, values["marks"], values["mask"], values["t"])
    model = cx.cost_model_by_name(values["cost_model"])
    params = SearchParameters(n, eta)

    tally = cx.predict_tally(params, pred, model)
    report = cx.asymptotic_report(n, constant if constant is not None else 1.0)

    result: dict = {
        "tally": {
            "hadamards": tally.hadamards,
            "sigma_z": tally.sigma_z,
            "multi_controlled_flips": tally.multi_controlled_flips,
            "multi_controlled_phases": tally.multi_controlled_phases,
            "elementary_total": tally.elementary_total,
            "classical_sort_comparisons": tally.classical_sort_comparisons,
            "by_step": tally.by_step,
        },
        "asymptotic": {
            "n_items": report.n_items,
            "schedule_constant": report.schedule_constant,
            "n_samples": report.n_samples,
            "sample_register_qubits": report.sample_register_qubits,
            "sort_comparison_scale": report.sort_comparison_scale,
            "conditioned_flip_scale": report.conditioned_flip_scale,
            "claimed_total_scale": report.claimed_total_scale,
        },
    }
    if pred.marked_count >= 1:
        comparison = cx.query_count_comparison(n, pred.marked_count)
        result["query_comparison"] = {
            "subset_parity_queries": comparison.subset_parity_queries,
            "single_item_queries": comparison.single_item_queries,
        }

    try:
        records = ci.build_circuit(params, pred)
        enumerated = cx.tally_of_records(records, params, model)
        agree = (
            enumerated.hadamards == tally.hadamards
            and enumerated.sigma_z == tally.sigma_z
            and enumerated.multi_controlled_flips == tally.multi_controlled_flips
            and enumerated.multi_controlled_phases == tally.multi_controlled_phases
            and enumerated.by_step == tally.by_step
        )
        verdict = "pass" if agree else "fail"
    except CapacityError:
        verdict = "skipped_capacity"

    return {
        "params": {
            "n_items": n,
            "item_bits": params.item_bits,
            "n_samples": eta,
            "marked_count": pred.marked_count,
            "cost_model": model.name,
            "multi_control_unit": model.multi_control_unit,
        },
        "result": result,
        "checks": {"gate_list_cross_check": verdict},
    }


@main.command()
@click.option("--n", type=int, default=None, help="Item count N (a power of two).")
@click.option("--eta", type=int, default=None, help="Sample count.")
@click.option("--schedule-c", type=float, default=None,
              help="Derive the sample count as ceil(c * N * log2(N)^2).")
@click.option("--marks", type=str, default=None, help="Comma-separated marked items.")
@click.option("--mask", type=str, default=None, help="Hex bitmask, bit j-1 marks item j.")
@click.option("--t", type=int, default=None, help="Shorthand: mark the first t items.")
@click.option("--cost-model", type=click.Choice(["paper", "naive"]), default="paper",
              show_default=True)
@click.option("--format", "output_format", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.option("--config", type=str, default=None, help="JSON file mirroring the flags.")
@click.option("--out", type=str, default=None, help="Write the document here instead of stdout.")
@click.pass_context
def gates(ctx, **values):
    """Tally gate counts, asymptotic terms, and the query comparison."""

    def run():
        merged = _merge_config(ctx, values)
        _emit(_gates_document(merged), merged["output_format"], merged["out"])

    _guarded(run)


if __name__ == "__main__":
    main()
