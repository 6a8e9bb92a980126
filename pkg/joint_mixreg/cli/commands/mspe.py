"""CLI command for the Monte-Carlo MSPE decomposition."""

import dataclasses
from pathlib import Path

import numpy as np

from joint_mixreg.cli.common import EXIT_OK, app_config, float_list, require_output, write_json
from joint_mixreg.exceptions import ConfigurationError, ValidationError
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.models import MspeEstimate
from joint_mixreg.services.model_document import load_document
from joint_mixreg.services.mspe import mspe_report, verify_dominance


def _estimate(e: MspeEstimate | None) -> dict | None:
    return None if e is None else dataclasses.asdict(e)


def _beta_star(value: str | None) -> np.ndarray | None:
    if not value:
        return None
    rows = [float_list(part, "--beta-star") for part in value.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ConfigurationError("--beta-star rows must all have the same length")
    return np.array(rows)


def mspe_command(args, presenter: PresenterProtocol) -> int:
    """Execute the mspe subcommand."""
    output = require_output(args)
    config = app_config(args)
    doc = load_document(Path(args.model))
    if doc.model is None:
        raise ValidationError(f"{args.model} holds no mixture model")
    m = doc.model
    weights = float_list(args.weights, "--weights") if args.weights else None
    beta_star = _beta_star(args.beta_star)
    pi_star = float_list(args.pi_star, "--pi-star") if args.pi_star else None

    common = {
        "mc_n": args.mc_n,
        "seed": args.seed,
        "beta_star": beta_star,
        "pi_star": pi_star,
        "chunk_size": args.chunk_size,
        "max_workers": config.max_workers,
    }
    report = mspe_report(m, weights=weights, **common)
    dominance = verify_dominance(m, **common)
    presenter.show_dominance_report(dominance)

    payload = {
        "mc_n": report.mc_n,
        "seed": report.seed,
        "sigma_bar": report.sigma_bar,
        "excess_adaptive": _estimate(report.excess_adaptive),
        "excess_fixed": _estimate(report.excess_fixed),
        "excess_fixed_exact": report.excess_fixed_exact,
        "excess_biased": _estimate(report.excess_biased),
        "fixed_minus_adaptive": _estimate(report.fixed_minus_adaptive),
        "mspe_adaptive": report.mspe_adaptive,
        "mspe_fixed": report.mspe_fixed,
        "quadratic_form": dominance.quadratic_form,
        "strict_dominance": dominance.strict_dominance,
        "checks": [dataclasses.asdict(check) for check in dominance.checks],
    }
    write_json(output, payload)
    presenter.show_success(f"MSPE report written to {output}")
    return EXIT_OK
