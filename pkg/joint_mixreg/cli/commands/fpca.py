"""CLI command for functional principal component analysis of curves."""

from pathlib import Path

from joint_mixreg.cli.common import EXIT_OK, require_output
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.models import CurveSample, ModelDocument, SmoothedCurves
from joint_mixreg.services.dataset_io import read_curves, write_frame
from joint_mixreg.services.functional import (
    differentiate,
    evaluate_curves,
    fpca,
    project_scores,
    smooth_curves,
)
from joint_mixreg.services.model_document import save_document
from joint_mixreg.utils.file_utils import derived_path


def smoothed_covariate(args, raw: CurveSample) -> tuple[SmoothedCurves, SmoothedCurves]:
    """Smooth the raw curves and return (level curves, covariate curves).

    The covariate curves are the derivatives of the level curves when
    --derivative is given and the level curves otherwise.
    """
    level = smooth_curves(raw, order=args.order, n_knots=args.knots, grid_points=args.grid)
    covariate = differentiate(level) if args.derivative else level
    return level, covariate


def fpca_command(args, presenter: PresenterProtocol) -> int:
    """Execute the fpca subcommand.

    Writes the eigen-system JSON to --output and the per-subject scores
    (xi1..xiM, plus ``endpoint`` with --endpoint-as-invariant) to --scores.
    """
    output = require_output(args)
    scores_path = Path(args.scores) if args.scores else derived_path(output, ".scores.csv")

    raw = read_curves(Path(args.curves))
    level, covariate = smoothed_covariate(args, raw)
    eigen = fpca(covariate, args.m)
    scores = project_scores(covariate, eigen)

    frame = scores.to_frame().reset_index()
    if args.endpoint_as_invariant:
        frame["endpoint"] = evaluate_curves(level, level.domain[1])

    for j, fraction in enumerate(eigen.cumulative_variance, 1):
        presenter.show_info(f"  M={j}: cumulative variance {fraction:.4f}")

    metadata = {
        "order": args.order,
        "derivative": bool(args.derivative),
        "n_subjects": covariate.n_subjects,
        "grid_points": int(eigen.grid.size),
    }
    save_document(output, ModelDocument(eigen=eigen, metadata=metadata))
    write_frame(scores_path, frame)
    presenter.show_success(f"Eigen-system written to {output}, scores to {scores_path}")
    return EXIT_OK
