"""CLI command for fitting a mixture model to a dataset."""

from pathlib import Path

import pandas as pd

from joint_mixreg.cli.common import EXIT_OK, app_config, fit_config, name_list, require_output
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.models import ModelDocument, ModelKind
from joint_mixreg.services.dataset_io import read_dataset, write_frame
from joint_mixreg.services.em_estimator import fit
from joint_mixreg.services.model_document import save_document
from joint_mixreg.services.model_selection import select_k
from joint_mixreg.utils.file_utils import derived_path


def fit_command(args, presenter: PresenterProtocol) -> int:
    """Execute the fit subcommand.

    With --k-max the BIC table is also written next to the model as
    ``<output>.bic.csv`` and the selected fit is saved.

    Args:
        args: Parsed command-line arguments
        presenter: Status output

    Returns:
        Exit code (0 = success)
    """
    output = require_output(args)
    config = app_config(args)
    cfg = fit_config(args, config)
    kind = ModelKind.parse(args.kind)

    d = read_dataset(Path(args.dataset), invariant_cols=name_list(args.invariant_cols))
    presenter.show_info(f"Fitting {kind.value.upper()} to {d}")

    if args.k_max is not None:
        selection = select_k(d, args.k_max, kind, cfg)
        presenter.show_selection(selection)
        result = selection.best
        table = pd.DataFrame(
            {
                "K": list(selection.bic_table),
                "loglik": [selection.fits[k].loglik for k in selection.bic_table],
                "bic": list(selection.bic_table.values()),
            }
        )
        write_frame(derived_path(output, ".bic.csv"), table)
    else:
        result = fit(d, args.k, kind, cfg)

    presenter.show_fit_result(result)
    metadata = {
        "seed": cfg.seed,
        "loglik": result.loglik,
        "bic": result.bic,
        "iterations": result.iterations,
        "converged": result.converged,
        "restart_index": result.restart_index,
        "n": d.n,
    }
    save_document(output, ModelDocument(model=result.model, metadata=metadata))
    presenter.show_success(f"Model written to {output}")
    return EXIT_OK
