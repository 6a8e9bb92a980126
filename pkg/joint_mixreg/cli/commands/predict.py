"""CLI command for posterior-weighted prediction."""

from pathlib import Path

import pandas as pd

from joint_mixreg.cli.common import EXIT_OK, name_list, require_output
from joint_mixreg.exceptions import ValidationError
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.services.dataset_io import read_dataset, write_frame
from joint_mixreg.services.model_document import load_document
from joint_mixreg.services.prediction import predict_many


def predict_command(args, presenter: PresenterProtocol) -> int:
    """Execute the predict subcommand.

    Writes one row per covariate row with columns yhat, posterior0..K-1
    and component (the index of the largest posterior).
    """
    output = require_output(args)
    doc = load_document(Path(args.model))
    if doc.model is None:
        raise ValidationError(f"{args.model} holds no mixture model")
    d = read_dataset(
        Path(args.covariates),
        invariant_cols=name_list(args.invariant_cols),
        require_response=False,
    )
    yhat, weights = predict_many(doc.model, d.X, d.Z)

    frame = pd.DataFrame({"yhat": yhat})
    for k in range(weights.shape[1]):
        frame[f"posterior{k}"] = weights[:, k]
    frame["component"] = weights.argmax(axis=1)
    write_frame(output, frame)
    presenter.show_success(f"Wrote {d.n} predictions to {output}")
    return EXIT_OK
