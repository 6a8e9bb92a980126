"""CLI command for assigning observations to mixture components."""

from pathlib import Path

import pandas as pd

from joint_mixreg.cli.common import EXIT_OK, name_list, require_output
from joint_mixreg.exceptions import ValidationError
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.orchestration.benchmark_runner import misclassification_rate
from joint_mixreg.services.dataset_io import read_dataset, write_frame
from joint_mixreg.services.model_document import load_document
from joint_mixreg.services.prediction import assign_clusters


def cluster_command(args, presenter: PresenterProtocol) -> int:
    """Execute the cluster subcommand."""
    output = require_output(args)
    doc = load_document(Path(args.model))
    if doc.model is None:
        raise ValidationError(f"{args.model} holds no mixture model")
    m = doc.model
    d = read_dataset(
        Path(args.dataset),
        invariant_cols=name_list(args.invariant_cols),
        require_response=m.kind.has_regression,
    )
    labels = assign_clusters(m, d)

    frame = pd.DataFrame({"component": labels})
    if d.truth is not None:
        frame["truth"] = d.truth
        n_labels = max(m.K, int(d.truth.max()) + 1) if d.n else m.K
        rate = misclassification_rate(labels, d.truth, n_labels)
        presenter.show_info(f"Misclassification rate against truth: {rate:.4f}")
    write_frame(output, frame)
    presenter.show_success(f"Wrote {d.n} assignments to {output}")
    return EXIT_OK
