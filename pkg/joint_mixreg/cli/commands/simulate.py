"""CLI command for sampling a simulation scenario."""

from pathlib import Path

from joint_mixreg.cli.common import EXIT_OK, require_output
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.services.dataset_io import write_dataset
from joint_mixreg.services.scenarios import make_scenario


def simulate_command(args, presenter: PresenterProtocol) -> int:
    """Execute the simulate subcommand."""
    output = require_output(args)
    train, test = make_scenario(args.scenario, args.n, args.seed, args.test_n)
    write_dataset(output, train)
    presenter.show_success(f"Wrote {train.n} rows of scenario {args.scenario} to {output}")
    if args.test_output:
        write_dataset(Path(args.test_output), test)
        presenter.show_success(f"Wrote {test.n} test rows to {args.test_output}")
    return EXIT_OK
