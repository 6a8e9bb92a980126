"""CLI command for the simulation benchmark."""

from joint_mixreg.cli.common import EXIT_OK, app_config, fit_config, int_list, require_output
from joint_mixreg.config import create_default_config
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.orchestration import BenchmarkRunner, benchmark_frame
from joint_mixreg.presenters import ConsoleProgressCallback, NullProgressCallback
from joint_mixreg.services.dataset_io import write_frame


def benchmark_command(args, presenter: PresenterProtocol) -> int:
    """Execute the benchmark subcommand.

    Returns:
        Exit code (0 = success); BenchmarkError propagates when too many
        replicates fail
    """
    output = require_output(args)
    base = app_config(args)
    config = create_default_config(
        fit=fit_config(args, base),
        test_n=args.test_n,
        max_failure_rate=args.max_failure_rate,
        max_workers=base.max_workers,
    )
    scenarios = int_list(args.scenarios, "--scenarios")
    ns = int_list(args.ns, "--ns")

    runner = BenchmarkRunner(config, presenter)
    progress = NullProgressCallback() if args.quiet else ConsoleProgressCallback()
    tables = runner.run(scenarios, ns, args.reps, config.fit.seed, progress)

    write_frame(output, benchmark_frame(tables))
    presenter.show_success(f"Benchmark table written to {output}")
    return EXIT_OK
