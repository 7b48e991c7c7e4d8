"""Multirotor flight-dynamics simulator, controllers and scenario harness.

The compiled extension :mod:`mrsim._core` carries the implementation; this
package re-exports it and adds a small convenience wrapper for the common
"load config, run, summarize" loop.
"""

from mrsim._core import *  # noqa: F401,F403
from mrsim._core import (
    __version__,
    compute_metrics,
    format_summary,
    load_scenario,
    run_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]


def run(path, overrides=(), csv_path=None):
    """Runs the scenario in a config file and returns
    ``(scenario, result, metrics)``.

    ``overrides`` are ``key=value`` strings applied on top of the file;
    ``csv_path`` optionally writes the run log.
    """
    from mrsim._core import write_run_csv

    scenario = load_scenario(str(path), list(overrides))
    result = run_scenario(scenario)
    metrics = compute_metrics(result)
    if csv_path is not None:
        write_run_csv(str(csv_path), result)
    return scenario, result, metrics
