"""Command-line experiment runner: ``gapped-ent run`` and ``gapped-ent list``."""

from .runner import ExperimentConfig, ResultBundle, list_experiments, main, run

__all__ = ["ExperimentConfig", "ResultBundle", "list_experiments", "main", "run"]
