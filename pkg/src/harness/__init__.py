"""Experiment orchestration, configuration loading and result files."""

from src.harness.config_loader import (
    load_experiment_config,
    merge_layers,
    read_config_file,
    spec_from_document,
)
from src.harness.experiment import (
    FRI_AXES,
    PROFILES,
    SWEEP_PRESETS,
    ExperimentSpec,
    SweepSpec,
    apply_sweep,
    sweep_preset,
)
from src.harness.heatmap import HeatmapData, emit_heatmap, run_heatmap
from src.harness.results import (
    RECORD_FIELDS,
    ConvergencePoint,
    OutputFormat,
    SummaryRow,
    TrialRecord,
    emit_convergence,
    emit_results,
    read_results,
    summarize,
    summary_path,
    write_summary,
    write_table,
)
from src.harness.runner import (
    TrialUnit,
    check_sweep_point,
    evaluation_map,
    run_convergence,
    run_experiment,
    run_fri_robustness,
    run_scheme,
    run_trial,
    validate_experiment,
)


__all__ = [
    "FRI_AXES",
    "PROFILES",
    "RECORD_FIELDS",
    "SWEEP_PRESETS",
    "ConvergencePoint",
    "ExperimentSpec",
    "HeatmapData",
    "OutputFormat",
    "SummaryRow",
    "SweepSpec",
    "TrialRecord",
    "TrialUnit",
    "apply_sweep",
    "check_sweep_point",
    "emit_convergence",
    "emit_heatmap",
    "emit_results",
    "evaluation_map",
    "load_experiment_config",
    "merge_layers",
    "read_config_file",
    "read_results",
    "run_convergence",
    "run_experiment",
    "run_fri_robustness",
    "run_heatmap",
    "run_scheme",
    "run_trial",
    "spec_from_document",
    "summarize",
    "summary_path",
    "sweep_preset",
    "validate_experiment",
    "write_summary",
    "write_table",
]
