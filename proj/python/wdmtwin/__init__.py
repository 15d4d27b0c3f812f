# Copyright (c) 2026 wdmtwin authors
# SPDX-License-Identifier: Apache-2.0
"""WDM link digital twin toolkit.

Thin wrapper over the C++ core: channel grids, the ground-truth network
simulator, remote twin training, link prediction and launch-power profile
optimization.
"""

from ._core import (  # noqa: F401
    AdamParams,
    ChannelGrid,
    DomainError,
    EdfaTwinModel,
    FiberSpan,
    LinkPath,
    NetworkSim,
    NumericalError,
    OptConfig,
    OptimizeResult,
    PowerProfile,
    ProbeRecord,
    SnrReport,
    Toggles,
    Topology,
    TracePoint,
    TrainConfig,
    TrainCurvePoint,
    TrainResult,
    TrxPenaltyModel,
    TwinMetadata,
    ValidationReport,
    __version__,
    build_twin_path,
    dbm_to_mw,
    default_grid,
    default_scenario,
    flat_profile,
    generate_probes,
    init_twin_model,
    load_trx_csv,
    make_profile,
    make_uniform_grid,
    mw_to_dbm,
    optimize_profile,
    parameterize,
    predict,
    smooth_min_db,
    toggles_from_name,
    total_power_dbm,
    train_twin,
    validate_twin,
)
