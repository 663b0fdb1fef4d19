#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.model` holds the instance data model shared by every other module.

It provides the frozen instance types, the loader for instance directories,
validation, discount factors and the generalized cost tables.
"""
from typing import List

from stram.model._costs import (
    GeneralizedCost,
    assemble_generalized_cost,
    investment_discount_factor,
    operational_discount_factor,
)
from stram.model._errors import (
    InstanceError,
    ModelFormatError,
    NoSolutionError,
    PathGenerationError,
    ProgramBuildError,
    StramError,
)
from stram.model._io import INSTANCE_FILES, load_instance
from stram.model._types import (
    MODES,
    Arc,
    ArcKey,
    BassParams,
    ChargingOption,
    CostModel,
    DemandTable,
    Edge,
    EdgeExpansion,
    EdgeKey,
    FleetParams,
    Fuel,
    FuelGroup,
    Instance,
    Node,
    NodeInvestment,
    TerminalClass,
    TimeStructure,
    UpgradeOption,
    VehicleType,
    edge_key_of,
)
from stram.model._validate import (
    PUBLISHED_MODE_FUELS,
    ValidationReport,
    derive_edges,
    validate_instance,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "MODES",
    "PUBLISHED_MODE_FUELS",
    "INSTANCE_FILES",
    "Arc",
    "ArcKey",
    "BassParams",
    "ChargingOption",
    "CostModel",
    "DemandTable",
    "Edge",
    "EdgeExpansion",
    "EdgeKey",
    "FleetParams",
    "Fuel",
    "FuelGroup",
    "GeneralizedCost",
    "Instance",
    "InstanceError",
    "ModelFormatError",
    "NoSolutionError",
    "Node",
    "NodeInvestment",
    "PathGenerationError",
    "ProgramBuildError",
    "StramError",
    "TerminalClass",
    "TimeStructure",
    "UpgradeOption",
    "ValidationReport",
    "VehicleType",
    "assemble_generalized_cost",
    "derive_edges",
    "edge_key_of",
    "investment_discount_factor",
    "load_instance",
    "operational_discount_factor",
    "validate_instance",
]
