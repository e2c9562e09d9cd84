from flagprolong.models.job import (
    AlgebraDescriptor,
    DistributionModel,
    FlagDescriptor,
    G0Descriptor,
    JobSpec,
)
from flagprolong.models.report import SCHEMA_VERSION, Report, StatusModel

__all__ = [
    "AlgebraDescriptor",
    "DistributionModel",
    "FlagDescriptor",
    "G0Descriptor",
    "JobSpec",
    "SCHEMA_VERSION",
    "Report",
    "StatusModel",
]
