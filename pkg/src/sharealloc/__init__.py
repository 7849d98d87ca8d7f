"""Sharing indivisible resources on social networks."""

from .model import (
    EnvyReport,
    ExtensionParams,
    Instance,
    InstanceError,
    InvalidSharingError,
    Sharing,
    SharingAllocation,
    ValidationResult,
    Violation,
    derive_bundles,
    envious_agents,
    own_utility,
    perceived_value,
    sharing_cost,
    validate_sharing,
    welfare,
)
from ._limits import SearchBudgetExceeded

__version__ = "0.1.0"
