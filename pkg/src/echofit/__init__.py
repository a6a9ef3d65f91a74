"""Ultrasonic Doppler fitness monitoring with a closed-loop scene simulator."""

from .emission import EmissionSpec, probe_schedule, synthesize_emission
from .errors import (
    ConfigError,
    ContractError,
    DegenerateSignalError,
    DelayUndefinedError,
    EchofitError,
    InsufficientDataError,
    NotTrainedError,
)

__version__ = "0.1.0"
