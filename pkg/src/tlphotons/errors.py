"""Exception types shared across the package."""


class PulseError(Exception):
    """Base class for all domain errors raised by this package."""


class EvaluationAtSingularity(PulseError):
    """A transform was evaluated exactly at a logarithmic singularity."""


class NonDecayingInput(PulseError):
    """A transform requires the input to vanish at infinity and it does not."""


class TooShort(PulseError):
    """A sampled waveform has too few samples for the requested operation."""


class RepresentationDoesNotExist(PulseError):
    """The single-mode photonic representation of the pulse does not exist.

    ``condition`` names the violated requirement: ``"charge_neutrality"``
    (the charge density must integrate to zero) or ``"flux_decay"``
    (the flux field must vanish at both ends of the line).
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = f"photonic representation does not exist: {condition} violated"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnipolarPulse(RepresentationDoesNotExist):
    """The voltage pulse has nonzero net area, so no finite photon number exists."""

    def __init__(self, net_area: float):
        self.net_area = net_area
        super().__init__(
            "charge_neutrality",
            f"voltage integrates to {net_area:g}, not zero; "
            "the mean photon number diverges logarithmically in the infrared",
        )


class QuadratureFailure(PulseError):
    """Adaptive quadrature could not meet the requested tolerance."""

    def __init__(self, achieved: float, requested: float, what: str = "integral"):
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"quadrature for {what} achieved error {achieved:.3e} "
            f"> requested {requested:.3e}"
        )


class NotConverged(PulseError):
    """Successive grid refinements did not settle within tolerance."""

    def __init__(self, deviation: float, tolerance: float, what: str = "oracle"):
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"{what} not converged: last refinement moved the result by "
            f"{deviation:.3e} (tolerance {tolerance:.3e})"
        )


class OverlappingSubPulses(PulseError):
    """Split-pulse construction requested with overlapping sub-pulses."""


class PulseFileError(PulseError):
    """A pulse file failed to parse; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")
