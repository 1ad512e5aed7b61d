"""Error types.  Each carries a short machine name used by the CLI."""


class ArchimedeaError(Exception):
    name = "error"
    exit_code = 1

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class InvalidArgument(ArchimedeaError):
    name = "invalid-argument"


class UnsupportedTwist(ArchimedeaError):
    name = "unsupported-twist"


class WrongDegree(ArchimedeaError):
    name = "wrong-degree"


class NotUnitary(ArchimedeaError):
    name = "not-unitary"


class CannotNormalize(ArchimedeaError):
    name = "cannot-normalize"


class UnsupportedProfile(ArchimedeaError):
    name = "unsupported-profile"


class PoleAtPoint(ArchimedeaError):
    name = "pole-at-point"


class ImprimitiveCharacter(ArchimedeaError):
    name = "imprimitive-character"


class NotCoprime(ArchimedeaError):
    name = "not-coprime"


class NonInvertible(ArchimedeaError):
    name = "non-invertible"


class MissingFEData(ArchimedeaError):
    name = "missing-fe-data"


class TailTooLarge(ArchimedeaError):
    name = "tail-too-large"


class UnsupportedKernel(ArchimedeaError):
    name = "unsupported-kernel"


class ContourError(ArchimedeaError):
    name = "contour-error"


class UnsupportedScan(ArchimedeaError):
    name = "unsupported-scan"


class WrongParity(ArchimedeaError):
    name = "wrong-parity"


class InvalidDomain(ArchimedeaError):
    name = "invalid-domain"
