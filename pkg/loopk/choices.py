from enum import Enum, IntEnum


class ExitCode(IntEnum):
    SUCCESS = 0
    POSITIVITY_FAIL = 1
    USAGE = 2
    INTEGRITY = 3


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL_NOT_IN_RING = "FAIL_NOT_IN_RING"
    FAIL_NEGATIVE_COEFF = "FAIL_NEGATIVE_COEFF"

    @property
    def passed(self) -> bool:
        return self is Verdict.PASS


class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"
    CSV = "csv"
    XLSX = "xlsx"


class ScanKind(str, Enum):
    CONVOLUTION = "convolution"
    QUANTUM = "qk"
