"""
Wire models for the affine TL engine.

This module contains the Pydantic models used for JSON input/output of
monomial elements, diagrams and verification reports, and for validating
the command-line and suite configuration.
"""

from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

OUTPUT_FORMATS = ("text", "json", "svg", "ascii")

LoopsField = Union[int, List[List[str]]]


class MonomialTermModel(BaseModel):
    """One term of a monomial element."""

    coefficients: List[int] = Field(
        description="Coefficient polynomial, ascending in delta-degree"
    )
    word: List[int] = Field(description="Canonical word of the FC element")


class MonomialModel(BaseModel):
    """A Z[delta]-combination of monomial basis elements."""

    rank: int = Field(description="Rank parameter n", ge=2)
    terms: List[MonomialTermModel] = Field(default_factory=list)


class EdgeModel(BaseModel):
    """A diagram edge with its decoration blocks."""

    ends: Tuple[str, str] = Field(description="Node names, e.g. t1 and b3")
    blocks: List[List[str]] = Field(
        default_factory=list,
        description="Decoration blocks in reading order; glyphs cd, ct, od, ot",
    )


class DiagramModel(BaseModel):
    """Serialized LR-decorated diagram."""

    rank: int = Field(description="Rank parameter n", ge=2)
    edges: List[EdgeModel] = Field(description="Edges sorted by first end")
    loops: LoopsField = Field(
        default=0,
        description="Count of standard loops, or the glyph word of every loop",
    )
    schedule: List[Tuple[int, int]] = Field(
        default_factory=list,
        description="Vertical order of (edge index, block index) pairs",
    )

    @field_validator("loops")
    @classmethod
    def validate_loops(cls, v: LoopsField) -> LoopsField:
        """Reject negative loop counts."""
        if isinstance(v, int) and v < 0:
            raise ValueError("Loop count must be non-negative")
        return v


class DiagramTermModel(BaseModel):
    """One term of a diagram element."""

    coefficients: List[int] = Field(
        description="Coefficient polynomial, ascending in delta-degree"
    )
    diagram: DiagramModel


class DiagramElementModel(BaseModel):
    """A Z[delta]-combination of diagrams."""

    rank: int = Field(description="Rank parameter n", ge=2)
    terms: List[DiagramTermModel] = Field(default_factory=list)


class FailureRecord(BaseModel):
    """A single failing case of a verification suite."""

    word: List[int] = Field(description="Word or element the check failed on")
    reason: str = Field(description="What went wrong")


class VerificationReport(BaseModel):
    """Outcome of one verification suite at one rank."""

    suite: str = Field(description="Suite name")
    rank: int = Field(description="Rank parameter n", ge=2)
    max_len: int = Field(description="Length bound of the sweep", ge=0)
    checked: int = Field(default=0, description="Number of cases checked", ge=0)
    failures: List[FailureRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when no case failed."""
        return not self.failures

    def add_failure(self, word: List[int], reason: str) -> None:
        """Record a failing case."""
        self.failures.append(FailureRecord(word=list(word), reason=reason))

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """Concatenate the counts and failures of two partial reports."""
        return VerificationReport(
            suite=self.suite,
            rank=self.rank,
            max_len=max(self.max_len, other.max_len),
            checked=self.checked + other.checked,
            failures=self.failures + other.failures,
        )


class WordReport(BaseModel):
    """Facts about one FC element, as printed by ``classify`` and ``enumerate``."""

    word: List[int] = Field(description="Canonical word")
    length: int = Field(ge=0)
    left_descents: List[int] = Field(default_factory=list)
    right_descents: List[int] = Field(default_factory=list)
    n_value: int = Field(ge=0)
    type_I: bool = False
    non_cancellable: bool = False
    classification: Optional[str] = Field(
        default=None, description="Non-cancellable class, if any"
    )
    reduction_path: List[str] = Field(
        default_factory=list, description="Weak star moves down to a non-cancellable"
    )


class SuiteSpec(BaseModel):
    """Configuration of one verification suite."""

    name: str = Field(description="Suite name, a key of the suite registry")
    description: str = ""
    ranks: List[int] = Field(description="Ranks to run the suite at")
    max_len: int = Field(default=6, ge=0)
    samples: int = Field(default=0, ge=0, description="Random cases, if sampled")
    seed: int = Field(default=0, description="Seed for sampled suites")
    enabled: bool = True

    @field_validator("ranks")
    @classmethod
    def validate_ranks(cls, v: List[int]) -> List[int]:
        """Require a non-empty list of ranks, each at least 2."""
        if not v:
            raise ValueError("At least one rank is required")
        if any(rank < 2 for rank in v):
            raise ValueError(f"Ranks must be at least 2, got {v}")
        return v


class SuitesConfig(BaseModel):
    """The suite configuration file."""

    version: str = "1.0"
    suites: List[SuiteSpec] = Field(default_factory=list)


class CliConfig(BaseModel):
    """Validated command-line settings."""

    command: str
    rank: Optional[int] = Field(default=None, ge=2)
    words: List[str] = Field(default_factory=list)
    input_file: Optional[str] = None
    output_format: str = "text"
    max_len: Optional[int] = Field(default=None, ge=0)
    workers: Optional[int] = Field(default=None, ge=1)
    suites: List[str] = Field(default_factory=list)
    support: Optional[List[int]] = None
    config_path: Optional[str] = None

    @field_validator("output_format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        """Restrict the output format to the known set."""
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format {v!r}")
        return v


class AdmissibilityReport(BaseModel):
    """Verdict of the admissibility check on one diagram."""

    admissible: bool
    a_value: int = Field(ge=0)
    violations: List[str] = Field(
        default_factory=list, description="Failed axioms, e.g. 'C5: ...'"
    )


class CensusEntry(BaseModel):
    """Number of diagrams d_w with a given a-value and loop count."""

    a_value: int = Field(ge=0)
    loops: int = Field(ge=0)
    count: int = Field(ge=0)


class CensusReport(BaseModel):
    """Census of the diagrams d_w up to a length bound."""

    rank: int = Field(ge=2)
    max_len: int = Field(ge=0)
    entries: List[CensusEntry] = Field(default_factory=list)


class VerificationSummary(BaseModel):
    """All reports of a ``verify`` invocation."""

    passed: bool
    reports: List[VerificationReport] = Field(default_factory=list)
    errors: List[str] = Field(
        default_factory=list, description="Runs that raised instead of reporting"
    )


class FcCheckResult(BaseModel):
    """Outcome of the FC test on one word."""

    word: List[int]
    fully_commutative: bool
    canonical: Optional[List[int]] = None
    reason: Optional[str] = Field(default=None, description="First violation found")
