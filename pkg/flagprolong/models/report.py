"""
Raport wyniku zadania.

Everything except ``timing`` is a pure function of the job, so two runs of the
same job serialize to identical JSON once timing is dropped.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

SCHEMA_VERSION = "1.0"


class StatusModel(BaseModel):
    kind: str = Field(..., description="terminated or capped")
    degree: int = Field(..., description="Last nonzero degree, or the cap")


class Report(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    job: Dict[str, Any] = Field(..., description="Echo of the validated job")
    algebra: Optional[Dict[str, Any]] = Field(
        default=None, description="Symbol m in the custom JSON form"
    )
    dims: Dict[str, int] = Field(default_factory=dict, description="Degree -> dimension")
    total_dim: Optional[int] = None
    status: Optional[StatusModel] = None
    checks: Dict[str, Optional[bool]] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    bases: Optional[Dict[str, Any]] = None
    brackets: Optional[List[Dict[str, Any]]] = None
    timing: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _bases_match_dims(self):
        if self.bases:
            for degree, basis in self.bases.items():
                if degree in self.dims and len(basis) != self.dims[degree]:
                    raise ValueError(
                        f"Degree {degree}: {len(basis)} basis elements but dim {self.dims[degree]}"
                    )
        return self

    def deterministic_dict(self) -> Dict[str, Any]:
        """Report without the timing field."""
        return self.model_dump(mode="json", exclude={"timing"})


__all__ = ["SCHEMA_VERSION", "StatusModel", "Report"]
