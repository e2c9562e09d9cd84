"""
Modele zadań (JobSpec) wczytywanych z plików JSON.

Descriptors accept the short forms used in job files, e.g.
``{"commutative": 3}``, ``"full"`` or ``{"flag_prolongation": {"delta_rp": [-3, -1]}}``.
"""

from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator

from flagprolong import config
from flagprolong.symbols import load_symbol

Command = Literal[
    "check",
    "derivations",
    "prolong",
    "flag-prolong",
    "flag-prolong-param",
    "spencer",
    "symbol",
    "growth",
]
AmbientName = Literal["full", "csp", "sp"]


def _check_rational(value: Union[int, str]) -> Union[int, str]:
    if isinstance(value, bool):
        raise ValueError("Booleans are not rational numbers")
    if isinstance(value, str):
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Not a rational number: {value!r}") from exc
    return value


Rational = Annotated[Union[int, str], AfterValidator(_check_rational)]
RationalMatrix = List[List[Rational]]


def _exactly_one(model: BaseModel, names: List[str], what: str) -> None:
    given = [name for name in names if getattr(model, name) is not None]
    if len(given) != 1:
        raise ValueError(f"{what} needs exactly one of {names}, got {given or 'none'}")


class TauSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m: int = Field(..., ge=1)
    sign: Literal[1, -1] = 1


class CustomFlagSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weights: List[int] = Field(..., min_length=1)
    matrix: RationalMatrix
    omega: Optional[RationalMatrix] = None


class FlagDescriptor(BaseModel):
    """Degree -1 endomorphism datum: one family per descriptor."""

    model_config = ConfigDict(extra="forbid")

    delta_rp: Optional[List[int]] = Field(default=None, min_length=2, max_length=2)
    tau_m: Optional[Union[int, TauSpec]] = None
    sum: Optional[List["FlagDescriptor"]] = Field(default=None, min_length=1)
    custom: Optional[CustomFlagSpec] = None

    @model_validator(mode="after")
    def _one_family(self):
        _exactly_one(self, ["delta_rp", "tau_m", "sum", "custom"], "Flag symbol")
        return self


class AlgebraDescriptor(BaseModel):
    model_config = ConfigDict(extra="forbid")

    commutative: Optional[int] = Field(default=None, ge=1)
    heisenberg: Optional[int] = Field(default=None, ge=3)
    free: Optional[List[int]] = Field(default=None, min_length=2, max_length=2)
    custom: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def _one_family(self):
        _exactly_one(self, ["commutative", "heisenberg", "free", "custom"], "Algebra")
        return self

    @model_validator(mode="after")
    def _custom_well_formed(self):
        # InvalidSymbol is a ValueError, so pydantic reports it as a validation error
        if self.custom is not None:
            load_symbol(self.custom, check=False)
        return self


class G0Descriptor(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Literal["full", "csp", "sp", "custom", "flag_prolongation"] = "full"
    omega: Optional[RationalMatrix] = None
    matrices: Optional[List[RationalMatrix]] = None
    flag_prolongation: Optional[FlagDescriptor] = None
    ambient: Optional[AmbientName] = None
    parameterized: bool = False

    @model_validator(mode="before")
    @classmethod
    def _short_forms(cls, data: Any) -> Any:
        if isinstance(data, str):
            return {"family": data}
        if isinstance(data, dict) and "family" not in data:
            data = dict(data)
            for name in ("full", "csp", "sp"):
                if name in data:
                    data.pop(name)
                    data["family"] = name
            if "flag_prolongation" in data:
                data["family"] = "flag_prolongation"
            elif "matrices" in data:
                data["family"] = "custom"
        return data

    @model_validator(mode="after")
    def _family_payload(self):
        if self.family == "flag_prolongation" and self.flag_prolongation is None:
            raise ValueError("g0 family flag_prolongation needs a 'flag_prolongation' symbol")
        if self.family == "custom" and not self.matrices:
            raise ValueError("g0 family custom needs 'matrices'")
        if self.parameterized and self.family != "flag_prolongation":
            raise ValueError("parameterized applies to the flag_prolongation family only")
        return self


class DistributionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=1)
    fields: List[Dict[str, Union[int, str]]] = Field(..., min_length=1)
    name: str = "distribution"


class JobSpec(BaseModel):
    """One declarative job, validated before anything is computed."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    algebra: Optional[AlgebraDescriptor] = None
    g0: Optional[G0Descriptor] = None
    symbol: Optional[FlagDescriptor] = None
    ambient: Optional[AmbientName] = None
    distribution: Optional[DistributionModel] = None
    point: Optional[List[Rational]] = None
    sample_points: Optional[List[List[Rational]]] = None
    degree: int = Field(default=0, ge=0)
    max_degree: int = Field(default_factory=lambda: config.DEFAULT_MAX_DEGREE, ge=1)
    require_finite: bool = False

    @model_validator(mode="after")
    def _required_parts(self):
        needs_algebra = {"check", "derivations", "prolong", "spencer"}
        if self.command in needs_algebra and self.algebra is None:
            raise ValueError(f"Command {self.command} needs an 'algebra'")
        if self.command in ("flag-prolong", "flag-prolong-param") and self.symbol is None:
            raise ValueError(f"Command {self.command} needs a flag 'symbol'")
        if self.command == "symbol" and self.distribution is None:
            raise ValueError("Command symbol needs a 'distribution'")
        if self.command == "growth" and self.algebra is None and self.distribution is None:
            raise ValueError("Command growth needs an 'algebra' or a 'distribution'")
        return self


FlagDescriptor.model_rebuild()

__all__ = [
    "Command",
    "TauSpec",
    "CustomFlagSpec",
    "FlagDescriptor",
    "AlgebraDescriptor",
    "G0Descriptor",
    "DistributionModel",
    "JobSpec",
]
