"""JSON fixtures describing twisted partial actions, and their loader."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import MalformedTable, NotCentralIdempotent, ParseError, SchemaError
from ..paction import GlobalTwistedAction, TwistedPartialAction, make_finite_support, restrict_global
from ..ringcore import LATTICE_CAP, RING_CAP, TABLE_CAP, FactorSpec, factor_automorphism, ring_product


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class FactorModel(_Strict):
    kind: Literal["cyclic", "matrix"]
    modulus: Optional[int] = None
    size: Optional[int] = None
    prime: Optional[int] = None

    @model_validator(mode="after")
    def _shape(self):
        if self.kind == "cyclic":
            if self.modulus is None or self.modulus < 2:
                raise ValueError("cyclic factor needs modulus >= 2")
            if self.size is not None or self.prime is not None:
                raise ValueError("cyclic factor takes only a modulus")
        else:
            if self.modulus is not None:
                raise ValueError("matrix factor takes size and prime, not modulus")
            FactorSpec.matrix(self.size or 0, self.prime or 0)
        return self

    def spec(self) -> FactorSpec:
        if self.kind == "cyclic":
            return FactorSpec.cyclic(self.modulus)
        return FactorSpec.matrix(self.size, self.prime)


class RingModel(_Strict):
    factors: list[FactorModel] = Field(min_length=1)


class AutomorphismModel(_Strict):
    permutation: list[int]
    conjugators: Optional[list[Any]] = None


class CocycleModel(_Strict):
    kind: Literal["trivial", "product"] = "trivial"
    lam: Optional[list[Any]] = Field(default=None, alias="lambda")

    @model_validator(mode="after")
    def _lam(self):
        if self.kind == "product" and self.lam is None:
            raise ValueError("product cocycle needs lambda")
        return self


class TwistModel(_Strict):
    i: int
    j: int
    value: list[Any]


class CapsModel(_Strict):
    ring: int = Field(default=RING_CAP, ge=1)
    table: int = Field(default=TABLE_CAP, ge=1)
    lattice: int = Field(default=LATTICE_CAP, ge=1)


class FixtureModel(_Strict):
    name: str = Field(min_length=1)
    description: Optional[str] = None
    presentation: Literal["restricted_global", "finite_support"]
    ring: RingModel
    seed: int = 0
    caps: CapsModel = CapsModel()
    # restricted_global
    automorphism: Optional[AutomorphismModel] = None
    cocycle: Optional[CocycleModel] = None
    e: Optional[list[Any]] = None
    # finite_support
    bound: Optional[int] = Field(default=None, ge=0)
    idempotents: Optional[dict[str, list[Any]]] = None
    alpha: Optional[dict[str, list[list[list[Any]]]]] = None
    w: Optional[list[TwistModel]] = None

    @field_validator("idempotents", "alpha")
    @classmethod
    def _int_keys(cls, v):
        if v is not None:
            for k in v:
                try:
                    int(k)
                except ValueError:
                    raise ValueError(f"index key {k!r} is not an integer") from None
        return v

    @model_validator(mode="after")
    def _blocks(self):
        glob = ("automorphism", "cocycle", "e")
        fin = ("bound", "idempotents", "alpha", "w")
        if self.presentation == "restricted_global":
            stray = [k for k in fin if getattr(self, k) is not None]
            if self.automorphism is None:
                raise ValueError("restricted_global fixtures need an automorphism block")
        else:
            stray = [k for k in glob if getattr(self, k) is not None]
            if self.bound is None or self.idempotents is None:
                raise ValueError("finite_support fixtures need bound and idempotents")
        if stray:
            raise ValueError(f"fields {stray} do not belong to a {self.presentation} fixture")
        return self


def tupleize(x):
    """JSON arrays to the nested tuples used as element labels."""
    if isinstance(x, list):
        return tuple(tupleize(v) for v in x)
    return x


@dataclass
class Fixture:
    name: str
    model: FixtureModel
    action: TwistedPartialAction
    source: str | None = None

    @property
    def presentation(self) -> str:
        return self.model.presentation

    @property
    def seed(self) -> int:
        return self.model.seed

    @property
    def caps(self) -> CapsModel:
        return self.model.caps

    def canonical(self) -> str:
        return json.dumps(self.model.model_dump(mode="json", by_alias=True, exclude_none=True), sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def to_json(self) -> dict:
        return json.loads(self.canonical())


def build_action(model: FixtureModel) -> TwistedPartialAction:
    try:
        R = ring_product([f.spec() for f in model.ring.factors], cap=model.caps.ring)
    except ValueError as exc:
        raise SchemaError(f"ring: {exc}") from None
    try:
        if model.presentation == "restricted_global":
            a = model.automorphism
            conj = None if a.conjugators is None else [None if c is None else tupleize(c) for c in a.conjugators]
            try:
                beta = factor_automorphism(R, a.permutation, conj)
            except ValueError as exc:
                raise SchemaError(f"automorphism: {exc}") from None
            coc = model.cocycle or CocycleModel()
            lam = None if coc.lam is None else tupleize(coc.lam)
            if lam is not None and lam not in R:
                raise SchemaError(f"cocycle.lambda: {coc.lam} is not an element of the ring")
            g = GlobalTwistedAction(R, beta, lam, coc.kind, name=model.name)
            e = R.one if model.e is None else tupleize(model.e)
            if e not in R:
                raise SchemaError(f"e: {model.e} is not an element of the ring")
            try:
                return restrict_global(g, e)
            except NotCentralIdempotent as exc:
                raise SchemaError(f"e: {exc}") from None
        idem = {int(k): tupleize(v) for k, v in model.idempotents.items()}
        alpha = {int(k): {tupleize(p[0]): tupleize(p[1]) for p in pairs} for k, pairs in (model.alpha or {}).items()}
        for k, pairs in (model.alpha or {}).items():
            if any(len(p) != 2 for p in pairs):
                raise SchemaError(f"alpha.{k}: entries must be [argument, value] pairs")
        w = {(t.i, t.j): tupleize(t.value) for t in (model.w or [])}
        try:
            return make_finite_support(R, model.bound, idem, alpha, w, name=model.name)
        except (MalformedTable, NotCentralIdempotent) as exc:
            raise SchemaError(f"tables: {exc}") from None
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc)) from None


def _schema_error(exc: ValidationError) -> SchemaError:
    lines = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{path}: {err['msg']}")
    return SchemaError("; ".join(lines))


def fixture_from_dict(data: dict, source=None) -> Fixture:
    try:
        model = FixtureModel.model_validate(data)
    except ValidationError as exc:
        raise _schema_error(exc) from None
    return Fixture(model.name, model, build_action(model), source)


def parse_fixture(text: str, source="<string>") -> Fixture:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SchemaError("<root>: fixture must be a JSON object")
    return fixture_from_dict(data, source)


def bundled_names() -> list[str]:
    pkg = resources.files("tpsa") / "fixtures"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def resolve_path(ref) -> Path | None:
    """A file path, or the bundled fixture of that name (``f3`` or ``f3.json``)."""
    p = Path(ref)
    if p.exists():
        return p
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if p.parent == Path(".") and stem in bundled_names():
        return Path(str(resources.files("tpsa") / "fixtures" / f"{stem}.json"))
    return None


def load_fixture(ref) -> Fixture:
    path = resolve_path(ref)
    if path is None:
        raise ParseError(f"{ref}: no such fixture file or bundled fixture")
    return parse_fixture(path.read_text(encoding="utf-8"), str(ref))
