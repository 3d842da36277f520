"""
filename: schemas.py
description: Module for the definitions of the JSON documents exchanged with files and the
    command line: bodies, energies, grids and the command envelope.
"""

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, model_validator

from convex_rounder.exceptions import SpecError
from convex_rounder.models.body import Ball, Body, LevelSet, PolarOf, Polytope, SupportSampled
from convex_rounder.models.energy import ConjugateOf, QuadGauge, Sampled, SmoothedGauge
from convex_rounder.models.energy import SquaredGauge, Sum
from convex_rounder.models.grid import DirectionGrid, build_grid

SCHEMA_VERSION = 1


class GridSpec(BaseModel):
    n: int | None = Field(default=None, ge=2)
    seed: int | None = None


class PolytopeSchema(BaseModel):
    kind: Literal["polytope"]
    dim: int = Field(ge=1)
    vertices: list[list[float]] = Field(min_length=1)

    @model_validator(mode="after")
    def validate_vertex_dimension(self):
        """Validate that every vertex has <dim> coordinates"""
        if any(len(vertex) != self.dim for vertex in self.vertices):
            raise ValueError(f"every vertex must have {self.dim} coordinates")
        return self


class BallSchema(BaseModel):
    kind: Literal["ball"]
    dim: int = Field(default=2, ge=1)
    radius: float = Field(gt=0)


class SupportSchema(BaseModel):
    kind: Literal["support"]
    dim: int = Field(ge=1)
    grid: GridSpec
    values: list[float]


class LevelSchema(BaseModel):
    kind: Literal["level"]
    energy: "EnergySchema"
    level: float = Field(default=0.5, gt=0)


class PolarSchema(BaseModel):
    kind: Literal["polar"]
    body: "BodySchema"


class SquaredGaugeSchema(BaseModel):
    kind: Literal["squared_gauge"]
    weight: float = Field(default=1.0, ge=0)
    body: "BodySchema"


class SumSchema(BaseModel):
    kind: Literal["sum"]
    terms: list["EnergySchema"] = Field(min_length=1)


class ConjugateSchema(BaseModel):
    kind: Literal["conjugate"]
    inner: "EnergySchema"


class SampledSchema(BaseModel):
    kind: Literal["sampled"]
    dim: int = Field(ge=1)
    grid: GridSpec
    gauge_values: list[float]


class SmoothedSchema(BaseModel):
    kind: Literal["smoothed"]
    dim: int = Field(ge=1)
    grid: GridSpec
    offsets: list[float]
    power: float = Field(gt=1)
    reg: float = Field(gt=0)


BodySchema = Annotated[
    Union[PolytopeSchema, BallSchema, SupportSchema, LevelSchema, PolarSchema],
    Field(discriminator="kind"),
]
EnergySchema = Annotated[
    Union[SquaredGaugeSchema, SumSchema, ConjugateSchema, SampledSchema, SmoothedSchema],
    Field(discriminator="kind"),
]

for _schema in (LevelSchema, PolarSchema, SquaredGaugeSchema, SumSchema, ConjugateSchema):
    _schema.model_rebuild()

body_adapter = TypeAdapter(BodySchema)
energy_adapter = TypeAdapter(EnergySchema)


class CommandResult(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    exit_code: int = 0
    payload: dict = {}
    artifacts: list[str] = []


def _grid(dim: int, spec: GridSpec) -> DirectionGrid:
    return build_grid(dim, spec.n, spec.seed)


def _grid_spec(grid: DirectionGrid) -> GridSpec:
    return GridSpec(n=grid.n, seed=grid.seed)


def _floats(values: np.ndarray) -> list:
    return np.asarray(values, dtype=float).tolist()


def body_from_schema(schema) -> Body:
    """
    Build the body described by a validated schema.

    :param schema: (BodySchema) validated document.
    :return: (Body) the body.
    """
    if isinstance(schema, PolytopeSchema):
        return Polytope(np.array(schema.vertices, dtype=float))
    if isinstance(schema, BallSchema):
        return Ball(schema.radius, schema.dim)
    if isinstance(schema, SupportSchema):
        return SupportSampled(_grid(schema.dim, schema.grid), np.array(schema.values))
    if isinstance(schema, LevelSchema):
        return LevelSet(energy_from_schema(schema.energy), schema.level)
    return PolarOf(body_from_schema(schema.body))


def energy_from_schema(schema) -> QuadGauge:
    """
    Build the energy described by a validated schema.

    :param schema: (EnergySchema) validated document.
    :return: (QuadGauge) the energy.
    """
    if isinstance(schema, SquaredGaugeSchema):
        return SquaredGauge(body_from_schema(schema.body), schema.weight)
    if isinstance(schema, SumSchema):
        return Sum(tuple(energy_from_schema(term) for term in schema.terms))
    if isinstance(schema, ConjugateSchema):
        return ConjugateOf(energy_from_schema(schema.inner))
    if isinstance(schema, SmoothedSchema):
        return SmoothedGauge(
            _grid(schema.dim, schema.grid), np.array(schema.offsets), schema.power, schema.reg
        )
    return Sampled(_grid(schema.dim, schema.grid), np.array(schema.gauge_values))


def body_to_schema(body: Body):
    if isinstance(body, Polytope):
        return PolytopeSchema(
            kind="polytope", dim=body.dimension, vertices=_floats(body.vertices)
        )
    if isinstance(body, Ball):
        return BallSchema(kind="ball", dim=body.dimension, radius=body.radius)
    if isinstance(body, SupportSampled):
        return SupportSchema(
            kind="support",
            dim=body.dimension,
            grid=_grid_spec(body.grid),
            values=_floats(body.values),
        )
    if isinstance(body, LevelSet):
        return LevelSchema(kind="level", energy=energy_to_schema(body.energy), level=body.level)
    if isinstance(body, PolarOf):
        return PolarSchema(kind="polar", body=body_to_schema(body.body))
    raise SpecError(f"no document format for {type(body).__name__}")


def energy_to_schema(energy: QuadGauge):
    if isinstance(energy, SquaredGauge):
        return SquaredGaugeSchema(
            kind="squared_gauge", weight=energy.weight, body=body_to_schema(energy.body)
        )
    if isinstance(energy, Sum):
        return SumSchema(kind="sum", terms=[energy_to_schema(term) for term in energy.terms])
    if isinstance(energy, ConjugateOf):
        return ConjugateSchema(kind="conjugate", inner=energy_to_schema(energy.inner))
    if isinstance(energy, Sampled):
        return SampledSchema(
            kind="sampled",
            dim=energy.dimension,
            grid=_grid_spec(energy.grid),
            gauge_values=_floats(energy.gauge_values),
        )
    if isinstance(energy, SmoothedGauge):
        return SmoothedSchema(
            kind="smoothed",
            dim=energy.dimension,
            grid=_grid_spec(energy.grid),
            offsets=_floats(energy.offsets),
            power=energy.power,
            reg=energy.reg,
        )
    raise SpecError(f"no document format for {type(energy).__name__}")


def parse_body(document: dict) -> Body:
    return body_from_schema(body_adapter.validate_python(document))


def parse_energy(document: dict) -> QuadGauge:
    return energy_from_schema(energy_adapter.validate_python(document))


def dump_body(body: Body) -> dict:
    return body_to_schema(body).model_dump(mode="json")


def dump_energy(energy: QuadGauge) -> dict:
    return energy_to_schema(energy).model_dump(mode="json")
