#   Copyright 2026 Topogen Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

"""JSON formats of automata, IFS data and computed objects."""

from collections.abc import Mapping
import json
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from address import parse_word, word_text
from analysis import DiagonalStructure, EquivalenceClass
from approximation import FiniteSpace, Point
from automaton import Automaton, ValidationReport
from errors import StructuralError
from exact_geometry import Ifs, Similitude
from multi_address import TupleAutomaton, TupleEdge

ModelT = TypeVar("ModelT", bound=BaseModel)


class _Model(BaseModel):
  model_config = ConfigDict(populate_by_name=True, extra="forbid")


class EdgeModel(_Model):
  """Edges between two states, one label per parallel edge."""

  from_: str = Field(alias="from")
  to: str
  labels: list[list[int]]


class SimilitudeModel(_Model):
  """Exact map data; rationals as [xn, xd, yn, yd]."""

  alpha: list[int]
  beta: list[int]
  conj: bool = False


class AutomatonModel(_Model):
  """Automaton JSON, optionally with the maps of a neighbor graph."""

  m: int
  states: list[str]
  initial: str
  inverse: dict[str, str]
  edges: list[EdgeModel]
  weak_axiom4: bool | None = Field(default=None, alias="weak-axiom-4")
  description: str | None = None
  field_n: int | None = Field(default=None, alias="field_N")
  state_map: dict[str, SimilitudeModel] | None = None

  @classmethod
  def from_automaton(
    cls,
    a: Automaton,
    *,
    state_map: Mapping[str, Similitude] | None = None,
    description: str | None = None,
  ) -> "AutomatonModel":
    """Serialize an automaton, grouping parallel edges."""
    grouped: dict[tuple[str, str], list[list[int]]] = {}
    for edge in a.edges:
      grouped.setdefault((edge.source, edge.target), []).append(
        list(edge.label)
      )
    maps = None
    field_n = None
    if state_map:
      maps = {
        name: SimilitudeModel(**f.to_json()) for name, f in state_map.items()
      }
      field_n = next(iter(state_map.values())).n
    return cls(
      m=a.m,
      states=list(a.states),
      initial=a.initial,
      inverse=dict(sorted(a.inverse.items())),
      edges=[
        EdgeModel(from_=s, to=t, labels=sorted(labels))
        for (s, t), labels in sorted(grouped.items())
      ],
      description=description,
      field_n=field_n,
      state_map=maps,
    )

  def to_automaton(self) -> Automaton:
    """Build the automaton, checking its structure."""
    return Automaton.build(
      self.m,
      self.states,
      self.initial,
      self.inverse,
      (
        (edge.from_, tuple(label), edge.to)
        for edge in self.edges
        for label in edge.labels
      ),
    )

  def to_state_map(self) -> dict[str, Similitude]:
    """The embedded maps, if any."""
    if self.state_map is None or self.field_n is None:
      return {}
    return {
      name: Similitude.from_json(f.model_dump(), self.field_n)
      for name, f in self.state_map.items()
    }


class IfsModel(_Model):
  """IFS JSON over one quadratic field."""

  field_n: int = Field(alias="field_N")
  maps: list[SimilitudeModel]
  description: str | None = None

  @classmethod
  def from_ifs(cls, ifs: Ifs, description: str | None = None) -> "IfsModel":
    """Serialize an IFS."""
    return cls(
      field_n=ifs.field_n,
      maps=[SimilitudeModel(**f.to_json()) for f in ifs.maps],
      description=description,
    )

  def to_ifs(self) -> Ifs:
    """Build the IFS, checking field and ratios."""
    return Ifs.from_json(
      {"field_N": self.field_n, "maps": [f.model_dump() for f in self.maps]}
    )


class TupleStateModel(_Model):
  """A pair-state matrix with its annotation."""

  name: str
  entries: list[str]
  complete: bool | None = None
  tree: list[tuple[int, int, str]]


class TupleEdgeModel(_Model):
  """Edges between two tuple states sharing one coordinate map."""

  from_: str = Field(alias="from")
  to: str
  perm: list[int]
  labels: list[list[int]]


class TupleAutomatonModel(_Model):
  """Tuple automaton JSON."""

  arity: int
  states: list[TupleStateModel]
  initial: str | None
  edges: list[TupleEdgeModel]

  @classmethod
  def from_tuple_automaton(cls, t: TupleAutomaton) -> "TupleAutomatonModel":
    """Serialize a tuple automaton."""
    grouped: dict[tuple[str, str, tuple[int, ...]], list[list[int]]] = {}
    for edge in t.edges:
      key = (t.state_name(edge.source), t.state_name(edge.target), edge.perm)
      grouped.setdefault(key, []).append(list(edge.label))
    return cls(
      arity=t.arity,
      states=[
        TupleStateModel(
          name=t.state_name(s),
          entries=list(s),
          complete=t.is_complete(s) if t.annotated else None,
          tree=t.coupling_tree(s),
        )
        for s in t.states
      ],
      initial=None if t.initial is None else t.state_name(t.initial),
      edges=[
        TupleEdgeModel(from_=s, to=d, perm=list(p), labels=sorted(labels))
        for (s, d, p), labels in sorted(grouped.items())
      ],
    )

  def to_tuple_automaton(self, g2: Automaton) -> TupleAutomaton:
    """Rebuild the tuple automaton over its underlying automaton."""
    by_name = {s.name: tuple(s.entries) for s in self.states}
    annotated = any(s.complete is not None for s in self.states)
    try:
      edges = tuple(
        TupleEdge(by_name[e.from_], tuple(label), by_name[e.to], tuple(e.perm))
        for e in self.edges
        for label in e.labels
      )
      initial = None if self.initial is None else by_name[self.initial]
    except KeyError as e:
      raise StructuralError(f"Unknown tuple state {e}") from e
    return TupleAutomaton(
      self.arity,
      tuple(sorted(by_name.values())),
      initial,
      tuple(sorted(edges)),
      g2,
      complete=frozenset(by_name[s.name] for s in self.states if s.complete),
      annotated=annotated,
    )


class PointModel(_Model):
  """A point with its word-set and minimal neighborhood."""

  id: str
  kind: str
  words: list[str]
  arity: int
  nbhd: list[str]


class FiniteSpaceModel(_Model):
  """Finite space JSON."""

  level: int
  m: int
  points: list[PointModel]

  @classmethod
  def from_space(cls, space: FiniteSpace) -> "FiniteSpaceModel":
    """Serialize a finite space."""
    return cls(
      level=space.level,
      m=space.m,
      points=[
        PointModel(
          id=str(p),
          kind=p.kind,
          words=[word_text(w) for w in p.words],
          arity=p.arity,
          nbhd=[str(q) for q in sorted(space.nbhd[p])],
        )
        for p in space.points
      ],
    )

  def to_space(self) -> FiniteSpace:
    """Rebuild the finite space."""
    points = {
      model.id: Point(tuple(parse_word(w) for w in model.words))
      for model in self.points
    }
    try:
      nbhd = {
        points[model.id]: frozenset(points[q] for q in model.nbhd)
        for model in self.points
      }
    except KeyError as e:
      raise StructuralError(f"Unknown point {e}") from e
    return FiniteSpace(self.level, self.m, tuple(points.values()), nbhd)


class EquivalenceClassModel(_Model):
  """Equivalence class JSON."""

  input: str
  members: list[str]
  size: int

  @classmethod
  def from_class(cls, found: EquivalenceClass) -> "EquivalenceClassModel":
    """Serialize a class."""
    return cls(
      input=str(found.input),
      members=[str(s) for s in found.members],
      size=found.size,
    )


class DiagonalStructureModel(_Model):
  """Diagonal structure JSON; `d` lists (state, digit, target)."""

  v0: list[str] = Field(alias="V0")
  d: list[tuple[str, int, str]]
  equations: list[str]

  @classmethod
  def from_structure(
    cls, structure: DiagonalStructure
  ) -> "DiagonalStructureModel":
    """Serialize a diagonal structure."""
    return cls(
      v0=list(structure.v0),
      d=[(s, i, t) for (s, i), t in sorted(structure.d.items())],
      equations=list(structure.equations),
    )


class ViolationModel(_Model):
  """One axiom violation."""

  axiom: str
  witness: str
  message: str


class ValidationReportModel(_Model):
  """Validation report JSON."""

  ok: bool
  weak_axiom4: bool = Field(alias="weak-axiom-4")
  violations: list[ViolationModel]

  @classmethod
  def from_report(cls, report: ValidationReport) -> "ValidationReportModel":
    """Serialize a report."""
    return cls(
      ok=report.ok,
      weak_axiom4=report.weak_axiom4,
      violations=[
        ViolationModel(axiom=v.axiom, witness=v.witness, message=v.message)
        for v in report.violations
      ],
    )


class KuratowskiWitnessModel(_Model):
  """Branch points and arcs in the text form of `parse_point`."""

  vertices: list[str]
  arcs: list[list[str]]


def parse_model(model: type[ModelT], text: str) -> ModelT:
  """Parse JSON text into a model.

  Raises:
      StructuralError: If the text is not valid JSON for the model.

  """
  try:
    return model.model_validate_json(text)
  except ValidationError as e:
    raise StructuralError(
      f"Invalid {model.__name__}: {e.error_count()} problem(s); "
      f"{e.errors()[0]['msg']}"
    ) from e


def dump(model: BaseModel) -> dict[str, Any]:
  """JSON-ready dictionary with aliases and without unset optionals."""
  return model.model_dump(mode="json", by_alias=True, exclude_none=True)


def to_json(model: BaseModel) -> str:
  """Stable JSON text of a model."""
  return json.dumps(dump(model), indent=2, ensure_ascii=False) + "\n"


