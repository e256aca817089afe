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

"""Exact similitudes over imaginary quadratic fields and neighbor graphs."""

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
import dataclasses
from fractions import Fraction
import functools
import itertools
import logging
import math

from automaton import Automaton, Edge
from errors import NotFiniteType, UsageError

DEFAULT_STATE_GUARD = 10_000
# Relative slack on the float comparison against the pruning radius.
_PRUNE_SLACK = 1e-9

Rational = Fraction | int | str


@dataclasses.dataclass(frozen=True)
class ExactComplex:
  """The number x + y·√N·i with rational x, y in the field Q(√-N)."""

  x: Fraction
  y: Fraction
  n: int

  def __post_init__(self) -> None:
    """Normalize the coordinates to Fractions."""
    if self.n < 1:
      raise UsageError(f"Field parameter must be positive, got {self.n}")
    object.__setattr__(self, "x", Fraction(self.x))
    object.__setattr__(self, "y", Fraction(self.y))

  @classmethod
  def of(cls, x: Rational, y: Rational = 0, n: int = 1) -> "ExactComplex":
    """Build a number from rationals given as ints, Fractions or strings."""
    return cls(Fraction(x), Fraction(y), n)

  @classmethod
  def from_json(cls, data: Sequence[int], n: int) -> "ExactComplex":
    """Parse [xn, xd, yn, yd]."""
    if len(data) != 4:
      raise UsageError(f"Expected [xn, xd, yn, yd], got {data!r}")
    xn, xd, yn, yd = data
    return cls(Fraction(xn, xd), Fraction(yn, yd), n)

  def to_json(self) -> list[int]:
    """Serialize as [xn, xd, yn, yd]."""
    return [
      self.x.numerator,
      self.x.denominator,
      self.y.numerator,
      self.y.denominator,
    ]

  def _check(self, other: "ExactComplex") -> None:
    if self.n != other.n:
      raise UsageError(f"Mixed fields Q(√-{self.n}) and Q(√-{other.n})")

  def _coerce(self, other) -> "ExactComplex":
    if isinstance(other, ExactComplex):
      self._check(other)
      return other
    return ExactComplex(Fraction(other), Fraction(0), self.n)

  def __add__(self, other) -> "ExactComplex":
    """Sum."""
    other = self._coerce(other)
    return ExactComplex(self.x + other.x, self.y + other.y, self.n)

  __radd__ = __add__

  def __sub__(self, other) -> "ExactComplex":
    """Difference."""
    other = self._coerce(other)
    return ExactComplex(self.x - other.x, self.y - other.y, self.n)

  def __rsub__(self, other) -> "ExactComplex":
    """Reflected difference."""
    return self._coerce(other) - self

  def __mul__(self, other) -> "ExactComplex":
    """Product; (√-N)² = -N."""
    other = self._coerce(other)
    return ExactComplex(
      self.x * other.x - self.n * self.y * other.y,
      self.x * other.y + self.y * other.x,
      self.n,
    )

  __rmul__ = __mul__

  def __truediv__(self, other) -> "ExactComplex":
    """Quotient."""
    other = self._coerce(other)
    norm = other.norm_sq()
    if norm == 0:
      raise ZeroDivisionError("Division by zero in quadratic field")
    numerator = self * other.conj()
    return ExactComplex(numerator.x / norm, numerator.y / norm, self.n)

  def __rtruediv__(self, other) -> "ExactComplex":
    """Reflected quotient."""
    return self._coerce(other) / self

  def __neg__(self) -> "ExactComplex":
    """Negation."""
    return ExactComplex(-self.x, -self.y, self.n)

  def __pow__(self, exponent: int) -> "ExactComplex":
    """Integer power."""
    result = ExactComplex(Fraction(1), Fraction(0), self.n)
    base = self if exponent >= 0 else 1 / self
    for _ in range(abs(exponent)):
      result = result * base
    return result

  def conj(self) -> "ExactComplex":
    """Complex conjugate."""
    return ExactComplex(self.x, -self.y, self.n)

  def norm_sq(self) -> Fraction:
    """|z|² = x² + N·y², multiplicative."""
    return self.x * self.x + self.n * self.y * self.y

  def is_zero(self) -> bool:
    """True for 0."""
    return self.x == 0 and self.y == 0

  def to_complex(self) -> complex:
    """Floating-point value."""
    return complex(float(self.x), float(self.y) * math.sqrt(self.n))

  def __str__(self) -> str:
    """Readable form such as 1/4+1/4√15i."""
    if self.y == 0:
      return str(self.x)
    sign = "+" if self.y > 0 else "-"
    return f"{self.x}{sign}{abs(self.y)}√{self.n}i"


@dataclasses.dataclass(frozen=True)
class Similitude:
  """The map z ↦ α·z + β, or z ↦ α·conj(z) + β when `conj` is set."""

  alpha: ExactComplex
  beta: ExactComplex
  conj: bool = False

  def __post_init__(self) -> None:
    """Check the invariants α ≠ 0 and a common field."""
    self.alpha._check(self.beta)
    if self.alpha.is_zero():
      raise UsageError("Similitude with zero scale")

  @classmethod
  def identity(cls, n: int) -> "Similitude":
    """The identity map over Q(√-n)."""
    return cls(ExactComplex.of(1, 0, n), ExactComplex.of(0, 0, n))

  @property
  def n(self) -> int:
    """Field parameter N."""
    return self.alpha.n

  def __call__(self, z: ExactComplex) -> ExactComplex:
    """Apply the map to a field element."""
    return self.alpha * (z.conj() if self.conj else z) + self.beta

  def compose(self, other: "Similitude") -> "Similitude":
    """Return self ∘ other."""
    self.alpha._check(other.alpha)
    alpha = other.alpha.conj() if self.conj else other.alpha
    beta = other.beta.conj() if self.conj else other.beta
    return Similitude(
      self.alpha * alpha, self.alpha * beta + self.beta, self.conj != other.conj
    )

  def __matmul__(self, other: "Similitude") -> "Similitude":
    """Composition operator: (f @ g)(z) = f(g(z))."""
    return self.compose(other)

  def inverse(self) -> "Similitude":
    """Inverse map; (αz+β)⁻¹ = z/α - β/α."""
    if self.conj:
      scale = 1 / self.alpha.conj()
      return Similitude(scale, -(self.beta.conj() * scale), True)
    scale = 1 / self.alpha
    return Similitude(scale, -(self.beta * scale), False)

  def ratio_sq(self) -> Fraction:
    """Squared similarity ratio |α|²."""
    return self.alpha.norm_sq()

  def is_identity(self) -> bool:
    """True for z ↦ z."""
    return (
      not self.conj
      and self.alpha.x == 1
      and self.alpha.y == 0
      and self.beta.is_zero()
    )

  def to_json(self) -> dict:
    """Serialize as {"alpha": [...], "beta": [...], "conj": bool}."""
    return {
      "alpha": self.alpha.to_json(),
      "beta": self.beta.to_json(),
      "conj": self.conj,
    }

  @classmethod
  def from_json(cls, data: Mapping, n: int) -> "Similitude":
    """Parse the JSON produced by `to_json`."""
    return cls(
      ExactComplex.from_json(data["alpha"], n),
      ExactComplex.from_json(data["beta"], n),
      bool(data.get("conj", False)),
    )

  def __str__(self) -> str:
    """Readable form."""
    var = "conj(z)" if self.conj else "z"
    return f"({self.alpha})·{var}+({self.beta})"


@dataclasses.dataclass(frozen=True)
class Ifs:
  """An equal-ratio contracting family of similitudes over one field."""

  field_n: int
  maps: tuple[Similitude, ...]

  def __post_init__(self) -> None:
    """Check the field, the common ratio and contraction."""
    if not self.maps:
      raise UsageError("An IFS needs at least one map")
    for f in self.maps:
      if f.n != self.field_n:
        raise UsageError(
          f"Map {f} is not over Q(√-{self.field_n}) as declared"
        )
    ratios = {f.ratio_sq() for f in self.maps}
    if len(ratios) != 1:
      raise UsageError("IFS maps must share one similarity ratio")
    if ratios.pop() >= 1:
      raise UsageError("IFS maps must be contractions")

  @property
  def m(self) -> int:
    """Number of maps, i.e. digits."""
    return len(self.maps)

  @functools.cached_property
  def inverses(self) -> tuple[Similitude, ...]:
    """f_k⁻¹ for each map."""
    return tuple(f.inverse() for f in self.maps)

  def ratio(self) -> float:
    """Common similarity ratio r."""
    return math.sqrt(float(self.maps[0].ratio_sq()))

  def word_map(self, word: Iterable[int]) -> Similitude:
    """f_u = f_{u1} ∘ ... ∘ f_{un}."""
    result = Similitude.identity(self.field_n)
    for digit in word:
      result = result @ self.maps[digit]
    return result

  def to_json(self) -> dict:
    """Serialize in the IFS JSON format."""
    return {"field_N": self.field_n, "maps": [f.to_json() for f in self.maps]}

  @classmethod
  def from_json(cls, data: Mapping) -> "Ifs":
    """Parse the IFS JSON format."""
    n = int(data["field_N"])
    return cls(n, tuple(Similitude.from_json(f, n) for f in data["maps"]))


def linear_ifs(
  scale: ExactComplex, translations: Iterable[ExactComplex]
) -> Ifs:
  """IFS of the maps z ↦ (z + t) / scale."""
  inv = 1 / scale
  maps = tuple(Similitude(inv, t * inv) for t in translations)
  return Ifs(scale.n, maps)


def attractor_radius(ifs: Ifs) -> float:
  """R = max|f_k(0)| / (1 - r); the attractor lies in the R-ball at 0."""
  largest = max(abs(f.beta.to_complex()) for f in ifs.maps)
  return largest / (1.0 - ifs.ratio())


@dataclasses.dataclass(frozen=True)
class NeighborGraph:
  """Automaton derived from an IFS together with its neighbor maps."""

  automaton: Automaton
  state_map: dict[str, Similitude]
  explored: int


def neighbor_graph(
  ifs: Ifs,
  *,
  prune_bound: float | None = None,
  state_guard: int = DEFAULT_STATE_GUARD,
) -> NeighborGraph:
  """Derive the topology-generating automaton of an IFS.

  Starts from the maps f_i⁻¹ f_j (i ≠ j) and closes under h ↦ f_i⁻¹ ∘ h ∘ f_j,
  discarding maps that move 0 farther than the prune bound. States without
  outgoing edges are then removed repeatedly and the initial state o is
  added with its diagonal loops.

  Args:
      ifs: Equal-ratio contracting IFS.
      prune_bound: Distance bound for |h(0)|; defaults to 2R.
      state_guard: Largest number of explored maps.

  Returns:
      The automaton, named h1, h2, ... in discovery order, and the maps.

  Raises:
      NotFiniteType: If more than `state_guard` maps are explored.

  """
  bound = 2 * attractor_radius(ifs) if prune_bound is None else prune_bound
  limit = bound * bound * (1 + _PRUNE_SLACK)
  origin = ExactComplex.of(0, 0, ifs.field_n)

  def admissible(h: Similitude) -> bool:
    return not h.is_identity() and float(h(origin).norm_sq()) <= limit

  index: dict[Similitude, int] = {}
  maps: list[Similitude] = []
  seeds: list[tuple[tuple[int, int], int]] = []
  queue: deque[int] = deque()

  def intern(h: Similitude) -> int:
    if h not in index:
      if len(maps) >= state_guard:
        raise NotFiniteType(
          f"Neighbor maps exceed the guard of {state_guard}",
          estimate=len(maps) + 1,
          guard=state_guard,
        )
      index[h] = len(maps)
      maps.append(h)
      queue.append(index[h])
    return index[h]

  for i, j in itertools.permutations(range(ifs.m), 2):
    h = ifs.inverses[i] @ ifs.maps[j]
    if admissible(h):
      seeds.append(((i, j), intern(h)))

  transitions: dict[int, list[tuple[tuple[int, int], int]]] = {}
  while queue:
    current = queue.popleft()
    h = maps[current]
    out = []
    for i, j in itertools.product(range(ifs.m), repeat=2):
      successor = ifs.inverses[i] @ h @ ifs.maps[j]
      if admissible(successor):
        out.append(((i, j), intern(successor)))
    transitions[current] = out
  logging.info("Neighbor recursion explored %d maps", len(maps))

  alive = set(transitions)
  changed = True
  while changed:
    changed = False
    for state in list(alive):
      if not any(target in alive for _, target in transitions[state]):
        alive.discard(state)
        changed = True

  reachable: set[int] = set()
  frontier = [t for _, t in seeds if t in alive]
  while frontier:
    state = frontier.pop()
    if state in reachable:
      continue
    reachable.add(state)
    frontier.extend(t for _, t in transitions[state] if t in alive)

  ordered = sorted(reachable)
  names = {state: f"h{rank + 1}" for rank, state in enumerate(ordered)}
  edges = [("o", (i, i), "o") for i in range(ifs.m)]
  edges += [("o", label, names[t]) for label, t in seeds if t in reachable]
  for state in ordered:
    edges += [
      (names[state], label, names[t])
      for label, t in transitions[state]
      if t in reachable
    ]
  inverse = {"o": "o"}
  for state in ordered:
    partner = index.get(maps[state].inverse())
    # Surviving maps have surviving inverses.
    if partner in names:
      inverse[names[state]] = names[partner]
  automaton = Automaton.build(
    ifs.m, ["o", *names.values()], "o", inverse, edges
  )
  state_map = {"o": Similitude.identity(ifs.field_n)}
  state_map.update({names[s]: maps[s] for s in ordered})
  return NeighborGraph(automaton, state_map, len(maps))


@dataclasses.dataclass(frozen=True)
class RepresentationCheck:
  """Verdict of `verify_representation` with the first failing item."""

  ok: bool
  failing_edge: Edge | None = None
  message: str = ""


def verify_representation(
  g: Automaton, ifs: Ifs, state_map: Mapping[str, Similitude]
) -> RepresentationCheck:
  """Check that state_map turns every edge into h' = f_i⁻¹ ∘ h ∘ f_j.

  Args:
      g: The automaton.
      ifs: The IFS with one map per digit.
      state_map: Similitude for every state; o must map to the identity.

  Returns:
      The verdict, carrying the first failing edge when false.

  """
  if g.m != ifs.m:
    raise UsageError(f"Automaton has {g.m} digits, IFS has {ifs.m} maps")
  missing = [s for s in g.states if s not in state_map]
  if missing:
    raise UsageError(f"No map given for states {missing}")
  if not state_map[g.initial].is_identity():
    return RepresentationCheck(False, None, "Initial state must be identity")
  for edge in g.edges:
    i, j = edge.label
    expected = ifs.inverses[i] @ state_map[edge.source] @ ifs.maps[j]
    if expected != state_map[edge.target]:
      return RepresentationCheck(
        False,
        edge,
        f"Edge {edge.source}-({i},{j})->{edge.target}: expected {expected}",
      )
  for state, partner in g.inverse.items():
    if state_map[partner] != state_map[state].inverse():
      return RepresentationCheck(
        False, None, f"Map of {partner} is not the inverse of {state}"
      )
  return RepresentationCheck(True)


@dataclasses.dataclass(frozen=True)
class CoxeterReport:
  """Per-relation verdicts of `coxeter_relation_check`."""

  relations: dict[str, bool]
  faithful: bool

  @property
  def ok(self) -> bool:
    """True when every relation holds and the input is faithful."""
    return self.faithful and all(self.relations.values())


def _power(h: Similitude, k: int) -> Similitude:
  result = Similitude.identity(h.n)
  for _ in range(k):
    result = result @ h
  return result


def coxeter_relation_check(
  a: Similitude, b: Similitude, c: Similitude, g: Similitude
) -> CoxeterReport:
  """Check the reflection-group relations of the 30-60-90 triangle.

  Relations: a² = b² = c² = id, ab = ba, (ac)³ = id, (cb)⁶ = id,
  gcg⁻¹ = b, gag⁻¹ = cbc and gbg⁻¹ = cac = aca. Inputs where a, b and c
  are not pairwise distinct non-identity maps are reported as not
  faithful.
  """
  g_inv = g.inverse()

  def is_id(h: Similitude) -> bool:
    return h.is_identity()

  relations = {
    "a^2=id": is_id(a @ a),
    "b^2=id": is_id(b @ b),
    "c^2=id": is_id(c @ c),
    "ab=ba": a @ b == b @ a,
    "(ac)^3=id": is_id(_power(a @ c, 3)),
    "(cb)^6=id": is_id(_power(c @ b, 6)),
    "gcg^-1=b": g @ c @ g_inv == b,
    "gag^-1=cbc": g @ a @ g_inv == c @ b @ c,
    "gbg^-1=cac": g @ b @ g_inv == c @ a @ c,
    "cac=aca": c @ a @ c == a @ c @ a,
  }
  faithful = (
    not any(is_id(h) for h in (a, b, c)) and len({a, b, c}) == 3
  )
  return CoxeterReport(relations, faithful)


def piece_vertices(
  ifs: Ifs, word: Sequence[int], hull: Sequence[ExactComplex]
) -> list[complex]:
  """Floating-point images of the hull vertices under f_word."""
  f = ifs.word_map(word)
  return [f(p).to_complex() for p in hull]


def pieces_touch(
  ifs: Ifs,
  u: Sequence[int],
  v: Sequence[int],
  hull: Sequence[ExactComplex],
  tolerance: float = 1e-9,
) -> bool:
  """True when the pieces X_u and X_v share a hull vertex.

  Suitable for tilings whose pieces meet only along edges or at corners,
  such as intervals, squares and Sierpiński triangles.
  """
  pu = piece_vertices(ifs, u, hull)
  pv = piece_vertices(ifs, v, hull)
  return any(abs(p - q) <= tolerance for p in pu for q in pv)
