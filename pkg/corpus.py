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

"""Named example automata and the IFS data they come from."""

from collections import deque
from collections.abc import Callable, Iterable
import dataclasses
from fractions import Fraction
import functools
import itertools
import logging
from pathlib import Path

from automaton import Automaton, product
from errors import StructuralError, UsageError
from exact_geometry import (
  ExactComplex,
  Ifs,
  Similitude,
  linear_ifs,
  neighbor_graph,
)
from schemas import AutomatonModel, parse_model

DEFAULT_CORPUS_DIR = Path(__file__).parent / "test_data" / "corpus"


@dataclasses.dataclass(frozen=True)
class Fixture:
  """A corpus entry.

  Stored fixtures are read from `<name>.json` in the corpus directory;
  generated ones are built by `build`.
  """

  name: str
  description: str
  build: Callable[[], Automaton] | None = None
  ifs: Callable[[], Ifs] | None = None


def _number(x, y=0, n: int = 1) -> ExactComplex:
  return ExactComplex.of(x, y, n)


def binary_ifs() -> Ifs:
  """z/2 and (z+1)/2."""
  return linear_ifs(_number(2), [_number(0), _number(1)])


def base_neg2_ifs() -> Ifs:
  """-z/2 and (-z+1)/2."""
  half = _number(Fraction(-1, 2))
  return Ifs(
    1,
    (
      Similitude(half, _number(0)),
      Similitude(half, _number(Fraction(1, 2))),
    ),
  )


def tent_ifs() -> Ifs:
  """z/2 and (-z+1)/2."""
  half = Fraction(1, 2)
  return Ifs(
    1,
    (
      Similitude(_number(half), _number(0)),
      Similitude(_number(-half), _number(half)),
    ),
  )


def grid_ifs(k: int, removed: Iterable[tuple[int, int]] = ()) -> Ifs:
  """Maps (z + x + y·i)/k over Q(i); digit x + k·y unless removed.

  Digits are numbered among the kept cells, so the full 2×2 grid matches
  `product(binary, binary)`.
  """
  if k < 2:
    raise UsageError(f"Grid size must be at least 2, got {k}")
  skip = set(removed)
  cells = [
    (x, y) for y in range(k) for x in range(k) if (x, y) not in skip
  ]
  return linear_ifs(_number(k), [_number(x, y) for x, y in cells])


def number_system_ifs(base: int) -> Ifs:
  """Maps (z + d)/base for d = 0..|base|-1."""
  if abs(base) < 2:
    raise UsageError(f"Base must satisfy |base| >= 2, got {base}")
  return linear_ifs(_number(base), [_number(d) for d in range(abs(base))])


def _omega() -> ExactComplex:
  return _number(Fraction(1, 2), Fraction(1, 2), 3)


def gasket_ifs() -> Ifs:
  """(z + p)/2 for the corners 0, 1 and ω of the Sierpiński triangle."""
  corners = [_number(0, 0, 3), _number(1, 0, 3), _omega()]
  return linear_ifs(_number(2, 0, 3), corners)


def fractal_square_ifs() -> Ifs:
  """3×3 grid without the centre cell and the cell (0,2)."""
  return grid_ifs(3, removed=[(1, 1), (0, 2)])


def fractal_triangle_ifs() -> Ifs:
  """Six upright triangles of side 1/3 and the inverted centre one."""
  omega = _omega()
  three = _number(3, 0, 3)
  maps = [
    Similitude(1 / three, (_number(c, 0, 3) + omega * r) / three)
    for r in range(3)
    for c in range(3 - r)
  ]
  maps.append(Similitude(-(1 / three), (1 + omega * 2) / three))
  return Ifs(3, tuple(maps))


def triangle_generators() -> tuple[
  Similitude, Similitude, Similitude, Similitude
]:
  """Reflections a, b, c and the expansion g of the triangle tiling."""
  w = _number(0, 1, 3)
  g = Similitude((w - 3) / 2, (w + 3) / 2)
  c = Similitude((1 - w) / 2, (1 + w) / 2, True)
  a = Similitude((1 + w) / 2, (w - 1) / 2, True)
  b = Similitude(-((1 + w) / 2), (w + 3) / 2, True)
  return a, b, c, g


def triangle_ifs() -> Ifs:
  """g⁻¹c, g⁻¹ and g⁻¹a."""
  a, _, c, g = triangle_generators()
  shrink = g.inverse()
  return Ifs(3, (shrink @ c, shrink, shrink @ a))


def dog_carpet_ifs() -> Ifs:
  """Five maps h_k/λ over Q(√-15) with λ = (3+√-15)/2."""
  w = _number(0, 1, 15)
  one = _number(1, 0, 15)
  a = (one + w) / 4
  abar = a.conj()
  shrink = Similitude(1 / ((w + 3) / 2), _number(0, 0, 15))
  pieces = [
    Similitude(a, one),
    Similitude(a, -one),
    Similitude.identity(15),
    Similitude(abar, -abar),
    Similitude(-abar, -abar),
  ]
  return Ifs(15, tuple(shrink @ h for h in pieces))


def gasket_automaton(n: int) -> Automaton:
  """Sierpiński simplex of dimension n: digits 0..n, states ij for i ≠ j."""
  if n < 1:
    raise UsageError(f"Simplex dimension must be positive, got {n}")
  digits = range(n + 1)
  pairs = list(itertools.permutations(digits, 2))
  names = {pair: f"{pair[0]}{pair[1]}" for pair in pairs}
  edges = [("o", (i, i), "o") for i in digits]
  for i, j in pairs:
    edges.append(("o", (i, j), names[(i, j)]))
    edges.append((names[(i, j)], (j, i), names[(i, j)]))
  inverse = {"o": "o"} | {names[(i, j)]: names[(j, i)] for i, j in pairs}
  return Automaton.build(n + 1, ["o", *names.values()], "o", inverse, edges)


def grid_automaton(k: int) -> Automaton:
  """Neighbor automaton of the k×k square."""
  return neighbor_graph(grid_ifs(k)).automaton


def number_system_automaton(base: int) -> Automaton:
  """Neighbor automaton of the interval in an integer base."""
  return neighbor_graph(number_system_ifs(base)).automaton


def _stored(
  name: str, corpus_dir: Path | str | None = None
) -> AutomatonModel:
  path = Path(corpus_dir or DEFAULT_CORPUS_DIR) / f"{name}.json"
  if not path.exists():
    raise StructuralError(f"Corpus file {path} not found")
  return parse_model(AutomatonModel, path.read_text())


def _square() -> Automaton:
  binary = _stored("binary").to_automaton()
  return product(binary, binary)


def _cube() -> Automaton:
  return product(_square(), _stored("binary").to_automaton())


FIXTURES: dict[str, Fixture] = {
  f.name: f
  for f in [
    Fixture("binary", "Interval as two halves", ifs=binary_ifs),
    Fixture("base_neg2", "Interval in base -2", ifs=base_neg2_ifs),
    Fixture("tent", "Interval with a reflected half", ifs=tent_ifs),
    Fixture("disconnected", "Binary interval plus an isolated piece"),
    Fixture("hata_incomplete", "Hata tree, branch point not closed"),
    Fixture("hata_complete", "Hata tree, branch point closed"),
    Fixture("exotic", "Three pieces meeting in a triple point; not planar"),
    Fixture("weak_axiom4", "Interval with a relaxed diagonal"),
    Fixture(
      "gasket",
      "Sierpiński triangle",
      build=functools.partial(gasket_automaton, 2),
      ifs=gasket_ifs,
    ),
    Fixture(
      "tetrahedron",
      "Sierpiński tetrahedron, automaton only",
      build=functools.partial(gasket_automaton, 3),
    ),
    Fixture(
      "square_complete",
      "Square as the product of two intervals",
      build=_square,
      ifs=functools.partial(grid_ifs, 2),
    ),
    Fixture("square_incomplete", "Square with edge neighbors only"),
    Fixture(
      "fractal_square",
      "3×3 grid with two cells removed",
      build=lambda: neighbor_graph(fractal_square_ifs()).automaton,
      ifs=fractal_square_ifs,
    ),
    Fixture(
      "fractal_triangle",
      "Triangle of seven pieces, one inverted; not p.c.f.",
      build=lambda: neighbor_graph(fractal_triangle_ifs()).automaton,
      ifs=fractal_triangle_ifs,
    ),
    Fixture(
      "triangle",
      "Triangle tiling with reflections as neighbor maps",
      ifs=triangle_ifs,
    ),
    Fixture(
      "dog_carpet",
      "Five pieces over Q(√-15), drawn neighbor states",
      ifs=dog_carpet_ifs,
    ),
    Fixture("cube", "Cube as square times interval", build=_cube),
    Fixture(
      "grid3",
      "Square as a 3×3 grid",
      build=functools.partial(grid_automaton, 3),
      ifs=functools.partial(grid_ifs, 3),
    ),
    Fixture(
      "base3",
      "Interval in base 3",
      build=functools.partial(number_system_automaton, 3),
      ifs=functools.partial(number_system_ifs, 3),
    ),
    Fixture(
      "base_neg3",
      "Interval in base -3",
      build=functools.partial(number_system_automaton, -3),
      ifs=functools.partial(number_system_ifs, -3),
    ),
  ]
}


def fixture(name: str) -> Fixture:
  """Look up a fixture by name.

  Raises:
      UsageError: If there is no such fixture.

  """
  try:
    return FIXTURES[name]
  except KeyError:
    raise UsageError(
      f"Unknown corpus fixture {name!r}; known: {', '.join(FIXTURES)}"
    ) from None


def derive_state_map(a: Automaton, ifs: Ifs) -> dict[str, Similitude]:
  """Maps along the first path reaching each state, h' = f_i⁻¹ ∘ h ∘ f_j.

  The result is a representation only if `verify_representation` agrees.
  """
  if a.m != ifs.m:
    raise UsageError(f"Automaton has {a.m} digits, IFS has {ifs.m} maps")
  maps = {a.initial: Similitude.identity(ifs.field_n)}
  queue = deque([a.initial])
  while queue:
    state = queue.popleft()
    for edge in a.out_edges[state]:
      if edge.target in maps:
        continue
      i, j = edge.label
      maps[edge.target] = ifs.inverses[i] @ maps[state] @ ifs.maps[j]
      queue.append(edge.target)
  return maps


def load_model(
  name: str, corpus_dir: Path | str | None = None
) -> AutomatonModel:
  """The fixture in its JSON model, with maps when an IFS is known."""
  entry = fixture(name)
  if entry.build is None:
    model = _stored(name, corpus_dir)
  else:
    model = AutomatonModel.from_automaton(
      entry.build(), description=entry.description
    )
  if entry.ifs is not None:
    a = model.to_automaton()
    maps = derive_state_map(a, entry.ifs())
    model = AutomatonModel.from_automaton(
      a, state_map=maps, description=model.description
    )
  logging.debug("Loaded corpus fixture %s", name)
  return model


def load_automaton(
  name: str, corpus_dir: Path | str | None = None
) -> Automaton:
  """The automaton of a fixture."""
  return load_model(name, corpus_dir).to_automaton()


def load_ifs(name: str) -> Ifs:
  """The IFS of a fixture.

  Raises:
      UsageError: If the fixture has no planar IFS.

  """
  entry = fixture(name)
  if entry.ifs is None:
    raise UsageError(f"Corpus fixture {name!r} has no IFS")
  return entry.ifs()


def uses_weak_axiom4(name: str, corpus_dir: Path | str | None = None) -> bool:
  """True for fixtures stored with the relaxed diagonal flag."""
  return bool(load_model(name, corpus_dir).weak_axiom4)


def listing() -> list[tuple[str, str]]:
  """(name, description) for every fixture, IFS fixtures marked."""
  return [
    (name, f.description + (" [ifs]" if f.ifs else ""))
    for name, f in FIXTURES.items()
  ]
