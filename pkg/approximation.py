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

"""Finite topological approximations of the generated space."""

from collections.abc import Iterable, Sequence
import dataclasses
import functools
import itertools
import logging

import networkx as nx

from address import Word, parse_word, word_text
from automaton import Automaton
from errors import GuardExceeded, UsageError
from multi_address import Family, TupleAutomaton

DEFAULT_POINT_GUARD = 1_000_000
# Placeholder for "every digit" in the text form of witness points.
WILDCARD = "Y"


@functools.total_ordering
@dataclasses.dataclass(frozen=True)
class Point:
  """A point of a finite space: one word, or an atom with its word-set."""

  words: tuple[Word, ...]

  @classmethod
  def word(cls, word: Sequence[int]) -> "Point":
    """The open point of a single word."""
    return cls((tuple(word),))

  @classmethod
  def atom(cls, words: Iterable[Sequence[int]]) -> "Point":
    """The point of a word-set with at least two words."""
    return cls(tuple(sorted({tuple(w) for w in words})))

  @property
  def is_word(self) -> bool:
    """True for the points of Dⁿ."""
    return len(self.words) == 1

  @property
  def kind(self) -> str:
    """Either "word" or "atom"."""
    return "word" if self.is_word else "atom"

  @property
  def arity(self) -> int:
    """Size of the word-set."""
    return len(self.words)

  def __lt__(self, other: "Point") -> bool:
    """Words first, then atoms by size and words."""
    return (self.arity, self.words) < (other.arity, other.words)

  def __str__(self) -> str:
    """Text form: "01" for a word, "{01,10}" for an atom."""
    if self.is_word:
      return word_text(self.words[0])
    return "{" + ",".join(word_text(w) for w in self.words) + "}"


@dataclasses.dataclass(frozen=True)
class FiniteSpace:
  """Level-n approximation: points with their minimal open neighborhoods."""

  level: int
  m: int
  points: tuple[Point, ...]
  nbhd: dict[Point, frozenset[Point]]

  @functools.cached_property
  def atoms(self) -> tuple[Point, ...]:
    """The non-word points."""
    return tuple(p for p in self.points if not p.is_word)

  def __contains__(self, point: Point) -> bool:
    """Membership test."""
    return point in self.nbhd

  @functools.cached_property
  def comparability(self) -> nx.Graph:
    """Graph joining x and y when one lies in the other's neighborhood."""
    graph = nx.Graph()
    graph.add_nodes_from(self.points)
    for point, hood in self.nbhd.items():
      graph.add_edges_from((point, other) for other in hood if other != point)
    return graph

  def comparable(self, x: Point, y: Point) -> bool:
    """True when x ∈ U_y or y ∈ U_x."""
    return x in self.nbhd[y] or y in self.nbhd[x]


def _check_level(m: int, n: int, guard: int) -> None:
  if n < 1:
    raise UsageError(f"Level must be at least 1, got {n}")
  size = m**n
  if size > guard:
    raise GuardExceeded(
      f"Level {n} has {size} words", estimate=size, guard=guard
    )


def _run_word_sets(t: TupleAutomaton, n: int) -> set[frozenset[Word]]:
  """Word-sets of the length-n runs of a tuple automaton."""
  start = tuple(() for _ in range(t.arity))
  frontier = {(t.initial, start)}
  for _ in range(n):
    following = set()
    for state, words in frontier:
      for edge in t.out_edges[state]:
        extended = [w + (edge.label[a],) for a, w in enumerate(words)]
        moved = tuple(extended[edge.perm[p]] for p in range(t.arity))
        following.add((edge.target, moved))
    frontier = following
  return {frozenset(words) for _, words in frontier}


def build_space(
  family: Family, n: int, *, point_guard: int = DEFAULT_POINT_GUARD
) -> FiniteSpace:
  """The level-n approximation Xⁿ of a multiple-address family.

  Atoms are the word-sets of length-n runs of the automata whose arity
  occurs in the family, keyed by word-set. Runs whose coordinates share a
  length-n prefix give smaller word-sets; the arity of an atom is the size
  of its word-set.

  Args:
      family: Output of `compute_family`.
      n: The level.
      point_guard: Largest number of words accepted.

  Returns:
      The finite space.

  Raises:
      GuardExceeded: If mⁿ exceeds the guard.

  """
  m = family.m
  _check_level(m, n, point_guard)
  automata = [family.automata[k] for k in family.arities]
  words = [Point.word(w) for w in itertools.product(range(m), repeat=n)]
  word_sets: set[frozenset[Word]] = set()
  for t in automata:
    if not t.is_empty:
      word_sets |= {w for w in _run_word_sets(t, n) if len(w) >= 2}
  atoms = sorted(Point.atom(w) for w in word_sets)
  nbhd: dict[Point, frozenset[Point]] = {p: frozenset({p}) for p in words}
  by_size = sorted(atoms, key=lambda p: p.arity)
  for y in atoms:
    members = set(y.words)
    hood = {y, *(Point.word(w) for w in members)}
    hood.update(
      z
      for z in by_size
      if z.arity < y.arity and members.issuperset(z.words)
    )
    nbhd[y] = frozenset(hood)
  logging.info(
    "Level %d space: %d words, %d atoms", n, len(words), len(atoms)
  )
  return FiniteSpace(n, m, tuple(words + atoms), nbhd)


def truncate(point: Point, n: int) -> Point:
  """Image of a point under prefix truncation to level n."""
  prefixes = {w[:n] for w in point.words}
  if len(prefixes) == 1:
    return Point.word(prefixes.pop())
  return Point.atom(prefixes)


@dataclasses.dataclass(frozen=True)
class Projection:
  """The map π from level n+1 to level n."""

  source_level: int
  target_level: int
  mapping: dict[Point, Point]
  continuous: bool

  def __call__(self, point: Point) -> Point:
    """Image of a point."""
    return self.mapping[point]


def project(upper: FiniteSpace, lower: FiniteSpace) -> Projection:
  """Natural projection between consecutive levels, checked for continuity.

  Raises:
      UsageError: If the levels are not consecutive or an image is missing
        from the lower space.

  """
  if upper.m != lower.m or upper.level != lower.level + 1:
    raise UsageError(
      f"Cannot project level {upper.level} onto level {lower.level}"
    )
  mapping = {}
  for point in upper.points:
    image = truncate(point, lower.level)
    if image not in lower:
      raise UsageError(
        f"Image {image} of {point} is missing at level {lower.level}"
      )
    mapping[point] = image
  continuous = all(
    {mapping[q] for q in upper.nbhd[p]} <= lower.nbhd[mapping[p]]
    for p in upper.points
  )
  return Projection(upper.level, lower.level, mapping, continuous)


def connectedness(space: FiniteSpace) -> list[list[Point]]:
  """Connected components, each sorted, in order of their least point."""
  graph = space.comparability
  return sorted(sorted(c) for c in nx.connected_components(graph))


def cut_point_evidence(space: FiniteSpace, point: Point) -> bool:
  """True when removing the atom splits its component at this level."""
  if point not in space or point.is_word:
    raise UsageError(f"{point} is not an atom of level {space.level}")
  graph = space.comparability
  before = nx.number_connected_components(graph)
  rest = graph.subgraph(p for p in graph if p != point)
  return nx.number_connected_components(rest) > before


@dataclasses.dataclass(frozen=True)
class KuratowskiVerdict:
  """Outcome of `verify_kuratowski_witness`."""

  ok: bool
  pattern: str = ""
  failure: str = ""


def parse_point(space: FiniteSpace, text: str) -> Point:
  """Parse a word such as "0121" or an atom pattern such as "01Y1".

  The wildcard stands for every digit, so "01Y1" is the atom
  {0101, 0111, 0121} in a three-digit space.
  """
  if WILDCARD not in text:
    return Point.word(parse_word(text))
  head, _, tail = text.partition(WILDCARD)
  return Point.atom(
    parse_word(head) + (d,) + parse_word(tail) for d in range(space.m)
  )


def verify_kuratowski_witness(
  space: FiniteSpace,
  vertices: Sequence[Point],
  arcs: Sequence[Sequence[Point]],
) -> KuratowskiVerdict:
  """Check a discrete K₅ or K₃,₃ made of arcs in a finite space.

  Args:
      space: The level-n space.
      vertices: Five or six branch points.
      arcs: Point sequences, each joining two branch points.

  Returns:
      The verdict; on failure `failure` names the arc and the condition.

  """
  if len(vertices) not in (5, 6) or len(set(vertices)) != len(vertices):
    return KuratowskiVerdict(False, failure="Need 5 or 6 distinct vertices")
  branch = set(vertices)
  for point in itertools.chain(vertices, *arcs):
    if point not in space:
      return KuratowskiVerdict(False, failure=f"{point} is not in the space")
  used: dict[Point, int] = {}
  pattern = nx.Graph()
  pattern.add_nodes_from(vertices)
  for index, arc in enumerate(arcs):
    if len(arc) < 2 or arc[0] not in branch or arc[-1] not in branch:
      return KuratowskiVerdict(
        False, failure=f"Arc {index} does not join two vertices"
      )
    if arc[0] == arc[-1] or pattern.has_edge(arc[0], arc[-1]):
      return KuratowskiVerdict(
        False, failure=f"Arc {index} repeats or closes a vertex pair"
      )
    for x, y in itertools.pairwise(arc):
      if not space.comparable(x, y):
        return KuratowskiVerdict(
          False, failure=f"Arc {index}: {x} and {y} are not comparable"
        )
    if not any(p.is_word for p in arc):
      return KuratowskiVerdict(
        False, failure=f"Arc {index} contains no word point"
      )
    for point in arc[1:-1]:
      if point in branch or point in used:
        return KuratowskiVerdict(
          False, failure=f"Arc {index} meets another arc at {point}"
        )
      used[point] = index
    pattern.add_edge(arc[0], arc[-1])
  if len(vertices) == 5 and nx.is_isomorphic(pattern, nx.complete_graph(5)):
    return KuratowskiVerdict(True, "K5")
  if len(vertices) == 6 and nx.is_isomorphic(
    pattern, nx.complete_bipartite_graph(3, 3)
  ):
    return KuratowskiVerdict(True, "K3,3")
  return KuratowskiVerdict(
    False, failure="Arcs do not form the pattern K5 or K3,3"
  )


def _accepted_pairs(a: Automaton, n: int) -> Iterable[tuple[Word, Word]]:
  stack: list[tuple[str, Word, Word]] = [(a.initial, (), ())]
  while stack:
    state, u, v = stack.pop()
    if len(u) == n:
      yield u, v
      continue
    for edge in a.out_edges[state]:
      i, j = edge.label
      stack.append((edge.target, u + (i,), v + (j,)))


def word_graph(
  a: Automaton, n: int, *, point_guard: int = DEFAULT_POINT_GUARD
) -> nx.Graph:
  """Graph on Dⁿ joining u ≠ v when the pair (u, v) is accepted."""
  _check_level(a.m, n, point_guard)
  graph = nx.Graph()
  graph.add_nodes_from(itertools.product(range(a.m), repeat=n))
  graph.add_edges_from((u, v) for u, v in _accepted_pairs(a, n) if u != v)
  return graph


def level_components(a: Automaton, n: int) -> list[list[Word]]:
  """Components of the level-n word graph."""
  return sorted(sorted(c) for c in nx.connected_components(word_graph(a, n)))


@dataclasses.dataclass(frozen=True)
class LevelStatistics:
  """Word counts of the components of one level."""

  level: int
  sizes: tuple[int, ...]

  @property
  def largest(self) -> int:
    """Size of the largest component."""
    return self.sizes[0] if self.sizes else 0


def component_size_probe(family: Family, n: int) -> list[LevelStatistics]:
  """Component sizes, counted in words, for the levels 1..n.

  Bounded sizes hint at total disconnectedness and growing ones at
  connected pieces; neither is a proof.
  """
  statistics = []
  for level in range(1, n + 1):
    space = build_space(family, level)
    sizes = sorted(
      (sum(1 for p in c if p.is_word) for c in connectedness(space)),
      reverse=True,
    )
    statistics.append(LevelStatistics(level, tuple(sizes)))
  return statistics
