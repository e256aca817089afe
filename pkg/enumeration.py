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

"""Census of small topology-generating automata up to renaming."""

from collections.abc import Iterator, Sequence
import dataclasses
import itertools
import logging
import math

import networkx as nx

from analysis import check_finite_class_necessary_conditions, is_complete
from automaton import Automaton, Label, canonical_form, validate
from errors import GuardExceeded, UsageError

MAX_STATES = 4
MAX_DIGITS = 4
DEFAULT_ENUMERATION_GUARD = 2_000_000

INVOLUTION_ANY = "any"
INVOLUTION_FIXED = "fixed"
INVOLUTION_SWAPPED = "swapped"
_INVOLUTIONS = (INVOLUTION_ANY, INVOLUTION_FIXED, INVOLUTION_SWAPPED)

Slot = tuple[str, Label]


@dataclasses.dataclass(frozen=True)
class Constraints:
  """Filters applied to enumerated automata."""

  require_finite_class_conditions: bool = True
  require_connected_x1: bool = True
  require_complete: bool = False
  involution: str = INVOLUTION_ANY

  def __post_init__(self) -> None:
    """Check the involution option."""
    if self.involution not in _INVOLUTIONS:
      raise UsageError(
        f"Involution must be one of {_INVOLUTIONS}, got {self.involution!r}"
      )


def _involutions(names: Sequence[str], mode: str) -> Iterator[dict[str, str]]:
  """Involutions of the state names, as matchings."""

  def matchings(rest: list[str]) -> Iterator[list[tuple[str, str]]]:
    if not rest:
      yield []
      return
    first, tail = rest[0], rest[1:]
    for pairing in matchings(tail):
      yield [(first, first), *pairing]
    for index, partner in enumerate(tail):
      remaining = tail[:index] + tail[index + 1 :]
      for pairing in matchings(remaining):
        yield [(first, partner), *pairing]

  for pairing in matchings(list(names)):
    swaps = sum(1 for x, y in pairing if x != y)
    if mode == INVOLUTION_FIXED and swaps:
      continue
    if mode == INVOLUTION_SWAPPED and not swaps:
      continue
    inverse = {"o": "o"}
    for x, y in pairing:
      inverse[x], inverse[y] = y, x
    yield inverse


def _slot_orbits(
  m: int, names: Sequence[str], inverse: dict[str, str]
) -> list[tuple[Slot, ...]]:
  """Orbits of (state, label) slots under the symmetry of edges."""
  orbits = []
  seen: set[Slot] = set()
  for state in ["o", *names]:
    for i, j in itertools.product(range(m), repeat=2):
      slot = (state, (i, j))
      if slot in seen or (state == "o" and i == j):
        continue
      mirror = (inverse[state], (j, i))
      orbit = (slot,) if mirror == slot else (slot, mirror)
      seen.update(orbit)
      orbits.append(orbit)
  return orbits


def _choices(
  orbit: tuple[Slot, ...], names: Sequence[str], inverse: dict[str, str]
) -> list[str | None]:
  if len(orbit) == 1:
    return [None, *(c for c in names if inverse[c] == c)]
  return [None, *names]


def estimate_candidates(num_states: int, m: int, involution: str) -> int:
  """Number of leaf assignments the census would visit without pruning."""
  names = [f"s{k + 1}" for k in range(num_states)]
  total = 0
  for inverse in _involutions(names, involution):
    orbits = _slot_orbits(m, names, inverse)
    total += math.prod(len(_choices(o, names, inverse)) for o in orbits)
  return total


def _connected_x1(m: int, edges: Sequence[tuple[str, Label, str]]) -> bool:
  graph = nx.Graph()
  graph.add_nodes_from(range(m))
  graph.add_edges_from(
    label
    for source, label, _ in edges
    if source == "o" and label[0] != label[1]
  )
  return nx.is_connected(graph)


def _build(
  m: int,
  names: Sequence[str],
  inverse: dict[str, str],
  edges: Sequence[tuple[str, Label, str]],
) -> Automaton:
  loops = [("o", (i, i), "o") for i in range(m)]
  return Automaton.build(m, ["o", *names], "o", inverse, loops + list(edges))


def enumerate_automata(
  num_states: int,
  m: int,
  constraints: Constraints | None = None,
  *,
  guard: int = DEFAULT_ENUMERATION_GUARD,
) -> list[Automaton]:
  """All automata with `num_states` states beside o, up to renaming.

  Two automata are identified when they differ by a simultaneous renaming
  of digits and a renaming of states that fixes o and commutes with the
  involution.

  Args:
      num_states: Number of states other than o.
      m: Number of digits.
      constraints: Filters; defaults to finite-class and X¹-connectedness.
      guard: Largest number of candidate assignments to visit.

  Returns:
      One representative per class, sorted by canonical form.

  Raises:
      GuardExceeded: If the sizes exceed the census limits.

  """
  constraints = constraints or Constraints()
  if num_states < 0 or m < 1:
    raise UsageError(f"Invalid census size: {num_states} states, {m} digits")
  if num_states > MAX_STATES or m > MAX_DIGITS:
    raise GuardExceeded(
      f"Census is limited to {MAX_STATES} states and {MAX_DIGITS} digits",
      estimate=max(num_states, m),
      guard=max(MAX_STATES, MAX_DIGITS),
    )
  estimate = estimate_candidates(num_states, m, constraints.involution)
  if estimate > guard:
    raise GuardExceeded(
      f"Census would visit {estimate} candidates",
      estimate=estimate,
      guard=guard,
    )
  names = [f"s{k + 1}" for k in range(num_states)]
  found: dict[tuple, Automaton] = {}
  for inverse in _involutions(names, constraints.involution):
    for candidate in _search(m, names, inverse, constraints):
      key = canonical_form(candidate)
      found.setdefault(key, candidate)
  logging.info(
    "Census of %d states over %d digits: %d automata",
    num_states,
    m,
    len(found),
  )
  return [found[key] for key in sorted(found)]


def _search(
  m: int,
  names: Sequence[str],
  inverse: dict[str, str],
  constraints: Constraints,
) -> Iterator[Automaton]:
  """Depth-first assignment of targets to slot orbits."""
  orbits = _slot_orbits(m, names, inverse)
  initial_block = sum(1 for orbit in orbits if orbit[0][0] == "o")
  edges: list[tuple[str, Label, str]] = []

  def partial_ok() -> bool:
    if not constraints.require_finite_class_conditions:
      return True
    partial = _build(m, names, inverse, edges)
    return check_finite_class_necessary_conditions(partial).clean

  def visit(depth: int) -> Iterator[Automaton]:
    if depth == initial_block and constraints.require_connected_x1:
      if not _connected_x1(m, edges):
        return
    if depth == len(orbits):
      candidate = _build(m, names, inverse, edges)
      if _accept(candidate, constraints):
        yield candidate
      return
    orbit = orbits[depth]
    for target in _choices(orbit, names, inverse):
      if target is None:
        yield from visit(depth + 1)
        continue
      added = [(orbit[0][0], orbit[0][1], target)]
      if len(orbit) == 2:
        added.append((orbit[1][0], orbit[1][1], inverse[target]))
      edges.extend(added)
      if partial_ok():
        yield from visit(depth + 1)
      del edges[-len(added) :]

  yield from visit(0)


def _accept(candidate: Automaton, constraints: Constraints) -> bool:
  if not validate(candidate).ok:
    return False
  if (
    constraints.require_finite_class_conditions
    and not check_finite_class_necessary_conditions(candidate).clean
  ):
    return False
  return not (
    constraints.require_complete and not is_complete(candidate).complete
  )
