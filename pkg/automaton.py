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

"""Topology-generating automata: representation, validation and runs."""

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
import dataclasses
import functools
import itertools
import logging
from typing import NamedTuple

import networkx as nx

from address import PreperiodicAddress
from errors import GuardExceeded, StructuralError, UsageError

Label = tuple[int, int]

AXIOM_EDGES = "axiom1"
AXIOM_DETERMINISM = "axiom2"
AXIOM_SYMMETRY = "axiom3"
AXIOM_DIAGONAL = "axiom4"
INITIAL_INCOMING = "initial_incoming"

# Digit permutations are enumerated exhaustively up to this alphabet size.
MAX_RENAMING_DIGITS = 6


class Edge(NamedTuple):
  """A labelled transition (source, (i, j), target)."""

  source: str
  label: Label
  target: str


@dataclasses.dataclass(frozen=True)
class Automaton:
  """A finite multigraph over pair labels with initial state and involution.

  Instances are structurally sound (every referenced state exists and every
  digit lies in the alphabet) but may violate the axioms; use `validate`
  to check them.
  """

  m: int
  states: tuple[str, ...]
  initial: str
  inverse_pairs: tuple[tuple[str, str], ...]
  edges: tuple[Edge, ...]

  @classmethod
  def build(
    cls,
    m: int,
    states: Iterable[str],
    initial: str,
    inverse: Mapping[str, str],
    edges: Iterable[tuple[str, Sequence[int], str]],
  ) -> "Automaton":
    """Create an automaton, checking only its structure.

    Args:
        m: Number of digits; digits are 0..m-1.
        states: State names including the initial state.
        initial: Name of the initial state o.
        inverse: The state involution, given explicitly.
        edges: Triples (source, (i, j), target).

    Returns:
        The automaton with states and edges in sorted order.

    Raises:
        StructuralError: If a state is unknown or a digit is out of range.

    """
    if m < 1:
      raise StructuralError(f"Alphabet size must be positive, got {m}")
    names = list(states)
    if len(set(names)) != len(names):
      raise StructuralError("Duplicate state names")
    known = set(names)
    if initial not in known:
      raise StructuralError(f"Initial state {initial!r} is not a state")
    for key, value in inverse.items():
      for name in (key, value):
        if name not in known:
          raise StructuralError(f"Inverse references unknown state {name!r}")
    checked = set()
    for source, label, target in edges:
      for name in (source, target):
        if name not in known:
          raise StructuralError(f"Edge references unknown state {name!r}")
      if len(label) != 2:
        raise StructuralError(f"Edge label {label!r} is not a digit pair")
      i, j = (int(d) for d in label)
      if not (0 <= i < m and 0 <= j < m):
        raise StructuralError(
          f"Label ({i},{j}) on edge {source}->{target} is outside"
          f" digits 0..{m - 1}"
        )
      checked.add(Edge(source, (i, j), target))
    ordered = [initial] + sorted(known - {initial})
    return cls(
      m=m,
      states=tuple(ordered),
      initial=initial,
      inverse_pairs=tuple(sorted(inverse.items())),
      edges=tuple(sorted(checked)),
    )

  @functools.cached_property
  def inverse(self) -> dict[str, str]:
    """The state involution as a dictionary."""
    return dict(self.inverse_pairs)

  @functools.cached_property
  def delta(self) -> dict[tuple[str, Label], str]:
    """Transition function; for invalid inputs the first edge wins."""
    table: dict[tuple[str, Label], str] = {}
    for edge in self.edges:
      table.setdefault((edge.source, edge.label), edge.target)
    return table

  @functools.cached_property
  def out_edges(self) -> dict[str, tuple[Edge, ...]]:
    """Outgoing edges per state."""
    table: dict[str, list[Edge]] = {state: [] for state in self.states}
    for edge in self.edges:
      table[edge.source].append(edge)
    return {state: tuple(edges) for state, edges in table.items()}

  @property
  def digits(self) -> range:
    """The digit alphabet 0..m-1."""
    return range(self.m)

  def step(self, state: str, label: Label) -> str | None:
    """Return the target of the edge labelled `label`, if any."""
    return self.delta.get((state, label))

  def replace_edges(
    self,
    *,
    remove: Iterable[tuple[str, Label, str]] = (),
    add: Iterable[tuple[str, Label, str]] = (),
    m: int | None = None,
  ) -> "Automaton":
    """Return a copy with some edges removed and others added."""
    dropped = {Edge(s, tuple(lab), t) for s, lab, t in remove}
    kept = [e for e in self.edges if e not in dropped]
    return Automaton.build(
      self.m if m is None else m,
      self.states,
      self.initial,
      self.inverse,
      itertools.chain(kept, add),
    )


@dataclasses.dataclass(frozen=True)
class Violation:
  """One axiom violation with the offending state or edge."""

  axiom: str
  witness: str
  message: str


@dataclasses.dataclass(frozen=True)
class ValidationReport:
  """Outcome of `validate`; empty violations means all axioms hold."""

  violations: tuple[Violation, ...]
  weak_axiom4: bool = False

  @property
  def ok(self) -> bool:
    """True when no axiom is violated."""
    return not self.violations

  def axioms(self) -> set[str]:
    """Names of the violated axioms."""
    return {v.axiom for v in self.violations}


def _reachable(a: Automaton, start: str, labels=None) -> set[str]:
  seen = {start}
  queue = deque([start])
  while queue:
    state = queue.popleft()
    for edge in a.out_edges[state]:
      if labels is not None and edge.label not in labels:
        continue
      if edge.target not in seen:
        seen.add(edge.target)
        queue.append(edge.target)
  return seen


def diagonal_closure(a: Automaton) -> set[str]:
  """States reachable from o along edges with labels (i, i)."""
  diagonal = {(i, i) for i in a.digits}
  return _reachable(a, a.initial, diagonal)


def validate(a: Automaton, *, weak_axiom4: bool = False) -> ValidationReport:
  """Check the axioms of a topology-generating automaton.

  Args:
      a: The automaton to check.
      weak_axiom4: Replace the diagonal-loop axiom by the weaker requirement
        that every pair (u, u) is accepted.

  Returns:
      A report listing every violation with a witness.

  """
  violations: list[Violation] = []

  reachable = _reachable(a, a.initial)
  for state in a.states:
    if not a.out_edges[state]:
      violations.append(
        Violation(AXIOM_EDGES, state, f"State {state} has no outgoing edge")
      )
    if state not in reachable:
      violations.append(
        Violation(AXIOM_EDGES, state, f"State {state} is unreachable from o")
      )

  counts: dict[tuple[str, Label], int] = {}
  for edge in a.edges:
    counts[(edge.source, edge.label)] = (
      counts.get((edge.source, edge.label), 0) + 1
    )
  for (state, (i, j)), count in sorted(counts.items()):
    if count > 1:
      violations.append(
        Violation(
          AXIOM_DETERMINISM,
          state,
          f"State {state} has {count} outgoing edges labelled ({i},{j})",
        )
      )

  inverse = a.inverse
  for state in a.states:
    image = inverse.get(state)
    if image is None:
      violations.append(
        Violation(AXIOM_SYMMETRY, state, f"No inverse given for {state}")
      )
    elif inverse.get(image) != state:
      violations.append(
        Violation(
          AXIOM_SYMMETRY, state, f"Inverse is not an involution at {state}"
        )
      )
  if inverse.get(a.initial, a.initial) != a.initial:
    violations.append(
      Violation(AXIOM_SYMMETRY, a.initial, "The initial state must be fixed")
    )
  edge_set = set(a.edges)
  for edge in a.edges:
    source, target = inverse.get(edge.source), inverse.get(edge.target)
    if source is None or target is None:
      continue
    mirror = Edge(source, (edge.label[1], edge.label[0]), target)
    if mirror not in edge_set:
      violations.append(
        Violation(
          AXIOM_SYMMETRY,
          _edge_text(edge),
          f"Missing mirror edge {_edge_text(mirror)}",
        )
      )

  if weak_axiom4:
    for state in sorted(diagonal_closure(a)):
      for i in a.digits:
        if a.step(state, (i, i)) is None:
          violations.append(
            Violation(
              AXIOM_DIAGONAL,
              state,
              f"State {state} accepts no ({i},{i}) after a diagonal path",
            )
          )
  else:
    for i in a.digits:
      if a.step(a.initial, (i, i)) != a.initial:
        violations.append(
          Violation(
            AXIOM_DIAGONAL, a.initial, f"Initial state lacks loop ({i},{i})"
          )
        )

  for edge in a.edges:
    if edge.target != a.initial:
      continue
    if edge.source != a.initial or edge.label[0] != edge.label[1]:
      violations.append(
        Violation(
          INITIAL_INCOMING,
          _edge_text(edge),
          "Only the diagonal loops of o may enter o",
        )
      )

  return ValidationReport(tuple(violations), weak_axiom4)


def _edge_text(edge: Edge) -> str:
  i, j = edge.label
  return f"{edge.source}-({i},{j})->{edge.target}"


@dataclasses.dataclass(frozen=True)
class RunResult:
  """Outcome of running a word pair: acceptance and final state."""

  accepted: bool
  state: str | None = None


def accept_word_pair(
  a: Automaton, u: Sequence[int], v: Sequence[int]
) -> RunResult:
  """Run the pair (u, v) from o.

  Args:
      a: A validated automaton.
      u: First word.
      v: Second word, of the same length.

  Returns:
      The acceptance verdict and, when accepted, the final state.

  Raises:
      UsageError: If the words differ in length.
      StructuralError: If a digit lies outside the alphabet.

  """
  if len(u) != len(v):
    raise UsageError(f"Word lengths differ: {len(u)} != {len(v)}")
  state = a.initial
  for i, j in zip(u, v, strict=True):
    if not (0 <= i < a.m and 0 <= j < a.m):
      raise StructuralError(f"Digit pair ({i},{j}) outside the alphabet")
    state = a.step(state, (i, j))
    if state is None:
      return RunResult(False)
  return RunResult(True, state)


def accept_address_pair(
  a: Automaton, s: PreperiodicAddress, t: PreperiodicAddress
) -> bool:
  """Decide whether every prefix pair of (s, t) is accepted.

  The run is followed through configurations (state, phase of s, phase of
  t); a repeated configuration accepts, a missing edge rejects.
  """
  state, ps, pt = a.initial, 0, 0
  seen = set()
  while (state, ps, pt) not in seen:
    seen.add((state, ps, pt))
    state = a.step(state, (s.digit_at(ps), t.digit_at(pt)))
    if state is None:
      return False
    ps, pt = s.next_position(ps), t.next_position(pt)
  return True


def product(a: Automaton, b: Automaton) -> Automaton:
  """Product automaton describing the product space of a and b.

  Digit d = d_a + m_a * d_b. Only states reachable from (o, o) are kept.

  Args:
      a: First factor.
      b: Second factor.

  Returns:
      The product automaton with states named "p|q".

  """

  def name(p: str, q: str) -> str:
    if p == a.initial and q == b.initial:
      return a.initial
    return f"{p}|{q}"

  start = (a.initial, b.initial)
  seen = {start}
  queue = deque([start])
  edges = []
  while queue:
    p, q = queue.popleft()
    for ea in a.out_edges[p]:
      for eb in b.out_edges[q]:
        i = ea.label[0] + a.m * eb.label[0]
        j = ea.label[1] + a.m * eb.label[1]
        target = (ea.target, eb.target)
        edges.append((name(p, q), (i, j), name(*target)))
        if target not in seen:
          seen.add(target)
          queue.append(target)
  inverse = {
    name(p, q): name(a.inverse[p], b.inverse[q]) for p, q in sorted(seen)
  }
  return Automaton.build(
    a.m * b.m, [name(p, q) for p, q in sorted(seen)], a.initial, inverse, edges
  )


def relabel_digits(a: Automaton, perm: Sequence[int]) -> Automaton:
  """Rename digit d to perm[d] in every label."""
  edges = [
    (e.source, (perm[e.label[0]], perm[e.label[1]]), e.target) for e in a.edges
  ]
  return Automaton.build(a.m, a.states, a.initial, a.inverse, edges)


def _bfs_order(a: Automaton, perm: Sequence[int]) -> dict[str, int]:
  order = {a.initial: 0}
  queue = deque([a.initial])
  while queue:
    state = queue.popleft()
    ranked = sorted(
      a.out_edges[state],
      key=lambda e: (perm[e.label[0]], perm[e.label[1]]),
    )
    for edge in ranked:
      if edge.target not in order:
        order[edge.target] = len(order)
        queue.append(edge.target)
  for state in a.states:
    order.setdefault(state, len(order))
  return order


def canonical_form(a: Automaton, *, rename_digits: bool = True) -> tuple:
  """A key equal for automata that differ only by renaming.

  States are numbered in breadth-first order from o, exploring labels in
  sorted order; determinism makes this numbering unique. With
  `rename_digits` the minimum over all digit permutations is taken.

  Args:
      a: A validated automaton.
      rename_digits: Also quotient by simultaneous digit renaming.

  Returns:
      A hashable, totally ordered key.

  Raises:
      GuardExceeded: If digit renaming is requested for a large alphabet.

  """
  if rename_digits and a.m > MAX_RENAMING_DIGITS:
    raise GuardExceeded(
      f"Digit renaming over {a.m} digits is not enumerated",
      estimate=a.m,
      guard=MAX_RENAMING_DIGITS,
    )
  perms = (
    itertools.permutations(range(a.m))
    if rename_digits
    else [tuple(range(a.m))]
  )
  best = None
  for perm in perms:
    order = _bfs_order(a, perm)
    edges = tuple(
      sorted(
        (order[e.source], perm[e.label[0]], perm[e.label[1]], order[e.target])
        for e in a.edges
      )
    )
    inverse = tuple(
      sorted((order[s], order[t]) for s, t in a.inverse.items())
    )
    key = (a.m, len(a.states), edges, inverse)
    if best is None or key < best:
      best = key
  return best


def is_isomorphic(
  a: Automaton, b: Automaton, *, rename_digits: bool = True
) -> bool:
  """True when a and b coincide up to state (and optionally digit) renaming."""
  if a.m != b.m or len(a.states) != len(b.states):
    return False
  return canonical_form(a, rename_digits=rename_digits) == canonical_form(
    b, rename_digits=rename_digits
  )


def to_networkx(
  a: Automaton, *, include_initial_diagonal: bool = True
) -> nx.MultiDiGraph:
  """The labelled multigraph of the automaton, one edge per label."""
  graph = nx.MultiDiGraph()
  graph.add_nodes_from(a.states)
  for edge in a.edges:
    if (
      not include_initial_diagonal
      and edge.source == a.initial
      and edge.label[0] == edge.label[1]
    ):
      continue
    graph.add_edge(edge.source, edge.target, key=edge.label, label=edge.label)
  return graph


def language_contained(
  small: Automaton, big: Automaton, depth: int
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
  """Check that `big` accepts every pair of length <= depth that `small` does.

  The automata are run in lockstep over pairs of states; each state pair is
  expanded once, so the check is exhaustive up to `depth` at the cost of the
  product size.

  Returns:
      (True, None) or (False, a shortest counterexample pair).

  """
  if small.m != big.m:
    raise UsageError("Automata have different alphabets")
  start = (small.initial, big.initial)
  paths: dict[tuple[str, str], tuple[tuple[int, ...], tuple[int, ...]]] = {
    start: ((), ())
  }
  frontier = [start]
  for _ in range(depth):
    successors = []
    for p, q in frontier:
      u, v = paths[(p, q)]
      for edge in small.out_edges[p]:
        i, j = edge.label
        target = big.step(q, edge.label)
        if target is None:
          return False, (u + (i,), v + (j,))
        pair = (edge.target, target)
        if pair not in paths:
          paths[pair] = (u + (i,), v + (j,))
          successors.append(pair)
    frontier = successors
  logging.debug("Language check visited %d state pairs", len(paths))
  return True, None
