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

"""Automata accepting complete k-tuples of equivalent addresses.

A state of the k-address automaton is the matrix of G₂ states reached by
every pair of coordinates, with "" for pairs whose run has died. States are
stored in a canonical coordinate order; every edge records how the target's
coordinates map back to the source's.
"""

from collections import deque
from collections.abc import Iterator, Mapping, Sequence
import dataclasses
import functools
import itertools
import logging
from typing import NamedTuple

import networkx as nx

from address import PreperiodicAddress, Word
from analysis import DEFAULT_CLASS_BOUND
from automaton import Automaton
from errors import ClassBoundExceeded, GuardExceeded, UsageError

DEAD = ""
DEFAULT_TUPLE_STATE_GUARD = 200_000
DEFAULT_LASSO_LIMIT = 64
# Individualization leaves examined before falling back to index order.
CANONICAL_LEAF_CAP = 256
# Cycle repetitions tried while waiting for the coordinate map to close.
_MAX_CYCLE_POWER = 720

Entries = tuple[str, ...]


class TupleEdge(NamedTuple):
  """Transition of a tuple automaton.

  Coordinate p of `target` corresponds to coordinate perm[p] of `source`.
  """

  source: Entries
  label: tuple[int, ...]
  target: Entries
  perm: tuple[int, ...]


def _index(k: int, a: int, b: int) -> int:
  """Position of the pair (a, b), a < b, in the entry tuple."""
  return a * k - a * (a + 1) // 2 + (b - a - 1)


def _matrix(entries: Entries, k: int, inverse: Mapping[str, str]):
  """Full oriented matrix; entry [b][a] is the inverse of [a][b]."""
  full = [["" for _ in range(k)] for _ in range(k)]
  for a, b in itertools.combinations(range(k), 2):
    value = entries[_index(k, a, b)]
    full[a][b] = value
    full[b][a] = inverse.get(value, DEAD)
  return full


def _encode(full, order: Sequence[int]) -> Entries:
  return tuple(
    full[order[p]][order[q]]
    for p, q in itertools.combinations(range(len(order)), 2)
  )


def _refine(full, colours: list[int]) -> list[int]:
  """Colour refinement until the partition stops splitting."""
  k = len(full)
  while True:
    signatures = [
      (
        colours[a],
        tuple(sorted((full[a][b], colours[b]) for b in range(k) if b != a)),
      )
      for a in range(k)
    ]
    ranks = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
    refined = [ranks[sig] for sig in signatures]
    if len(set(refined)) == len(set(colours)):
      return refined
    colours = refined


def canonical_entries(
  full, *, leaf_cap: int = CANONICAL_LEAF_CAP
) -> tuple[Entries, tuple[int, ...]]:
  """Canonical encoding of an oriented matrix and the coordinate order.

  Colour refinement with individualization picks the lexicographically
  smallest encoding. Two leaves with the same encoding give an
  automorphism; siblings in one orbit of the automorphisms fixing the
  individualized coordinates are explored once. When more than `leaf_cap`
  leaves are needed, ties are broken by index, which stays deterministic
  but may split one orbit into several representatives.

  Returns:
      (entries, order) where canonical coordinate p is original order[p].

  """
  k = len(full)
  if k <= 1:
    return (), tuple(range(k))
  best: list = []
  first_leaf: dict[Entries, tuple[int, ...]] = {}
  automorphisms: list[tuple[int, ...]] = []
  leaves = 0

  def record(order: tuple[int, ...]) -> None:
    encoding = _encode(full, order)
    earlier = first_leaf.setdefault(encoding, order)
    if earlier != order:
      image = [0] * k
      for p in range(k):
        image[earlier[p]] = order[p]
      automorphisms.append(tuple(image))
    if not best or encoding < best[0]:
      best[:] = [encoding, order]

  def same_orbit(chosen: int, explored: list[int], path: tuple) -> bool:
    fixing = [g for g in automorphisms if all(g[v] == v for v in path)]
    if not fixing:
      return False
    orbits = nx.utils.UnionFind(range(k))
    for g in fixing:
      for a in range(k):
        orbits.union(a, g[a])
    return any(orbits[chosen] == orbits[e] for e in explored)

  def search(colours: list[int], path: tuple[int, ...]) -> None:
    nonlocal leaves
    colours = _refine(full, colours)
    cells: dict[int, list[int]] = {}
    for a, colour in enumerate(colours):
      cells.setdefault(colour, []).append(a)
    split = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
    if split is None:
      leaves += 1
      record(tuple(sorted(range(k), key=lambda a: colours[a])))
      return
    members = cells[split]
    if leaves >= leaf_cap:
      members = members[:1]
    explored: list[int] = []
    for chosen in members:
      if explored and same_orbit(chosen, explored, path):
        continue
      explored.append(chosen)
      search(
        [
          2 * c + (1 if c == split and a != chosen else 0)
          for a, c in enumerate(colours)
        ],
        (*path, chosen),
      )

  search([0] * k, ())
  return best[0], best[1]


@functools.lru_cache(maxsize=1 << 18)
def _canonical_key(
  entries: Entries, k: int, inverse: tuple[tuple[str, str], ...]
) -> tuple[Entries, tuple[int, ...]]:
  """Memoized canonical form of a state given in any coordinate order."""
  return canonical_entries(_matrix(entries, k, dict(inverse)))


def _inverse_items(g2: Automaton) -> tuple[tuple[str, str], ...]:
  return tuple(sorted(g2.inverse.items()))


class SplitNode(NamedTuple):
  """A tuple state with the witness rows of a run, oldest group first."""

  state: Entries
  witnesses: tuple[tuple[Entries, ...], ...]


class SplitEdge(NamedTuple):
  """Transition of the witness split; `reset` when the oldest group died."""

  source: SplitNode
  label: tuple[int, ...]
  target: SplitNode
  reset: bool


@dataclasses.dataclass(frozen=True)
class WitnessSplit:
  """G_k split by the rows through which a further address could attach.

  A run is complete iff it crosses reset edges infinitely often.
  """

  initial: SplitNode | None
  nodes: tuple[SplitNode, ...]
  edges: tuple[SplitEdge, ...]

  @functools.cached_property
  def delta(self) -> dict[tuple[SplitNode, tuple[int, ...]], SplitEdge]:
    """Transition table."""
    return {(e.source, e.label): e for e in self.edges}


@dataclasses.dataclass(frozen=True)
class TupleAutomaton:
  """Automaton of k-address tuples over pair-state matrices."""

  arity: int
  states: tuple[Entries, ...]
  initial: Entries | None
  edges: tuple[TupleEdge, ...]
  g2: Automaton = dataclasses.field(compare=False, repr=False)
  complete: frozenset[Entries] = frozenset()
  annotated: bool = False
  witnesses: WitnessSplit | None = dataclasses.field(
    default=None, compare=False, repr=False
  )

  @functools.cached_property
  def state_set(self) -> frozenset[Entries]:
    """States as a set."""
    return frozenset(self.states)

  @functools.cached_property
  def out_edges(self) -> dict[Entries, tuple[TupleEdge, ...]]:
    """Outgoing edges per state."""
    table: dict[Entries, list[TupleEdge]] = {s: [] for s in self.states}
    for edge in self.edges:
      table[edge.source].append(edge)
    return {s: tuple(e) for s, e in table.items()}

  @functools.cached_property
  def delta(self) -> dict[tuple[Entries, tuple[int, ...]], TupleEdge]:
    """Transition table."""
    return {(e.source, e.label): e for e in self.edges}

  @property
  def is_empty(self) -> bool:
    """True when no tuple is accepted."""
    return not self.states

  def is_discrete(self, state: Entries) -> bool:
    """True when no pair of coordinates is still at the initial state."""
    return self.g2.initial not in state

  def is_complete(self, state: Entries) -> bool:
    """True when some complete tuple repeats through `state`."""
    return state in self.complete

  def matrix(self, state: Entries) -> list[list[str]]:
    """Oriented pair matrix of a state."""
    return _matrix(state, self.arity, self.g2.inverse)

  def coupling_tree(self, state: Entries) -> list[tuple[int, int, str]]:
    """A spanning tree of the live pairs, as (a, b, G₂ state)."""
    graph = nx.Graph()
    graph.add_nodes_from(range(self.arity))
    for a, b in itertools.combinations(range(self.arity), 2):
      value = state[_index(self.arity, a, b)]
      if value != DEAD:
        graph.add_edge(a, b, state=value)
    tree = nx.bfs_tree(graph, 0) if self.arity else nx.Graph()
    return sorted(
      (min(a, b), max(a, b), graph.edges[a, b]["state"])
      for a, b in tree.edges()
    )

  def state_name(self, state: Entries) -> str:
    """Readable name: the entries joined by dots, "-" for dead pairs."""
    return ".".join(value or "-" for value in state) or "*"


def _connected(state: Entries, k: int) -> bool:
  if k <= 1:
    return True
  graph = nx.Graph()
  graph.add_nodes_from(range(k))
  graph.add_edges_from(
    (a, b)
    for a, b in itertools.combinations(range(k), 2)
    if state[_index(k, a, b)] != DEAD
  )
  return nx.is_connected(graph)


def _step(
  g2: Automaton, state: Entries, k: int, label: Sequence[int]
) -> Entries:
  """Advance every pair run by the digits of `label`."""
  result = []
  for a, b in itertools.combinations(range(k), 2):
    value = state[_index(k, a, b)]
    if value != DEAD:
      value = g2.step(value, (label[a], label[b])) or DEAD
    result.append(value)
  return tuple(result)


def _remove_coordinate(state: Entries, k: int, c: int) -> Entries:
  kept = [a for a in range(k) if a != c]
  return tuple(
    state[_index(k, kept[p], kept[q])]
    for p, q in itertools.combinations(range(k - 1), 2)
  )


def trivial_automaton(g2: Automaton) -> TupleAutomaton:
  """The 1-address automaton: one state, a loop for every digit."""
  edges = tuple(TupleEdge((), (d,), (), (0,)) for d in g2.digits)
  return TupleAutomaton(1, ((),), (), edges, g2)


def extend(
  gk: TupleAutomaton,
  g2: Automaton,
  *,
  state_guard: int = DEFAULT_TUPLE_STATE_GUARD,
) -> TupleAutomaton:
  """Candidate (k+1)-address automaton built from G_k and G₂.

  A (k+1)-state is admitted when its live pairs are connected and some
  coordinate c can be removed leaving a state of G_k; its transitions are
  the G_k transitions of that reduced state combined with every digit for
  c. The result is trimmed and states that cannot reach a discrete state
  are dropped.

  Args:
      gk: Final or candidate automaton of arity k.
      g2: The underlying automaton.
      state_guard: Largest number of states explored.

  Returns:
      The candidate automaton of arity k+1, possibly empty.

  Raises:
      GuardExceeded: If more than `state_guard` states are explored.

  """
  if gk.g2.m != g2.m:
    raise UsageError("Tuple automaton was not built from this automaton")
  k = gk.arity + 1
  if gk.is_empty:
    return TupleAutomaton(k, (), None, (), g2)
  inverse = _inverse_items(g2)
  initial: Entries = (g2.initial,) * (k * (k - 1) // 2)
  seen = {initial}
  queue = deque([initial])
  edges: list[TupleEdge] = []
  while queue:
    state = queue.popleft()
    labels: set[tuple[int, ...]] = set()
    for c in range(k):
      reduced = _remove_coordinate(state, k, c)
      sub, order = _canonical_key(reduced, k - 1, inverse)
      if sub not in gk.state_set:
        continue
      kept = [a for a in range(k) if a != c]
      for edge in gk.out_edges[sub]:
        label = [0] * k
        for p, digit in enumerate(edge.label):
          label[kept[order[p]]] = digit
        for e in g2.digits:
          label[c] = e
          labels.add(tuple(label))
    for label in sorted(labels):
      successor = _step(g2, state, k, label)
      if not _connected(successor, k):
        continue
      target, perm = _canonical_key(successor, k, inverse)
      edges.append(TupleEdge(state, label, target, perm))
      if target not in seen:
        if len(seen) >= state_guard:
          raise GuardExceeded(
            f"Arity {k} automaton exceeds {state_guard} states",
            estimate=len(seen) + 1,
            guard=state_guard,
          )
        seen.add(target)
        queue.append(target)
  candidate = TupleAutomaton(
    k, tuple(sorted(seen)), initial, tuple(sorted(edges)), g2
  )
  logging.debug("Arity %d exploration found %d states", k, len(seen))
  return _prune(candidate)


def _restrict(t: TupleAutomaton, keep: set[Entries]) -> TupleAutomaton:
  if t.initial not in keep:
    return dataclasses.replace(
      t, states=(), initial=None, edges=(), complete=frozenset()
    )
  edges = tuple(e for e in t.edges if e.source in keep and e.target in keep)
  return dataclasses.replace(
    t,
    states=tuple(s for s in t.states if s in keep),
    edges=edges,
    complete=frozenset(s for s in t.complete if s in keep),
  )


def trim(t: TupleAutomaton) -> TupleAutomaton:
  """Remove unreachable states and, repeatedly, states without successors."""
  if t.is_empty:
    return t
  graph = nx.DiGraph()
  graph.add_nodes_from(t.states)
  graph.add_edges_from((e.source, e.target) for e in t.edges)
  keep = nx.descendants(graph, t.initial) | {t.initial}
  graph = graph.subgraph(keep).copy()
  while True:
    dead = [n for n in graph if graph.out_degree(n) == 0]
    if not dead:
      break
    graph.remove_nodes_from(dead)
  return _restrict(t, set(graph))


def duplicate_collapse(t: TupleAutomaton) -> TupleAutomaton:
  """Drop states whose runs keep two coordinates equal forever.

  Two coordinates carry the same sequence exactly when their pair entry
  stays at the initial state, so such runs never reach a discrete state.
  These tuples are already accepted at a smaller arity.
  """
  if t.is_empty:
    return t
  graph = nx.DiGraph()
  graph.add_nodes_from(t.states)
  graph.add_edges_from((e.source, e.target) for e in t.edges)
  discrete = [s for s in t.states if t.is_discrete(s)]
  keep = set(discrete)
  for state in discrete:
    keep |= nx.ancestors(graph, state)
  return _restrict(t, keep)


def _prune(t: TupleAutomaton) -> TupleAutomaton:
  while True:
    pruned = trim(duplicate_collapse(t))
    if len(pruned.states) == len(t.states):
      return pruned
    t = pruned


def build_G3(  # noqa: N802
  g2: Automaton, *, state_guard: int = DEFAULT_TUPLE_STATE_GUARD
) -> TupleAutomaton:
  """Candidate automaton of address triples."""
  pairs = extend(trivial_automaton(g2), g2, state_guard=state_guard)
  return extend(pairs, g2, state_guard=state_guard)


def completeness_split(
  gk: TupleAutomaton,
  gk1_candidate: TupleAutomaton,
  *,
  state_guard: int = DEFAULT_TUPLE_STATE_GUARD,
) -> tuple[TupleAutomaton, frozenset[Entries]]:
  """Split G_k by the witness rows each run carries into G_{k+1}.

  A witness row holds the pair states between a further address and the k
  present ones; it lives while the enlarged matrix is a state of the
  candidate G_{k+1}. A further address that still copies a present one is
  implicit in the state, so rows are born when it branches off and are
  grouped by that step. An edge resets when no row is alive or the oldest
  group dies. A run that resets finitely often keeps a group alive forever,
  which holds an infinite lift by König's lemma; so a run is complete iff
  it resets infinitely often.

  Args:
      gk: Candidate automaton of arity k.
      gk1_candidate: `extend(gk, g2)`.
      state_guard: Largest number of split nodes explored.

  Returns:
      G_k carrying its split, with the states on cycles of complete runs
      marked, and the states on cycles of runs that extend.

  Raises:
      GuardExceeded: If the split exceeds `state_guard` nodes.

  """
  split = _witness_split(gk, gk1_candidate, state_guard)
  complete, extendable = _classify(gk, split)
  annotated = dataclasses.replace(
    gk, complete=complete, annotated=True, witnesses=split
  )
  logging.debug(
    "Arity %d split: %d nodes, %d complete states",
    gk.arity,
    len(split.nodes),
    len(complete),
  )
  return annotated, extendable


def _witness_split(
  gk: TupleAutomaton, candidate: TupleAutomaton, state_guard: int
) -> WitnessSplit:
  if gk.is_empty:
    return WitnessSplit(None, (), ())
  g2 = gk.g2
  k = gk.arity
  inverse = _inverse_items(g2)

  def admitted(state: Entries, row: Entries) -> bool:
    merged = _append_row(state, row, k)
    if not _connected(merged, k + 1):
      return False
    key, _ = _canonical_key(merged, k + 1, inverse)
    return key in candidate.state_set

  def lifts(edge: TupleEdge, row: Entries) -> Iterator[Entries]:
    for e in g2.digits:
      advanced = [
        DEAD if value == DEAD else (g2.step(value, (edge.label[a], e)) or DEAD)
        for a, value in enumerate(row)
      ]
      yield tuple(advanced[edge.perm[p]] for p in range(k))

  def copies(state: Entries) -> set[Entries]:
    full = gk.matrix(state)
    return {
      tuple(g2.initial if b == a else full[b][a] for b in range(k))
      for a in range(k)
    }

  initial = SplitNode(gk.initial, ())
  seen = {initial}
  queue = deque([initial])
  edges: list[SplitEdge] = []
  while queue:
    node = queue.popleft()
    for edge in gk.out_edges[node.state]:
      taken: set[Entries] = set()
      groups: list[set[Entries]] = []
      for group in node.witnesses:
        rows = {
          lifted
          for row in group
          for lifted in lifts(edge, row)
          if lifted not in taken and admitted(edge.target, lifted)
        }
        taken |= rows
        groups.append(rows)
      born = {
        lifted
        for row in copies(node.state)
        for lifted in lifts(edge, row)
        if g2.initial not in lifted
        and lifted not in taken
        and admitted(edge.target, lifted)
      }
      target = SplitNode(
        edge.target,
        tuple(tuple(sorted(rows)) for rows in [*groups, born] if rows),
      )
      reset = not groups or not groups[0]
      edges.append(SplitEdge(node, edge.label, target, reset))
      if target not in seen:
        if len(seen) >= state_guard:
          raise GuardExceeded(
            f"Arity {k} witness split exceeds {state_guard} nodes",
            estimate=len(seen) + 1,
            guard=state_guard,
          )
        seen.add(target)
        queue.append(target)
  return WitnessSplit(initial, tuple(sorted(seen)), tuple(sorted(edges)))


def _classify(
  gk: TupleAutomaton, split: WitnessSplit
) -> tuple[frozenset[Entries], frozenset[Entries]]:
  """States on cycles of complete runs and on cycles of extending runs.

  Only discrete states count; elsewhere two coordinates coincide forever.
  """
  graph = nx.DiGraph()
  graph.add_nodes_from(n for n in split.nodes if gk.is_discrete(n.state))
  inner = [e for e in split.edges if e.source in graph and e.target in graph]
  graph.add_edges_from((e.source, e.target) for e in inner)
  component = {
    node: index
    for index, nodes in enumerate(nx.strongly_connected_components(graph))
    for node in nodes
  }
  resetting = {
    component[e.source]
    for e in inner
    if e.reset and component[e.source] == component[e.target]
  }
  complete = frozenset(
    node.state for node in graph if component[node] in resetting
  )
  steady = nx.DiGraph()
  steady.add_edges_from((e.source, e.target) for e in inner if not e.reset)
  extendable = frozenset(
    node.state
    for nodes in nx.strongly_connected_components(steady)
    for node in nodes
    if len(nodes) > 1 or steady.has_edge(node, node)
  )
  return complete, extendable


def _append_row(state: Entries, row: Entries, k: int) -> Entries:
  """Matrix of arity k+1 whose last coordinate has pair states `row`."""
  result = []
  for a, b in itertools.combinations(range(k + 1), 2):
    result.append(row[a] if b == k else state[_index(k, a, b)])
  return tuple(result)


class Lasso(NamedTuple):
  """An eventually periodic run with its coordinate addresses."""

  states: tuple[Entries, ...]
  addresses: tuple[PreperiodicAddress, ...]


def _follow(
  t: TupleAutomaton, path: Sequence[TupleEdge], ids: Sequence[int]
) -> tuple[list[list[int]], list[int]]:
  """Digits read by each original coordinate along a path of edges."""
  digits: list[list[int]] = [[] for _ in range(t.arity)]
  ids = list(ids)
  for edge in path:
    for position, coordinate in enumerate(ids):
      digits[coordinate].append(edge.label[position])
    ids = [ids[edge.perm[p]] for p in range(t.arity)]
  return digits, ids


def sample_lassos(
  t: TupleAutomaton, *, limit: int = DEFAULT_LASSO_LIMIT
) -> Iterator[Lasso]:
  """Eventually periodic runs through cycles of discrete states.

  Each simple cycle of the discrete region is entered along a shortest
  path from the initial state; the cycle is repeated until the coordinate
  map closes, so every coordinate gets a genuine period.
  """
  if t.is_empty:
    return
  graph = nx.MultiDiGraph()
  graph.add_nodes_from(t.states)
  for edge in sorted(t.edges):
    graph.add_edge(edge.source, edge.target, edge=edge)
  first_edge = {}
  for edge in sorted(t.edges):
    first_edge.setdefault((edge.source, edge.target), edge)
  discrete = graph.subgraph(s for s in t.states if t.is_discrete(s))
  cycles = nx.simple_cycles(nx.DiGraph(discrete))
  for cycle in itertools.islice(cycles, limit):
    entry = cycle[0]
    nodes = nx.shortest_path(graph, t.initial, entry)
    access = [first_edge[u, v] for u, v in itertools.pairwise(nodes)]
    loop = [
      first_edge[u, v] for u, v in itertools.pairwise([*cycle, entry])
    ]
    prefix, ids = _follow(t, access, range(t.arity))
    period: list[list[int]] = [[] for _ in range(t.arity)]
    current = ids
    for _ in range(_MAX_CYCLE_POWER):
      digits, current = _follow(t, loop, current)
      for coordinate in range(t.arity):
        period[coordinate].extend(digits[coordinate])
      if current == ids:
        break
    else:
      logging.warning("Cycle at %s did not close", t.state_name(entry))
      continue
    addresses = tuple(
      PreperiodicAddress(tuple(prefix[c]), tuple(period[c]))
      for c in range(t.arity)
    )
    yield Lasso((*nodes[:-1], *cycle), addresses)


def accepts_tuple(
  t: TupleAutomaton, addresses: Sequence[PreperiodicAddress]
) -> bool:
  """Decide whether the tuple of addresses is accepted in any order.

  The run is followed through configurations (state, coordinate map,
  phases); a repeated configuration accepts when the state is discrete.
  """
  if len(addresses) != t.arity:
    raise UsageError(
      f"Expected {t.arity} addresses, got {len(addresses)}"
    )
  if len(set(addresses)) != len(addresses) or t.is_empty:
    return False
  state = t.initial
  ids = tuple(range(t.arity))
  phases = tuple(0 for _ in addresses)
  seen = set()
  while (state, ids, phases) not in seen:
    seen.add((state, ids, phases))
    label = tuple(addresses[c].digit_at(phases[c]) for c in ids)
    edge = t.delta.get((state, label))
    if edge is None:
      return False
    phases = tuple(
      addresses[c].next_position(phases[c]) for c in range(t.arity)
    )
    ids = tuple(ids[edge.perm[p]] for p in range(t.arity))
    state = edge.target
  return t.is_discrete(state)


def tuple_is_complete(
  t: TupleAutomaton, addresses: Sequence[PreperiodicAddress]
) -> bool:
  """Decide whether an accepted tuple is a whole class.

  The run is followed through the witness split until its configuration
  repeats; the tuple is complete when the repeated part resets.

  Raises:
      UsageError: If `t` carries no witness split.

  """
  if t.witnesses is None:
    raise UsageError("Tuple automaton carries no completeness annotation")
  if not accepts_tuple(t, addresses):
    return False
  split = t.witnesses
  node = split.initial
  ids = tuple(range(t.arity))
  phases = tuple(0 for _ in addresses)
  resets: list[bool] = []
  history: dict = {}
  while (node, ids, phases) not in history:
    history[node, ids, phases] = len(resets)
    label = tuple(addresses[c].digit_at(phases[c]) for c in ids)
    step = split.delta[node, label]
    perm = t.delta[node.state, label].perm
    resets.append(step.reset)
    phases = tuple(
      addresses[c].next_position(phases[c]) for c in range(t.arity)
    )
    ids = tuple(ids[perm[p]] for p in range(t.arity))
    node = step.target
  return any(resets[history[node, ids, phases] :])


@dataclasses.dataclass(frozen=True)
class Family:
  """The multiple-address automata of an automaton over m digits."""

  m: int
  arities: tuple[int, ...]
  automata: dict[int, TupleAutomaton]
  partial: bool = False


def compute_family(
  g2: Automaton,
  *,
  bound: int = DEFAULT_CLASS_BOUND,
  state_guard: int = DEFAULT_TUPLE_STATE_GUARD,
) -> Family:
  """Build G_2, G_3, ... until no tuple of the next arity exists.

  K holds the arities whose automaton has a complete tuple, that is a
  cycle of discrete split nodes through a reset edge.

  Args:
      g2: A validated automaton with finite classes.
      bound: Largest arity attempted.
      state_guard: State limit for each arity and its witness split.

  Returns:
      K and the final automata keyed by arity.

  Raises:
      ClassBoundExceeded: If arity `bound` still has tuples of the next
        arity; `partial` holds the family computed so far.

  """
  current = extend(trivial_automaton(g2), g2, state_guard=state_guard)
  automata: dict[int, TupleAutomaton] = {}
  while not current.is_empty:
    k = current.arity
    if k > bound:
      partial = Family(g2.m, _arities(automata), automata, partial=True)
      logging.warning("Arity %d exceeds the class bound %d", k, bound)
      raise ClassBoundExceeded(
        f"Tuples of arity {k} exceed the class bound {bound}",
        bound=bound,
        partial=partial,
      )
    following = extend(current, g2, state_guard=state_guard)
    automata[k], _ = completeness_split(
      current, following, state_guard=state_guard
    )
    logging.info(
      "Arity %d: %d states, %d edges, %d complete",
      k,
      len(current.states),
      len(current.edges),
      len(automata[k].complete),
    )
    current = following
  return Family(g2.m, _arities(automata), automata)


def _arities(automata: Mapping[int, TupleAutomaton]) -> tuple[int, ...]:
  return tuple(sorted(k for k, t in automata.items() if t.complete))


def lasso_words(lasso: Lasso, n: int) -> tuple[Word, ...]:
  """Length-n prefixes of the coordinate addresses of a lasso."""
  return tuple(address.prefix(n) for address in lasso.addresses)
