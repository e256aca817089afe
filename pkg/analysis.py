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

"""Semantic analyses of validated automata."""

from collections import deque
from collections.abc import Iterator
import dataclasses
import itertools
import logging

import networkx as nx

from address import PreperiodicAddress, Word
from automaton import Automaton, Label, diagonal_closure, to_networkx
from errors import ClassBoundExceeded, PreconditionError, UsageError

DEFAULT_CLASS_BOUND = 16
# Upper limit on lassos examined by the necessary-condition check.
DEFAULT_LASSO_LIMIT = 20_000

PERIODIC_MEMBER = "periodic_member"
SHIFTED_PARTNER = "shifted_partner"
RETURNS_TO_INITIAL = "returns_to_initial"


@dataclasses.dataclass(frozen=True)
class FiniteClassViolation:
  """An accepted pair of distinct addresses that rules out finite classes."""

  kind: str
  s: PreperiodicAddress
  t: PreperiodicAddress | None = None
  message: str = ""


@dataclasses.dataclass(frozen=True)
class FiniteClassReport:
  """Result of `check_finite_class_necessary_conditions`."""

  violations: tuple[FiniteClassViolation, ...]
  truncated: bool = False

  @property
  def clean(self) -> bool:
    """True when no violation was found."""
    return not self.violations


def _label_words(
  graph: nx.MultiDiGraph, nodes: list[str]
) -> Iterator[tuple[Word, Word]]:
  """All (first, second) label words along a node path of a multigraph."""
  hops = [
    [data["label"] for data in graph[u][v].values()]
    for u, v in itertools.pairwise(nodes)
  ]
  for labels in itertools.product(*hops):
    yield tuple(i for i, _ in labels), tuple(j for _, j in labels)


def _lassos(
  graph: nx.MultiDiGraph, initial: str
) -> Iterator[tuple[Word, Word, Word, Word]]:
  """Label words (P_s, C_s, P_t, C_t) of cycles entered from o."""
  simple = nx.DiGraph(graph)
  for cycle in sorted(nx.simple_cycles(simple), key=lambda c: (len(c), c)):
    for rotation in range(len(cycle)):
      nodes = cycle[rotation:] + cycle[:rotation]
      entry = nodes[0]
      if entry == initial:
        accesses = [[initial]]
      else:
        accesses = nx.all_simple_paths(simple, initial, entry)
      for access in accesses:
        for ps, pt in _label_words(graph, access):
          for cs, ct in _label_words(graph, [*nodes, entry]):
            yield ps, cs, pt, ct


def check_finite_class_necessary_conditions(
  a: Automaton, *, lasso_limit: int = DEFAULT_LASSO_LIMIT
) -> FiniteClassReport:
  """Search the accepted pairs for configurations excluding finite classes.

  Every simple cycle of the automaton without the diagonal loops of o,
  entered through a simple path leaving o, yields accepted pairs
  (P_s C_s^∞, P_t C_t^∞). A pair is flagged when one side is purely
  periodic or when one side is a shift of the other. Edges entering o from
  elsewhere are flagged directly.

  Args:
      a: A validated automaton.
      lasso_limit: Stop after examining this many lassos.

  Returns:
      The report; `truncated` is set when the limit stopped the search.

  """
  graph = to_networkx(a, include_initial_diagonal=False)
  violations: list[FiniteClassViolation] = []
  for edge in a.edges:
    if edge.target == a.initial and edge.label[0] != edge.label[1]:
      violations.append(
        FiniteClassViolation(
          RETURNS_TO_INITIAL,
          PreperiodicAddress.periodic((edge.label[0],)),
          message=f"Non-diagonal edge from {edge.source} returns to o",
        )
      )
  seen_pairs: set[tuple[PreperiodicAddress, PreperiodicAddress]] = set()
  truncated = False
  for count, (ps, cs, pt, ct) in enumerate(_lassos(graph, a.initial)):
    if count >= lasso_limit:
      truncated = True
      logging.warning("Finite-class check stopped after %d lassos", count)
      break
    s = PreperiodicAddress(ps, cs)
    t = PreperiodicAddress(pt, ct)
    if s == t or (s, t) in seen_pairs:
      continue
    seen_pairs.add((s, t))
    violations.extend(_pair_violations(s, t))
  return FiniteClassReport(tuple(violations), truncated)


def _pair_violations(
  s: PreperiodicAddress, t: PreperiodicAddress
) -> list[FiniteClassViolation]:
  found = []
  for x, y in ((s, t), (t, s)):
    if x.is_periodic:
      found.append(
        FiniteClassViolation(
          PERIODIC_MEMBER, x, y, f"Periodic {x} is equivalent to {y}"
        )
      )
      break
  horizon = max(s.lasso_size, t.lasso_size)
  for k in range(1, horizon + 1):
    if s.shift(k) == t or t.shift(k) == s:
      found.append(
        FiniteClassViolation(
          SHIFTED_PARTNER, s, t, f"{s} and {t} differ by a shift of {k}"
        )
      )
      break
  return found


@dataclasses.dataclass(frozen=True)
class EquivalenceClass:
  """The set of addresses equivalent to `input`."""

  input: PreperiodicAddress
  members: tuple[PreperiodicAddress, ...]

  @property
  def size(self) -> int:
    """Number of members."""
    return len(self.members)

  def __contains__(self, item: PreperiodicAddress) -> bool:
    """Membership test."""
    return item in self.members


def _partner_graph(
  a: Automaton, s: PreperiodicAddress
) -> tuple[nx.MultiDiGraph, tuple[str, int]]:
  """Product of the automaton with the lasso of s, restricted to live nodes.

  Node (q, position) has an edge to (q', next position) for every edge
  q -(s[position], j)-> q'; the edge carries the partner digit j.
  """
  start = (a.initial, 0)
  graph = nx.MultiDiGraph()
  graph.add_node(start)
  queue = deque([start])
  while queue:
    state, position = queue.popleft()
    digit = s.digit_at(position)
    following = s.next_position(position)
    for edge in a.out_edges[state]:
      if edge.label[0] != digit:
        continue
      target = (edge.target, following)
      if target not in graph:
        queue.append(target)
      graph.add_edge((state, position), target, key=edge.label[1])
  changed = True
  while changed:
    dead = [n for n in graph if graph.out_degree(n) == 0]
    changed = bool(dead)
    graph.remove_nodes_from(dead)
  return graph, start


def partners(
  a: Automaton, s: PreperiodicAddress, *, bound: int = DEFAULT_CLASS_BOUND
) -> list[PreperiodicAddress]:
  """All t with (s, t) accepted, including s itself.

  Raises:
      ClassBoundExceeded: If s has infinitely many or more than `bound`
        partners.

  """
  graph, start = _partner_graph(a, s)
  if start not in graph:
    return []
  cyclic: dict = {}
  for component in nx.strongly_connected_components(graph):
    nodes = sorted(component)
    internal = graph.subgraph(nodes).number_of_edges()
    if internal == 0:
      continue
    exits = sum(graph.out_degree(n) for n in nodes) - internal
    if internal != len(nodes) or exits:
      raise ClassBoundExceeded(
        f"{s} has infinitely many partners",
        bound=bound,
        partial=[s],
      )
    for node in nodes:
      cyclic[node] = component

  found: set[PreperiodicAddress] = set()
  stack: list[tuple[tuple[str, int], Word]] = [(start, ())]
  while stack:
    node, word = stack.pop()
    if node in cyclic:
      period = []
      current = node
      while True:
        ((_, target, digit),) = graph.out_edges(current, keys=True)
        period.append(digit)
        current = target
        if current == node:
          break
      found.add(PreperiodicAddress(word, tuple(period)))
      if len(found) > bound:
        raise ClassBoundExceeded(
          f"{s} has more than {bound} partners",
          bound=bound,
          partial=sorted(found),
        )
      continue
    for _, target, digit in graph.out_edges(node, keys=True):
      stack.append((target, word + (digit,)))
  return sorted(found)


def class_of(
  a: Automaton, s: PreperiodicAddress, *, bound: int = DEFAULT_CLASS_BOUND
) -> EquivalenceClass:
  """The equivalence class of s under the transitive closure of acceptance.

  Args:
      a: A validated automaton.
      s: The address.
      bound: Largest class size accepted.

  Returns:
      The class with members in canonical order.

  Raises:
      UsageError: If bound < 2.
      ClassBoundExceeded: If the class grows past `bound`; `partial` holds
        the members found so far.

  """
  if bound < 2:
    raise UsageError(f"Class bound must be at least 2, got {bound}")
  members = {s}
  queue = deque([s])
  while queue:
    current = queue.popleft()
    try:
      found = partners(a, current, bound=bound)
    except ClassBoundExceeded as e:
      raise ClassBoundExceeded(
        str(e), bound=bound, partial=sorted(members)
      ) from e
    for t in found:
      if t not in members:
        members.add(t)
        queue.append(t)
    if len(members) > bound:
      raise ClassBoundExceeded(
        f"Class of {s} exceeds the bound {bound}",
        bound=bound,
        partial=sorted(members),
      )
  return EquivalenceClass(s, tuple(sorted(members)))


def shift_class(
  a: Automaton,
  s: PreperiodicAddress,
  digit: int,
  *,
  bound: int = DEFAULT_CLASS_BOUND,
) -> EquivalenceClass:
  """The class of digit·s."""
  return class_of(a, s.prepend((digit,)), bound=bound)


@dataclasses.dataclass(frozen=True)
class PcfReport:
  """Verdict of `is_pcf`; `witness` lists states when the verdict is false."""

  pcf: bool
  witness: tuple[str, ...] = ()


def _cycle_components(a: Automaton) -> tuple[nx.MultiDiGraph, list[set[str]]]:
  graph = to_networkx(a, include_initial_diagonal=False)
  components = [
    c
    for c in nx.strongly_connected_components(graph)
    if graph.subgraph(c).number_of_edges() > 0
  ]
  return graph, components


def is_pcf(a: Automaton) -> PcfReport:
  """Decide the post-critically finite criterion.

  The automaton is p.c.f. when, ignoring the diagonal loops of o, every
  cycle is isolated: each strongly connected component with edges is a
  single simple cycle, and no path leads from one such component to
  another.

  Args:
      a: A validated automaton.

  Returns:
      The verdict; the witness is a component with two cycles or a path
      between two cycles.

  """
  graph, components = _cycle_components(a)
  for component in sorted(components, key=sorted):
    if graph.subgraph(component).number_of_edges() != len(component):
      return PcfReport(False, tuple(sorted(component)))
  condensed = nx.condensation(nx.DiGraph(graph))
  mapping = condensed.graph["mapping"]
  cyclic_nodes = {mapping[next(iter(c))] for c in components}
  for source in sorted(cyclic_nodes):
    reached = nx.descendants(condensed, source) & cyclic_nodes
    if reached:
      target = min(reached)
      start = min(condensed.nodes[source]["members"])
      end = min(condensed.nodes[target]["members"])
      return PcfReport(False, tuple(nx.shortest_path(graph, start, end)))
  return PcfReport(True)


def post_critical_pairs(
  a: Automaton,
) -> list[tuple[PreperiodicAddress, PreperiodicAddress]]:
  """Accepted pairs starting with a non-diagonal edge of o.

  Raises:
      UsageError: If the automaton is not p.c.f.

  """
  report = is_pcf(a)
  if not report.pcf:
    raise UsageError(
      f"Automaton is not p.c.f., witness {list(report.witness)}"
    )
  graph, components = _cycle_components(a)
  on_cycle = set().union(*components) if components else set()
  pairs = set()
  stack: list[tuple[str, Word, Word]] = []
  for edge in a.out_edges[a.initial]:
    i, j = edge.label
    if i != j:
      stack.append((edge.target, (i,), (j,)))
  while stack:
    state, u, v = stack.pop()
    if state in on_cycle:
      ps, pt, current = [], [], state
      while True:
        ((_, target, data),) = graph.out_edges(current, data=True)
        ps.append(data["label"][0])
        pt.append(data["label"][1])
        current = target
        if current == state:
          break
      pairs.add(
        (PreperiodicAddress(u, tuple(ps)), PreperiodicAddress(v, tuple(pt)))
      )
      continue
    for edge in a.out_edges[state]:
      stack.append((edge.target, u + (edge.label[0],), v + (edge.label[1],)))
  return sorted(pairs, key=lambda p: (p[0].sort_key(), p[1].sort_key()))


@dataclasses.dataclass(frozen=True)
class CompletenessReport:
  """Verdict of `is_complete`; the witness is a prefix triple (s, t, u)."""

  complete: bool
  witness: tuple[Word, Word, Word] | None = None


def _live_pair_graph(a: Automaton) -> nx.DiGraph:
  """Pairs (p, q) of states that admit an infinite run on (s,t), (t,u)."""
  graph = nx.DiGraph()
  start = (a.initial, a.initial)
  graph.add_node(start)
  queue = deque([start])
  while queue:
    p, q = queue.popleft()
    for ep in a.out_edges[p]:
      for eq in a.out_edges[q]:
        if ep.label[1] != eq.label[0]:
          continue
        target = (ep.target, eq.target)
        if target not in graph:
          queue.append(target)
        graph.add_edge((p, q), target)
  changed = True
  while changed:
    dead = [n for n in graph if graph.out_degree(n) == 0]
    changed = bool(dead)
    graph.remove_nodes_from(dead)
  return graph


def is_complete(a: Automaton) -> CompletenessReport:
  """Decide whether acceptance is already transitive.

  Runs (s, t) and (t, u) in parallel while tracking the run of (s, u).
  The automaton is incomplete exactly when a pair of states with an
  infinite continuation is reached after the (s, u) run has died.

  Args:
      a: A validated automaton.

  Returns:
      The verdict with a witness prefix triple when incomplete.

  """
  live = _live_pair_graph(a)
  start = (a.initial, a.initial, a.initial)
  parents: dict[tuple, tuple | None] = {start: None}
  labels: dict[tuple, tuple[int, int, int]] = {}
  queue = deque([start])
  while queue:
    node = queue.popleft()
    p, q, r = node
    for ep in a.out_edges[p]:
      for eq in a.out_edges[q]:
        i, j = ep.label
        if j != eq.label[0]:
          continue
        k = eq.label[1]
        if (ep.target, eq.target) not in live:
          continue
        r_next = a.step(r, (i, k))
        target = (ep.target, eq.target, r_next)
        if target in parents:
          continue
        parents[target] = node
        labels[target] = (i, j, k)
        if r_next is None:
          witness = _triple_words(target, parents, labels)
          return CompletenessReport(False, witness)
        queue.append(target)
  return CompletenessReport(True)


def _triple_words(node, parents, labels) -> tuple[Word, Word, Word]:
  s, t, u = [], [], []
  while parents[node] is not None:
    i, j, k = labels[node]
    s.append(i)
    t.append(j)
    u.append(k)
    node = parents[node]
  return tuple(reversed(s)), tuple(reversed(t)), tuple(reversed(u))


@dataclasses.dataclass(frozen=True)
class DiagonalStructure:
  """States reached by diagonal paths and their self-similarity equations."""

  v0: tuple[str, ...]
  d: dict[tuple[str, int], str]
  equations: tuple[str, ...]

  def equations_text(self) -> str:
    """The equation system, one line per state."""
    return "\n".join(self.equations)


def _space_symbol(a: Automaton, state: str) -> str:
  return "X" if state == a.initial else f"X^{state}"


def diagonal_structure(a: Automaton) -> DiagonalStructure:
  """Compute V0, the diagonal successor map and the equation system.

  Accepts automata satisfying only the weak diagonal axiom.

  Args:
      a: The automaton.

  Returns:
      The structure; equations read X^c = h_0^c(X^d(c,0)) ∪ ....

  Raises:
      PreconditionError: If a state of V0 lacks a diagonal edge.

  """
  v0 = diagonal_closure(a)
  ordered = [a.initial] + sorted(v0 - {a.initial})
  d: dict[tuple[str, int], str] = {}
  equations = []
  for state in ordered:
    terms = []
    for i in a.digits:
      label: Label = (i, i)
      target = a.step(state, label)
      if target is None:
        raise PreconditionError(
          f"State {state} has no ({i},{i}) edge",
          state=state,
          digit=i,
        )
      d[(state, i)] = target
      h = f"h_{i}" if state == a.initial else f"h_{i}^{state}"
      terms.append(f"{h}({_space_symbol(a, target)})")
    equations.append(f"{_space_symbol(a, state)} = {' ∪ '.join(terms)}")
  logging.debug("Diagonal structure has %d states", len(ordered))
  return DiagonalStructure(tuple(ordered), d, tuple(equations))
