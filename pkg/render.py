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

"""DOT and SVG documents for automata, finite spaces and word graphs."""

from collections.abc import Iterable, Sequence
import logging

import graphviz
import networkx as nx

from address import word_text
from approximation import FiniteSpace
from automaton import Automaton
from errors import GuardExceeded, TopogenError, UsageError
from multi_address import TupleAutomaton

DEFAULT_NODE_GUARD = 400
FORMAT_DOT = "dot"
FORMAT_SVG = "svg"

Renderable = Automaton | TupleAutomaton | FiniteSpace | nx.Graph


def _label_text(labels: Iterable[Sequence[int]]) -> str:
  """Labels as "(i,j),(k,l)" in sorted order."""
  return ",".join(
    "(" + ",".join(str(d) for d in label) + ")" for label in sorted(labels)
  )


def _grouped(
  edges: Iterable[tuple[str, str, Sequence[int]]],
) -> list[tuple[str, str, str]]:
  groups: dict[tuple[str, str], list[Sequence[int]]] = {}
  for source, target, label in edges:
    groups.setdefault((source, target), []).append(tuple(label))
  return [
    (source, target, _label_text(labels))
    for (source, target), labels in sorted(groups.items())
  ]


def automaton_graph(a: Automaton) -> graphviz.Digraph:
  """One node per state, one edge per state pair with all its labels."""
  dot = graphviz.Digraph("automaton", graph_attr={"rankdir": "LR"})
  for state in sorted(a.states):
    shape = "doublecircle" if state == a.initial else "circle"
    dot.node(state, shape=shape)
  for source, target, label in _grouped(
    (e.source, e.target, e.label) for e in a.edges
  ):
    dot.edge(source, target, label=label)
  return dot


def tuple_automaton_graph(t: TupleAutomaton) -> graphviz.Digraph:
  """Tuple states named by their pair entries; labels are digit tuples."""
  dot = graphviz.Digraph(
    f"tuples{t.arity}", graph_attr={"rankdir": "LR"}
  )
  names = {s: t.state_name(s) for s in t.states}
  for state in sorted(t.states, key=names.__getitem__):
    shape = "doublecircle" if state == t.initial else "box"
    dot.node(names[state], shape=shape)
  for source, target, label in _grouped(
    (names[e.source], names[e.target], e.label) for e in t.edges
  ):
    dot.edge(source, target, label=label)
  return dot


def space_graph(space: FiniteSpace) -> graphviz.Graph:
  """Comparability graph of a finite space; atoms drawn as boxes."""
  dot = graphviz.Graph(f"level{space.level}")
  for point in sorted(space.points):
    dot.node(str(point), shape="ellipse" if point.is_word else "box")
  pairs = sorted(
    tuple(sorted((str(x), str(y)))) for x, y in space.comparability.edges()
  )
  for x, y in pairs:
    dot.edge(x, y)
  return dot


def word_graph_document(graph: nx.Graph, level: int) -> graphviz.Graph:
  """The level-n word graph with words as node names."""
  dot = graphviz.Graph(f"words{level}")
  for word in sorted(graph.nodes):
    dot.node(word_text(word))
  pairs = sorted(
    tuple(sorted((word_text(u), word_text(v)))) for u, v in graph.edges()
  )
  for u, v in pairs:
    dot.edge(u, v)
  return dot


def _node_count(obj: Renderable) -> int:
  if isinstance(obj, Automaton | TupleAutomaton):
    return len(obj.states)
  if isinstance(obj, FiniteSpace):
    return len(obj.points)
  return obj.number_of_nodes()


def _document(obj: Renderable, level: int) -> graphviz.Graph:
  if isinstance(obj, Automaton):
    return automaton_graph(obj)
  if isinstance(obj, TupleAutomaton):
    return tuple_automaton_graph(obj)
  if isinstance(obj, FiniteSpace):
    return space_graph(obj)
  if isinstance(obj, nx.Graph):
    return word_graph_document(obj, level)
  raise UsageError(f"Cannot render {type(obj).__name__}")


def render(
  obj: Renderable,
  fmt: str = FORMAT_DOT,
  *,
  level: int = 0,
  node_guard: int = DEFAULT_NODE_GUARD,
) -> str:
  """Render an object as a DOT or SVG document.

  DOT output is canonical: nodes and edges appear in sorted order and
  parallel edges are merged into one edge with comma-joined labels.

  Args:
      obj: Automaton, tuple automaton, finite space or word graph.
      fmt: "dot" or "svg".
      level: Level of a word graph, used in the graph name.
      node_guard: Largest node count laid out as SVG.

  Returns:
      The document text.

  Raises:
      GuardExceeded: If SVG is requested for more than `node_guard` nodes.
      TopogenError: If the Graphviz `dot` program is not installed.

  """
  if fmt not in (FORMAT_DOT, FORMAT_SVG):
    raise UsageError(f"Unknown render format {fmt!r}")
  document = _document(obj, level)
  if fmt == FORMAT_DOT:
    return document.source
  nodes = _node_count(obj)
  if nodes > node_guard:
    raise GuardExceeded(
      f"{nodes} nodes exceed the SVG guard of {node_guard}; use --format=dot",
      estimate=nodes,
      guard=node_guard,
    )
  logging.info("Laying out %d nodes", nodes)
  try:
    return document.pipe(format=FORMAT_SVG, encoding="utf-8")
  except graphviz.ExecutableNotFound as e:
    raise TopogenError(
      "Graphviz 'dot' is not installed; use --format=dot"
    ) from e
