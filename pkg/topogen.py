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

"""Command-line entry point: topogen <command> [input] [flags]."""

from collections.abc import Callable, Sequence
import dataclasses
import json
import logging
from pathlib import Path
import sys
from typing import Any, TextIO

from absl import app, flags

from address import PreperiodicAddress, parse_word, word_text
from analysis import (
  DEFAULT_CLASS_BOUND,
  class_of,
  diagonal_structure,
  is_complete,
  is_pcf,
  post_critical_pairs,
)
from approximation import (
  DEFAULT_POINT_GUARD,
  build_space,
  connectedness,
  cut_point_evidence,
  parse_point,
  verify_kuratowski_witness,
  word_graph,
)
from automaton import (
  Automaton,
  accept_address_pair,
  accept_word_pair,
  validate,
)
import corpus
from enumeration import (
  DEFAULT_ENUMERATION_GUARD,
  INVOLUTION_ANY,
  Constraints,
  enumerate_automata,
)
from errors import TopogenError, UsageError
from exact_geometry import (
  DEFAULT_STATE_GUARD,
  Ifs,
  neighbor_graph,
  verify_representation,
)
from multi_address import compute_family
from render import DEFAULT_NODE_GUARD, FORMAT_DOT, render
from schemas import (
  AutomatonModel,
  DiagonalStructureModel,
  EquivalenceClassModel,
  FiniteSpaceModel,
  IfsModel,
  KuratowskiWitnessModel,
  TupleAutomatonModel,
  ValidationReportModel,
  dump,
  parse_model,
  to_json,
)

FLAGS = flags.FLAGS
try:
  flags.DEFINE_integer(
    "class_bound", DEFAULT_CLASS_BOUND, "Largest equivalence class size."
  )
  flags.DEFINE_integer(
    "neighbor_state_guard",
    DEFAULT_STATE_GUARD,
    "Largest number of maps explored by the neighbor recursion.",
  )
  flags.DEFINE_float(
    "prune_bound", None, "Neighbor pruning radius; defaults to 2R."
  )
  flags.DEFINE_integer(
    "space_point_guard",
    DEFAULT_POINT_GUARD,
    "Largest number of words in a finite space or word graph.",
  )
  flags.DEFINE_integer(
    "enumeration_guard",
    DEFAULT_ENUMERATION_GUARD,
    "Largest number of candidate assignments in a census.",
  )
  flags.DEFINE_integer(
    "render_node_guard",
    DEFAULT_NODE_GUARD,
    "Largest node count laid out as SVG.",
  )
  flags.DEFINE_integer("level", 1, "Approximation level n.")
  flags.DEFINE_integer(
    "bound", None, "Class bound for this command; overrides --class_bound."
  )
  flags.DEFINE_enum(
    "format", "json", ["json", "dot", "svg"], "Output format."
  )
  flags.DEFINE_string(
    "out", None, "Output file; for `multi` a directory. Stdout when unset."
  )
  flags.DEFINE_integer("num_states", 2, "Census: states beside o.")
  flags.DEFINE_integer("digits", 2, "Census: number of digits.")
  flags.DEFINE_enum(
    "involution",
    INVOLUTION_ANY,
    ["any", "fixed", "swapped"],
    "Census: allowed state involutions.",
  )
  flags.DEFINE_bool(
    "require_complete", False, "Census: keep complete automata only."
  )
  flags.DEFINE_bool(
    "require_connected", True, "Census: keep automata with connected X¹."
  )
  flags.DEFINE_bool(
    "require_finite_class",
    True,
    "Census: keep automata passing the finite-class conditions.",
  )
  flags.DEFINE_bool(
    "weak_axiom4", False, "Relax the diagonal axiom when validating."
  )
  flags.DEFINE_string("ifs", None, "IFS input for `verify-rep`.")
  flags.DEFINE_string(
    "witness", None, "Kuratowski witness JSON for `props`."
  )
except flags.DuplicateFlagError:
  pass
try:
  flags.DEFINE_string(
    "corpus_dir",
    str(corpus.DEFAULT_CORPUS_DIR),
    "Directory with the stored corpus fixtures.",
  )
except flags.DuplicateFlagError:
  pass

CORPUS_PREFIX = "corpus:"
IFS_SUFFIX = ".ifs"


@dataclasses.dataclass(frozen=True)
class Outcome:
  """Text produced by a command and its exit status."""

  text: str
  status: int = 0


def _class_bound() -> int:
  return FLAGS.bound if FLAGS.bound is not None else FLAGS.class_bound


def _json_text(data: Any) -> str:
  return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _read_text(source: str) -> str:
  """Read a file path or "-" for stdin."""
  if source == "-":
    text = sys.stdin.read()
  else:
    path = Path(source)
    if not path.is_file():
      raise UsageError(f"Input file {source} not found")
    text = path.read_text()
  if not text.strip():
    raise UsageError(f"Input {source} is empty")
  return text


def load_automaton_model(source: str) -> AutomatonModel:
  """Automaton JSON from a path, "-" or corpus:<name>."""
  if source.startswith(CORPUS_PREFIX):
    return corpus.load_model(source[len(CORPUS_PREFIX) :], FLAGS.corpus_dir)
  return parse_model(AutomatonModel, _read_text(source))


def load_ifs(source: str) -> Ifs:
  """IFS JSON from a path, "-" or corpus:<name>.ifs."""
  if source.startswith(CORPUS_PREFIX):
    name = source[len(CORPUS_PREFIX) :].removesuffix(IFS_SUFFIX)
    return corpus.load_ifs(name)
  return parse_model(IfsModel, _read_text(source)).to_ifs()


def _single(args: Sequence[str], command: str) -> str:
  if not args:
    raise UsageError(f"`{command}` needs an input")
  return args[0]


def _automaton(args: Sequence[str], command: str) -> Automaton:
  return load_automaton_model(_single(args, command)).to_automaton()


def _document(obj, json_data: Any) -> str:
  if FLAGS.format == "json":
    return _json_text(json_data)
  return render(
    obj,
    FLAGS.format,
    level=FLAGS.level,
    node_guard=FLAGS.render_node_guard,
  )


def cmd_validate(args: Sequence[str]) -> Outcome:
  """Check the axioms; exit 1 when one fails."""
  model = load_automaton_model(_single(args, "validate"))
  weak = FLAGS.weak_axiom4 or bool(model.weak_axiom4)
  report = validate(model.to_automaton(), weak_axiom4=weak)
  return Outcome(
    to_json(ValidationReportModel.from_report(report)),
    0 if report.ok else 1,
  )


def cmd_accept(args: Sequence[str]) -> Outcome:
  """Run a pair of words, or of preperiodic addresses such as 0(1)."""
  if len(args) != 3:
    raise UsageError("`accept` needs an input and two words or addresses")
  a = _automaton(args, "accept")
  u, v = args[1], args[2]
  if "(" in u or "(" in v:
    s, t = PreperiodicAddress.parse(u), PreperiodicAddress.parse(v)
    accepted = accept_address_pair(a, s, t)
    return Outcome(_json_text({"accepted": accepted}), 0 if accepted else 1)
  result = accept_word_pair(a, parse_word(u), parse_word(v))
  data = {"accepted": result.accepted, "state": result.state}
  return Outcome(_json_text(data), 0 if result.accepted else 1)


def cmd_class(args: Sequence[str]) -> Outcome:
  """Equivalence class of an address."""
  if len(args) != 2:
    raise UsageError("`class` needs an input and an address such as 0(1)")
  a = _automaton(args, "class")
  found = class_of(a, PreperiodicAddress.parse(args[1]), bound=_class_bound())
  return Outcome(to_json(EquivalenceClassModel.from_class(found)))


def cmd_enumerate(args: Sequence[str]) -> Outcome:
  """Census of automata with --num_states states over --digits digits."""
  del args
  constraints = Constraints(
    require_finite_class_conditions=FLAGS.require_finite_class,
    require_connected_x1=FLAGS.require_connected,
    require_complete=FLAGS.require_complete,
    involution=FLAGS.involution,
  )
  found = enumerate_automata(
    FLAGS.num_states,
    FLAGS.digits,
    constraints,
    guard=FLAGS.enumeration_guard,
  )
  return Outcome(
    _json_text([dump(AutomatonModel.from_automaton(a)) for a in found])
  )


def cmd_pcf(args: Sequence[str]) -> Outcome:
  """P.c.f. verdict with witness, or the post-critical pairs."""
  a = _automaton(args, "pcf")
  report = is_pcf(a)
  data: dict[str, Any] = {"pcf": report.pcf}
  if report.pcf:
    data["post_critical"] = [
      [str(s), str(t)] for s, t in post_critical_pairs(a)
    ]
  else:
    data["witness"] = list(report.witness)
  return Outcome(_json_text(data))


def cmd_diagonal(args: Sequence[str]) -> Outcome:
  """Diagonal structure of an automaton with a relaxed diagonal."""
  structure = diagonal_structure(_automaton(args, "diagonal"))
  return Outcome(to_json(DiagonalStructureModel.from_structure(structure)))


def cmd_multi(args: Sequence[str]) -> Outcome:
  """K and the final G_k; JSON files go to the --out directory."""
  a = _automaton(args, "multi")
  family = compute_family(a, bound=_class_bound())
  if FLAGS.out:
    directory = Path(FLAGS.out)
    directory.mkdir(parents=True, exist_ok=True)
    for k, t in sorted(family.automata.items()):
      path = directory / f"G{k}.json"
      path.write_text(to_json(TupleAutomatonModel.from_tuple_automaton(t)))
      logging.info("Wrote %s", path)
  arities = ",".join(str(k) for k in family.arities)
  return Outcome(f"K = {{{arities}}}\n")


def cmd_approx(args: Sequence[str]) -> Outcome:
  """Level-n finite space."""
  a = _automaton(args, "approx")
  family = compute_family(a, bound=_class_bound())
  space = build_space(family, FLAGS.level, point_guard=FLAGS.space_point_guard)
  return Outcome(_document(space, dump(FiniteSpaceModel.from_space(space))))


def cmd_props(args: Sequence[str]) -> Outcome:
  """Connectedness, cut-point atoms and an optional Kuratowski witness."""
  a = _automaton(args, "props")
  family = compute_family(a, bound=_class_bound())
  space = build_space(family, FLAGS.level, point_guard=FLAGS.space_point_guard)
  components = connectedness(space)
  data: dict[str, Any] = {
    "level": space.level,
    "arities": list(family.arities),
    "complete": is_complete(a).complete,
    "components": len(components),
    "component_words": sorted(
      (sum(1 for p in c if p.is_word) for c in components), reverse=True
    ),
    "cut_points": [
      str(p) for p in space.atoms if cut_point_evidence(space, p)
    ],
  }
  if FLAGS.witness:
    witness = parse_model(KuratowskiWitnessModel, _read_text(FLAGS.witness))
    verdict = verify_kuratowski_witness(
      space,
      [parse_point(space, v) for v in witness.vertices],
      [[parse_point(space, p) for p in arc] for arc in witness.arcs],
    )
    data["kuratowski"] = dataclasses.asdict(verdict)
  return Outcome(_json_text(data))


def cmd_neighbors(args: Sequence[str]) -> Outcome:
  """Neighbor automaton of an IFS, with its maps."""
  ifs = load_ifs(_single(args, "neighbors"))
  graph = neighbor_graph(
    ifs,
    prune_bound=FLAGS.prune_bound,
    state_guard=FLAGS.neighbor_state_guard,
  )
  a = graph.automaton
  logging.info(
    "Neighbor automaton: %d states, %d edges", len(a.states), len(a.edges)
  )
  model = AutomatonModel.from_automaton(a, state_map=graph.state_map)
  return Outcome(_document(a, dump(model)))


def cmd_verify_rep(args: Sequence[str]) -> Outcome:
  """Check the maps embedded in an automaton against --ifs."""
  model = load_automaton_model(_single(args, "verify-rep"))
  source = FLAGS.ifs or f"{args[0]}{IFS_SUFFIX}"
  check = verify_representation(
    model.to_automaton(), load_ifs(source), model.to_state_map()
  )
  edge = check.failing_edge
  data = {
    "ok": check.ok,
    "failing_edge": None
    if edge is None
    else {"from": edge.source, "label": list(edge.label), "to": edge.target},
    "message": check.message,
  }
  return Outcome(_json_text(data), 0 if check.ok else 1)


def cmd_render(args: Sequence[str]) -> Outcome:
  """DOT or SVG of an automaton."""
  a = _automaton(args, "render")
  fmt = FLAGS.format if FLAGS.format != "json" else FORMAT_DOT
  return Outcome(render(a, fmt, node_guard=FLAGS.render_node_guard))


def cmd_words(args: Sequence[str]) -> Outcome:
  """Level-n word graph."""
  a = _automaton(args, "words")
  graph = word_graph(a, FLAGS.level, point_guard=FLAGS.space_point_guard)
  data = {
    "level": FLAGS.level,
    "vertices": [word_text(w) for w in sorted(graph.nodes)],
    "edges": sorted(
      sorted((word_text(u), word_text(v))) for u, v in graph.edges()
    ),
  }
  return Outcome(_document(graph, data))


def cmd_corpus(args: Sequence[str]) -> Outcome:
  """List fixtures, or print one as automaton or IFS JSON."""
  if not args:
    lines = [f"{name}\t{text}" for name, text in corpus.listing()]
    return Outcome("\n".join(lines) + "\n")
  name = args[0].removeprefix(CORPUS_PREFIX)
  if name.endswith(IFS_SUFFIX):
    ifs = corpus.load_ifs(name.removesuffix(IFS_SUFFIX))
    return Outcome(to_json(IfsModel.from_ifs(ifs)))
  return Outcome(to_json(corpus.load_model(name, FLAGS.corpus_dir)))


COMMANDS: dict[str, Callable[[Sequence[str]], Outcome]] = {
  "validate": cmd_validate,
  "accept": cmd_accept,
  "class": cmd_class,
  "enumerate": cmd_enumerate,
  "pcf": cmd_pcf,
  "diagonal": cmd_diagonal,
  "multi": cmd_multi,
  "approx": cmd_approx,
  "props": cmd_props,
  "neighbors": cmd_neighbors,
  "verify-rep": cmd_verify_rep,
  "render": cmd_render,
  "words": cmd_words,
  "corpus": cmd_corpus,
}


def execute(
  args: Sequence[str],
  stdout: TextIO | None = None,
  stderr: TextIO | None = None,
) -> int:
  """Run one command and return its exit status.

  Errors are reported as a JSON diagnostic on `stderr`: status 2 for usage
  errors, 1 for every other domain error.

  Args:
      args: The command name followed by its positional arguments.
      stdout: Output stream; defaults to sys.stdout.
      stderr: Diagnostic stream; defaults to sys.stderr.

  Returns:
      The exit status.

  """
  stdout = stdout or sys.stdout
  stderr = stderr or sys.stderr
  try:
    if not args or args[0] not in COMMANDS:
      raise UsageError(f"Command must be one of: {', '.join(COMMANDS)}")
    outcome = COMMANDS[args[0]](list(args[1:]))
    if FLAGS.out and args[0] != "multi":
      Path(FLAGS.out).write_text(outcome.text)
      logging.info("Wrote %s", FLAGS.out)
    else:
      stdout.write(outcome.text)
  except TopogenError as e:
    stderr.write(json.dumps(e.to_diagnostic(), ensure_ascii=False) + "\n")
    return e.exit_code
  return outcome.status


def _parse_flags(argv: list[str]) -> list[str]:
  try:
    return FLAGS(argv)
  except flags.Error as e:
    diagnostic = {"error": type(e).__name__, "message": str(e)}
    sys.stderr.write(json.dumps(diagnostic) + "\n")
    sys.exit(UsageError.exit_code)


def main(argv: list[str]) -> None:
  """Entry point for absl.app."""
  sys.exit(execute(argv[1:]))


def run() -> None:
  """Console script entry point."""
  app.run(main, flags_parser=_parse_flags)


if __name__ == "__main__":
  run()
