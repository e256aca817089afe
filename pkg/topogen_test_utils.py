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

"""Shared utilities for topogen tests."""

from collections.abc import Iterable
import io

from absl import flags
from absl.testing import absltest

from address import PreperiodicAddress, parse_word
from analysis import EquivalenceClass
from automaton import Automaton, accept_word_pair, is_isomorphic
import corpus
import topogen

# A K3,3 in the level-4 space of the exotic fixture; "Y" is the wildcard.
EXOTIC_WITNESS_VERTICES = ["012Y", "112Y", "212Y", "Y120", "Y122", "110Y"]
EXOTIC_WITNESS_ARCS = [
  ["012Y", "0120", "Y120"],
  ["112Y", "1120", "Y120"],
  ["212Y", "2120", "Y120"],
  ["012Y", "0122", "Y122"],
  ["112Y", "1122", "Y122"],
  ["212Y", "2122", "Y122"],
  ["012Y", "0121", "01Y1", "0101", "010Y", "0102", "Y102", "1102", "110Y"],
  ["112Y", "1121", "11Y1", "1101", "110Y"],
  ["212Y", "2121", "21Y1", "2101", "210Y", "2100", "Y100", "1100", "110Y"],
]

FLAGS = flags.FLAGS
try:
  flags.DEFINE_string(
    "corpus_dir",
    str(corpus.DEFAULT_CORPUS_DIR),
    "Directory with the stored corpus fixtures.",
  )
except flags.DuplicateFlagError:
  pass


def addresses(*texts: str) -> list[PreperiodicAddress]:
  """Parse addresses such as "0(1)"."""
  return [PreperiodicAddress.parse(t) for t in texts]


class TopogenTestBase(absltest.TestCase):
  """Base class for topogen tests providing fixtures and assertions."""

  def load(self, name: str) -> Automaton:
    """Load a corpus automaton by name."""
    return corpus.load_automaton(name, FLAGS.corpus_dir)

  def assert_accepts(self, a: Automaton, u: str, v: str) -> None:
    """Assert that the word pair (u, v) is accepted."""
    result = accept_word_pair(a, parse_word(u), parse_word(v))
    self.assertTrue(result.accepted, msg=f"Expected ({u}, {v}) accepted")

  def assert_rejects(self, a: Automaton, u: str, v: str) -> None:
    """Assert that the word pair (u, v) is rejected."""
    result = accept_word_pair(a, parse_word(u), parse_word(v))
    self.assertFalse(
      result.accepted,
      msg=f"Expected ({u}, {v}) rejected, reached {result.state}",
    )

  def assert_same_members(
    self, found: EquivalenceClass, expected: Iterable[str]
  ) -> None:
    """Assert that a class has exactly the given members."""
    self.assertEqual(
      sorted(str(s) for s in found.members),
      sorted(str(s) for s in addresses(*expected)),
      msg=f"Unexpected members of the class of {found.input}",
    )

  def assert_isomorphic(
    self, a: Automaton, b: Automaton, *, rename_digits: bool = True
  ) -> None:
    """Assert that two automata agree up to renaming."""
    self.assertTrue(
      is_isomorphic(a, b, rename_digits=rename_digits),
      msg=f"Automata differ:\n{a}\n{b}",
    )

  def run_cli(self, *args: str) -> tuple[int, str, str]:
    """Run a topogen command in-process.

    Returns:
        The exit status, stdout text and stderr text.

    """
    stdout, stderr = io.StringIO(), io.StringIO()
    status = topogen.execute(list(args), stdout, stderr)
    return status, stdout.getvalue(), stderr.getvalue()
