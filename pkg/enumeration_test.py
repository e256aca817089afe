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

"""Tests for the census of small automata."""

from absl.testing import absltest

from automaton import is_isomorphic, validate
import corpus
from enumeration import (
  INVOLUTION_SWAPPED,
  Constraints,
  enumerate_automata,
  estimate_candidates,
)
from errors import GuardExceeded, UsageError
import topogen_test_utils


class EnumerationTest(topogen_test_utils.TopogenTestBase):
  """Tests for enumerate_automata.

  Validated:
  - the interval automata over two digits
  - the number systems over three digits
  - trivial sizes
  - guards and option errors
  """

  def test_intervals_over_two_digits(self) -> None:
    """Test the census of two states over two digits.

    Given two states besides o, two digits and every filter on,
    When the census runs,
    Then exactly the binary, base -2 and tent automata are found.
    """
    constraints = Constraints(require_complete=True)
    found = enumerate_automata(2, 2, constraints)
    self.assertLen(found, 3, msg="Three interval codings")
    for name in ["binary", "base_neg2", "tent"]:
      self.assertTrue(
        any(is_isomorphic(a, self.load(name)) for a in found),
        msg=f"{name} is in the census",
      )
    for a in found:
      self.assertTrue(validate(a).ok, msg=f"Census output is valid: {a}")

  def test_number_systems_over_three_digits(self) -> None:
    """Test the census with swapped inverses.

    Given two mutually inverse states over three digits,
    When the census runs with completeness required,
    Then the base 3 and base -3 automata are among the results.
    """
    constraints = Constraints(
      require_complete=True, involution=INVOLUTION_SWAPPED
    )
    found = enumerate_automata(2, 3, constraints)
    for base in [3, -3]:
      expected = corpus.number_system_automaton(base)
      self.assertTrue(
        any(is_isomorphic(a, expected) for a in found),
        msg=f"Base {base} is in the census",
      )

  def test_no_states(self) -> None:
    """Test the census without states besides o.

    Given zero states,
    When the census runs with and without the connectedness filter,
    Then only the diagonal automaton exists, and it is disconnected.
    """
    loose = Constraints(require_connected_x1=False)
    found = enumerate_automata(0, 2, loose)
    self.assertLen(found, 1, msg="Only o")
    self.assertEqual(found[0].states, ("o",), msg="States")
    self.assertEmpty(enumerate_automata(0, 2), msg="X¹ is two points")

  def test_guards(self) -> None:
    """Test the census limits.

    Given sizes beyond the limits or a tiny guard,
    When the census runs,
    Then GuardExceeded carries the estimate.
    """
    with self.assertRaises(GuardExceeded, msg="Too many states"):
      enumerate_automata(5, 2)
    with self.assertRaises(GuardExceeded, msg="Tiny guard") as raised:
      enumerate_automata(2, 2, guard=1)
    self.assertEqual(
      raised.exception.estimate,
      estimate_candidates(2, 2, "any"),
      msg="Estimate of the search",
    )

  def test_invalid_options(self) -> None:
    """Test the option errors.

    Given a negative size or an unknown involution mode,
    When the census is configured,
    Then UsageError is raised.
    """
    with self.assertRaises(UsageError, msg="Negative state count"):
      enumerate_automata(-1, 2)
    with self.assertRaises(UsageError, msg="Unknown involution"):
      Constraints(involution="mirror")


if __name__ == "__main__":
  absltest.main()
