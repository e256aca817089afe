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

"""Tests for equivalence classes and structural properties."""

from absl.testing import absltest

from address import word_text
from analysis import (
  PERIODIC_MEMBER,
  SHIFTED_PARTNER,
  check_finite_class_necessary_conditions,
  class_of,
  diagonal_structure,
  is_complete,
  is_pcf,
  post_critical_pairs,
  shift_class,
)
from automaton import Automaton
from errors import ClassBoundExceeded, PreconditionError, UsageError
import topogen_test_utils


def _periodic_partner() -> Automaton:
  """Accepts (0^∞, 10^∞): the point 0^∞ would have a second address."""
  return Automaton.build(
    2,
    ["o", "x", "y"],
    "o",
    {"o": "o", "x": "y", "y": "x"},
    [
      ("o", (0, 0), "o"),
      ("o", (1, 1), "o"),
      ("o", (0, 1), "x"),
      ("o", (1, 0), "y"),
      ("x", (0, 0), "x"),
      ("y", (0, 0), "y"),
    ],
  )


def _shifted_partner() -> Automaton:
  """Accepts (012^∞, 12^∞), a pair related by the shift."""
  return Automaton.build(
    3,
    ["o", "x", "x_inv", "y", "y_inv"],
    "o",
    {"o": "o", "x": "x_inv", "x_inv": "x", "y": "y_inv", "y_inv": "y"},
    [
      *(("o", (i, i), "o") for i in range(3)),
      ("o", (0, 1), "x"),
      ("o", (1, 0), "x_inv"),
      ("x", (1, 2), "y"),
      ("x_inv", (2, 1), "y_inv"),
      ("y", (2, 2), "y"),
      ("y_inv", (2, 2), "y_inv"),
    ],
  )


class FiniteClassTest(topogen_test_utils.TopogenTestBase):
  """Tests for the necessary finite-class conditions.

  Validated:
  - clean corpus fixtures
  - periodic members and shifted partners
  """

  def test_corpus_is_clean(self) -> None:
    """Test fixtures with finite classes.

    Given fixtures whose classes are known to be finite,
    When the conditions are checked,
    Then no violation is reported.
    """
    for name in [
      "binary",
      "base_neg2",
      "tent",
      "hata_complete",
      "exotic",
      "triangle",
      "square_complete",
    ]:
      report = check_finite_class_necessary_conditions(self.load(name))
      self.assertTrue(report.clean, msg=f"{name}: {report.violations}")

  def test_periodic_member(self) -> None:
    """Test a periodic address with a partner.

    Given an automaton accepting (0^∞, 10^∞),
    When the conditions are checked,
    Then a periodic member is reported.
    """
    report = check_finite_class_necessary_conditions(_periodic_partner())
    self.assertIn(
      PERIODIC_MEMBER,
      {v.kind for v in report.violations},
      msg="0^∞ is periodic",
    )

  def test_shifted_partner(self) -> None:
    """Test partners related by the shift.

    Given an automaton accepting (012^∞, 12^∞),
    When the conditions are checked,
    Then a shifted partner is reported.
    """
    report = check_finite_class_necessary_conditions(_shifted_partner())
    self.assertIn(
      SHIFTED_PARTNER,
      {v.kind for v in report.violations},
      msg="12^∞ is the shift of 012^∞",
    )


class ClassOfTest(topogen_test_utils.TopogenTestBase):
  """Tests for equivalence classes.

  Validated:
  - two-point and three-point classes
  - transitivity through incomplete automata
  - class bound and partial results
  - the shift relation between classes
  """

  def test_binary_class(self) -> None:
    """Test the midpoint of the interval.

    Given the binary automaton,
    When the class of 0(1) is computed,
    Then it is {0(1), 1(0)}, while (0) is alone.
    """
    a = self.load("binary")
    s, t = topogen_test_utils.addresses("0(1)", "(0)")
    self.assert_same_members(class_of(a, s), ["0(1)", "1(0)"])
    self.assert_same_members(class_of(a, t), ["(0)"])

  def test_branch_point_closes_transitively(self) -> None:
    """Test the Hata tree branch point.

    Given both Hata tree automata,
    When the class of 0(1) is computed,
    Then both give the three addresses of the branch point.
    """
    (s,) = topogen_test_utils.addresses("0(1)")
    for name in ["hata_incomplete", "hata_complete"]:
      self.assert_same_members(
        class_of(self.load(name), s), ["0(1)", "1(0)", "2(0)"]
      )

  def test_exotic_triple_point(self) -> None:
    """Test the triple point of the exotic space.

    Given the exotic automaton,
    When the class of 01(0) is computed,
    Then its three members differ only in the first digit.
    """
    (s,) = topogen_test_utils.addresses("01(0)")
    found = class_of(self.load("exotic"), s)
    self.assert_same_members(found, ["01(0)", "11(0)", "21(0)"])
    self.assertEqual(found.size, 3, msg="Class size")

  def test_class_partition(self) -> None:
    """Test that classes partition the addresses.

    Given each member of a class,
    When its own class is computed,
    Then it equals the original class.
    """
    a = self.load("hata_complete")
    (s,) = topogen_test_utils.addresses("0(1)")
    found = class_of(a, s)
    for member in found.members:
      self.assertEqual(
        class_of(a, member).members,
        found.members,
        msg=f"Class of {member}",
      )

  def test_bound(self) -> None:
    """Test the class bound.

    Given the three-point class of the Hata tree,
    When it is computed with bound 2,
    Then ClassBoundExceeded carries the partial class.
    """
    a = self.load("hata_complete")
    (s,) = topogen_test_utils.addresses("0(1)")
    with self.assertRaises(ClassBoundExceeded, msg="Three > 2") as raised:
      class_of(a, s, bound=2)
    self.assertGreaterEqual(
      len(raised.exception.partial), 2, msg="Partial class"
    )
    with self.assertRaises(UsageError, msg="Bound below 2"):
      class_of(a, s, bound=1)

  def test_shift_class(self) -> None:
    """Test prepending a digit.

    Given the address (1) of the binary automaton,
    When the class of 0·(1) is computed,
    Then it is the midpoint class.
    """
    (s,) = topogen_test_utils.addresses("(1)")
    self.assert_same_members(
      shift_class(self.load("binary"), s, 0), ["0(1)", "1(0)"]
    )


class PcfTest(topogen_test_utils.TopogenTestBase):
  """Tests for the p.c.f. criterion and post-critical pairs.

  Validated:
  - verdicts on the corpus
  - witnesses of failure
  - post-critical pairs of the interval automata
  """

  def test_verdicts(self) -> None:
    """Test the p.c.f. verdicts.

    Given fixtures with isolated cycles and with merged cycles,
    When the criterion is applied,
    Then the verdicts follow the cycle structure.
    """
    expected = {
      "binary": True,
      "base_neg2": True,
      "tent": True,
      "hata_complete": True,
      "gasket": True,
      "exotic": False,
      "triangle": False,
      "square_complete": False,
    }
    for name, pcf in expected.items():
      self.assertEqual(is_pcf(self.load(name)).pcf, pcf, msg=name)

  def test_witness(self) -> None:
    """Test the failure witness.

    Given the exotic automaton, whose state c has two loops,
    When the criterion is applied,
    Then the witness is the component {c}.
    """
    self.assertEqual(
      is_pcf(self.load("exotic")).witness, ("c",), msg="Two loops at c"
    )

  def test_post_critical_pairs(self) -> None:
    """Test the pairs leaving o.

    Given the binary and tent automata,
    When post-critical pairs are listed,
    Then they are the expected address pairs.
    """
    expected = {
      "binary": [("0(1)", "1(0)"), ("1(0)", "0(1)")],
      "tent": [("01(0)", "11(0)"), ("11(0)", "01(0)")],
    }
    for name, pairs in expected.items():
      found = [
        (str(s), str(t)) for s, t in post_critical_pairs(self.load(name))
      ]
      self.assertEqual(found, pairs, msg=name)
    with self.assertRaises(UsageError, msg="Exotic is not p.c.f."):
      post_critical_pairs(self.load("exotic"))


class CompletenessTest(topogen_test_utils.TopogenTestBase):
  """Tests for transitivity of acceptance.

  Validated:
  - complete and incomplete fixtures
  - the witness triple
  """

  def test_verdicts(self) -> None:
    """Test completeness on the corpus.

    Given fixtures with and without closed classes,
    When completeness is decided,
    Then the incomplete Hata tree and edge-only square fail.
    """
    expected = {
      "binary": True,
      "base_neg2": True,
      "tent": True,
      "exotic": True,
      "hata_complete": True,
      "square_complete": True,
      "hata_incomplete": False,
      "square_incomplete": False,
    }
    for name, complete in expected.items():
      self.assertEqual(
        is_complete(self.load(name)).complete, complete, msg=name
      )

  def test_witness_triple(self) -> None:
    """Test the witness of incompleteness.

    Given the incomplete Hata tree,
    When completeness is decided,
    Then the witness (s, t, u) has (s, t) and (t, u) accepted but not (s, u).
    """
    a = self.load("hata_incomplete")
    s, t, u = is_complete(a).witness
    self.assertLen({len(s), len(t), len(u)}, 1, msg="Equal lengths")
    self.assert_accepts(a, word_text(s), word_text(t))
    self.assert_accepts(a, word_text(t), word_text(u))
    self.assert_rejects(a, word_text(s), word_text(u))


class DiagonalStructureTest(topogen_test_utils.TopogenTestBase):
  """Tests for the diagonal structure.

  Validated:
  - V0, the successor map and the equations
  - the precondition on diagonal edges
  """

  def test_relaxed_diagonal(self) -> None:
    """Test the automaton with a second diagonal state.

    Given the relaxed-diagonal fixture,
    When its diagonal structure is computed,
    Then V0 = {o, c} and the equations couple X and X^c.
    """
    structure = diagonal_structure(self.load("weak_axiom4"))
    self.assertEqual(structure.v0, ("o", "c"), msg="V0")
    self.assertEqual(structure.d[("o", 1)], "c", msg="d(o, 1)")
    self.assertEqual(
      structure.equations,
      ("X = h_0(X) ∪ h_1(X^c)", "X^c = h_0^c(X^c) ∪ h_1^c(X^c)"),
      msg="Equation system",
    )

  def test_plain_diagonal(self) -> None:
    """Test an automaton satisfying the strict diagonal axiom.

    Given the binary automaton,
    When its diagonal structure is computed,
    Then V0 = {o} and X = h_0(X) ∪ h_1(X).
    """
    structure = diagonal_structure(self.load("binary"))
    self.assertEqual(structure.v0, ("o",), msg="V0")
    self.assertEqual(
      structure.equations_text(), "X = h_0(X) ∪ h_1(X)", msg="Equation"
    )

  def test_precondition(self) -> None:
    """Test a diagonal state without a diagonal edge.

    Given the relaxed fixture without the (1,1) loop of c,
    When its diagonal structure is computed,
    Then PreconditionError names c and digit 1.
    """
    a = self.load("weak_axiom4").replace_edges(remove=[("c", (1, 1), "c")])
    with self.assertRaises(PreconditionError, msg="c lacks (1,1)") as raised:
      diagonal_structure(a)
    self.assertEqual(raised.exception.state, "c", msg="State")
    self.assertEqual(raised.exception.digit, 1, msg="Digit")


if __name__ == "__main__":
  absltest.main()
