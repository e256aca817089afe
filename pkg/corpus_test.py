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

"""Tests for the fixture corpus."""

from absl.testing import absltest

import corpus
from errors import UsageError
from exact_geometry import ExactComplex, Similitude, verify_representation
import topogen_test_utils


class CorpusTest(topogen_test_utils.TopogenTestBase):
  """Tests for fixture lookup and embedded maps.

  Validated:
  - listing and lookup errors
  - derived maps of every IFS fixture
  - generated fixtures
  """

  def test_listing(self) -> None:
    """Test the fixture listing.

    Given the corpus,
    When it is listed,
    Then every fixture appears once and IFS fixtures are marked.
    """
    listing = dict(corpus.listing())
    self.assertEqual(set(listing), set(corpus.FIXTURES), msg="Names")
    self.assertTrue(listing["triangle"].endswith("[ifs]"), msg="Marked")
    self.assertFalse(listing["exotic"].endswith("[ifs]"), msg="Unmarked")

  def test_unknown_fixture(self) -> None:
    """Test lookup errors.

    Given an unknown name and a fixture without an IFS,
    When they are loaded,
    Then UsageError is raised.
    """
    with self.assertRaises(UsageError, msg="Unknown name"):
      corpus.fixture("moebius")
    with self.assertRaises(UsageError, msg="No IFS"):
      corpus.load_ifs("exotic")

  def test_embedded_maps_represent(self) -> None:
    """Test the maps attached to IFS fixtures.

    Given every fixture that carries maps,
    When the maps are verified against its IFS,
    Then each representation holds.
    """
    for name, entry in corpus.FIXTURES.items():
      if entry.ifs is None:
        continue
      model = corpus.load_model(name)
      check = verify_representation(
        model.to_automaton(), corpus.load_ifs(name), model.to_state_map()
      )
      self.assertTrue(check.ok, msg=f"{name}: {check.message}")

  def test_carpet_maps(self) -> None:
    """Test the carpet fixture.

    Given the stored carpet automaton,
    When it is loaded,
    Then it carries the named states with h ↦ -z and p ↦ az + 1.
    """
    model = corpus.load_model("dog_carpet")
    self.assertEqual(
      set(model.states),
      {"o", "h", "p", "p_inv", "q", "q_inv"},
      msg="States",
    )
    maps = model.to_state_map()
    w = ExactComplex.of(0, 1, 15)
    a = (1 + w) / 4
    self.assertEqual(
      maps["h"], Similitude(-1 + 0 * w, 0 * w), msg="h"
    )
    self.assertEqual(
      maps["p"], Similitude(a, ExactComplex.of(1, 0, 15)), msg="p"
    )

  def test_generated_fixtures(self) -> None:
    """Test fixtures built on load.

    Given the gasket builders of dimension 2 and 3,
    When they are loaded,
    Then they have 3·2 and 4·3 neighbor states.
    """
    self.assertLen(self.load("gasket").states, 7, msg="o and six ij")
    self.assertLen(self.load("tetrahedron").states, 13, msg="o and 12 ij")
    with self.assertRaises(UsageError, msg="Dimension 0"):
      corpus.gasket_automaton(0)


if __name__ == "__main__":
  absltest.main()
