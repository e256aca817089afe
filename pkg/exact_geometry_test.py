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

"""Tests for exact planar similitudes and neighbor graphs."""

from fractions import Fraction
import itertools

from absl.testing import absltest

from approximation import word_graph
from automaton import language_contained, validate
import corpus
from errors import NotFiniteType, UsageError
from exact_geometry import (
  ExactComplex,
  Ifs,
  Similitude,
  attractor_radius,
  coxeter_relation_check,
  neighbor_graph,
  piece_vertices,
  pieces_touch,
  verify_representation,
)
import topogen_test_utils


class FieldTest(absltest.TestCase):
  """Tests for arithmetic in Q(√-N).

  Validated:
  - products and quotients
  - mixed-field errors
  - the JSON form
  """

  def test_sixth_root_of_unity(self) -> None:
    """Test ω = (1 + √-3)/2.

    Given ω in Q(√-3),
    When it is squared and inverted,
    Then ω² = ω - 1 and 1/ω = conj(ω).
    """
    omega = ExactComplex.of(Fraction(1, 2), Fraction(1, 2), 3)
    self.assertEqual(omega * omega, omega - 1, msg="ω² = ω - 1")
    self.assertEqual(1 / omega, omega.conj(), msg="|ω| = 1")
    self.assertEqual(omega.norm_sq(), 1, msg="Norm")
    self.assertEqual(omega**6, ExactComplex.of(1, 0, 3), msg="ω⁶ = 1")

  def test_mixed_fields(self) -> None:
    """Test combining numbers of different fields.

    Given numbers of Q(i) and Q(√-3),
    When they are added,
    Then UsageError is raised.
    """
    with self.assertRaises(UsageError, msg="Mixed fields"):
      _ = ExactComplex.of(1, 1, 1) + ExactComplex.of(1, 1, 3)
    with self.assertRaises(ZeroDivisionError, msg="Division by zero"):
      _ = ExactComplex.of(1) / ExactComplex.of(0)

  def test_json(self) -> None:
    """Test the [xn, xd, yn, yd] form.

    Given 1/3 + 2√5 i,
    When it is serialized and parsed,
    Then the fractions are kept.
    """
    z = ExactComplex.of("1/3", 2, 5)
    self.assertEqual(z.to_json(), [1, 3, 2, 1], msg="Serialized")
    self.assertEqual(ExactComplex.from_json([1, 3, 2, 1], 5), z, msg="Parsed")
    with self.assertRaises(UsageError, msg="Three entries"):
      ExactComplex.from_json([1, 3, 2], 5)


class SimilitudeTest(absltest.TestCase):
  """Tests for similitudes and systems of them.

  Validated:
  - inverses and composition with reflections
  - IFS checks and word maps
  - the reflection relations of the triangle tiling
  """

  def test_inverse(self) -> None:
    """Test inverses of direct and reflected maps.

    Given z ↦ 2z + 1 and the reflection c of the triangle tiling,
    When they are composed with their inverses,
    Then the identity results.
    """
    f = Similitude(ExactComplex.of(2), ExactComplex.of(1))
    self.assertTrue((f.inverse() @ f).is_identity(), msg="f⁻¹f")
    _, _, c, _ = corpus.triangle_generators()
    self.assertTrue((c @ c).is_identity(), msg="c is an involution")
    self.assertEqual(c.inverse(), c, msg="c⁻¹ = c")

  def test_ifs_checks(self) -> None:
    """Test the IFS invariants.

    Given maps with different ratios or an expanding map,
    When an IFS is built,
    Then UsageError is raised.
    """
    half = Similitude(ExactComplex.of("1/2"), ExactComplex.of(0))
    third = Similitude(ExactComplex.of("1/3"), ExactComplex.of(0))
    double = Similitude(ExactComplex.of(2), ExactComplex.of(0))
    with self.assertRaises(UsageError, msg="Different ratios"):
      Ifs(1, (half, third))
    with self.assertRaises(UsageError, msg="Not a contraction"):
      Ifs(1, (double,))
    with self.assertRaises(UsageError, msg="Declared field differs"):
      Ifs(3, (half,))

  def test_word_map(self) -> None:
    """Test f_u for a word.

    Given the binary IFS,
    When f_01 is applied to 0,
    Then the result is 1/4.
    """
    f = corpus.binary_ifs().word_map((0, 1))
    self.assertEqual(f(ExactComplex.of(0)), ExactComplex.of("1/4"), msg="f01")

  def test_coxeter_relations(self) -> None:
    """Test the reflection group of the triangle tiling.

    Given the generators a, b, c and g,
    When the relations are checked,
    Then all hold, and repeated generators are not faithful.
    """
    a, b, c, g = corpus.triangle_generators()
    report = coxeter_relation_check(a, b, c, g)
    self.assertTrue(report.ok, msg=f"Relations: {report.relations}")
    self.assertFalse(
      coxeter_relation_check(a, a, c, g).faithful, msg="a repeated"
    )


class NeighborGraphTest(topogen_test_utils.TopogenTestBase):
  """Tests for neighbor_graph and representations.

  Validated:
  - intervals, squares and number systems
  - the triangle tiling
  - the five-piece carpet
  - verification of state maps
  - the state guard
  - accepted word pairs against touching pieces
  """

  def test_interval_and_square(self) -> None:
    """Test IFS whose automata are known.

    Given the binary IFS and the 2×2 grid,
    When their neighbor graphs are derived,
    Then they are the binary automaton and the square product.
    """
    self.assert_isomorphic(
      neighbor_graph(corpus.binary_ifs()).automaton, self.load("binary")
    )
    self.assert_isomorphic(
      corpus.grid_automaton(2), self.load("square_complete")
    )
    self.assert_isomorphic(
      neighbor_graph(corpus.base_neg2_ifs()).automaton,
      self.load("base_neg2"),
    )

  def test_number_systems(self) -> None:
    """Test the intervals of base 3 and base -3.

    Given the IFS (z + d)/b for b = 3 and b = -3,
    When their neighbor graphs are derived,
    Then each has two mutually inverse states besides o.
    """
    for base in [3, -3]:
      a = corpus.number_system_automaton(base)
      self.assertLen(a.states, 3, msg=f"Base {base}")
      _, left, right = a.states
      self.assertEqual(a.inverse[left], right, msg=f"Base {base} inverse")
      self.assertTrue(validate(a).ok, msg=f"Base {base} is valid")

  def test_triangle_tiling(self) -> None:
    """Test the neighbor graph of the triangle tiling.

    Given the IFS g⁻¹c, g⁻¹, g⁻¹a,
    When its neighbor graph is derived,
    Then it has 16 states besides o and 42 edges between them.
    """
    graph = neighbor_graph(corpus.triangle_ifs())
    a = graph.automaton
    self.assertLen(a.states, 17, msg="o and 16 neighbor maps")
    self.assertLen(
      [e for e in a.edges if e.source != a.initial],
      42,
      msg="Edges leaving neighbor states",
    )
    self.assertTrue(
      verify_representation(a, corpus.triangle_ifs(), graph.state_map).ok,
      msg="Neighbor maps represent the automaton",
    )

  def test_stored_triangle_representation(self) -> None:
    """Test the stored triangle automaton.

    Given the stored triangle automaton and the maps derived along paths,
    When the representation is verified,
    Then it holds and the states map to the reflections.
    """
    ifs = corpus.triangle_ifs()
    a = self.load("triangle")
    maps = corpus.derive_state_map(a, ifs)
    self.assertTrue(verify_representation(a, ifs, maps).ok, msg="Verified")
    ref_a, ref_b, ref_c, _ = corpus.triangle_generators()
    self.assertEqual(
      (maps["a"], maps["b"], maps["c"]),
      (ref_a, ref_b, ref_c),
      msg="Reflections",
    )

  def test_wrong_map_is_reported(self) -> None:
    """Test a broken representation.

    Given the binary maps with the two neighbor maps exchanged,
    When the representation is verified,
    Then a failing edge is reported.
    """
    graph = neighbor_graph(corpus.binary_ifs())
    h1, h2 = graph.state_map["h1"], graph.state_map["h2"]
    swapped = {**graph.state_map, "h1": h2, "h2": h1}
    check = verify_representation(graph.automaton, corpus.binary_ifs(), swapped)
    self.assertFalse(check.ok, msg="Exchanged maps")
    self.assertIsNotNone(check.failing_edge, msg=check.message)
    with self.assertRaises(UsageError, msg="Missing map"):
      verify_representation(
        graph.automaton, corpus.binary_ifs(), {"o": graph.state_map["o"]}
      )

  def test_carpet(self) -> None:
    """Test the five-piece carpet over Q(√-15).

    Given the stored carpet automaton,
    When it is compared with the derived neighbor graph,
    Then its language is contained in the derived one.
    """
    derived = neighbor_graph(corpus.dog_carpet_ifs()).automaton
    contained, witness = language_contained(
      self.load("dog_carpet"), derived, 6
    )
    self.assertTrue(contained, msg=f"Counterexample {witness}")

  def test_carpet_representation(self) -> None:
    """Test the carpet maps over Q(√-15).

    Given λ = (3 + √-15)/2, a = (1 + √-15)/4 and the maps derived along
    paths of the stored carpet automaton,
    When the field identities and the representation are checked,
    Then λ² - 3λ + 6 = 0, a = (λ - 1)/2 with |a| = 1, and the maps
    represent the automaton.
    """
    w = ExactComplex.of(0, 1, 15)
    lam = (3 + w) / 2
    a = (1 + w) / 4
    self.assertTrue((lam * lam - 3 * lam + 6).is_zero(), msg="λ² - 3λ + 6")
    self.assertEqual(a, (lam - 1) / 2, msg="a = (λ - 1)/2")
    self.assertEqual(a.norm_sq(), 1, msg="|a|² = 1")
    ifs = corpus.dog_carpet_ifs()
    self.assertEqual(ifs.maps[0].ratio_sq(), Fraction(1, 6), msg="|1/λ|²")
    carpet = self.load("dog_carpet")
    maps = corpus.derive_state_map(carpet, ifs)
    self.assertEqual(maps["h"], Similitude(-1 + 0 * w, 0 * w), msg="h ↦ -z")
    self.assertEqual(maps["p"], Similitude(a, 1 + 0 * w), msg="p ↦ az + 1")
    check = verify_representation(carpet, ifs, maps)
    self.assertTrue(check.ok, msg=check.message)

  def test_state_guard(self) -> None:
    """Test the bound on explored maps.

    Given a guard of one map,
    When the triangle neighbor graph is derived,
    Then NotFiniteType is raised.
    """
    with self.assertRaises(NotFiniteType, msg="More than one map"):
      neighbor_graph(corpus.triangle_ifs(), state_guard=1)

  def test_pieces_touch(self) -> None:
    """Test the corner check on the interval.

    Given the pieces of the binary interval with hull {0, 1},
    When pairs of pieces are compared,
    Then adjacent pieces touch and distant ones do not.
    """
    ifs = corpus.binary_ifs()
    hull = [ExactComplex.of(0), ExactComplex.of(1)]
    self.assertTrue(pieces_touch(ifs, (0,), (1,), hull), msg="Halves")
    self.assertFalse(pieces_touch(ifs, (0, 0), (1, 1), hull), msg="Ends")

  def test_touching_pieces_match_word_graph(self) -> None:
    """Test accepted word pairs against the geometry.

    Given the interval and the square with their corner hulls,
    When every pair of distinct level-n pieces is compared for n ≤ 3,
    Then the pieces touch exactly when the pair is accepted.
    """
    hull = [ExactComplex.of(x, y) for x, y in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    cases = [
      ("binary", corpus.binary_ifs(), hull[:2]),
      ("square_complete", corpus.grid_ifs(2), hull),
    ]
    for name, ifs, corners in cases:
      a = self.load(name)
      for n in range(1, 4):
        graph = word_graph(a, n)
        for u, v in itertools.combinations(sorted(graph.nodes), 2):
          self.assertEqual(
            graph.has_edge(u, v),
            pieces_touch(ifs, u, v, corners),
            msg=f"{name} {u} {v}",
          )

  def test_attractor_bounds(self) -> None:
    """Test the attractor radius and piece corners.

    Given the binary interval,
    When its radius and the corners of piece 1 are computed,
    Then the unit ball holds [0, 1] and the piece spans [1/2, 1].
    """
    ifs = corpus.binary_ifs()
    self.assertAlmostEqual(attractor_radius(ifs), 1.0, msg="max|f(0)|/(1-r)")
    hull = [ExactComplex.of(0), ExactComplex.of(1)]
    self.assertEqual(
      piece_vertices(ifs, (1,), hull), [0.5 + 0j, 1 + 0j], msg="Corners"
    )


if __name__ == "__main__":
  absltest.main()
