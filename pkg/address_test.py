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

"""Tests for eventually periodic addresses."""

import itertools

from absl.testing import absltest

from address import PreperiodicAddress, digit_symbol, parse_word, word_text
from errors import StructuralError, UsageError


class AddressTest(absltest.TestCase):
  """Tests for the address text form and canonicalization.

  Validated:
  - canonical form of u(w)
  - digit access, prefixes and shifts
  - equality as sequences
  - malformed input
  """

  def test_canonical_form(self) -> None:
    """Test that equal sequences have one representation.

    Given addresses written with redundant preperiods or periods,
    When they are parsed,
    Then they compare equal to their shortest form.
    """
    cases = {
      "0(10)": "(01)",
      "1(11)": "(1)",
      "01(01)": "(01)",
      "011(10)": "011(10)",
    }
    for text, expected in cases.items():
      self.assertEqual(
        str(PreperiodicAddress.parse(text)),
        expected,
        msg=f"Canonical form of {text}",
      )
    self.assertEqual(
      PreperiodicAddress.parse("0(10)"),
      PreperiodicAddress.periodic((0, 1)),
      msg="Equal sequences must compare equal",
    )

  def test_digits_and_prefix(self) -> None:
    """Test digit access beyond the lasso.

    Given the address 01(10), i.e. 0110101010...,
    When digits and prefixes are read,
    Then they follow the infinite sequence.
    """
    s = PreperiodicAddress.parse("01(10)")
    self.assertEqual(s.prefix(6), (0, 1, 1, 0, 1, 0), msg="Prefix of 6")
    self.assertEqual(s.digit(5), 0, msg="Digit at index 5")
    self.assertEqual(s.lasso_size, 4, msg="Lasso size")
    self.assertFalse(s.is_periodic, msg="01(10) has a preperiod")

  def test_shift_and_prepend(self) -> None:
    """Test shifting and prepending.

    Given the address 01(10),
    When three digits are dropped or a digit is prepended,
    Then the results are the expected canonical addresses.
    """
    s = PreperiodicAddress.parse("01(10)")
    self.assertEqual(str(s.shift(3)), "(01)", msg="Shift by three")
    self.assertEqual(str(s.shift(1)), "1(10)", msg="Shift by one")
    self.assertEqual(str(s.prepend((2,))), "201(10)", msg="Prepend 2")

  def test_ordering_is_stable(self) -> None:
    """Test the deterministic order.

    Given several addresses,
    When they are sorted,
    Then the order follows (preperiod, period).
    """
    found = sorted(
      PreperiodicAddress.parse(t) for t in ["1(0)", "(1)", "0(1)", "(0)"]
    )
    self.assertEqual(
      [str(s) for s in found],
      ["(0)", "(1)", "0(1)", "1(0)"],
      msg="Sorted addresses",
    )

  def test_equality_matches_sequences(self) -> None:
    """Test canonical forms against the sequences they denote.

    Given every binary address with preperiod and period of length ≤ 2,
    When two of them are compared,
    Then they are equal exactly when their first 8 digits agree.
    """
    words = [
      w for n in range(3) for w in itertools.product(range(2), repeat=n)
    ]
    found = [
      PreperiodicAddress(u, w) for u in words for w in words if w
    ]
    for s, t in itertools.product(found, repeat=2):
      self.assertEqual(s == t, s.prefix(8) == t.prefix(8), msg=f"{s}, {t}")
      if s == t:
        self.assertEqual(hash(s), hash(t), msg=f"Hash of {s}")

  def test_word_text(self) -> None:
    """Test the symbols of large digits.

    Given digits 10 and 11,
    When they are written as text and parsed back,
    Then letters a and b are used.
    """
    self.assertEqual(word_text((10, 11)), "ab", msg="Letters for 10, 11")
    self.assertEqual(parse_word("ab"), (10, 11), msg="Parse letters")

  def test_malformed_input(self) -> None:
    """Test the errors for malformed input.

    Given texts that are not addresses or words,
    When they are parsed,
    Then structural or usage errors are raised.
    """
    for text in ["01", "0()", "(", "0(1"]:
      with self.assertRaises(StructuralError, msg=f"Address {text!r}"):
        PreperiodicAddress.parse(text)
    with self.assertRaises(StructuralError, msg="Invalid word symbol"):
      parse_word("0-1")
    with self.assertRaises(UsageError, msg="Digit without symbol"):
      digit_symbol(36)


if __name__ == "__main__":
  absltest.main()
