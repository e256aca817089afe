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

"""Eventually periodic addresses u·w^∞ and their text form."""

from collections.abc import Iterable, Sequence
import dataclasses
import functools
import re

from errors import StructuralError, UsageError

# Digits above 9 are written as lowercase letters.
_SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"
_TEXT_FORM = re.compile(r"^([0-9a-z]*)\(([0-9a-z]+)\)$")

Word = tuple[int, ...]


def digit_symbol(digit: int) -> str:
  """Return the one-character text symbol of a digit."""
  if not 0 <= digit < len(_SYMBOLS):
    raise UsageError(f"Digit {digit} has no text symbol")
  return _SYMBOLS[digit]


def word_text(word: Iterable[int]) -> str:
  """Render a word as a string of digit symbols."""
  return "".join(digit_symbol(d) for d in word)


def parse_word(text: str) -> Word:
  """Parse a string of digit symbols into a word."""
  try:
    return tuple(_SYMBOLS.index(ch) for ch in text)
  except ValueError as e:
    raise StructuralError(f"Invalid word {text!r}") from e


def _primitive_root(period: Word) -> Word:
  n = len(period)
  for p in range(1, n + 1):
    if n % p == 0 and period[:p] * (n // p) == period:
      return period[:p]
  return period


@functools.total_ordering
@dataclasses.dataclass(frozen=True)
class PreperiodicAddress:
  """The infinite sequence preperiod·period·period·...

  Instances are always in canonical form: the period is primitive and the
  preperiod is as short as possible. Two instances are equal exactly when
  they denote the same sequence.
  """

  preperiod: Word
  period: Word

  def __post_init__(self) -> None:
    """Validate and canonicalize the fields."""
    if not self.period:
      raise StructuralError("Period of an address must be nonempty")
    preperiod = tuple(self.preperiod)
    period = _primitive_root(tuple(self.period))
    while preperiod and preperiod[-1] == period[-1]:
      period = (preperiod[-1],) + period[:-1]
      preperiod = preperiod[:-1]
    object.__setattr__(self, "preperiod", preperiod)
    object.__setattr__(self, "period", period)

  @classmethod
  def parse(cls, text: str) -> "PreperiodicAddress":
    """Parse the text form, e.g. "011(10)" for 011 followed by 10 forever.

    Args:
        text: Address in text form.

    Returns:
        The canonical address.

    Raises:
        StructuralError: If the text is not of the form "u(w)".

    """
    match = _TEXT_FORM.match(text.strip())
    if match is None:
      raise StructuralError(f"Invalid address {text!r}, expected 'u(w)'")
    return cls(parse_word(match.group(1)), parse_word(match.group(2)))

  @classmethod
  def periodic(cls, period: Sequence[int]) -> "PreperiodicAddress":
    """Return the purely periodic address w^∞."""
    return cls((), tuple(period))

  def __str__(self) -> str:
    """Return the text form."""
    return f"{word_text(self.preperiod)}({word_text(self.period)})"

  def __lt__(self, other: "PreperiodicAddress") -> bool:
    """Order by preperiod, then period, as digit tuples."""
    return self.sort_key() < other.sort_key()

  def sort_key(self) -> tuple[Word, Word]:
    """Return a deterministic ordering key."""
    return (self.preperiod, self.period)

  @property
  def lasso_size(self) -> int:
    """Number of distinct positions of the sequence's lasso."""
    return len(self.preperiod) + len(self.period)

  @property
  def is_periodic(self) -> bool:
    """True when the sequence is purely periodic."""
    return not self.preperiod

  def next_position(self, position: int) -> int:
    """Return the lasso position following `position`."""
    position += 1
    if position == self.lasso_size:
      return len(self.preperiod)
    return position

  def digit_at(self, position: int) -> int:
    """Return the digit stored at a lasso position."""
    if position < len(self.preperiod):
      return self.preperiod[position]
    return self.period[position - len(self.preperiod)]

  def digit(self, index: int) -> int:
    """Return the digit at an arbitrary index of the infinite sequence."""
    if index < len(self.preperiod):
      return self.preperiod[index]
    return self.period[(index - len(self.preperiod)) % len(self.period)]

  def prefix(self, n: int) -> Word:
    """Return the first n digits."""
    return tuple(self.digit(i) for i in range(n))

  def prepend(self, word: Sequence[int]) -> "PreperiodicAddress":
    """Return word·self (the shift maps applied as prepending)."""
    return PreperiodicAddress(tuple(word) + self.preperiod, self.period)

  def shift(self, n: int = 1) -> "PreperiodicAddress":
    """Drop the first n digits."""
    if n <= len(self.preperiod):
      return PreperiodicAddress(self.preperiod[n:], self.period)
    offset = (n - len(self.preperiod)) % len(self.period)
    return PreperiodicAddress((), self.period[offset:] + self.period[:offset])

