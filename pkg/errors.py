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

"""Exception hierarchy shared by all topogen modules."""

from typing import Any


class TopogenError(Exception):
  """Base class for every error raised by topogen."""

  exit_code = 1

  def to_diagnostic(self) -> dict[str, Any]:
    """Return a machine-readable description of the error."""
    return {"error": type(self).__name__, "message": str(self)}


class StructuralError(TopogenError):
  """Input does not describe a well-formed object.

  Raised for unknown states, digits outside the alphabet and malformed
  JSON documents. Axiom violations are not structural errors.
  """


class UsageError(TopogenError):
  """An operation was called with arguments it cannot accept."""

  exit_code = 2


class PreconditionError(TopogenError):
  """A documented precondition of an operation does not hold."""

  def __init__(self, message: str, *, state: str, digit: int):
    """Initialize PreconditionError.

    Args:
        message: Human-readable description.
        state: The state at which the precondition fails.
        digit: The digit that is missing at that state.

    """
    super().__init__(message)
    self.state = state
    self.digit = digit

  def to_diagnostic(self) -> dict[str, Any]:
    """Return a machine-readable description of the error."""
    diagnostic = super().to_diagnostic()
    diagnostic.update(state=self.state, digit=self.digit)
    return diagnostic


class ClassBoundExceeded(TopogenError):
  """An equivalence class or tuple arity grew past the class bound.

  Signals that the finite-class assumption may fail for the automaton.
  `partial` carries whatever was computed before the bound was hit.
  """

  def __init__(self, message: str, *, bound: int, partial: Any = None):
    """Initialize ClassBoundExceeded."""
    super().__init__(message)
    self.bound = bound
    self.partial = partial

  def to_diagnostic(self) -> dict[str, Any]:
    """Return a machine-readable description of the error."""
    diagnostic = super().to_diagnostic()
    diagnostic["bound"] = self.bound
    return diagnostic


class GuardExceeded(TopogenError):
  """A combinatorial size guard refused to start or finish a computation."""

  def __init__(self, message: str, *, estimate: int, guard: int):
    """Initialize GuardExceeded.

    Args:
        message: Human-readable description.
        estimate: Estimated size of the refused computation.
        guard: The configured limit.

    """
    super().__init__(message)
    self.estimate = estimate
    self.guard = guard

  def to_diagnostic(self) -> dict[str, Any]:
    """Return a machine-readable description of the error."""
    diagnostic = super().to_diagnostic()
    diagnostic.update(estimate=self.estimate, guard=self.guard)
    return diagnostic


class NotFiniteType(GuardExceeded):
  """The neighbor-map recursion did not close within the state guard."""
