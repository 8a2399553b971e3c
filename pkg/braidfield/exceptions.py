# Copyright 2025-2026 AstroLab Software
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Exceptions raised along the braid to polynomial pipeline"""


class BraidFieldError(Exception):
    """Base class. `stage` names the pipeline stage that failed."""

    stage = "pipeline"


# input
class InputError(BraidFieldError):
    stage = "input"


class MalformedWord(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class TrivialNeedsStrands(InputError):
    pass


class ConfigError(InputError):
    pass


class MalformedPolynomial(InputError):
    pass


# interpolation
class InterpolationError(BraidFieldError):
    stage = "interpolation"


class EmptyData(InterpolationError):
    pass


class DuplicateNode(InterpolationError):
    pass


class SingularAlpha(InterpolationError):
    pass


class SymmetryViolation(InterpolationError):
    pass


# crossings
class CrossingError(BraidFieldError):
    stage = "crossings"


class BoundaryCrossing(CrossingError):
    pass


class DegenerateCrossing(CrossingError):
    """Two crossings give one node of G conflicting values.

    Re-running with a perturbed scan grid usually separates them.
    """


# expansion
class CancellationFailure(BraidFieldError):
    """A fractional power of e^{it} survived the product expansion"""

    stage = "expansion"

    def __init__(self, message, exponent=None):
        super().__init__(message)
        self.exponent = exponent


# verification
class VerificationError(BraidFieldError):
    stage = "verification"


class RootSolverFailure(VerificationError):
    pass


class IncreaseSamples(VerificationError):
    pass


class DeltaSearchFailure(VerificationError):
    pass


class VerificationFailure(VerificationError):
    """Raised when no amplitude passes the gates; carries the last report"""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# projection
class IntegerizeFailure(BraidFieldError):
    stage = "projection"
