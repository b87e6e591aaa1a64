#   Copyright 2024 The tannakit Authors
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


class TannakitError(Exception):
    exit_code = 1


class InputError(TannakitError):
    """Malformed or inconsistent input; the CLI exits with 1."""
    exit_code = 1


class MathematicalFailure(TannakitError):
    """The input is well formed but fails a required mathematical property; the CLI exits with 2."""
    exit_code = 2


class ScalarFormatError(InputError):
    pass


class FieldError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class RankDeficientError(MathematicalFailure):
    pass


class NotFiniteTypeError(MathematicalFailure):
    pass


class NotASRegularError(MathematicalFailure):
    pass


class InvariantViolationError(MathematicalFailure):
    pass


class InverseLetterError(InputError):
    pass


class NonGradedError(InputError):
    pass


class ShapeMismatchError(InputError):
    pass


class EliminationError(MathematicalFailure):
    pass


class SnakeIdentityError(MathematicalFailure):
    pass


class VerificationInconclusiveError(MathematicalFailure):
    pass


class SingularFormError(InputError):
    pass


class UnsupportedFieldError(InputError):
    pass


class SpecError(InputError):

    def __init__(self, message: str, field: str = "", line: int = 0):
        self.field = field
        self.line = line
        location = []
        if field:
            location.append(f"field '{field}'")
        if line:
            location.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)
