from typing import Any, Optional

from pydantic import BaseModel, Field


class ErrorResponse(BaseModel):
    message: str = Field(description="Human-readable error message")
    code: Optional[int] = Field(default=None, description="Process exit code for this error")
    details: Optional[Any] = Field(default=None, description="Structured context, e.g. the offending field")

    model_config = {
        "json_schema_extra": {
            "examples": [
                {"message": "algorithm 'gg' needs candidate servers", "code": 2},
                {"message": "clients.0: coordinates must be finite", "code": 3, "details": {"field": "clients.0"}},
                {"message": "oracle-line supports at most 12 clients", "code": 4},
            ]
        }
    }


class DiskCoverError(Exception):
    """Base of every expected failure; carries the CLI exit code."""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(message=self.message, code=self.exit_code, details=self.details)


class UsageError(DiskCoverError):
    exit_code = 2


class ParameterError(UsageError):
    pass


class PreconditionError(UsageError):
    pass


class SchemaError(DiskCoverError):
    exit_code = 3


class SizeLimitError(DiskCoverError):
    exit_code = 4
