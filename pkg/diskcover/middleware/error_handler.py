import sys

from pydantic import ValidationError

from diskcover.models.common import DiskCoverError, ErrorResponse, SchemaError


def _emit(response: ErrorResponse) -> None:
    sys.stderr.write('{"error": ' + response.model_dump_json(exclude_none=True) + "}\n")


def register_error_handlers(app, logger):
    @app.exception_handler(DiskCoverError)
    def domain_error_handler(exc: DiskCoverError) -> int:
        logger.warning("command_error", code=exc.exit_code, error=exc.message, kind=type(exc).__name__)
        _emit(exc.to_response())
        return exc.exit_code

    @app.exception_handler(ValidationError)
    def validation_error_handler(exc: ValidationError) -> int:
        errors = exc.errors()
        field = ".".join(str(part) for part in errors[0].get("loc", ())) if errors else ""
        logger.warning("schema_error", field=field, errors=len(errors))
        message = f"{field}: {errors[0]['msg']}" if errors else "Validation error"
        _emit(ErrorResponse(message=message, code=SchemaError.exit_code, details={"field": field}))
        return SchemaError.exit_code

    @app.exception_handler(Exception)
    def unhandled_exception_handler(exc: Exception) -> int:
        logger.error("unhandled_exception", error=str(exc), kind=type(exc).__name__)
        _emit(ErrorResponse(message="Internal error", code=1))
        return 1
