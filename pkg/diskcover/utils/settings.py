from functools import lru_cache
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="DISKCOVER_",
        case_sensitive=False,
    )

    app_name: str = Field(default="diskcover")
    log_level: str = Field(default="WARNING")
    log_json: bool = Field(default=True, description="Render log lines as JSON (console renderer otherwise)")

    # Numerics
    default_epsilon: float = Field(default=0.1, gt=0, description="Approximation parameter when --epsilon is omitted")
    seed: int = Field(default=0, description="Default seed for generators and randomized tie-breaks")

    # Oracle size limits
    oracle_line_max_clients: int = Field(default=12, ge=1)
    oracle_1d_max_assignments: int = Field(default=2_000_000, ge=1)
    mcct_max_grid_points: int = Field(default=40, ge=1)
    mcct_max_disks: int = Field(default=5, ge=1)
    mcct_max_clients: int = Field(default=8, ge=1)
    held_karp_max_cities: int = Field(default=12, ge=1)

    # Harness
    sweep_resolution: float = Field(default=0.01, gt=0, description="Angle/offset step of the line sweep oracle")
    bench_workers: int = Field(default=1, ge=1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()  # type: ignore[call-arg]
