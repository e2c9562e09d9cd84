from flagprolong.jobs.predefined_jobs import (
    PREDEFINED_JOBS,
    get_job_config,
    get_job_metadata,
    get_predefined_jobs,
    list_job_keys,
    validate_job_config,
)

__all__ = [
    "PREDEFINED_JOBS",
    "get_predefined_jobs",
    "get_job_config",
    "get_job_metadata",
    "list_job_keys",
    "validate_job_config",
]
