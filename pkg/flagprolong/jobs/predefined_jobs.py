"""
Predefiniowane zadania dla flagprolong.

Każde zadanie zawiera:
- Nazwę i opis
- Tagi
- Kompletną konfigurację JobSpec (słownik JSON)
"""

from typing import Any, Dict, List

from pydantic import ValidationError

from flagprolong.models.job import JobSpec

PREDEFINED_JOBS: Dict[str, Dict[str, Any]] = {
    "ode_tower_3": {
        "name": "ODE tower, n = 3",
        "description": "Curves in a projective plane of flags: u(Q^3, u^F(delta)) is sp(4)",
        "tags": ["prolong", "flag", "finite"],
        "config": {
            "command": "prolong",
            "algebra": {"commutative": 3},
            "g0": {"flag_prolongation": {"delta_rp": [-3, -1]}},
        },
    },
    "ode_tower_5": {
        "name": "ODE tower, n = 5",
        "description": "Same construction in dimension 5: the first prolongation already vanishes",
        "tags": ["prolong", "flag", "finite"],
        "config": {
            "command": "prolong",
            "algebra": {"commutative": 5},
            "g0": {"flag_prolongation": {"delta_rp": [-5, -1]}},
        },
    },
    "infinite_gl2": {
        "name": "Infinite type gl(2)",
        "description": "Q^2 with the full gl(2): components of every degree, stopped by the cap",
        "tags": ["prolong", "infinite"],
        "config": {
            "command": "prolong",
            "algebra": {"commutative": 2},
            "g0": "full",
            "max_degree": 6,
            "require_finite": True,
        },
    },
    "rank2_tau2": {
        "name": "Rank 2 tower on heis(5)",
        "description": "Heisenberg symbol with g0 = u^F(tau_2): the split real form of G2",
        "tags": ["prolong", "flag", "contact", "finite"],
        "config": {
            "command": "prolong",
            "algebra": {"heisenberg": 5},
            "g0": {"flag_prolongation": {"tau_m": 2}, "ambient": "csp"},
        },
    },
    "g2_free": {
        "name": "G2 from free(2,3)",
        "description": "All degree-0 derivations of the free 3-step algebra on two generators",
        "tags": ["prolong", "finite", "cross-check"],
        "config": {
            "command": "prolong",
            "algebra": {"free": [2, 3]},
            "g0": "full",
        },
    },
    "flag_tau2": {
        "name": "Flag prolongation of tau_2",
        "description": "u^F(tau_2) inside gr csp(4): an irreducible gl(2)",
        "tags": ["flag", "contact"],
        "config": {
            "command": "flag-prolong",
            "symbol": {"tau_m": 2},
            "ambient": "csp",
        },
    },
    "param_tau1_tau1": {
        "name": "Parameterized tau_1 + tau_1",
        "description": "Degree-0 centralizer in sp is so(2, 0)",
        "tags": ["flag", "parameterized"],
        "config": {
            "command": "flag-prolong-param",
            "symbol": {"sum": [{"tau_m": 1}, {"tau_m": 1}]},
            "ambient": "sp",
        },
    },
    "param_tau1": {
        "name": "Parameterized tau_1",
        "description": "A single tau_1 has a trivial degree-0 centralizer in sp",
        "tags": ["flag", "parameterized"],
        "config": {
            "command": "flag-prolong-param",
            "symbol": {"tau_m": 1},
            "ambient": "sp",
        },
    },
    "param_tau1_minus_tau1": {
        "name": "Parameterized tau_1 + (-tau_1)",
        "description": "Degree-0 centralizer in sp is so(1, 1)",
        "tags": ["flag", "parameterized"],
        "config": {
            "command": "flag-prolong-param",
            "symbol": {"sum": [{"tau_m": 1}, {"tau_m": {"m": 1, "sign": -1}}]},
            "ambient": "sp",
        },
    },
    "riemannian_tau1_tau1": {
        "name": "Pair (Q^4, u^F,par) for tau_1 + tau_1",
        "description": "so(2) acting on Q^4 has no first prolongation, as for a Riemannian metric",
        "tags": ["prolong", "flag", "parameterized", "finite"],
        "config": {
            "command": "prolong",
            "algebra": {"commutative": 4},
            "g0": {
                "flag_prolongation": {"sum": [{"tau_m": 1}, {"tau_m": 1}]},
                "parameterized": True,
            },
        },
    },
    "riemannian_mixed": {
        "name": "Pair (Q^8, u^F,par) for tau_2 + tau_1 + (-tau_1)",
        "description": "so(1, 1) from the tau_1 copies; the first prolongation still vanishes",
        "tags": ["prolong", "flag", "parameterized", "finite"],
        "config": {
            "command": "prolong",
            "algebra": {"commutative": 8},
            "g0": {
                "flag_prolongation": {
                    "sum": [{"tau_m": 2}, {"tau_m": 1}, {"tau_m": {"m": 1, "sign": -1}}]
                },
                "parameterized": True,
            },
        },
    },
    "contact_distribution": {
        "name": "Contact distribution in Q^3",
        "description": "span(d/dx1, d/dx2 + x1 d/dx3); its symbol is heis(3)",
        "tags": ["distribution", "symbol", "contact"],
        "config": {
            "command": "symbol",
            "distribution": {
                "n": 3,
                "fields": [{"dx1": 1}, {"dx2": 1, "dx3": "x1"}],
                "name": "contact",
            },
            "point": [0, 0, 0],
        },
    },
    "distribution_235": {
        "name": "(2,3,5) distribution",
        "description": "Polynomial model with growth vector (2,3,5) and symbol free(2,3)",
        "tags": ["distribution", "symbol", "g2"],
        "config": {
            "command": "symbol",
            "distribution": {
                "n": 5,
                "fields": [
                    {"dx1": 1},
                    {"dx2": 1, "dx3": "x1", "dx4": "x1^2/2", "dx5": "x3"},
                ],
                "name": "2-3-5",
            },
            "point": [0, 0, 0, 0, 0],
        },
    },
}


def get_predefined_jobs() -> Dict[str, Dict[str, Any]]:
    """
    Zwróć listę dostępnych zadań (tylko metadane)

    Returns:
        Dict with job keys and their metadata (name, description, tags)
    """
    return {
        key: {
            "name": job["name"],
            "description": job["description"],
            "tags": job["tags"],
        }
        for key, job in PREDEFINED_JOBS.items()
    }


def get_job_config(job_key: str) -> Dict[str, Any]:
    """
    Pobierz pełną konfigurację zadania

    Raises:
        ValueError: If job_key not found
    """
    if job_key not in PREDEFINED_JOBS:
        available = list(PREDEFINED_JOBS.keys())
        raise ValueError(f"Unknown job: {job_key}. Available: {available}")

    return dict(PREDEFINED_JOBS[job_key]["config"])


def get_job_metadata(job_key: str) -> Dict[str, Any]:
    if job_key not in PREDEFINED_JOBS:
        raise ValueError(f"Unknown job: {job_key}")

    job = PREDEFINED_JOBS[job_key]
    return {"name": job["name"], "description": job["description"], "tags": job["tags"]}


def list_job_keys() -> List[str]:
    """Zwróć listę wszystkich kluczy zadań"""
    return list(PREDEFINED_JOBS.keys())


def validate_job_config(config: Dict[str, Any]) -> bool:
    """True when the configuration is a valid JobSpec."""
    try:
        JobSpec.model_validate(config)
        return True
    except (ValidationError, TypeError):
        return False


__all__ = [
    "PREDEFINED_JOBS",
    "get_predefined_jobs",
    "get_job_config",
    "get_job_metadata",
    "list_job_keys",
    "validate_job_config",
]
