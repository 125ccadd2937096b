"""JSON Schema validation for dicke-sacs run configuration.

Provides schema definition and validation logic with clear error messages for
configuration validation.
"""

import copy
from typing import Any, Dict, List, Tuple

import jsonschema
from jsonschema import Draft7Validator


def _positive(description: str) -> Dict[str, Any]:
    return {"type": "number", "exclusiveMinimum": 0, "description": description}


def _count(description: str, minimum: int = 1) -> Dict[str, Any]:
    return {"type": "integer", "minimum": minimum, "description": description}


class ConfigSchema:
    """Configuration schema validator using JSON Schema Draft 7.

    Validates configuration dictionaries against JSON schema, followed by
    semantic checks the schema cannot express (ordered ranges, a non-empty
    coupling grid).

    Example:
        >>> is_valid, errors = ConfigSchema.validate_config(config_dict)
        >>> if not is_valid:
        >>>     for error in errors:
        >>>         print(error)
    """

    SURFACES = ["mean_field", "sacs_even", "sacs_odd", "exact"]
    SECTORS = ["even", "odd"]

    @staticmethod
    def get_schema() -> Dict[str, Any]:
        """Get JSON Schema Draft 7 for configuration validation.

        Returns:
            JSON Schema dictionary defining all configuration sections,
            types, and value constraints.
        """
        return {
            "$schema": "http://json-schema.org/draft-07/schema#",
            "title": "dicke-sacs run configuration",
            "type": "object",
            "properties": {
                "model": {
                    "type": "object",
                    "description": "Physical parameters and coupling grid",
                    "properties": {
                        "omega_a": _positive("Atomic splitting"),
                        "n_atoms": _count("Atom number N"),
                        "n_atoms_list": {
                            "type": "array",
                            "items": _count("Atom number N"),
                            "description": "Atom numbers of a critical-coupling table"
                        },
                        "gamma": {"type": "number", "minimum": 0, "description": "Coupling"},
                        "gamma_lo": {"type": "number", "minimum": 0},
                        "gamma_hi": {"type": "number", "minimum": 0},
                        "gamma_step": _positive("Sweep step")
                    },
                    "additionalProperties": False
                },
                "variational": {
                    "type": "object",
                    "properties": {
                        "surface": {"type": "string", "enum": ConfigSchema.SURFACES},
                        "sector": {"type": "string", "enum": ConfigSchema.SECTORS}
                    },
                    "additionalProperties": False
                },
                "search": {
                    "type": "object",
                    "properties": {
                        "grid_q": _count("Starts along q"),
                        "grid_theta": _count("Starts along theta"),
                        "q_max_factor": _positive("q range in units of sqrt(N) gamma"),
                        "max_iterations": _count("Newton iteration cap"),
                        "dedup_tol": _positive("Merge radius of minima"),
                        "fd_step": _positive("Hessian difference step")
                    },
                    "additionalProperties": False
                },
                "tolerances": {
                    "type": "object",
                    "properties": {
                        "grad": _positive("Gradient norm of a minimum"),
                        "bisect": _positive("Final bisection bracket"),
                        "eig": _positive("Eigenpair residual"),
                        "conv": _positive("Cutoff convergence")
                    },
                    "additionalProperties": False
                },
                "oracle": {
                    "type": "object",
                    "properties": {
                        "nu_max": {"type": ["integer", "null"], "minimum": 1},
                        "nu_cap": _count("Cutoff cap"),
                        "fidelity": {"type": "boolean"},
                        "fidelity_step": {"type": "number", "exclusiveMinimum": 0,
                                          "maximum": 1e-2},
                        "overlap": {"type": "boolean"}
                    },
                    "additionalProperties": False
                },
                "grid": {
                    "type": "object",
                    "properties": {
                        "q_min": {"type": ["number", "null"]},
                        "q_max": {"type": ["number", "null"]},
                        "theta_min": {"type": "number"},
                        "theta_max": {"type": "number"},
                        "q_points": _count("Grid columns"),
                        "theta_points": _count("Grid rows"),
                        "section_samples": _count("Samples of the two-minima section", 2)
                    },
                    "additionalProperties": False
                },
                "validation": {
                    "type": "object",
                    "properties": {
                        "gradient_samples": _count("Gradient check points"),
                        "embedding_samples": _count("Embedding check points"),
                        "fd_tol": _positive("Gradient check tolerance"),
                        "embed_tol": _positive("Embedding check tolerance"),
                        "seed": _count("Sample seed", 0)
                    },
                    "additionalProperties": False
                },
                "reporting": {
                    "type": "object",
                    "properties": {
                        "format": {"type": "string", "enum": ["csv", "json"]},
                        "output_path": {"type": ["string", "null"], "minLength": 1}
                    },
                    "additionalProperties": False
                },
                "logging": {
                    "type": "object",
                    "properties": {
                        "enabled": {"type": "boolean"},
                        "level": {"type": "string",
                                  "enum": ["DEBUG", "INFO", "WARNING", "ERROR"]},
                        "log_to_file": {"type": "boolean"},
                        "log_to_console": {"type": "boolean"},
                        "log_file_path": {"type": ["string", "null"]}
                    },
                    "additionalProperties": False
                },
                "parallel": {
                    "type": "object",
                    "properties": {
                        "enabled": {"type": "boolean"},
                        "max_workers": {"type": "integer", "minimum": 1, "maximum": 64}
                    },
                    "additionalProperties": False
                }
            },
            "additionalProperties": False
        }

    @staticmethod
    def validate_config(config: Dict[str, Any], strict: bool = True) -> Tuple[bool, List[str]]:
        """Validate configuration dictionary against schema.

        Args:
            config: Configuration dictionary to validate.
            strict: If True, reject unknown fields.

        Returns:
            Tuple of (is_valid, error_messages).
        """
        schema = ConfigSchema.get_schema()
        if not strict:
            schema = ConfigSchema._make_permissive(schema)

        validator = Draft7Validator(schema)
        errors = [ConfigSchema._format_error(error)
                  for error in sorted(validator.iter_errors(config), key=lambda e: list(e.path))]
        if not errors:
            errors.extend(ConfigSchema._custom_validation(config))
        return len(errors) == 0, errors

    @staticmethod
    def _make_permissive(schema: Dict[str, Any]) -> Dict[str, Any]:
        """Copy of the schema without additionalProperties restrictions."""
        permissive_schema = copy.deepcopy(schema)

        def remove_additional_properties(obj):
            if isinstance(obj, dict):
                obj.pop("additionalProperties", None)
                for value in obj.values():
                    remove_additional_properties(value)

        remove_additional_properties(permissive_schema)
        return permissive_schema

    @staticmethod
    def _format_error(error: jsonschema.exceptions.ValidationError) -> str:
        """Format validation error with section, field and expected value.

        Example:
            "Section 'tolerances', field 'grad': Value must be > 0, got -1.0"
        """
        path_parts = list(error.path)
        if len(path_parts) == 0:
            section, field = "root", "configuration"
        elif len(path_parts) == 1:
            section, field = path_parts[0], "section"
        else:
            section = path_parts[0]
            field = ".".join(str(p) for p in path_parts[1:])

        if error.validator == "type":
            return (f"Section '{section}', field '{field}': Expected type "
                    f"{error.validator_value}, got {type(error.instance).__name__} "
                    f"(value: {error.instance})")
        elif error.validator == "enum":
            return (f"Section '{section}', field '{field}': Expected one of "
                    f"{error.validator_value}, got {error.instance}")
        elif error.validator == "minimum":
            return (f"Section '{section}', field '{field}': Value must be >= "
                    f"{error.validator_value}, got {error.instance}")
        elif error.validator == "exclusiveMinimum":
            return (f"Section '{section}', field '{field}': Value must be > "
                    f"{error.validator_value}, got {error.instance}")
        elif error.validator == "maximum":
            return (f"Section '{section}', field '{field}': Value must be <= "
                    f"{error.validator_value}, got {error.instance}")
        elif error.validator == "additionalProperties":
            extra = sorted(set(error.instance) - set(error.schema.get('properties', {})))
            return f"Section '{section}': Unknown fields {extra} not allowed"
        return f"Section '{section}', field '{field}': {error.message}"

    @staticmethod
    def _custom_validation(config: Dict[str, Any]) -> List[str]:
        """Semantic checks beyond the schema.

        Args:
            config: Schema-valid configuration dictionary.

        Returns:
            List of validation error messages.
        """
        errors = []
        model = config.get("model", {})
        lo, hi = model.get("gamma_lo"), model.get("gamma_hi")
        if lo is not None and hi is not None and lo > hi:
            errors.append(f"Section 'model': gamma range is empty (gamma_lo={lo} > gamma_hi={hi})")

        grid = config.get("grid", {})
        q_min, q_max = grid.get("q_min"), grid.get("q_max")
        if q_min is not None and q_max is not None and q_min > q_max:
            errors.append(f"Section 'grid': q range is empty (q_min={q_min} > q_max={q_max})")
        t_min, t_max = grid.get("theta_min"), grid.get("theta_max")
        if t_min is not None and t_max is not None and t_min > t_max:
            errors.append(f"Section 'grid': theta range is empty "
                          f"(theta_min={t_min} > theta_max={t_max})")

        variational = config.get("variational", {})
        if variational.get("surface") == "sacs_even" and variational.get("sector") == "odd":
            errors.append("Section 'variational': surface sacs_even contradicts sector odd")
        if variational.get("surface") == "sacs_odd" and variational.get("sector") == "even":
            errors.append("Section 'variational': surface sacs_odd contradicts sector even")
        return errors
